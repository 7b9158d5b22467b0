"""Labeled Petri nets with declared bounded/unbounded places.

Tokens in the bounded places form the finite control; every unbounded
place behaves as one blind counter.  A net transition may move at most
one token per unbounded place, so its per-counter effect is -1, 0 or +1
and the net translates directly into a blind multicounter automaton.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .automaton import BlindCounterAutomaton, Transition
from .semantics import ExplorationCaps, OracleStatus, OracleVerdict, _tarjan
from .words import LassoWord

Marking = tuple[tuple[str, int], ...]


class NetFormatError(ValueError):
    """Raised on malformed net files."""


class TranslationError(ValueError):
    """Raised when a net cannot be rendered as a counter automaton."""


class SimulationError(ValueError):
    """Raised on bounded-place overflow or a runaway silent closure."""


@dataclass(frozen=True)
class Place:
    name: str
    bound: int | None  # None means unbounded

    @property
    def bounded(self) -> bool:
        return self.bound is not None


@dataclass(frozen=True)
class NetTransition:
    name: str
    label: str | None  # None is a silent transition
    inputs: tuple[tuple[str, int], ...]
    outputs: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(sorted(self.inputs)))
        object.__setattr__(self, "outputs", tuple(sorted(self.outputs)))

    def input_count(self, place: str) -> int:
        return sum(c for p, c in self.inputs if p == place)

    def output_count(self, place: str) -> int:
        return sum(c for p, c in self.outputs if p == place)


@dataclass(frozen=True)
class LabeledPetriNet:
    places: tuple[Place, ...]
    transitions: tuple[NetTransition, ...]
    initial_marking: tuple[tuple[str, int], ...]
    accepting_control: tuple[Marking, ...]  # markings over the bounded places

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "initial_marking", tuple(sorted(self.initial_marking)))
        object.__setattr__(self, "accepting_control", tuple(self.accepting_control))

    def place(self, name: str) -> Place:
        for p in self.places:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def bounded_places(self) -> tuple[Place, ...]:
        return tuple(sorted((p for p in self.places if p.bounded), key=lambda p: p.name))

    @property
    def unbounded_places(self) -> tuple[Place, ...]:
        return tuple(sorted((p for p in self.places if not p.bounded), key=lambda p: p.name))

    def initial_tokens(self, place: str) -> int:
        return dict(self.initial_marking).get(place, 0)


def _check_net(net: LabeledPetriNet) -> None:
    names = [p.name for p in net.places]
    if len(set(names)) != len(names):
        raise TranslationError("duplicate place names")
    known = set(names)
    for t in net.transitions:
        for p, c in t.inputs + t.outputs:
            if p not in known:
                raise TranslationError(f"transition {t.name!r} touches unknown place {p!r}")
            if c < 1:
                raise TranslationError(f"transition {t.name!r} has a non-positive arc on {p!r}")
    for p, c in net.initial_marking:
        if p not in known:
            raise TranslationError(f"initial marking names unknown place {p!r}")
        bound = net.place(p).bound
        if bound is not None and c > bound:
            raise TranslationError(f"initial marking exceeds bound on {p!r}: {c} > {bound}")
    bounded = {p.name for p in net.bounded_places}
    for marking in net.accepting_control:
        for p, c in marking:
            if p not in bounded:
                raise TranslationError(f"accepting marking names non-bounded place {p!r}")
    for p in net.places:
        if p.bounded and p.bound < 0:
            raise TranslationError(f"negative bound on place {p.name!r}")
    for t in net.transitions:
        for p in net.unbounded_places:
            if t.input_count(p.name) > 1 or t.output_count(p.name) > 1:
                raise TranslationError(
                    f"transition {t.name!r} moves more than one token on unbounded place {p.name!r}")


def _control_name(marking: Marking) -> str:
    return "{" + ",".join(f"{p}={c}" for p, c in marking) + "}"


def _full_control(net: LabeledPetriNet, partial: Marking) -> Marking:
    values = dict(partial)
    return tuple((p.name, values.get(p.name, 0)) for p in net.bounded_places)


def translate(net: LabeledPetriNet) -> BlindCounterAutomaton:
    """The blind multicounter automaton with the same labeled behaviour.

    States are the reachable bounded-place markings (enabledness judged
    on bounded places only, which over-approximates reachability), one
    counter per unbounded place.  Firing an enabled transition from a
    reachable control marking past a declared bound is an error: the
    bound declaration was wrong.  Consuming from an unbounded place
    forces the guard-1 instance only (a token must be present); otherwise
    both guard instances are emitted to keep the automaton blind.
    Unbounded places must start empty, and silent transitions must not
    touch them, because counters start at zero and silent moves cannot
    change them.
    """
    _check_net(net)
    bounded = net.bounded_places
    counters = net.unbounded_places
    for p in counters:
        if net.initial_tokens(p.name) != 0:
            raise TranslationError(f"unbounded place {p.name!r} must start empty")
    for t in net.transitions:
        if t.label is None:
            for p in counters:
                if t.input_count(p.name) or t.output_count(p.name):
                    raise TranslationError(
                        f"silent transition {t.name!r} may not touch unbounded place {p.name!r}")

    # a net with no unbounded place still becomes a (one-counter, counter-unused) automaton
    k = max(len(counters), 1)
    initial_control: Marking = tuple((p.name, net.initial_tokens(p.name)) for p in bounded)
    states = {_control_name(initial_control)}
    transitions: list[Transition] = []
    frontier = deque([initial_control])
    explored = {initial_control}
    while frontier:
        marking = frontier.popleft()
        values = dict(marking)
        for t in sorted(net.transitions, key=lambda t: t.name):
            if any(values[p] < t.input_count(p) for p, _ in marking):
                continue
            after = []
            for p, v in marking:
                nv = v - t.input_count(p) + t.output_count(p)
                bound = net.place(p).bound
                if nv > bound:
                    raise TranslationError(
                        f"bounded place {p!r} overflows its bound {bound} when "
                        f"{t.name!r} fires from {_control_name(marking)}")
                after.append((p, nv))
            target_marking = tuple(after)
            if target_marking not in explored:
                explored.add(target_marking)
                states.add(_control_name(target_marking))
                frontier.append(target_marking)
            target = _control_name(target_marking)
            deltas = tuple(t.output_count(p.name) - t.input_count(p.name) for p in counters)
            options = [(1,) if t.input_count(p.name) == 1 else (0, 1) for p in counters]
            if not counters:
                deltas = (0,)
                options = [(0, 1)]
            for guards in itertools.product(*options):
                transitions.append(Transition(_control_name(marking), t.label, guards, target, deltas))

    alphabet = sorted({t.label for t in net.transitions if t.label is not None})
    accepting = {_control_name(_full_control(net, m)) for m in net.accepting_control} & states
    initial = _control_name(initial_control)
    return BlindCounterAutomaton(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        counter_count=k,
        transitions=tuple(transitions),
        initial_state=initial,
        accepting_states=frozenset(accepting),
    )


def _fire(net: LabeledPetriNet, marking: Marking, t: NetTransition) -> Marking | None:
    values = dict(marking)
    for p, c in t.inputs:
        if values.get(p, 0) < t.input_count(p):
            return None
    out = dict(values)
    for p in {p for p, _ in t.inputs} | {p for p, _ in t.outputs}:
        nv = values.get(p, 0) - t.input_count(p) + t.output_count(p)
        bound = net.place(p).bound
        if bound is not None and nv > bound:
            raise SimulationError(f"bounded place {p!r} overflows its bound {bound}")
        out[p] = nv
    return tuple(sorted(out.items()))


def _silent_closure(net: LabeledPetriNet, markings: set[Marking],
                    limit: int) -> set[Marking]:
    silent = [t for t in net.transitions if t.label is None]
    closure = set(markings)
    frontier = deque(markings)
    while frontier:
        m = frontier.popleft()
        for t in silent:
            nm = _fire(net, m, t)
            if nm is not None and nm not in closure:
                closure.add(nm)
                frontier.append(nm)
                if len(closure) > limit:
                    raise SimulationError("silent transitions generate unboundedly many markings")
    return closure


def _full_marking(net: LabeledPetriNet) -> Marking:
    values = dict(net.initial_marking)
    return tuple(sorted((p.name, values.get(p.name, 0)) for p in net.places))


def simulate_net(net: LabeledPetriNet, prefix: str, *,
                 closure_limit: int = 100_000) -> frozenset[Marking]:
    """Markings reachable after reading `prefix`, silent moves interleaved.

    `closure_limit` bounds each silent closure; token-producing silent
    cycles would otherwise never saturate and raise SimulationError.
    """
    _check_net(net)
    current = _silent_closure(net, {_full_marking(net)}, closure_limit)
    labeled: dict[str, list[NetTransition]] = {}
    for t in net.transitions:
        if t.label is not None:
            labeled.setdefault(t.label, []).append(t)
    for letter in prefix:
        nxt: set[Marking] = set()
        for m in current:
            for t in labeled.get(letter, ()):
                nm = _fire(net, m, t)
                if nm is not None:
                    nxt.add(nm)
        current = _silent_closure(net, nxt, closure_limit) if nxt else set()
        if not current:
            break
    return frozenset(current)


def net_oracle_accept(net: LabeledPetriNet, w: LassoWord, caps: ExplorationCaps) -> OracleVerdict:
    """Direct bounded acceptance search on the net itself.

    Configurations are (marking, lasso position); a configuration is
    accepting when its bounded-place restriction matches an accepting
    control marking.  Token counts on unbounded places are capped, with
    the same three-valued verdict as the automaton-level oracle.
    """
    _check_net(net)
    labels = {t.label for t in net.transitions if t.label is not None}
    stray = w.letters - labels
    if stray:
        raise ValueError(f"word uses letters no transition carries: {sorted(stray)}")
    bounded_names = [p.name for p in net.bounded_places]
    unbounded_names = [p.name for p in net.unbounded_places]
    accepting = {_full_control(net, m) for m in net.accepting_control}
    length = len(w.prefix) + len(w.period)

    def advance(pos: int) -> int:
        return pos + 1 if pos + 1 < length else len(w.prefix)

    counter_cap_hit = False
    silent = [t for t in net.transitions if t.label is None]
    labeled: dict[str, list[NetTransition]] = {}
    for t in net.transitions:
        if t.label is not None:
            labeled.setdefault(t.label, []).append(t)

    def successors(cfg):
        nonlocal counter_cap_hit
        marking, pos = cfg
        for t in silent + labeled.get(w.letter_at(pos), []):
            nm = _fire(net, marking, t)
            if nm is None:
                continue
            values = dict(nm)
            if any(values.get(p, 0) > caps.counter_cap for p in unbounded_names):
                counter_cap_hit = True
                continue
            yield (nm, pos if t.label is None else advance(pos))

    start = (_full_marking(net), 0)
    parent = {start: None}
    order = []
    edges = {}
    frontier = deque([start])
    depth = 0
    depth_cap_hit = False
    while frontier:
        if depth > caps.depth_cap:
            depth_cap_hit = True
            break
        nxt = deque()
        for cfg in frontier:
            order.append(cfg)
            adjacent = list(successors(cfg))
            edges[cfg] = adjacent
            for succ in adjacent:
                if succ not in parent:
                    parent[succ] = cfg
                    nxt.append(succ)
        frontier = nxt
        depth += 1

    def succ_explored(cfg):
        return [s for s in edges.get(cfg, ()) if s in edges]

    def is_accepting(cfg):
        marking, _ = cfg
        control = tuple((p, c) for p, c in marking if p in bounded_names)
        return control in accepting

    for scc in _tarjan(order, succ_explored):
        members = set(scc)
        has_edge = any(s in members for u in scc for s in succ_explored(u))
        if has_edge and any(is_accepting(c) for c in scc):
            return OracleVerdict(OracleStatus.ACCEPT, counter_cap_hit, depth_cap_hit, None)
    if depth_cap_hit:
        return OracleVerdict(OracleStatus.INCONCLUSIVE, counter_cap_hit, True, None)
    return OracleVerdict(OracleStatus.REJECT_WITHIN_CAPS, counter_cap_hit, False, None)


def parse_net(text: str) -> LabeledPetriNet:
    """Parse the line-oriented net file format.

    Grammar ('#' starts a comment):

        place NAME unbounded
        place NAME bounded B
        trans NAME LABEL in: p,q,... out: r,...      (eps for a silent label;
                                                      repeat a place for multiplicity;
                                                      either list may be empty)
        init p=n, q=m, ...                           (omitted places start empty)
        accept {p=n, q=m}; {..}; ...                 (bounded places only)
    """
    places: list[Place] = []
    transitions: list[NetTransition] = []
    initial: list[tuple[str, int]] = []
    accepting: list[Marking] = []
    seen_init = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        if kind == "place":
            if len(toks) == 3 and toks[2] == "unbounded":
                places.append(Place(toks[1], None))
            elif len(toks) == 4 and toks[2] == "bounded":
                places.append(Place(toks[1], int(toks[3])))
            else:
                raise NetFormatError(f"line {lineno}: expected `place NAME unbounded|bounded B`")
        elif kind == "trans":
            if len(toks) < 4 or "in:" not in toks or "out:" not in toks:
                raise NetFormatError(f"line {lineno}: expected `trans NAME LABEL in: ... out: ...`")
            name, label = toks[1], toks[2]
            i_in, i_out = toks.index("in:"), toks.index("out:")
            if i_in != 3 or i_out not in (4, 5):
                raise NetFormatError(f"line {lineno}: malformed trans record")

            def side(toks_slice):
                joined = "".join(toks_slice)
                if not joined:
                    return ()
                counts: dict[str, int] = {}
                for p in joined.split(","):
                    if p:
                        counts[p] = counts.get(p, 0) + 1
                return tuple(sorted(counts.items()))

            transitions.append(NetTransition(
                name,
                None if label == "eps" else label,
                side(toks[i_in + 1:i_out]),
                side(toks[i_out + 1:]),
            ))
        elif kind == "init":
            if seen_init:
                raise NetFormatError(f"line {lineno}: duplicate init record")
            seen_init = True
            body = line[len("init"):].strip()
            if body:
                for item in body.split(","):
                    if "=" not in item:
                        raise NetFormatError(f"line {lineno}: expected `p=n` items")
                    p, v = item.split("=")
                    initial.append((p.strip(), int(v)))
        elif kind == "accept":
            body = line[len("accept"):].strip()
            for chunk in body.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                if not (chunk.startswith("{") and chunk.endswith("}")):
                    raise NetFormatError(f"line {lineno}: accepting markings must be braced")
                inner = chunk[1:-1].strip()
                marking: list[tuple[str, int]] = []
                if inner:
                    for item in inner.split(","):
                        if "=" not in item:
                            raise NetFormatError(f"line {lineno}: expected `p=n` items")
                        p, v = item.split("=")
                        marking.append((p.strip(), int(v)))
                accepting.append(tuple(sorted(marking)))
        else:
            raise NetFormatError(f"line {lineno}: unknown record {kind!r}")
    net = LabeledPetriNet(tuple(places), tuple(transitions), tuple(initial), tuple(accepting))
    _check_net(net)
    return net
