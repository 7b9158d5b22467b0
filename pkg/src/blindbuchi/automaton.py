"""Blind multicounter Büchi automata: data model, validation, silent-move removal.

A transition carries one guard flag and one delta per counter.  From a
configuration with counter vector c, an instance fires iff for every
counter i:

    c[i] >= 1  requires  guard[i] == 1
    c[i] == 0  requires  guard[i] == 0 and delta[i] in {0, +1}

so a guard-0 instance fires exactly when its counter is empty and a
guard-1 instance exactly when it is not.  Blindness means a machine
cannot observe which case holds: every guard-0 instance must have a
guard-1 twin with the same delta.  A guard-1-only instance is permitted
by the definition and acts as a non-emptiness requirement.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

EPSILON_TOKEN = "eps"
REQUIRED_HEADERS = ("states", "alphabet", "counters", "initial", "accepting")


class InvalidAutomatonError(ValueError):
    """Raised when an operation requires a well-formed automaton."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"automaton is not well-formed: {lines}")


class AutomatonFormatError(ValueError):
    """Raised on malformed automaton files."""


@dataclass(frozen=True)
class Transition:
    source: str
    letter: str | None  # None is the silent letter
    guards: tuple[int, ...]
    target: str
    deltas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "guards", tuple(self.guards))
        object.__setattr__(self, "deltas", tuple(self.deltas))

    def sort_key(self):
        return (self.source, self.letter or "", self.guards, self.target, self.deltas)

    def describe(self) -> str:
        letter = EPSILON_TOKEN if self.letter is None else self.letter
        g = ",".join(str(x) for x in self.guards)
        d = ",".join(str(x) for x in self.deltas)
        return f"{self.source} {letter} {g} {self.target} {d}"


@dataclass(frozen=True)
class Configuration:
    state: str
    counters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counters", tuple(self.counters))
        if any(c < 0 for c in self.counters):
            raise ValueError(f"counters must be non-negative: {self.counters}")


@dataclass(frozen=True)
class BlindCounterAutomaton:
    states: frozenset[str]
    alphabet: frozenset[str]
    counter_count: int
    transitions: tuple[Transition, ...]
    initial_state: str
    accepting_states: frozenset[str]
    accepting_transitions: frozenset[Transition] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "accepting_states", frozenset(self.accepting_states))
        object.__setattr__(self, "accepting_transitions", frozenset(self.accepting_transitions))
        seen = set()
        unique = []
        for t in self.transitions:
            if t not in seen:
                seen.add(t)
                unique.append(t)
        object.__setattr__(self, "transitions", tuple(unique))

    @property
    def epsilon_transitions(self) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.letter is None)

    def initial_configuration(self) -> Configuration:
        return Configuration(self.initial_state, (0,) * self.counter_count)


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str
    transition: Transition | None = None


def validate(a: BlindCounterAutomaton) -> list[Violation]:
    """All well-formedness violations, deterministically ordered.

    An empty list means the automaton satisfies every structural
    invariant.  The result does not depend on transition order.
    """
    out: list[Violation] = []
    k = a.counter_count
    if k < 1:
        out.append(Violation("counter-count", f"counter count must be >= 1, got {k}"))
    if a.initial_state not in a.states:
        out.append(Violation("initial-state", f"initial state {a.initial_state!r} not among states"))
    for q in sorted(a.accepting_states - a.states):
        out.append(Violation("accepting-states", f"accepting state {q!r} not among states"))
    tset = set(a.transitions)
    for t in sorted(a.accepting_transitions - tset, key=Transition.sort_key):
        out.append(Violation("accepting-transitions", f"marked transition not present: {t.describe()}", t))

    for t in a.transitions:
        if t.source not in a.states or t.target not in a.states:
            out.append(Violation("endpoints", f"transition endpoint not among states: {t.describe()}", t))
        if t.letter is not None and t.letter not in a.alphabet:
            out.append(Violation("letter", f"transition letter {t.letter!r} not in alphabet: {t.describe()}", t))
        if len(t.guards) != k or len(t.deltas) != k:
            out.append(Violation("shape", f"guard/delta vectors must have length {k}: {t.describe()}", t))
            continue
        if any(g not in (0, 1) for g in t.guards) or any(d not in (-1, 0, 1) for d in t.deltas):
            out.append(Violation("shape", f"guards must be 0/1 and deltas -1/0/+1: {t.describe()}", t))
            continue
        for i in range(k):
            if t.guards[i] == 0 and t.deltas[i] not in (0, 1):
                out.append(Violation(
                    "zero-consistency",
                    f"guard 0 on counter {i} requires delta in {{0,+1}}: {t.describe()}", t))
            if t.guards[i] == 0:
                twin = replace(t, guards=t.guards[:i] + (1,) + t.guards[i + 1:])
                if twin not in tset:
                    out.append(Violation(
                        "blindness",
                        f"guard-0 transition lacks its guard-1 twin on counter {i}: {t.describe()}", t))
        if t.letter is None and any(d != 0 for d in t.deltas):
            out.append(Violation("epsilon-delta", f"silent transition must not modify counters: {t.describe()}", t))

    cycle = _epsilon_cycle(a)
    if cycle is not None:
        out.append(Violation("epsilon-cycle", "silent transitions form a cycle: " + " -> ".join(cycle)))

    def key(v: Violation):
        return (v.clause, v.transition.sort_key() if v.transition else ("",), v.message)

    return sorted(out, key=key)


def _epsilon_cycle(a: BlindCounterAutomaton) -> list[str] | None:
    """A state cycle among silent transitions, or None."""
    succ: dict[str, set[str]] = {}
    for t in a.transitions:
        if t.letter is None:
            succ.setdefault(t.source, set()).add(t.target)
    color: dict[str, int] = {}
    trail: list[str] = []

    def visit(q: str):
        color[q] = 1
        trail.append(q)
        for r in sorted(succ.get(q, ())):
            if color.get(r) == 1:
                return trail[trail.index(r):] + [r]
            if r not in color:
                found = visit(r)
                if found:
                    return found
        color[q] = 2
        trail.pop()
        return None

    for q in sorted(succ):
        if q not in color:
            found = visit(q)
            if found:
                return found
    return None


def require_valid(a: BlindCounterAutomaton) -> None:
    violations = validate(a)
    if violations:
        raise InvalidAutomatonError(violations)


def eliminate_epsilon(a: BlindCounterAutomaton) -> BlindCounterAutomaton:
    """An equivalent automaton without silent transitions.

    Each output transition is a silent path composed with one lettered
    transition at its end.  A guard vector is shared by every step of a
    firing composition (silent moves keep the counters fixed), so paths
    are enumerated per guard vector.  A composed transition is marked
    accepting when the states hidden inside it (everything after the
    composition's source) meet the accepting set, or when it inherits a
    mark; acceptance then reads "some accepting state is visited
    infinitely often, or some marked transition fires infinitely often".

    An input without silent transitions is returned unchanged.
    """
    require_valid(a)
    eps_by_source: dict[str, list[Transition]] = {}
    for t in a.transitions:
        if t.letter is None:
            eps_by_source.setdefault(t.source, []).append(t)
    if not eps_by_source:
        return a
    for ts in eps_by_source.values():
        ts.sort(key=Transition.sort_key)
    letters_by_source: dict[str, list[Transition]] = {}
    for t in a.transitions:
        if t.letter is not None:
            letters_by_source.setdefault(t.source, []).append(t)
    for ts in letters_by_source.values():
        ts.sort(key=Transition.sort_key)

    composed: dict[Transition, bool] = {}

    def emit(source: str, t: Transition, hidden_hit: bool):
        new = Transition(source, t.letter, t.guards, t.target, t.deltas)
        marked = hidden_hit or t in a.accepting_transitions
        composed[new] = composed.get(new, False) or marked

    def walk(origin: str, state: str, guard: tuple[int, ...] | None, hidden_hit: bool):
        for t in letters_by_source.get(state, ()):
            if guard is None or t.guards == guard:
                emit(origin, t, hidden_hit)
        for e in eps_by_source.get(state, ()):
            if guard is not None and e.guards != guard:
                continue
            walk(origin, e.target,
                 e.guards,
                 hidden_hit or e.target in a.accepting_states or e in a.accepting_transitions)

    for q in sorted(a.states):
        walk(q, q, None, False)

    transitions = tuple(sorted(composed, key=Transition.sort_key))
    marks = frozenset(t for t, m in composed.items() if m)
    return BlindCounterAutomaton(
        states=a.states,
        alphabet=a.alphabet,
        counter_count=a.counter_count,
        transitions=transitions,
        initial_state=a.initial_state,
        accepting_states=a.accepting_states,
        accepting_transitions=marks,
    )


def parse_automaton(text: str) -> BlindCounterAutomaton:
    """Parse the line-oriented automaton file format.

    Grammar (one record per line, '#' starts a comment):

        states: NAME NAME ...
        alphabet: LETTER LETTER ...
        counters: K
        initial: NAME
        accepting: NAME ...            (may be empty)
        SRC LETTER GUARDS TGT DELTAS [acc]

    GUARDS and DELTAS are comma-separated integers of length K; LETTER is
    a single alphabet symbol or `eps` for a silent transition; a trailing
    `acc` marks the transition accepting.  Every header is required
    exactly once and unknown headers are rejected.
    """
    headers: dict[str, str] = {}
    body: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if sep and " " not in head:
            name = head.strip()
            if name not in REQUIRED_HEADERS:
                raise AutomatonFormatError(f"line {lineno}: unknown field {name!r}")
            if name in headers:
                raise AutomatonFormatError(f"line {lineno}: duplicate field {name!r}")
            headers[name] = rest.strip()
        else:
            body.append((lineno, line.split()))

    missing = [h for h in REQUIRED_HEADERS if h not in headers]
    if missing:
        raise AutomatonFormatError(f"missing fields: {', '.join(missing)}")

    states = headers["states"].split()
    alphabet = headers["alphabet"].split()
    if EPSILON_TOKEN in alphabet:
        raise AutomatonFormatError(f"{EPSILON_TOKEN!r} is reserved and cannot be an alphabet letter")
    try:
        k = int(headers["counters"])
    except ValueError:
        raise AutomatonFormatError(f"counters must be an integer: {headers['counters']!r}") from None
    initial = headers["initial"]
    accepting = headers["accepting"].split()

    def vector(tok: str, lineno: int) -> tuple[int, ...]:
        try:
            return tuple(int(x) for x in tok.split(","))
        except ValueError:
            raise AutomatonFormatError(f"line {lineno}: bad integer vector {tok!r}") from None

    transitions: list[Transition] = []
    marks: list[Transition] = []
    for lineno, toks in body:
        if len(toks) not in (5, 6) or (len(toks) == 6 and toks[5] != "acc"):
            raise AutomatonFormatError(
                f"line {lineno}: expected `src letter guards target deltas [acc]`, got {' '.join(toks)!r}")
        letter = None if toks[1] == EPSILON_TOKEN else toks[1]
        t = Transition(toks[0], letter, vector(toks[2], lineno), toks[3], vector(toks[4], lineno))
        transitions.append(t)
        if len(toks) == 6:
            marks.append(t)

    return BlindCounterAutomaton(
        states=frozenset(states),
        alphabet=frozenset(alphabet),
        counter_count=k,
        transitions=tuple(transitions),
        initial_state=initial,
        accepting_states=frozenset(accepting),
        accepting_transitions=frozenset(marks),
    )


def serialize_automaton(a: BlindCounterAutomaton) -> str:
    """Render an automaton in the file format, deterministically ordered."""
    lines = [
        "states: " + " ".join(sorted(a.states)),
        "alphabet: " + " ".join(sorted(a.alphabet)),
        f"counters: {a.counter_count}",
        f"initial: {a.initial_state}",
        "accepting: " + " ".join(sorted(a.accepting_states)),
    ]
    for t in sorted(a.transitions, key=Transition.sort_key):
        suffix = " acc" if t in a.accepting_transitions else ""
        lines.append(t.describe() + suffix)
    return "\n".join(lines) + "\n"
