"""The built-in reference automaton and its acceptance characterization.

The reference automaton is a 9-state one-blind-counter machine over
{a, b}.  It guesses a budget N by incrementing on the first N letters,
skips the rest of the current block, and from then on, at each block
a^n b^k, either reads it neutrally or spends n counter units on the a's,
visits the accepting state once, and earns k units back on the b's.  A
block can therefore be "used" only while affordable, and acceptance
demands infinitely many uses.

Equivalently, it accepts exactly the block words for which some budget N
and an infinite index set I satisfy, at every i in I,

    n_i <= N + sum over j < i, j in I of (k_j - n_j)

which the greedy run below decides: after the startup phase it uses a
block exactly when the block is positive (k >= n) and affordable
(n <= counter).  The greedy run with budget N dominates every run that
starts with N increments, so scanning finitely many budgets decides
acceptance for lasso inputs.

Composed through the unary block encoding, membership coincides with the
encoded integer sequence having finite limit inferior.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .automaton import BlindCounterAutomaton, Transition, eliminate_epsilon
from .decision import decide_accept
from .semantics import LassoRun, replay
from .words import (
    BlockLasso,
    IntegerLasso,
    LassoWord,
    decompose_blocks,
    has_finite_liminf,
    unary_block_encode,
)

INCREMENT_STATES = frozenset({"I", "Ia", "Ib"})

_LETTER_FAMILIES = (
    ("I", "a", "Ia", 1),
    ("Ia", "a", "Ia", 1),
    ("Ia", "b", "Ib", 1),
    ("Ib", "b", "Ib", 1),
    ("Ib", "a", "Ia", 1),
    ("Wa", "a", "Wa", 0),
    ("Wa", "b", "Wb", 0),
    ("Wb", "b", "Wb", 0),
    ("G", "a", "Ma", -1),
    ("Ma", "a", "Ma", -1),
    ("F", "b", "Mb", 1),
    ("Mb", "b", "Mb", 1),
    ("G", "a", "Wa", 0),
)

_EPSILON_FAMILIES = (
    ("Ia", "Wa"),
    ("Ib", "Wb"),
    ("Wb", "G"),
    ("Ma", "F"),
    ("Mb", "G"),
)


def reference_automaton() -> BlindCounterAutomaton:
    """The 9-state reference acceptor, with silent transitions.

    Each edge family expands to its guard-0/guard-1 instance pair except
    decrements, whose guard-0 instance could never fire and is omitted.
    """
    transitions: list[Transition] = []
    for src, letter, tgt, delta in _LETTER_FAMILIES:
        if delta >= 0:
            transitions.append(Transition(src, letter, (0,), tgt, (delta,)))
        transitions.append(Transition(src, letter, (1,), tgt, (delta,)))
    for src, tgt in _EPSILON_FAMILIES:
        transitions.append(Transition(src, None, (0,), tgt, (0,)))
        transitions.append(Transition(src, None, (1,), tgt, (0,)))
    return BlindCounterAutomaton(
        states=frozenset({"I", "Ia", "Ib", "Wa", "Wb", "G", "Ma", "F", "Mb"}),
        alphabet=frozenset({"a", "b"}),
        counter_count=1,
        transitions=tuple(transitions),
        initial_state="I",
        accepting_states=frozenset({"F"}),
    )


@lru_cache(maxsize=1)
def eliminated_reference_automaton() -> BlindCounterAutomaton:
    return eliminate_epsilon(reference_automaton())


@dataclass(frozen=True)
class GreedyStep:
    index: int
    block: tuple[int, int]
    phase: str  # "startup" while the budget is being placed, then "steady"
    used: bool
    counter_after: int


@dataclass(frozen=True)
class GreedyTrace:
    budget: int
    steps: tuple[GreedyStep, ...]
    used: tuple[int, ...]

    @property
    def final_counter(self) -> int:
        return self.steps[-1].counter_after if self.steps else self.budget


def greedy_run(blocks: Iterable[tuple[int, int]], budget: int, horizon: int) -> GreedyTrace:
    """Simulate the greedy reference run over the first `horizon` blocks.

    The counter starts at `budget` once the first `budget` letters have
    been read; the block still in progress at that point is skipped, so
    the first usable block is the first one starting at letter position
    >= budget.  From then on a block (n, k) is used iff k >= n and
    n <= counter, adding k - n to the counter.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    steps: list[GreedyStep] = []
    used: list[int] = []
    counter = budget
    position = 0
    for index, (n, k) in enumerate(blocks):
        if index >= horizon:
            break
        if n < 1 or k < 1:
            raise ValueError(f"block components must be >= 1, got {(n, k)}")
        if position < budget:
            steps.append(GreedyStep(index, (n, k), "startup", False, counter))
        elif k >= n and n <= counter:
            counter += k - n
            used.append(index)
            steps.append(GreedyStep(index, (n, k), "steady", True, counter))
        else:
            steps.append(GreedyStep(index, (n, k), "steady", False, counter))
        position += n + k
    return GreedyTrace(budget, tuple(steps), tuple(used))


def used_blocks(blocks: Sequence[tuple[int, int]], budget: int) -> list[int]:
    """Indices the greedy run with this budget uses among the given blocks."""
    return list(greedy_run(blocks, budget, len(blocks)).used)


@dataclass(frozen=True)
class UsageCertificate:
    """A budget plus the infinite used set, as startup indices and a
    periodic pattern of offsets that repeats from `steady_start` on."""

    budget: int
    startup_used: tuple[int, ...]
    steady_start: int
    period_length: int
    steady_used_offsets: tuple[int, ...]

    def used_indices(self, horizon: int) -> list[int]:
        out = [i for i in self.startup_used if i < horizon]
        offsets = set(self.steady_used_offsets)
        for i in range(self.steady_start, horizon):
            if (i - self.steady_start) % self.period_length in offsets:
                out.append(i)
        return out


def budget_bound(blocks: BlockLasso) -> int:
    """Largest budget worth trying on a block lasso."""
    return sum(n for n, _ in blocks.prefix_blocks) + max(n for n, _ in blocks.period_blocks) + 1


def characterize(blocks: BlockLasso, budget: int | None = None) -> UsageCertificate | None:
    """Certificate that some (or the given) budget uses infinitely many blocks.

    For a fixed budget the greedy counter is tracked at period
    boundaries.  The per-period counter map is monotone, so the boundary
    counter either reaches a fixed point (accept iff that period uses a
    block) or strictly increases until it exceeds every n of the period,
    after which exactly the positive blocks are used.  Returns None when
    no budget up to `budget_bound` works.
    """
    if budget is not None:
        return _characterize_at(blocks, budget)
    for n in range(1, budget_bound(blocks) + 1):
        cert = _characterize_at(blocks, n)
        if cert is not None:
            return cert
    return None


def _characterize_at(blocks: BlockLasso, budget: int) -> UsageCertificate | None:
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    plen = len(blocks.period_blocks)
    pre_len = len(blocks.prefix_blocks)
    max_period_n = max(n for n, _ in blocks.period_blocks)

    counter = budget
    position = 0
    index = 0
    used: list[int] = []

    def step(i: int) -> None:
        nonlocal counter, position
        n, k = blocks.block_at(i)
        if position >= budget and k >= n and n <= counter:
            counter += k - n
            used.append(i)
        position += n + k

    # run through the prefix and up to the first full-period boundary
    while index < pre_len or position < budget:
        step(index)
        index += 1
    laps = (index - pre_len + plen - 1) // plen if index > pre_len else 0
    boundary = pre_len + laps * plen
    while index < boundary:
        step(index)
        index += 1

    guard = counter + max_period_n + plen + 8
    for _ in range(guard):
        lap_start = index
        lap_counter = counter
        for _ in range(plen):
            step(index)
            index += 1
        lap_used = [i for i in used if i >= lap_start]
        if counter == lap_counter:
            if not lap_used:
                return None
            return UsageCertificate(
                budget=budget,
                startup_used=tuple(i for i in used if i < lap_start),
                steady_start=lap_start,
                period_length=plen,
                steady_used_offsets=tuple(i - lap_start for i in lap_used),
            )
        if lap_counter > max_period_n:
            # counters only grow from here and every positive block is affordable
            if not lap_used:
                return None
            return UsageCertificate(
                budget=budget,
                startup_used=tuple(i for i in used if i < lap_start),
                steady_start=lap_start,
                period_length=plen,
                steady_used_offsets=tuple(i - lap_start for i in lap_used),
            )
    raise AssertionError(f"boundary counter did not settle for budget {budget} on {blocks}")


def run_budget(run: LassoRun) -> int:
    """Initial increments of a reference-automaton run: leading steps that
    stay inside the increment states."""
    count = 0
    for t in run.stem + run.cycle:
        if t.target in ("Ia", "Ib") and t.source in INCREMENT_STATES:
            count += 1
        else:
            break
    return count


def run_block_usage(w: LassoWord, run: LassoRun, horizon_blocks: int,
                    automaton: BlindCounterAutomaton | None = None) -> tuple[list[int], list[int]]:
    """(used block indices, counter before each block) over a finite horizon.

    Replays a run of the (eliminated) reference automaton and reads off,
    per block, the counter at the block start and whether the step that
    consumes the block's first b fires a marked transition, which is
    exactly a use.
    """
    a = automaton if automaton is not None else eliminated_reference_automaton()
    blocks = decompose_blocks(w)
    starts = []
    pos = 0
    for i in range(horizon_blocks + 1):
        starts.append(pos)
        n, k = blocks.block_at(i)
        pos += n + k
    letters_needed = starts[-1]

    steps = list(run.stem)
    while len(steps) < letters_needed + len(run.cycle):
        steps.extend(run.cycle)
    snaps = replay(a, w, LassoRun(run.initial, tuple(steps), ()))

    marks = a.accepting_transitions
    counters_at_start = []
    used = []
    for i in range(horizon_blocks):
        counters_at_start.append(snaps[starts[i]][2][0])
        n, _ = blocks.block_at(i)
        first_b = starts[i] + n
        if steps[first_b] in marks:
            used.append(i)
    return used, counters_at_start


@dataclass(frozen=True)
class ReductionReport:
    """Cross-check of the liminf classification against automaton acceptance."""

    point: IntegerLasso
    finite_liminf: bool
    word: LassoWord
    accepted: bool
    certificate: UsageCertificate | None

    @property
    def evaluators_agree(self) -> bool:
        return self.accepted == (self.certificate is not None)

    @property
    def holds(self) -> bool:
        return self.finite_liminf == self.accepted

    @property
    def ok(self) -> bool:
        return self.holds and self.evaluators_agree


def reduction_check(x: IntegerLasso, cutoff: int | None = None) -> ReductionReport:
    """Encode x, decide acceptance, characterize the blocks, compare all views."""
    word = unary_block_encode(x)
    verdict = decide_accept(eliminated_reference_automaton(), word, cutoff)
    certificate = characterize(decompose_blocks(word))
    return ReductionReport(
        point=x,
        finite_liminf=has_finite_liminf(x),
        word=word,
        accepted=verdict.accepted,
        certificate=certificate,
    )


def demo_battery() -> tuple[IntegerLasso, ...]:
    """Built-in integer lassos exercised by the demo command."""
    return (
        IntegerLasso((), (0,)),
        IntegerLasso((), (3,)),
        IntegerLasso((9, 9), (1,)),
        IntegerLasso((), (0, 1)),
        IntegerLasso((2,), (0,)),
        IntegerLasso((), (5,)),
        IntegerLasso((0, 1, 2), (3, 4)),
        IntegerLasso((4,), (2, 6, 2)),
        IntegerLasso((1, 1, 1, 1), (6, 0, 6)),
        IntegerLasso((), (6, 6, 6, 1)),
    )
