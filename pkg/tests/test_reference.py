import itertools
import random

import pytest

from blindbuchi.automaton import Transition, validate
from blindbuchi.reference import (
    INCREMENT_STATES,
    budget_bound,
    characterize,
    demo_battery,
    greedy_run,
    reduction_check,
    reference_automaton,
    run_block_usage,
    run_budget,
    used_blocks,
)
from blindbuchi.semantics import Configuration, ExplorationCaps, LassoRun, replay
from blindbuchi.words import BlockLasso, IntegerLasso, decompose_blocks, parse_lasso


def test_reference_structure(reference):
    assert len(reference.states) == 9
    assert reference.initial_state == "I"
    assert reference.accepting_states == frozenset({"F"})
    eps_families = {(t.source, t.target) for t in reference.epsilon_transitions}
    assert eps_families == {("Ia", "Wa"), ("Ib", "Wb"), ("Wb", "G"), ("Ma", "F"), ("Mb", "G")}
    letter_families = {(t.source, t.letter, t.target, t.deltas[0])
                       for t in reference.transitions if t.letter is not None}
    assert len(letter_families) == 13
    assert validate(reference) == []


def test_reference_decrements_have_no_guard_zero_instance(reference):
    for t in reference.transitions:
        if t.deltas[0] == -1:
            assert t.guards == (1,)


def test_greedy_unit_blocks():
    trace = greedy_run(itertools.repeat((1, 1)), budget=1, horizon=8)
    assert trace.used == (1, 2, 3, 4, 5, 6, 7)
    assert all(step.counter_after == 1 for step in trace.steps if step.phase == "steady")


def test_greedy_deficit_blocks_never_used():
    trace = greedy_run(itertools.repeat((2, 1)), budget=3, horizon=10)
    assert trace.used == ()
    assert all(not step.used for step in trace.steps)


def test_greedy_horizon_zero():
    assert greedy_run(itertools.repeat((1, 1)), budget=1, horizon=0).steps == ()


def test_greedy_rejects_bad_budget():
    with pytest.raises(ValueError):
        greedy_run([(1, 1)], budget=0, horizon=1)


def test_used_blocks_examples():
    assert used_blocks([(1, 1), (1, 1)], 1) == [1]
    assert used_blocks([(3, 1)], 1) == []
    assert used_blocks([], 4) == []


def test_characterize_examples():
    unit = characterize(BlockLasso((), ((1, 1),)))
    assert unit is not None and unit.budget == 1
    assert unit.steady_used_offsets == (0,)

    assert characterize(BlockLasso((), ((2, 1),))) is None

    mixed_blocks = BlockLasso((), ((1, 1), (5, 1)))
    mixed = characterize(mixed_blocks)
    assert mixed is not None and mixed.budget == 1
    # exactly the (1,1) positions, bar the block consumed by the startup letter
    expected = [i for i in range(1, 12) if mixed_blocks.block_at(i) == (1, 1)]
    assert mixed.used_indices(12) == expected


def test_characterize_fixed_budget():
    blocks = BlockLasso((), ((4, 4),))
    assert characterize(blocks, budget=3) is None
    cert = characterize(blocks, budget=4)
    assert cert is not None
    assert characterize(blocks).budget == 4


def test_characterize_budget_bound():
    blocks = BlockLasso(((10, 10), (10, 10)), ((2, 2),))
    assert budget_bound(blocks) == 23
    cert = characterize(blocks)
    assert cert is not None and cert.budget == 2


def test_characterize_agrees_with_long_horizon_greedy():
    rng = random.Random(29)
    for _ in range(80):
        blocks = BlockLasso(
            tuple((rng.randint(1, 5), rng.randint(1, 5)) for _ in range(rng.randint(0, 2))),
            tuple((rng.randint(1, 5), rng.randint(1, 5)) for _ in range(rng.randint(1, 3))),
        )
        cert = characterize(blocks)
        plen = len(blocks.period_blocks)
        horizon = len(blocks.prefix_blocks) + plen * (budget_bound(blocks) + 12)
        greedy_accepts = False
        for budget in range(1, budget_bound(blocks) + 1):
            trace = greedy_run(blocks.blocks(), budget, horizon)
            if any(i >= horizon - 2 * plen for i in trace.used):
                greedy_accepts = True
                break
        assert (cert is not None) == greedy_accepts, str(blocks)


def test_certificate_usage_satisfies_balance_inequality(suite_verdicts):
    for verdicts in suite_verdicts.values():
        cert = verdicts.certificate
        if cert is None:
            continue
        blocks = decompose_blocks(verdicts.word)
        horizon = len(blocks.prefix_blocks) + 3 * len(blocks.period_blocks) + cert.steady_start
        used = set(cert.used_indices(horizon))
        for i in sorted(used):
            n_i, _ = blocks.block_at(i)
            balance = cert.budget + sum(
                blocks.block_at(j)[1] - blocks.block_at(j)[0] for j in used if j < i)
            assert n_i <= balance, (str(verdicts.word), i)


def greedy_letter_run(w, budget, horizon_blocks) -> LassoRun:
    """Letter-level run of the raw reference automaton following the greedy
    policy: budget increments, wait out the current block, then per block
    skip or spend-and-earn, with the silent moves in between."""
    blocks = decompose_blocks(w)
    starts = [0]
    for i in range(horizon_blocks):
        n, k = blocks.block_at(i)
        starts.append(starts[-1] + n + k)
    steps: list[Transition] = []

    def letter_step(source, letter, target, delta, counter):
        guard = 1 if counter >= 1 else 0
        steps.append(Transition(source, letter, (guard,), target, (delta,)))
        return counter + delta

    def silent_step(source, target, counter):
        steps.append(Transition(source, None, (1 if counter >= 1 else 0,), target, (0,)))

    counter = 0
    state = "I"
    for pos in range(budget):
        target = "Ia" if w.letter_at(pos) == "a" else "Ib"
        counter = letter_step(state, w.letter_at(pos), target, 1, counter)
        state = target
    silent_step(state, "Wa" if state == "Ia" else "Wb", counter)
    state = "Wa" if state == "Ia" else "Wb"
    block_index = next(i for i in range(horizon_blocks + 1) if starts[i] >= budget)
    for pos in range(budget, starts[block_index]):
        letter = w.letter_at(pos)
        if letter == "a":
            counter = letter_step("Wa", "a", "Wa", 0, counter)
            state = "Wa"
        else:
            if state == "Wa":
                counter = letter_step("Wa", "b", "Wb", 0, counter)
            else:
                counter = letter_step("Wb", "b", "Wb", 0, counter)
            state = "Wb"
    if state == "Wa":  # cannot happen: blocks end in b
        raise AssertionError("wait stage must end on a b")
    silent_step("Wb", "G", counter)
    state = "G"

    trace = greedy_run(blocks.blocks(), budget, horizon_blocks)
    for i in range(block_index, horizon_blocks):
        n, k = blocks.block_at(i)
        if trace.steps[i].used:
            counter = letter_step("G", "a", "Ma", -1, counter)
            for _ in range(n - 1):
                counter = letter_step("Ma", "a", "Ma", -1, counter)
            silent_step("Ma", "F", counter)
            counter = letter_step("F", "b", "Mb", 1, counter)
            for _ in range(k - 1):
                counter = letter_step("Mb", "b", "Mb", 1, counter)
            silent_step("Mb", "G", counter)
        else:
            counter = letter_step("G", "a", "Wa", 0, counter)
            for _ in range(n - 1):
                counter = letter_step("Wa", "a", "Wa", 0, counter)
            counter = letter_step("Wa", "b", "Wb", 0, counter)
            for _ in range(k - 1):
                counter = letter_step("Wb", "b", "Wb", 0, counter)
            silent_step("Wb", "G", counter)
    return LassoRun(Configuration("I", (0,)), tuple(steps), ())


def test_greedy_trace_is_a_legal_raw_run(reference, suite_words):
    for w in suite_words[:50]:
        blocks = decompose_blocks(w)
        for budget in (1, 2, 4):
            run = greedy_letter_run(w, budget, 6)
            snaps = replay(reference, w, run)  # raises if any step is illegal
            assert all(t.source in reference.states for t in run.stem)
            used = greedy_run(blocks.blocks(), budget, 6).used
            f_visits = sum(1 for t in run.stem if t.target == "F")
            assert f_visits == len(used)
            assert snaps[-1][2][0] >= 0


def test_run_budget_counts_leading_increments(eliminated):
    from blindbuchi.semantics import enumerate_accepting_runs
    runs = enumerate_accepting_runs(eliminated, parse_lasso("|ab"), ExplorationCaps(3, 60), 3)
    assert runs
    for run in runs:
        n = run_budget(run)
        assert 1 <= n <= 3
        for t in (run.stem + run.cycle)[:n]:
            assert t.source in INCREMENT_STATES


def test_reduction_examples():
    r0 = reduction_check(IntegerLasso((), (0,)))
    assert r0.finite_liminf and r0.accepted and r0.holds and r0.evaluators_agree

    r3 = reduction_check(IntegerLasso((), (3,)))
    assert r3.accepted and r3.certificate.budget == 4

    r99 = reduction_check(IntegerLasso((9, 9), (1,)))
    assert r99.accepted and r99.holds


def test_demo_battery_all_ok():
    for x in demo_battery():
        report = reduction_check(x)
        assert report.ok, str(x)


def test_run_block_usage_reads_marks(eliminated):
    from blindbuchi.semantics import oracle_accept
    w = parse_lasso("|ab")
    verdict = oracle_accept(eliminated, w, ExplorationCaps(8, 200))
    used, counters = run_block_usage(w, verdict.witness, 6)
    assert used, "an accepting run must use blocks"
    assert len(counters) == 6


def test_accepting_runs_use_a_positive_block(eliminated, suite_words):
    # a mark-visiting cycle nets >= 0 over its uses, so one use has k >= n
    from blindbuchi.semantics import enumerate_accepting_runs
    checked = 0
    for w in suite_words[:80]:
        blocks = decompose_blocks(w)
        horizon = len(blocks.prefix_blocks) + 4 * len(blocks.period_blocks) + 2
        for run in enumerate_accepting_runs(eliminated, w, ExplorationCaps(5, 90), 2,
                                            max_steps=40_000):
            used, _ = run_block_usage(w, run, horizon)
            assert any(blocks.block_at(i)[1] >= blocks.block_at(i)[0] for i in used), str(w)
            checked += 1
    assert checked > 40
