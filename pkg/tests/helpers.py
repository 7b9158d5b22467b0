"""Test-only builders: random well-formed automata and random lassos."""

from __future__ import annotations

import random

from blindbuchi.automaton import BlindCounterAutomaton, Transition
from blindbuchi.words import LassoWord


def random_automaton(rng: random.Random, max_states: int = 5,
                     with_marks: bool = False) -> BlindCounterAutomaton:
    """A random well-formed one-counter automaton over {a, b}.

    Edge families expand to blind guard pairs; decrement families carry
    the guard-1 instance only, and an occasional guard-1-only family
    exercises the "enabled only at counter >= 1" corner.  With
    `with_marks`, a few transitions are additionally Büchi-marked.
    """
    n = rng.randint(2, max_states)
    states = [f"q{i}" for i in range(n)]
    transitions: list[Transition] = []
    for _ in range(rng.randint(n, 3 * n)):
        src = rng.choice(states)
        tgt = rng.choice(states)
        letter = rng.choice("ab")
        delta = rng.choice((-1, 0, 1))
        if delta >= 0 and rng.random() < 0.15:
            transitions.append(Transition(src, letter, (1,), tgt, (delta,)))
            continue
        if delta >= 0:
            transitions.append(Transition(src, letter, (0,), tgt, (delta,)))
        transitions.append(Transition(src, letter, (1,), tgt, (delta,)))
    accepting = frozenset(s for s in states if rng.random() < 0.4) or frozenset({states[-1]})
    marks = frozenset(t for t in transitions if rng.random() < 0.2) if with_marks else frozenset()
    return BlindCounterAutomaton(
        states=frozenset(states),
        alphabet=frozenset("ab"),
        counter_count=1,
        transitions=tuple(transitions),
        initial_state="q0",
        accepting_states=accepting,
        accepting_transitions=marks,
    )


def random_lasso(rng: random.Random, max_prefix: int = 2, max_period: int = 4) -> LassoWord:
    u = "".join(rng.choice("ab") for _ in range(rng.randint(0, max_prefix)))
    v = "".join(rng.choice("ab") for _ in range(rng.randint(1, max_period)))
    return LassoWord(u, v)
