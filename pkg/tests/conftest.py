"""Shared fixtures: the reference automata, the exhaustive small-lasso
suite, and a per-word verdict cache reused across the acceptance tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import pytest

from blindbuchi.automaton import eliminate_epsilon
from blindbuchi.decision import AcceptanceVerdict, build_product, decide_accept
from blindbuchi.reference import UsageCertificate, characterize, reference_automaton
from blindbuchi.semantics import ExplorationCaps, OracleVerdict, oracle_accept
from blindbuchi.words import LassoWord, decompose_blocks, is_block_word

SUITE_MAX_PREFIX = 2
SUITE_MAX_PERIOD = 6
SUITE_ORACLE_CAPS = ExplorationCaps(8, 400)


def z_suite(max_prefix: int = SUITE_MAX_PREFIX, max_period: int = SUITE_MAX_PERIOD) -> list[LassoWord]:
    """Canonical representatives of every block-form lasso within the bounds."""
    seen: dict[tuple[str, str], LassoWord] = {}
    for plen in range(1, max_period + 1):
        for period in itertools.product("ab", repeat=plen):
            v = "".join(period)
            if "a" not in v or "b" not in v:
                continue
            for ulen in range(0, max_prefix + 1):
                for prefix in itertools.product("ab", repeat=ulen):
                    w = LassoWord("".join(prefix), v)
                    if not is_block_word(w):
                        continue
                    c = w.canonical()
                    seen[(c.prefix, c.period)] = c
    return sorted(seen.values(), key=lambda w: (len(w.period), len(w.prefix), w.period, w.prefix))


@dataclass(frozen=True)
class WordVerdicts:
    word: LassoWord
    decide: AcceptanceVerdict
    decide_doubled: AcceptanceVerdict
    certificate: UsageCertificate | None
    oracle: OracleVerdict
    oracle_raw: OracleVerdict


@pytest.fixture(scope="session")
def reference():
    return reference_automaton()


@pytest.fixture(scope="session")
def eliminated(reference):
    return eliminate_epsilon(reference)


@pytest.fixture(scope="session")
def suite_words():
    return z_suite()


@pytest.fixture(scope="session")
def suite_verdicts(reference, eliminated, suite_words):
    out: dict[str, WordVerdicts] = {}
    for w in suite_words:
        default_cutoff = build_product(eliminated, w).node_count ** 2 + 1
        out[str(w)] = WordVerdicts(
            word=w,
            decide=decide_accept(eliminated, w, default_cutoff),
            decide_doubled=decide_accept(eliminated, w, 2 * default_cutoff),
            certificate=characterize(decompose_blocks(w)),
            oracle=oracle_accept(eliminated, w, SUITE_ORACLE_CAPS),
            oracle_raw=oracle_accept(reference, w, SUITE_ORACLE_CAPS, allow_epsilon=True),
        )
    return out
