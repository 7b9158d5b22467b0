"""Blind-counter Büchi automata: definition, simulation, and acceptance
decisions for ultimately periodic words, with a Petri-net front end."""

from .automaton import (
    BlindCounterAutomaton,
    Configuration,
    InvalidAutomatonError,
    Transition,
    Violation,
    eliminate_epsilon,
    parse_automaton,
    serialize_automaton,
    validate,
)
from .decision import AcceptanceVerdict, ProductGraph, build_product, decide_accept
from .petri import LabeledPetriNet, NetTransition, Place, net_oracle_accept, parse_net, simulate_net, translate
from .reference import (
    GreedyTrace,
    ReductionReport,
    UsageCertificate,
    characterize,
    eliminated_reference_automaton,
    greedy_run,
    reduction_check,
    reference_automaton,
    used_blocks,
)
from .semantics import (
    ExplorationCaps,
    LassoRun,
    OracleStatus,
    OracleVerdict,
    enumerate_accepting_runs,
    oracle_accept,
    render_trace,
    replay,
    step_all,
)
from .words import (
    BlockLasso,
    IntegerLasso,
    LassoWord,
    decompose_blocks,
    diverges_to_infinity,
    has_finite_liminf,
    is_block_word,
    liminf_value,
    parse_block_lasso,
    parse_integer_lasso,
    parse_lasso,
    unary_block_encode,
    unary_block_encode_prefix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
