"""Command-line interface.

Every command prints a human-readable report as `#`-prefixed lines
followed by machine-readable `key=value` lines.  The machine lines are
byte-identical across runs for identical inputs (timing appears only in
the human section).  Verdicts such as "rejected" are results, not
errors: domain errors exit 1, usage errors exit 2, everything else 0,
except that check commands exit 1 when an assertion fails.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .automaton import (
    BlindCounterAutomaton,
    eliminate_epsilon,
    parse_automaton,
    serialize_automaton,
    validate,
)
from .decision import decide_accept
from .petri import parse_net, translate
from .reference import (
    characterize,
    demo_battery,
    greedy_run,
    reduction_check,
    reference_automaton,
)
from .semantics import ExplorationCaps, oracle_accept, render_trace
from .words import (
    parse_block_lasso,
    parse_integer_lasso,
    parse_lasso,
    unary_block_encode,
)


@dataclass
class CommandReport:
    command: str
    human: list[str]
    machine: list[tuple[str, str]]
    exit_code: int
    elapsed_ms: int = 0

    def render(self) -> str:
        lines = [f"# command: {self.command}"]
        lines += [f"# {line}" for line in self.human]
        lines.append(f"# elapsed-ms: {self.elapsed_ms}")
        lines += [f"{key}={value}" for key, value in self.machine]
        lines.append(f"exit={self.exit_code}")
        return "\n".join(lines)


def _load_automaton(path: str) -> BlindCounterAutomaton:
    with open(path, encoding="utf-8") as handle:
        return parse_automaton(handle.read())


def _load_eliminated(path: str) -> BlindCounterAutomaton:
    return eliminate_epsilon(_load_automaton(path))


def _witness_lines(a, w, verdict_run):
    if verdict_run is None:
        return []
    return render_trace(a, w, verdict_run).splitlines()


def _cmd_validate(args) -> tuple[list[str], list[tuple[str, str]], int]:
    a = _load_automaton(args.file)
    violations = validate(a)
    human = [f"{len(violations)} violation(s)"]
    machine = [("file", args.file), ("violations", str(len(violations)))]
    for i, v in enumerate(violations):
        human.append(f"  {v.clause}: {v.message}")
        machine.append((f"violation.{i}", f"{v.clause}: {v.message}"))
    return human, machine, 0 if not violations else 1


def _cmd_eliminate(args):
    a = eliminate_epsilon(_load_automaton(args.file))
    text = serialize_automaton(a)
    human = ["silent transitions eliminated"] + text.splitlines()
    machine = [("file", args.file),
               ("states", str(len(a.states))),
               ("transitions", str(len(a.transitions))),
               ("marked", str(len(a.accepting_transitions)))]
    machine += [(f"auto.{i}", line) for i, line in enumerate(text.splitlines())]
    return human, machine, 0


def _cmd_accept(args):
    a = _load_eliminated(args.file)
    w = parse_lasso(args.lasso)
    verdict = decide_accept(a, w, args.cutoff)
    human = [f"lasso {w}: {'accepted' if verdict.accepted else 'rejected'}"]
    machine = [("file", args.file), ("lasso", str(w)),
               ("cutoff", str(verdict.cutoff)),
               ("accepted", str(verdict.accepted).lower())]
    if verdict.accepted:
        human.append(f"case {verdict.case}, requirement {verdict.requirement}, "
                     f"pumped {str(verdict.pumped).lower()}")
        machine += [("case", verdict.case),
                    ("requirement", str(verdict.requirement)),
                    ("pumped", str(verdict.pumped).lower())]
        trace = _witness_lines(a, w, verdict.witness)
        human += ["witness:"] + ["  " + line for line in trace]
        machine += [(f"witness.{i}", line) for i, line in enumerate(trace)]
    return human, machine, 0


def _cmd_oracle(args):
    a = _load_eliminated(args.file)
    w = parse_lasso(args.lasso)
    caps = ExplorationCaps(args.counter_cap, args.depth)
    verdict = oracle_accept(a, w, caps)
    human = [f"lasso {w}: {verdict.status.value}",
             f"counter-cap-hit {str(verdict.counter_cap_hit).lower()}, "
             f"depth-cap-hit {str(verdict.depth_cap_hit).lower()}, "
             f"conclusive {str(verdict.conclusive).lower()}"]
    machine = [("file", args.file), ("lasso", str(w)),
               ("counter-cap", str(args.counter_cap)), ("depth-cap", str(args.depth)),
               ("status", verdict.status.value),
               ("counter-cap-hit", str(verdict.counter_cap_hit).lower()),
               ("depth-cap-hit", str(verdict.depth_cap_hit).lower()),
               ("conclusive", str(verdict.conclusive).lower())]
    if verdict.witness is not None:
        trace = _witness_lines(a, w, verdict.witness)
        human += ["witness:"] + ["  " + line for line in trace]
        machine += [(f"witness.{i}", line) for i, line in enumerate(trace)]
    return human, machine, 0


def _cmd_encode(args):
    x = parse_integer_lasso(args.intlasso)
    w = unary_block_encode(x)
    human = [f"{x} encodes to {w}"]
    machine = [("intlasso", str(x)), ("word", str(w))]
    return human, machine, 0


def _cmd_canonical_run(args):
    blocks = parse_block_lasso(args.blocks)
    trace = greedy_run(blocks.blocks(), args.n, args.horizon)
    human = [f"budget {args.n}, horizon {args.horizon}"]
    machine = [("blocks", str(blocks)), ("budget", str(args.n)),
               ("horizon", str(args.horizon))]
    for step in trace.steps:
        n, k = step.block
        action = "use" if step.used else ("startup" if step.phase == "startup" else "skip")
        human.append(f"  block {step.index} ({n},{k}): {action}, counter {step.counter_after}")
        machine.append((f"block.{step.index}", f"{n}:{k} {action} {step.counter_after}"))
    machine.append(("used", ",".join(str(i) for i in trace.used)))
    return human, machine, 0


def _cmd_characterize(args):
    blocks = parse_block_lasso(args.blocks)
    cert = characterize(blocks)
    machine = [("blocks", str(blocks)), ("accepted", str(cert is not None).lower())]
    if cert is None:
        human = [f"{blocks}: rejected (no budget admits infinitely many uses)"]
    else:
        human = [f"{blocks}: accepted with budget {cert.budget}",
                 f"steady pattern from block {cert.steady_start}: "
                 f"offsets {list(cert.steady_used_offsets)} of period {cert.period_length}"]
        machine += [("budget", str(cert.budget)),
                    ("steady-start", str(cert.steady_start)),
                    ("period-length", str(cert.period_length)),
                    ("steady-offsets", ",".join(str(i) for i in cert.steady_used_offsets)),
                    ("startup-used", ",".join(str(i) for i in cert.startup_used))]
    return human, machine, 0


def _cmd_reduction(args):
    x = parse_integer_lasso(args.intlasso)
    report = reduction_check(x)
    human = [f"point {x} -> word {report.word}",
             f"finite-liminf {str(report.finite_liminf).lower()}, "
             f"accepted {str(report.accepted).lower()}, "
             f"certificate {'none' if report.certificate is None else report.certificate.budget}",
             f"biconditional {'holds' if report.holds else 'FAILS'}, "
             f"evaluators {'agree' if report.evaluators_agree else 'DISAGREE'}"]
    machine = [("intlasso", str(x)), ("word", str(report.word)),
               ("finite-liminf", str(report.finite_liminf).lower()),
               ("accepted", str(report.accepted).lower()),
               ("certificate-budget",
                "none" if report.certificate is None else str(report.certificate.budget)),
               ("holds", str(report.holds).lower()),
               ("agree", str(report.evaluators_agree).lower())]
    return human, machine, 0 if report.ok else 1


def _cmd_translate_pn(args):
    with open(args.file, encoding="utf-8") as handle:
        net = parse_net(handle.read())
    a = translate(net)
    text = serialize_automaton(a)
    human = [f"net translated: {len(a.states)} state(s), {a.counter_count} counter(s), "
             f"{len(a.transitions)} transition(s)"] + text.splitlines()
    machine = [("file", args.file),
               ("states", str(len(a.states))),
               ("counters", str(a.counter_count)),
               ("transitions", str(len(a.transitions)))]
    machine += [(f"auto.{i}", line) for i, line in enumerate(text.splitlines())]
    return human, machine, 0


def _cmd_demo(args):
    a = reference_automaton()
    text = serialize_automaton(a)
    human = ["reference automaton:"] + ["  " + line for line in text.splitlines()]
    machine = [(f"auto.{i}", line) for i, line in enumerate(text.splitlines())]
    failures = 0
    human.append("reduction battery:")
    for i, x in enumerate(demo_battery()):
        report = reduction_check(x)
        ok = report.ok
        failures += 0 if ok else 1
        human.append(f"  {x}: accepted {str(report.accepted).lower()}, "
                     f"{'ok' if ok else 'FAIL'}")
        machine.append((f"battery.{i}",
                        f"{x} accepted={str(report.accepted).lower()} ok={str(ok).lower()}"))
    human.append(f"battery: {len(demo_battery()) - failures}/{len(demo_battery())} ok")
    machine.append(("battery-failures", str(failures)))
    return human, machine, 0 if failures == 0 else 1


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blindbuchi",
        description="Blind-counter Büchi automata: validation, simulation, and "
                    "acceptance decisions for ultimately periodic words.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an automaton file for well-formedness")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("eliminate", help="remove silent transitions, print the result")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_eliminate)

    p = sub.add_parser("accept", help="decide acceptance of a lasso word")
    p.add_argument("file")
    p.add_argument("--lasso", required=True, help="lasso literal u|v, e.g. '|ab'")
    p.add_argument("--cutoff", type=int, default=None, help="counter cutoff K")
    p.set_defaults(handler=_cmd_accept)

    p = sub.add_parser("oracle", help="bounded brute-force acceptance check")
    p.add_argument("file")
    p.add_argument("--lasso", required=True)
    p.add_argument("--counter-cap", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("encode", help="unary block encoding of an integer lasso")
    p.add_argument("--intlasso", required=True, help="integer lasso literal m0,m1|p0,p1")
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("canonical-run", help="trace the greedy reference run over blocks")
    p.add_argument("--blocks", required=True, help="block lasso literal n:k,...|n:k,...")
    p.add_argument("--n", type=int, required=True, help="initial budget")
    p.add_argument("--horizon", type=int, required=True, help="blocks to simulate")
    p.set_defaults(handler=_cmd_canonical_run)

    p = sub.add_parser("characterize", help="decide block-lasso acceptance by budget search")
    p.add_argument("--blocks", required=True)
    p.set_defaults(handler=_cmd_characterize)

    p = sub.add_parser("reduction", help="cross-check liminf classification vs acceptance")
    p.add_argument("--intlasso", required=True)
    p.set_defaults(handler=_cmd_reduction)

    p = sub.add_parser("translate-pn", help="translate a labeled Petri net file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_translate_pn)

    p = sub.add_parser("demo-paper", help="print the reference automaton and run "
                                          "the built-in reduction battery")
    p.set_defaults(handler=_cmd_demo)
    return parser


def run(argv: list[str]) -> CommandReport:
    """Execute one command; raises SystemExit(2) on usage errors."""
    args = _parser().parse_args(argv)
    started = time.monotonic()
    command = " ".join(argv)
    try:
        human, machine, code = args.handler(args)
    except (ValueError, OSError) as exc:
        elapsed = int((time.monotonic() - started) * 1000)
        return CommandReport(command, [f"error: {exc}"], [("error", str(exc))], 1, elapsed)
    elapsed = int((time.monotonic() - started) * 1000)
    return CommandReport(command, human, machine, code, elapsed)


def main() -> None:
    report = run(sys.argv[1:])
    print(report.render())
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
