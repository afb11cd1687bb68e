"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 input or capacity error, 3 verification
failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import compiler, schedule as sched
from .errors import InvalidInputError, RefocusError
from .graphmodel import CouplingGraph, parse_graph
from .hadamard import hadamard_of_order, route
from .simulator import SpinSystemParams, random_params, verify_schedule_effective

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_target(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--retain-shift", metavar="SPIN", help="keep the chemical shift of SPIN")
    grp.add_argument("--retain-coupling", nargs=2, metavar=("A", "B"), help="keep the A-B coupling")
    grp.add_argument("--refocus-all", action="store_true", help="refocus every interaction")


def _add_compile_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--objective", choices=[o.value for o in compiler.Objective], default="total-pulses")
    p.add_argument("--search-limit", type=int, default=100_000, help="max row assignments tried exhaustively")
    p.add_argument("--omit-final", action="store_true", help="drop the parity-restoring final pulses")
    p.add_argument("--total-time", type=float, default=1.0, help="sequence length in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="refocus", description="Compile spin-echo refocussing pulse sequences.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("generate", help="compile a schedule")
    p.add_argument("graph", help="graph JSON file, or - for stdin")
    _add_target(p)
    _add_compile_opts(p)
    p.add_argument("--format", choices=["json", "ascii"], default="json")

    for name, text in (("verify", "check refocussing conditions combinatorially"),
                       ("simulate", "check the effective propagator numerically")):
        p = sub.add_parser(name, help=text)
        p.add_argument("graph")
        _add_target(p)
        _add_compile_opts(p)
        p.add_argument("--schedule", help="schedule JSON to check instead of compiling one")
        if name == "simulate":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=10, help="random parameter draws when the graph has none")
            p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("compare", help="efficient vs conventional nested sequence")
    p.add_argument("graph")
    _add_target(p)
    _add_compile_opts(p)

    p = sub.add_parser("diagram", help="draw a schedule")
    p.add_argument("graph")
    _add_target(p)
    _add_compile_opts(p)
    p.add_argument("--schedule")
    p.add_argument("--width", type=int)
    p.add_argument("--svg", action="store_true")

    p = sub.add_parser("hadamard", help="print a Hadamard matrix")
    p.add_argument("order", type=int)
    return parser


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None


def _target(args, g: CouplingGraph, required: bool = True):
    if args.retain_shift is not None:
        return compiler.RetainShift(g.index(args.retain_shift))
    if args.retain_coupling is not None:
        a, b = args.retain_coupling
        return compiler.RetainCoupling(g.index(a), g.index(b))
    if args.refocus_all:
        return compiler.RefocusAll()
    if required:
        raise UsageError(f"refocus {args.command}: a target is required "
                         "(--retain-shift, --retain-coupling or --refocus-all)")
    return None


def _options(args) -> compiler.CompileOptions:
    return compiler.CompileOptions(compiler.Objective(args.objective), args.search_limit)


def _load_schedule(path: str, g: CouplingGraph, stdin) -> sched.PulseSchedule:
    text = _read(path, stdin)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed schedule JSON: {exc}") from None
    if isinstance(doc, dict) and "schedule" in doc:
        doc = doc["schedule"]
    if not isinstance(doc, dict):
        raise InvalidInputError("schedule JSON must be an object")
    s = sched.schedule_from_dict(doc)
    if list(s.names) != list(g.names):
        raise InvalidInputError(f"schedule spins {list(s.names)} do not match graph spins {list(g.names)}")
    return s


def _compiled(args, g, target):
    comp = compiler.compile_detailed(g, target, _options(args))
    s = sched.schedule_from_sign_matrix(comp.matrix, args.total_time, args.omit_final, g.names)
    return comp, s


def _doc_params(raw: dict, g: CouplingGraph, total_time: float) -> SpinSystemParams | None:
    shifts, js = raw.get("shifts"), raw.get("j")
    if shifts is None and js is None:
        return None
    rng = np.random.default_rng(0)
    base = random_params(g, rng, total_time)
    w = list(base.shifts)
    if shifts is not None:
        if set(shifts) != set(g.names):
            raise InvalidInputError('"shifts" must give a value for every spin')
        w = [float(shifts[n]) for n in g.names]
    couplings = dict(base.couplings)
    if js is not None:
        couplings = {}
        for key, val in js.items():
            try:
                a, b = key.split(":")
                i, j = g.index(a), g.index(b)
            except ValueError:
                raise InvalidInputError(f'bad coupling key {key!r}; expected "nameA:nameB"') from None
            couplings[(min(i, j), max(i, j))] = float(val)
    return SpinSystemParams(tuple(w), couplings, total_time)


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _generate(args, g, raw, out, stdin, err) -> int:
    target = _target(args, g)
    comp, s = _compiled(args, g, target)
    if args.format == "ascii":
        out.write(sched.render_ascii(s) + "\n")
        return EXIT_OK
    _dump({
        "target": compiler.describe_target(g, target),
        "hadamard_order": comp.hadamard_order,
        "hadamard_route": route(comp.hadamard_order),
        "row_search": comp.search,
        "assignment": [
            {"spin": name, "color": c, "row": comp.color_rows[c]}
            for name, c in zip(g.names, comp.coloring.assignment)
        ],
        "schedule": sched.schedule_to_dict(s),
    }, out)
    return EXIT_OK


def _schedule_for(args, g, stdin):
    if getattr(args, "schedule", None):
        return _load_schedule(args.schedule, g, stdin)
    return _compiled(args, g, _target(args, g))[1]


def _verify(args, g, raw, out, stdin, err) -> int:
    target = _target(args, g)
    s = _schedule_for(args, g, stdin)
    report = compiler.verify_combinatorial(s.to_sign_matrix(), g, target)
    doc = report.to_dict()
    odd = [g.names[i] for i in s.final_flips()]
    doc["odd_pulse_spins"] = odd
    _dump(doc, out)
    for line in report.failures():
        err.write(f"mismatch: {line}\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _simulate(args, g, raw, out, stdin, err) -> int:
    target = _target(args, g)
    s = _schedule_for(args, g, stdin)
    t = s.total_time
    given = _doc_params(raw, g, t)
    if given is not None:
        draws = [given]
    else:
        rng = np.random.default_rng(args.seed)
        draws = [random_params(g, rng, t) for _ in range(max(args.samples, 1))]
    reports = [verify_schedule_effective(s, g, target, p, args.tol, detail=(k == 0))
               for k, p in enumerate(draws)]
    doc = reports[0].to_dict()
    doc["passed"] = all(r.passed for r in reports)
    doc["frobenius_distance"] = max(r.frobenius_distance for r in reports)
    doc["samples"] = len(reports)
    doc["seed"] = None if given is not None else args.seed
    _dump(doc, out)
    if not doc["passed"]:
        for entry in doc.get("shifts", []) + doc.get("couplings", []):
            if not entry["ok"]:
                err.write(f"{'-'.join(entry['spins'])}: {entry['status']} (expected {entry['expected']})\n")
        err.write(f"effective propagator off target by {doc['frobenius_distance']:.3g}\n")
    return EXIT_OK if doc["passed"] else EXIT_VERIFY


def _compare(args, g, raw, out, stdin, err) -> int:
    target = _target(args, g)
    rep = compiler.efficiency_report(g, target, _options(args))
    doc = {"target": compiler.describe_target(g, target), "spins": g.spin_count}
    doc.update(rep.to_dict())
    _dump(doc, out)
    return EXIT_OK


def _diagram(args, g, raw, out, stdin, err) -> int:
    s = _schedule_for(args, g, stdin)
    if args.svg:
        out.write(sched.render_svg(s) + "\n")
    else:
        out.write(sched.render_ascii(s, width=args.width) + "\n")
    return EXIT_OK


_COMMANDS = {
    "generate": _generate,
    "verify": _verify,
    "simulate": _simulate,
    "compare": _compare,
    "diagram": _diagram,
}


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("refocus: a subcommand is required")
        if args.command == "hadamard":
            h = hadamard_of_order(args.order)
            stdout.write(f"# order {h.order} via {route(h.order)}\n{h.format()}\n")
            return EXIT_OK
        raw_text = _read(args.graph, stdin)
        g = parse_graph(raw_text)
        raw = json.loads(raw_text)
        return _COMMANDS[args.command](args, g, raw, stdout, stdin, stderr)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except RefocusError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
