"""Command-line interface: contract graphs, compare them, run identity suites.

Exit codes: 0 success/equal/pass, 1 unequal/fail, 2 usage or parse error,
3 validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dsl, scalars, suites
from .algebra import eval_compound
from .contraction import exterior_brute, exterior_planned, plan_greedy
from .diagrams import (
    det_diagram,
    det_oracle,
    pfaffian_diagram,
    pfaffian_factor,
    pfaffian_oracle,
    trace_diagram,
    trace_oracle,
)
from .graph import NfgError
from .scalars import EXACT, F64
from .tensor import TensorError

EXIT_OK = 0
EXIT_UNEQUAL = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3


def _load(path: str, backend: str) -> dsl.DslDocument:
    source = Path(path).read_text(encoding="utf-8")
    return dsl.parse(source, backend)


def _graph_or_compound(doc: dsl.DslDocument, name: str):
    if name in doc.graphs:
        return doc.graphs[name]
    if name in doc.compounds:
        return doc.compounds[name]
    raise NfgError(f"no graph named {name!r} in the document")


def _tensor(doc: dsl.DslDocument, name: str):
    if name not in doc.tensors:
        raise NfgError(f"no tensor named {name!r} in the document")
    return doc.tensors[name]


def cmd_contract(args) -> int:
    doc = _load(args.file, args.backend)
    target = _graph_or_compound(doc, args.graph)
    if args.plan_out:
        from .algebra import CompoundNfg

        g = target.terms[0][1] if isinstance(target, CompoundNfg) else target
        plan = plan_greedy(g)
        Path(args.plan_out).write_text(plan.to_text(), encoding="utf-8")
    result = eval_compound(target, engine=args.engine)
    print(json.dumps(result.to_obj()))
    return EXIT_OK


def cmd_equal(args) -> int:
    doc = _load(args.file, args.backend)
    a = eval_compound(_graph_or_compound(doc, args.g1), engine=args.engine)
    b = eval_compound(_graph_or_compound(doc, args.g2), engine=args.engine)
    if a.shape != b.shape:
        print(f"unequal: interface shapes {list(a.shape)} vs {list(b.shape)}")
        return EXIT_UNEQUAL
    if a.equal(b, args.tol):
        print("equal")
        return EXIT_OK
    print("unequal")
    return EXIT_UNEQUAL


def cmd_pfaffian(args) -> int:
    doc = _load(args.file, args.backend)
    a = _tensor(doc, args.matrix)
    n = a.shape[0] // 2
    factor = pfaffian_factor(n)
    z = exterior_planned(pfaffian_diagram(a)).get(())
    via_diagram = z / scalars.rat(factor) if a.backend == EXACT else z / float(factor)
    via_oracle = pfaffian_oracle(a)
    print(f"pfaffian(diagram) = {scalars.format_scalar(a.backend, via_diagram)}")
    print(f"pfaffian(oracle)  = {scalars.format_scalar(a.backend, via_oracle)}")
    print(f"ratio             = {factor}")
    agree = scalars.scalar_eq(a.backend, via_diagram, via_oracle, args.tol)
    return EXIT_OK if agree else EXIT_UNEQUAL


def cmd_det(args) -> int:
    doc = _load(args.file, args.backend)
    a = _tensor(doc, args.matrix)
    via_diagram = exterior_planned(det_diagram(a)).get(())
    via_oracle = det_oracle(a)
    print(f"det(diagram) = {scalars.format_scalar(a.backend, via_diagram)}")
    print(f"det(oracle)  = {scalars.format_scalar(a.backend, via_oracle)}")
    agree = scalars.scalar_eq(a.backend, via_diagram, via_oracle, args.tol)
    return EXIT_OK if agree else EXIT_UNEQUAL


def cmd_trace(args) -> int:
    doc = _load(args.file, args.backend)
    a = _tensor(doc, args.matrix)
    via_diagram = exterior_brute(trace_diagram(a)).get(())
    via_oracle = trace_oracle(a)
    print(f"trace(diagram) = {scalars.format_scalar(a.backend, via_diagram)}")
    print(f"trace(oracle)  = {scalars.format_scalar(a.backend, via_oracle)}")
    agree = scalars.scalar_eq(a.backend, via_diagram, via_oracle, args.tol)
    return EXIT_OK if agree else EXIT_UNEQUAL


def cmd_verify(args) -> int:
    try:
        rows = suites.run_suite(args.suite, seed=args.seed, trials=args.trials)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_USAGE
    all_ok = True
    for name, ok, detail in rows:
        status = "PASS" if ok else "FAIL"
        print(f"{name} {status} {detail}")
        all_ok = all_ok and ok
    return EXIT_OK if all_ok else EXIT_UNEQUAL


def cmd_plan(args) -> int:
    doc = _load(args.file, args.backend)
    g = doc.graphs.get(args.graph)
    if g is None:
        raise NfgError(f"no graph named {args.graph!r} in the document")
    plan = plan_greedy(g)
    sys.stdout.write(plan.to_text())
    print(f"estimated cost: {plan.estimated_cost}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfg",
        description="Normal factor graphs: contraction, comparison, identity suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engine=True):
        p.add_argument("--backend", choices=[EXACT, F64], default=EXACT)
        p.add_argument("--tol", type=float, default=1e-9,
                       help="comparison tolerance (float backend only)")
        if engine:
            p.add_argument("--engine", choices=["brute", "planned"], default="planned")

    p = sub.add_parser("contract", help="print a graph's exterior function")
    p.add_argument("file")
    p.add_argument("graph")
    p.add_argument("--plan-out", default=None, help="write the greedy plan to a file")
    common(p)
    p.set_defaults(fn=cmd_contract)

    p = sub.add_parser("equal", help="exit 0 iff two exterior functions are equal")
    p.add_argument("file")
    p.add_argument("g1")
    p.add_argument("g2")
    common(p)
    p.set_defaults(fn=cmd_equal)

    p = sub.add_parser("pfaffian", help="Pfaffian via diagram and via oracle")
    p.add_argument("file")
    p.add_argument("matrix")
    common(p, engine=False)
    p.set_defaults(fn=cmd_pfaffian)

    p = sub.add_parser("det", help="determinant via diagram and via oracle")
    p.add_argument("file")
    p.add_argument("matrix")
    common(p, engine=False)
    p.set_defaults(fn=cmd_det)

    p = sub.add_parser("trace", help="trace via diagram and via oracle")
    p.add_argument("file")
    p.add_argument("matrix")
    common(p, engine=False)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("verify", help="run a named identity suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("plan", help="print the greedy contraction plan")
    p.add_argument("file")
    p.add_argument("graph")
    common(p, engine=False)
    p.set_defaults(fn=cmd_plan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.fn(args)
    except dsl.DslError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NfgError, TensorError, scalars.BackendMismatch) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
