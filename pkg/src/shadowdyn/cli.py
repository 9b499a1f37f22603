"""Command-line front end.

Subcommands: construct, chain, shadow, horseshoe, entropy, dstar, approx,
verify, accept.  Rationals are parsed exactly ("p/q" or integers); outputs
are deterministic JSON (sorted keys) with every claimed number exact.

Exit codes: 0 success / verdict holds, 1 verdict fails (counterexample or
failed verification), 2 schema or argument error, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import io as sio
from .approx import PipelineStageError, approximate_by_positive_entropy_ergodic
from .builders import dense_shadowable_example, extension_builder, fig1_circle
from .chain import build_chain_graph, decomposition
from .entropy import entropy_estimate, max_separated_cylinders, separated_set
from .horseshoe import build_certificate, find_loop_family
from .measures import EmpiricalMeasure, TestFunctionFamily, dstar, verify_measure_approx
from .shadowing import has_shadowing_at_resolution, is_positively_shadowable_at
from .systems import BudgetExceeded, NetSystem, SymbolicSystem
from .words import SubstitutionLanguage

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SCHEMA = 2
EXIT_BUDGET = 3


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"not an exact rational: {s!r}") from err


def _emit(doc, path=None):
    text = json.dumps(doc, sort_keys=True, indent=1, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_system(path: str):
    return sio.system_from_json(sio.load(path))


def _named_system(name: str):
    if name.startswith("fullshift:"):
        return SymbolicSystem.full_shift(int(name.split(":", 1)[1]))
    if name == "goldenmean":
        return SymbolicSystem.golden_mean()
    raise argparse.ArgumentTypeError(f"unknown system name {name!r}")


def _system_arg(value: str):
    if os.path.exists(value):
        return _load_system(value)
    return _named_system(value)


def _point_arg(value: str, system):
    if isinstance(system, NetSystem):
        return int(value)
    return sio.point_from_json(json.loads(value), system)


def cmd_construct(args) -> int:
    if args.builder == "fig1":
        system = fig1_circle(args.net)
        extra = {}
    elif args.builder == "layered":
        space = dense_shadowable_example(args.levels, base_size=args.net)
        system = space.net
        extra = {"layers": {str(n): list(m) for n, m in space.layers.items()},
                 "gaps": {str(n): sio.frac_str(g) for n, g in space.gaps.items()},
                 "base": list(space.base_indices)}
    elif args.builder == "extension":
        space = extension_builder(SubstitutionLanguage.fibonacci(), args.levels)
        system = space.net
        extra = {"base": list(space.base_indices),
                 "levels": {str(n): list(l.indices) for n, l in space.levels.items()}}
    else:
        system = _named_system(args.builder)
        extra = {}
    doc = sio.system_to_json(system)
    if extra:
        doc["structure"] = extra
    _emit(doc, args.out)
    return EXIT_OK


def cmd_chain(args) -> int:
    system = _system_arg(args.system)
    graph = build_chain_graph(system, args.delta, depth=args.depth)
    dec = decomposition(graph)
    doc = {"delta": sio.frac_str(args.delta),
           "depth": graph.depth_stamp,
           "recurrent": sorted(dec.recurrent_nodes),
           "classes": [sorted(c) for c in dec.classes]}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_shadow(args) -> int:
    system = _system_arg(args.system)
    if args.point is not None:
        point = _point_arg(args.point, system)
        rep = is_positively_shadowable_at(system, point, args.eps, args.delta,
                                          horizon=args.horizon, budget=args.budget)
    else:
        rep = has_shadowing_at_resolution(system, args.delta, args.eps,
                                          horizon=args.horizon,
                                          two_sided=args.two_sided,
                                          budget=args.budget)
    doc = {"verdict": rep.verdict,
           "eps": sio.frac_str(rep.epsilon), "delta": sio.frac_str(rep.delta),
           "horizon": rep.horizon, "stamps": {k: str(v) for k, v in rep.stamps.items()}}
    if rep.counterexample is not None:
        doc["counterexample"] = sio.orbit_to_json(rep.counterexample)
    _emit(doc, args.out)
    return EXIT_OK if rep.shadowable else EXIT_FAIL


def cmd_horseshoe(args) -> int:
    system = _system_arg(args.system)
    base = _point_arg(args.base, system)
    fam = find_loop_family(base, args.eps, args.delta, args.n_max, args.k, system)
    if fam is None:
        _emit({"result": "no loop family found"}, args.out)
        return EXIT_FAIL
    cert = build_certificate(fam, word_length_max=args.words)
    _emit(sio.certificate_to_json(cert), args.out)
    return EXIT_OK


def cmd_entropy(args) -> int:
    system = _system_arg(args.system)
    lo, hi = (int(x) for x in args.n.split(".."))
    est = entropy_estimate(system, args.eps, range(lo, hi + 1))
    doc = {"eps": sio.frac_str(args.eps),
           "entries": [[n, c] for n, c in est.entries],
           "slope": est.slope, "intercept": est.intercept,
           "residuals": est.residuals}
    _emit(doc, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,cardinality,log_cardinality\n")
            import math

            for n, c in est.entries:
                fh.write(f"{n},{c},{math.log(c)}\n")
    return EXIT_OK


def cmd_dstar(args) -> int:
    system = _system_arg(args.system)
    mu = sio.measure_from_json(sio.load(args.mu), system)
    nu = sio.measure_from_json(sio.load(args.nu), system)
    family = TestFunctionFamily.for_system(system, size=args.terms)
    res = dstar(mu, nu, family)
    _emit({"value": sio.frac_str(res.value),
           "decimal": float(res.value),
           "tail_bound": sio.frac_str(res.tail_bound),
           "terms": res.terms}, args.out)
    return EXIT_OK


def cmd_approx(args) -> int:
    system = _system_arg(args.system)
    spec = sio.load(args.components)
    components = [(sio.point_from_json(p, system), sio.parse_frac(w))
                  for p, w in spec["components"]]
    res = approximate_by_positive_entropy_ergodic(system, components, args.eps,
                                                  word_length=args.words)
    doc = {"epsilon": sio.frac_str(res.epsilon),
           "bound": sio.frac_str(res.bound),
           "total": sio.frac_str(res.total),
           "terms": {k: sio.frac_str(v) for k, v in res.terms.items()},
           "coded_word": list(res.coded_word),
           "nu": sio.measure_to_json(res.nu),
           "stages": [[name, {k: str(v) for k, v in detail.items()}]
                      for name, detail in res.stages],
           "certificate": sio.certificate_to_json(res.certificate)}
    _emit(doc, args.out)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    system = _system_arg(args.system)
    doc = sio.load(args.certificate)
    report = sio.verify_certificate(doc, system)
    _emit(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_accept(args) -> int:
    from . import acceptance

    results = acceptance.run_all(only=args.only)
    for res in results:
        print(res.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowdyn",
        description="pseudo-orbit, shadowing, chain-recurrence and entropy "
                    "machinery on finitely represented dynamical systems")
    parser.add_argument("--workers", type=int, default=os.cpu_count(),
                        help="parallelism bound (execution is currently "
                             "sequential; results are independent of this)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named example system")
    p.add_argument("builder",
                   help="fig1 | layered | extension | fullshift:<k> | goldenmean")
    p.add_argument("--net", type=int, default=360, help="net size (fig1/layered)")
    p.add_argument("--levels", type=int, default=12, help="layer count")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("chain", help="chain-recurrent set and classes")
    p.add_argument("--system", required=True)
    p.add_argument("--delta", type=_frac, required=True)
    p.add_argument("--depth", type=int, default=None,
                   help="cylinder depth for symbolic systems")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("shadow", help="shadowability verdicts")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--delta", type=_frac, required=True)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--point", help="start point (index or JSON symbolic point); "
                                   "omit to quantify over all start points")
    p.add_argument("--budget", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("horseshoe", help="loop family search and certificate")
    p.add_argument("--system", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--delta", type=_frac, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--words", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_horseshoe)

    p = sub.add_parser("entropy", help="separated-set growth and slope")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--n", required=True, help="range lo..hi")
    p.add_argument("--csv", help="also write a CSV table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("dstar", help="exact weak* distance of two measures")
    p.add_argument("--system", required=True)
    p.add_argument("--mu", required=True, help="measure JSON file")
    p.add_argument("--nu", required=True, help="measure JSON file")
    p.add_argument("--terms", type=int, default=24)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dstar)

    p = sub.add_parser("approx", help="positive-entropy approximation pipeline")
    p.add_argument("--system", required=True)
    p.add_argument("--components", required=True,
                   help="JSON file {components: [[point, weight], ...]}")
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--words", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", help="re-check a certificate file")
    p.add_argument("certificate")
    p.add_argument("--system", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("accept", help="run the acceptance criteria")
    p.add_argument("--only", type=int, default=None, help="run one criterion")
    p.set_defaults(func=cmd_accept)
    return parser


def run(argv=None) -> int:
    """Parse an argument vector (the experiment config) and execute it."""
    return main(argv)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except sio.SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    except BudgetExceeded as err:
        print(f"budget exhausted: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except PipelineStageError as err:
        print(f"pipeline stage failed: {err}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
