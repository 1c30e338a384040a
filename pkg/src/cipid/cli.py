"""Command line front end.

Four subcommands: ``measure`` evaluates named measures on one
distribution, ``reproduce`` recomputes the bundled reference tables and
checks every cell, ``sweep`` writes a CSV over a parameter grid, and
``axioms`` runs the randomized property suite.  Exit codes: 0 on
success, 1 when a reproduce cell or axiom check fails, 2 for bad
arguments or unreadable input, 3 for solver failures.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Callable

from . import __version__
from .axioms import run_axiom_suite
from .channels import Channel, degradation_leq, degradation_redundancy, s_d, vk_union_information
from .ci import ci_synergy, ci_union_information
from .classic import (
    delta_i_synergy,
    dep_synergy,
    iep_bivariate_from_redundancy,
    imin_redundancy,
    wb_synergy,
    wb_union_information,
    wms_synergy,
)
from .corpus import CORPUS, canonical, load_distribution
from .distribution import JointDistribution, VariableSet, _mi_lenient, channel_from
from .errors import (
    ArgumentError,
    ConsistencyError,
    DomainError,
    ParseError,
    SolverError,
    UnsupportedError,
)
from .sources import SourceCollection, normalize_sources

_USAGE_ERRORS = (ArgumentError, ParseError, UnsupportedError, DomainError)
_SOLVER_ERRORS = (SolverError, ConsistencyError)

_SWEEP_FAMILIES = ("ADAPTED_XOR", "ADAPTED_XOR_V2", "ADAPTED_REDUCED_OR")


class _Ctx:
    def __init__(self, dist: JointDistribution, target: VariableSet,
                 collection: SourceCollection, seed: int):
        self.dist = dist
        self.target = target
        self.collection = collection
        self.seed = seed


def _m_i_total(c: _Ctx) -> float:
    src = [i for i in range(c.dist.n_vars) if i not in c.target]
    if not src:
        raise ArgumentError("no predictor variables outside the target")
    return _mi_lenient(c.dist, src, c.target.indices)


MEASURES: dict[str, Callable[[_Ctx], float]] = {
    "i_total": _m_i_total,
    "i_cup_ci": lambda c: ci_union_information(c.dist, c.target, c.collection),
    "s_ci": lambda c: ci_synergy(c.dist, c.target, c.collection),
    "s_wms": lambda c: wms_synergy(c.dist, c.target),
    "delta_i": lambda c: delta_i_synergy(c.dist, c.target),
    "imin": lambda c: imin_redundancy(c.dist, c.target, c.collection),
    "s_wb": lambda c: wb_synergy(c.dist, c.target),
    "i_cup_wb": lambda c: wb_union_information(c.dist, c.target),
    "s_d": lambda c: s_d(c.dist, c.target, c.collection),
    "i_cup_vk": lambda c: vk_union_information(
        c.dist, c.target, normalize_sources(c.dist, c.collection)
    ).value,
    "i_cap_d": lambda c: degradation_redundancy(
        c.dist, c.target, c.collection, seed=c.seed
    ).value,
    "s_dep": lambda c: dep_synergy(c.dist, c.target)["S"],
}


def _resolve_dist(spec: str, r: float | None) -> JointDistribution:
    if spec.startswith("corpus:"):
        return canonical(spec[len("corpus:"):], r)
    if r is not None:
        raise ArgumentError("--r only applies to corpus: families")
    return load_distribution(spec)


def _resolve_target(dist: JointDistribution, spec: str | None, dist_spec: str) -> VariableSet:
    if spec is None:
        if dist_spec.startswith("corpus:"):
            name = dist_spec[len("corpus:"):]
            if name in CORPUS:
                spec = CORPUS[name].default_target
        if spec is None:
            if "T" in dist.var_names:
                spec = "T"
            else:
                raise ArgumentError("no default target; pass --target")
    names = [t.strip() for t in spec.split(",") if t.strip()]
    if not names:
        raise ArgumentError("target specification is empty")
    return dist.varset(*names)


def _resolve_sources(
    dist: JointDistribution, spec: str | None, target: VariableSet
) -> SourceCollection:
    if spec is None:
        src = [i for i in range(dist.n_vars) if i not in target]
        if not src:
            raise ArgumentError("no predictor variables outside the target")
        return SourceCollection.singletons(src)
    groups = []
    for group in spec.split(";"):
        names = [t.strip() for t in group.split(",") if t.strip()]
        if not names:
            raise ArgumentError(f"empty source group in {spec!r}")
        groups.append(tuple(dist.index_of(n) for n in names))
    return SourceCollection.of(*groups)


def cmd_measure(args) -> int:
    dist = _resolve_dist(args.dist, args.r)
    target = _resolve_target(dist, args.target, args.dist)
    collection = _resolve_sources(dist, args.sources, target)
    ctx = _Ctx(dist, target, collection, args.seed)
    for name in args.measure:
        fn = MEASURES.get(name)
        if fn is None:
            raise ArgumentError(
                f"unknown measure {name!r}; available: {', '.join(MEASURES)}"
            )
        value = fn(ctx)
        print(f"{name}\t{value:.6f}")
    return 0


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def _t_equals_y1() -> JointDistribution:
    rows = [("0", "0", "0"), ("0", "0", "1"), ("1", "1", "0"), ("1", "1", "1")]
    return JointDistribution(("T", "Y1", "Y2"), {r: 0.25 for r in rows})


def _atoms_from_degradation(dist, target, seed):
    coll = _resolve_sources(dist, None, target)
    red = degradation_redundancy(dist, target, coll, seed=seed).value
    return iep_bivariate_from_redundancy(dist, target, red)


_RESULTS_ROWS = [
    ("XOR", 1.0, 1.0, 1.0, 1.0, "1", 1.0),
    ("AND", 0.5, 0.189, 0.104, 0.5, "0.311", 0.270),
    ("COPY", 1.0, 0.0, 0.0, 0.0, "1", 0.0),
    ("RDNXOR", 1.0, 0.0, 1.0, 1.0, "1", 1.0),
    ("RDNUNQXOR", 2.0, 0.0, 1.0, 1.0, "DNF", 1.0),
    ("XORDUPLICATE", 1.0, 1.0, 1.0, 1.0, "1", 1.0),
    ("ANDDUPLICATE", 0.5, -0.123, 0.038, 0.5, "0.311", 0.270),
    ("XORLOSES", 0.0, 0.0, 0.0, 0.0, "0", 0.0),
    ("XORMULTICOAL", 1.0, 1.0, 1.0, 1.0, "DNF", 1.0),
]

_RESULTS_COLUMNS = [
    ("s_wb", 5e-3),
    ("s_wms", 5e-3),
    ("delta_i", 5e-3),
    ("s_d", 2e-2),
    ("s_sd", None),
    ("s_ci", 5e-3),
]


def _results_table_rows(seed: int):
    rows = []
    for name, swb, swms, sdi, sd_val, ssd, sci in _RESULTS_ROWS:
        expected = {
            "s_wb": swb,
            "s_wms": swms,
            "delta_i": sdi,
            "s_d": sd_val,
            "s_sd": ssd,
            "s_ci": sci,
        }
        for measure, tol in _RESULTS_COLUMNS:
            if tol is None:
                rows.append({
                    "case": name, "measure": measure, "fn": None,
                    "expected": expected[measure], "tol": None,
                })
                continue

            def fn(nm=name, ms=measure):
                dist = canonical(nm)
                target = VariableSet.of(dist.index_of("T"))
                ctx = _Ctx(dist, target, _resolve_sources(dist, None, target), seed)
                return MEASURES[ms](ctx)

            rows.append({
                "case": name, "measure": measure, "fn": fn,
                "expected": expected[measure], "tol": tol,
            })
    return rows


_BOOM_PRINTED_GARBLE = [
    [0.0, 1.0, 0.0],
    [0.0, 0.75, 0.25],
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
]


def _worked_example_rows(seed: int):
    rows = []

    def atoms_case(case, dist_fn, expectations, tol):
        for key, exp in expectations:
            def fn(k=key, df=dist_fn):
                dist = df()
                target = VariableSet.of(dist.index_of("T"))
                return _atoms_from_degradation(dist, target, seed)[k]
            rows.append({
                "case": case, "measure": f"atom_{key}", "fn": fn,
                "expected": exp, "tol": tol,
            })

    atoms_case("T-equals-Y1", _t_equals_y1,
               [("R", 0.0), ("U1", 1.0), ("U2", 0.0), ("S", 0.0)], 1e-6)
    atoms_case("COPY", lambda: canonical("COPY"),
               [("R", 0.0), ("U1", 1.0), ("U2", 1.0), ("S", 0.0)], 1e-6)

    def boom_red():
        dist = canonical("BOOM")
        target = VariableSet.of(dist.index_of("T"))
        coll = _resolve_sources(dist, None, target)
        return degradation_redundancy(dist, target, coll, seed=seed).value

    rows.append({"case": "BOOM", "measure": "i_cap_d", "fn": boom_red,
                 "expected": 0.322, "tol": 2e-2})

    def boom_printed_channel():
        dist = canonical("BOOM")
        target = VariableSet.of(dist.index_of("T"))
        k1 = channel_from(dist, target, dist.varset("Y1"))
        return Channel(k1.input_states, k1.input_marginal, (0, 1, 2),
                       _as_matrix(_BOOM_PRINTED_GARBLE))

    def boom_feasible():
        dist = canonical("BOOM")
        target = VariableSet.of(dist.index_of("T"))
        kq = boom_printed_channel()
        k1 = channel_from(dist, target, dist.varset("Y1"))
        k2 = channel_from(dist, target, dist.varset("Y2"))
        return degradation_leq(kq, k1)[0] and degradation_leq(kq, k2)[0]

    rows.append({"case": "BOOM", "measure": "printed_q_feasible",
                 "fn": boom_feasible, "expected": True, "tol": None})

    def boom_printed_mi():
        return boom_printed_channel().mutual_information()

    rows.append({"case": "BOOM", "measure": "printed_q_information",
                 "fn": boom_printed_mi, "expected": 0.322, "tol": 1e-3})

    atoms_case("TWEAKED_COPY", lambda: canonical("TWEAKED_COPY"),
               [("U1", 0.918), ("U2", 0.918), ("S", -0.251)], 1e-2)
    return rows


def _as_matrix(rows):
    import numpy as np

    return np.array(rows, dtype=float)


def _counterexample_rows(seed: int):
    rows = []

    def measure_on(name, measure, target_spec, r=None):
        def fn():
            dist = canonical(name, r)
            target = _resolve_target(dist, target_spec, f"corpus:{name}")
            ctx = _Ctx(dist, target, _resolve_sources(dist, None, target), seed)
            return MEASURES[measure](ctx)
        return fn

    def tmc(target_spec):
        def fn():
            dist = canonical("TARGET_MONO_CI")
            target = _resolve_target(dist, target_spec, "corpus:TARGET_MONO_CI")
            coll = SourceCollection.of(
                (dist.index_of("Y1"),), (dist.index_of("Y2"),)
            )
            return ci_union_information(dist, target, coll)
        return fn

    rows.append({"case": "TARGET_MONO_CI", "measure": "i_cup_ci(T)",
                 "fn": tmc("T"), "expected": 0.91, "tol": 5e-3})
    rows.append({"case": "TARGET_MONO_CI", "measure": "i_cup_ci(T,Z)",
                 "fn": tmc("T,Z"), "expected": 0.90, "tol": 5e-3})
    rows.append({"case": "TARGET_MONO_CI", "measure": "enrichment_decreases",
                 "fn": lambda: tmc("T,Z")() < tmc("T")() - 1e-9,
                 "expected": True, "tol": None})

    def tma(target_spec):
        def fn():
            dist = canonical("TARGET_MONO_AND")
            target = _resolve_target(dist, target_spec, "corpus:TARGET_MONO_AND")
            coll = SourceCollection.of(
                (dist.index_of("Y1"),), (dist.index_of("Y2"),)
            )
            return degradation_redundancy(dist, target, coll, seed=seed).value
        return fn

    rows.append({"case": "TARGET_MONO_AND", "measure": "i_cap_d(T)",
                 "fn": tma("T"), "expected": 0.311, "tol": 2e-2})
    rows.append({"case": "TARGET_MONO_AND", "measure": "i_cap_d(T,Z)",
                 "fn": tma("T,Z"), "expected": 0.0, "tol": 2e-2})

    def cxt(target_spec):
        def fn():
            dist = canonical("COPY_XOR_TARGETS")
            target = _resolve_target(dist, target_spec, "corpus:COPY_XOR_TARGETS")
            coll = SourceCollection.of(
                (dist.index_of("Y1"),), (dist.index_of("Y2"),)
            )
            return ci_synergy(dist, target, coll)
        return fn

    rows.append({"case": "COPY_XOR_TARGETS", "measure": "s_ci(T1)",
                 "fn": cxt("T1"), "expected": 0.0, "tol": 1e-6})
    rows.append({"case": "COPY_XOR_TARGETS", "measure": "s_ci(T2)",
                 "fn": cxt("T2"), "expected": 1.0, "tol": 1e-6})

    ax_mid = measure_on("ADAPTED_XOR", "s_ci", "T", r=0.25)
    ax_avg = lambda: 0.5 * (
        measure_on("ADAPTED_XOR", "s_ci", "T", r=0.0)()
        + measure_on("ADAPTED_XOR", "s_ci", "T", r=0.5)()
    )
    rows.append({"case": "ADAPTED_XOR", "measure": "s_ci(r=0.25)",
                 "fn": ax_mid, "expected": 0.552, "tol": 5e-3})
    rows.append({"case": "ADAPTED_XOR", "measure": "s_ci endpoint average",
                 "fn": ax_avg, "expected": 0.440, "tol": 5e-3})
    rows.append({"case": "ADAPTED_XOR", "measure": "midpoint_above_average",
                 "fn": lambda: ax_mid() > ax_avg(), "expected": True, "tol": None})

    v2_mid = measure_on("ADAPTED_XOR_V2", "s_d", "T", r=0.25)
    v2_avg = lambda: 0.5 * (
        measure_on("ADAPTED_XOR_V2", "s_d", "T", r=0.0)()
        + measure_on("ADAPTED_XOR_V2", "s_d", "T", r=0.5)()
    )
    rows.append({"case": "ADAPTED_XOR_V2", "measure": "s_d(r=0.25)",
                 "fn": v2_mid, "expected": 0.338, "tol": 2e-2})
    rows.append({"case": "ADAPTED_XOR_V2", "measure": "s_d endpoint average",
                 "fn": v2_avg, "expected": 0.3095, "tol": 2e-2})
    rows.append({"case": "ADAPTED_XOR_V2", "measure": "midpoint_above_average",
                 "fn": lambda: v2_mid() > v2_avg(), "expected": True, "tol": None})
    return rows


_TABLES = {
    "results-table": _results_table_rows,
    "worked-examples": _worked_example_rows,
    "counterexamples": _counterexample_rows,
}


def cmd_reproduce(args) -> int:
    builder = _TABLES.get(args.table)
    if builder is None:
        raise ArgumentError(
            f"unknown table {args.table!r}; available: {', '.join(_TABLES)}"
        )
    rows = builder(args.seed)

    any_fail = False
    header = f"{'case':<18} {'measure':<26} {'computed':>12} {'expected':>12}  status"
    print(header)
    print("-" * len(header))
    for row in rows:
        case, measure = row["case"], row["measure"]
        expected, tol, fn = row["expected"], row["tol"], row["fn"]
        if fn is None:
            print(f"{case:<18} {measure:<26} {'-':>12} {str(expected):>12}  skipped")
            continue
        try:
            value = fn()
        except _SOLVER_ERRORS as exc:
            any_fail = True
            print(f"{case:<18} {measure:<26} {'error':>12} {_fmt(expected):>12}  FAIL ({exc})")
            continue
        if isinstance(expected, bool):
            ok = bool(value) is expected
            shown = "yes" if value else "no"
            wanted = "yes" if expected else "no"
        else:
            ok = abs(value - expected) <= tol
            shown = f"{value:.6f}"
            wanted = f"{expected:.6f}"
        any_fail = any_fail or not ok
        print(f"{case:<18} {measure:<26} {shown:>12} {wanted:>12}  {'ok' if ok else 'FAIL'}")
    return 1 if any_fail else 0


def _fmt(expected) -> str:
    if isinstance(expected, bool):
        return "yes" if expected else "no"
    return f"{expected:.6f}"


# ---------------------------------------------------------------------------
# sweep and axioms
# ---------------------------------------------------------------------------


def _parse_grid(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ArgumentError("grid range must look like start:stop:count")
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError:
            raise ArgumentError(f"cannot parse grid {spec!r}") from None
        if count < 2:
            raise ArgumentError("grid range needs at least two points")
        step = (stop - start) / (count - 1)
        values = [start + i * step for i in range(count)]
    else:
        try:
            values = [float(tok) for tok in spec.split(",") if tok.strip()]
        except ValueError:
            raise ArgumentError(f"cannot parse grid {spec!r}") from None
    if not values:
        raise ArgumentError("grid is empty")
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise ArgumentError(f"grid value {v} outside [0, 1]")
    return values


def cmd_sweep(args) -> int:
    if args.family not in _SWEEP_FAMILIES:
        raise ArgumentError(
            f"unknown family {args.family!r}; available: {', '.join(_SWEEP_FAMILIES)}"
        )
    for name in args.measure:
        if name not in MEASURES:
            raise ArgumentError(
                f"unknown measure {name!r}; available: {', '.join(MEASURES)}"
            )
    grid = _parse_grid(args.grid)

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r"] + list(args.measure))
        for r in grid:
            dist = canonical(args.family, r)
            target = VariableSet.of(dist.index_of("T"))
            ctx = _Ctx(dist, target, _resolve_sources(dist, None, target), args.seed)
            writer.writerow([f"{r:g}"] + [f"{MEASURES[m](ctx):.6f}" for m in args.measure])
    return 0


def cmd_axioms(args) -> int:
    reports = run_axiom_suite(trials=args.trials, seed=args.seed)
    width = max(len(r.name) for r in reports)
    failed = False
    for r in reports:
        status = "ok" if r.violations == 0 else "VIOLATED"
        print(
            f"{r.name:<{width}}  {r.violations}/{r.trials} violations  "
            f"worst {r.worst:.3e}  {status}"
        )
        failed = failed or r.violations > 0
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cipid",
        description="Partial information decomposition measures over finite discrete distributions.",
    )
    parser.add_argument("--version", action="version", version=f"cipid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate measures on one distribution")
    p.add_argument("--dist", required=True,
                   help="corpus:NAME or a path to a distribution file")
    p.add_argument("--r", type=float, default=None,
                   help="parameter for parametric corpus families")
    p.add_argument("--target", default=None,
                   help="comma-separated target variable names (default: T)")
    p.add_argument("--sources", default=None,
                   help="source groups like 'Y1,Y2;Y3' (default: all singletons)")
    p.add_argument("--measure", action="append", required=True,
                   help=f"one of: {', '.join(MEASURES)} (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("reproduce", help="recompute a bundled reference table")
    p.add_argument("table", choices=sorted(_TABLES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_reproduce)

    p = sub.add_parser("sweep", help="evaluate measures over a parameter grid")
    p.add_argument("--family", required=True)
    p.add_argument("--grid", required=True,
                   help="comma list like 0,0.25,0.5 or a range start:stop:count")
    p.add_argument("--measure", action="append", required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("axioms", help="run the randomized property suite")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_axioms)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
