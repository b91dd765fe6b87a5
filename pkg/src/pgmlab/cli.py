"""Command-line front end.

Subcommands: ``run`` (one experiment: build the family, the PGM, measure and
verify), ``gelfand`` (pair decision), ``predict`` (closed forms only),
``group-info`` (group/subgroup arithmetic), and ``suite`` (the full
acceptance fixture table, one CSV row per check).

Exit codes: 0 pass, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, gelfand, pgm, reps
from .groups import (
    DimensionGuardError,
    Group,
    GroupSpecError,
    Subgroup,
    all_subgroups,
    conjugate_family,
    load_group_json,
    make_group,
    normal_core,
    normalizer,
    parse_subgroup_spec,
)
from .linalg import power_mean_gap, rank_eps
from .states import density_family, mixture

SCHEMA_VERSION = 1
CONSISTENCY_TOL = 1e-9

RUN_FIELDS = [
    "schema_version", "command", "group", "subgroup", "k",
    "order", "subgroup_order", "n_conjugates", "normalizer_order", "core_order",
    "gelfand", "p_success_measured", "p_success_predicted", "core_bound",
    "bound_planch_form", "bound_core_form",
    "eq4_residual", "eq5_residual", "eq6_witness", "optimality_tol",
    "optimality_passed", "optimality_gated",
    "planch_SH", "planch_source", "planch_irrep",
    "consistency_passed", "seed", "duration_s",
]

SUITE_FIELDS = ["criterion", "fixture", "quantity", "value", "target", "tol", "passed"]


@dataclass
class SuiteRow:
    criterion: str
    fixture: str
    quantity: str
    value: float
    target: str
    tol: float
    passed: bool

    def as_list(self) -> list:
        return [self.criterion, self.fixture, self.quantity,
                repr(self.value), self.target, repr(self.tol), self.passed]


def _parse_group(spec: str, max_order: int) -> Group:
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        group = load_group_json(path)
        if group.order > max_order:
            raise DimensionGuardError(
                f"group order {group.order} exceeds the guard {max_order}")
        return group
    return make_group(spec, max_order=max_order)


def _emit(report: dict, fields: list[str], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(fields)
        writer.writerow([report.get(f, "") for f in fields])
        text = buf.getvalue()
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# run


def run_experiment(group_spec: str, subgroup_spec: str, k: int,
                   tol: float | None, max_dim: int, seed: int) -> dict:
    """Build the family, measure the PGM, and verify; returns the report dict."""
    t0 = time.perf_counter()
    G = _parse_group(group_spec, max_dim)
    H = parse_subgroup_spec(G, subgroup_spec)
    fam = conjugate_family(H)
    core = normal_core(H)
    pair_is_gelfand = gelfand.is_gelfand(G, H)

    family = density_family(G, H, k, max_dim=max_dim)
    mix = mixture(family)
    povm = pgm.build_pgm(family, mix)
    measured = pgm.success_probability(povm, family)
    report_tol = tol if tol is not None else pgm.default_optimality_tol(family)
    opt = pgm.verify_optimality(povm, family, tol=report_tol)

    # Plancherel mass from the single-register mixture (cheap at desk scale).
    planch = analysis.planch_from_rank(G, H) if k > 1 else rank_eps(mix.operator) / G.order
    planch_irrep = analysis.planch_from_irreps(G, H)
    predicted = H.order / fam.size * planch if k == 1 else None
    core_bound = analysis.core_bound_single(G, H)
    bounds = analysis.multiregister_bound(G, H, k, planch=planch, gelfand=pair_is_gelfand)

    # The optimality conditions are a guarantee for one register (any pair)
    # and for any k on Gel'fand pairs; elsewhere residuals are informational.
    gated = k == 1 or pair_is_gelfand
    consistency = measured <= 1.0 + CONSISTENCY_TOL and measured >= -CONSISTENCY_TOL
    if predicted is not None:
        consistency &= abs(measured - predicted) <= CONSISTENCY_TOL
    if pair_is_gelfand:
        consistency &= measured <= bounds.planch_form + CONSISTENCY_TOL
        consistency &= bounds.planch_form <= bounds.core_form + CONSISTENCY_TOL

    return {
        "schema_version": SCHEMA_VERSION,
        "command": "run",
        "group": group_spec,
        "subgroup": subgroup_spec,
        "k": k,
        "order": G.order,
        "subgroup_order": H.order,
        "n_conjugates": fam.size,
        "normalizer_order": normalizer(H).order,
        "core_order": core.order,
        "gelfand": pair_is_gelfand,
        "p_success_measured": measured,
        "p_success_predicted": predicted,
        "core_bound": core_bound,
        "bound_planch_form": bounds.planch_form,
        "bound_core_form": bounds.core_form,
        "eq4_residual": opt.eq4_residual,
        "eq5_residual": opt.eq5_residual,
        "eq6_witness": opt.eq6_witness,
        "optimality_tol": opt.tol,
        "optimality_passed": opt.passed,
        "optimality_gated": gated,
        "planch_SH": planch,
        "planch_source": "rank-of-M",
        "planch_irrep": planch_irrep,
        "consistency_passed": bool(consistency),
        "seed": seed,
        "duration_s": time.perf_counter() - t0,
    }


def cmd_run(args) -> int:
    report = run_experiment(args.group, args.subgroup, args.k, args.tol,
                            args.max_dim, args.seed)
    _emit(report, RUN_FIELDS, args.format, args.out)
    ok = report["consistency_passed"] and (
        report["optimality_passed"] or not report["optimality_gated"])
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# gelfand / predict / group-info


def cmd_gelfand(args) -> int:
    G = _parse_group(args.group, args.max_dim)
    failures = 0
    rows = []
    if args.subgroup == "all":
        subgroups = all_subgroups(G)
    else:
        subgroups = [parse_subgroup_spec(G, args.subgroup)]
    for H in subgroups:
        verdict = gelfand.is_gelfand(G, H)
        algebra = gelfand.hecke_algebra(G, H)
        cross = None
        try:
            table = reps.irrep_table(G)
            cross = reps.gelfand_multiplicity_check(table, H)
        except reps.UnsupportedFamilyError:
            pass
        if cross is not None and cross != verdict:
            failures += 1
        rows.append({
            "schema_version": SCHEMA_VERSION,
            "command": "gelfand",
            "group": args.group,
            "subgroup": args.subgroup if args.subgroup != "all" else repr(list(H.elements)),
            "subgroup_order": H.order,
            "gelfand": verdict,
            "n_double_cosets": algebra.n_blocks,
            "multiplicity_check": cross,
        })
    payload = rows[0] if len(rows) == 1 else {"schema_version": SCHEMA_VERSION,
                                              "command": "gelfand", "results": rows}
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 1 if failures else 0


def cmd_predict(args) -> int:
    G = _parse_group(args.group, args.max_dim)
    H = parse_subgroup_spec(G, args.subgroup)
    ks = tuple(range(1, args.k + 1))
    pred = analysis.predict(G, H, ks=ks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "predict",
        "group": args.group,
        "subgroup": args.subgroup,
        "order": G.order,
        "subgroup_order": pred.subgroup_order,
        "n_conjugates": pred.n_conjugates,
        "core_order": pred.core_order,
        "planch_SH": pred.planch_SH,
        "planch_source": pred.planch_source,
        "planch_irrep": pred.planch_irrep,
        "p_success": pred.p_success,
        "core_bound": pred.core_bound,
        "multiregister_bounds": {
            str(k): {"planch_form": b.planch_form, "core_form": b.core_form}
            for k, b in pred.multiregister_bounds.items()
        },
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_group_info(args) -> int:
    G = _parse_group(args.group, args.max_dim)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "group-info",
        "group": args.group,
        "family": G.family,
        "order": G.order,
        "labels": list(G.labels) if G.order <= 64 else list(G.labels[:16]) + ["..."],
    }
    if args.subgroup:
        H = parse_subgroup_spec(G, args.subgroup)
        fam = conjugate_family(H)
        report.update({
            "subgroup": args.subgroup,
            "subgroup_order": H.order,
            "subgroup_elements": list(H.elements),
            "n_conjugates": fam.size,
            "normalizer_order": normalizer(H).order,
            "core_order": normal_core(H).order,
        })
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# acceptance suite


def _row(criterion, fixture, quantity, value, target, tol, passed) -> SuiteRow:
    return SuiteRow(criterion, fixture, quantity, float(value), target,
                    float(tol), bool(passed))


def _transposition_spec(G: Group) -> str:
    n = len(G.labels[0])
    swapped = "".join(map(str, [1, 0] + list(range(2, n))))
    return f"gens=[{G.labels.index(swapped)}]"


def _measure(group_spec, subgroup_spec, k=1, negative_control=False):
    G = make_group(group_spec)
    H = parse_subgroup_spec(G, subgroup_spec)
    family = density_family(G, H, k)
    mix = mixture(family)
    povm = pgm.uniform_guess_povm(family) if negative_control else pgm.build_pgm(family, mix)
    return G, H, family, mix, povm


def acceptance_rows(seed: int = 0, negative_control: bool = False) -> list[SuiteRow]:
    """Evaluate the acceptance fixture table; one row per check.

    With ``negative_control=True`` the PGM is replaced by the guess-at-random
    POVM in the optimality fixtures, which must make the suite fail.
    """
    rows: list[SuiteRow] = []

    # C1: dihedral closed form
    for n in (3, 5, 7, 9):
        spec = f"dihedral:n={n}"
        _, _, family, _, povm = _measure(spec, "reflection")
        measured = pgm.success_probability(povm, family)
        target = analysis.dihedral_closed_form(n)
        rows.append(_row("C1", f"{spec}/reflection", "p_success", measured,
                         repr(target), 1e-9, abs(measured - target) <= 1e-9))

    # C2: affine closed form
    for p in (3, 5, 7):
        spec = f"affine:p={p}"
        _, _, family, _, povm = _measure(spec, "zp_star")
        measured = pgm.success_probability(povm, family)
        target = analysis.affine_closed_form(p)
        rows.append(_row("C2", f"{spec}/zp_star", "p_success", measured,
                         repr(target), 1e-9, abs(measured - target) <= 1e-9))

    # C3 + C4: single-register optimality and the success identity
    s4 = make_group("symmetric:n=4")
    fixtures = [
        ("dihedral:n=3", "reflection"), ("dihedral:n=5", "reflection"),
        ("dihedral:n=7", "reflection"),
        ("affine:p=3", "zp_star"), ("affine:p=5", "zp_star"),
        ("symmetric:n=4", "matching"), ("symmetric:n=4", "hyperoctahedral"),
        ("symmetric:n=4", "young:2"), ("symmetric:n=4", _transposition_spec(s4)),
        ("heisenberg:p=3", "gens=[9]"),
    ]
    for gspec, hspec in fixtures:
        G, H, family, mix, povm = _measure(gspec, hspec, negative_control=negative_control)
        name = f"{gspec}/{hspec}"
        opt = pgm.verify_optimality(povm, family, tol=1e-8)
        worst = max(opt.eq4_residual, opt.eq5_residual, max(0.0, -opt.eq6_witness))
        rows.append(_row("C3", name, "optimality_residual", worst, "<=1e-8",
                         1e-8, opt.passed))
        measured = pgm.success_probability(povm, family)
        predicted = H.order / conjugate_family(H).size * (rank_eps(mix.operator) / G.order)
        rows.append(_row("C4", name, "|measured - formula|",
                         abs(measured - predicted), "<=1e-9", 1e-9,
                         abs(measured - predicted) <= 1e-9))
        irrep_planch = analysis.planch_from_irreps(G, H)
        if irrep_planch is not None:
            gap = abs(rank_eps(mix.operator) / G.order - irrep_planch)
            rows.append(_row("C4", name, "planch_rank_vs_irrep", gap,
                             "<=1e-9", 1e-9, gap <= 1e-9))

    # C5: the S4 matching instance
    _, _, family, _, povm = _measure("symmetric:n=4", "matching")
    measured = pgm.success_probability(povm, family)
    rows.append(_row("C5", "symmetric:n=4/matching", "p_success", measured,
                     "2/3", 1e-9, abs(measured - 2 / 3) <= 1e-9))

    # C6 + C7: multiregister optimality, bounds, and monotonicity
    success_by_k: dict[tuple[str, int], float] = {}
    multi = [("dihedral:n=3", 1), ("dihedral:n=3", 2), ("dihedral:n=3", 3),
             ("dihedral:n=5", 1), ("dihedral:n=5", 2)]
    for gspec, k in multi:
        G, H, family, mix, povm = _measure(gspec, "reflection", k=k)
        measured = pgm.success_probability(povm, family)
        success_by_k[(gspec, k)] = measured
        name = f"{gspec}/reflection/k={k}"
        if k > 1:
            opt = pgm.verify_optimality(povm, family, tol=1e-7)
            worst = max(opt.eq4_residual, opt.eq5_residual, max(0.0, -opt.eq6_witness))
            rows.append(_row("C6", name, "optimality_residual", worst,
                             "<=1e-7", 1e-7, opt.passed))
        bounds = analysis.multiregister_bound(G, H, k, gelfand=True)
        ok = (measured <= bounds.planch_form + 1e-9
              and bounds.planch_form <= bounds.core_form + 1e-9)
        rows.append(_row("C7", name, "measured_vs_bounds",
                         bounds.planch_form - measured, ">=-1e-9", 1e-9, ok))
    for gspec, kmax in (("dihedral:n=3", 3), ("dihedral:n=5", 2)):
        seq = [success_by_k[(gspec, k)] for k in range(1, kmax + 1)]
        mono = all(b >= a - 1e-9 for a, b in zip(seq, seq[1:]))
        rows.append(_row("C7", f"{gspec}/reflection", "monotone_in_k",
                         min(b - a for a, b in zip(seq, seq[1:])), ">=-1e-9",
                         1e-9, mono))

    # C8: partial measurement on the 7 conjugates in dihedral n=7
    G, H, family, mix, povm = _measure("dihedral:n=7", "reflection")
    partition = [[0, 1, 2], [3, 4, 5, 6]]
    coarse_povm = pgm.coarse_grain(povm, partition)
    coarse_fam = pgm.coarse_family(family, partition)
    opt = pgm.verify_optimality(coarse_povm, coarse_fam, tol=1e-8)
    worst = max(opt.eq4_residual, opt.eq5_residual, max(0.0, -opt.eq6_witness))
    rows.append(_row("C8", "dihedral:n=7/reflection/split-3-4",
                     "optimality_residual", worst, "<=1e-8", 1e-8, opt.passed))

    # C9: the Gel'fand fixture table
    gel_true = [("dihedral:n=3", "reflection"), ("dihedral:n=5", "reflection"),
                ("dihedral:n=7", "reflection"), ("dihedral:n=9", "reflection"),
                ("affine:p=3", "zp_star"), ("affine:p=5", "zp_star"),
                ("affine:p=7", "zp_star"),
                ("symmetric:n=4", "hyperoctahedral"), ("symmetric:n=4", "young:2"),
                ("symmetric:n=4", "young:1")]
    for gspec, hspec in gel_true:
        G = make_group(gspec)
        H = parse_subgroup_spec(G, hspec)
        verdict = gelfand.is_gelfand(G, H)
        rows.append(_row("C9", f"{gspec}/{hspec}", "gelfand", float(verdict),
                         "True", 0.0, verdict))
        cross = None
        try:
            cross = reps.gelfand_multiplicity_check(reps.irrep_table(G), H)
        except reps.UnsupportedFamilyError:
            pass
        if cross is not None:
            rows.append(_row("C9", f"{gspec}/{hspec}", "criteria_1_vs_3",
                             float(cross == verdict), "True", 0.0, cross == verdict))
    heis = make_group("heisenberg:p=3")
    verdicts = [gelfand.is_gelfand(heis, H) for H in all_subgroups(heis)]
    rows.append(_row("C9", f"heisenberg:p=3/all-{len(verdicts)}-subgroups",
                     "gelfand", float(all(verdicts)), "True", 0.0, all(verdicts)))
    G = make_group("symmetric:n=4")
    H = parse_subgroup_spec(G, _transposition_spec(G))
    verdict = gelfand.is_gelfand(G, H)
    rows.append(_row("C9", "symmetric:n=4/<transposition>", "gelfand",
                     float(verdict), "False", 0.0, not verdict))

    # C10: power-mean inequality trials
    rng = np.random.default_rng(seed)
    worst_gap = np.inf
    for _ in range(1000):
        d = int(rng.integers(2, 17))
        r = int(rng.integers(1, d + 1))
        B = rng.standard_normal((r, d)) + 1j * rng.standard_normal((r, d))
        A = B.conj().T @ B
        v = A @ (rng.standard_normal(d) + 1j * rng.standard_normal(d))
        worst_gap = min(worst_gap, power_mean_gap(A, v))
    rows.append(_row("C10", f"seed={seed}", "min_gap_1000_trials", worst_gap,
                     ">=-1e-9", 1e-9, worst_gap >= -1e-9))
    eq_gap = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 17))
        r = int(rng.integers(1, d + 1))
        Q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        proj = Q[:, :r] @ Q[:, :r].conj().T
        c = float(rng.uniform(0.1, 10.0))
        v = proj @ (rng.standard_normal(d) + 1j * rng.standard_normal(d))
        eq_gap = max(eq_gap, abs(power_mean_gap(c * proj, v)))
    rows.append(_row("C10", f"seed={seed}", "scalar_case_equality", eq_gap,
                     "<=1e-9", 1e-9, eq_gap <= 1e-9))

    # C11: scaled-projector capacity bound on the Gel'fand fixtures
    capacity_fixtures = [("dihedral:n=3", "reflection"), ("dihedral:n=5", "reflection"),
                         ("affine:p=5", "zp_star"),
                         ("symmetric:n=4", "hyperoctahedral"),
                         ("symmetric:n=4", "young:2"), ("symmetric:n=4", "young:1"),
                         ("heisenberg:p=3", "gens=[9]")]
    for gspec, hspec in capacity_fixtures:
        G, H, family, mix, povm = _measure(gspec, hspec)
        blocks = pgm.mixture_eigenblocks(mix)
        report = pgm.capacity_check(povm, family, blocks=blocks, tol=1e-8)
        slack = min(b.bound - b.mean_success for b in report.blocks)
        rows.append(_row("C11", f"{gspec}/{hspec}", "capacity",
                         slack, ">=-1e-9",
                         1e-9, report.structure_ok and report.holds))

    # C12: Fourier block structure and the negative control
    for gspec, hspec in (("dihedral:n=5", "reflection"), ("affine:p=5", "zp_star")):
        G, H, family, mix, povm = _measure(gspec, hspec)
        table = reps.irrep_table(G)
        worst = 0.0
        for conj, rho, E in zip(family.conjugates.conjugates, family.densities,
                                povm.operators):
            worst = max(worst, reps.verify_block_structure(rho, table, conj).max_residual)
            worst = max(worst, reps.verify_pgm_blocks(E, table, conj).max_residual)
        rows.append(_row("C12", f"{gspec}/{hspec}", "block_residual", worst,
                         "<=1e-9", 1e-9, worst <= 1e-9))
    G, H, family, mix, _ = _measure("dihedral:n=5", "reflection")
    guess = pgm.uniform_guess_povm(family)
    opt = pgm.verify_optimality(guess, family, tol=1e-8)
    rows.append(_row("C12", "dihedral:n=5/uniform-guess", "eq4_residual",
                     opt.eq4_residual, ">1e-3", 1e-3,
                     opt.eq4_residual > 1e-3 and not opt.passed))

    return rows


def cmd_suite(args) -> int:
    rows = acceptance_rows(seed=args.seed, negative_control=args.negative_control)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(SUITE_FIELDS)
    for row in rows:
        writer.writerow(row.as_list())
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.criterion} {r.fixture} {r.quantity}={r.value!r} target {r.target}",
              file=sys.stderr)
    print(f"suite: {len(rows) - len(failed)}/{len(rows)} checks passed", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgmlab",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, subgroup_required=True):
        p.add_argument("--group", required=True,
                       help="group spec (e.g. dihedral:n=5) or a JSON table path")
        p.add_argument("--subgroup", required=subgroup_required,
                       help="subgroup spec: gens=[i,...] or a named shortcut")
        p.add_argument("--max-dim", type=int, default=2048,
                       help="dimension guard override")
        p.add_argument("--out", help="write the report to this path")

    p_run = sub.add_parser("run", help="build the PGM and verify it")
    common(p_run)
    p_run.add_argument("--k", type=int, default=1, help="number of registers")
    p_run.add_argument("--tol", type=float, default=None,
                       help="optimality tolerance (default scales with dim)")
    p_run.add_argument("--format", choices=("json", "csv"), default="json")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.set_defaults(func=cmd_run)

    p_gel = sub.add_parser("gelfand", help="Gel'fand pair decision")
    common(p_gel)
    p_gel.set_defaults(func=cmd_gelfand)

    p_pred = sub.add_parser("predict", help="closed forms and bounds only")
    common(p_pred)
    p_pred.add_argument("--k", type=int, default=1,
                        help="report bounds for 1..k registers")
    p_pred.set_defaults(func=cmd_predict)

    p_info = sub.add_parser("group-info", help="group and subgroup arithmetic")
    common(p_info, subgroup_required=False)
    p_info.set_defaults(func=cmd_group_info)

    p_suite = sub.add_parser("suite", help="run the acceptance fixture table")
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--out", help="write the CSV to this path")
    p_suite.add_argument("--negative-control", action="store_true",
                         help="self-test: replace the PGM by uniform guessing "
                              "and require the suite to fail")
    p_suite.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GroupSpecError, DimensionGuardError, FileNotFoundError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
