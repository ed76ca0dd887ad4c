"""Command-line front end: closed forms, quadrature, Monte Carlo estimates,
benchmark table reproduction, and boundary-data emission.

Exit codes: 0 success, 2 usage or parameter-invariant error, 3 numerical
failure (quadrature non-convergence).  RISKCAL_SEED provides the default
seed for stochastic subcommands.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any

from . import firstorder, montecarlo, risk
from .quadrature import QuadratureError
from .stability import (
    CoefficientIndex,
    RationalTF,
    closed_loop_charpoly,
    coefficient_offset,
    default_slack,
    destabilizing_value,
    is_hurwitz,
    substitute_coefficient,
)

ROW1 = firstorder.TABLE1_CASES[0]


@dataclass
class RunReport:
    """One command's echoed inputs and named results; serializes losslessly."""

    command: str
    params: dict[str, Any]
    results: dict[str, Any]
    provenance: str  # closed-form | quadrature | monte-carlo
    seed: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunReport":
        return cls(
            command=d["command"],
            params=dict(d["params"]),
            results=dict(d["results"]),
            provenance=d["provenance"],
            seed=d["seed"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"command: {self.command}", "parameters:"]
        for key, val in self.params.items():
            lines.append(f"  {key} = {_fmt(val)}")
        lines.append(f"results ({self.provenance}):")
        for key, val in self.results.items():
            lines.append(f"  {key} = {_fmt(val)}")
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        return "\n".join(lines)


def _fmt(val: Any) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return f"{val:.6g}"
    if isinstance(val, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in val) + "]"
    return str(val)


def _case_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("case parameters (defaults: benchmark row 1)")
    g.add_argument("--a", type=float, default=ROW1.a, help="controller A pole offset, a > 0")
    g.add_argument("--r", type=float, default=ROW1.r, help="uncertainty box radius, r > 0")
    g.add_argument("--p0", type=float, default=ROW1.p0, help="mean of plant pole p, p0 < 0")
    g.add_argument("--q0", type=float, default=ROW1.q0, help="mean of plant gain q, q0 > 0")
    g.add_argument("--sp", type=float, default=ROW1.sigma_p, help="std dev of p, > 0")
    g.add_argument("--sq", type=float, default=ROW1.sigma_q, help="std dev of q, > 0")
    g.add_argument("--ka", type=float, default=ROW1.k_a, help="controller A gain, K_A > 0")
    g.add_argument("--kb", type=float, default=ROW1.k_b, help="controller B gain, 1 < K_B < K_A/a")


def _case_from_args(args: argparse.Namespace) -> firstorder.FirstOrderCase:
    return firstorder.FirstOrderCase(
        a=args.a, r=args.r, p0=args.p0, q0=args.q0,
        sigma_p=args.sp, sigma_q=args.sq, k_a=args.ka, k_b=args.kb,
    )


def _case_params(case: firstorder.FirstOrderCase) -> dict[str, Any]:
    return {
        "a": case.a, "r": case.r, "p0": case.p0, "q0": case.q0,
        "sigma_p": case.sigma_p, "sigma_q": case.sigma_q,
        "K_A": case.k_a, "K_B": case.k_b,
    }


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RISKCAL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"RISKCAL_SEED must be an integer, got {env!r}") from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskcal",
        description="Quantify and compare failure risk of worst-case vs probabilistic controllers "
        "for the uncertain plant q/(s-p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str, case: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="emit a JSON report instead of text")
        if case:
            _case_flags(p)
        return p

    add("table1", "reproduce the two-row benchmark risk-comparison table")

    add("margins", "guaranteed stability radii of both designs", case=True)
    add("pbox", "Gaussian probability mass covered by the box B(r)", case=True)
    add("pb", "volume fraction of B(r) stabilized by controller B", case=True)
    p = add("pca", "probability that controller A fails (polar quadrature)", case=True)
    p.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
    add("pcb", "probability that controller B fails (closed form)", case=True)
    p = add("ratio", "risk ratio P_CA / P_CB", case=True)
    p.add_argument("--tol", type=float, default=1e-9, help="absolute tolerance for P_CA")
    add("suffcond", "sufficient condition for controller A to be riskier", case=True)

    p = add("mc", "Monte Carlo estimate of a failure probability or box fraction", case=True)
    p.add_argument("--controller", choices=["A", "B"], required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None, help="default: RISKCAL_SEED or 0")
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument(
        "--uniform-box", action="store_true",
        help="estimate the stable volume fraction of B(r) instead of the Gaussian failure probability",
    )

    p = add("boundary", "write stability-boundary polylines as CSV (series,q,p)", case=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", default=None, help="also render a static SVG overlay")
    p.add_argument("--points", type=int, default=64, help="points per segment (>= 2)")
    p.add_argument("--no-ellipses", action="store_true", help="omit the 1- and 2-sigma ellipses")

    p = add("destabilize", "coefficient value that breaks a stabilized loop")
    p.add_argument("--num", type=float, nargs="+", required=True, help="plant numerator, descending powers")
    p.add_argument("--den", type=float, nargs="+", required=True, help="plant denominator, descending powers")
    p.add_argument("--cnum", type=float, nargs="+", required=True, help="controller numerator")
    p.add_argument("--cden", type=float, nargs="+", required=True, help="controller denominator (monic)")
    p.add_argument("--coeff", required=True, help="target coefficient, den:TAU or num:IOTA")
    p.add_argument("--slack", type=float, default=None, help="margin past the threshold (default 1e-3*(1+|offset|))")

    p = add("samplesize", "trials needed to detect an epsilon-non-robust design")
    p.add_argument("--eps", type=float, required=True, help="violation volume fraction, in (0,1)")
    p.add_argument("--delta", type=float, required=True, help="allowed miss probability, in (0,1)")

    p = add("riskratio", "abstract risk-ratio algebra over the sets M and E")
    p.add_argument("--pm", type=float, required=True, help="Pr(M), modeled-and-possible mass")
    p.add_argument("--pe", type=float, required=True, help="Pr(E), unmodeled-but-possible mass")
    p.add_argument("--vpm", type=float, required=True, help="violation rate of the probabilistic design on M")
    p.add_argument("--vpe", type=float, required=True, help="violation rate of the probabilistic design on E")
    p.add_argument("--vwe", type=float, required=True, help="violation rate of the worst-case design on E")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="also evaluate the ratio-below-one certificate at this split")

    return parser


def _table1_row(case: firstorder.FirstOrderCase) -> dict[str, Any]:
    row = _case_params(case)
    row["P_box"] = firstorder.coverage_probability(case)
    row["P_B_r"] = firstorder.stable_fraction(case)
    row["P_CA"] = firstorder.prob_instability_a(case)
    row["P_CB"] = firstorder.prob_instability_b(case)
    row["ratio"] = row["P_CA"] / row["P_CB"]
    return row


def _table1_text(rows: list[dict[str, Any]]) -> str:
    headers = ["a", "r", "p0", "q0", "sigma_p", "sigma_q", "K_A", "K_B",
               "P_box", "P_B_r", "P_CA", "ratio"]
    rendered = [headers]
    for row in rows:
        rendered.append([
            f"{row['a']:g}", f"{row['r']:g}", f"{row['p0']:g}", f"{row['q0']:g}",
            f"{row['sigma_p']:g}", f"{row['sigma_q']:g}", f"{row['K_A']:g}", f"{row['K_B']:g}",
            f"{row['P_box']:.2f}", f"{row['P_B_r']:.4f}", f"{row['P_CA']:.1e}", f"{row['ratio']:.1e}",
        ])
    widths = [max(len(r[i]) for r in rendered) for i in range(len(headers))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rendered)


def _cmd_table1(args: argparse.Namespace) -> int:
    rows = [_table1_row(case) for case in firstorder.TABLE1_CASES]
    report = RunReport("table1", params={}, results={"rows": rows}, provenance="quadrature")
    if args.json:
        print(report.to_json())
    else:
        print(_table1_text(rows))
    return 0


def _case_report(args: argparse.Namespace, command: str, results: dict[str, Any],
                 provenance: str, extra_params: dict[str, Any] | None = None,
                 seed: int | None = None) -> RunReport:
    case = _case_from_args(args)
    params = _case_params(case)
    if extra_params:
        params.update(extra_params)
    return RunReport(command, params, results, provenance, seed)


def _cmd_margins(args) -> RunReport:
    m = firstorder.margins(_case_from_args(args))
    return _case_report(args, "margins", {
        "rho_A": m.rho_a, "rho_B": m.rho_b, "rho_B_star": m.rho_b_star,
        "r_in_gap": m.r_in_gap,
    }, "closed-form")


def _cmd_pbox(args) -> RunReport:
    case = _case_from_args(args)
    return _case_report(args, "pbox", {"P_box": firstorder.coverage_probability(case)}, "closed-form")


def _cmd_pb(args) -> RunReport:
    case = _case_from_args(args)
    stable = firstorder.stable_fraction(case)
    return _case_report(args, "pb", {
        "P_B_r": stable, "instability_fraction": 1.0 - stable,
    }, "closed-form")


def _cmd_pca(args) -> RunReport:
    case = _case_from_args(args)
    return _case_report(args, "pca", {
        "P_CA": firstorder.prob_instability_a(case, args.tol),
    }, "quadrature", extra_params={"tol": args.tol})


def _cmd_pcb(args) -> RunReport:
    case = _case_from_args(args)
    return _case_report(args, "pcb", {"P_CB": firstorder.prob_instability_b(case)}, "closed-form")


def _cmd_ratio(args) -> RunReport:
    case = _case_from_args(args)
    pa = firstorder.prob_instability_a(case, args.tol)
    pb = firstorder.prob_instability_b(case)
    return _case_report(args, "ratio", {
        "P_CA": pa, "P_CB": pb, "ratio": pa / pb,
    }, "quadrature", extra_params={"tol": args.tol})


def _cmd_suffcond(args) -> RunReport:
    case = _case_from_args(args)
    lhs = 1.0 + (case.k_b * case.sigma_q / case.sigma_p) ** 2
    rhs = ((case.k_b * case.q0 - case.p0) / (case.a - case.p0)) ** 2
    return _case_report(args, "suffcond", {
        "lhs": lhs, "rhs": rhs, "holds": firstorder.sufficient_condition(case),
    }, "closed-form")


def _cmd_mc(args) -> RunReport:
    case = _case_from_args(args)
    seed = _resolve_seed(args)
    stable = firstorder.stable_a if args.controller == "A" else firstorder.stable_b
    if args.uniform_box:
        est = montecarlo.uniform_box_fraction(
            lambda p, q: stable(p, q, case), case, args.samples,
            seed=seed, confidence=args.confidence, partitions=args.partitions,
        )
        estimand = f"box_stable_fraction_{args.controller}"
    else:
        est = montecarlo.estimate_probability(
            lambda p, q: not stable(p, q, case), case, args.samples,
            confidence=args.confidence, seed=seed, partitions=args.partitions,
        )
        estimand = f"P_C{args.controller}"
    return _case_report(args, "mc", {
        "estimand": estimand, "p_hat": est.p_hat,
        "ci_low": est.ci_low, "ci_high": est.ci_high,
        "n": est.n, "confidence": est.confidence, "partitions": est.partitions,
    }, "monte-carlo", extra_params={
        "controller": args.controller, "samples": args.samples,
        "confidence": args.confidence, "partitions": args.partitions,
        "uniform_box": args.uniform_box,
    }, seed=seed)


def _write_svg(dataset: firstorder.BoundaryDataset, case: firstorder.FirstOrderCase, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5.5))
    for name, points in dataset.series.items():
        qs = [q for q, _ in points]
        ps = [p for _, p in points]
        style = {"box": dict(color="black", lw=1.5)}.get(name, {})
        ax.plot(qs, ps, label=name, **style)
    ax.set_xlim(case.q0 - 2 * case.r, case.q0 + 2 * case.r)
    ax.set_ylim(case.p0 - 2 * case.r, case.p0 + 2 * case.r)
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    ax.legend(fontsize=8)
    ax.set_title("stability boundaries and uncertainty box")
    fig.savefig(path, format="svg")
    plt.close(fig)


def _cmd_boundary(args) -> RunReport:
    case = _case_from_args(args)
    dataset = firstorder.boundary_dataset(case, args.points, include_ellipses=not args.no_ellipses)
    rows = 0
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["series", "q", "p"])
        for name, q, p in dataset.iter_rows():
            writer.writerow([name, repr(q), repr(p)])
            rows += 1
    if args.svg:
        _write_svg(dataset, case, args.svg)
    return _case_report(args, "boundary", {
        "out": args.out, "svg": args.svg, "rows_written": rows,
        "series": list(dataset.series),
    }, "closed-form", extra_params={
        "points": args.points, "ellipses": not args.no_ellipses,
    })


def _cmd_destabilize(args) -> RunReport:
    plant = RationalTF.from_coeffs(args.num, args.den)
    controller = RationalTF.from_coeffs(args.cnum, args.cden)
    which = CoefficientIndex.parse(args.coeff)
    offset = coefficient_offset(controller, plant, which)
    value = destabilizing_value(controller, plant, which, args.slack)
    slack_used = args.slack if args.slack is not None else default_slack(offset)
    nominal_poly = plant.den if which.kind.value == "den" else plant.num
    nominal = nominal_poly.coeffs[which.index]
    perturbed = substitute_coefficient(plant, which, value)
    verified = not is_hurwitz(closed_loop_charpoly(controller, perturbed))
    return RunReport("destabilize", params={
        "num": list(args.num), "den": list(args.den),
        "cnum": list(args.cnum), "cden": list(args.cden),
        "coeff": str(which), "slack": args.slack,
    }, results={
        "offset": offset, "value": value, "slack_used": slack_used,
        "nominal_coefficient": nominal,
        "distance_from_nominal": abs(value - nominal),
        "verified_unstable": verified,
    }, provenance="closed-form")


def _cmd_samplesize(args) -> RunReport:
    plan = montecarlo.required_samples(args.eps, args.delta)
    return RunReport("samplesize", params={"eps": plan.epsilon, "delta": plan.delta},
                     results={"n_required": plan.n_required}, provenance="closed-form")


def _cmd_riskratio(args) -> RunReport:
    scenario = risk.RiskScenario(
        pr_m=args.pm, pr_e=args.pe,
        v_p_given_m=args.vpm, v_p_given_e=args.vpe, v_w_given_e=args.vwe,
    )
    results: dict[str, Any] = {
        "risk_probabilistic": risk.risk_probabilistic(scenario),
        "risk_worstcase": risk.risk_worstcase(scenario),
        "risk_ratio": risk.risk_ratio(scenario),
    }
    if scenario.v_w_given_e * scenario.pr_e > 0.0:
        results["flat_degradation_ratio"] = risk.flat_degradation_ratio(scenario)
    params = {"pm": args.pm, "pe": args.pe, "vpm": args.vpm, "vpe": args.vpe, "vwe": args.vwe}
    if args.lam is not None:
        params["lambda"] = args.lam
        results["certificate_below_one"] = risk.ratio_below_one_certificate(scenario, args.lam)
    return RunReport("riskratio", params=params, results=results, provenance="closed-form")


_HANDLERS = {
    "margins": _cmd_margins,
    "pbox": _cmd_pbox,
    "pb": _cmd_pb,
    "pca": _cmd_pca,
    "pcb": _cmd_pcb,
    "ratio": _cmd_ratio,
    "suffcond": _cmd_suffcond,
    "mc": _cmd_mc,
    "boundary": _cmd_boundary,
    "destabilize": _cmd_destabilize,
    "samplesize": _cmd_samplesize,
    "riskratio": _cmd_riskratio,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "table1":
            return _cmd_table1(args)
        report = _HANDLERS[args.command](args)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.json else report.to_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
