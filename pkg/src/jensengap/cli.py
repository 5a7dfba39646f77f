"""Command-line front end.

Usage:
    jensengap gap --dist uniform:0,2 --phi neg_exp --cuts 1
    jensengap table1 --format markdown
    jensengap capacity --snr 0.1 --snr 1 --units bits
    jensengap kl --p discrete:0@0.5,1@0.5 --q discrete:0@0.4,1@0.6
    jensengap entropy --dist beta:2,2
    jensengap mgf --dist uniform:0,2 --t -1 --t 1

Exit codes: 0 ok, 2 usage or spec-parse error, 3 inapplicable bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields

from . import applications, bounds, oracle
from .bounds import BoundReport, not_applicable
from .distributions import FiniteDiscrete, parse_distribution, read_samples
from .errors import JensenGapError, SpecParseError
from .functions import exp_scaled, neg_exp, parse_phi

EXIT_USAGE = 2
EXIT_INAPPLICABLE = 3

GAP_METHODS = (
    "jensen", "variance_sandwich", "partitioned_sandwich", "gruss_second_order",
    "green_gap", "green_gruss", "fourth_order", "covariance", "tangency",
)
EXTRA_METHODS = ("signed_refinement", "monte_carlo")

GAP_COLUMNS = ("method", "target", "lower", "upper", "estimate", "error_radius",
               "oracle", "abs_err", "certified", "applicable", "note")


class Inapplicable(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    dist_spec: str | None = None
    phi_spec: str | None = None
    partition: tuple = ()
    tol: float = 1e-9
    seed: int = 0
    output_format: str = "csv"
    units: str = "nats"
    snr: tuple = ()
    t_values: tuple = ()
    samples_path: str | None = None
    methods: tuple = ()
    mc_samples: int = 0
    p_spec: str | None = None
    q_spec: str | None = None

    def __post_init__(self):
        if not 0 < self.tol <= 1e-3:
            raise SpecParseError("--tol must lie in (0, 1e-3]")

    @property
    def unit_scale(self) -> float:
        return 1.0 / math.log(2.0) if self.units == "bits" else 1.0


@dataclass
class Table:
    columns: tuple
    rows: list
    title: str = ""
    footer: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def emit(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"title": table.title, **_jsonable(table.meta), "columns": list(table.columns),
               "rows": _jsonable(table.rows), "footer": table.footer}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt == "markdown":
        lines = [f"**{table.title}**", ""] if table.title else []
        lines.append("| " + " | ".join(table.columns) + " |")
        lines.append("|" + "|".join("---" for _ in table.columns) + "|")
        for row in table.rows:
            lines.append("| " + " | ".join(_fmt(row.get(c)) for c in table.columns) + " |")
        lines += [""] + table.footer if table.footer else []
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(row.get(c)) for c in table.columns])
    for line in table.footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def report_from_row(row: dict) -> BoundReport:
    """Rebuild the BoundReport carried by a JSON gap row."""
    names = {f.name for f in fields(BoundReport)}
    return BoundReport.from_dict({k: v for k, v in row.items() if k in names})


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _load_dist(cfg: RunConfig):
    if cfg.samples_path:
        return read_samples(cfg.samples_path)
    if not cfg.dist_spec:
        raise SpecParseError("--dist or --samples is required")
    return parse_distribution(cfg.dist_spec)


def _gap_report(method: str, phi, dist, cfg: RunConfig) -> BoundReport:
    if method == "jensen":
        return bounds.jensen_bound(phi, dist)
    if method == "variance_sandwich":
        return bounds.variance_sandwich(phi, dist)
    if method == "partitioned_sandwich":
        return bounds.partitioned_sandwich(phi, dist, cfg.partition)
    if method == "gruss_second_order":
        return bounds.gruss_second_order(phi, dist)
    if method == "green_gap":
        return bounds.green_gap(phi, dist)
    if method == "green_gruss":
        return bounds.green_gruss_refinement(phi, dist)
    if method == "fourth_order":
        return bounds.fourth_order(phi, dist)
    if method == "signed_refinement":
        return bounds.signed_refinement(phi, dist)
    if method == "covariance":
        return bounds.covariance_bound(phi, dist)
    if method == "tangency":
        t = bounds.optimize_tangency(phi, dist)
        return BoundReport("tangency", "expectation", lower=t.bound,
                           inputs={"c_star": t.c_star})
    if method == "monte_carlo":
        mc = oracle.expect_mc(dist, phi, cfg.mc_samples, cfg.seed)
        return BoundReport("monte_carlo", "expectation", estimate=mc.expectation,
                           error_radius=4 * mc.abs_error_estimate, certified=False,
                           inputs={"seed": cfg.seed, "samples": cfg.mc_samples,
                                   "std_error": mc.abs_error_estimate})
    raise SpecParseError(f"unknown method {method!r}")


def cmd_gap(cfg: RunConfig) -> Table:
    dist = _load_dist(cfg)
    phi = parse_phi(cfg.phi_spec or "")
    truth = oracle.expect(dist, phi, cfg.tol)
    if cfg.methods:
        methods = cfg.methods
    else:
        methods = [m for m in GAP_METHODS if m != "partitioned_sandwich" or cfg.partition]
        if cfg.mc_samples:
            methods.append("monte_carlo")
    rows = []
    for method in methods:
        try:
            rep = _gap_report(method, phi, dist, cfg)
        except (JensenGapError, ValueError) as exc:
            if isinstance(exc, SpecParseError):
                raise
            target = "expectation" if method in ("jensen", "fourth_order", "tangency") else "gap"
            rep = not_applicable(method, target, f"{type(exc).__name__}: {exc}")
        if cfg.methods and not rep.applicable:
            raise Inapplicable(f"{method}: {rep.note}")
        ref = truth.expectation if rep.target == "expectation" else truth.gap
        row = rep.to_dict()
        row["oracle"] = ref
        row["abs_err"] = None if rep.estimate is None else abs(ref - rep.estimate)
        rows.append(row)
    meta = {"dist": cfg.samples_path or cfg.dist_spec, "phi": phi.label,
            "oracle_expectation": truth.expectation, "oracle_gap": truth.gap,
            "oracle_error": truth.abs_error_estimate, "oracle_method": truth.method}
    return Table(GAP_COLUMNS, rows, f"Jensen gap bounds for {phi.label} under {meta['dist']}",
                 meta=meta)


def table1_rows() -> list[dict]:
    """Bounds on E[exp(-X)], X ~ Uniform(0, 2)."""
    from .distributions import Uniform

    dist, phi = Uniform(0.0, 2.0), neg_exp()
    exact = oracle.expect(dist, phi).expectation
    jensen = bounds.jensen_bound(phi, dist).lower
    gruss = bounds.gruss_second_order(phi, dist)
    fourth = bounds.fourth_order(phi, dist)
    rows = [
        ("Exact", "int_0^2 0.5 exp(-x) dx", exact, None),
        ("Jensen (Classic)", "exp(-mu)", jensen, None),
        ("Variance Refinement", "exp(-mu) + exp(-mu) sigma^2 / 2", jensen + gruss.estimate,
         gruss.error_radius),
        ("Fourth-Order", "expansion with skewness and kurtosis", fourth.estimate,
         fourth.error_radius),
    ]
    return [{"method": m, "formula": f, "value": v, "relative_error_pct": 100 * (v - exact) / exact,
             "error_radius": r} for m, f, v, r in rows]


def cmd_table1(cfg: RunConfig) -> Table:
    rows = table1_rows()
    if cfg.output_format == "markdown":
        for row in rows:
            row["Method"], row["Formula"] = row["method"], row["formula"]
            row["Value"] = f"{row['value']:.4f}"
            row["Relative Error"] = f"{row['relative_error_pct']:+.2f}%"
        cols = ("Method", "Formula", "Value", "Relative Error")
    else:
        cols = ("method", "formula", "value", "relative_error_pct", "error_radius")
    return Table(cols, rows, "Comparison of bounds for E[exp(-X)], X ~ Uniform(0, 2)")


def cmd_capacity(cfg: RunConfig) -> Table:
    if not cfg.snr:
        raise SpecParseError("at least one --snr is required")
    if any(not s > 0 for s in cfg.snr):
        raise SpecParseError("--snr values must be positive")
    k = cfg.unit_scale
    rows = []
    for snr in cfg.snr:
        rep = applications.rayleigh_capacity(snr, tol=cfg.tol)
        rows.append({
            "snr": rep.snr, "units": cfg.units,
            "jensen_upper": k * rep.jensen_upper,
            "fourth_order_approx": k * rep.fourth_order_approx,
            "oracle": k * rep.oracle,
            "approx_error": k * abs(rep.fourth_order_approx - rep.oracle),
            "term_log": k * rep.terms[0], "term_variance": k * rep.terms[1],
            "term_skewness": k * rep.terms[2], "term_kurtosis": k * rep.terms[3],
        })
    corr = applications.high_snr_correction()
    footer = [f"high-SNR correction sum (r -> 1): {corr} = {_fmt(k * float(corr))} {cfg.units}"]
    cols = ("snr", "units", "jensen_upper", "fourth_order_approx", "oracle", "approx_error",
            "term_log", "term_variance", "term_skewness", "term_kurtosis")
    return Table(cols, rows, "Rayleigh ergodic capacity", footer,
                 meta={"high_snr_correction": k * float(corr)})


def _parse_pmf(spec: str):
    if spec.strip().lower().startswith("discrete:"):
        dist = parse_distribution(spec)
        if not isinstance(dist, FiniteDiscrete):
            raise SpecParseError("--p/--q must be discrete laws")
        return dist
    try:
        return [float(x) for x in spec.split(",")]
    except ValueError as exc:
        raise SpecParseError(f"bad probability vector {spec!r}") from exc


def cmd_kl(cfg: RunConfig) -> Table:
    if not (cfg.p_spec and cfg.q_spec):
        raise SpecParseError("--p and --q are required")
    rep = applications.reverse_pinsker(_parse_pmf(cfg.p_spec), _parse_pmf(cfg.q_spec))
    k = cfg.unit_scale
    row = {"kl": k * rep.kl, "chi2_q_p": rep.chi2_q_p, "inf_ratio": rep.inf_ratio,
           "bound": k * rep.bound, "holds": rep.holds, "units": cfg.units}
    return Table(tuple(row), [row], "Reverse Pinsker check")


def cmd_entropy(cfg: RunConfig) -> Table:
    rep = applications.entropy_bounds(_load_dist(cfg))
    k = cfg.unit_scale
    row = {"energy": rep.energy, "renyi2_bound": k * rep.renyi2_bound,
           "gap_estimate": k * rep.gap_estimate, "entropy_oracle": k * rep.entropy_oracle,
           "units": cfg.units}
    return Table(tuple(row), [row], "Entropy lower bounds")


def cmd_mgf(cfg: RunConfig) -> Table:
    dist = _load_dist(cfg)
    rows = []
    for t in cfg.t_values or (1.0,):
        rep = bounds.mgf_bounds(dist, t)
        truth = oracle.expect(dist, exp_scaled(t), cfg.tol).expectation
        rows.append({"t": t, "lower": rep.lower, "upper": rep.upper, "oracle": truth,
                     "contains": rep.contains(truth, 1e-12)})
    return Table(("t", "lower", "upper", "oracle", "contains"), rows, "MGF sandwich")


COMMANDS = {
    "gap": cmd_gap, "table1": cmd_table1, "capacity": cmd_capacity,
    "kl": cmd_kl, "entropy": cmd_entropy, "mgf": cmd_mgf,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _cut_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad cut list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("csv", "json", "markdown"),
                        default="csv")
    common.add_argument("--units", choices=("nats", "bits"), default="nats")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="jensengap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", parents=[common], help="all bounds for one (phi, X) pair")
    p.add_argument("--dist")
    p.add_argument("--samples", dest="samples_path", help="one-column CSV of samples")
    p.add_argument("--phi", dest="phi_spec", required=True)
    p.add_argument("--cuts", dest="partition", type=_cut_list, default=())
    p.add_argument("--method", dest="methods", action="append",
                   choices=GAP_METHODS + EXTRA_METHODS,
                   help="only these methods; exit 3 if one is inapplicable")
    p.add_argument("--mc-samples", type=int, default=0)

    sub.add_parser("table1", parents=[common], help="E[exp(-X)], X ~ Uniform(0,2) comparison")

    p = sub.add_parser("capacity", parents=[common], help="Rayleigh ergodic capacity")
    p.add_argument("--snr", type=float, action="append", default=[])

    p = sub.add_parser("kl", parents=[common], help="reverse Pinsker inequality")
    p.add_argument("--p", dest="p_spec", required=True)
    p.add_argument("--q", dest="q_spec", required=True)

    p = sub.add_parser("entropy", parents=[common], help="Rényi-2 entropy bound")
    p.add_argument("--dist")
    p.add_argument("--samples", dest="samples_path")

    p = sub.add_parser("mgf", parents=[common], help="MGF sandwich on a bounded support")
    p.add_argument("--dist")
    p.add_argument("--samples", dest="samples_path")
    p.add_argument("--t", dest="t_values", type=float, action="append", default=[])
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    kwargs = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    if ns.command == "gap":
        kwargs["dist_spec"] = ns.dist
        kwargs["methods"] = tuple(ns.methods or ())
    elif ns.command in ("entropy", "mgf"):
        kwargs["dist_spec"] = ns.dist
    for key in ("snr", "t_values", "partition"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    return RunConfig(**kwargs)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        text = emit(COMMANDS[cfg.command](cfg), cfg.output_format)
    except SpecParseError as exc:
        print(f"jensengap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Inapplicable, JensenGapError) as exc:
        print(f"jensengap: inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    if ns.output:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
