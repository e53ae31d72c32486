"""Command-line interface.

Subcommands:

* ``select``     - read a CSV dataset, test every pair, emit the graph
* ``verify``     - check agreement of the umpu and partial-correlation
                   tests on random instances (or one user dataset)
* ``montecarlo`` - size/power estimation from a synthetic model
* ``quantile``   - expose the beta and correlation quantiles for scripting

Exit codes: 0 success, 1 usage error, 2 data error, 3 equivalence check
failed.  Numbers are serialized with 17 significant digits so outputs can
be diffed across implementations; reports are byte-identical for a fixed
seed.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConcgraphError,
    DataError,
    DegenerateEdge,
    DomainError,
    InsufficientSample,
    NotPositiveDefinite,
)
from .estimators import Dataset, sample_covariance
from .distributions import beta_sym_quantile, null_corr_quantile
from .independence import (
    METHODS,
    TestConfig,
    partial_correlation_test,
    umpu_test,
    verify_equivalence,
)
from .selection import CORRECTIONS, all_pairs, select_graph
from .simulate import (
    PrecisionSpec,
    estimate_power,
    estimate_size,
    random_covariance_instances,
)

__all__ = ["main", "RunConfig", "read_dataset_csv", "json_dumps"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EQUIVALENCE = 3

STATISTIC_GAP_LIMIT = 1e-9

_DATA_ERRORS = (
    DataError,
    DomainError,
    InsufficientSample,
    NotPositiveDefinite,
    DegenerateEdge,
    OSError,
)

_METHOD_FLAGS = {"umpu": "umpu", "partial-corr": "partial_corr", "fisher": "fisher"}
_P_VALUE_KIND = {"umpu": "exact", "partial_corr": "exact", "fisher": "asymptotic"}


@dataclass(frozen=True)
class RunConfig:
    """Parsed command-line options for one invocation."""

    subcommand: str
    input: str | None = None
    alpha: float = 0.05
    method: str = "partial_corr"
    correction: str = "none"
    fmt: str = "json"
    seed: int = 0
    reps: int = 10000
    n: int = 0
    dim: int = 0
    out: str | None = None
    rho: float = 0.0
    prob: float | None = None
    m: float | None = None
    inject_sign_flip: bool = False


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _format_float(x: float) -> str:
    if not np.isfinite(x):
        raise DomainError(f"cannot serialize non-finite number {x!r}")
    return format(float(x), ".17g")


def json_dumps(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits.

    Keys keep insertion order; only the types the reports use are
    supported (dict, list/tuple, str, bool, int, float, None).
    """
    pieces: list[str] = []
    _emit(obj, pieces)
    return "".join(pieces)


def _emit(obj, pieces: list[str]) -> None:
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        for raw, rep in (("\n", "\\n"), ("\r", "\\r"), ("\t", "\\t")):
            escaped = escaped.replace(raw, rep)
        pieces.append(f'"{escaped}"')
    elif isinstance(obj, dict):
        pieces.append("{")
        for idx, (key, value) in enumerate(obj.items()):
            if idx:
                pieces.append(", ")
            _emit(str(key), pieces)
            pieces.append(": ")
            _emit(value, pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple)):
        pieces.append("[")
        for idx, value in enumerate(obj):
            if idx:
                pieces.append(", ")
            _emit(value, pieces)
        pieces.append("]")
    else:
        raise DomainError(f"cannot serialize {type(obj).__name__}")


def read_dataset_csv(path: str) -> Dataset:
    """Read a dataset: header row of unique variable names, then one row
    of decimal values per observation.  Missing or non-numeric cells are
    errors that name the offending row and column."""
    with open(path, newline="", encoding="utf-8") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise DataError(f"{path}: empty input")
    names = tuple(cell.strip() for cell in rows[0])
    if any(not name for name in names):
        raise DataError(f"{path}: header contains an empty variable name")
    if len(set(names)) != len(names):
        raise DataError(f"{path}: duplicate variable names in header")
    values = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(names):
            raise DataError(
                f"{path}: row {line_no}: expected {len(names)} fields, got {len(row)}"
            )
        parsed = []
        for col, cell in enumerate(row):
            text = cell.strip()
            try:
                value = float(text)
            except ValueError:
                raise DataError(
                    f"{path}: row {line_no}, column {names[col]!r}: "
                    f"non-numeric value {cell!r}"
                ) from None
            if not np.isfinite(value):
                raise DataError(
                    f"{path}: row {line_no}, column {names[col]!r}: "
                    f"non-finite value {cell!r}"
                )
            parsed.append(value)
        values.append(parsed)
    if len(values) < 2:
        raise DataError(f"{path}: need at least two observation rows")
    return Dataset(values=np.array(values), names=names)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")


def _graph_json(graph, data, cfg: RunConfig) -> str:
    decisions = [
        {
            "i": d.i,
            "j": d.j,
            "statistic": d.statistic,
            "p_value": d.p_value,
            "reject": d.reject,
        }
        for d in graph.decisions
    ]
    doc = {
        "n": data.n,
        "N": data.dim,
        "alpha": cfg.alpha,
        "method": cfg.method,
        "correction": cfg.correction,
        "p_value_kind": _P_VALUE_KIND[cfg.method],
        "names": list(graph.names),
        "edges": [[i, j] for i, j in graph.edge_list()],
        "decisions": decisions,
    }
    return json_dumps(doc)


def _quote_dot(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _graph_dot(graph) -> str:
    lines = ["graph {"]
    for name in graph.names:
        lines.append(f"  {_quote_dot(name)};")
    for i, j in graph.edge_list():
        lines.append(f"  {_quote_dot(graph.names[i])} -- {_quote_dot(graph.names[j])};")
    lines.append("}")
    return "\n".join(lines)


def _graph_tsv(graph) -> str:
    lines = ["i\tj\tname_i\tname_j\tstatistic\tp_value\treject"]
    for d in graph.decisions:
        lines.append(
            "\t".join(
                [
                    str(d.i),
                    str(d.j),
                    graph.names[d.i],
                    graph.names[d.j],
                    _format_float(d.statistic),
                    _format_float(d.p_value),
                    "true" if d.reject else "false",
                ]
            )
        )
    return "\n".join(lines)


def _cmd_select(cfg: RunConfig) -> int:
    try:
        data = read_dataset_csv(cfg.input)
        graph = select_graph(
            data, TestConfig(alpha=cfg.alpha, method=cfg.method), cfg.correction
        )
    except _DATA_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    if cfg.fmt == "json":
        text = _graph_json(graph, data, cfg)
    elif cfg.fmt == "dot":
        text = _graph_dot(graph)
    else:
        text = _graph_tsv(graph)
    _write_output(text, cfg.out)
    return EXIT_OK


def _verify_one(s, i, j, n, alpha, inject: bool):
    report = verify_equivalence(s, i, j, n, alpha)
    if inject:
        u = umpu_test(s, i, j, n, alpha)
        pc = partial_correlation_test(s, i, j, n, alpha)
        flipped = -u.statistic
        gap = abs(flipped - pc.statistic)
        same = (flipped <= u.lower or flipped >= u.upper) == pc.reject
        report = type(report)(
            statistic_gap=gap,
            signed_gap=flipped - pc.statistic,
            threshold_gap=report.threshold_gap,
            same_decision=same,
            raw_scale_agrees=report.raw_scale_agrees,
        )
    return report


def _cmd_verify(cfg: RunConfig) -> int:
    if cfg.input is not None:
        try:
            data = read_dataset_csv(cfg.input)
            if data.n <= data.dim:
                raise InsufficientSample(
                    f"insufficient sample: need n > N, got n = {data.n}, N = {data.dim}"
                )
            s = sample_covariance(data)
            instances = [
                (s, i, j, data.n, cfg.alpha) for i, j in all_pairs(data.dim)
            ]
        except _DATA_ERRORS as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_DATA
    else:
        instances = random_covariance_instances(cfg.reps, cfg.seed)

    disagreements = 0
    raw_disagreements = 0
    max_gap = 0.0
    max_threshold_gap = 0.0
    count = 0
    rows = []
    for s, i, j, n, alpha in instances:
        report = _verify_one(s, i, j, n, alpha, cfg.inject_sign_flip)
        count += 1
        disagreements += not report.same_decision
        raw_disagreements += not report.raw_scale_agrees
        max_gap = max(max_gap, report.statistic_gap)
        max_threshold_gap = max(max_threshold_gap, report.threshold_gap)
        if cfg.input is not None:
            u = umpu_test(s, i, j, n, alpha)
            pc = partial_correlation_test(s, i, j, n, alpha)
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "t": u.statistic,
                    "r": pc.statistic,
                    "lower": pc.lower,
                    "upper": pc.upper,
                    "reject": pc.reject,
                    "gap": report.statistic_gap,
                }
            )
    ok = disagreements == 0 and raw_disagreements == 0 and max_gap <= STATISTIC_GAP_LIMIT
    doc = {
        "instances": count,
        "disagreements": disagreements,
        "raw_scale_disagreements": raw_disagreements,
        "max_statistic_gap": max_gap,
        "max_threshold_gap": max_threshold_gap,
        "gap_limit": STATISTIC_GAP_LIMIT,
        "seed": cfg.seed,
        "equivalent": ok,
    }
    if rows:
        doc["edges"] = rows
    _write_output(json_dumps(doc), cfg.out)
    return EXIT_OK if ok else EXIT_EQUIVALENCE


def _report_doc(report) -> dict:
    doc = {
        "replications": report.replications,
        "seed": report.seed,
        "dim": report.dim,
        "n": report.n,
        "alpha": report.alpha,
        "edge": list(report.edge),
        "rho": report.rho,
        "methods": list(report.methods),
        "per_method": {
            name: {
                "rejections": outcome.rejections,
                "rate": outcome.rate,
                "std_error": outcome.std_error,
            }
            for name, outcome in report.per_method.items()
        },
        "agreement": dict(report.agreement),
        "ks_statistic": report.ks_statistic,
        "null_rate": report.null_rate,
        "null_std_error": report.null_std_error,
    }
    return doc


def _cmd_montecarlo(cfg: RunConfig) -> int:
    try:
        if cfg.rho == 0.0:
            spec = PrecisionSpec.identity(cfg.dim)
            report = estimate_size(
                spec, cfg.n, cfg.alpha, cfg.method, cfg.reps, cfg.seed
            )
        else:
            spec = PrecisionSpec.single_edge(cfg.dim, 0, 1, cfg.rho)
            report = estimate_power(
                spec, cfg.n, cfg.alpha, cfg.method, cfg.reps, cfg.seed
            )
    except (DomainError, InsufficientSample, NotPositiveDefinite) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _write_output(json_dumps(_report_doc(report)), cfg.out)
    return EXIT_OK


def _cmd_quantile(cfg: RunConfig) -> int:
    beta_args = cfg.prob is not None or cfg.m is not None
    corr_args = cfg.n > 0 or cfg.dim > 0
    if beta_args == corr_args:
        sys.stderr.write(
            "error: give either --prob with --m, or --alpha with --n and --dim\n"
        )
        return EXIT_USAGE
    try:
        if beta_args:
            if cfg.prob is None or cfg.m is None:
                raise DomainError("--prob and --m must be given together")
            doc = {
                "kind": "beta_sym_quantile",
                "prob": cfg.prob,
                "m": cfg.m,
                "value": beta_sym_quantile(cfg.prob, cfg.m),
            }
        else:
            if cfg.n <= 0 or cfg.dim <= 0:
                raise DomainError("--n and --dim must both be positive")
            doc = {
                "kind": "null_corr_quantile",
                "alpha": cfg.alpha,
                "n": cfg.n,
                "dim": cfg.dim,
                "value": null_corr_quantile(cfg.alpha, cfg.n, cfg.dim),
            }
    except (DomainError, InsufficientSample) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _write_output(json_dumps(doc), cfg.out)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="concgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: _Parser, with_method=True) -> None:
        p.add_argument("--alpha", type=float, default=0.05, help="significance level")
        if with_method:
            p.add_argument(
                "--method",
                choices=sorted(_METHOD_FLAGS),
                default="partial-corr",
                help="per-edge test",
            )
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument("--out", default=None, help="write output here instead of stdout")

    p_select = sub.add_parser("select", help="estimate a concentration graph from CSV")
    p_select.add_argument("--input", required=True, help="CSV dataset path")
    p_select.add_argument(
        "--correction", choices=CORRECTIONS, default="none", help="multiplicity correction"
    )
    p_select.add_argument(
        "--format", dest="fmt", choices=("json", "dot", "tsv"), default="json"
    )
    common(p_select)

    p_verify = sub.add_parser(
        "verify", help="check the umpu/partial-correlation equivalence numerically"
    )
    p_verify.add_argument("--input", default=None, help="optional CSV dataset path")
    p_verify.add_argument(
        "--reps", type=int, default=10000, help="random instances to check"
    )
    p_verify.add_argument(
        "--inject-sign-flip",
        action="store_true",
        help=argparse.SUPPRESS,  # negative-control hook for the test suite
    )
    common(p_verify, with_method=False)

    p_mc = sub.add_parser("montecarlo", help="Monte Carlo size/power estimation")
    p_mc.add_argument("--dim", type=int, required=True, help="number of variables")
    p_mc.add_argument("--n", type=int, required=True, help="observations per replication")
    p_mc.add_argument("--reps", type=int, default=10000, help="replications")
    p_mc.add_argument(
        "--rho",
        type=float,
        default=0.0,
        help="true partial correlation on edge (0, 1); 0 runs a size study",
    )
    common(p_mc)

    p_q = sub.add_parser("quantile", help="evaluate the quantile functions")
    p_q.add_argument("--prob", type=float, default=None, help="beta probability")
    p_q.add_argument("--m", type=float, default=None, help="beta shape m")
    p_q.add_argument("--n", type=int, default=0, help="sample size")
    p_q.add_argument("--dim", type=int, default=0, help="variable count")
    common(p_q, with_method=False)

    return parser


def _to_config(ns: argparse.Namespace) -> RunConfig:
    method = _METHOD_FLAGS.get(getattr(ns, "method", "partial-corr"), "partial_corr")
    return RunConfig(
        subcommand=ns.subcommand,
        input=getattr(ns, "input", None),
        alpha=getattr(ns, "alpha", 0.05),
        method=method,
        correction=getattr(ns, "correction", "none"),
        fmt=getattr(ns, "fmt", "json"),
        seed=getattr(ns, "seed", 0),
        reps=getattr(ns, "reps", 10000),
        n=getattr(ns, "n", 0),
        dim=getattr(ns, "dim", 0),
        out=getattr(ns, "out", None),
        rho=getattr(ns, "rho", 0.0),
        prob=getattr(ns, "prob", None),
        m=getattr(ns, "m", None),
        inject_sign_flip=getattr(ns, "inject_sign_flip", False),
    )


_COMMANDS = {
    "select": _cmd_select,
    "verify": _cmd_verify,
    "montecarlo": _cmd_montecarlo,
    "quantile": _cmd_quantile,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _to_config(ns)
    if not 0.0 < cfg.alpha < 1.0 and cfg.subcommand != "quantile":
        sys.stderr.write(f"error: --alpha must lie in (0, 1), got {cfg.alpha}\n")
        return EXIT_USAGE
    if cfg.seed < 0:
        sys.stderr.write("error: --seed must be non-negative\n")
        return EXIT_USAGE
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except ConcgraphError as exc:  # fallback: uncategorized library error
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
