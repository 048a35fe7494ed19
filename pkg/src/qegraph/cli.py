"""Command-line front end.

Exit codes: 0 = embeddable (or command succeeded), 1 = not embeddable (or a
reference check failed), 2 = usage or input error, 3 = decision routes
disagree under ``classify --method all``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import analysis
from .config import DEFAULT_TOLERANCES, MODES, Tolerances
from .graphs import (
    GraphError,
    graph_from_uri,
    distance_matrix,
    theta_spec_from_uri,
)
from .spectra import JacobiConvergenceError, SpectraError, format_matrix_text
from .winkler import (
    EmbeddingError,
    TreeError,
    read_tree_file,
    winkler_kernel,
)

__all__ = ["CliConfig", "main"]

EXIT_QE = 0
EXIT_OK = 0
EXIT_NON_QE = 1
EXIT_FAIL = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3

_METHODS = ("closed-form", "schoenberg", "winkler", "all")


@dataclass(frozen=True)
class CliConfig:
    """Resolved invocation settings shared by all subcommands."""

    mode: str = "auto"
    tol_psd: float = DEFAULT_TOLERANCES.psd_rel
    tol_resid: float = DEFAULT_TOLERANCES.embed
    output: str = "text"
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.tol_psd > 0.0:
            raise ValueError(f"tol_psd must be positive, got {self.tol_psd}")
        if not self.tol_resid > 0.0:
            raise ValueError(f"tol_resid must be positive, got {self.tol_resid}")

    @property
    def tolerances(self) -> Tolerances:
        return DEFAULT_TOLERANCES.with_psd_rel(self.tol_psd)


def _default_mode() -> str:
    env = os.environ.get("QEGRAPH_MODE", "").strip()
    return env if env in MODES else "auto"


def _add_common(parser: argparse.ArgumentParser, formats=("text", "json")) -> None:
    parser.add_argument(
        "--mode",
        choices=MODES,
        default=None,
        help="arithmetic mode (default: QEGRAPH_MODE env var, else auto)",
    )
    parser.add_argument(
        "--tol-psd",
        type=float,
        default=DEFAULT_TOLERANCES.psd_rel,
        metavar="TOL",
        help="relative eigenvalue tolerance for float-mode verdicts",
    )
    parser.add_argument(
        "--format",
        choices=formats,
        default=formats[0],
        help=f"output format (default: {formats[0]})",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed recorded in reports (reserved for randomized checks)",
    )
    parser.add_argument(
        "--out",
        metavar="PATH",
        default=None,
        help="write the report to PATH instead of stdout",
    )


def _config_from(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        mode=args.mode if args.mode is not None else _default_mode(),
        tol_psd=args.tol_psd,
        output=args.format,
        seed=args.seed,
    )


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _graph_and_tree(args: argparse.Namespace):
    g = graph_from_uri(args.graph)
    tree = None
    if getattr(args, "tree", None) is not None:
        tree = read_tree_file(args.tree, g)
    return g, tree


def _verdicts_for(args: argparse.Namespace, cfg: CliConfig):
    g, tree = _graph_and_tree(args)
    spec = theta_spec_from_uri(args.graph)
    methods = [args.method] if args.method != "all" else None
    if methods is None:
        methods = ["closed-form", "schoenberg", "winkler"] if spec else ["schoenberg", "winkler"]
    verdicts = []
    for method in methods:
        if method == "closed-form":
            if spec is None:
                raise GraphError(
                    "closed-form classification needs a theta:A,B,C graph, "
                    f"got {args.graph!r}"
                )
            verdicts.append(analysis.classify_theta_closed_form(spec))
        elif method == "schoenberg":
            verdicts.append(
                analysis.classify_schoenberg(g, mode=cfg.mode, tol=cfg.tolerances)
            )
        else:
            verdicts.append(
                analysis.classify_winkler(g, tree, mode=cfg.mode, tol=cfg.tolerances)
            )
    return g, verdicts


def _classify_json(args, cfg: CliConfig, g, verdicts) -> str:
    decisions = {v.is_qe for v in verdicts}
    payload = {
        "graph": args.graph,
        "n": g.n,
        "edges": [list(e) for e in g.edges],
        "mode": cfg.mode,
        "seed": cfg.seed,
        "verdicts": [
            {
                "method": v.method,
                "decision": v.decision,
                "is_qe": v.is_qe,
                "mode_used": v.mode_used,
                "evidence": v.evidence,
            }
            for v in verdicts
        ],
        "agreement": len(decisions) == 1,
        "decision": verdicts[0].decision if len(decisions) == 1 else "disagreement",
    }
    return json.dumps(payload, indent=2)


def _classify_text(args, g, verdicts) -> str:
    lines = [f"graph: {args.graph} ({g.n} vertices, {g.n_edges} edges)"]
    for v in verdicts:
        note = ""
        if v.method == "closed-form":
            note = f"  [{v.evidence['rule']}]"
        elif v.method == "schoenberg":
            value = v.evidence.get("max_eig_on_ones_complement")
            if isinstance(value, float):
                note = f"  [max form value {value:.6g}]"
        elif v.method == "winkler":
            value = v.evidence.get("lambda_min")
            if isinstance(value, float):
                note = f"  [kernel lambda_min {value:.6g}]"
        used = f" ({v.mode_used})" if v.mode_used else ""
        lines.append(f"{v.method}: {v.decision}{used}{note}")
    decisions = {v.is_qe for v in verdicts}
    lines.append(
        f"decision: {verdicts[0].decision}" if len(decisions) == 1 else "decision: disagreement"
    )
    return "\n".join(lines)


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    g, verdicts = _verdicts_for(args, cfg)
    report = (
        _classify_json(args, cfg, g, verdicts)
        if cfg.output == "json"
        else _classify_text(args, g, verdicts)
    )
    _emit(report, args.out)
    decisions = {v.is_qe for v in verdicts}
    if len(decisions) > 1:
        return EXIT_DISAGREE
    return EXIT_QE if decisions.pop() else EXIT_NON_QE


def cmd_qec(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    g = graph_from_uri(args.graph)
    result = analysis.qec(g, tol=cfg.tolerances)
    if cfg.output == "json":
        report = json.dumps(
            {
                "graph": args.graph,
                "n": g.n,
                "qec": result.value,
                "is_qe": result.is_qe,
                "maximizer": list(result.maximizer),
                "seed": cfg.seed,
            },
            indent=2,
        )
    else:
        coords = " ".join(f"{x:.8f}" for x in result.maximizer)
        report = f"{result.value:.8f}\nmaximizer: {coords}"
    _emit(report, args.out)
    return EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    g, tree = _graph_and_tree(args)
    kern = winkler_kernel(g, tree)
    if cfg.output == "json":
        report = json.dumps(
            {
                "graph": args.graph,
                "dim": kern.dim,
                "two_k": [[int(x) for x in row] for row in kern.two_k],
                "seed": cfg.seed,
            },
            indent=2,
        )
    else:
        report = kern.to_text(exact=cfg.mode == "exact")
    _emit(report, args.out)
    return EXIT_OK


def cmd_distance(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    g = graph_from_uri(args.graph)
    d = distance_matrix(g)
    if cfg.output == "json":
        report = json.dumps(
            {"graph": args.graph, "n": g.n, "d": [[int(x) for x in row] for row in d]},
            indent=2,
        )
    else:
        report = format_matrix_text(d)
    _emit(report, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    results = analysis.run_reference_suite(tol=cfg.tolerances)
    passed = sum(1 for r in results if r.passed)
    if cfg.output == "json":
        report = json.dumps(
            {
                "results": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                        "elapsed": r.elapsed,
                    }
                    for r in results
                ],
                "passed": passed,
                "total": len(results),
            },
            indent=2,
        )
    else:
        lines = [
            f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
        ]
        lines.append(f"{passed}/{len(results)} fixtures pass")
        report = "\n".join(lines)
    _emit(report, args.out)
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    report = analysis.classification_sweep(
        max_vertices=args.max_vertices, mode=cfg.mode, tol=cfg.tolerances
    )
    body = (
        analysis.sweep_to_json(report)
        if cfg.output == "json"
        else analysis.sweep_to_csv(report)
    )
    qe = sum(1 for r in report.rows if r.closed_form)
    summary = (
        f"{qe} QE / {len(report.rows) - qe} NonQE over {len(report.rows)} "
        f"theta graphs with at most {report.max_vertices} vertices"
    )
    if not report.all_consistent:
        summary += " (WARNING: decision routes disagree)"
    _emit(body, args.out)
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qegraph",
        description=(
            "Decide quadratic embeddability of connected graphs, compute "
            "embedding constants, and reproduce the bundled reference values."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide whether a graph is embeddable")
    p.add_argument("graph", help="graph URI (theta:A,B,C, path:N, cycle:N) or edge-list file")
    p.add_argument("--method", choices=_METHODS, default="all")
    p.add_argument("--tree", metavar="FILE", default=None, help="oriented spanning-tree file")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("qec", help="compute the quadratic embedding constant")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_qec)

    p = sub.add_parser("kernel", help="print the spanning-tree kernel matrix K")
    p.add_argument("graph")
    p.add_argument("--tree", metavar="FILE", default=None, help="oriented spanning-tree file")
    _add_common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("distance", help="print the graph distance matrix")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("verify", help="recompute all bundled reference values")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="classify all theta graphs up to a vertex bound")
    p.add_argument("--max-vertices", type=int, default=18)
    _add_common(p, formats=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        GraphError,
        TreeError,
        SpectraError,
        EmbeddingError,
        JacobiConvergenceError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
