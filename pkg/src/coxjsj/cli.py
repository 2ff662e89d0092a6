"""Command-line interface: validate, jsj, compare, oracle-check, fuchsian."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .coxeter import DEFAULT_CAP, DEFAULT_RADIUS, DEFAULT_TARGET, verify_a_set_separation, verify_separation
from .enumerate import enumerate_sim_orbits
from .errors import (
    AmbiguousNeighbour,
    CapExceeded,
    CoxJsjError,
    GraphError,
    ParseError,
    PreconditionError,
    SearchBudgetExceeded,
    TreeValidationError,
)
from .graph import (
    AssumptionReport,
    DefiningGraph,
    check_standing_assumptions,
    cut_pairs,
    find_square,
    find_triangle,
    is_cocompact_fuchsian,
    parse_graph,
)
from .k4 import DEFAULT_BUDGET
from .tree import QuotientTree, build_quotient_tree, compare_trees, export_tree, is_class_g

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

UNSUPPORTED = "UNSUPPORTED INPUT"
BUDGET_ENV = "COXJSJ_BUDGET"

_EXTENSIONS = {".json": "json", ".dot": "dot", ".gv": "dot", ".txt": "edgelist", ".edges": "edgelist"}


@dataclass
class CliConfig:
    inputs: list[str] = field(default_factory=list)
    input_format: str | None = None
    output_format: str = "text"
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    radius: int = DEFAULT_RADIUS
    cap: int = DEFAULT_CAP
    target: int = DEFAULT_TARGET
    gate: bool = True
    force: bool = False


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError(f"{BUDGET_ENV} must be positive")
    return value


def guess_format(path: str) -> str:
    return _EXTENSIONS.get(Path(path).suffix.lower(), "edgelist")


def load_graph(path: str, fmt: str | None = None) -> DefiningGraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_graph(text, fmt or ("json" if path == "-" else guess_format(path)))
    except (ParseError, GraphError) as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_report(report: AssumptionReport, fmt: str) -> str:
    if fmt == "json":
        data = {"flags": report.flags(), "witnesses": dict(sorted(report.witnesses.items()))}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    lines = []
    for name, value in report.flags().items():
        if name == "passes_all":
            continue
        note = f"  ({report.witnesses[name]})" if name in report.witnesses else ""
        lines.append(f"{name:<14} {'yes' if value else 'NO'}{note}")
    lines.append(f"{'passes_all':<14} {'yes' if report.passes_all else 'NO'}")
    return "\n".join(lines) + "\n"


def render_tree_table(t: QuotientTree) -> str:
    lines = [t.summary(), "", f"{'orbit':<40} {'type':<13} {'valence':>7}  stabiliser"]
    for v in sorted(t.vertex_orbits, key=lambda v: v.id):
        lines.append(f"{v.id:<40} {v.vtype:<13} {v.valence!r:>7}  {{{','.join(v.stabiliser)}}}")
    lines += ["", f"{'edge':<6} ends and multiplicities"]
    for e in sorted(t.edge_orbits, key=lambda e: e.id):
        lines.append(f"{e.id:<6} {e.ends[0]} ×{e.mult[0]!r} -- {e.ends[1]} ×{e.mult[1]!r}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(cfg: CliConfig, stdout: TextIO) -> int:
    g = load_graph(cfg.inputs[0], cfg.input_format)
    report = check_standing_assumptions(g)
    _emit(render_report(report, "json" if cfg.output_format == "json" else "text"), cfg.out, stdout)
    return EXIT_OK if report.passes_all else EXIT_NEGATIVE


def cmd_jsj(cfg: CliConfig, stdout: TextIO) -> int:
    g = load_graph(cfg.inputs[0], cfg.input_format)
    report = check_standing_assumptions(g)
    stamp = ""
    if not report.passes_all:
        if not cfg.force:
            stdout.write(render_report(report, "text"))
            stdout.write("input fails the standing assumptions; use --force to build anyway\n")
            return EXIT_NEGATIVE
        stamp = UNSUPPORTED
    tree = build_quotient_tree(g, cfg.budget, check=not cfg.force)
    if cfg.output_format == "text":
        body = render_tree_table(tree)
    else:
        body = export_tree(tree, cfg.output_format)
    if stamp:
        if cfg.output_format == "json":
            data = json.loads(body)
            data["warning"] = stamp
            body = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        elif cfg.output_format == "dot":
            body = f"// {stamp}\n" + body
        else:
            body = f"{stamp}\n" + body
    if cfg.out:
        _emit(body, cfg.out, stdout)
        stdout.write((f"{stamp}\n" if stamp else "") + tree.summary() + "\n")
    else:
        stdout.write(body)
    return EXIT_OK


def cmd_compare(cfg: CliConfig, stdout: TextIO) -> int:
    graphs = [load_graph(p, cfg.input_format) for p in cfg.inputs[:2]]
    trees = []
    for p, g in zip(cfg.inputs, graphs):
        report = check_standing_assumptions(g)
        if not report.passes_all:
            stdout.write(f"{p}: input fails the standing assumptions\n")
            stdout.write(render_report(report, "text"))
            return EXIT_NEGATIVE
        trees.append(build_quotient_tree(g, cfg.budget))
    gate = tuple(is_class_g(g, cfg.budget) for g in graphs) if cfg.gate else (True, True)
    result = compare_trees(trees[0], trees[1], in_class_g=gate)
    stdout.write(f"{result.label if cfg.gate else result.verdict}\n")
    stdout.write(f"reason: {result.reason}\n")
    if not cfg.gate:
        stdout.write("note: class gate disabled; equivalence is a tree-isomorphism verdict only\n")
    elif result.verdict == "invariant_only":
        outside = [p for p, ok in zip(cfg.inputs, gate) if not ok]
        stdout.write(f"note: induced subdivided K4 in {', '.join(outside)}; the trees agree but this is not a QI verdict\n")
    if result.verdict == "equivalent":
        return EXIT_OK
    return EXIT_NEGATIVE if result.verdict == "distinct" else EXIT_INCONCLUSIVE


CSV_FIELDS = ["graph", "check", "set", "word", "radius", "generators", "ball_size", "classes", "expected",
              "violations", "status"]


def oracle_rows(g: DefiningGraph, name: str, cfg: CliConfig) -> list[dict]:
    """One row per cut pair and per frontier geodesic of every enumerated class."""
    rows = []
    for info in cut_pairs(g):
        row = {"graph": name, "check": "separation", "set": " ".join(info.pair), "word": "", "radius": cfg.radius}
        try:
            rep = verify_separation(g, info.pair, cfg.radius, cfg.cap, target=cfg.target)
        except CapExceeded as exc:
            row.update(status=f"cap exceeded at radius {exc.attained_radius + 1}")
            rows.append(row)
            continue
        row.update(generators=" ".join(rep.generators), ball_size=rep.ball_size, classes=rep.classes,
                   expected=rep.expected, violations=rep.violations)
        if not rep.sufficient_radius:
            row["status"] = "insufficient radius" if rep.violations == 0 else "INCONSISTENT"
        else:
            row["status"] = "consistent" if rep.consistent else "INCONSISTENT"
        rows.append(row)
    for orbit in enumerate_sim_orbits(g, cfg.budget):
        for a, b in orbit.frontier_pairs:
            row = {"graph": name, "check": "class-geodesic", "set": " ".join(orbit.a_set), "word": f"{a} {b}",
                   "radius": cfg.radius, "expected": ">=2"}
            try:
                rep = verify_a_set_separation(g, orbit.a_set, [a, b], cfg.radius, cfg.cap, target=cfg.target)
            except CapExceeded as exc:
                row.update(status=f"cap exceeded at radius {exc.attained_radius + 1}")
                rows.append(row)
                continue
            row.update(generators=" ".join(rep.generators), ball_size=rep.ball_size, classes=rep.components,
                       violations="")
            if cfg.radius < 2:
                row["status"] = "insufficient radius"
            else:
                row["status"] = "consistent" if rep.separates else "INCONSISTENT"
            rows.append(row)
    return rows


def cmd_oracle_check(cfg: CliConfig, stdout: TextIO) -> int:
    if cfg.radius < 0:
        raise InputError("--radius must be non-negative")
    rows = []
    for path in cfg.inputs:
        g = load_graph(path, cfg.input_format)
        report = check_standing_assumptions(g)
        if not report.passes_all:
            stdout.write(f"{path}: input fails the standing assumptions\n")
            return EXIT_NEGATIVE
        rows += oracle_rows(g, Path(path).stem if path != "-" else "stdin", cfg)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), cfg.out, stdout)
    statuses = [r["status"] for r in rows]
    if any(s == "insufficient radius" for s in statuses):
        sys.stderr.write(f"warning: radius {cfg.radius} is too small for the class counts to be meaningful\n")
    if any(s == "INCONSISTENT" for s in statuses):
        return EXIT_NEGATIVE
    if any(s.startswith("cap exceeded") for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def fuchsian_verdict(g: DefiningGraph) -> tuple[bool, str]:
    """Cocompact-Fuchsian answer with an explanatory note."""
    if is_cocompact_fuchsian(g):
        return True, f"yes, n={len(g)}"
    tri = find_triangle(g)
    if tri is not None:
        return False, f"no (triangle {'-'.join(tri)}; outside the triangle-free setting)"
    if find_square(g) is not None:
        return False, "no (contains a square, so the group is not hyperbolic)"
    return False, "no (not a cycle of length at least 5)"


def cmd_fuchsian(cfg: CliConfig, stdout: TextIO) -> int:
    g = load_graph(cfg.inputs[0], cfg.input_format)
    yes, note = fuchsian_verdict(g)
    stdout.write(note + "\n")
    return EXIT_OK if yes else EXIT_NEGATIVE


COMMANDS: dict[str, Callable[[CliConfig, TextIO], int]] = {
    "validate": cmd_validate,
    "jsj": cmd_jsj,
    "compare": cmd_compare,
    "oracle-check": cmd_oracle_check,
    "fuchsian": cmd_fuchsian,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxjsj", description="JSJ quotient trees of right-angled Coxeter groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input-format", choices=["json", "edgelist", "dot"], help="default: by file extension")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text", help="output format")
    common.add_argument("--out", help="write the main output to this file")
    common.add_argument("--budget", type=int, help=f"subdivided-K4 search node budget (env {BUDGET_ENV})")
    common.add_argument("--radius", type=int, default=DEFAULT_RADIUS, help="oracle ball radius")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="oracle ball element cap")
    common.add_argument("--target", type=int, default=DEFAULT_TARGET,
                        help="preferred oracle ball size when generators must be restricted")
    common.add_argument("--force", action="store_true", help="build even when assumptions fail")
    common.add_argument("--no-gate", action="store_true", help="do not gate QI verdicts on the K4-free class")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the standing assumptions").add_argument("path")
    sub.add_parser("jsj", parents=[common], help="build the quotient tree").add_argument("path")
    cmp_ = sub.add_parser("compare", parents=[common], help="compare two quotient trees")
    cmp_.add_argument("path")
    cmp_.add_argument("path2")
    sub.add_parser("oracle-check", parents=[common], help="Cayley-ball separation checks as CSV").add_argument(
        "path", nargs="+"
    )
    sub.add_parser("fuchsian", parents=[common], help="cocompact Fuchsian test").add_argument("path")
    return p


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    paths = ns.path if isinstance(ns.path, list) else [ns.path]
    if getattr(ns, "path2", None):
        paths.append(ns.path2)
    budget = ns.budget if ns.budget is not None else default_budget()
    if budget <= 0 or ns.cap <= 0 or ns.target <= 0:
        raise InputError("--budget, --cap and --target must be positive")
    return CliConfig(paths, ns.input_format, ns.format, ns.out, budget, ns.radius, ns.cap, ns.target,
                     not ns.no_gate, ns.force)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[ns.command](cfg, stdout)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (SearchBudgetExceeded, CapExceeded) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INCONCLUSIVE
    except (AmbiguousNeighbour, TreeValidationError) as exc:
        sys.stderr.write(f"error: inconclusive build: {exc}\n")
        return EXIT_INCONCLUSIVE
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NEGATIVE
    except CoxJsjError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INCONCLUSIVE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
