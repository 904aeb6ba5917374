"""Command-line entry point: truncate, menger, degree, verify, export."""

from __future__ import annotations

import argparse
import fnmatch
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import LevelledDigraph, export, import_digraph, truncate
from .counterexample_checks import Report, verify_counterexample, verify_edge_counterexample
from .degrees import combined_in_degree
from .errors import EndGraphError, InfeasibleError
from .families import FAMILIES, build_family, split_digraph
from .flow import EDGE, MODES, VERTEX, dual_separator, max_disjoint_dipaths, min_edge_cut, min_vertex_separator
from .sequences import ExhaustingSequence, verify_exhausting, witness_breaks

DEFAULT_DEPTH = 20
CHECKS = ("counterexample", "edge-counterexample", "exhausting")


class UsageError(Exception):
    """Bad input that should end the run with exit code 2."""


@dataclass
class RunConfig:
    family: str | None = None
    params: dict = field(default_factory=dict)
    input: str | None = None
    depth: int = DEFAULT_DEPTH
    threshold: int = 5
    format: str = "text"

    def __post_init__(self):
        if self.depth < 0:
            raise UsageError("depth must be >= 0")
        if self.threshold < 1:
            raise UsageError("threshold must be >= 1")
        if (self.family is None) == (self.input is None):
            raise UsageError("give exactly one of --family or --input")
        if self.family is not None and self.family not in FAMILIES:
            raise UsageError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")

    def digraph(self, depth: int | None = None) -> LevelledDigraph:
        depth = self.depth if depth is None else depth
        if self.input is not None:
            g = import_digraph(_read(self.input))
            return g.restrict(depth) if depth < g.depth else g
        try:
            p = build_family(self.family, **self.params)
        except TypeError as exc:
            raise UsageError(f"bad parameters for {self.family}: {exc}") from None
        return truncate(p, depth)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _value(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        return text


def parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects k=v, got {item!r}")
        out[key.strip()] = _value(val.strip())
    return out


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise UsageError(f"expected a..b, got {text!r}") from None
    if a > b or a < 0:
        raise UsageError(f"empty or negative range {text!r}")
    return a, b


def select(g: LevelledDigraph, patterns: str) -> list:
    """Vertices matching comma-separated glob patterns, each optionally ``@lo..hi``."""
    chosen: dict = {}
    for part in filter(None, (s.strip() for s in patterns.split(","))):
        pattern, _, band = part.partition("@")
        lo, hi = parse_range(band) if band else (0, g.depth)
        for v in g.vertices:
            if fnmatch.fnmatchcase(v, pattern) and lo <= g.level[v] <= hi:
                chosen[v] = None
    if not chosen:
        raise UsageError(f"pattern {patterns!r} matches no vertex")
    return list(chosen)


def load_sequence(path: str) -> ExhaustingSequence:
    try:
        doc = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from None
    if not isinstance(doc, list) or not all(
        isinstance(s, list) and all(isinstance(v, str) for v in s) for s in doc
    ):
        raise UsageError(f"{path} must hold a JSON array of arrays of vertex ids")
    return ExhaustingSequence.of(doc, first=0, label=path)


def emit(args, doc: dict, text: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    else:
        print("\n".join(text))


# --- commands -------------------------------------------------------------------


def cmd_truncate(cfg: RunConfig, args) -> int:
    g = cfg.digraph()
    if args.format in ("json", "dot"):
        sys.stdout.write(export(g, args.format).rstrip("\n") + "\n")
        return 0
    print(f"{g.name} depth {g.depth}: {len(g)} vertices, {g.edge_count()} edges, span {g.span}")
    for lvl in range(g.depth + 1):
        print(f"  level {lvl}: {' '.join(g.at_level(lvl))}")
    return 0


def cmd_export(cfg: RunConfig, args) -> int:
    g = cfg.digraph()
    if args.split:
        g = split_digraph(g)
    fmt = "json" if args.format == "text" else args.format
    doc = export(g, fmt)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(doc)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        sys.stdout.write(doc.rstrip("\n") + "\n")
    return 0


def cmd_menger(cfg: RunConfig, args) -> int:
    if args.mode not in MODES:
        raise UsageError(f"unknown mode {args.mode!r}; choose from {', '.join(MODES)}")
    if not args.sources or not args.targets:
        raise UsageError("menger needs --sources and --targets")
    g = cfg.digraph()
    A, B = select(g, args.sources), select(g, args.targets)
    paths = max_disjoint_dipaths(g, A, B, args.mode)
    if args.mode == EDGE:
        cut = list(min_edge_cut(g, A, B)) if not set(A) & set(B) else None
        sep_ok = cut is not None and len(cut) == len(paths)
    else:
        try:
            if args.mode == VERTEX:
                cert = dual_separator(g, A, B)
            else:
                cert = min_vertex_separator(g, A, B, protected=set(A) | set(B))
            cut = list(cert.separator)
            sep_ok = cert.is_valid(g) and cert.flow_value == len(paths)
        except InfeasibleError:
            cut, sep_ok = None, False
    ok = paths.is_valid(g) and (sep_ok or (cut is None and args.mode != VERTEX))
    doc = {
        "mode": args.mode,
        "count": len(paths),
        "paths": [list(p) for p in paths],
        "separator": cut,
        "certificates_valid": ok,
    }
    lines = [f"{len(paths)} {args.mode}-disjoint dipaths"]
    lines += [f"  {' -> '.join(p)}" for p in paths]
    if cut is None:
        lines.append("separator: none (a source-target edge or shared terminal cannot be cut)")
    else:
        shown = ", ".join(f"{u}->{v}" for u, v in cut) if args.mode == EDGE else ", ".join(cut)
        lines.append(f"separator ({len(cut)}): {{{shown}}}")
    lines.append(f"certificates {'revalidated' if ok else 'FAILED'}")
    emit(args, doc, lines)
    return 0 if ok else 1


def _degree_at(cfg: RunConfig, end, depth: int):
    g = cfg.digraph(depth)
    return combined_in_degree(g, end or g.ends[0].name, cfg.threshold)


def cmd_degree(cfg: RunConfig, args) -> int:
    if cfg.input is not None:
        raise UsageError("imported digraphs carry no end descriptors; use --family")
    if args.depths:
        lo, hi = parse_range(args.depths)
        depths = list(range(lo, hi + 1))
    else:
        depths = [cfg.depth]
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda d: _degree_at(cfg, args.end, d), depths))
    docs, lines = [], []
    for r in reports:
        docs.append(r.as_dict())
        lines += [
            f"end {r.end} at depth {r.depth}, t = {r.threshold}",
            f"  in-degree        {r.show('d_minus')}",
            f"  out-degree       {r.show('d_plus')}",
            f"  combined         {r.show('delta_cap')}  (separator {{{', '.join(r.separator)}}})",
            f"  partition bound  {r.show('delta_small')}",
            f"  K upper bound    {r.show('K_upper')}  via {r.K_sequence or 'no verified sequence'}",
            f"  dominators       {{{', '.join(r.dominators)}}}",
        ]
        if r.plan is not None:
            lines.append(f"  plan             A={sorted(r.plan.A)} B={list(r.plan.B)} S={list(r.plan.S)}")
        if args.verbose:
            lines += [f"  note: {n}" for n in r.notes]
    emit(args, docs[0] if len(docs) == 1 else docs, lines)
    return 0


def _report_out(args, report: Report, title: str) -> int:
    doc = {
        "check": title,
        "depth": report.depth,
        "passed": report.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail, "witness": c.witness} for c in report.checks
        ],
    }
    emit(args, doc, [f"{title} at depth {report.depth}: {'PASS' if report.passed else 'FAIL'}"] + report.lines())
    return 0 if report.passed else 1


def cmd_verify(cfg: RunConfig | None, args) -> int:
    if args.check == "counterexample":
        return _report_out(args, verify_counterexample(args.depth or DEFAULT_DEPTH), "counterexample")
    if args.check == "edge-counterexample":
        return _report_out(args, verify_edge_counterexample(args.depth or DEFAULT_DEPTH), "edge counterexample")
    if cfg is None:
        raise UsageError("the exhausting check needs --family or --input")
    if cfg.input is not None:
        raise UsageError("imported digraphs carry no end descriptors; use --family")
    if not args.seq:
        raise UsageError("the exhausting check needs --seq <file>")
    seq = load_sequence(args.seq)
    g = cfg.digraph()
    end = args.end or g.ends[0].name
    verdict = verify_exhausting(g, end, seq)
    doc = {
        "check": "exhausting",
        "end": end,
        "depth": g.depth,
        "passed": verdict.ok,
        "index": verdict.index,
        "reason": verdict.reason,
        "witness": list(verdict.witness) if verdict.witness else None,
        "checked": list(verdict.checked),
    }
    lines = [f"exhausting sequence for {end} at depth {g.depth}: {'PASS' if verdict.ok else 'FAIL'}"]
    if verdict.ok:
        lines.append(f"  {len(verdict.checked)} observable sets checked")
    else:
        lines.append(f"  {verdict.reason}")
        if verdict.witness:
            lines.append(f"  witness: {' -> '.join(verdict.witness)}")
            lines.append(f"  witness re-checked: {witness_breaks(seq, verdict)}")
    emit(args, doc, lines)
    return 0 if verdict.ok else 1


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help=f"built-in family: {', '.join(FAMILIES)}")
    common.add_argument("--param", action="append", metavar="K=V", help="family parameter, repeatable")
    common.add_argument("--input", help="digraph JSON produced by export")
    common.add_argument("--depth", type=int, help=f"truncation depth (default {DEFAULT_DEPTH})")
    common.add_argument("-t", "--threshold", type=int, default=5, help="certificate threshold (default 5)")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")

    ap = argparse.ArgumentParser(prog="endgraph", description="Ends of infinite digraphs at finite depth.")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("truncate", parents=[common], help="print the truncation")

    p = sub.add_parser("export", parents=[common], help="write the truncation as JSON or DOT")
    p.add_argument("-o", "--output", help="file to write (default stdout)")
    p.add_argument("--split", action="store_true", help="export the vertex-split digraph instead")

    p = sub.add_parser("menger", parents=[common], help="disjoint dipaths and a dual separator")
    p.add_argument("--sources", help="patterns such as 'b_*@6..12,c_0'")
    p.add_argument("--targets", help="patterns, same syntax as --sources")
    p.add_argument("--mode", default=VERTEX, help=f"one of {', '.join(MODES)}")

    p = sub.add_parser("degree", parents=[common], help="degree report for an end")
    p.add_argument("--end", help="end name (default: first declared end)")
    p.add_argument("--depths", metavar="A..B", help="sweep several depths")
    p.add_argument("-v", "--verbose", action="store_true", help="include provenance notes")

    p = sub.add_parser("verify", parents=[common], help="run a structural or sequence check")
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--seq", help="JSON array of vertex-id arrays (U_0, U_1, ...)")
    p.add_argument("--end", help="end name (default: first declared end)")
    return ap


COMMANDS = {
    "truncate": cmd_truncate,
    "export": cmd_export,
    "menger": cmd_menger,
    "degree": cmd_degree,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = None
        if args.family is not None or args.input is not None or args.command != "verify":
            cfg = RunConfig(
                family=args.family,
                params=parse_params(args.param),
                input=args.input,
                depth=DEFAULT_DEPTH if args.depth is None else args.depth,
                threshold=args.threshold,
                format=args.format,
            )
        elif args.depth is not None and args.depth < 0:
            raise UsageError("depth must be >= 0")
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"endgraph: error: {exc}", file=sys.stderr)
        return 2
    except (EndGraphError, KeyError, ValueError) as exc:
        # structural problems with the input (unknown end, malformed digraph, ...)
        print(f"endgraph: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
