"""Command-line entry point: `gridcolor <subcommand> ...`.

Exit codes: 0 ok/valid/colorable, 1 invalid/not colorable, 2 unknown or open bracket, 64 usage.
Results go to stdout; logs and errors go to stderr, errors as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from gridcolor import bundled
from gridcolor.bounds import maxrf_closed, maxrf_upper
from gridcolor.bundled import BundledDataError, UnknownBundleError
from gridcolor.cache import VerdictCache, cache_from_setting
from gridcolor.config import Settings, load_settings
from gridcolor.constructions import (
    expand_strong,
    gf_line_partition,
    partition_coloring,
    round_robin,
    strong_c_plus_one,
    strong_general,
)
from gridcolor.formats import GridFormatError, parse_cellset, parse_coloring, read_grid, serialize
from gridcolor.grid import (
    CellSet,
    Coloring,
    DomainError,
    find_mono_rectangle,
    find_rectangle,
    intersection_stats,
    verify_strong,
)
from gridcolor.obstruction import Classifier, Status, bipartite_ramsey2, chart, compute_obs
from gridcolor.search import greedy_rect_free, maxrf_exact

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


def _error(kind: str, detail: str) -> None:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        _error("usage", f"{self.prog}: {message}")
        raise SystemExit(EXIT_USAGE)


def parse_range(text: str) -> range:
    """`A..B`, both ends included."""
    lo, sep, hi = text.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi) or int(lo) < 1:
        raise argparse.ArgumentTypeError(f"expected a range like 2..8, got {text!r}")
    return range(int(lo), int(hi) + 1)


def _columns(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated column numbers, got {text!r}") from exc


def _emit(settings: Settings, text: str, data: dict[str, Any]) -> None:
    if settings.output_format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text.rstrip("\n"))


def _load(source: str, cellset: bool = False) -> Coloring | CellSet:
    if source.startswith("bundled/"):
        return bundled.load(source)
    if cellset:
        return parse_cellset(Path(source).read_text(encoding="utf-8"))
    return read_grid(source)


def _classifier(args: argparse.Namespace, settings: Settings) -> Classifier:
    cache = VerdictCache(cache_from_setting(settings.cache_path))
    return Classifier(settings, cache, assume_rfc=getattr(args, "assume_rfc", False), search=not args.no_search)


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    item = _load(args.file, args.cellset)
    data: dict[str, Any] = {"file": args.file, "dims": str(item.dims)}
    if isinstance(item, CellSet):
        rect = find_rectangle(item)
        data["size"] = item.size
        valid = rect is None
        text = f"{args.file}: {item.dims} cell set of size {item.size}, "
    else:
        rect = find_mono_rectangle(item)
        valid = rect is None
        data["c"] = item.c
        text = f"{args.file}: {item.dims} {item.c}-coloring, "
        if valid and args.strong is not None:
            valid = verify_strong(item, args.strong)
            data["strong"] = args.strong
            text += "strong, " if valid else f"not strong ({item.c}, {args.strong}), "
    data["valid"] = valid
    data["rectangle"] = rect.as_dict() if rect is not None else None
    text += "valid" if valid else ("invalid: " + str(rect) if rect is not None else "invalid")
    _emit(settings, text, data)
    return EXIT_OK if valid else EXIT_INVALID


def _recipe(args: argparse.Namespace) -> tuple[Coloring, str]:
    strong_only = args.strong_only
    match args.recipe:
        case "cplusone":
            strong = strong_c_plus_one(args.c)
            return (strong, "strong") if strong_only else (expand_strong(strong, 1), "expanded")
        case "cplusgen":
            strong = strong_general(args.c, args.c_prime)
            return (strong, "strong") if strong_only else (expand_strong(strong, args.c_prime), "expanded")
        case "primepower":
            c = args.p ** (args.s * (args.d - 1))
            strong = partition_coloring(gf_line_partition(args.p, args.s, args.d), c)
            return (strong, "strong") if strong_only else (expand_strong(strong, 1), "expanded")
        case "roundrobin":
            strong = partition_coloring(round_robin(args.n), args.n)
            return (strong, "strong") if strong_only else (expand_strong(strong, 1), "expanded")
        case "expand":
            item = _load(args.file)
            if not isinstance(item, Coloring):
                raise DomainError(f"{args.file} is a cell set, not a coloring")
            return expand_strong(item, args.c_prime), "expanded"
        case "bundled":
            item = bundled.load(args.name)
            if not isinstance(item, Coloring):
                raise DomainError(f"{args.name} is a cell set; use verify to inspect it")
            return item, "bundled"
    raise UsageError(f"unknown recipe {args.recipe!r}")  # pragma: no cover - argparse restricts choices


def cmd_construct(args: argparse.Namespace, settings: Settings) -> int:
    coloring, kind = _recipe(args)
    text = serialize(coloring)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info("wrote %s %s-coloring of %s to %s", kind, coloring.c, coloring.dims, path)
    return EXIT_OK


def cmd_maxrf(args: argparse.Namespace, settings: Settings) -> int:
    n, m = args.n, args.m
    if args.exact:
        result = maxrf_exact(n, m, settings.budget())
        lower, upper, provenance = result.lower, result.upper, "search"
    elif (closed := maxrf_closed(n, m)) is not None and not args.bounds:
        lower = upper = closed
        provenance = "closed-form"
    else:
        lower, upper, provenance = greedy_rect_free(n, m).size, maxrf_upper(n, m), "bounds"
    exact = lower == upper
    data = {"n": n, "m": m, "lower": lower, "upper": upper, "exact": exact, "provenance": provenance}
    text = f"maxrf({n},{m}) = {lower}" if exact else f"maxrf({n},{m}) in [{lower}, {upper}]"
    _emit(settings, f"{text} ({provenance})", data)
    return EXIT_OK if exact else EXIT_UNKNOWN


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    verdict = _classifier(args, settings).classify(args.n, args.m, args.c)
    text = f"G_{args.n},{args.m} with {args.c} colors: {verdict.status} ({verdict.rule})"
    _emit(settings, text, verdict.as_dict())
    return {Status.COLORABLE: EXIT_OK, Status.NOT_COLORABLE: EXIT_INVALID}.get(verdict.status, EXIT_UNKNOWN)


def cmd_obs(args: argparse.Namespace, settings: Settings) -> int:
    report = compute_obs(args.c, args.max_dim, _classifier(args, settings))
    minimal = ", ".join(f"G_{g.n},{g.m}" for g in report.minimal_grids)
    lines = [f"OBS_{report.c} ({len(report.minimal_grids)} grids): {minimal}"]
    if report.unknown_frontier:
        lines.append("unknown: " + ", ".join(f"G_{g.n},{g.m}" for g in report.unknown_frontier))
    lower, upper = report.cardinality_bounds
    lines.append(f"size bounds: {lower} <= |OBS_{report.c}| <= {upper}")
    _emit(settings, "\n".join(lines), report.as_dict())
    return EXIT_OK if report.complete else EXIT_UNKNOWN


def cmd_chart(args: argparse.Namespace, settings: Settings) -> int:
    result = chart(args.c, args.rows, args.cols, _classifier(args, settings))
    _emit(settings, result.render(), result.as_dict())
    return EXIT_OK


def cmd_ramsey(args: argparse.Namespace, settings: Settings) -> int:
    lower, upper = bipartite_ramsey2(args.c, _classifier(args, settings))
    text = f"BR(2,{args.c}) = {lower}" if lower == upper else f"{lower} <= BR(2,{args.c}) <= {upper}"
    _emit(settings, text, {"c": args.c, "lower": lower, "upper": upper})
    return EXIT_OK if lower == upper else EXIT_UNKNOWN


def cmd_stats(args: argparse.Namespace, settings: Settings) -> int:
    item = _load(args.file, cellset=not args.file.startswith("bundled/"))
    if not isinstance(item, CellSet):
        raise DomainError(f"{args.file} is a coloring, not a cell set")
    columns = args.columns or list(range(1, item.dims.m + 1))
    stats = intersection_stats(item, columns)
    lines = [f"I_{t} = {count}" for t, count in enumerate(stats.counts, start=1)]
    lines.append(f"union = {stats.union_size()}")
    _emit(settings, "\n".join(lines), {"columns": columns, "counts": list(stats.counts), "union": stats.union_size()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridcolor", description="Rectangle-free colorings of grids.")
    parser.add_argument("--config", help="TOML file with a [gridcolor] table")
    parser.add_argument("--cache", dest="cache_path", help="JSON path, redis:// URL, or 'none'")
    parser.add_argument("--format", dest="output_format", choices=("text", "json"))
    parser.add_argument("--max-nodes", type=int)
    parser.add_argument("--wall-ms", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--deterministic", action="store_true", default=None)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="check a coloring or cell set for rectangles")
    verify.add_argument("file", help="grid file or bundled/<name>")
    verify.add_argument("--strong", type=int, metavar="C'", help="also check the strong (c, C') condition")
    verify.add_argument("--cellset", action="store_true", help="read the file as a cell set")
    verify.set_defaults(handler=cmd_verify)

    construct = sub.add_parser("construct", help="write a constructed coloring")
    output = _Parser(add_help=False)
    output.add_argument("-o", "--output", help="output file; '-' or omitted for stdout")
    output.add_argument("--strong-only", action="store_true", help="skip the expansion step")
    recipes = construct.add_subparsers(dest="recipe", required=True, parser_class=_Parser)
    r = recipes.add_parser("cplusone", parents=[output])
    r.add_argument("c", type=int)
    r = recipes.add_parser("cplusgen", parents=[output])
    r.add_argument("c", type=int)
    r.add_argument("c_prime", type=int)
    r = recipes.add_parser("primepower", parents=[output])
    r.add_argument("p", type=int)
    r.add_argument("s", type=int)
    r.add_argument("d", type=int)
    r = recipes.add_parser("roundrobin", parents=[output])
    r.add_argument("n", type=int)
    r = recipes.add_parser("expand", parents=[output])
    r.add_argument("file")
    r.add_argument("c_prime", type=int)
    r = recipes.add_parser("bundled", parents=[output])
    r.add_argument("name")
    construct.set_defaults(handler=cmd_construct)

    maxrf = sub.add_parser("maxrf", help="largest rectangle-free subset of G_{n,m}")
    maxrf.add_argument("n", type=int)
    maxrf.add_argument("m", type=int)
    mode = maxrf.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--bounds", action="store_true")
    maxrf.set_defaults(handler=cmd_maxrf)

    classify = sub.add_parser("classify", help="decide c-colorability of G_{n,m}")
    classify.add_argument("n", type=int)
    classify.add_argument("m", type=int)
    classify.add_argument("c", type=int)
    classify.set_defaults(handler=cmd_classify)

    obs = sub.add_parser("obs", help="minimal non-colorable grids")
    obs.add_argument("c", type=int)
    obs.add_argument("--max-dim", type=int)
    obs.set_defaults(handler=cmd_obs)

    chart_cmd = sub.add_parser("chart", help="C/N/U table")
    chart_cmd.add_argument("c", type=int)
    chart_cmd.add_argument("--rows", type=parse_range, required=True)
    chart_cmd.add_argument("--cols", type=parse_range, required=True)
    chart_cmd.set_defaults(handler=cmd_chart)

    ramsey = sub.add_parser("ramsey", help="bounds on the bipartite Ramsey number BR(2,c)")
    ramsey.add_argument("c", type=int)
    ramsey.set_defaults(handler=cmd_ramsey)

    for cmd in (classify, obs, chart_cmd, ramsey):
        cmd.add_argument("--no-search", action="store_true", help="use bounds and constructions only")
    for cmd in (classify, obs, chart_cmd):
        cmd.add_argument("--assume-rfc", action="store_true", help="accept rectangle-free certificates")

    stats = sub.add_parser("stats", help="column intersection counts of a cell set")
    stats.add_argument("file")
    stats.add_argument("--columns", type=_columns)
    stats.set_defaults(handler=cmd_stats)
    return parser


def _configure_logging(verbose: int, settings: Settings) -> None:
    level = {0: settings.log_level, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


_FAILURES: tuple[tuple[type[BaseException], str, int], ...] = (
    (GridFormatError, "format", EXIT_USAGE),
    (UnknownBundleError, "unknown-bundle", EXIT_USAGE),
    (BundledDataError, "bundled-data", EXIT_INVALID),
    (DomainError, "domain", EXIT_USAGE),
    (UsageError, "usage", EXIT_USAGE),
    (OSError, "io", EXIT_USAGE),
    (ValueError, "config", EXIT_USAGE),
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(
            args.config,
            max_nodes=args.max_nodes,
            wall_ms=args.wall_ms,
            threads=args.threads,
            cache_path=args.cache_path,
            output_format=args.output_format,
            deterministic=args.deterministic,
        )
        _configure_logging(args.verbose, settings)
        handler: Callable[[argparse.Namespace, Settings], int] = args.handler
        return handler(args, settings)
    except Exception as exc:
        for kind, label, code in _FAILURES:
            if isinstance(exc, kind):
                _error(label, str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc))
                return code
        raise
