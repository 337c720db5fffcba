"""Command-line entry point for tagrot.

Usage:
    # Rotation order of the octagon (type A_5)
    tagrot order --surface "0,1:[8],0"

    # All verification suites as a JSON report
    tagrot verify --emit json

    # Exchange graph of the pentagon in DOT
    tagrot explore --surface "0,1:[5],0" --emit dot
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Any

from ..config import ConfigError, Settings, load_config
from ..errors import ErrorCode, TagrotError, io_failure, surface_mismatch
from ..explorer import bfs_exchange_graph, export, write_export
from ..logging_config import setup_structured_logging
from ..mcg import act_on_triangulation, power, tagged_rotation
from ..models import (
    ModelTriangulation,
    arc_to_dict,
    canonical_start,
    infinite_order_witness,
    model_family,
    orbit,
    parse_arc,
    rotation_order,
)
from ..mutation import find_maximal_green_sequences, green_endpoint_report
from ..proofkit import (
    SuiteReport,
    build_canonical_triangulation,
    canonical_build_plan,
    canonical_source_flip_sweep,
    canonical_sweep,
    classify_arcs,
    flip_mutation_suite,
    genus_mutation_replay,
    green_endpoint_suite,
    rotation_equivariance_suite,
    rotation_order_suite,
    source_flip_suite,
)
from ..surface import MarkedSurface, classify_type, enumerate_surfaces, parse_surface
from ..triangulation import (
    TaggedTriangulation,
    b_matrix,
    flip_tagged,
    load_triangulation,
    quiver,
    tagged_arc,
    to_document,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ExitCode(IntEnum):
    """Process exit codes."""

    SUCCESS = 0  # All requested checks passed
    CHECK_FAILURES = 1  # Some check failed, or an internal invariant broke
    USAGE_ERROR = 2  # Bad arguments, surface or document
    IO_ERROR = 3  # Reading or writing a file failed


@dataclass
class Output:
    """What a subcommand produced: a JSON payload, plain text and the exit code."""

    payload: dict[str, Any]
    text: str
    dot: str | None = None
    code: ExitCode = ExitCode.SUCCESS


# ============================================================================
# Helpers
# ============================================================================


def _is_model(surface: MarkedSurface) -> bool:
    try:
        model_family(surface)
    except TagrotError:
        return False
    return True


def _read_triangulation(path: str) -> TaggedTriangulation:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise io_failure(path, str(e)) from e
    return load_triangulation(text)


def _start_triangulation(args: argparse.Namespace) -> TaggedTriangulation:
    """Triangulation from ``--triangulation``, else the canonical one of ``--surface``."""
    surface = parse_surface(args.surface) if args.surface else None
    if args.triangulation:
        t = _read_triangulation(args.triangulation)
        if surface is not None and surface != t.surface:
            raise surface_mismatch(surface, t.surface)
        return t
    if surface is None:
        raise TagrotError(ErrorCode.INVALID_SURFACE, "either --surface or --triangulation is required")
    if _is_model(surface):
        return canonical_start(surface).tagged()
    return build_canonical_triangulation(surface)


def _dump(payload: dict[str, Any], indent: int | None) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **payload}, indent=indent, sort_keys=True)


# ============================================================================
# Subcommands
# ============================================================================


def cmd_surface(args: argparse.Namespace, settings: Settings) -> Output:
    surface = parse_surface(args.surface)
    surface_type = classify_type(surface)
    witness = infinite_order_witness(surface, settings.models.orbit_certificate_length)
    payload = {
        "surface": surface.to_dict(),
        "rank": surface.rank,
        "type": str(surface_type),
        "model": _is_model(surface),
        "obstruction": witness.kind.value if witness else None,
    }
    text = f"{surface}: rank {surface.rank}, type {surface_type}"
    if witness:
        text += f", infinite rotation order ({witness.kind.value})"
    return Output(payload, text)


def cmd_triangulate(args: argparse.Namespace, settings: Settings) -> Output:
    surface = parse_surface(args.surface)
    if args.model:
        t = canonical_start(surface).tagged()
    else:
        t = build_canonical_triangulation(surface)
    payload: dict[str, Any] = {"triangulation": to_document(t)}
    if args.plan:
        payload["plan"] = canonical_build_plan(surface).to_dict()
    types = {str(slot): kind.value for slot, kind in classify_arcs(t).items()}
    payload["arc_types"] = types
    text = json.dumps(to_document(t), indent=settings.export.indent, sort_keys=True)
    return Output(payload, text)


def cmd_flip(args: argparse.Namespace, settings: Settings) -> Output:
    t = _start_triangulation(args)
    flipped = flip_tagged(t, args.arc)
    payload = {
        "arc": args.arc,
        "before": str(tagged_arc(t, args.arc)),
        "after": str(tagged_arc(flipped, args.arc)),
        "triangulation": to_document(flipped),
    }
    return Output(payload, json.dumps(to_document(flipped), indent=settings.export.indent, sort_keys=True))


def cmd_rotate(args: argparse.Namespace, settings: Settings) -> Output:
    t = _start_triangulation(args)
    g = power(tagged_rotation(t.surface), args.power)
    rotated = act_on_triangulation(g, t)
    payload = {"power": args.power, "element": str(g), "triangulation": to_document(rotated)}
    return Output(payload, json.dumps(to_document(rotated), indent=settings.export.indent, sort_keys=True))


def cmd_order(args: argparse.Namespace, settings: Settings) -> Output:
    surface = parse_surface(args.surface)
    certificate = settings.models.orbit_certificate_length
    if _is_model(surface):
        order = rotation_order(surface, certificate)
        payload = {"surface": surface.to_dict(), "order": order.value, "on_arcs": order.on_arcs}
        if order.is_infinite:
            payload["certificate"] = [arc_to_dict(a) for a in order.certificate]
        return Output(payload, str(order))
    witness = infinite_order_witness(surface, certificate)
    payload = {
        "surface": surface.to_dict(),
        "order": None,
        "obstruction": witness.kind.value if witness else None,
        "witness": witness.witness if witness else None,
    }
    return Output(payload, "infinite")


def cmd_orbit(args: argparse.Namespace, settings: Settings) -> Output:
    surface = parse_surface(args.surface)
    arc = parse_arc(surface, args.arc)
    result = orbit(surface, arc, args.k)
    payload = {
        "surface": surface.to_dict(),
        "arc": arc_to_dict(arc),
        "rotates": [arc_to_dict(a) for a in result.rotates],
        "period": result.period,
    }
    lines = [f"{k}: {a}" for k, a in enumerate(result.rotates, start=1)]
    lines.append(f"period: {result.period if result.period is not None else 'none within ' + str(args.k)}")
    return Output(payload, "\n".join(lines))


def cmd_explore(args: argparse.Namespace, settings: Settings) -> Output:
    surface = parse_surface(args.surface)
    start: TaggedTriangulation | ModelTriangulation
    if args.start != "canonical":
        start = _read_triangulation(args.start)
        if start.surface != surface:
            raise surface_mismatch(surface, start.surface)
    elif _is_model(surface):
        start = canonical_start(surface)
    else:
        start = build_canonical_triangulation(surface)
    max_vertices = args.max or settings.explorer.max_vertices
    graph = bfs_exchange_graph(start, max_vertices, args.workers or settings.explorer.workers)

    if args.output:
        fmt = "dot" if args.emit == "dot" else "json"
        write_export(
            graph,
            args.output,
            fmt,
            settings.export.retry_attempts,
            settings.export.retry_wait_seconds,
            settings.export.indent,
        )

    payload = json.loads(export(graph, "json"))
    payload.pop("schema", None)
    text = (
        f"{surface}: {len(graph.vertices)} vertices, {len(graph.undirected_edges())} edges, "
        f"{'complete' if graph.complete else 'truncated'} ({graph.mode})"
    )
    return Output(payload, text, dot=export(graph, "dot").decode())


def _prefix_tree_dot(sequences: list[tuple[int, ...]]) -> str:
    nodes = {()}
    for seq in sequences:
        nodes.update(seq[:k] for k in range(1, len(seq) + 1))

    def name(prefix: tuple[int, ...]) -> str:
        return '"' + ("." + ".".join(str(k) for k in prefix) if prefix else "start") + '"'

    lines = ["digraph GS {"]
    lines.extend(f"  {name(p)};" for p in sorted(nodes, key=lambda p: (len(p), p)))
    lines.extend(
        f"  {name(p[:-1])} -> {name(p)} [label=\"{p[-1]}\"];"
        for p in sorted(nodes, key=lambda p: (len(p), p))
        if p
    )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_greenseq(args: argparse.Namespace, settings: Settings) -> Output:
    t = _start_triangulation(args)
    b = b_matrix(t)
    limit = args.max_len or settings.search.max_green_length
    found = find_maximal_green_sequences(
        b, limit, settings.search.workers, settings.search.exhaustive_rank_limit
    )
    model = None
    if not args.triangulation and _is_model(t.surface):
        model = canonical_start(t.surface)

    entries = []
    for seq in found.sequences:
        entry: dict[str, Any] = {
            "sequence": list(seq),
            "permutation": {str(k): v for k, v in found.permutations[seq].items()},
        }
        if model is not None:
            entry["ends_at_rotation"] = green_endpoint_report(model, seq).matches
        entries.append(entry)

    payload = {
        "surface": t.surface.to_dict(),
        "arrows": [list(a) for a in quiver(b).arrow_list()],
        "limit": limit,
        "complete": found.complete,
        "truncated": len(found.truncated),
        "sequences": entries,
    }
    lines = [" ".join(str(k) for k in seq) for seq in found.sequences]
    lines.append(f"{len(found.sequences)} maximal green sequences (length <= {limit})")
    if not found.complete:
        lines.append(f"{len(found.truncated)} branches truncated")
    code = ExitCode.SUCCESS
    if model is not None and not all(e["ends_at_rotation"] for e in entries):
        code = ExitCode.CHECK_FAILURES
    return Output(payload, "\n".join(lines), dot=_prefix_tree_dot(found.sequences), code=code)


def _sweep_surfaces(args: argparse.Namespace, settings: Settings) -> list[MarkedSurface]:
    cfg = settings.proofkit
    return enumerate_surfaces(
        args.max_rank or cfg.sweep_max_rank,
        cfg.sweep_max_genus,
        cfg.sweep_max_boundaries,
        cfg.sweep_max_punctures,
    )


def _suite_canonical(args: argparse.Namespace, settings: Settings) -> SuiteReport:
    workers = args.workers or settings.explorer.workers
    return canonical_sweep(_sweep_surfaces(args, settings), workers=workers)


def _suite_local_flips(args: argparse.Namespace, settings: Settings) -> SuiteReport:
    return canonical_source_flip_sweep(_sweep_surfaces(args, settings), settings.proofkit.local_search_states)


SUITES: dict[str, Callable[[argparse.Namespace, Settings], SuiteReport]] = {
    "canonical-sweep": _suite_canonical,
    "flip-mutation": lambda args, s: flip_mutation_suite(s.random.seed, s.random.samples),
    "genus-replay": lambda args, s: genus_mutation_replay(),
    "green-endpoints": lambda args, s: green_endpoint_suite(s.search.workers),
    "local-source-flip": _suite_local_flips,
    "rotation-equivariance": lambda args, s: rotation_equivariance_suite(s.explorer.max_vertices, s.random.seed),
    "rotation-orders": lambda args, s: rotation_order_suite(
        args.max_rank or s.proofkit.sweep_max_rank, s.models.orbit_certificate_length
    ),
    "source-flip": lambda args, s: source_flip_suite(),
}

DEFAULT_SUITES = (
    "canonical-sweep",
    "flip-mutation",
    "genus-replay",
    "green-endpoints",
    "rotation-equivariance",
    "rotation-orders",
    "source-flip",
)


def cmd_verify(args: argparse.Namespace, settings: Settings) -> Output:
    names = list(args.suite or DEFAULT_SUITES)
    if args.local_flips and "local-source-flip" not in names:
        names.append("local-source-flip")
    reports = []
    for name in sorted(set(names)):
        logger.info(f"Running suite {name}")
        reports.append(SUITES[name](args, settings))
    passed = all(r.passed for r in reports)
    payload = {"passed": passed, "suites": [r.to_dict() for r in reports]}
    text = "\n\n".join(r.to_table() for r in reports)
    return Output(payload, text, code=ExitCode.SUCCESS if passed else ExitCode.CHECK_FAILURES)


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], Output]] = {
    "explore": cmd_explore,
    "flip": cmd_flip,
    "greenseq": cmd_greenseq,
    "orbit": cmd_orbit,
    "order": cmd_order,
    "rotate": cmd_rotate,
    "surface": cmd_surface,
    "triangulate": cmd_triangulate,
    "verify": cmd_verify,
}


# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", default=None, help="Path to tagrot.yaml")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help="Log level (overrides config)",
    )
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized suites (overrides config)")
    common.add_argument(
        "--emit",
        choices=["text", "json", "dot"],
        default="text",
        help="Output format (dot only for explore and greenseq)",
    )

    parser = argparse.ArgumentParser(
        prog="tagrot",
        description="Tagged triangulations, flips and the tagged rotation of marked surfaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  tagrot order --surface "0,1:[8],0"
  tagrot verify --suite genus-replay --emit json
  tagrot explore --surface "0,1:[5],0" --emit dot
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def surface_arg(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--surface", "-s", required=required, help="Surface as g,b:[m1,...,mb],p")

    p = sub.add_parser("surface", parents=[common], help="Rank, type and rotation obstruction of a surface")
    surface_arg(p)

    p = sub.add_parser("triangulate", parents=[common], help="Canonical triangulation of a surface")
    surface_arg(p)
    p.add_argument("--model", action="store_true", help="Use the model fan instead of the inductive builder")
    p.add_argument("--plan", action="store_true", help="Include the build plan")

    p = sub.add_parser("flip", parents=[common], help="Flip one arc")
    surface_arg(p, required=False)
    p.add_argument("--triangulation", "-t", help="Triangulation JSON file")
    p.add_argument("--arc", "-a", type=int, required=True, help="Arc slot to flip")

    p = sub.add_parser("rotate", parents=[common], help="Apply a power of the tagged rotation")
    surface_arg(p, required=False)
    p.add_argument("--triangulation", "-t", help="Triangulation JSON file")
    p.add_argument("--power", "-k", type=int, default=1, help="Power of the rotation (default: 1)")

    p = sub.add_parser("order", parents=[common], help="Order of the tagged rotation")
    surface_arg(p)

    p = sub.add_parser("orbit", parents=[common], help="Rotates of one model arc")
    surface_arg(p)
    p.add_argument("--arc", "-a", required=True, help="Arc, e.g. 0-2, 1>3, r0*, br0,0,1 or a JSON object")
    p.add_argument("-k", type=int, default=10, help="Number of rotates (default: 10)")

    p = sub.add_parser("explore", parents=[common], help="Exchange graph by breadth-first search")
    surface_arg(p)
    p.add_argument("--start", default="canonical", help="canonical, or a triangulation JSON file")
    p.add_argument("--max", type=int, default=None, help="Vertex bound (overrides config)")
    p.add_argument("--workers", type=int, default=None, help="Frontier threads (overrides config)")
    p.add_argument("--output", "-o", default=None, help="Also write the export to this file")

    p = sub.add_parser("greenseq", parents=[common], help="Maximal green sequences")
    surface_arg(p, required=False)
    p.add_argument("--triangulation", "-t", help="Triangulation JSON file")
    p.add_argument("--max-len", type=int, default=None, help="Length bound (overrides config)")

    p = sub.add_parser("verify", parents=[common], help="Run verification suites")
    p.add_argument(
        "--suite",
        action="append",
        choices=sorted(SUITES),
        help="Suite to run; repeatable (default: every suite except local-source-flip)",
    )
    p.add_argument("--max-rank", type=int, default=None, help="Rank bound for sweeps (overrides config)")
    p.add_argument("--workers", type=int, default=None, help="Threads for the canonical sweep")
    p.add_argument(
        "--local-flips",
        action="store_true",
        help="Also run local-source-flip: the rotating flip of every arc with two distinct ends "
        "in each canonical triangulation of the sweep",
    )

    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = load_config(args.config)
    if args.log_level:
        settings.logging.level = args.log_level
    if args.seed is not None:
        settings.random.seed = args.seed
    return settings


def _render(output: Output, emit: str, indent: int | None) -> str:
    if emit == "json":
        return _dump(output.payload, indent)
    if emit == "dot":
        if output.dot is None:
            raise TagrotError(ErrorCode.INVALID_DOCUMENT, "--emit dot is only available for explore and greenseq")
        return output.dot.rstrip("\n")
    return output.text


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point.

    Returns:
        Exit code: 0 all checks passed, 1 check failures, 2 usage errors, 3 IO errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = _settings(args)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return ExitCode.USAGE_ERROR

    setup_structured_logging(settings.logging.level, settings.logging.structured)

    try:
        output = COMMANDS[args.command](args, settings)
        print(_render(output, args.emit, settings.export.indent))
    except TagrotError as e:
        logger.debug(f"{args.command} failed: {e.to_dict()}")
        if args.emit == "json":
            print(_dump({"error": e.to_dict()}, settings.export.indent))
        print(f"ERROR [{e.code.value}]: {e.message}", file=sys.stderr)
        return e.exit_code
    return output.code


if __name__ == "__main__":
    sys.exit(main())
