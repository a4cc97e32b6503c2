"""Command-line interface.

Subcommands: lattice, generate, check, maximal, enumerate, inflate,
fixed-points, reduce, conjecture, render, audit.  All computations are
deterministic; ``--seed`` is accepted for harness compatibility and ignored,
and ``--threads`` never changes any output byte.

Exit codes: 0 success; 1 property/consistency failure (methods disagree,
conjecture counterexample, audit failure); 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .compat import (
    conjecture_formula,
    is_compatible,
    max_compat_disklike,
    max_compat_oracle,
    max_compat_recursive,
)
from .enumeration import (
    cross_method_audit,
    enumerate_all,
    verify_conjecture,
)
from .errors import TransferSystemsError, UsageError
from .functors import fixed_points, inflate, quotient_context, universal_reduction
from .groups import DEFAULT_ORDER_CAP
from .render import render_dot, render_tikz
from .sites import Site, site_from_descriptor
from .systems import (
    BinaryRelation,
    TransferSystem,
    close_refl,
    complexity,
    count_cover_relations,
    generate,
    generate_from_edges,
    is_disklike,
    is_saturated,
    validate,
)

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2


def _split_edge_tokens(text: str) -> list[str]:
    """Split an edge list on separators outside <...> label brackets."""
    tokens, depth, cur = [], 0, []
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">" and depth > 0:
            depth -= 1
            cur.append(ch)
            continue
        if depth == 0 and (ch in ",;" or ch.isspace()):
            if cur:
                tokens.append("".join(cur))
                cur = []
            continue
        cur.append(ch)
    if cur:
        tokens.append("".join(cur))
    return tokens


def parse_edges(site: Site, text: str) -> list[tuple[int, int]]:
    """Parse ``SRC>DST`` edge tokens using node labels (see `lattice`)."""
    edges = []
    for token in _split_edge_tokens(text):
        depth = 0
        split_at = -1
        for i, ch in enumerate(token):
            if ch == "<":
                depth += 1
            elif ch == ">":
                if depth > 0:
                    depth -= 1
                else:
                    split_at = i
                    break
        if split_at < 0:
            raise UsageError(f"edge {token!r} must look like SRC>DST")
        src, dst = token[:split_at], token[split_at + 1 :]
        edges.append((site.node(src), site.node(dst)))
    return edges


def _edge_str(site: Site, e: tuple[int, int]) -> str:
    return f"{site.labels[e[0]]}>{site.labels[e[1]]}"


def _load_site(args) -> Site:
    if getattr(args, "group", None):
        desc = args.group
    elif getattr(args, "site", None):
        desc = args.site if ":" in args.site or "|" in args.site else f"poset:{args.site}"
    else:
        raise UsageError("provide --group DESCRIPTOR or --site POSET-FILE")
    return site_from_descriptor(desc, getattr(args, "max_order", DEFAULT_ORDER_CAP))


def _load_system(args, site: Site) -> TransferSystem:
    if getattr(args, "input", None):
        return serialize.load_system(Path(args.input).read_text(), site)
    if getattr(args, "edges", None) is not None:
        return generate_from_edges(site, parse_edges(site, args.edges))
    raise UsageError("provide --edges \"SRC>DST ...\" or --input FILE.json")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser, *, system_input: bool = False) -> None:
    p.add_argument("--group", help="group descriptor, e.g. cyclic:6, symmetric:3, q8")
    p.add_argument("--site", help="poset file for an abstract site")
    p.add_argument("--max-order", type=int, default=DEFAULT_ORDER_CAP,
                   help="group order cap (default %(default)s)")
    p.add_argument("--seed", type=int, help="accepted and ignored; runs are deterministic")
    p.add_argument("--threads", type=int, default=1,
                   help="worker hint; outputs are identical for any value")
    p.add_argument("--out", help="write output to a file instead of stdout")
    if system_input:
        p.add_argument("--edges", help="edge list like \"1>C2; C3>C6\" (closed to a system)")
        p.add_argument("--input", help="transfer-system JSON file")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="transys",
        description=(
            "Compute with transfer systems on subgroup lattices and abstract "
            "bounded lattices. Cayley tables are validated fully below order "
            "256 and by sampled triples above."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="list subgroups/nodes with their labels")
    _add_common(p)

    p = sub.add_parser("generate", help="close an edge list into a transfer system")
    _add_common(p, system_input=True)

    p = sub.add_parser("check", help="validate/saturated/disklike/complexity of a system")
    _add_common(p, system_input=True)
    p.add_argument("--complexity-bound", type=int, default=4)

    p = sub.add_parser("maximal", help="maximal compatible transfer system M(O)")
    _add_common(p, system_input=True)
    p.add_argument("--method", choices=["oracle", "recursive", "algorithm", "all"],
                   default="recursive")

    p = sub.add_parser("enumerate", help="enumerate all transfer systems on the site")
    _add_common(p)
    p.add_argument("--census", action="store_true", help="print census counts")
    p.add_argument("--cap", type=int, default=200_000)
    p.add_argument("--jsonl", help="write the catalog as JSON-lines to a file")

    p = sub.add_parser("inflate", help="inflate a system on [N, G] to the whole group")
    _add_common(p, system_input=True)
    p.add_argument("--normal", required=True, help="label of the normal subgroup N")

    p = sub.add_parser("fixed-points", help="restrict a system to the interval [N, G]")
    _add_common(p, system_input=True)
    p.add_argument("--normal", required=True, help="label of the normal subgroup N")

    p = sub.add_parser("reduce", help="M(O) for disklike O via the quotient by N_O")
    _add_common(p, system_input=True)

    p = sub.add_parser("conjecture", help="compare the conjectured formula with M(O)")
    _add_common(p)
    p.add_argument("--groups", help="comma-separated group descriptors")
    p.add_argument("--order-le", type=int,
                   help="use every built-in group of order at most this")
    p.add_argument("--complexity-bound", type=int,
                   help="generate disklike systems from at most this many top transfers")
    p.add_argument("--require-bottom-to-top", action="store_true",
                   help="only systems containing the universal transfer")
    p.add_argument("--cap", type=int, default=200_000)

    p = sub.add_parser("render", help="emit DOT or TikZ for a system")
    _add_common(p, system_input=True)
    p.add_argument("--format", choices=["dot", "tikz"], default="dot")
    p.add_argument("--highlight", choices=["none", "maximal"], default="none")
    p.add_argument("--interval-above", help="label of N; draw [N, G] as a cluster")

    p = sub.add_parser("audit", help="cross-method agreement over the full catalog")
    _add_common(p)
    p.add_argument("--cap", type=int, default=200_000)
    return ap


# ---------------------------------------------------------------------------
# Subcommand bodies


def _cmd_lattice(args) -> int:
    site = _load_site(args)
    lines = []
    if site.lattice is not None:
        latt = site.lattice
        lines.append(f"# {site.descriptor}: {len(latt)} subgroups")
        lines.append("index\tlabel\torder\tnormal\tmembers")
        for i, s in enumerate(latt.subgroups):
            members = ",".join(latt.group.element_names[a] for a in s.members)
            lines.append(
                f"{i}\t{site.labels[i]}\t{s.order}\t{'yes' if latt.normal[i] else 'no'}\t{{{members}}}"
            )
    else:
        lines.append(f"# {site.descriptor}: {site.size} nodes")
        lines.append("index\tlabel")
        for i in range(site.size):
            lines.append(f"{i}\t{site.labels[i]}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_generate(args) -> int:
    site = _load_site(args)
    ts = _load_system(args, site)
    _emit(args, "".join(_edge_str(site, e) + "\n" for e in ts.edges()))
    return EXIT_OK


def _cmd_check(args) -> int:
    site = _load_site(args)
    if getattr(args, "edges", None) is not None:
        relation = BinaryRelation.from_edges(site, parse_edges(site, args.edges))
        closed = generate(relation)
        # reflexive edges are implicit in edge lists; diagnose the rest
        raw = validate(close_refl(relation))
        raw_line = (
            "input relation: already a transfer system"
            if isinstance(raw, TransferSystem)
            else f"input relation: not closed ({raw.axiom}: {raw.describe(site)})"
        )
        ts = closed
    else:
        ts = _load_system(args, site)
        raw_line = "input file: valid transfer system"
    lines = [raw_line]
    sat = is_saturated(ts)
    if sat.saturated:
        lines.append("saturated: yes")
    else:
        l, k, h = sat.witness
        lines.append(
            f"saturated: no (witness L={site.labels[l]} K={site.labels[k]} H={site.labels[h]})"
        )
    lines.append(f"disklike: {'yes' if is_disklike(ts) else 'no'}")
    c = complexity(ts, args.complexity_bound)
    lines.append(f"complexity: {c if c is not None else f'> {args.complexity_bound}'}")
    lines.append(f"edges: {ts.edge_count}")
    lines.append(f"cover relations: {count_cover_relations(ts)}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_maximal(args) -> int:
    site = _load_site(args)
    ts = _load_system(args, site)
    results = {}
    if args.method in ("oracle", "all"):
        results["oracle"] = max_compat_oracle(ts)
    if args.method in ("recursive", "all"):
        results["recursive"] = max_compat_recursive(ts)
    if args.method in ("algorithm", "all"):
        if args.method == "algorithm" or is_disklike(ts):
            results["algorithm"] = max_compat_disklike(ts).system
    values = list(results.values())
    agree = all(v == values[0] for v in values)
    lines = ["M(O) edges: " + (", ".join(_edge_str(site, e) for e in values[0].edges()) or "(none)")]
    if args.method == "all":
        lines.append("methods agree" if agree else "METHODS DISAGREE")
        for name, v in results.items():
            if v != values[0]:
                lines.append(f"  {name}: " + ", ".join(_edge_str(site, e) for e in v.edges()))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if agree else EXIT_INCONSISTENT


def _cmd_enumerate(args) -> int:
    site = _load_site(args)
    catalog = enumerate_all(site, args.cap)
    out = []
    if args.census:
        out.append(catalog.stats.summary())
    else:
        out.append(f"total={len(catalog)}")
    if args.jsonl:
        Path(args.jsonl).write_text(serialize.dump_catalog(catalog))
        out.append(f"wrote {len(catalog)} systems to {args.jsonl}")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def _quotient_from_args(args):
    site = _load_site(args)
    if site.lattice is None:
        raise UsageError("inflation requires a group-derived site")
    return site, quotient_context(site, site.node(args.normal))


def _cmd_inflate(args) -> int:
    site, ctx = _quotient_from_args(args)
    interval = ctx.interval.site
    o_bar = (
        serialize.load_system(Path(args.input).read_text(), interval)
        if args.input
        else generate_from_edges(interval, parse_edges(interval, args.edges or ""))
    )
    result = inflate(ctx, o_bar)
    _emit(args, "".join(_edge_str(site, e) + "\n" for e in result.edges()))
    return EXIT_OK


def _cmd_fixed_points(args) -> int:
    site, ctx = _quotient_from_args(args)
    ts = _load_system(args, site)
    result = fixed_points(ctx, ts)
    interval = ctx.interval.site
    _emit(args, "".join(_edge_str(interval, e) + "\n" for e in result.edges()))
    return EXIT_OK


def _cmd_reduce(args) -> int:
    site = _load_site(args)
    ts = _load_system(args, site)
    result = universal_reduction(ts)
    _emit(args, "".join(_edge_str(site, e) + "\n" for e in result.edges()))
    return EXIT_OK


def _cmd_conjecture(args) -> int:
    sites: list[Site] = []
    if args.order_le:
        from .groups import small_group_descriptors

        for desc in small_group_descriptors(args.order_le):
            sites.append(site_from_descriptor(desc, args.max_order))
    if args.groups:
        for desc in args.groups.split(","):
            sites.append(site_from_descriptor(desc.strip(), args.max_order))
    if args.site:
        sites.append(_load_site(argparse.Namespace(group=None, site=args.site,
                                                   max_order=args.max_order)))
    if not sites:
        raise UsageError("provide --groups, --order-le, or --site")
    report = verify_conjecture(
        sites, args.complexity_bound, args.require_bottom_to_top, args.cap
    )
    _emit(args, json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


def _cmd_render(args) -> int:
    site = _load_site(args)
    ts = _load_system(args, site)
    highlight = max_compat_recursive(ts) if args.highlight == "maximal" else None
    cluster = None
    if args.interval_above:
        n = site.node(args.interval_above)
        cluster = [int(i) for i in np.flatnonzero(site.leq[n])]
    render = render_dot if args.format == "dot" else render_tikz
    _emit(args, render(ts, highlight, cluster))
    return EXIT_OK


def _cmd_audit(args) -> int:
    site = _load_site(args)
    catalog = enumerate_all(site, args.cap)
    report = cross_method_audit(catalog)
    _emit(args, json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report.ok else EXIT_INCONSISTENT


_COMMANDS = {
    "lattice": _cmd_lattice,
    "generate": _cmd_generate,
    "check": _cmd_check,
    "maximal": _cmd_maximal,
    "enumerate": _cmd_enumerate,
    "inflate": _cmd_inflate,
    "fixed-points": _cmd_fixed_points,
    "reduce": _cmd_reduce,
    "conjecture": _cmd_conjecture,
    "render": _cmd_render,
    "audit": _cmd_audit,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TransferSystemsError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
