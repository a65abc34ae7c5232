"""
Command-line front end.

    python cli.py invariants graph.txt --field q
    python cli.py split-enum graph.txt --filter special2
    python cli.py check graph.txt --splitting split.json
    python cli.py sigma ideal.txt --t 2
    python cli.py cg graph.txt
    python cli.py search --config sweep.cfg --out results/

Exit codes: 0 success, 1 usage or input error, 2 a size guard refused,
3 an internal consistency check failed.
"""

import argparse
import json
import logging
import sys

from engines.betti_engine import edge_ideal_betti, report_from_table
from engines.homology import parse_field
from utils import export, graph_core, ideal_core, splitting, sweep
from utils.config import DEFAULT_CAPS, INEQUALITY_TAGS, OUTPUT_FORMATS, SweepConfig, load_sweep_config
from utils.errors import CapExceededError, GraphFormatError, InvariantBreachError, SplitLabError

logger = logging.getLogger("splitlab")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_BREACH = 3


class UsageError(SplitLabError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; here 2 means a cap refusal."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def load_graph(path):
    """Edge-list text, or graph JSON when the document starts with '{'."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        return graph_core.graph_from_json(json.loads(text))
    return graph_core.parse_edge_list(text)


def _caps(args):
    overrides = {
        "max_betti_vertices": getattr(args, "cap_n", None),
        "max_split_edges": getattr(args, "cap_edges", None),
        "max_cg_vertices": getattr(args, "cap_labelings", None),
    }
    return SweepConfig(caps=DEFAULT_CAPS).with_overrides(**overrides).caps


# Verbs

def cmd_invariants(args, out):
    graph = load_graph(args.graph)
    field_spec = parse_field(args.field)
    caps = _caps(args)
    table = edge_ideal_betti(graph, field_spec, caps)
    report = report_from_table(graph, table)
    flags = graph_core.classify(graph, caps)
    if args.format == "json":
        document = {
            "graph": graph_core.graph_to_json(graph),
            "report": report.as_dict(),
            "classes": flags.as_dict(),
            "betti_quotient": [[i, j, v] for (i, j), v in table.entries],
        }
        out.write(json.dumps(document, sort_keys=True) + "\n")
    else:
        out.write(export.report_text(graph, report, table, flags) + "\n")
        out.write("\n" + export.betti_diagram_text(table.to_convention("of_ideal")) + "\n")
    return EXIT_OK


def cmd_split_enum(args, out):
    graph = load_graph(args.graph)
    caps = _caps(args)
    if args.filter == "sigma":
        stream = splitting.sigma_stable_splittings(graph, caps)
    else:
        options = splitting.SplitOptions(splitting_filter=args.filter, dedupe=args.dedupe)
        stream = splitting.enumerate_splittings(graph, options, caps)
    count = 0
    for count, candidate in enumerate(stream, start=1):
        flags = splitting.specialness(candidate)
        components = len(graph_core.connected_components(candidate.source))
        if args.format == "json":
            document = dict(splitting.splitting_to_json(candidate), special1=flags.condition1, special2=flags.condition2)
            out.write(json.dumps(document) + "\n")
        else:
            out.write(
                f"{count}\tn'={candidate.source.n}\tcomponents={components}"
                f"\tspecial1={int(flags.condition1)}\tspecial2={int(flags.condition2)}\n"
            )
    logger.info("%d splittings", count)
    if args.format != "json":
        out.write(f"total: {count}\n")
    return EXIT_OK


def _write_check(check, args, out):
    if args.format == "json":
        for witness in check.witnesses:
            out.write(json.dumps(witness.to_json(), sort_keys=True) + "\n")
    else:
        out.write(f"splittings: {check.splitting_count}\n")
        for tag in check.passed:
            out.write(f"{tag}: {check.passed[tag]} hold, {check.failed[tag]} fail\n")
        for witness in check.witnesses:
            out.write(f"witness ({','.join(witness.violated)}): {json.dumps(witness.to_json()['splitting'])}\n")
    if args.out:
        rows = [record.to_row() for record in check.records]
        export.write_records(rows, args.out, args.format)


def cmd_check(args, out):
    caps = _caps(args)
    field_spec = parse_field(args.field)
    inequalities = tuple(args.inequalities.split(",")) if args.inequalities else INEQUALITY_TAGS
    unknown = set(inequalities) - set(INEQUALITY_TAGS)
    if unknown:
        raise UsageError(f"unknown inequality tags: {','.join(sorted(unknown))}")

    if args.replay:
        for number, data in enumerate(export.read_witnesses(args.replay), start=1):
            sweep.replay_witness(data, caps)
            out.write(f"witness {number}: reproduced, violated {','.join(data['violated'])}\n")
        return EXIT_OK

    if args.splitting:
        candidate = splitting.splitting_from_json(json.loads(_read(args.splitting)))
        if args.graph is not None and load_graph(args.graph) != candidate.target:
            raise UsageError("the splitting's target is not the given graph")
        check = sweep.check_splittings(candidate.target, [candidate], field_spec, caps, inequalities)
    elif args.graph is None:
        raise UsageError("check needs a graph file, --splitting or --replay")
    else:
        check = sweep.check_graph(load_graph(args.graph), args.filter, field_spec, caps, inequalities)
    _write_check(check, args, out)
    return EXIT_OK


def _as_graph(text):
    """The document as a Graph, or None when it is not a graph document."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except ValueError:
            return None
        return graph_core.graph_from_json(data) if isinstance(data, dict) and "edges" in data else None
    try:
        return graph_core.parse_edge_list(text)
    except GraphFormatError:
        return None


def cmd_sigma(args, out):
    text = _read(args.source)
    graph = _as_graph(text)

    if graph is None:
        ideal = ideal_core.parse_ideal(text)
        stretched = ideal_core.stretch_ideal(ideal, args.t, args.ambient)
        if args.format == "json":
            out.write(json.dumps(ideal_core.ideal_to_json(stretched)) + "\n")
        else:
            out.write(f"{stretched}\nring: K[x1..x{stretched.ambient_n}]\n")
        return EXIT_OK

    candidate = splitting.sigma_graph(graph, args.t)
    stretched_ideal = ideal_core.edge_ideal(candidate.source)
    if args.format != "json":
        out.write(f"{stretched_ideal}\n{candidate.source}\n")
    out.write(json.dumps(splitting.splitting_to_json(candidate)) + "\n")
    return EXIT_OK


def cmd_cg(args, out):
    graph = load_graph(args.graph)
    achieved = splitting.cg_set(graph, _caps(args))
    if args.format == "json":
        out.write(json.dumps({str(k): list(v.perm) for k, v in achieved.items()}) + "\n")
    else:
        out.write("C(G) = {" + ", ".join(str(k) for k in achieved) + "}\n")
        for value, labeling in achieved.items():
            out.write(f"gamma={value}: labeling {list(labeling.perm)}\n")
    return EXIT_OK


def cmd_search(args, out):
    config = load_sweep_config(args.config) if args.config else SweepConfig()
    family, family_arg = None, None
    if args.family:
        family, _, family_arg = args.family.partition(":")
    config = config.with_overrides(
        family=family,
        family_arg=family_arg or None,
        field=args.field,
        splitting_filter=args.filter,
        output_format=args.format,
        output_path=args.out,
        workers=args.workers,
        skip_capped=True if args.skip_capped else None,
        inequalities=tuple(args.inequalities.split(",")) if args.inequalities else None,
        max_betti_vertices=args.cap_n,
        max_split_edges=args.cap_edges,
    )
    result = sweep.run_sweep(config)
    paths = export.write_sweep(result, config.output_path, config.output_format)
    manifest = result.manifest
    out.write(
        f"graphs: {manifest['graphs']}  splittings: {manifest['splittings']}  "
        f"witnesses: {manifest['witnesses']}  skipped: {len(manifest['skipped'])}\n"
    )
    for tag in config.inequalities:
        out.write(f"{tag}: {manifest['passed'][tag]} hold, {manifest['failed'][tag]} fail\n")
    out.write(f"config hash: {manifest['config_hash']}\n")
    for kind, path in paths.items():
        out.write(f"{kind}: {path}\n")
    return EXIT_OK


# Parser

def build_parser():
    parser = _Parser(prog="splitlab", description="Edge ideals of splitting graphs")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    verbosity.add_argument("--quiet", action="store_true", help="only errors on stderr")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sub, field=True, fmt=("text", "json")):
        if field:
            sub.add_argument("--field", default="gf2", help="gf2, q or gfp:<p>")
        sub.add_argument("--format", default=fmt[0], choices=fmt)
        sub.add_argument("--cap-n", type=int, help="largest ring size for Betti tables")
        sub.add_argument("--cap-edges", type=int, help="largest edge count for splitting enumeration")

    sub = commands.add_parser("invariants", help="pd, reg, depth, dim, bight, nu and Betti tables")
    sub.add_argument("graph")
    common(sub)
    sub.set_defaults(handler=cmd_invariants)

    sub = commands.add_parser("split-enum", help="list the splittings of a graph")
    sub.add_argument("graph")
    sub.add_argument("--filter", default="all", choices=("all", "special", "special1", "special2", "sigma"))
    sub.add_argument("--dedupe", action="store_true", help="one splitting per isomorphism class of (G', alpha)")
    sub.add_argument("--cap-labelings", type=int, help="largest n for the sigma filter")
    common(sub, field=False)
    sub.set_defaults(handler=cmd_split_enum)

    sub = commands.add_parser("check", help="compare a graph with its splittings")
    sub.add_argument("graph", nargs="?")
    sub.add_argument("--filter", default="all", choices=("all", "special", "special1", "special2", "sigma"))
    sub.add_argument("--splitting", help="check one splitting given as JSON")
    sub.add_argument("--replay", help="replay a witnesses.jsonl file")
    sub.add_argument("--inequalities", help="comma list out of " + ",".join(INEQUALITY_TAGS))
    sub.add_argument("--out", help="also write the comparison records here")
    sub.add_argument("--cap-labelings", type=int, help="largest n for the sigma filter")
    common(sub, fmt=("text", "json", "csv"))
    sub.set_defaults(handler=cmd_check)

    sub = commands.add_parser("sigma", help="stretch an ideal or a graph")
    sub.add_argument("source", help="ideal document or edge-list file")
    sub.add_argument("--t", type=int, default=1)
    sub.add_argument("--ambient", default="minimal", choices=ideal_core.AMBIENT_CONVENTIONS)
    sub.add_argument("--format", default="text", choices=("text", "json"))
    sub.set_defaults(handler=cmd_sigma)

    sub = commands.add_parser("cg", help="C(G): component counts of G* over all labelings")
    sub.add_argument("graph")
    sub.add_argument("--format", default="text", choices=("text", "json"))
    sub.add_argument("--cap-labelings", type=int, help="largest n for the labeling enumeration")
    sub.set_defaults(handler=cmd_cg)

    sub = commands.add_parser("search", help="sweep a graph family for witnesses")
    sub.add_argument("--config", help="key=value sweep configuration")
    sub.add_argument("--family", help="paths:<n>, cycles:<n>, all_connected:<m> or file:<path>")
    sub.add_argument("--field")
    sub.add_argument("--filter", choices=("all", "special", "special1", "special2", "sigma"))
    sub.add_argument("--format", choices=OUTPUT_FORMATS)
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--workers", type=int)
    sub.add_argument("--inequalities")
    sub.add_argument("--skip-capped", action="store_true")
    sub.add_argument("--cap-n", type=int)
    sub.add_argument("--cap-edges", type=int)
    sub.set_defaults(handler=cmd_search)
    return parser


def configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args)
    try:
        return args.handler(args, out)
    except CapExceededError as exc:
        logger.error("refused: %s", exc)
        return EXIT_CAP
    except InvariantBreachError as exc:
        logger.error("internal check failed: %s", exc)
        return EXIT_BREACH
    except (SplitLabError, ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
