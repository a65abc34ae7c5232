"""
Experiment sweeps: graph families, per-graph checks, witnesses and the run
manifest that makes every output replayable.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import networkx as nx

from engines.homology import parse_field
from utils import graph_core
from utils.config import DEFAULT_CAPS, INEQUALITY_TAGS
from utils.errors import CapExceededError, GraphFormatError, InvariantBreachError
from utils.splitting import (
    SplitOptions,
    compare,
    enumerate_splittings,
    sigma_stable_splittings,
    splitting_from_json,
    splitting_to_json,
)

logger = logging.getLogger(__name__)

ENGINE_VERSION = "1.0.0"


# Families

def _wl_hash(graph):
    return nx.weisfeiler_lehman_graph_hash(graph.to_networkx())


def connected_graphs(max_edges, caps=DEFAULT_CAPS):
    """
    All connected graphs with 1..max_edges edges, one per isomorphism class.

    Each level grows the previous one by a new edge between existing vertices
    or by a pendant vertex; every connected graph arises this way since it
    has a non-bridge edge or a leaf.

    Returns:
        List of Graphs ordered by edge count, then by discovery order
    """
    if max_edges < 1:
        return []
    level = [graph_core.make_graph(2, [(1, 2)])]
    found = list(level)
    for _ in range(max_edges - 1):
        buckets = {}
        grown = []
        for graph in level:
            candidates = []
            for u in graph.vertices:
                for v in range(u + 1, graph.n + 1):
                    if not graph.has_edge(u, v):
                        candidates.append(graph_core.make_graph(graph.n, list(graph.edges) + [(u, v)]))
            for u in graph.vertices:
                candidates.append(graph_core.make_graph(graph.n + 1, list(graph.edges) + [(u, graph.n + 1)]))
            for candidate in candidates:
                bucket = buckets.setdefault(_wl_hash(candidate), [])
                if any(graph_core.are_isomorphic(candidate, other, caps) for other in bucket):
                    continue
                bucket.append(candidate)
                grown.append(candidate)
        found.extend(grown)
        level = grown
    logger.info("Generated %d connected graphs with at most %d edges", len(found), max_edges)
    return found


def _read_graph_file(path):
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        return graph_core.parse_edge_list(text)
    except GraphFormatError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def family_graphs(config):
    """
    The graphs a sweep visits, as (name, Graph) pairs in a fixed order.

    ``file`` reads one edge-list file, or every ``*.txt`` file of a
    directory in name order.
    """
    if config.family == "file":
        path = config.family_arg
        if os.path.isdir(path):
            names = sorted(name for name in os.listdir(path) if name.endswith(".txt"))
            return [(name, _read_graph_file(os.path.join(path, name))) for name in names]
        return [(os.path.basename(path), _read_graph_file(path))]

    bound = int(config.family_arg)
    if config.family == "paths":
        return [(f"P{n}", graph_core.path_graph(n)) for n in range(2, bound + 1)]
    if config.family == "cycles":
        return [(f"C{n}", graph_core.cycle_graph(n)) for n in range(3, bound + 1)]
    graphs = connected_graphs(bound, config.caps)
    return [(f"G{index}", graph) for index, graph in enumerate(graphs, start=1)]


# Checks and witnesses

@dataclass(frozen=True)
class Witness:
    """A comparison whose selected verdicts failed, with enough to replay it."""
    record: object
    violated: tuple

    def to_json(self):
        return {
            "splitting": splitting_to_json(self.record.splitting),
            "field": self.record.source_report.field.label,
            "violated": list(self.violated),
            "verdicts": self.record.verdicts(),
        }


def replay_witness(data, caps=DEFAULT_CAPS):
    """
    Recompute a serialized witness.

    Args:
        data: Witness, or its JSON form
        caps: Size guards

    Returns:
        The fresh ComparisonRecord

    Raises:
        InvariantBreachError: when the recomputed verdicts differ from the stored ones
    """
    if isinstance(data, Witness):
        data = data.to_json()
    candidate = splitting_from_json(data["splitting"])
    record = compare(candidate, parse_field(data["field"]), caps)
    if record.verdicts() != data["verdicts"]:
        raise InvariantBreachError(
            f"witness replay disagrees: stored {data['verdicts']}, recomputed {record.verdicts()}"
        )
    return record


@dataclass
class GraphCheck:
    """Outcome of comparing one graph against its filtered splittings."""
    graph: graph_core.Graph
    records: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    passed: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)

    @property
    def splitting_count(self):
        return len(self.records)


def filtered_splittings(graph, splitting_filter, caps=DEFAULT_CAPS):
    if splitting_filter == "sigma":
        return sigma_stable_splittings(graph, caps)
    return enumerate_splittings(graph, SplitOptions(splitting_filter=splitting_filter), caps)


def check_splittings(graph, candidates, field_spec=None, caps=DEFAULT_CAPS, inequalities=INEQUALITY_TAGS):
    """
    Compare G with each given splitting and collect witnesses for the
    selected inequalities.

    Returns:
        GraphCheck
    """
    field_spec = field_spec or parse_field("gf2")
    check = GraphCheck(graph, passed={tag: 0 for tag in inequalities}, failed={tag: 0 for tag in inequalities})
    for candidate in candidates:
        record = compare(candidate, field_spec, caps)
        check.records.append(record)
        violated = record.violated(inequalities)
        for tag in inequalities:
            if tag in violated:
                check.failed[tag] += 1
            else:
                check.passed[tag] += 1
        if violated:
            check.witnesses.append(Witness(record, tuple(violated)))
    logger.debug("%s: %d splittings, %d witnesses", graph, check.splitting_count, len(check.witnesses))
    return check


def check_graph(graph, splitting_filter="all", field_spec=None, caps=DEFAULT_CAPS, inequalities=INEQUALITY_TAGS):
    """Run check_splittings over every splitting the filter selects."""
    candidates = filtered_splittings(graph, splitting_filter, caps)
    return check_splittings(graph, candidates, field_spec, caps, inequalities)


@dataclass
class SweepResult:
    rows: list
    witnesses: list
    manifest: dict


def _sweep_task(args):
    """Worker body: returns plain data so it crosses process boundaries cheaply."""
    name, graph, config = args
    try:
        check = check_graph(graph, config.splitting_filter, parse_field(config.field), config.caps, config.inequalities)
    except CapExceededError as exc:
        if not config.skip_capped:
            raise
        return name, None, str(exc)

    rows = []
    for index, record in enumerate(check.records, start=1):
        row = {"graph": name, "graph_edges": graph_core.format_edge_list(graph).strip().replace("\n", "; ")}
        row["splitting"] = index
        row.update(record.to_row())
        row["violated"] = ",".join(record.violated(config.inequalities))
        rows.append(row)
    witnesses = [dict(witness.to_json(), graph=name) for witness in check.witnesses]
    return name, (rows, witnesses, check.passed, check.failed), None


def run_sweep(config):
    """
    Run a configured sweep.

    Graphs are processed by a pool of ``config.workers`` processes; results
    are collected in family order, so output does not depend on the pool.

    Returns:
        SweepResult with the record rows, witness documents and manifest
    """
    graphs = family_graphs(config)
    logger.info("Sweep %s over %d graphs (filter=%s, field=%s)",
                config.config_hash()[:12], len(graphs), config.splitting_filter, config.field)
    tasks = [(name, graph, config) for name, graph in graphs]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_sweep_task, tasks))
    else:
        outcomes = [_sweep_task(task) for task in tasks]

    rows, witnesses, skipped = [], [], []
    passed = {tag: 0 for tag in config.inequalities}
    failed = {tag: 0 for tag in config.inequalities}
    for name, outcome, refusal in outcomes:
        if outcome is None:
            logger.warning("Skipped %s: %s", name, refusal)
            skipped.append({"graph": name, "reason": refusal})
            continue
        graph_rows, graph_witnesses, graph_passed, graph_failed = outcome
        rows.extend(graph_rows)
        witnesses.extend(graph_witnesses)
        for tag in config.inequalities:
            passed[tag] += graph_passed[tag]
            failed[tag] += graph_failed[tag]

    manifest = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "engine_version": ENGINE_VERSION,
        "field": parse_field(config.field).label,
        "graphs": len(graphs),
        "splittings": len(rows),
        "witnesses": len(witnesses),
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
    }
    logger.info("Sweep done: %d splittings, %d witnesses, %d skipped", len(rows), len(witnesses), len(skipped))
    return SweepResult(rows, witnesses, manifest)
