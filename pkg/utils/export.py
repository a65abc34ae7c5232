"""
Tables, text renderings, charts and files for Betti tables, invariant
reports and sweep results.
"""

import io
import json
import logging
import os

import pandas as pd
import plotly.graph_objects as go

from utils.config import OUTPUT_FORMATS

logger = logging.getLogger(__name__)

RECORD_FILES = {"json": "records.jsonl", "csv": "records.csv", "text": "records.txt", "xlsx": "sweep.xlsx"}


# Betti tables

def betti_diagram_frame(table):
    """
    Betti diagram: columns are homological degrees i, rows are j - i.

    Returns:
        DataFrame of ints, zero where the table has no entry
    """
    entries = table.as_dict()
    if not entries:
        return pd.DataFrame()
    columns = range(0, max(i for i, _ in entries) + 1)
    rows = range(min(j - i for i, j in entries), max(j - i for i, j in entries) + 1)
    frame = pd.DataFrame(0, index=list(rows), columns=list(columns))
    for (i, j), value in entries.items():
        frame.loc[j - i, i] = value
    frame.index.name = "j-i"
    frame.columns.name = "i"
    return frame


def betti_degree_frame(table):
    """Total-degree layout: one row per (i, j) entry."""
    rows = [{"i": i, "j": j, "beta": value} for (i, j), value in table.entries]
    return pd.DataFrame(rows, columns=["i", "j", "beta"])


def betti_diagram_text(table):
    frame = betti_diagram_frame(table)
    header = f"Betti diagram ({table.convention}, {table.field})"
    if frame.empty:
        return header + "\n(empty)"
    shown = frame.astype(str).replace("0", "-")
    totals = " ".join(str(total) for total in table.totals())
    return f"{header}\n{shown.to_string()}\ntotals: {totals}"


def betti_degree_text(table):
    frame = betti_degree_frame(table)
    header = f"Graded Betti numbers ({table.convention}, {table.field})"
    if frame.empty:
        return header + "\n(empty)"
    lines = [f"beta_{{{i},{j}}} = {beta}" for i, j, beta in frame.itertuples(index=False)]
    return header + "\n" + "\n".join(lines)


def betti_heatmap(table, title="Betti diagram"):
    frame = betti_diagram_frame(table)
    fig = go.Figure(
        data=go.Heatmap(
            z=frame.values,
            x=[str(c) for c in frame.columns],
            y=[str(r) for r in frame.index],
            text=frame.values,
            texttemplate="%{text}",
            colorscale="Blues",
            showscale=False,
        )
    )
    fig.update_layout(title=title, xaxis_title="i", yaxis_title="j - i", yaxis_autorange="reversed")
    return fig


# Reports

REPORT_FIELDS = ("n", "pd_quotient", "pd_ideal", "reg_quotient", "reg_ideal", "depth", "dim", "bight", "nu")


def report_text(graph, report, table, flags=None):
    """Plain-text block for the invariants command."""
    lines = [str(graph), f"field: {report.field}"]
    lines.extend(f"{name}: {getattr(report, name)}" for name in REPORT_FIELDS)
    if flags is not None:
        lines.extend(f"{name}: {value}" for name, value in flags.as_dict().items())
    lines.append("")
    lines.append(betti_degree_text(table))
    lines.append("")
    lines.append(betti_diagram_text(table))
    return "\n".join(lines)


def comparison_frame(record):
    """Side-by-side invariants of G and G' for one comparison."""
    target = record.target_report.as_dict()
    source = record.source_report.as_dict()
    rows = [{"invariant": name, "G": target[name], "G'": source[name]} for name in REPORT_FIELDS]
    return pd.DataFrame(rows)


def delta_chart(rows, title="Invariant changes across splittings"):
    """Histogram-style bar chart of the delta_* columns of comparison rows."""
    frame = records_frame(rows)
    fig = go.Figure()
    for column in [c for c in frame.columns if c.startswith("delta_")]:
        counts = frame[column].value_counts().sort_index()
        fig.add_trace(go.Bar(name=column[len("delta_"):], x=counts.index.astype(str), y=counts.values))
    fig.update_layout(title=title, barmode="group", xaxis_title="G' minus G", yaxis_title="splittings")
    return fig


# Records and sweep output

def records_frame(rows):
    return pd.DataFrame(list(rows))


def write_records(rows, path, output_format="json"):
    """
    Write comparison rows to ``path``: JSON-lines, CSV, a text table, or a
    one-sheet workbook.
    """
    if output_format not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {output_format!r}")
    frame = records_frame(rows)
    if output_format == "json":
        text = frame.to_json(orient="records", lines=True) if not frame.empty else ""
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
            if text and not text.endswith("\n"):
                handle.write("\n")
    elif output_format == "csv":
        frame.to_csv(path, index=False)
    elif output_format == "text":
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(frame.to_string(index=False) if not frame.empty else "(no records)")
            handle.write("\n")
    else:
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            frame.to_excel(writer, sheet_name="Records", index=False)
    logger.info("Wrote %d records to %s", len(frame), path)
    return path


def witnesses_jsonl(witnesses):
    return "".join(json.dumps(witness, sort_keys=True) + "\n" for witness in witnesses)


def sweep_workbook(result):
    """Records, Witnesses and Manifest sheets as xlsx bytes."""
    buffer = io.BytesIO()
    with pd.ExcelWriter(buffer, engine="openpyxl") as writer:
        records_frame(result.rows).to_excel(writer, sheet_name="Records", index=False)
        witness_rows = [
            {"graph": w["graph"], "violated": ",".join(w["violated"]), "splitting": json.dumps(w["splitting"])}
            for w in result.witnesses
        ]
        pd.DataFrame(witness_rows, columns=["graph", "violated", "splitting"]).to_excel(
            writer, sheet_name="Witnesses", index=False
        )
        manifest_rows = [{"key": key, "value": json.dumps(value, sort_keys=True)} for key, value in result.manifest.items()]
        pd.DataFrame(manifest_rows).to_excel(writer, sheet_name="Manifest", index=False)
    return buffer.getvalue()


def write_sweep(result, output_dir, output_format="json"):
    """
    Persist a sweep: the records in the chosen format, ``witnesses.jsonl`` and
    ``manifest.json`` (always), all inside ``output_dir``.

    Returns:
        Dict of written file paths
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = {
        "records": os.path.join(output_dir, RECORD_FILES[output_format]),
        "witnesses": os.path.join(output_dir, "witnesses.jsonl"),
        "manifest": os.path.join(output_dir, "manifest.json"),
    }
    if output_format == "xlsx":
        with open(paths["records"], "wb") as handle:
            handle.write(sweep_workbook(result))
    else:
        write_records(result.rows, paths["records"], output_format)
    with open(paths["witnesses"], "w", encoding="utf-8") as handle:
        handle.write(witnesses_jsonl(result.witnesses))
    with open(paths["manifest"], "w", encoding="utf-8") as handle:
        json.dump(result.manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return paths


def read_witnesses(path):
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
