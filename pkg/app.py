import streamlit as st
import pandas as pd
import plotly.express as px
from datetime import datetime
import io
import json

# Import custom modules
from engines.betti_engine import edge_ideal_betti, report_from_table
from engines.homology import parse_field
from utils import export, graph_core, ideal_core, splitting
from utils.config import Caps
from utils.errors import CapExceededError, SplitLabError
from utils.sweep import check_graph

# Named graphs offered in the sidebar; edge-list text is the fallback
NAMED_GRAPHS = {
    "Path P_n": lambda n: graph_core.path_graph(n),
    "Cycle C_n": lambda n: graph_core.cycle_graph(max(n, 3)),
    "Star K_{1,n-1}": lambda n: graph_core.star_graph(max(n - 1, 1)),
    "Complete K_n": lambda n: graph_core.complete_graph(n),
    "Broom (vertex 1 on 2..7, vertex 7 on 8, 9)": lambda n: graph_core.make_graph(
        9, [(1, k) for k in range(2, 8)] + [(7, 8), (7, 9)]
    ),
}

FIELD_OPTIONS = {"GF(2)": "gf2", "Rationals": "q", "GF(3)": "gfp:3", "GF(5)": "gfp:5"}

# Set page configuration
st.set_page_config(
    page_title="Splitting Graph Explorer",
    page_icon="🕸️",
    layout="wide",
    initial_sidebar_state="expanded"
)

# Define the session state variables if they don't exist
if 'graph' not in st.session_state:
    st.session_state.graph = graph_core.path_graph(3)
if 'check' not in st.session_state:
    st.session_state.check = None
if 'cg' not in st.session_state:
    st.session_state.cg = None

# Sidebar for the graph and the field
with st.sidebar:
    st.title("Graph")

    source = st.radio("Input", ["Named graph", "Edge list"], horizontal=True)
    if source == "Named graph":
        family = st.selectbox("Family", list(NAMED_GRAPHS))
        size = st.number_input("n", min_value=2, max_value=12, value=4)
        st.session_state.graph = NAMED_GRAPHS[family](int(size))
    else:
        text = st.text_area("Edge list (header 'n m', then one edge per line)", "3 2\n1 2\n2 3\n")
        try:
            st.session_state.graph = graph_core.parse_edge_list(text)
        except SplitLabError as e:
            st.error(f"Could not read the edge list: {e}")

    field_name = st.selectbox("Coefficient field", list(FIELD_OPTIONS))
    field_spec = parse_field(FIELD_OPTIONS[field_name])

    st.divider()

    st.subheader("Size guards")
    cap_n = st.number_input("Largest ring for Betti tables", min_value=2, max_value=20, value=16)
    cap_edges = st.number_input("Largest edge count for splittings", min_value=1, max_value=9, value=7)
    caps = Caps(max_betti_vertices=int(cap_n), max_split_edges=int(cap_edges))

    st.divider()

    st.subheader("About")
    st.markdown("""
    Edge ideals of a graph and of its splitting graphs: Betti tables,
    projective dimension, regularity, depth, stretched ideals and the
    σ-stable graphs.
    """)

graph = st.session_state.graph
st.caption(str(graph))

tab1, tab2, tab3, tab4, tab5, tab6 = st.tabs(
    ["Invariants", "Betti Tables", "Splittings", "Stretching", "C(G)", "Export"]
)

# Tab 1: Invariants
with tab1:
    st.header("Invariants of S/I(G)")
    try:
        table = edge_ideal_betti(graph, field_spec, caps)
        report = report_from_table(graph, table)
        flags = graph_core.classify(graph, caps)

        col1, col2, col3, col4 = st.columns(4)
        col1.metric("pd(S/I)", report.pd_quotient)
        col2.metric("reg(I)", report.reg_ideal)
        col3.metric("depth", report.depth)
        col4.metric("dim", report.dim)

        col1, col2 = st.columns(2)
        with col1:
            st.subheader("Combinatorics")
            st.dataframe(pd.DataFrame([{
                "bight": report.bight,
                "induced matching ν": report.nu,
                "vertices": graph.n,
                "edges": graph.m,
            }]), hide_index=True)
        with col2:
            st.subheader("Graph classes")
            st.dataframe(
                pd.DataFrame([{"class": k, "holds": "not computed" if v is None else v} for k, v in flags.as_dict().items()]),
                hide_index=True,
            )
    except CapExceededError as e:
        st.warning(f"Refused: {e}. Raise the guard in the sidebar to compute it.")

# Tab 2: Betti tables
with tab2:
    st.header("Graded Betti numbers")
    convention = st.radio("Module", ["S/I(G)", "I(G)"], horizontal=True)
    try:
        table = edge_ideal_betti(graph, field_spec, caps)
        if convention == "I(G)":
            table = table.to_convention("of_ideal")
        st.plotly_chart(export.betti_heatmap(table, f"Betti diagram of {convention} over {field_spec}"),
                        use_container_width=True)
        col1, col2 = st.columns(2)
        with col1:
            st.subheader("Diagram (rows j - i)")
            st.dataframe(export.betti_diagram_frame(table))
        with col2:
            st.subheader("By total degree")
            st.dataframe(export.betti_degree_frame(table), hide_index=True)
        st.info(f"Total Betti numbers: {table.totals()}; linear resolution: {table.is_linear_resolution()}")
    except CapExceededError as e:
        st.warning(f"Refused: {e}")

# Tab 3: Splittings
with tab3:
    st.header("Splitting graphs")
    splitting_filter = st.selectbox("Splittings", ["all", "special", "special1", "special2", "sigma"])

    if st.button("Compare G with its splittings"):
        with st.spinner("Enumerating splittings and computing Betti tables..."):
            try:
                st.session_state.check = check_graph(graph, splitting_filter, field_spec, caps)
            except (CapExceededError, SplitLabError) as e:
                st.session_state.check = None
                st.error(str(e))

    check = st.session_state.check
    if check is None:
        st.info("Run the comparison to list the splittings.")
    elif check.graph != graph:
        st.info("The graph changed since the last comparison; run it again.")
    else:
        rows = [record.to_row() for record in check.records]
        frame = export.records_frame(rows)
        col1, col2, col3 = st.columns(3)
        col1.metric("Splittings", check.splitting_count)
        col2.metric("Witnesses", len(check.witnesses))
        col3.metric("Special", int((frame["special1"] | frame["special2"]).sum()) if not frame.empty else 0)

        summary = pd.DataFrame([
            {"inequality": tag, "holds": check.passed[tag], "fails": check.failed[tag]} for tag in check.passed
        ])
        st.dataframe(summary, hide_index=True)
        st.plotly_chart(export.delta_chart(rows), use_container_width=True)
        st.dataframe(frame, hide_index=True)

        if check.witnesses:
            st.subheader("Witnesses")
            choice = st.selectbox(
                "Witness",
                range(len(check.witnesses)),
                format_func=lambda k: f"#{k + 1}: violates {', '.join(check.witnesses[k].violated)}",
            )
            witness = check.witnesses[choice]
            st.dataframe(export.comparison_frame(witness.record), hide_index=True)
            st.code(json.dumps(witness.to_json(), indent=2), language="json")

# Tab 4: Stretching
with tab4:
    st.header("Stretching σ^t")
    t = st.number_input("t", min_value=1, max_value=20, value=1)

    col1, col2 = st.columns(2)
    with col1:
        st.subheader("Any monomial ideal")
        ideal_text = st.text_input("Generators", "x1*x3*x5, x1^2*x4^3*x7")
        ambient = st.radio("Ring", ideal_core.AMBIENT_CONVENTIONS, horizontal=True)
        try:
            ideal = ideal_core.parse_ideal(ideal_text)
            stretched = ideal_core.stretch_ideal(ideal, int(t), ambient)
            st.code(f"{stretched}\nin K[x1..x{stretched.ambient_n}]")
        except SplitLabError as e:
            st.error(str(e))
    with col2:
        st.subheader("I(G)")
        if graph.isolated_vertices:
            st.warning("G has isolated vertices; I(G) does not see them.")
        else:
            try:
                stretched_map = splitting.sigma_graph(graph, int(t))
                st.code(f"{ideal_core.edge_ideal(stretched_map.source)}\n{stretched_map.source}")
                stable, t0 = splitting.sigma_stable(graph, caps)
                components = len(graph_core.connected_components(stable.source))
                st.success(f"σ-stable from t0 = {t0}: G* has {components} component(s)")
            except SplitLabError as e:
                st.warning(str(e))

# Tab 5: C(G)
with tab5:
    st.header("C(G) over all labelings")
    if st.button("Enumerate labelings"):
        with st.spinner("Running over all n! labelings..."):
            try:
                st.session_state.cg = (graph, splitting.cg_set(graph, caps))
            except SplitLabError as e:
                st.session_state.cg = None
                st.error(str(e))
    if st.session_state.cg is not None and st.session_state.cg[0] == graph:
        achieved = st.session_state.cg[1]
        st.metric("C(G)", "{" + ", ".join(str(k) for k in achieved) + "}")
        frame = pd.DataFrame([{"γ": k, "labeling": str(list(v.perm))} for k, v in achieved.items()])
        st.dataframe(frame, hide_index=True)
        fig = px.bar(frame, x="γ", y=[1] * len(frame), labels={"y": "achieved"}, title="Achieved component counts")
        st.plotly_chart(fig, use_container_width=True)

# Tab 6: Export
with tab6:
    st.header("Export Results")
    check = st.session_state.check
    current_date = datetime.now().strftime("%Y%m%d")

    invariants_frame = pd.DataFrame()
    try:
        invariants_frame = pd.DataFrame([report_from_table(graph, edge_ideal_betti(graph, field_spec, caps)).as_dict()])
    except CapExceededError as e:
        st.warning(f"Refused: {e}")

    col1, col2 = st.columns(2)
    with col1:
        invariants_csv = io.StringIO()
        invariants_frame.to_csv(invariants_csv, index=False)
        st.download_button(
            label="Download Invariants (CSV)",
            data=invariants_csv.getvalue(),
            file_name=f"invariants_{field_spec.label.replace(':', '')}_{current_date}.csv",
            mime="text/csv"
        )
    with col2:
        st.download_button(
            label="Download Graph (JSON)",
            data=json.dumps(graph_core.graph_to_json(graph)),
            file_name=f"graph_{current_date}.json",
            mime="application/json"
        )

    if check is None or check.graph != graph:
        st.info("Run the comparison in the Splittings tab to export records and witnesses.")
    else:
        records_df = export.records_frame([record.to_row() for record in check.records])
        witnesses_text = export.witnesses_jsonl([w.to_json() for w in check.witnesses])

        col1, col2 = st.columns(2)
        with col1:
            st.download_button(
                label="Download Comparison Records (CSV)",
                data=records_df.to_csv(index=False),
                file_name=f"records_{current_date}.csv",
                mime="text/csv"
            )
        with col2:
            st.download_button(
                label="Download Witnesses (JSON-lines)",
                data=witnesses_text,
                file_name=f"witnesses_{current_date}.jsonl",
                mime="application/json"
            )

        # Create Excel export with multiple sheets
        excel_buffer = io.BytesIO()
        with pd.ExcelWriter(excel_buffer, engine="openpyxl") as writer:
            records_df.to_excel(writer, sheet_name="Records", index=False)
            pd.DataFrame([
                {"violated": ",".join(w.violated), "splitting": json.dumps(w.to_json()["splitting"])}
                for w in check.witnesses
            ], columns=["violated", "splitting"]).to_excel(writer, sheet_name="Witnesses", index=False)
            invariants_frame.to_excel(writer, sheet_name="Invariants", index=False)

        st.download_button(
            label="Download Complete Report (Excel)",
            data=excel_buffer.getvalue(),
            file_name=f"splitting_report_{current_date}.xlsx",
            mime="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"
        )
