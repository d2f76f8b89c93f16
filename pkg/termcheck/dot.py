"""
Graphviz export of call graphs.
"""

import logging
from collections import Counter

from graphviz import Digraph

from checker import CallGraph
from extract import FunctionInfo

_LOG = logging.getLogger(__name__)


def _node_names(vertices: list[FunctionInfo]) -> dict[int, str]:
    # let-nested functions may reuse a name; those get their id appended
    counts = Counter(v.display_name for v in vertices)
    return {v.id: v.display_name if counts[v.display_name] == 1 else f"{v.display_name}#{v.id}" for v in vertices}


def build_digraph(graph: CallGraph) -> Digraph:
    """
    Build a graphviz digraph with one node per function and one edge per call.

    Edges carry the call matrix, e.g. ``[<?][?=]``.
    """
    dot = Digraph(name="calls")
    vertices = graph.vertices
    names = _node_names(vertices)
    order = {v.id: v.declaration_order for v in vertices}
    for vertex in vertices:
        dot.node(names[vertex.id])
    edges = sorted(graph.edges, key=lambda c: (order[c.caller], order[c.callee], c.matrix.render()))
    for call in edges:
        dot.edge(names[call.caller], names[call.callee], label=call.matrix.render())
    _LOG.debug("DOT graph with %d node(s) and %d edge(s)", len(vertices), len(edges))
    return dot


def export_dot(graph: CallGraph) -> str:
    """Render a call graph as DOT source text."""
    return build_digraph(graph).source
