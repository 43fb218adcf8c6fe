from typing import Iterator

from subfactor.tower import PrincipalGraph


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r"\""))


def _vertex(parity: str, i: int) -> str:
    return _gvquote(f"{parity}{i}")


def graphviz(graph: PrincipalGraph, name: str = "principal_graph") -> Iterator[str]:
    """
    Graphviz lines for a principal graph. Even vertices are boxes, odd vertices are ellipses,
    edge labels show multiplicities above one.
    """
    yield f"graph {_gvquote(name)} {{\n"
    yield f"  label={_gvquote(f'depth {graph.depth}')};\n"
    for parity, vertices, shape in (("e", graph.even_vertices, "box"), ("o", graph.odd_vertices, "ellipse")):
        for i in vertices:
            label = f"χ{i} (deg {graph.degrees[i]})"
            yield f"  {_vertex(parity, i)} [shape={shape} label={_gvquote(label)}];\n"
    for edge in graph.edges:
        attrs = f" [label={_gvquote(str(edge.multiplicity))}]" if edge.multiplicity > 1 else ""
        yield f"  {_vertex('e', edge.even)} -- {_vertex('o', edge.odd)}{attrs};\n"
    yield "}\n"


def render(graph: PrincipalGraph, name: str = "principal_graph") -> str:
    return "".join(graphviz(graph, name))
