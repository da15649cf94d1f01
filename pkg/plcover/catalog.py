"""Small named complexes used throughout the test suite and the CLI."""

from typing import Callable, Dict

from plcover.complex_core import Complex2


def point() -> Complex2:
    return Complex2.from_maximal_faces([("a",)])


def edge() -> Complex2:
    return Complex2.from_maximal_faces([("a", "b")])


def triangle() -> Complex2:
    return Complex2.from_maximal_faces([("a", "b", "c")])


def tetrahedron_boundary() -> Complex2:
    """The 2-sphere as the boundary of a tetrahedron."""
    return Complex2.from_maximal_faces([("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")])


def vertex_wedge() -> Complex2:
    """Two triangles meeting in a single vertex: collapsible, not shellable."""
    return Complex2.from_maximal_faces([("a", "b", "c"), ("c", "d", "e")])


def edge_pair() -> Complex2:
    """Two triangles sharing an edge."""
    return Complex2.from_maximal_faces([("a", "b", "c"), ("b", "c", "d")])


def dangling_edge() -> Complex2:
    return Complex2.from_maximal_faces([("a", "b", "c"), ("c", "d")])


def dunce_hat() -> Complex2:
    """An 8-vertex, 17-triangle dunce hat.

    Contractible, but every edge lies in two or three triangles, so there is no
    free face. The loop 1-2-3 carries the three edges of degree three.
    """
    return Complex2.from_maximal_faces(
        [
            ("1", "2", "4"), ("1", "2", "7"), ("1", "2", "8"), ("1", "3", "4"),
            ("1", "3", "5"), ("1", "3", "6"), ("1", "5", "6"), ("1", "7", "8"),
            ("2", "3", "5"), ("2", "3", "7"), ("2", "3", "8"), ("2", "4", "5"),
            ("3", "4", "8"), ("3", "6", "7"), ("4", "5", "6"), ("4", "6", "8"),
            ("6", "7", "8"),
        ]
    )


def cycle_graph(n: int = 4) -> Complex2:
    labels = [f"c{i}" for i in range(n)]
    return Complex2.from_maximal_faces([(labels[i], labels[(i + 1) % n]) for i in range(n)])


def annulus() -> Complex2:
    """A 6-triangle annulus with boundary circles x0x1x2 and y0y1y2."""
    faces = []
    for j in range(3):
        k = (j + 1) % 3
        faces.append((f"x{j}", f"x{k}", f"y{k}"))
        faces.append((f"x{j}", f"y{j}", f"y{k}"))
    return Complex2.from_maximal_faces(faces)


CATALOG: Dict[str, Callable[[], Complex2]] = {
    "point": point,
    "edge": edge,
    "triangle": triangle,
    "tetrahedron_boundary": tetrahedron_boundary,
    "vertex_wedge": vertex_wedge,
    "edge_pair": edge_pair,
    "dangling_edge": dangling_edge,
    "dunce_hat": dunce_hat,
    "cycle_graph": cycle_graph,
    "annulus": annulus,
}
