"""Abstract simplicial complexes of dimension at most two.

A Complex2 is immutable. Vertices carry string labels; internally every simplex
is addressed by a dense integer id into its table (vertex, edge or triangle
table). A simplex reference is the pair (dimension, id).

Subcomplexes are boolean masks over the three tables (SubcomplexMask), so all
set operations in the search modules are numpy array operations.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from plcover.errors import DuplicateLabelInFace, EmptyComplex, InvalidSubcomplex, LabelCollision

logger = logging.getLogger(__name__)

VertexId = int
EdgeId = int
TriangleId = int
SimplexRef = Tuple[int, int]
Face = Tuple[str, ...]


class Complex2:
    """A downward-closed simplicial complex with vertices, edges and triangles.

    Build instances with Complex2.from_maximal_faces; the constructor expects
    already-closed, sorted tables.
    """

    __slots__ = (
        "_vertices",
        "_edges",
        "_triangles",
        "_vertex_index",
        "_edge_index",
        "_triangle_index",
        "_vertex_edges",
        "_edge_triangles",
        "_triangle_edges",
        "_key",
    )

    def __init__(
        self,
        vertices: Sequence[str],
        edges: Sequence[Tuple[int, int]],
        triangles: Sequence[Tuple[int, int, int]],
    ):
        self._vertices = tuple(vertices)
        self._edges = tuple(tuple(e) for e in edges)
        self._triangles = tuple(tuple(t) for t in triangles)
        self._vertex_index = {label: i for i, label in enumerate(self._vertices)}
        self._edge_index = {e: i for i, e in enumerate(self._edges)}
        self._triangle_index = {t: i for i, t in enumerate(self._triangles)}
        if len(self._vertex_index) != len(self._vertices):
            raise InvalidSubcomplex("vertex labels are not unique")
        if len(self._edge_index) != len(self._edges) or len(self._triangle_index) != len(self._triangles):
            raise InvalidSubcomplex("duplicate simplices")

        vertex_edges: List[List[int]] = [[] for _ in self._vertices]
        for eid, (u, v) in enumerate(self._edges):
            if not 0 <= u < v < len(self._vertices):
                raise InvalidSubcomplex(f"edge {eid} is not a sorted pair of known vertices")
            vertex_edges[u].append(eid)
            vertex_edges[v].append(eid)

        edge_triangles: List[List[int]] = [[] for _ in self._edges]
        triangle_edges = []
        for tid, (a, b, c) in enumerate(self._triangles):
            if not a < b < c:
                raise InvalidSubcomplex(f"triangle {tid} is not strictly sorted")
            ids = []
            for pair in ((a, b), (a, c), (b, c)):
                eid = self._edge_index.get(pair)
                if eid is None:
                    raise InvalidSubcomplex(f"triangle {tid} misses edge {pair}")
                edge_triangles[eid].append(tid)
                ids.append(eid)
            triangle_edges.append(tuple(ids))

        self._vertex_edges = tuple(tuple(x) for x in vertex_edges)
        self._edge_triangles = tuple(tuple(x) for x in edge_triangles)
        self._triangle_edges = tuple(triangle_edges)
        self._key = None

    # construction

    @classmethod
    def from_maximal_faces(cls, faces: Iterable[Sequence[str]]) -> "Complex2":
        """Returns the downward closure of the given faces.

        Args:
            faces: Vertex-label tuples of size 1 to 3.

        Returns:
            Complex2: The closure; vertex ids follow first appearance in the listing.

        Raises:
            DuplicateLabelInFace: If a face repeats a label.
        """
        labels: List[str] = []
        index: Dict[str, int] = {}
        edges = set()
        triangles = set()
        for face in faces:
            face = tuple(str(x) for x in face)
            if not 1 <= len(face) <= 3:
                raise ValueError(f"face {face!r} must have 1 to 3 vertices")
            if len(set(face)) != len(face):
                raise DuplicateLabelInFace(face)
            ids = []
            for label in face:
                if label not in index:
                    index[label] = len(labels)
                    labels.append(label)
                ids.append(index[label])
            ids.sort()
            if len(ids) == 3:
                triangles.add(tuple(ids))
                edges.update({(ids[0], ids[1]), (ids[0], ids[2]), (ids[1], ids[2])})
            elif len(ids) == 2:
                edges.add(tuple(ids))
        return cls(labels, sorted(edges), sorted(triangles))

    # tables

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return self._edges

    @property
    def triangles(self) -> Tuple[Tuple[int, int, int], ...]:
        return self._triangles

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def num_triangles(self) -> int:
        return len(self._triangles)

    def size(self, dim: int) -> int:
        return (self.num_vertices, self.num_edges, self.num_triangles)[dim]

    @property
    def dimension(self) -> int:
        if self._triangles:
            return 2
        if self._edges:
            return 1
        return 0 if self._vertices else -1

    def is_empty(self) -> bool:
        return not self._vertices

    # incidence

    def vertex_edges(self, v: VertexId) -> Tuple[EdgeId, ...]:
        return self._vertex_edges[v]

    def edge_triangles(self, e: EdgeId) -> Tuple[TriangleId, ...]:
        return self._edge_triangles[e]

    def triangle_edges(self, t: TriangleId) -> Tuple[EdgeId, EdgeId, EdgeId]:
        return self._triangle_edges[t]

    def vertex_triangles(self, v: VertexId) -> Tuple[TriangleId, ...]:
        found = set()
        for e in self._vertex_edges[v]:
            found.update(self._edge_triangles[e])
        return tuple(sorted(found))

    def neighbors(self, v: VertexId) -> Tuple[VertexId, ...]:
        return tuple(sorted(self.other_end(e, v) for e in self._vertex_edges[v]))

    def other_end(self, e: EdgeId, v: VertexId) -> VertexId:
        a, b = self._edges[e]
        return b if a == v else a

    def faces(self, ref: SimplexRef) -> List[SimplexRef]:
        """Codimension-one faces of a simplex."""
        dim, sid = ref
        if dim == 2:
            return [(1, e) for e in self._triangle_edges[sid]]
        if dim == 1:
            return [(0, v) for v in self._edges[sid]]
        return []

    def cofaces(self, ref: SimplexRef) -> List[SimplexRef]:
        """Codimension-one cofaces of a simplex."""
        dim, sid = ref
        if dim == 0:
            return [(1, e) for e in self._vertex_edges[sid]]
        if dim == 1:
            return [(2, t) for t in self._edge_triangles[sid]]
        return []

    # lookup by labels

    def vertex_id(self, label: str) -> VertexId:
        return self._vertex_index[label]

    def has_label(self, label: str) -> bool:
        return label in self._vertex_index

    def find(self, labels: Sequence[str]) -> Optional[SimplexRef]:
        """Returns the simplex spanned by the labels, or None."""
        try:
            ids = tuple(sorted(self._vertex_index[x] for x in labels))
        except KeyError:
            return None
        if len(ids) == 1:
            return (0, ids[0])
        if len(ids) == 2:
            eid = self._edge_index.get(ids)
            return None if eid is None else (1, eid)
        if len(ids) == 3:
            tid = self._triangle_index.get(ids)
            return None if tid is None else (2, tid)
        return None

    def edge_id(self, u: VertexId, v: VertexId) -> Optional[EdgeId]:
        return self._edge_index.get((min(u, v), max(u, v)))

    def triangle_id(self, ids: Sequence[VertexId]) -> Optional[TriangleId]:
        return self._triangle_index.get(tuple(sorted(ids)))

    def vertex_ids(self, ref: SimplexRef) -> Tuple[int, ...]:
        dim, sid = ref
        if dim == 0:
            return (sid,)
        if dim == 1:
            return self._edges[sid]
        return self._triangles[sid]

    def labels(self, ref: SimplexRef) -> Face:
        return tuple(self._vertices[v] for v in self.vertex_ids(ref))

    def simplices(self) -> Iterator[SimplexRef]:
        for dim in (0, 1, 2):
            for sid in range(self.size(dim)):
                yield (dim, sid)

    # canonical form

    def maximal_faces(self) -> List[Face]:
        """Maximal faces as label tuples, labels sorted inside each face and faces sorted."""
        return maximal_faces(self, SubcomplexMask.full(self))

    def key(self) -> Tuple[frozenset, frozenset, frozenset]:
        if self._key is None:
            self._key = (
                frozenset(self._vertices),
                frozenset(frozenset(self.labels((1, e))) for e in range(self.num_edges)),
                frozenset(frozenset(self.labels((2, t))) for t in range(self.num_triangles)),
            )
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex2):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Complex2(V={self.num_vertices}, E={self.num_edges}, F={self.num_triangles})"

    def to_text(self) -> str:
        kinds = {1: "v", 2: "e", 3: "t"}
        return "".join(f"{kinds[len(face)]} {' '.join(face)}\n" for face in self.maximal_faces())

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def check_consistency(self) -> bool:
        """Rebuilds the complex from its tables and compares incidence maps."""
        rebuilt = Complex2(self._vertices, self._edges, self._triangles)
        return (
            rebuilt._vertex_edges == self._vertex_edges
            and rebuilt._edge_triangles == self._edge_triangles
            and rebuilt._triangle_edges == self._triangle_edges
        )

    def subcomplex(self, mask: "SubcomplexMask") -> "Complex2":
        """A standalone complex with the masked simplices (labels preserved)."""
        return Complex2.from_maximal_faces(maximal_faces(self, mask))


def from_maximal_faces(faces: Iterable[Sequence[str]]) -> Complex2:
    return Complex2.from_maximal_faces(faces)


@dataclass(frozen=True, eq=False)
class SubcomplexMask:
    """Three boolean vectors selecting vertices, edges and triangles of a parent complex."""

    vertices: np.ndarray
    edges: np.ndarray
    triangles: np.ndarray

    @classmethod
    def full(cls, K: Complex2) -> "SubcomplexMask":
        return cls(
            np.ones(K.num_vertices, dtype=bool),
            np.ones(K.num_edges, dtype=bool),
            np.ones(K.num_triangles, dtype=bool),
        )

    @classmethod
    def empty(cls, K: Complex2) -> "SubcomplexMask":
        return cls(
            np.zeros(K.num_vertices, dtype=bool),
            np.zeros(K.num_edges, dtype=bool),
            np.zeros(K.num_triangles, dtype=bool),
        )

    @classmethod
    def closure_of(
        cls,
        K: Complex2,
        vertices: Iterable[int] = (),
        edges: Iterable[int] = (),
        triangles: Iterable[int] = (),
    ) -> "SubcomplexMask":
        """Smallest subcomplex containing the given simplex ids."""
        v = np.zeros(K.num_vertices, dtype=bool)
        e = np.zeros(K.num_edges, dtype=bool)
        t = np.zeros(K.num_triangles, dtype=bool)
        for tid in triangles:
            t[tid] = True
            e[list(K.triangle_edges(tid))] = True
        for eid in edges:
            e[eid] = True
        for eid in np.flatnonzero(e):
            v[list(K.edges[eid])] = True
        for vid in vertices:
            v[vid] = True
        return cls(v, e, t)

    @classmethod
    def from_refs(cls, K: Complex2, refs: Iterable[SimplexRef]) -> "SubcomplexMask":
        groups: Tuple[List[int], List[int], List[int]] = ([], [], [])
        for dim, sid in refs:
            groups[dim].append(sid)
        return cls.closure_of(K, *groups)

    @classmethod
    def from_faces(cls, K: Complex2, faces: Iterable[Sequence[str]]) -> "SubcomplexMask":
        """Closure of faces given by labels; every face must exist in K."""
        refs = []
        for face in faces:
            ref = K.find(face)
            if ref is None:
                raise InvalidSubcomplex(f"face {tuple(face)!r} is not a simplex of the complex")
            refs.append(ref)
        return cls.from_refs(K, refs)

    def array(self, dim: int) -> np.ndarray:
        return (self.vertices, self.edges, self.triangles)[dim]

    def contains(self, ref: SimplexRef) -> bool:
        return bool(self.array(ref[0])[ref[1]])

    def __or__(self, other: "SubcomplexMask") -> "SubcomplexMask":
        return SubcomplexMask(self.vertices | other.vertices, self.edges | other.edges, self.triangles | other.triangles)

    def __and__(self, other: "SubcomplexMask") -> "SubcomplexMask":
        return SubcomplexMask(self.vertices & other.vertices, self.edges & other.edges, self.triangles & other.triangles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubcomplexMask):
            return NotImplemented
        return (
            np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.triangles, other.triangles)
        )

    __hash__ = None

    def issubset(self, other: "SubcomplexMask") -> bool:
        return not (
            np.any(self.vertices & ~other.vertices)
            or np.any(self.edges & ~other.edges)
            or np.any(self.triangles & ~other.triangles)
        )

    def without_triangles(self, triangles: Iterable[int]) -> "SubcomplexMask":
        """Removes open triangles; the result stays downward closed."""
        t = self.triangles.copy()
        t[list(triangles)] = False
        return SubcomplexMask(self.vertices.copy(), self.edges.copy(), t)

    def counts(self) -> Tuple[int, int, int]:
        return (int(self.vertices.sum()), int(self.edges.sum()), int(self.triangles.sum()))

    def count(self) -> int:
        return sum(self.counts())

    def is_empty(self) -> bool:
        return self.count() == 0

    def reduced_euler(self) -> int:
        v, e, t = self.counts()
        return -1 + v - e + t

    def simplices(self) -> List[SimplexRef]:
        return [(dim, int(sid)) for dim in (0, 1, 2) for sid in np.flatnonzero(self.array(dim))]

    def key(self) -> bytes:
        return np.packbits(np.concatenate([self.vertices, self.edges, self.triangles])).tobytes()

    def is_valid(self, K: Complex2) -> bool:
        if (len(self.vertices), len(self.edges), len(self.triangles)) != (K.num_vertices, K.num_edges, K.num_triangles):
            return False
        for tid in np.flatnonzero(self.triangles):
            if not self.edges[list(K.triangle_edges(tid))].all():
                return False
        for eid in np.flatnonzero(self.edges):
            if not self.vertices[list(K.edges[eid])].all():
                return False
        return True

    def validate(self, K: Complex2) -> "SubcomplexMask":
        if not self.is_valid(K):
            raise InvalidSubcomplex("mask is not a subcomplex of the given complex")
        return self


def maximal_faces(K: Complex2, mask: SubcomplexMask) -> List[Face]:
    """Maximal simplices of a masked subcomplex as sorted label tuples."""
    faces: List[Face] = []
    for tid in np.flatnonzero(mask.triangles):
        faces.append(tuple(sorted(K.labels((2, int(tid))))))
    for eid in np.flatnonzero(mask.edges):
        if not any(mask.triangles[t] for t in K.edge_triangles(int(eid))):
            faces.append(tuple(sorted(K.labels((1, int(eid))))))
    for vid in np.flatnonzero(mask.vertices):
        if not any(mask.edges[e] for e in K.vertex_edges(int(vid))):
            faces.append((K.vertices[int(vid)],))
    faces.sort(key=lambda face: (-len(face), face))
    return faces


def one_skeleton(K: Complex2, support: Optional[SubcomplexMask] = None) -> nx.Graph:
    """The vertices and edges of K (or of the masked subcomplex) as a graph on vertex ids."""
    graph = nx.Graph()
    if support is None:
        graph.add_nodes_from(range(K.num_vertices))
        graph.add_edges_from(K.edges)
    else:
        graph.add_nodes_from(int(v) for v in np.flatnonzero(support.vertices))
        graph.add_edges_from(K.edges[int(e)] for e in np.flatnonzero(support.edges))
    return graph


def components(K: Complex2, support: Optional[SubcomplexMask] = None) -> int:
    return nx.number_connected_components(one_skeleton(K, support))


def is_connected(K: Complex2, support: Optional[SubcomplexMask] = None) -> bool:
    graph = one_skeleton(K, support)
    if graph.number_of_nodes() == 0:
        raise EmptyComplex()
    return nx.is_connected(graph)


def link_graph(K: Complex2, v: VertexId) -> nx.Graph:
    """The link of a vertex as an abstract graph.

    Nodes are the neighbours of v; there is an arc {x, y} for every triangle
    {v, x, y}. Neighbours joined to v only by an edge stay isolated nodes.
    """
    if not 0 <= v < K.num_vertices:
        raise IndexError(f"vertex id {v} out of range")
    graph = nx.Graph()
    graph.add_nodes_from(K.neighbors(v))
    for tid in K.vertex_triangles(v):
        x, y = (w for w in K.triangles[tid] if w != v)
        graph.add_edge(x, y)
    return graph


def is_pure(K: Complex2) -> bool:
    """True iff all maximal faces have the same dimension."""
    if K.is_empty():
        raise EmptyComplex()
    dims = {len(face) for face in K.maximal_faces()}
    return len(dims) == 1


def reduced_euler(K: Complex2) -> int:
    """Reduced Euler characteristic -1 + V - E + F."""
    if K.is_empty():
        raise EmptyComplex()
    return -1 + K.num_vertices - K.num_edges + K.num_triangles


def dual_graph(K: Complex2, support: Optional[SubcomplexMask] = None) -> nx.Graph:
    """Graph on triangle ids with one arc per pair of triangles sharing an edge."""
    graph = nx.Graph()
    if support is None:
        alive = np.ones(K.num_triangles, dtype=bool)
        edges = range(K.num_edges)
    else:
        alive = support.triangles
        edges = (int(e) for e in np.flatnonzero(support.edges))
    graph.add_nodes_from(int(t) for t in np.flatnonzero(alive))
    for eid in edges:
        around = [t for t in K.edge_triangles(eid) if alive[t]]
        for i, s in enumerate(around):
            for t in around[i + 1:]:
                graph.add_edge(s, t)
    return graph


def vertex_star(K: Complex2, v: VertexId) -> SubcomplexMask:
    """Closed star of a vertex: the closure of every simplex containing v."""
    if not 0 <= v < K.num_vertices:
        raise IndexError(f"vertex id {v} out of range")
    return SubcomplexMask.closure_of(K, [v], K.vertex_edges(v), K.vertex_triangles(v))


def relabel(K: Complex2, mapping: Dict[str, str]) -> Complex2:
    """Copy of K with vertex labels renamed; labels missing from `mapping` are kept.

    Raises:
        LabelCollision: If two vertices end up with the same label.
    """
    renamed = [mapping.get(label, label) for label in K.vertices]
    if len(set(renamed)) != len(renamed):
        clashes = sorted({label for label in renamed if renamed.count(label) > 1})
        raise LabelCollision(clashes)
    return Complex2.from_maximal_faces(
        [tuple(mapping.get(label, label) for label in face) for face in K.maximal_faces()]
    )
