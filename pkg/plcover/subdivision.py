"""Subdivisions of 2-complexes with carrier tracking.

Every subdivision is returned as a SubdivisionMap: the child complex, the
parent complex and, for each child simplex, its carrier (the smallest parent
simplex containing it). The carrier is what turns a subcomplex L of the parent
into the corresponding subcomplex of the child.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, TypedDict

import numpy as np

from plcover.complex_core import Complex2, Face, SimplexRef, SubcomplexMask
from plcover.errors import InvalidTriangle, LabelCollision, MapMismatch

logger = logging.getLogger(__name__)


class SubdivisionData(TypedDict):
    child: List[List[str]]
    parent: List[List[str]]
    carrier: List[List[List[str]]]


@dataclass(frozen=True)
class SubdivisionMap:
    """A subdivision `child` of `parent` with the carrier of every child simplex."""

    child: Complex2
    parent: Complex2
    carrier: Dict[SimplexRef, SimplexRef]

    def carrier_of(self, ref: SimplexRef) -> SimplexRef:
        return self.carrier[ref]

    def is_consistent(self) -> bool:
        """Carriers are face-monotone and every parent simplex carries something."""
        for ref in self.child.simplices():
            top = self.carrier.get(ref)
            if top is None:
                return False
            top_vertices = set(self.parent.vertex_ids(top))
            for face in self.child.faces(ref):
                if not set(self.parent.vertex_ids(self.carrier[face])) <= top_vertices:
                    return False
        return set(self.carrier.values()) == set(self.parent.simplices())

    def to_json(self) -> SubdivisionData:
        pairs = sorted(
            [list(self.child.labels(ref)), list(self.parent.labels(parent))]
            for ref, parent in self.carrier.items()
        )
        return {
            "child": [list(face) for face in self.child.maximal_faces()],
            "parent": [list(face) for face in self.parent.maximal_faces()],
            "carrier": pairs,
        }


def identity_subdivision(K: Complex2) -> SubdivisionMap:
    return SubdivisionMap(K, K, {ref: ref for ref in K.simplices()})


def _carriers_from_vertices(child: Complex2, origin: Dict[str, SimplexRef]) -> Dict[SimplexRef, SimplexRef]:
    # child vertices sit on a chain of parent simplices; the carrier is its top
    carrier = {}
    for ref in child.simplices():
        carrier[ref] = max((origin[child.vertices[v]] for v in child.vertex_ids(ref)), key=lambda r: r[0])
    return carrier


def barycenter_label(labels: Face) -> str:
    return "<" + ",".join(sorted(labels)) + ">"


def barycentric(K: Complex2) -> SubdivisionMap:
    """The barycentric subdivision.

    Vertices keep their labels; the barycenter of an edge or triangle with
    labels a, b(, c) is labelled "<a,b(,c)>". Child simplices are the flags
    v < e < t of parent simplices.

    Raises:
        LabelCollision: If a barycenter label is already a vertex label of K.
    """
    def label_of(ref: SimplexRef) -> str:
        return K.vertices[ref[1]] if ref[0] == 0 else barycenter_label(K.labels(ref))

    origin = {label_of(ref): ref for ref in K.simplices()}
    clashes = [label for label, ref in origin.items() if ref[0] > 0 and K.has_label(label)]
    if clashes:
        raise LabelCollision(clashes)

    faces: List[Tuple[str, ...]] = []
    for t in range(K.num_triangles):
        top = label_of((2, t))
        for e in K.triangle_edges(t):
            middle = label_of((1, e))
            for v in K.edges[e]:
                faces.append((label_of((0, v)), middle, top))
    for e in range(K.num_edges):
        if not K.edge_triangles(e):
            middle = label_of((1, e))
            for v in K.edges[e]:
                faces.append((label_of((0, v)), middle))
    for v in range(K.num_vertices):
        if not K.vertex_edges(v):
            faces.append((K.vertices[v],))
    child = Complex2.from_maximal_faces(faces)
    logger.debug(f"Barycentric subdivision: {K.num_triangles} -> {child.num_triangles} triangles")
    return SubdivisionMap(child, K, _carriers_from_vertices(child, origin))


def corner_label(corner: str, triangle: Face) -> str:
    return f"{corner}'[{','.join(triangle)}]"


def seven_part(K: Complex2, tau: int) -> Tuple[SubdivisionMap, int]:
    """Subdivides one triangle abc into a middle triangle a'b'c' and a ring of six.

    The ring triangles are {a,b,a'}, {b,a',b'}, {b,c,b'}, {c,b',c'}, {c,a,c'},
    {a,c',a'}; the edges ab, bc and ca are not subdivided and the rest of K is
    untouched. The corner a' is labelled "a'[a,b,c]".

    Args:
        K (Complex2): The complex.
        tau (int): Id of the triangle to subdivide.

    Returns:
        Tuple[SubdivisionMap, int]: The subdivision and the id of the middle triangle in the child.

    Raises:
        InvalidTriangle: If tau is not a triangle id of K.
        LabelCollision: If a corner label is already in use.
    """
    if not isinstance(tau, (int, np.integer)) or not 0 <= tau < K.num_triangles:
        raise InvalidTriangle(tau)
    a, b, c = K.labels((2, int(tau)))
    triangle = (a, b, c)
    a1, b1, c1 = (corner_label(x, triangle) for x in triangle)
    clashes = [label for label in (a1, b1, c1) if K.has_label(label)]
    if clashes:
        raise LabelCollision(clashes)
    removed = tuple(sorted(triangle))
    faces = [face for face in K.maximal_faces() if face != removed]
    faces += [
        (a1, b1, c1),
        (a, b, a1),
        (b, a1, b1),
        (b, c, b1),
        (c, b1, c1),
        (c, a, c1),
        (a, c1, a1),
    ]
    child = Complex2.from_maximal_faces(faces)
    carrier: Dict[SimplexRef, SimplexRef] = {}
    new_labels = {a1, b1, c1}
    for ref in child.simplices():
        labels = child.labels(ref)
        if new_labels.isdisjoint(labels):
            carrier[ref] = K.find(labels)
        else:
            carrier[ref] = (2, int(tau))
    middle = child.find((a1, b1, c1))
    return SubdivisionMap(child, K, carrier), middle[1]


def corresponding_subcomplex(m: SubdivisionMap, L: SubcomplexMask) -> SubcomplexMask:
    """The child simplices whose carrier lies in L."""
    L.validate(m.parent)
    refs = [ref for ref, parent in m.carrier.items() if L.contains(parent)]
    mask = SubcomplexMask.empty(m.child)
    for dim, sid in refs:
        mask.array(dim)[sid] = True
    return mask


def compose(m1: SubdivisionMap, m2: SubdivisionMap) -> SubdivisionMap:
    """Chains parent <- m1.child = m2.parent <- m2.child into one map.

    Raises:
        MapMismatch: If m2 does not subdivide the child of m1.
    """
    if m2.parent != m1.child:
        raise MapMismatch()
    same_tables = m2.parent is m1.child or (
        m2.parent.vertices == m1.child.vertices
        and m2.parent.edges == m1.child.edges
        and m2.parent.triangles == m1.child.triangles
    )

    def translate(ref: SimplexRef) -> Optional[SimplexRef]:
        if same_tables:
            return ref
        return m1.child.find(m2.parent.labels(ref))

    carrier = {ref: m1.carrier[translate(middle)] for ref, middle in m2.carrier.items()}
    return SubdivisionMap(m2.child, m1.parent, carrier)
