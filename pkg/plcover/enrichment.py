"""Torus blocks and enriched complexes.

enrich(K) glues one triangulated torus onto the boundary of every triangle of
K, identifying the torus' longitude with the triangle boundary. The torus is
the 3x3 grid torus: vertices v(i, j) with i, j taken mod 3, triangles
{v(i,j), v(i,j+1), v(i+1,j+1)} and {v(i,j), v(i+1,j), v(i+1,j+1)}. Row 0 is the
longitude. The torus splits into two annuli along rows 0 and 1: A1 holds the
triangles with i = 0, A2 those with i = 1 or 2. Each annulus collapses onto the
longitude.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from plcover.collapse import CollapseCertificate, collapses_to, concatenate, is_collapsible
from plcover.complex_core import Complex2, Face, SubcomplexMask, maximal_faces
from plcover.errors import (
    CollapseExpectationFailed,
    LabelCollision,
    NotACover,
    PreconditionViolation,
)
from plcover.formats import ComplexDocument, complex_document
from plcover.homology import Chain, is_nullhomologous

logger = logging.getLogger(__name__)

GRID = 3


def grid_triangles(label) -> List[Face]:
    """The 18 triangles of the grid torus for a labelling (i, j) -> label."""
    faces = []
    for i in range(GRID):
        for j in range(GRID):
            here = label(i, j)
            right = label(i, (j + 1) % GRID)
            down = label((i + 1) % GRID, j)
            diagonal = label((i + 1) % GRID, (j + 1) % GRID)
            faces.append((here, right, diagonal))
            faces.append((here, down, diagonal))
    return faces


@dataclass(frozen=True, eq=False)
class TorusBlock:
    """A standalone grid torus with its longitude and annulus split."""

    complex: Complex2
    longitude: SubcomplexMask
    annuli: Tuple[SubcomplexMask, SubcomplexMask]
    grid: Dict[Tuple[int, int], str]


def torus_block(longitude: Sequence[str] = ("a", "b", "c"), interior: Optional[Sequence[str]] = None) -> TorusBlock:
    """Builds the grid torus.

    Args:
        longitude: Labels of v(0,0), v(0,1), v(0,2).
        interior: Six labels for rows 1 and 2 in row-major order; defaults to "r<i>c<j>".

    Raises:
        LabelCollision: If the nine labels are not distinct.
    """
    if interior is None:
        interior = [f"r{i}c{j}" for i in range(1, GRID) for j in range(GRID)]
    labels = list(longitude) + list(interior)
    if len(labels) != GRID * GRID:
        raise ValueError("a torus block needs 3 longitude and 6 interior labels")
    if len(set(labels)) != len(labels):
        raise LabelCollision([x for x in labels if labels.count(x) > 1])
    grid = {(i, j): labels[GRID * i + j] for i in range(GRID) for j in range(GRID)}
    faces = grid_triangles(lambda i, j: grid[(i, j)])
    T = Complex2.from_maximal_faces(faces)
    row0 = [(grid[(0, j)], grid[(0, (j + 1) % GRID)]) for j in range(GRID)]
    lam = SubcomplexMask.from_faces(T, row0)
    first = SubcomplexMask.from_faces(T, faces[: 2 * GRID])
    second = SubcomplexMask.from_faces(T, faces[2 * GRID:])
    return TorusBlock(T, lam, (first, second), grid)


@dataclass(frozen=True, eq=False)
class TorusHandle:
    """Masks of one attached torus inside K+."""

    base_triangle: int
    torus: SubcomplexMask
    longitude: SubcomplexMask
    annuli: Tuple[SubcomplexMask, SubcomplexMask]


@dataclass(frozen=True, eq=False)
class ComplexPlus:
    """An enriched complex: K+ together with handles for the base K and every torus."""

    complex: Complex2
    base: Complex2
    base_mask: SubcomplexMask
    tori: Tuple[TorusHandle, ...]

    def torus(self, tau: int) -> TorusHandle:
        return self.tori[tau]

    def to_json(self) -> ComplexDocument:
        named = {"base": self.base_mask}
        for handle in self.tori:
            name = ",".join(self.base.labels((2, handle.base_triangle)))
            named[f"torus:{name}"] = handle.torus
            named[f"longitude:{name}"] = handle.longitude
        return complex_document(self.complex, named)


def interior_label(tau: int, i: int, j: int) -> str:
    return f"τ{tau}_r{i}c{j}"


def enrich(K: Complex2) -> ComplexPlus:
    """Glues a grid torus onto the boundary of every triangle of K.

    Torus t is attached along row 0 = (a, b, c), the labels of triangle t in
    vertex-id order; its interior vertices are labelled "τ<t>_r<i>c<j>".

    Raises:
        LabelCollision: If K already uses an interior label.
    """
    fresh = [interior_label(t, i, j) for t in range(K.num_triangles) for i in range(1, GRID) for j in range(GRID)]
    clashes = [label for label in fresh if K.has_label(label)]
    if clashes:
        raise LabelCollision(clashes)

    faces: List[Face] = list(K.maximal_faces())
    blocks: List[List[Face]] = []
    for t in range(K.num_triangles):
        row0 = K.labels((2, t))

        def label(i: int, j: int, t=t, row0=row0) -> str:
            return row0[j] if i == 0 else interior_label(t, i, j)

        block = grid_triangles(label)
        blocks.append(block)
        faces.extend(block)
    Kp = Complex2.from_maximal_faces(faces)

    base_mask = SubcomplexMask.from_faces(Kp, K.maximal_faces())
    tori = []
    for t, block in enumerate(blocks):
        row0 = K.labels((2, t))
        boundary_edges = [(row0[j], row0[(j + 1) % GRID]) for j in range(GRID)]
        tori.append(
            TorusHandle(
                base_triangle=t,
                torus=SubcomplexMask.from_faces(Kp, block),
                longitude=SubcomplexMask.from_faces(Kp, boundary_edges),
                annuli=(
                    SubcomplexMask.from_faces(Kp, block[: 2 * GRID]),
                    SubcomplexMask.from_faces(Kp, block[2 * GRID:]),
                ),
            )
        )
    logger.debug(f"Enriched {K!r} into {Kp!r}")
    return ComplexPlus(Kp, K, base_mask, tuple(tori))


def lift_base_mask(Kp: ComplexPlus, mask: SubcomplexMask) -> SubcomplexMask:
    """Carries a subcomplex of the base K over to K+."""
    mask.validate(Kp.base)
    return SubcomplexMask.from_faces(Kp.complex, maximal_faces(Kp.base, mask))


def check_enriched(Kp: ComplexPlus) -> bool:
    """Checks the counts and gluing identities of an enriched complex."""
    K, P = Kp.base, Kp.complex
    F = K.num_triangles
    if (P.num_vertices, P.num_edges, P.num_triangles) != (
        K.num_vertices + 6 * F,
        K.num_edges + 24 * F,
        19 * F,
    ):
        return False
    if len(Kp.tori) != F or Kp.base_mask != lift_base_mask(Kp, SubcomplexMask.full(K)):
        return False
    for handle in Kp.tori:
        boundary = SubcomplexMask.closure_of(K, edges=K.triangle_edges(handle.base_triangle))
        if handle.longitude != lift_base_mask(Kp, boundary):
            return False
        if (handle.torus & Kp.base_mask) != handle.longitude:
            return False
        if (handle.annuli[0] | handle.annuli[1]) != handle.torus:
            return False
    for i, first in enumerate(Kp.tori):
        for second in Kp.tori[i + 1:]:
            if not (first.torus & second.torus).issubset(Kp.base_mask):
                return False
    return True


class EnrichedCover(NamedTuple):
    """Two collapsible pieces of K+ with their collapse certificates."""

    first: SubcomplexMask
    second: SubcomplexMask
    certificates: Tuple[CollapseCertificate, CollapseCertificate]


def enriched_piece(Kp: ComplexPlus, base_piece: SubcomplexMask, side: int) -> SubcomplexMask:
    """The base piece lifted to K+ together with annulus `side` (1 or 2) of every torus."""
    piece = lift_base_mask(Kp, base_piece)
    for handle in Kp.tori:
        piece = piece | handle.annuli[side - 1]
    return piece


def cover_from_pair(Kp: ComplexPlus, K1: SubcomplexMask, K2: SubcomplexMask) -> EnrichedCover:
    """Extends a cover of K by two collapsible pieces to a cover of K+.

    Args:
        Kp (ComplexPlus): The enriched complex.
        K1 (SubcomplexMask): First base piece; receives the A1 annuli.
        K2 (SubcomplexMask): Second base piece; receives the A2 annuli.

    Returns:
        EnrichedCover: Both pieces of K+ with certificates collapsing each to a point.

    Raises:
        PreconditionViolation: With clause "cover", "1-skeleton" or "collapsible".
        CollapseExpectationFailed: If a piece does not collapse onto its base piece.
    """
    K = Kp.base
    K1.validate(K)
    K2.validate(K)
    if (K1 | K2) != SubcomplexMask.full(K):
        raise PreconditionViolation("cover", "the base pieces do not cover K")
    for index, piece in enumerate((K1, K2), start=1):
        if not (piece.vertices.all() and piece.edges.all()):
            raise PreconditionViolation("1-skeleton", f"piece {index} misses part of the 1-skeleton")
    for index, piece in enumerate((K1, K2), start=1):
        if not is_collapsible(K, piece):
            raise PreconditionViolation("collapsible", f"piece {index} is not collapsible")

    pieces = []
    certificates = []
    for side, base_piece in enumerate((K1, K2), start=1):
        lifted = lift_base_mask(Kp, base_piece)
        piece = enriched_piece(Kp, base_piece, side)
        onto_base = collapses_to(Kp.complex, lifted, support=piece)
        if not onto_base:
            raise CollapseExpectationFailed(f"piece {side} does not collapse onto its base piece")
        to_point = is_collapsible(Kp.complex, lifted)
        if not to_point:
            raise CollapseExpectationFailed(f"base piece {side} is not collapsible inside K+")
        pieces.append(piece)
        certificates.append(concatenate(onto_base.certificate, to_point.certificate))
    return EnrichedCover(pieces[0], pieces[1], (certificates[0], certificates[1]))


def _outside_torus_interior(Kp: ComplexPlus, handle: TorusHandle) -> SubcomplexMask:
    interior = [handle.torus.array(d) & ~handle.longitude.array(d) for d in (0, 1, 2)]
    return SubcomplexMask(~interior[0], ~interior[1], ~interior[2])


def torus_screen(Kp: ComplexPlus, Q1: SubcomplexMask, Q2: SubcomplexMask, tau: int) -> Optional[str]:
    """Why (Q1, Q2) cannot be two collapsible pieces, judged at the torus of tau; None if it passes."""
    handle = Kp.torus(tau)
    if not (handle.longitude.issubset(Q1) and handle.longitude.issubset(Q2)):
        return "longitude not in both pieces"
    R = _outside_torus_interior(Kp, handle)
    z = Chain(1, handle.longitude.edges.copy())
    for index, Q in enumerate((Q1, Q2), start=1):
        if not is_nullhomologous(Kp.complex, z, support=R & Q):
            return f"longitude does not bound in piece {index} outside the torus"
    return None


def torus_obstruction(Kp: ComplexPlus, Q1: SubcomplexMask, Q2: SubcomplexMask, tau: int) -> bool:
    """Necessary condition at the torus of tau for Q1, Q2 to be collapsible pieces covering K+.

    With R the complex minus the interior of the torus, the longitude must lie
    in both pieces and bound in R intersected with each piece.

    Raises:
        NotACover: If Q1 and Q2 do not cover K+.
    """
    if (Q1 | Q2) != SubcomplexMask.full(Kp.complex):
        raise NotACover()
    return torus_screen(Kp, Q1, Q2, tau) is None


def screen_enriched_pair(Kp: ComplexPlus, Q1: SubcomplexMask, Q2: SubcomplexMask) -> Optional[str]:
    """The first rejection reason over all tori, or None if every torus passes."""
    if (Q1 | Q2) != SubcomplexMask.full(Kp.complex):
        return "pieces do not cover K+"
    for handle in Kp.tori:
        reason = torus_screen(Kp, Q1, Q2, handle.base_triangle)
        if reason is not None:
            name = ",".join(Kp.base.labels((2, handle.base_triangle)))
            return f"torus {name}: {reason}"
    return None
