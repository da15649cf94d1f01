"""Simplicial homology with GF(2) coefficients.

Boundary matrices are dense numpy uint8 arrays indexed by the parent complex's
simplex ids. A support mask restricts the computation to a subcomplex by
zeroing the columns of simplices outside it; the index space never changes, so
chains of a subcomplex are chains of the parent.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from plcover.complex_core import Complex2, SimplexRef, SubcomplexMask
from plcover.errors import DimensionMismatch, NotACycle, SpheresNotDisjoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Chain:
    """A GF(2) chain: a set of simplices of one dimension, stored as a bit-vector."""

    dim: int
    bits: np.ndarray

    @classmethod
    def zero(cls, K: Complex2, dim: int) -> "Chain":
        return cls(dim, np.zeros(K.size(dim), dtype=bool))

    @classmethod
    def from_ids(cls, K: Complex2, dim: int, ids: Iterable[int]) -> "Chain":
        bits = np.zeros(K.size(dim), dtype=bool)
        for sid in ids:
            bits[sid] ^= True
        return cls(dim, bits)

    @classmethod
    def from_faces(cls, K: Complex2, faces: Iterable[Sequence[str]]) -> "Chain":
        refs = [K.find(face) for face in faces]
        if not refs:
            raise DimensionMismatch("cannot infer the dimension of an empty chain")
        if any(ref is None for ref in refs) or len({ref[0] for ref in refs}) != 1:
            raise DimensionMismatch("chain faces must be simplices of one dimension")
        return cls.from_ids(K, refs[0][0], (ref[1] for ref in refs))

    def __add__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim or len(self.bits) != len(other.bits):
            raise DimensionMismatch("chains live in different chain groups")
        return Chain(self.dim, self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.bits.any()

    def ids(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.bits)]

    def refs(self) -> List[SimplexRef]:
        return [(self.dim, i) for i in self.ids()]

    def faces(self, K: Complex2) -> List[Tuple[str, ...]]:
        return sorted(tuple(sorted(K.labels(ref))) for ref in self.refs())


def boundary_matrix(K: Complex2, dim: int, support: Optional[SubcomplexMask] = None) -> np.ndarray:
    """The matrix of the boundary map from dim-chains to (dim-1)-chains.

    Rows are (dim-1)-simplices and columns dim-simplices of K; columns of
    simplices outside the support are zero.
    """
    if dim == 1:
        matrix = np.zeros((K.num_vertices, K.num_edges), dtype=np.uint8)
        for e, (u, v) in enumerate(K.edges):
            matrix[u, e] = 1
            matrix[v, e] = 1
    elif dim == 2:
        matrix = np.zeros((K.num_edges, K.num_triangles), dtype=np.uint8)
        for t in range(K.num_triangles):
            matrix[list(K.triangle_edges(t)), t] = 1
    else:
        raise DimensionMismatch(f"no boundary map in dimension {dim}")
    if support is not None:
        matrix[:, ~support.array(dim)] = 0
    return matrix


def row_reduce(matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(2).

    Returns:
        Tuple[np.ndarray, List[int]]: The reduced matrix and its pivot columns in row order.
    """
    R = (matrix % 2).astype(np.uint8)
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        below = np.flatnonzero(R[r:, c])
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        hits = np.flatnonzero(R[:, c])
        hits = hits[hits != r]
        if hits.size:
            R[hits] ^= R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return len(row_reduce(matrix)[1])


def kernel_basis(matrix: np.ndarray) -> np.ndarray:
    """A basis of the null space over GF(2), one vector per row."""
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    R, pivots = row_reduce(matrix)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = R[i, f]
    return basis


def boundary(K: Complex2, chain: Chain) -> Chain:
    """The mod-2 boundary of a 1- or 2-chain.

    Raises:
        DimensionMismatch: For 0-chains or chains sized for another complex.
    """
    if chain.dim not in (1, 2) or len(chain.bits) != K.size(chain.dim):
        raise DimensionMismatch(f"chain of dimension {chain.dim} does not match the complex")
    matrix = boundary_matrix(K, chain.dim)
    image = (matrix.astype(np.int64) @ chain.bits.astype(np.int64)) % 2
    return Chain(chain.dim - 1, image.astype(bool))


def betti(K: Complex2, support: Optional[SubcomplexMask] = None) -> Tuple[int, int, int]:
    """GF(2) Betti numbers (b0, b1, b2) of K or of the masked subcomplex."""
    if support is None:
        support = SubcomplexMask.full(K)
    n0, n1, n2 = support.counts()
    r1 = rank(boundary_matrix(K, 1, support))
    r2 = rank(boundary_matrix(K, 2, support))
    return n0 - r1, n1 - r1 - r2, n2 - r2


def kernel_basis_2(K: Complex2, support: Optional[SubcomplexMask] = None) -> List[Chain]:
    """A basis of the 2-cycles (= H2, there being no 3-simplices)."""
    matrix = boundary_matrix(K, 2, support)
    basis = kernel_basis(matrix)
    alive = np.ones(K.num_triangles, dtype=bool) if support is None else support.triangles
    return [Chain(2, row.astype(bool)) for row in basis if not (row.astype(bool) & ~alive).any()]


def cycle_support(K: Complex2, support: Optional[SubcomplexMask] = None) -> np.ndarray:
    """Boolean vector of the triangles that lie on some 2-cycle."""
    covered = np.zeros(K.num_triangles, dtype=bool)
    for cycle in kernel_basis_2(K, support):
        covered |= cycle.bits
    return covered


def filling(K: Complex2, z: Chain, support: Optional[SubcomplexMask] = None) -> Optional[Chain]:
    """A 2-chain whose boundary is z, or None if z does not bound in the support."""
    matrix = boundary_matrix(K, 2, support)
    augmented = np.concatenate([matrix, z.bits.astype(np.uint8)[:, None]], axis=1)
    R, pivots = row_reduce(augmented)
    last = augmented.shape[1] - 1
    if last in pivots:
        return None
    solution = np.zeros(K.num_triangles, dtype=bool)
    for i, p in enumerate(pivots):
        solution[p] = bool(R[i, last])
    return Chain(2, solution)


class Nullhomology(NamedTuple):
    """Truthy iff the cycle bounds; `witness` is a filling 2-chain when it does."""

    bounds: bool
    witness: Optional[Chain]

    def __bool__(self) -> bool:
        return self.bounds


def is_nullhomologous(K: Complex2, z: Chain, support: Optional[SubcomplexMask] = None) -> Nullhomology:
    """Decides whether the 1-cycle z bounds a 2-chain of K (or of the masked subcomplex).

    Args:
        K (Complex2): The ambient complex.
        z (Chain): A 1-chain of K.
        support (SubcomplexMask, optional): Restricts both z and its filling.

    Returns:
        Nullhomology: The verdict with a filling witness.

    Raises:
        DimensionMismatch: If z is not a 1-chain of K.
        NotACycle: If z has nonzero boundary.
    """
    if z.dim != 1:
        raise DimensionMismatch("only 1-cycles are tested for bounding")
    if not boundary(K, z).is_zero():
        raise NotACycle()
    if support is not None and (z.bits & ~support.edges).any():
        return Nullhomology(False, None)
    witness = filling(K, z, support)
    return Nullhomology(witness is not None, witness)


def h2_supported_only_on(K: Complex2, spheres: Sequence[SubcomplexMask]) -> bool:
    """True iff the given disjoint spheres generate the 2-cycles of K.

    Checks that the spheres' triangle sets are cycles, that dim ker of the
    2-boundary equals the number of spheres, and that every 2-cycle lives
    inside the union of the spheres.

    Raises:
        SpheresNotDisjoint: If two spheres share a vertex.
    """
    for i, first in enumerate(spheres):
        for j in range(i + 1, len(spheres)):
            if (first.vertices & spheres[j].vertices).any():
                raise SpheresNotDisjoint(i, j)
    union = np.zeros(K.num_triangles, dtype=bool)
    for index, sphere in enumerate(spheres):
        fundamental = Chain(2, sphere.triangles.copy())
        if fundamental.is_zero() or not boundary(K, fundamental).is_zero():
            logger.debug(f"Sphere {index} does not carry a 2-cycle")
            return False
        union |= sphere.triangles
    basis = kernel_basis_2(K)
    if len(basis) != len(spheres):
        logger.debug(f"Found {len(basis)} independent 2-cycles for {len(spheres)} spheres")
        return False
    return all(not (cycle.bits & ~union).any() for cycle in basis)
