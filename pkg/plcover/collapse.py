"""Elementary collapses of 2-complexes.

A collapse step removes a free face together with its unique maximal coface:
either a vertex lying in exactly one edge (which is in no triangle), or an edge
lying in exactly one triangle. For 2-complexes collapsing is greedy: if K is
collapsible and K collapses to L, then L is collapsible, so any maximal
sequence of steps decides collapsibility.

All operations work on a subcomplex of K given by a support mask (default:
all of K), so pieces of covers are collapsed without building new complexes.
"""

import heapq
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, TypedDict

import numpy as np

from plcover.complex_core import Complex2, SimplexRef, SubcomplexMask, components, maximal_faces
from plcover.config import brute_force_limit
from plcover.errors import EmptyComplex, InvalidSubcomplex, NotConnected, TooLarge

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class CollapseStep:
    """Removal of a free face (vertex or edge) with its maximal coface."""

    free: SimplexRef
    coface: SimplexRef


class StepData(TypedDict):
    free: List[str]
    coface: List[str]


class CertificateData(TypedDict):
    """JSON shape of a collapse certificate"""

    kind: str
    complex: List[List[str]]
    start: List[List[str]]
    start_digest: str
    steps: List[StepData]
    residual: List[List[str]]


@dataclass(frozen=True, eq=False)
class CollapseCertificate:
    """An ordered list of collapse steps taking `start` to `residual` inside a complex."""

    steps: Tuple[CollapseStep, ...]
    start_digest: str
    start: SubcomplexMask
    residual: SubcomplexMask

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self, K: Complex2) -> CertificateData:
        return {
            "kind": "collapse",
            "complex": [list(face) for face in K.maximal_faces()],
            "start": [list(face) for face in maximal_faces(K, self.start)],
            "start_digest": self.start_digest,
            "steps": [
                {"free": list(K.labels(step.free)), "coface": list(K.labels(step.coface))} for step in self.steps
            ],
            "residual": [list(face) for face in maximal_faces(K, self.residual)],
        }

    @staticmethod
    def from_json(document: Dict[str, Any]) -> Tuple[Complex2, "CollapseCertificate"]:
        """Rebuilds the complex and certificate from their JSON form.

        Raises:
            InvalidSubcomplex: If a step or mask names a simplex the complex lacks.
        """
        K = Complex2.from_maximal_faces(document["complex"])
        steps = []
        for entry in document["steps"]:
            free, coface = K.find(entry["free"]), K.find(entry["coface"])
            if free is None or coface is None:
                raise InvalidSubcomplex(f"certificate step {entry!r} names unknown simplices")
            steps.append(CollapseStep(free, coface))
        return K, CollapseCertificate(
            steps=tuple(steps),
            start_digest=document.get("start_digest", K.digest()),
            start=SubcomplexMask.from_faces(K, document["start"]),
            residual=SubcomplexMask.from_faces(K, document["residual"]),
        )


class CollapseVerdict(NamedTuple):
    """Truthy iff the collapse succeeded; carries the certificate when it did."""

    ok: bool
    certificate: Optional[CollapseCertificate]
    residual: Optional[SubcomplexMask] = None

    def __bool__(self) -> bool:
        return self.ok


class _CollapseState:
    """Alive flags and coface counters of a shrinking subcomplex."""

    def __init__(self, K: Complex2, support: SubcomplexMask):
        self.K = K
        self.alive = [
            support.vertices.tolist(),
            support.edges.tolist(),
            support.triangles.tolist(),
        ]
        self.edge_degree = [0] * K.num_edges
        for t, alive in enumerate(self.alive[2]):
            if alive:
                for e in K.triangle_edges(t):
                    self.edge_degree[e] += 1
        self.vertex_degree = [0] * K.num_vertices
        for e, alive in enumerate(self.alive[1]):
            if alive:
                for v in K.edges[e]:
                    self.vertex_degree[v] += 1

    def step_at(self, ref: SimplexRef) -> Optional[CollapseStep]:
        """The step with this free face, if the face is currently free."""
        dim, sid = ref
        if dim == 2 or not self.alive[dim][sid]:
            return None
        if dim == 1:
            if self.edge_degree[sid] != 1:
                return None
            for t in self.K.edge_triangles(sid):
                if self.alive[2][t]:
                    return CollapseStep((1, sid), (2, t))
            return None
        if self.vertex_degree[sid] != 1:
            return None
        for e in self.K.vertex_edges(sid):
            if self.alive[1][e]:
                if self.edge_degree[e] == 0:
                    return CollapseStep((0, sid), (1, e))
                return None
        return None

    def apply(self, step: CollapseStep) -> List[SimplexRef]:
        """Removes the pair and returns the faces whose freeness may have changed."""
        touched: List[SimplexRef] = []
        if step.coface[0] == 2:
            e, t = step.free[1], step.coface[1]
            self.alive[1][e] = False
            self.alive[2][t] = False
            for other in self.K.triangle_edges(t):
                self.edge_degree[other] -= 1
                if other != e:
                    touched.append((1, other))
            for v in self.K.edges[e]:
                self.vertex_degree[v] -= 1
            for v in self.K.triangles[t]:
                touched.append((0, v))
        else:
            v, e = step.free[1], step.coface[1]
            self.alive[0][v] = False
            self.alive[1][e] = False
            w = self.K.other_end(e, v)
            self.vertex_degree[v] -= 1
            self.vertex_degree[w] -= 1
            touched.append((0, w))
        return touched

    def mask(self) -> SubcomplexMask:
        return SubcomplexMask(
            np.array(self.alive[0], dtype=bool),
            np.array(self.alive[1], dtype=bool),
            np.array(self.alive[2], dtype=bool),
        )


def _prepare(
    K: Complex2, protected: Optional[SubcomplexMask], support: Optional[SubcomplexMask]
) -> Tuple[SubcomplexMask, SubcomplexMask]:
    support = SubcomplexMask.full(K) if support is None else support.validate(K)
    protected = SubcomplexMask.empty(K) if protected is None else protected.validate(K)
    return support, protected


def free_faces(
    K: Complex2,
    protected: Optional[SubcomplexMask] = None,
    support: Optional[SubcomplexMask] = None,
) -> List[CollapseStep]:
    """All currently legal steps whose free face is not protected.

    Args:
        K (Complex2): The ambient complex.
        protected (SubcomplexMask, optional): Faces that may not be removed.
        support (SubcomplexMask, optional): The current subcomplex; defaults to K.

    Returns:
        List[CollapseStep]: Ordered by (dimension of the free face, id).
    """
    support, protected = _prepare(K, protected, support)
    state = _CollapseState(K, support)
    steps = []
    for ref in support.simplices():
        if ref[0] < 2 and not protected.contains(ref):
            step = state.step_at(ref)
            if step is not None:
                steps.append(step)
    return steps


def greedy_collapse(
    K: Complex2,
    protected: Optional[SubcomplexMask] = None,
    support: Optional[SubcomplexMask] = None,
) -> Tuple[SubcomplexMask, CollapseCertificate]:
    """Collapses greedily, always taking the lowest available (dimension, id) step.

    Args:
        K (Complex2): The ambient complex.
        protected (SubcomplexMask, optional): Faces that may not be removed.
        support (SubcomplexMask, optional): The subcomplex to start from; defaults to K.

    Returns:
        Tuple[SubcomplexMask, CollapseCertificate]: The residual subcomplex once no step is
        left, and the certificate of the steps taken.
    """
    support, protected = _prepare(K, protected, support)
    shielded = [protected.vertices.tolist(), protected.edges.tolist()]
    state = _CollapseState(K, support)
    heap = [ref for ref in support.simplices() if ref[0] < 2]
    heapq.heapify(heap)
    steps: List[CollapseStep] = []
    while heap:
        ref = heapq.heappop(heap)
        if shielded[ref[0]][ref[1]]:
            continue
        step = state.step_at(ref)
        if step is None:
            continue
        steps.append(step)
        for candidate in state.apply(step):
            heapq.heappush(heap, candidate)
    residual = state.mask()
    logger.debug(f"Greedy collapse took {len(steps)} steps, residual counts {residual.counts()}")
    certificate = CollapseCertificate(tuple(steps), K.digest(), support, residual)
    return residual, certificate


def _is_point(mask: SubcomplexMask) -> bool:
    return mask.counts() == (1, 0, 0)


def is_collapsible(K: Complex2, support: Optional[SubcomplexMask] = None) -> CollapseVerdict:
    """Decides whether K (or the masked subcomplex) collapses to a single vertex.

    Returns:
        CollapseVerdict: Truthy iff collapsible; the certificate is attached when it is.

    Raises:
        EmptyComplex: If there is nothing to collapse.
        NotConnected: If the complex has several components.
    """
    support = SubcomplexMask.full(K) if support is None else support.validate(K)
    if support.counts()[0] == 0:
        raise EmptyComplex()
    pieces = components(K, support)
    if pieces != 1:
        raise NotConnected(pieces)
    residual, certificate = greedy_collapse(K, support=support)
    if _is_point(residual):
        return CollapseVerdict(True, certificate, residual)
    return CollapseVerdict(False, None, residual)


def collapses_to(
    K: Complex2,
    L: SubcomplexMask,
    support: Optional[SubcomplexMask] = None,
) -> CollapseVerdict:
    """Decides whether K (or the masked subcomplex) collapses onto the subcomplex L.

    Runs the greedy collapse protecting L and succeeds iff exactly L remains.
    """
    support = SubcomplexMask.full(K) if support is None else support.validate(K)
    L.validate(K)
    if not L.issubset(support):
        return CollapseVerdict(False, None)
    residual, certificate = greedy_collapse(K, protected=L, support=support)
    if residual == L:
        return CollapseVerdict(True, certificate, residual)
    return CollapseVerdict(False, None, residual)


def replay(K: Complex2, certificate: CollapseCertificate) -> bool:
    """Checks a certificate using nothing but the definition of a collapse.

    Every step must be legal when applied, and the final subcomplex must equal
    the recorded residual.
    """
    if certificate.start_digest != K.digest():
        logger.warning("Certificate was issued for a different complex")
        return False
    if not certificate.start.is_valid(K) or not certificate.residual.is_valid(K):
        logger.warning("Certificate masks are not subcomplexes")
        return False
    state = _CollapseState(K, certificate.start)
    for index, step in enumerate(certificate.steps):
        legal = state.step_at(step.free)
        if legal != step:
            logger.warning(f"Step {index} ({K.labels(step.free)} in {K.labels(step.coface)}) is not a legal collapse")
            return False
        state.apply(step)
    if state.mask() != certificate.residual:
        logger.warning("Replay does not end at the recorded residual")
        return False
    return True


def concatenate(first: CollapseCertificate, second: CollapseCertificate) -> CollapseCertificate:
    """Chains K -> L and L -> M into K -> M."""
    if first.start_digest != second.start_digest or first.residual != second.start:
        raise InvalidSubcomplex("certificates do not chain")
    return CollapseCertificate(first.steps + second.steps, first.start_digest, first.start, second.residual)


def brute_force_collapsible(
    K: Complex2,
    L: Optional[SubcomplexMask] = None,
    support: Optional[SubcomplexMask] = None,
    limit: Optional[int] = None,
) -> bool:
    """Exhaustive search over all collapse orders.

    Args:
        K (Complex2): The ambient complex.
        L (SubcomplexMask, optional): Target subcomplex; None means any single vertex.
        support (SubcomplexMask, optional): The subcomplex to start from; defaults to K.
        limit (int, optional): Triangle guard; defaults to PLCOVER_BRUTE_FORCE_LIMIT.

    Returns:
        bool: True iff some order of steps reaches the target.

    Raises:
        TooLarge: If the start has more triangles than the guard allows.
    """
    support = SubcomplexMask.full(K) if support is None else support.validate(K)
    limit = brute_force_limit() if limit is None else limit
    triangles = int(support.triangles.sum())
    if triangles > limit:
        raise TooLarge(triangles, limit)

    offsets = (0, K.num_vertices, K.num_vertices + K.num_edges)
    total = offsets[2] + K.num_triangles
    cofaces: List[Sequence[int]] = [()] * total
    is_vertex = [False] * total
    for v in range(K.num_vertices):
        cofaces[v] = [offsets[1] + e for e in K.vertex_edges(v)]
        is_vertex[v] = True
    for e in range(K.num_edges):
        cofaces[offsets[1] + e] = [offsets[2] + t for t in K.edge_triangles(e)]

    def bits(mask: SubcomplexMask) -> int:
        value = 0
        for dim, sid in mask.simplices():
            value |= 1 << (offsets[dim] + sid)
        return value

    start = bits(support)
    if L is None:
        target = None
        keep = 0
    else:
        L.validate(K)
        target = keep = bits(L)
        if target & ~start:
            return False

    def reached(state: int) -> bool:
        if target is not None:
            return state == target
        if state & (state - 1):
            return False
        return state != 0 and is_vertex[state.bit_length() - 1]

    failed = set()

    def search(state: int) -> bool:
        if reached(state):
            return True
        if state in failed:
            return False
        for s in range(offsets[2]):
            bit = 1 << s
            if not state & bit or keep & bit:
                continue
            alive = [c for c in cofaces[s] if state >> c & 1]
            if len(alive) != 1:
                continue
            c = alive[0]
            if any(state >> d & 1 for d in cofaces[c]):
                continue
            if search(state & ~bit & ~(1 << c)):
                return True
        failed.add(state)
        return False

    return search(start)
