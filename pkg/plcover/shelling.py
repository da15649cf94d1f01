"""Shellings of pure 2-complexes and Hachimori's criterion.

A shelling orders the triangles so that every triangle after the first meets
the union of the earlier ones in a nonempty union of its edges. Hachimori's
criterion decides whether some subdivision is shellable: every vertex link is
connected and removing reduced-Euler-characteristic many triangles leaves a
collapsible complex.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from plcover.collapse import is_collapsible
from plcover.complex_core import Complex2, SubcomplexMask, components, is_pure, link_graph
from plcover.errors import BudgetExhausted, NotAPermutation, NotConnected, NotPure
from plcover.homology import betti, cycle_support
from plcover.subdivision import barycentric, compose

logger = logging.getLogger(__name__)

ShellingOrder = Tuple[int, ...]

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

LINK_DISCONNECTED = "link_disconnected"
NEGATIVE_EULER = "negative_euler"
NO_WITNESS = "no_witness_found_exhaustively"


class ShellingCheck(NamedTuple):
    """Truthy iff the order is a shelling; otherwise names the first failing position."""

    ok: bool
    first_violation: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class HachimoriVerdict:
    status: str
    witness: Tuple[int, ...] = ()
    reason: Optional[str] = None
    vertex: Optional[int] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.status == YES

    def to_json(self, K: Complex2) -> dict:
        return {
            "status": self.status,
            "witness": [list(K.labels((2, t))) for t in self.witness],
            "reason": self.reason,
            "vertex": None if self.vertex is None else K.vertices[self.vertex],
            "explored": self.explored,
        }


def _require_pure_2d(K: Complex2) -> None:
    if K.is_empty() or K.dimension != 2 or not is_pure(K):
        raise NotPure()


def _extends(K: Complex2, t: int, seen_vertices: Set[int], seen_edges: Set[int]) -> bool:
    """Whether triangle t meets the earlier triangles in a nonempty union of its edges."""
    present_edges = [e for e in K.triangle_edges(t) if e in seen_edges]
    if not present_edges:
        return False
    covered = {v for e in present_edges for v in K.edges[e]}
    present_vertices = {v for v in K.triangles[t] if v in seen_vertices}
    return present_vertices == covered


def verify_shelling(K: Complex2, order: Sequence[int]) -> ShellingCheck:
    """Checks the shelling condition at every position of the order.

    Raises:
        NotPure: If K is not pure 2-dimensional.
        NotAPermutation: If the order does not list every triangle exactly once.
    """
    _require_pure_2d(K)
    order = [int(t) for t in order]
    if sorted(order) != list(range(K.num_triangles)):
        raise NotAPermutation()
    seen_vertices: Set[int] = set()
    seen_edges: Set[int] = set()
    for k, t in enumerate(order):
        if k > 0 and not _extends(K, t, seen_vertices, seen_edges):
            return ShellingCheck(False, k)
        seen_vertices.update(K.triangles[t])
        seen_edges.update(K.triangle_edges(t))
    return ShellingCheck(True)


def find_shelling(K: Complex2, budget: Optional[int] = None) -> Optional[ShellingOrder]:
    """Backtracking search for a shelling.

    The search is exhaustive, so None proves that K is not shellable. Failed
    sets of placed triangles are memoised, since extendability depends only on
    the set and not on its order.

    Args:
        K (Complex2): A pure 2-dimensional complex.
        budget (int, optional): Maximum number of search nodes.

    Returns:
        Optional[ShellingOrder]: A shelling, or None if there is none.

    Raises:
        NotPure: If K is not pure 2-dimensional.
        BudgetExhausted: If the budget runs out before the search is decided.
    """
    _require_pure_2d(K)
    n = K.num_triangles
    failed: Set[frozenset] = set()
    order: List[int] = []
    nodes = 0

    def extend(used: frozenset, seen_vertices: Set[int], seen_edges: Set[int]) -> bool:
        nonlocal nodes
        if len(used) == n:
            return True
        if used in failed:
            return False
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExhausted(budget)
        for t in range(n):
            if t in used or (used and not _extends(K, t, seen_vertices, seen_edges)):
                continue
            order.append(t)
            if extend(
                used | {t},
                seen_vertices | set(K.triangles[t]),
                seen_edges | set(K.triangle_edges(t)),
            ):
                return True
            order.pop()
        failed.add(used)
        return False

    if extend(frozenset(), set(), set()):
        logger.debug(f"Found shelling after {nodes} nodes")
        return tuple(order)
    return None


def vertex_links_connected(K: Complex2) -> Optional[int]:
    """The first vertex whose link is disconnected, or None if every link is connected."""
    for v in range(K.num_vertices):
        link = link_graph(K, v)
        if link.number_of_nodes() > 0 and not nx.is_connected(link):
            return v
    return None


class _WitnessSearch:
    """Depth-first search over removal sets that lower b2 by one per triangle."""

    def __init__(self, K: Complex2, budget: Optional[int]):
        self.K = K
        self.budget = budget
        self.explored = 0
        self.exhausted = False

    def _spend(self) -> bool:
        self.explored += 1
        if self.budget is not None and self.explored > self.budget:
            self.exhausted = True
            return False
        return True

    def witnesses(self) -> Iterator[Tuple[int, ...]]:
        K = self.K
        full = SubcomplexMask.full(K)
        b0, b1, b2 = betti(K)
        target = -1 + b0 - b1 + b2
        if target < 0 or b1 != 0:
            return

        def search(support: SubcomplexMask, chosen: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
            if self.exhausted or not self._spend():
                return
            if len(chosen) == target:
                if is_collapsible(K, support):
                    yield chosen
                return
            start = chosen[-1] + 1 if chosen else 0
            on_cycles = cycle_support(K, support)
            for t in range(start, K.num_triangles):
                if not on_cycles[t]:
                    continue
                smaller = support.without_triangles([t])
                # removing a triangle on a 2-cycle always lowers b2 by one
                yield from search(smaller, chosen + (t,))
                if self.exhausted:
                    return

        yield from search(full, ())


def removal_witnesses(K: Complex2, budget: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """All triangle sets W with |W| = reduced Euler characteristic and K minus W collapsible.

    Sets are yielded in lexicographic order of their sorted triangle ids. The
    search stops silently once the node budget is spent.
    """
    yield from _WitnessSearch(K, budget).witnesses()


def hachimori_criterion(K: Complex2, budget: Optional[int] = None) -> HachimoriVerdict:
    """Decides whether some subdivision of K is shellable.

    Args:
        K (Complex2): A connected complex of dimension at most two.
        budget (int, optional): Maximum number of removal-set search nodes.

    Returns:
        HachimoriVerdict: yes with a witness, no with a reason, or unknown once the budget is spent.

    Raises:
        NotConnected: If K has several components.
    """
    pieces = components(K)
    if pieces != 1:
        raise NotConnected(pieces)
    if K.dimension == 2:
        v = vertex_links_connected(K)
        if v is not None:
            logger.debug(f"Link of {K.vertices[v]} is disconnected")
            return HachimoriVerdict(NO, reason=LINK_DISCONNECTED, vertex=v)
    chi = K.num_vertices - K.num_edges + K.num_triangles - 1
    if chi < 0:
        return HachimoriVerdict(NO, reason=NEGATIVE_EULER)
    search = _WitnessSearch(K, budget)
    for witness in search.witnesses():
        return HachimoriVerdict(YES, witness=witness, explored=search.explored)
    if search.exhausted:
        logger.info(f"Hachimori search gave up after {search.explored} nodes")
        return HachimoriVerdict(UNKNOWN, reason="budget", explored=search.explored)
    return HachimoriVerdict(NO, reason=NO_WITNESS, explored=search.explored)


def sd2_shellable(K: Complex2, budget: Optional[int] = None) -> Optional[bool]:
    """Whether the second barycentric subdivision is shellable; None if the budget runs out."""
    _require_pure_2d(K)
    first = barycentric(K)
    second = compose(first, barycentric(first.child))
    try:
        return find_shelling(second.child, budget) is not None
    except BudgetExhausted:
        return None
