"""PL geometric category of connected 2-complexes.

plgcat is 1 exactly when the complex is collapsible. An upper bound of 2 is
proved by exhibiting two collapsible subcomplexes that cover a triangulation
(possibly a subdivision). Failing to find such a cover never proves a lower
bound of 3; verdicts report an interval instead.
"""

import itertools
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

import networkx as nx

from plcover.collapse import CollapseCertificate, is_collapsible, replay
from plcover.complex_core import Complex2, SubcomplexMask, components, maximal_faces, one_skeleton
from plcover.config import DEFAULT_BUDGET
from plcover.enrichment import ComplexPlus, check_enriched, enriched_piece, screen_enriched_pair
from plcover.errors import CollapseExpectationFailed, NotConnected, NotEnriched
from plcover.homology import betti, cycle_support
from plcover.shelling import hachimori_criterion, removal_witnesses
from plcover.subdivision import SubdivisionMap, compose, identity_subdivision, seven_part

logger = logging.getLogger(__name__)

FOUND = "found"
NOT_ON_THIS_TRIANGULATION = "not_on_this_triangulation"
UNKNOWN = "unknown"

EXACTLY_1 = "exactly_1"
AT_MOST_2 = "at_most_2"
AT_LEAST_2 = "at_least_2"

MAX_LADDER_WITNESSES = 64

Candidate = TypeVar("Candidate")


@dataclass(frozen=True, eq=False)
class CoverCertificate:
    """Collapsible pieces covering `complex`, each with a collapse certificate to a point.

    When the cover lives on a subdivision of the input, `subdivision` maps the
    covered complex back to the input.
    """

    complex: Complex2
    pieces: Tuple[SubcomplexMask, ...]
    certificates: Tuple[CollapseCertificate, ...]
    subdivision: Optional[SubdivisionMap] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "cover",
            "complex": [list(face) for face in self.complex.maximal_faces()],
            "pieces": [[list(face) for face in maximal_faces(self.complex, piece)] for piece in self.pieces],
            "certificates": [certificate.to_json(self.complex) for certificate in self.certificates],
            "subdivision": None if self.subdivision is None else self.subdivision.to_json(),
        }

    @staticmethod
    def from_json(document: Dict[str, Any]) -> "CoverCertificate":
        """Rebuilds a certificate for verification; the subdivision map is not needed for that and is dropped."""
        K = Complex2.from_maximal_faces(document["complex"])
        pieces = tuple(SubcomplexMask.from_faces(K, faces) for faces in document["pieces"])
        certificates = tuple(CollapseCertificate.from_json(entry)[1] for entry in document["certificates"])
        return CoverCertificate(K, pieces, certificates)


def verify_cover_certificate(certificate: CoverCertificate) -> bool:
    """Checks coverage and replays every piece's collapse; uses no search code."""
    K = certificate.complex
    if not certificate.pieces or len(certificate.pieces) != len(certificate.certificates):
        return False
    union = SubcomplexMask.empty(K)
    for piece in certificate.pieces:
        union = union | piece
    if union != SubcomplexMask.full(K):
        logger.warning("Pieces do not cover the complex")
        return False
    for index, (piece, collapse) in enumerate(zip(certificate.pieces, certificate.certificates)):
        if collapse.start != piece or collapse.residual.counts() != (1, 0, 0) or not replay(K, collapse):
            logger.warning(f"Piece {index} does not replay to a point")
            return False
    return True


@dataclass
class PlgcatVerdict:
    """Bounds on plgcat with the certificate of the upper bound."""

    status: str
    lower: int
    upper: int
    certificate: Optional[CoverCertificate] = None
    reason: str = ""
    evidence: List[str] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "interval": [self.lower, self.upper],
            "reason": self.reason,
            "evidence": list(self.evidence),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


@dataclass
class CoverSearchResult:
    status: str = UNKNOWN
    certificate: Optional[CoverCertificate] = None
    tested: int = 0
    pruned: int = 0
    evidence: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.status == FOUND

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "tested": self.tested,
            "pruned": self.pruned,
            "evidence": list(self.evidence),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def plgcat_is_one(K: Complex2) -> bool:
    """plgcat(K) = 1 iff K is collapsible; no subdivision can change that."""
    return bool(is_collapsible(K))


# spanning trees


def extend_to_spanning_tree(K: Complex2, forest: Sequence[int]) -> Optional[List[int]]:
    """A spanning tree of the 1-skeleton containing `forest`, or None if the forest has a cycle.

    Breadth-first from the lexicographically smallest vertex label, neighbours in
    label order. A forest component is entered whole the first time any of its
    vertices is reached.
    """
    grown = nx.Graph()
    grown.add_nodes_from(range(K.num_vertices))
    for e in forest:
        u, v = K.edges[e]
        if nx.has_path(grown, u, v):
            return None
        grown.add_edge(u, v)
    if K.num_vertices == 0:
        return []

    def by_label(v: int) -> str:
        return K.vertices[v]

    tree = set(forest)
    reached = set()
    queue = deque()

    def enter(v: int) -> None:
        for w in sorted(nx.node_connected_component(grown, v), key=by_label):
            reached.add(w)
            queue.append(w)

    enter(min(range(K.num_vertices), key=by_label))
    while queue:
        u = queue.popleft()
        for e in sorted(K.vertex_edges(u), key=lambda e: by_label(K.other_end(e, u))):
            w = K.other_end(e, u)
            if w not in reached:
                tree.add(e)
                enter(w)
    return sorted(tree)


def _collapse_or_fail(K: Complex2, piece: SubcomplexMask, name: str) -> CollapseCertificate:
    verdict = is_collapsible(K, piece)
    if not verdict:
        raise CollapseExpectationFailed(f"{name} is not collapsible")
    return verdict.certificate


# constructive cover from a shellable subdivision


def cover_via_shelling(K: Complex2, budget: Optional[int] = None) -> Optional[CoverCertificate]:
    """Covers a subdivision of K by two collapsible pieces when Hachimori's criterion holds.

    Every witness triangle is cut into seven parts. Piece 1 is the subdivided
    complex without the middle triangles; piece 2 is the middle triangles plus a
    spanning tree through two edges of each of them.

    Returns:
        Optional[CoverCertificate]: None when the criterion says no or gives up.

    Raises:
        NotConnected: If K has several components.
        CollapseExpectationFailed: If a constructed piece does not collapse.
    """
    pieces = components(K)
    if pieces != 1:
        raise NotConnected(pieces)
    verdict = hachimori_criterion(K, budget)
    if not verdict:
        logger.debug(f"No shelling cover: criterion answered {verdict.status} ({verdict.reason})")
        return None

    m = identity_subdivision(K)
    L = K
    middle_labels = []
    for t in verdict.witness:
        step, middle = seven_part(L, L.find(K.labels((2, t)))[1])
        m = compose(m, step)
        L = step.child
        middle_labels.append(L.labels((2, middle)))
    middles = [L.find(labels)[1] for labels in middle_labels]

    first = SubcomplexMask.full(L).without_triangles(middles)
    tree = None
    for pair in ((0, 1), (0, 2), (1, 2)):
        forest = []
        for t in middles:
            edges = sorted(L.triangle_edges(t))
            forest.extend(edges[i] for i in pair)
        tree = extend_to_spanning_tree(L, forest)
        if tree is not None:
            break
    if tree is None:
        return None
    second = SubcomplexMask.closure_of(L, vertices=range(L.num_vertices), edges=tree, triangles=middles)
    certificates = (_collapse_or_fail(L, first, "outer piece"), _collapse_or_fail(L, second, "middle piece"))
    return CoverCertificate(L, (first, second), certificates, m if middles else None)


# bounded search


def _evaluate_in_order(
    evaluate: Callable[[Candidate], Any],
    candidates: Iterable[Candidate],
    threads: int,
) -> Iterator[Tuple[Candidate, Any]]:
    """Evaluates candidates, possibly in a thread pool, yielding results in enumeration order."""
    if threads <= 1:
        for candidate in candidates:
            yield candidate, evaluate(candidate)
        return
    iterator = iter(candidates)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        while True:
            batch = list(itertools.islice(iterator, threads * 16))
            if not batch:
                return
            yield from zip(batch, executor.map(evaluate, batch))


def _assignments(n: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Triangle sets of the two pieces: partitions first, then overlapping assignments."""
    if n == 0:
        yield (), ()
        return
    for bits in range(2 ** (n - 1)):
        second = tuple(i for i in range(1, n) if bits >> (i - 1) & 1)
        first = tuple(i for i in range(n) if i not in second)
        yield first, second
    for labels in itertools.product((1, 2, 3), repeat=n):
        if 3 not in labels:
            continue
        yield (
            tuple(i for i, x in enumerate(labels) if x != 2),
            tuple(i for i, x in enumerate(labels) if x != 1),
        )


def core_components(K: Complex2, triangles: Sequence[int]) -> List[SubcomplexMask]:
    """Connected components of the closure of a triangle set, ordered by smallest vertex id."""
    core = SubcomplexMask.closure_of(K, triangles=triangles)
    groups = sorted((sorted(c) for c in nx.connected_components(one_skeleton(K, core))), key=lambda c: c[0])
    parts = []
    for group in groups:
        inside = set(group)
        parts.append(SubcomplexMask.closure_of(K, triangles=[t for t in triangles if K.triangles[t][0] in inside]))
    return parts


class _Forest:
    """Union-find over one piece's vertices; each core component starts as a single node."""

    def __init__(self, num_vertices: int, groups: Sequence[SubcomplexMask]):
        self.parent = list(range(num_vertices))
        self.present = [False] * num_vertices
        self.nodes = len(groups)
        self.extra: List[int] = []
        for group in groups:
            members = [int(v) for v in group.vertices.nonzero()[0]]
            for v in members:
                self.parent[v] = members[0]
                self.present[v] = True

    def copy(self) -> "_Forest":
        other = _Forest.__new__(_Forest)
        other.parent = list(self.parent)
        other.present = list(self.present)
        other.nodes = self.nodes
        other.extra = list(self.extra)
        return other

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def add(self, e: int, u: int, v: int) -> bool:
        for w in (u, v):
            if not self.present[w]:
                self.present[w] = True
                self.nodes += 1
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[ru] = rv
        self.extra.append(e)
        return True

    def is_tree(self) -> bool:
        return self.nodes > 0 and len(self.extra) == self.nodes - 1


@dataclass
class CompletionResult:
    """Outcome of completing one triangle assignment to a pair of pieces."""

    pieces: Optional[Tuple[SubcomplexMask, SubcomplexMask]] = None
    explored: int = 0
    pruned: int = 0


class _Completion:
    """Backtracking over the edges the triangle cores leave open.

    A piece made of its triangle closure C and extra edges E collapses exactly
    when every component of C collapses and the graph with the components of C
    and the loose vertices as nodes and E as arcs is a tree. Edges outside both
    cores go to piece 1, piece 2 or both; an edge in one core may also join the
    other piece. Cycles are cut as soon as they close.
    """

    def __init__(self, K: Complex2, first: Sequence[int], second: Sequence[int], cap: int):
        self.K = K
        self.triangles = (tuple(first), tuple(second))
        self.cap = cap
        self.result = CompletionResult()
        self.cores = (SubcomplexMask.closure_of(K, triangles=first), SubcomplexMask.closure_of(K, triangles=second))
        self.choices = []
        for e in range(K.num_edges):
            in_one, in_two = bool(self.cores[0].edges[e]), bool(self.cores[1].edges[e])
            if in_one and in_two:
                continue
            if in_one:
                self.choices.append((e, ((), (1,))))
            elif in_two:
                self.choices.append((e, ((), (0,))))
            else:
                self.choices.append((e, ((0,), (1,), (0, 1))))

    def _stop(self) -> bool:
        return self.result.explored > self.cap

    def _dead_end(self) -> None:
        self.result.explored += 1
        self.result.pruned += 1

    def run(self) -> CompletionResult:
        groups = []
        for triangles in self.triangles:
            parts = core_components(self.K, triangles)
            if not all(is_collapsible(self.K, part) for part in parts):
                self._dead_end()
                return self.result
            groups.append(parts)
        forests = tuple(_Forest(self.K.num_vertices, parts) for parts in groups)
        found = self._extend(0, forests)
        if found is not None:
            self.result.pieces = tuple(
                SubcomplexMask.closure_of(
                    self.K,
                    vertices=[v for v, flag in enumerate(forest.present) if flag],
                    edges=forest.extra,
                    triangles=triangles,
                )
                for forest, triangles in zip(found, self.triangles)
            )
        return self.result

    def _extend(self, index: int, forests: Tuple[_Forest, _Forest]) -> Optional[Tuple[_Forest, _Forest]]:
        if index == len(self.choices):
            self.result.explored += 1
            if forests[0].is_tree() and forests[1].is_tree():
                return forests
            self.result.pruned += 1
            return None
        e, options = self.choices[index]
        u, v = self.K.edges[e]
        progressed = False
        for option in options:
            grown = list(forests)
            for side in option:
                grown[side] = grown[side].copy()
                if not grown[side].add(e, u, v):
                    break
            else:
                progressed = True
                found = self._extend(index + 1, (grown[0], grown[1]))
                if found is not None or self._stop():
                    return found
        if not progressed:
            self._dead_end()
        return None


def complete_cover(
    K: Complex2, first: Sequence[int], second: Sequence[int], cap: Optional[int] = None
) -> CompletionResult:
    """Completes two triangle sets to collapsible pieces covering K, if any completion exists.

    `explored` counts leaves and dead ends; the walk stops once it exceeds
    `cap`. K must be connected with at least one edge.
    """
    return _Completion(K, first, second, DEFAULT_BUDGET if cap is None else cap).run()


def search_cover_two(K: Complex2, budget: Optional[int] = None, threads: int = 1) -> CoverSearchResult:
    """Looks for two collapsible subcomplexes of this triangulation (or a seven-part refinement) covering it.

    Tries in turn: K itself, two disjoint Hachimori removal sets, the shelling
    construction, and finally an exhaustive search over triangle assignments,
    each completed by backtracking over the edges the triangles leave open.
    `budget` caps the leaves and dead ends that search visits.

    Raises:
        NotConnected: If K has several components.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    pieces = components(K)
    if pieces != 1:
        raise NotConnected(pieces)
    result = CoverSearchResult()
    full = SubcomplexMask.full(K)

    verdict = is_collapsible(K)
    if verdict:
        result.status = FOUND
        result.certificate = CoverCertificate(K, (full, full), (verdict.certificate, verdict.certificate))
        result.evidence.append("complex is collapsible")
        return result

    witnesses = list(itertools.islice(removal_witnesses(K, budget), MAX_LADDER_WITNESSES))
    result.evidence.append(f"{len(witnesses)} removal witnesses")
    for i, W1 in enumerate(witnesses):
        for W2 in witnesses[i + 1:]:
            if set(W1) & set(W2):
                continue
            first, second = full.without_triangles(W1), full.without_triangles(W2)
            result.status = FOUND
            result.certificate = CoverCertificate(
                K, (first, second), (_collapse_or_fail(K, first, "piece 1"), _collapse_or_fail(K, second, "piece 2"))
            )
            result.evidence.append(f"disjoint removal witnesses {W1} and {W2}")
            return result

    shelling_cover = cover_via_shelling(K, budget)
    if shelling_cover is not None:
        result.status = FOUND
        result.certificate = shelling_cover
        result.evidence.append("cover built from a shellable subdivision")
        return result

    def evaluate(assignment):
        completion = complete_cover(K, *assignment, cap=budget)
        if completion.pieces is None:
            return completion, None
        one, two = completion.pieces
        certificates = (_collapse_or_fail(K, one, "piece 1"), _collapse_or_fail(K, two, "piece 2"))
        return completion, CoverCertificate(K, (one, two), certificates)

    for assignment, (completion, certificate) in _evaluate_in_order(evaluate, _assignments(K.num_triangles), threads):
        if result.tested + completion.explored > budget:
            result.status = UNKNOWN
            result.tested = budget
            result.evidence.append(f"budget of {budget} candidate completions exhausted")
            logger.info(f"Cover search gave up after {budget} candidate completions")
            return result
        result.tested += completion.explored
        result.pruned += completion.pruned
        if certificate is not None:
            result.status = FOUND
            result.certificate = certificate
            result.evidence.append(f"exhaustive search found pieces with triangles {assignment[0]} and {assignment[1]}")
            return result
    result.status = NOT_ON_THIS_TRIANGULATION
    result.evidence.append(f"exhaustive search over {result.tested} candidate completions found no cover")
    return result


def _removal_sets(on_cycles: Sequence[int], b2: int, start: Tuple[int, ...] = ()) -> Iterator[Tuple[int, ...]]:
    """Triangle sets of size at most b2 drawn from the 2-cycle support, by size then lexicographically, from `start` on."""
    for size in range(len(start), b2 + 1):
        combos = itertools.combinations(on_cycles, size)
        if size == len(start):
            combos = itertools.dropwhile(lambda W: W < start, combos)
        yield from combos


class _EnrichedSearch:
    def __init__(self, Kp: ComplexPlus, budget: int):
        self.Kp = Kp
        self.budget = budget
        self.result = CoverSearchResult()
        self.exhausted = False

    def pairs(self) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        K = self.Kp.base
        on_cycles = [t for t, flag in enumerate(cycle_support(K)) if flag]
        b2 = betti(K)[2]
        for W1 in _removal_sets(on_cycles, b2):
            for W2 in _removal_sets(on_cycles, b2, W1):
                if not set(W1) & set(W2):
                    yield W1, W2

    def evaluate(self, pair):
        Kp = self.Kp
        full = SubcomplexMask.full(Kp.base)
        first = enriched_piece(Kp, full.without_triangles(pair[0]), 1)
        second = enriched_piece(Kp, full.without_triangles(pair[1]), 2)
        reason = screen_enriched_pair(Kp, first, second)
        if reason is not None:
            return reason, None
        if first.reduced_euler() != 0 or second.reduced_euler() != 0:
            return "reduced Euler characteristic is not zero", None
        one = is_collapsible(Kp.complex, first)
        if not one:
            return "collapse", None
        two = is_collapsible(Kp.complex, second)
        if not two:
            return "collapse", None
        return FOUND, CoverCertificate(Kp.complex, (first, second), (one.certificate, two.certificate))

    def covers(self, threads: int = 1) -> Iterator[CoverCertificate]:
        result = self.result
        candidates = itertools.islice(self.pairs(), self.budget + 1)
        for pair, (outcome, certificate) in _evaluate_in_order(self.evaluate, candidates, threads):
            if result.tested == self.budget:
                self.exhausted = True
                return
            result.tested += 1
            if outcome == FOUND:
                result.evidence.append(f"removal sets {pair[0]} and {pair[1]} give a cover")
                yield certificate
            elif outcome != "collapse":
                result.pruned += 1
                logger.debug(f"Pruned removal sets {pair}: {outcome}")


def _require_enriched(Kp: Any) -> None:
    if not isinstance(Kp, ComplexPlus) or not check_enriched(Kp):
        raise NotEnriched()


def iter_enriched_covers(Kp: ComplexPlus, budget: Optional[int] = None) -> Iterator[CoverCertificate]:
    """Every cover found by the enriched search, in enumeration order."""
    _require_enriched(Kp)
    search = _EnrichedSearch(Kp, DEFAULT_BUDGET if budget is None else budget)
    yield from search.covers()


def search_cover_two_enriched(Kp: ComplexPlus, budget: Optional[int] = None, threads: int = 1) -> CoverSearchResult:
    """Cover search on an enriched complex.

    Base pieces are K minus removal sets of size at most b2 taken from the
    2-cycle support; piece 1 receives every A1 annulus and piece 2 every A2
    annulus. Pairs are screened by coverage, by the torus test at every base
    triangle and by the reduced Euler characteristic before any collapse runs.

    Raises:
        NotEnriched: If Kp was not produced by enrich.
    """
    _require_enriched(Kp)
    search = _EnrichedSearch(Kp, DEFAULT_BUDGET if budget is None else budget)
    result = search.result
    for certificate in search.covers(threads):
        result.status = FOUND
        result.certificate = certificate
        return result
    if search.exhausted:
        result.status = UNKNOWN
        result.evidence.append(f"budget of {search.budget} candidate pairs exhausted")
    else:
        result.status = NOT_ON_THIS_TRIANGULATION
        result.evidence.append(f"all {result.tested} removal-set pairs rejected")
    return result


def plgcat_bounds(K: Union[Complex2, ComplexPlus], budget: Optional[int] = None, threads: int = 1) -> PlgcatVerdict:
    """Bounds plgcat of a connected 2-complex (or of an enriched complex).

    Returns [1, 1] for collapsible input, [2, 2] when a cover by two
    collapsible pieces is found, and [2, 3] otherwise.

    Raises:
        NotConnected: If the complex has several components.
    """
    enriched = K if isinstance(K, ComplexPlus) else None
    target = enriched.complex if enriched is not None else K
    verdict = is_collapsible(target)
    if verdict:
        certificate = CoverCertificate(target, (SubcomplexMask.full(target),), (verdict.certificate,))
        return PlgcatVerdict(EXACTLY_1, 1, 1, certificate, reason="collapsible")
    b = betti(target)
    reason = "not collapsible" if b == (1, 0, 0) else f"not collapsible (betti numbers {b[0]}, {b[1]}, {b[2]})"
    if enriched is not None:
        search = search_cover_two_enriched(enriched, budget, threads)
    else:
        search = search_cover_two(target, budget, threads)
    evidence = [f"betti numbers {b}", f"cover search {search.status}: tested {search.tested}, pruned {search.pruned}"]
    evidence += search.evidence
    if search:
        return PlgcatVerdict(AT_MOST_2, 2, 2, search.certificate, reason, evidence)
    return PlgcatVerdict(AT_LEAST_2, 2, 3, None, f"{reason}; no cover by two collapsible pieces found", evidence)
