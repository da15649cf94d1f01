import itertools

import pytest

from plcover import catalog
from plcover.collapse import is_collapsible
from plcover.complex_core import Complex2, SubcomplexMask
from plcover.enrichment import enrich
from plcover.errors import NotConnected, NotEnriched
from plcover.plgcat import (
    AT_LEAST_2,
    AT_MOST_2,
    EXACTLY_1,
    FOUND,
    NOT_ON_THIS_TRIANGULATION,
    UNKNOWN,
    CoverCertificate,
    _assignments,
    complete_cover,
    core_components,
    cover_via_shelling,
    extend_to_spanning_tree,
    iter_enriched_covers,
    plgcat_bounds,
    plgcat_is_one,
    search_cover_two,
    search_cover_two_enriched,
    verify_cover_certificate,
)


def test_plgcat_is_one(disc, sphere, dunce):
    assert plgcat_is_one(disc)
    assert plgcat_is_one(catalog.vertex_wedge())
    assert not plgcat_is_one(sphere)
    assert not plgcat_is_one(dunce)


def test_bounds_of_collapsible(disc):
    verdict = plgcat_bounds(disc)
    assert verdict.status == EXACTLY_1
    assert (verdict.lower, verdict.upper) == (1, 1)
    assert verify_cover_certificate(verdict.certificate)
    assert verdict.to_json()["interval"] == [1, 1]


def test_bounds_of_sphere(sphere):
    verdict = plgcat_bounds(sphere)
    assert verdict.status == AT_MOST_2
    assert (verdict.lower, verdict.upper) == (2, 2)
    assert len(verdict.certificate.pieces) == 2
    assert verify_cover_certificate(verdict.certificate)


def test_sphere_cover_uses_disjoint_witnesses(sphere):
    result = search_cover_two(sphere)
    assert result
    assert result.status == FOUND
    assert "disjoint removal witnesses (0,) and (1,)" in result.evidence
    first, second = result.certificate.pieces
    assert first == SubcomplexMask.full(sphere).without_triangles([0])
    assert second == SubcomplexMask.full(sphere).without_triangles([1])


def test_cover_via_shelling_on_sphere(sphere):
    certificate = cover_via_shelling(sphere)
    L = certificate.complex
    assert (L.num_vertices, L.num_triangles) == (7, 10)
    assert certificate.subdivision is not None
    assert certificate.subdivision.parent == sphere
    assert certificate.subdivision.is_consistent()
    assert verify_cover_certificate(certificate)
    middle_piece = certificate.pieces[1]
    assert middle_piece.counts()[2] == 1


def test_cover_via_shelling_on_collapsible_input(disc):
    certificate = cover_via_shelling(disc)
    assert certificate.subdivision is None
    assert verify_cover_certificate(certificate)


def test_cover_via_shelling_declines_graph_cycles():
    assert cover_via_shelling(catalog.cycle_graph()) is None


def test_cycle_is_covered_by_two_trees():
    K = catalog.cycle_graph()
    result = search_cover_two(K)
    assert result.status == FOUND
    assert result.tested == 1
    assert [piece.counts() for piece in result.certificate.pieces] == [(4, 3, 0), (2, 1, 0)]
    assert verify_cover_certificate(result.certificate)


def test_search_is_thread_independent():
    K = catalog.cycle_graph(6)
    serial = search_cover_two(K, threads=1)
    parallel = search_cover_two(K, threads=4)
    assert serial.status == parallel.status == FOUND
    assert serial.certificate.pieces == parallel.certificate.pieces
    assert serial.tested == parallel.tested


def test_dunce_hat_search_runs_out_of_budget(dunce):
    result = search_cover_two(dunce, budget=20)
    assert result.status == UNKNOWN
    assert result.tested == 20
    verdict = plgcat_bounds(dunce, budget=20)
    assert verdict.status == AT_LEAST_2
    assert (verdict.lower, verdict.upper) == (2, 3)
    assert verdict.certificate is None


def test_annulus_search_is_sound():
    K = catalog.annulus()
    result = search_cover_two(K, budget=2_000)
    assert result.status in (FOUND, NOT_ON_THIS_TRIANGULATION, UNKNOWN)
    if result:
        assert verify_cover_certificate(result.certificate)


def test_search_requires_connected():
    K = Complex2.from_maximal_faces([("a", "b", "c"), ("d", "e")])
    with pytest.raises(NotConnected):
        search_cover_two(K)
    with pytest.raises(NotConnected):
        plgcat_bounds(K)


def test_spanning_trees():
    K = catalog.cycle_graph()
    assert extend_to_spanning_tree(K, []) == [0, 1, 2]
    assert extend_to_spanning_tree(K, [3]) == [0, 1, 3]
    assert extend_to_spanning_tree(K, [0, 1, 2, 3]) is None


def test_spanning_tree_starts_at_smallest_label():
    K = Complex2.from_maximal_faces([("b", "c"), ("c", "a"), ("a", "b"), ("b", "d")])
    tree = extend_to_spanning_tree(K, [])
    assert {frozenset(K.labels((1, e))) for e in tree} == {frozenset("ab"), frozenset("ac"), frozenset("bd")}


def test_assignments_put_partitions_first():
    assignments = list(_assignments(2))
    assert assignments[:2] == [((0, 1), ()), ((0,), (1,))]
    assert len(assignments) == 2 + (3 ** 2 - 2 ** 2)
    for first, second in assignments:
        assert set(first) | set(second) == {0, 1}
    assert list(_assignments(0)) == [((), ())]


def test_core_components():
    K = Complex2.from_maximal_faces([("a", "b", "c"), ("d", "e", "f"), ("c", "d")])
    parts = core_components(K, (0, 1))
    assert [part.counts() for part in parts] == [(3, 3, 1), (3, 3, 1)]
    assert core_components(K, ()) == []


def complete_graph(n: int) -> Complex2:
    return Complex2.from_maximal_faces(itertools.combinations([str(i) for i in range(n)], 2))


def test_complete_cover_backtracks_over_graph_edges():
    K = complete_graph(4)
    completion = complete_cover(K, (), ())
    assert (completion.explored, completion.pruned) == (2, 1)
    one, two = completion.pieces
    assert [K.labels((1, int(e))) for e in one.edges.nonzero()[0]] == [("0", "1"), ("0", "2"), ("1", "3")]
    assert [K.labels((1, int(e))) for e in two.edges.nonzero()[0]] == [("0", "3"), ("1", "2"), ("2", "3")]


def test_complete_cover_rejects_uncollapsible_core(dunce):
    completion = complete_cover(dunce, tuple(range(dunce.num_triangles)), ())
    assert completion.pieces is None
    assert (completion.explored, completion.pruned) == (1, 1)


def test_complete_graph_is_covered_by_two_paths():
    K = complete_graph(4)
    result = search_cover_two(K)
    assert result.status == FOUND
    assert verify_cover_certificate(result.certificate)
    assert plgcat_bounds(K).to_json()["interval"] == [2, 2]


def test_complete_graph_with_triangle_is_covered():
    K = Complex2.from_maximal_faces(list(complete_graph(4).maximal_faces()) + [("0", "x", "y")])
    result = search_cover_two(K)
    assert result.status == FOUND
    assert verify_cover_certificate(result.certificate)
    assert any(piece.counts()[2] == 1 for piece in result.certificate.pieces)
    verdict = plgcat_bounds(K)
    assert verdict.status == AT_MOST_2
    assert (verdict.lower, verdict.upper) == (2, 2)


def test_certificate_json_round_trip(sphere):
    certificate = search_cover_two(sphere).certificate
    again = CoverCertificate.from_json(certificate.to_json())
    assert verify_cover_certificate(again)


def test_verify_rejects_partial_cover(sphere):
    certificate = search_cover_two(sphere).certificate
    partial = CoverCertificate(sphere, certificate.pieces[:1], certificate.certificates[:1])
    assert not verify_cover_certificate(partial)
    mismatched = CoverCertificate(sphere, certificate.pieces, certificate.certificates[::-1])
    assert not verify_cover_certificate(mismatched)


def test_enriched_triangle(disc):
    Kp = enrich(disc)
    result = search_cover_two_enriched(Kp)
    assert result.status == FOUND
    assert verify_cover_certificate(result.certificate)
    verdict = plgcat_bounds(Kp)
    assert verdict.status == AT_MOST_2


def test_enriched_sphere(sphere):
    Kp = enrich(sphere)
    result = search_cover_two_enriched(Kp)
    assert result.status == FOUND
    assert "removal sets (0,) and (1,) give a cover" in result.evidence
    assert result.pruned > 0
    assert verify_cover_certificate(result.certificate)
    covers = list(iter_enriched_covers(Kp))
    assert len(covers) == 6
    assert all(verify_cover_certificate(cover) for cover in covers)


def test_enriched_search_budget(sphere):
    result = search_cover_two_enriched(enrich(sphere), budget=2)
    assert result.status == UNKNOWN


def test_enriched_search_requires_enrich(sphere):
    with pytest.raises(NotEnriched):
        search_cover_two_enriched(sphere)


@pytest.mark.slow
def test_enriched_dunce_hat(dunce):
    Kp = enrich(dunce)
    assert not is_collapsible(Kp.complex)
    result = search_cover_two_enriched(Kp)
    assert result.status == NOT_ON_THIS_TRIANGULATION
    assert result.tested == 1
    verdict = plgcat_bounds(Kp)
    assert verdict.status == AT_LEAST_2
    assert verdict.to_json()["interval"] == [2, 3]
