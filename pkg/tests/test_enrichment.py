import pytest

from plcover import catalog
from plcover.collapse import collapses_to, is_collapsible, replay
from plcover.complex_core import Complex2, SubcomplexMask
from plcover.enrichment import (
    check_enriched,
    cover_from_pair,
    enrich,
    enriched_piece,
    grid_triangles,
    interior_label,
    lift_base_mask,
    screen_enriched_pair,
    torus_block,
    torus_obstruction,
    torus_screen,
)
from plcover.errors import LabelCollision, NotACover, PreconditionViolation
from plcover.homology import betti


def test_torus_block():
    block = torus_block()
    T = block.complex
    assert (T.num_vertices, T.num_edges, T.num_triangles) == (9, 27, 18)
    assert betti(T) == (1, 2, 1)
    assert block.longitude.counts() == (3, 3, 0)
    first, second = block.annuli
    assert first.counts()[2] == 6 and second.counts()[2] == 12
    assert (first | second) == SubcomplexMask.full(T)
    for annulus in block.annuli:
        assert betti(T, annulus) == (1, 1, 0)
        assert collapses_to(T, block.longitude, support=annulus)


def test_torus_block_rejects_repeated_labels():
    with pytest.raises(LabelCollision):
        torus_block(("a", "b", "a"))


def test_grid_is_a_closed_surface():
    T = Complex2.from_maximal_faces(grid_triangles(lambda i, j: f"{i}{j}"))
    assert all(len(T.edge_triangles(e)) == 2 for e in range(T.num_edges))


def test_enrich_triangle(disc):
    Kp = enrich(disc)
    P = Kp.complex
    assert (P.num_vertices, P.num_edges, P.num_triangles) == (9, 27, 19)
    assert check_enriched(Kp)
    assert P.has_label(interior_label(0, 1, 0))
    assert betti(P) == (1, 1, 1)


def test_enrich_sphere(sphere):
    Kp = enrich(sphere)
    P = Kp.complex
    assert (P.num_vertices, P.num_edges, P.num_triangles) == (28, 102, 76)
    assert check_enriched(Kp)
    assert len(Kp.tori) == 4
    for handle in Kp.tori:
        assert handle.longitude.issubset(Kp.base_mask)
        assert (handle.torus & Kp.base_mask) == handle.longitude


def test_enrich_keeps_lower_dimensional_faces():
    K = catalog.dangling_edge()
    Kp = enrich(K)
    assert check_enriched(Kp)
    assert Kp.complex.find(("c", "d")) is not None


def test_enrich_label_collision():
    K = Complex2.from_maximal_faces([("a", "b", "c"), ("c", interior_label(0, 1, 1))])
    with pytest.raises(LabelCollision):
        enrich(K)


def test_enrich_json_names(sphere):
    document = enrich(sphere).to_json()
    names = document["named_subcomplexes"]
    assert "base" in names
    assert "torus:a,b,c" in names and "longitude:a,b,c" in names
    assert len(names) == 1 + 2 * sphere.num_triangles


def test_check_enriched_notices_tampering(disc):
    Kp = enrich(disc)
    broken = type(Kp)(Kp.complex, Kp.base, Kp.base_mask, ())
    assert not check_enriched(broken)


def test_lift_base_mask(sphere):
    Kp = enrich(sphere)
    lifted = lift_base_mask(Kp, SubcomplexMask.full(sphere))
    assert lifted == Kp.base_mask
    assert lifted.counts() == (4, 6, 4)


def test_cover_from_pair_on_sphere(sphere):
    Kp = enrich(sphere)
    full = SubcomplexMask.full(sphere)
    cover = cover_from_pair(Kp, full.without_triangles([0]), full.without_triangles([1]))
    assert (cover.first | cover.second) == SubcomplexMask.full(Kp.complex)
    for piece, certificate in zip((cover.first, cover.second), cover.certificates):
        assert certificate.start == piece
        assert certificate.residual.counts() == (1, 0, 0)
        assert replay(Kp.complex, certificate)


def test_cover_from_pair_preconditions(sphere):
    Kp = enrich(sphere)
    full = SubcomplexMask.full(sphere)
    with pytest.raises(PreconditionViolation) as info:
        cover_from_pair(Kp, full.without_triangles([0]), full.without_triangles([0]))
    assert info.value.clause == "cover"
    edges_only = full.without_triangles(range(4))
    with pytest.raises(PreconditionViolation) as info:
        cover_from_pair(Kp, SubcomplexMask.closure_of(sphere, triangles=[0]), full)
    assert info.value.clause == "1-skeleton"
    with pytest.raises(PreconditionViolation) as info:
        cover_from_pair(Kp, full, edges_only)
    assert info.value.clause == "collapsible"


def test_enriched_pieces_of_triangle(disc):
    Kp = enrich(disc)
    full = SubcomplexMask.full(disc)
    first, second = enriched_piece(Kp, full, 1), enriched_piece(Kp, full, 2)
    assert screen_enriched_pair(Kp, first, second) is None
    assert is_collapsible(Kp.complex, first)
    assert is_collapsible(Kp.complex, second)


def test_torus_screen_rejects_missing_longitude(sphere):
    Kp = enrich(sphere)
    full = SubcomplexMask.full(Kp.complex)
    assert torus_screen(Kp, full, SubcomplexMask.empty(Kp.complex), 0) == "longitude not in both pieces"


def test_torus_screen_needs_a_filling_outside_the_torus(sphere):
    Kp = enrich(sphere)
    tau = 0
    handle = Kp.torus(tau)
    full = SubcomplexMask.full(Kp.complex)
    # without base triangles nothing outside the torus fills the longitude
    no_base = full.without_triangles(
        [t for t in range(Kp.complex.num_triangles) if Kp.base_mask.triangles[t]]
    )
    reason = torus_screen(Kp, no_base, full, tau)
    assert reason == "longitude does not bound in piece 1 outside the torus"
    assert torus_screen(Kp, full, full, tau) is None
    assert handle.longitude.issubset(no_base)


def test_torus_obstruction_requires_cover(sphere):
    Kp = enrich(sphere)
    base = Kp.base_mask
    with pytest.raises(NotACover):
        torus_obstruction(Kp, base, base, 0)
    full = SubcomplexMask.full(Kp.complex)
    assert torus_obstruction(Kp, full, full, 0)


def test_screen_enriched_pair_reports_coverage(sphere):
    Kp = enrich(sphere)
    base = Kp.base_mask
    assert screen_enriched_pair(Kp, base, base) == "pieces do not cover K+"
