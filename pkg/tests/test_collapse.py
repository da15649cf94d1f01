import pytest

from plcover import catalog
from plcover.collapse import (
    CollapseCertificate,
    CollapseStep,
    brute_force_collapsible,
    collapses_to,
    concatenate,
    free_faces,
    greedy_collapse,
    is_collapsible,
    replay,
)
from plcover.complex_core import Complex2, SubcomplexMask, components
from plcover.errors import EmptyComplex, NotConnected, TooLarge

from conftest import random_connected_complex, random_downward_closed_complex


@pytest.mark.parametrize(
    "name, expected",
    [
        ("point", True),
        ("edge", True),
        ("triangle", True),
        ("vertex_wedge", True),
        ("edge_pair", True),
        ("dangling_edge", True),
        ("tetrahedron_boundary", False),
        ("dunce_hat", False),
        ("cycle_graph", False),
        ("annulus", False),
    ],
)
def test_catalog_collapsibility(name, expected):
    K = catalog.CATALOG[name]()
    verdict = is_collapsible(K)
    assert bool(verdict) is expected
    if expected:
        assert replay(K, verdict.certificate)
        assert verdict.certificate.residual.counts() == (1, 0, 0)
    else:
        assert verdict.certificate is None


def test_dunce_hat_has_no_free_face(dunce):
    assert free_faces(dunce) == []
    residual, certificate = greedy_collapse(dunce)
    assert len(certificate) == 0
    assert residual == SubcomplexMask.full(dunce)


def test_free_faces_of_triangle(disc):
    steps = free_faces(disc)
    assert len(steps) == 3
    assert all(step.coface == (2, 0) for step in steps)


def test_protected_faces_are_kept(disc):
    edge = SubcomplexMask.from_faces(disc, [("a", "b")])
    verdict = collapses_to(disc, edge)
    assert verdict
    assert verdict.residual == edge
    assert replay(disc, verdict.certificate)


def test_collapses_to_requires_subset(sphere):
    disc = SubcomplexMask.full(sphere).without_triangles([0])
    other = SubcomplexMask.full(sphere).without_triangles([1])
    assert not collapses_to(sphere, other, support=disc)


def test_sphere_minus_triangle_collapses(sphere):
    for t in range(sphere.num_triangles):
        support = SubcomplexMask.full(sphere).without_triangles([t])
        verdict = is_collapsible(sphere, support)
        assert verdict
        assert replay(sphere, verdict.certificate)


def test_preconditions():
    with pytest.raises(NotConnected):
        is_collapsible(Complex2.from_maximal_faces([("a", "b"), ("c", "d")]))
    with pytest.raises(EmptyComplex):
        is_collapsible(Complex2.from_maximal_faces([]))


def test_replay_rejects_tampering(disc):
    verdict = is_collapsible(disc)
    certificate = verdict.certificate
    swapped = CollapseCertificate(
        tuple(reversed(certificate.steps)), certificate.start_digest, certificate.start, certificate.residual
    )
    assert not replay(disc, swapped)
    foreign = CollapseCertificate(certificate.steps, "0" * 64, certificate.start, certificate.residual)
    assert not replay(disc, foreign)
    bogus = CollapseCertificate(
        (CollapseStep((1, 0), (2, 0)), CollapseStep((1, 0), (2, 0))),
        certificate.start_digest,
        certificate.start,
        certificate.residual,
    )
    assert not replay(disc, bogus)


def test_certificate_json(disc):
    certificate = is_collapsible(disc).certificate
    document = certificate.to_json(disc)
    assert document["kind"] == "collapse"
    assert document["start_digest"] == disc.digest()
    K, again = CollapseCertificate.from_json(document)
    assert K == disc
    assert replay(K, again)


def test_concatenate(disc):
    edge = SubcomplexMask.from_faces(disc, [("a", "b")])
    first = collapses_to(disc, edge).certificate
    second = is_collapsible(disc, edge).certificate
    both = concatenate(first, second)
    assert len(both) == len(first) + len(second)
    assert replay(disc, both)


def test_brute_force_on_catalog():
    assert brute_force_collapsible(catalog.triangle())
    assert not brute_force_collapsible(catalog.tetrahedron_boundary())
    assert not brute_force_collapsible(catalog.cycle_graph())
    K = catalog.triangle()
    assert brute_force_collapsible(K, L=SubcomplexMask.from_faces(K, [("b", "c")]))


def test_brute_force_guard(dunce):
    with pytest.raises(TooLarge):
        brute_force_collapsible(dunce, limit=12)


@pytest.mark.parametrize("seed", range(25))
def test_greedy_agrees_with_brute_force(seed):
    K = random_connected_complex(seed, num_triangles=7, closing=0.5)
    assert bool(is_collapsible(K)) == brute_force_collapsible(K)


@pytest.mark.parametrize("seed", range(40))
def test_greedy_agrees_with_brute_force_on_impure_complexes(seed):
    K = random_downward_closed_complex(seed, steps=7)
    assert bool(is_collapsible(K)) == brute_force_collapsible(K), K.maximal_faces()


def test_stray_vertices_block_collapse():
    for seed in range(20):
        K = random_downward_closed_complex(seed, steps=6, isolated=0.3)
        residual, _ = greedy_collapse(K)
        assert (residual.counts() == (1, 0, 0)) == brute_force_collapsible(K)
        if components(K) > 1:
            assert not brute_force_collapsible(K)
            with pytest.raises(NotConnected):
                is_collapsible(K)


def test_random_tree_of_triangles_collapses(random_complex):
    if random_complex.num_vertices == random_complex.num_triangles + 2:
        assert is_collapsible(random_complex)
