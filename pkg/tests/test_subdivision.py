import numpy as np
import pytest

from plcover import catalog
from plcover.collapse import is_collapsible
from plcover.complex_core import Complex2, SubcomplexMask, reduced_euler
from plcover.errors import InvalidTriangle, LabelCollision, MapMismatch
from plcover.homology import betti
from plcover.subdivision import (
    barycenter_label,
    barycentric,
    compose,
    corner_label,
    corresponding_subcomplex,
    identity_subdivision,
    seven_part,
)

from conftest import random_connected_complex


def test_barycentric_counts(disc):
    m = barycentric(disc)
    K = m.child
    assert (K.num_vertices, K.num_edges, K.num_triangles) == (7, 12, 6)
    assert K.has_label(barycenter_label(("a", "b", "c")))
    assert K.has_label("<a,b>")
    assert m.is_consistent()


def test_barycentric_preserves_topology(sphere, dunce):
    for K in (sphere, dunce, catalog.dangling_edge(), catalog.cycle_graph()):
        child = barycentric(K).child
        assert betti(child) == betti(K)
        assert reduced_euler(child) == reduced_euler(K)


def test_barycentric_of_dunce_hat_is_not_collapsible(dunce):
    assert not is_collapsible(barycentric(dunce).child)


def test_barycentric_label_collision():
    K = Complex2.from_maximal_faces([("a", "b", "<a,b>")])
    with pytest.raises(LabelCollision):
        barycentric(K)


def test_carriers(disc):
    m = barycentric(disc)
    child = m.child
    assert m.carrier_of(child.find(("a",))) == disc.find(("a",))
    assert m.carrier_of(child.find(("a", "<a,b>"))) == disc.find(("a", "b"))
    assert m.carrier_of(child.find(("a", "<a,b>", "<a,b,c>"))) == disc.find(("a", "b", "c"))


def test_seven_part_of_triangle(disc):
    m, middle = seven_part(disc, 0)
    K = m.child
    assert (K.num_vertices, K.num_edges, K.num_triangles) == (6, 12, 7)
    corners = tuple(corner_label(x, ("a", "b", "c")) for x in "abc")
    assert K.labels((2, middle)) == tuple(sorted(corners, key=K.vertex_id))
    for edge in (("a", "b"), ("b", "c"), ("a", "c")):
        assert K.find(edge) is not None
    assert m.is_consistent()
    assert is_collapsible(K)
    ring = SubcomplexMask.full(K).without_triangles([middle])
    assert betti(K, ring) == (1, 1, 0)


def test_seven_part_leaves_the_rest_alone(sphere):
    m, _ = seven_part(sphere, 2)
    assert m.child.num_triangles == sphere.num_triangles + 6
    untouched = [t for t in range(sphere.num_triangles) if t != 2]
    for t in untouched:
        ref = m.child.find(sphere.labels((2, t)))
        assert ref is not None
        assert m.carrier_of(ref) == (2, t)
    assert betti(m.child) == betti(sphere)


def test_seven_part_errors(disc):
    with pytest.raises(InvalidTriangle):
        seven_part(disc, 5)
    with pytest.raises(InvalidTriangle):
        seven_part(disc, -1)
    K = Complex2.from_maximal_faces([("a", "b", "c"), ("a", corner_label("a", ("a", "b", "c")))])
    with pytest.raises(LabelCollision):
        seven_part(K, 0)


def test_corresponding_subcomplex(disc):
    m = barycentric(disc)
    edge = SubcomplexMask.from_faces(disc, [("a", "b")])
    image = corresponding_subcomplex(m, edge)
    assert image.is_valid(m.child)
    assert image.counts() == (3, 2, 0)
    assert corresponding_subcomplex(m, SubcomplexMask.full(disc)) == SubcomplexMask.full(m.child)


def test_compose(disc):
    first, _ = seven_part(disc, 0)
    second = barycentric(first.child)
    both = compose(first, second)
    assert both.parent == disc
    assert both.child == second.child
    assert both.is_consistent()
    with pytest.raises(MapMismatch):
        compose(second, first)


def test_identity_subdivision(sphere):
    m = identity_subdivision(sphere)
    assert m.is_consistent()
    assert compose(m, m).carrier == m.carrier


@pytest.mark.parametrize("seed", range(10))
def test_compose_is_associative(seed):
    rng = np.random.default_rng(seed)
    K = random_connected_complex(seed, num_triangles=4)
    first, _ = seven_part(K, int(rng.integers(K.num_triangles)))
    second = barycentric(first.child)
    third, _ = seven_part(second.child, int(rng.integers(second.child.num_triangles)))
    left = compose(compose(first, second), third)
    right = compose(first, compose(second, third))
    assert left.carrier == right.carrier
    assert left.is_consistent()
    for ref, middle in third.carrier.items():
        assert left.carrier_of(ref) == first.carrier_of(second.carrier_of(middle))
