import numpy as np
import pytest

from plcover import catalog
from plcover.complex_core import Complex2, SubcomplexMask
from plcover.errors import DimensionMismatch, NotACycle, SpheresNotDisjoint
from plcover.homology import (
    Chain,
    betti,
    boundary,
    boundary_matrix,
    cycle_support,
    filling,
    h2_supported_only_on,
    is_nullhomologous,
    kernel_basis,
    kernel_basis_2,
    rank,
    row_reduce,
)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("point", (1, 0, 0)),
        ("triangle", (1, 0, 0)),
        ("tetrahedron_boundary", (1, 0, 1)),
        ("cycle_graph", (1, 1, 0)),
        ("annulus", (1, 1, 0)),
        ("dunce_hat", (1, 0, 0)),
    ],
)
def test_betti(name, expected):
    assert betti(catalog.CATALOG[name]()) == expected


def test_euler_relation(random_complex):
    b0, b1, b2 = betti(random_complex)
    K = random_complex
    assert b0 - b1 + b2 == K.num_vertices - K.num_edges + K.num_triangles


def test_boundary_squares_to_zero(sphere):
    product = boundary_matrix(sphere, 1).astype(int) @ boundary_matrix(sphere, 2).astype(int)
    assert not (product % 2).any()


def test_row_reduce_and_kernel():
    matrix = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    R, pivots = row_reduce(matrix)
    assert pivots == [0, 1]
    assert rank(matrix) == 2
    basis = kernel_basis(matrix)
    assert basis.shape == (1, 3)
    assert not ((matrix.astype(int) @ basis[0].astype(int)) % 2).any()


def test_chain_arithmetic(sphere):
    first = Chain.from_ids(sphere, 2, [0, 1])
    second = Chain.from_ids(sphere, 2, [1, 2])
    assert (first + second).ids() == [0, 2]
    assert (first + first).is_zero()
    with pytest.raises(DimensionMismatch):
        first + Chain.zero(sphere, 1)


def test_boundary_of_sphere_is_zero(sphere):
    assert boundary(sphere, Chain.from_ids(sphere, 2, range(4))).is_zero()
    edge_boundary = boundary(sphere, Chain.from_faces(sphere, [("a", "b")]))
    assert edge_boundary.faces(sphere) == [("a",), ("b",)]
    with pytest.raises(DimensionMismatch):
        boundary(sphere, Chain.zero(sphere, 0))


def test_sphere_cycles(sphere):
    basis = kernel_basis_2(sphere)
    assert len(basis) == 1
    assert basis[0].ids() == [0, 1, 2, 3]
    assert cycle_support(sphere).all()
    disc = SubcomplexMask.full(sphere).without_triangles([0])
    assert kernel_basis_2(sphere, disc) == []
    assert not cycle_support(sphere, disc).any()


def test_filling(sphere):
    loop = Chain.from_faces(sphere, [("a", "b"), ("b", "c"), ("a", "c")])
    witness = filling(sphere, loop)
    assert witness is not None
    assert boundary(sphere, witness) == loop


def test_longitude_of_annulus_does_not_bound():
    K = catalog.annulus()
    loop = Chain.from_faces(K, [("x0", "x1"), ("x1", "x2"), ("x0", "x2")])
    assert not is_nullhomologous(K, loop)


def test_nullhomology_respects_support(sphere):
    loop = Chain.from_faces(sphere, [("a", "b"), ("b", "c"), ("a", "c")])
    assert is_nullhomologous(sphere, loop)
    abc = sphere.find(("a", "b", "c"))[1]
    outside = SubcomplexMask.full(sphere).without_triangles([abc])
    verdict = is_nullhomologous(sphere, loop, outside)
    assert verdict
    assert abc not in verdict.witness.ids()
    only_edges = SubcomplexMask.full(sphere).without_triangles(range(4))
    assert not is_nullhomologous(sphere, loop, only_edges)


def test_nullhomology_errors(sphere):
    with pytest.raises(NotACycle):
        is_nullhomologous(sphere, Chain.from_faces(sphere, [("a", "b")]))
    with pytest.raises(DimensionMismatch):
        is_nullhomologous(sphere, Chain.from_ids(sphere, 2, [0]))


def two_spheres(bridge: bool = True) -> Complex2:
    faces = []
    for prefix in "pq":
        s = [f"{prefix}{k}" for k in range(4)]
        faces += [(s[0], s[1], s[2]), (s[0], s[1], s[3]), (s[0], s[2], s[3]), (s[1], s[2], s[3])]
    if bridge:
        faces += [("p0", "m"), ("m", "q0")]
    return Complex2.from_maximal_faces(faces)


def sphere_masks(K: Complex2):
    return [
        SubcomplexMask.from_faces(K, [face for face in K.maximal_faces() if len(face) == 3 and face[0][0] == prefix])
        for prefix in "pq"
    ]


def test_h2_generated_by_disjoint_spheres():
    K = two_spheres()
    assert betti(K) == (1, 0, 2)
    assert h2_supported_only_on(K, sphere_masks(K))
    assert not h2_supported_only_on(K, sphere_masks(K)[:1])


def test_h2_spheres_must_be_disjoint(sphere):
    full = SubcomplexMask.full(sphere)
    with pytest.raises(SpheresNotDisjoint):
        h2_supported_only_on(sphere, [full, full])
