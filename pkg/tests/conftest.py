import itertools

import numpy as np
import pytest

from plcover import catalog
from plcover.complex_core import Complex2


def random_connected_complex(seed: int, num_triangles: int = 6, closing: float = 0.3) -> Complex2:
    """A connected pure 2-complex grown triangle by triangle.

    Each step either glues a triangle with a fresh apex onto an existing edge
    or, with probability `closing`, spans a triangle on existing vertices that
    shares an edge with the complex.
    """
    rng = np.random.default_rng(seed)
    faces = [("v0", "v1", "v2")]
    edges = [("v0", "v1"), ("v0", "v2"), ("v1", "v2")]
    fresh = 3
    while len(faces) < num_triangles:
        u, v = edges[int(rng.integers(len(edges)))]
        if rng.random() < closing and fresh > 3:
            w = f"v{int(rng.integers(fresh))}"
            candidate = tuple(sorted((u, v, w)))
            if w in (u, v) or candidate in {tuple(sorted(f)) for f in faces}:
                continue
        else:
            w = f"v{fresh}"
            fresh += 1
        faces.append((u, v, w))
        for pair in ((u, w), (v, w)):
            if pair not in edges and pair[::-1] not in edges:
                edges.append(pair)
    return Complex2.from_maximal_faces(faces)


def random_downward_closed_complex(seed: int, steps: int = 8, isolated: float = 0.0) -> Complex2:
    """A possibly impure 2-complex grown from a single vertex.

    Each step glues a triangle onto an edge, spans an edge or a triangle on
    existing vertices, or hangs an edge or a triangle from one vertex. With
    probability `isolated` a step adds a vertex touching nothing instead, so
    the result is connected only when `isolated` is zero.
    """
    rng = np.random.default_rng(seed)
    faces = [("v0",)]
    vertices = ["v0"]
    edges = []
    known = set()

    def fresh() -> str:
        vertices.append(f"v{len(vertices)}")
        return vertices[-1]

    def add(face: tuple) -> None:
        faces.append(face)
        for pair in itertools.combinations(face, 2):
            if frozenset(pair) not in known:
                known.add(frozenset(pair))
                edges.append(pair)
        known.add(frozenset(face))

    for _ in range(steps):
        if rng.random() < isolated:
            faces.append((fresh(),))
            continue
        kind = int(rng.integers(5))
        if kind == 0 and edges:
            u, v = edges[int(rng.integers(len(edges)))]
            add((u, v, fresh()))
        elif kind in (1, 2) and len(vertices) > kind:
            picked = tuple(str(x) for x in rng.choice(vertices, size=kind + 1, replace=False))
            if frozenset(picked) not in known:
                add(picked)
        elif kind == 3:
            add((vertices[int(rng.integers(len(vertices)))], fresh()))
        elif kind == 4:
            apex = vertices[int(rng.integers(len(vertices)))]
            add((apex, fresh(), fresh()))
    return Complex2.from_maximal_faces(faces)


@pytest.fixture
def sphere():
    return catalog.tetrahedron_boundary()


@pytest.fixture
def dunce():
    return catalog.dunce_hat()


@pytest.fixture
def disc():
    return catalog.triangle()


@pytest.fixture(params=range(20))
def random_complex(request):
    return random_connected_complex(request.param)
