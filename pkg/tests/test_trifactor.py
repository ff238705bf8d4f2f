import pytest

from figures import octahedron, tetrahedron
from hexorb.builder import build
from hexorb.trifactor import (
    Factorization,
    FactorizationError,
    check_factorization,
    class_components,
    factorize,
)


def small_ivs(max_km):
    return [(k, m, s) for k in range(1, max_km + 1) for m in range(1, max_km // k + 1) for s in range(m)]


def all_valid_factorizations(R):
    """Every class assignment obeying the successor rule, by plain backtracking."""
    E = R.edge_count
    constraints = [[] for _ in range(E)]
    for d in range(R.dart_count):
        a, b = d >> 1, R.next_ccw(d) >> 1
        constraints[max(a, b)].append((a, b))
    found = []
    cls = [0] * E

    def rec(e):
        if e == E:
            found.append(tuple(cls))
            return
        for q in range(3):
            cls[e] = q
            if all(cls[b] == (cls[a] + 1) % 3 for a, b in constraints[e]):
                rec(e + 1)

    rec(0)
    return found


def test_k4_classes_in_rotation_order():
    R = tetrahedron()
    F = factorize(R)
    assert check_factorization(R, F)
    for v in range(4):
        classes = [F.class_of[d >> 1] for d in R.rotation[v]]
        assert sorted(classes) == [0, 1, 2]
        assert all(classes[(i + 1) % 3] == (classes[i] + 1) % 3 for i in range(3))


def test_anchor_convention():
    R = build((2, 3, 1)).system
    assert factorize(R).class_of[0] == 0
    assert factorize(R, 0, 2).class_of[0] == 2


def test_class_sizes_order_14():
    F = factorize(build((1, 6, 3)).system)
    assert F.sizes() == (12, 12, 12)


def test_octahedron_is_rejected():
    with pytest.raises(FactorizationError):
        factorize(octahedron())


def test_components_inner_path_member():
    D = build((1, 6, 3))
    c = class_components(D.system, D.factorization(), 0)
    assert (c.K, c.M) == (1, 6)
    assert [len(p) - 1 for p in c.paths] == [6, 6] and c.cycles == ()


def test_components_three_layers():
    D = build((3, 2, 0))
    c = class_components(D.system, D.factorization(), 0)
    assert (c.K, c.M) == (3, 2)
    assert [len(cy) for cy in c.cycles] == [4, 4]


def test_components_k4():
    R = tetrahedron()
    F = factorize(R)
    for q in range(3):
        c = class_components(R, F, q)
        assert (c.K, c.M) == (1, 1) and c.cycles == ()


@pytest.mark.parametrize("iv", small_ivs(15))
def test_component_invariants(iv):
    D = build(iv)
    R = D.system
    F = D.factorization()
    assert check_factorization(R, F)
    deg3 = {v for v in range(R.vertex_count) if R.degree(v) == 3}
    products = set()
    for q in range(3):
        c = class_components(R, F, q)
        assert 2 * c.K * c.M + 2 == R.vertex_count
        assert len(c.cycles) == c.K - 1
        assert all(len(cy) == 2 * c.M for cy in c.cycles)
        assert len(F.edges_of(q)) == 2 * c.K * c.M
        assert {p[0] for p in c.paths} | {p[-1] for p in c.paths} == deg3
        products.add(c.K * c.M)
    assert len(products) == 1
    # class-0 components are exactly the builder's layers
    c0 = class_components(R, F, 0)
    comps = {frozenset(p) for p in c0.paths} | {frozenset(cy) for cy in c0.cycles}
    assert comps == {frozenset(layer) for layer in D.layers}


@pytest.mark.parametrize("R", [tetrahedron(), build((1, 3, 1)).system, build((2, 1, 0)).system])
def test_exactly_three_factorizations(R):
    found = set(all_valid_factorizations(R))
    base = factorize(R)
    shifts = {base.shifted(i).class_of for i in range(3)}
    assert found == shifts
    assert {factorize(R, 0, q).class_of for q in range(3)} == shifts


def test_check_rejects_bad_assignment():
    R = tetrahedron()
    assert not check_factorization(R, Factorization((0,) * 6))
    assert not check_factorization(R, Factorization((0, 1)))
