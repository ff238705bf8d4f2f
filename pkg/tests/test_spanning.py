from itertools import combinations

import pytest

from figures import figure_bold_tree, icosahedron, octahedron, tetrahedron
from hexorb.builder import build
from hexorb.indexcalc import orbit
from hexorb.planemap import RotationSystem
from hexorb.spanning import (
    Bipartition,
    CaterpillarCertificate,
    PathCertificate,
    PreconditionError,
    balanced_P,
    bond_limit,
    caterpillar_certificate,
    certificate_to_json,
    end_tree_census,
    enumerate_hamilton_bonds,
    equitable_two_coloring,
    is_hamilton_bond,
    partition_even_caterpillars,
    partition_induced_paths,
    tree_balance_identity,
    verify_certificate,
    verify_partition,
    window_pow2,
    within_3,
)


def ivs(max_km):
    return [(k, m, s) for k in range(1, max_km + 1) for m in range(1, max_km // k + 1) for s in range(m)]


def induces_tree(R, vs):
    """Union-find oracle: |E[S]| = |S| - 1 and no cycle."""
    parent = {v: v for v in vs}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    count = 0
    for u, v in R.edges:
        if u in vs and v in vs:
            count += 1
            a, b = find(u), find(v)
            if a == b:
                return False
            parent[a] = b
    return count == len(vs) - 1


def brute_bonds(R):
    n = R.vertex_count
    out = set()
    for size in range(1, n):
        for rest in combinations(range(1, n), size - 1):
            a = frozenset((0,) + rest)
            b = frozenset(range(n)) - a
            if induces_tree(R, a) and induces_tree(R, b):
                out.add(a)
    return out


def path_graph(n):
    edges = [[i, i + 1] for i in range(n - 1)]
    return RotationSystem.from_edge_rotation(n, edges, [[e for e in (i - 1, i) if 0 <= e < n - 1] for i in range(n)])


# -- Hamilton bonds ----------------------------------------------------------


def test_k4_bonds():
    bonds = list(enumerate_hamilton_bonds(tetrahedron()))
    assert len(bonds) == 3
    assert all(len(b.side_a) == 2 for b in bonds)
    assert {b.side_a for b in bonds} == brute_bonds(tetrahedron())


@pytest.mark.parametrize("iv", ivs(6))
def test_enumeration_matches_brute_force(iv):
    R = build(iv).system
    got = [b.side_a for b in enumerate_hamilton_bonds(R)]
    assert len(got) == len(set(got))
    assert set(got) == brute_bonds(R)


def test_enumeration_on_platonic_solids():
    for R in (octahedron(), icosahedron()):
        got = {b.side_a for b in enumerate_hamilton_bonds(R)}
        assert got == brute_bonds(R)


def test_census_order_8():
    R = build((1, 3, 1)).system
    sizes = sorted(len(b.side_a) for b in enumerate_hamilton_bonds(R))
    for b in enumerate_hamilton_bonds(R):
        a, c = end_tree_census(R, b)
        assert a.order + c.order == 8
        assert tree_balance_identity(R, b)
    assert sizes == sorted(sizes)


def test_census_order_14_balanced():
    R = build((1, 6, 3)).system
    bonds = list(enumerate_hamilton_bonds(R))
    assert bonds
    assert all(tree_balance_identity(R, b) for b in bonds)
    assert all(within_3(R, b) for b in bonds)
    assert any(len(b.side_a) == 7 for b in bonds)
    for b in bonds:
        if len(b.side_a) == 7:
            assert balanced_P(R, b)


def test_bond_minimality():
    # removing any cut edge from a bond cut reconnects the graph
    R = build((2, 3, 1)).system
    for b in list(enumerate_hamilton_bonds(R))[:20]:
        cut = [e for e, (u, v) in enumerate(R.edges) if (u in b.side_a) != (v in b.side_a)]
        assert cut
        assert is_hamilton_bond(R, b)


def test_icosahedron_within_3():
    R = icosahedron()
    assert all(within_3(R, b) for b in enumerate_hamilton_bonds(R))


def test_bipartition_validation():
    R = tetrahedron()
    with pytest.raises(ValueError):
        Bipartition(frozenset(), frozenset({0, 1, 2, 3}))
    with pytest.raises(ValueError):
        Bipartition(frozenset({0, 1}), frozenset({1, 2, 3}))
    with pytest.raises(ValueError):
        Bipartition(frozenset({0}), frozenset({1})).check(R)
    with pytest.raises(ValueError):
        end_tree_census(R, Bipartition.of(R, {0}))
    assert not is_hamilton_bond(R, Bipartition.of(R, {0}))


def test_bond_limit_env(monkeypatch):
    monkeypatch.setenv("HEXORB_BOND_LIMIT", "10")
    assert bond_limit() == 10
    with pytest.raises(ValueError, match="bound"):
        list(enumerate_hamilton_bonds(icosahedron()))
    monkeypatch.delenv("HEXORB_BOND_LIMIT")
    assert bond_limit() == 26


def test_bold_tree_is_a_bond():
    R, _, _, bold = figure_bold_tree()
    p = Bipartition.of(R, bold)
    assert is_hamilton_bond(R, p)
    assert equitable_two_coloring(R, bold) == (4, 2, False)
    assert len(list(enumerate_hamilton_bonds(R))) == 7


# -- power-of-two window --------------------------------------------------


@pytest.mark.parametrize("a, b, m, want", [(2, 4, 9, 2), (3, 4, 9, 4), (5, 7, 9, 5), (1, 1, 3, 1), (3, 3, 7, 3)])
def test_window_pow2(a, b, m, want):
    # the smallest admissible value is returned
    assert window_pow2(a, b, m) == want


def test_window_pow2_errors():
    with pytest.raises(ValueError):
        window_pow2(5, 4, 9)
    with pytest.raises(ValueError):
        window_pow2(3, 3, 13)


def test_window_pow2_exists_on_long_windows():
    for m in range(3, 400):
        length = -(-m // 3) - 1
        for a in range(1, m - length):
            window_pow2(a, a + length, m)


# -- certificates ------------------------------------------------------------


def test_path_certificate_with_chord_rejected():
    R = tetrahedron()
    assert verify_certificate(R, PathCertificate((0, 1, 2))) == (False, "not-induced-path")
    assert verify_certificate(R, PathCertificate((0, 1)))[0]


def test_bold_tree_as_caterpillar_has_odd_legs():
    R, vid, _, bold = figure_bold_tree()
    spine = tuple(vid[n] for n in ("s1", "cd2", "s4", "s3"))
    legs = ((vid["cg"],), (vid["cd"],))
    cert = CaterpillarCertificate(frozenset(bold), spine, legs, 1)
    assert verify_certificate(R, cert) == (False, "odd-leg-order")
    with pytest.raises(ValueError):
        caterpillar_certificate(R, bold)


def test_caterpillar_certificate_negatives():
    D = build((2, 3, 1))
    R = D.system
    T, S = partition_even_caterpillars(D)
    assert verify_certificate(R, T) == (True, "ok")
    assert verify_certificate(R, CaterpillarCertificate(T.vertices, T.spine[:-1], T.legs, 0))[0] is False
    broken = CaterpillarCertificate(T.vertices | {S.spine[0]}, T.spine, T.legs, 0)
    assert verify_certificate(R, broken)[0] is False
    assert verify_partition(R, (T, S)) == (True, "ok")
    assert verify_partition(R, (T,)) == (False, "not-spanning")
    assert verify_partition(R, (T, T)) == (False, "overlap")


def test_caterpillar_with_legs_rejects_tampering():
    for iv in ivs(15):
        if (2 * iv[0] * iv[1] + 2) % 4 != 2:
            continue
        D = build(iv)
        T = next((c for c in partition_even_caterpillars(D) if c.legs), None)
        if T is None:
            continue
        R = D.system
        bad = CaterpillarCertificate(T.vertices, T.spine, T.legs, T.leg_order + 1)
        assert verify_certificate(R, bad) == (False, "unequal-legs")
        bad = CaterpillarCertificate(T.vertices, T.spine, T.legs[:-1], T.leg_order)
        assert verify_certificate(R, bad) == (False, "legs-mismatch")
        return
    pytest.fail("no caterpillar with legs in the sweep")


def test_certificate_json_shape():
    D = build((2, 3, 1))
    doc = certificate_to_json(partition_even_caterpillars(D)[0])
    assert set(doc) == {"kind", "vertices", "spine", "legs"} and doc["kind"] == "caterpillar"
    doc = certificate_to_json(PathCertificate((3, 1, 2)))
    assert doc == {"kind": "path", "vertices": [3, 1, 2], "spine": [3, 1, 2], "legs": []}


def test_equitable_coloring_examples():
    assert equitable_two_coloring(path_graph(7), range(7)) == (4, 3, True)
    assert equitable_two_coloring(tetrahedron(), [2]) == (1, 0, True)
    with pytest.raises(ValueError):
        equitable_two_coloring(tetrahedron(), [0, 1, 2])


# -- constructions -----------------------------------------------------------


@pytest.mark.parametrize("iv", [(2, 3, 1), (1, 6, 3), (2, 5, 4), (4, 3, 2)])
def test_even_caterpillars_examples(iv):
    D = build(iv)
    certs = partition_even_caterpillars(D)
    assert verify_partition(D.system, certs) == (True, "ok")
    for c in certs:
        assert c.leg_order % 2 == 0 or not c.legs
        big, small, eq = equitable_two_coloring(D.system, c.vertices)
        assert eq and big + small == len(c.vertices)


def test_even_caterpillars_precondition():
    with pytest.raises(PreconditionError):
        partition_even_caterpillars(build((1, 1, 0)))


def test_even_caterpillars_sweep():
    for iv in ivs(15):
        if (2 * iv[0] * iv[1] + 2) % 4 != 2:
            continue
        D = build(iv)
        assert verify_partition(D.system, partition_even_caterpillars(D)) == (True, "ok")


def test_induced_paths_examples():
    D = build((2, 3, 1))
    eligible = [q for q, iv in enumerate(orbit((2, 3, 1))) if iv.m % 2 and 3 * iv.k >= iv.m]
    assert eligible
    for q in eligible:
        a, b = partition_induced_paths(D, q)
        assert verify_partition(D.system, (a, b)) == (True, "ok")
        assert {len(a.vertices), len(b.vertices)} <= set(range(1, 15))


def test_induced_paths_preconditions():
    with pytest.raises(PreconditionError, match="even"):
        partition_induced_paths(build((1, 6, 3)), 0)
    with pytest.raises(PreconditionError, match="below"):
        partition_induced_paths(build((1, 7, 2)), 0)


def test_induced_paths_sweep():
    for iv in ivs(15):
        D = build(iv)
        for q, v in enumerate(orbit(iv)):
            if v.m % 2 and 3 * v.k >= v.m:
                assert verify_partition(D.system, partition_induced_paths(D, q)) == (True, "ok")
