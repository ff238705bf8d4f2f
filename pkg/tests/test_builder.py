import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figures import figure_s0, tetrahedron
from hexorb.builder import DIRS, DegenerateGluing, LatticeModel, align, build, gluing_table
from hexorb.indexcalc import IndexVector, classify, index_vector, measured_orbit, orbit, step
from hexorb.planemap import canonical_word, op_equivalent, parse_rotation_system, serialize, validate
from hexorb.trifactor import class_components, factorize


def ivs(max_km):
    return [(k, m, s) for k in range(1, max_km + 1) for m in range(1, max_km // k + 1) for s in range(m)]


def test_directions_are_ccw_and_classes_pair_up():
    assert len(DIRS) == 6
    for d in range(3):
        a, b = DIRS[d], DIRS[d + 3]
        assert (a[0] + b[0], a[1] + b[1]) == (0, 0)


def test_k4_is_tetrahedron():
    D = build((1, 1, 0))
    assert op_equivalent(D.system, tetrahedron())
    assert D.system.vertex_count == 4


def test_order_14_member_matches_figure():
    D = build((1, 6, 3))
    R, _, _ = figure_s0()
    assert op_equivalent(D.system, R)
    assert measured_orbit(D.system, D.factorization()) == tuple(orbit((1, 6, 3)))


def test_nonsimple_member():
    D = build((2, 1, 0))
    rep = validate(D.system)
    assert rep.in_P and not rep.simple
    assert D.system.vertex_count == 6


def test_orbit_members_are_the_same_graph():
    a, b, c = (build(iv).system for iv in [(1, 6, 3), (3, 2, 0), (2, 3, 1)])
    assert op_equivalent(a, b) and op_equivalent(b, c)
    assert not op_equivalent(a, build((1, 6, 1)).system)


def test_anchor_and_accessors():
    D = build((2, 3, 1))
    assert D.anchor == (0, 0)
    assert (D.k, D.m, D.s) == (2, 3, 1)
    assert D.system.origin(0) == D.vertex_at(0, 0)
    assert D.position(D.vertex_at(1, 0)) == (1, 0)
    assert D.factorization().class_of[0] == 0


@pytest.mark.parametrize("iv", ivs(24))
def test_build_round_trip(iv):
    D = build(iv)
    R, F = D.system, D.factorization()
    assert validate(R).in_P
    assert index_vector(R, F, 0) == IndexVector(*iv)
    assert D.gluing_offset == 2 * iv[2]
    k, m, _ = iv
    sizes = [len(layer) for layer in D.layers]
    assert sizes == [m + 1] + [2 * m] * (k - 1) + [m + 1]
    assert sorted(v for layer in D.layers for v in layer) == list(range(R.vertex_count))
    c = class_components(R, F, 0)
    assert (c.K, c.M) == (k, m)
    assert sorted(c.paths[0]) == sorted(D.layers[0]) or sorted(c.paths[1]) == sorted(D.layers[0])


def test_layers_survive_serialization():
    D = build((3, 2, 1))
    back = parse_rotation_system(serialize(D.system))
    assert back.layers == D.layers


@pytest.mark.parametrize("bad", [(0, 3, 0), (2, 3, 3), (1, 2, -1)])
def test_invalid_index_vector(bad):
    with pytest.raises(ValueError):
        build(bad)


def test_odd_gluing_offset_is_degenerate():
    with pytest.raises(DegenerateGluing):
        LatticeModel(2, 3, 1).rotation_system()


def test_gluing_table_covers_every_offset():
    for k, m in [(1, 1), (1, 7), (2, 5), (3, 4), (5, 2)]:
        table = gluing_table(k, m)
        assert sorted(table) == list(range(m))
        assert all(rho == 2 * s for s, rho in table.items())


def test_orbit_closure_and_simplicity():
    words: dict[str, set] = {}
    for iv in ivs(30):
        D = build(iv)
        R, F = D.system, D.factorization()
        mo = measured_orbit(R, F)
        assert mo == tuple(orbit(iv))
        for q in range(3):
            assert step(mo[q]) == mo[(q + 1) % 3]
        assert validate(R).simple == classify(orbit(iv)).simple_graph
        words.setdefault(canonical_word(R), set()).add(orbit(iv).elements)
    # graphs and orbits are in bijection
    assert all(len(v) == 1 for v in words.values())
    assert len(words) == len({orbit(iv).elements for iv in ivs(30)})


def test_align_onto_each_class():
    D = build((2, 3, 1))
    R, F = D.system, D.factorization()
    for q, iv in enumerate(orbit((2, 3, 1))):
        E = build(iv)
        vmap = align(E, R, F, q)
        assert vmap is not None and sorted(vmap) == list(range(R.vertex_count))
    assert align(build((1, 6, 1)), R, F, 0) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_built_degrees(k, m, data):
    s = data.draw(st.integers(0, m - 1))
    R = build((k, m, s)).system
    hist = validate(R).degree_histogram
    assert set(hist) <= {3, 6} and hist.get(3, 0) == 4
    F = factorize(R)
    for v in range(R.vertex_count):
        classes = [F.class_of[d >> 1] for d in R.rotation[v]]
        # classes advance by one at each step around a vertex
        assert all(c == (classes[0] + i) % 3 for i, c in enumerate(classes))
