"""Hamilton bonds and spanning partitions into caterpillars or induced paths.

Constructions return certificates; ``verify_certificate`` re-derives every
claimed property from the rotation system alone, so a bug in a construction
shows up as a rejected certificate instead of a wrong answer.
"""

from __future__ import annotations

import os
from collections import Counter, deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Sequence

from hexorb.builder import LayeredDrawing, align, build
from hexorb.indexcalc import IndexVector, orbit, path_walk
from hexorb.planemap import RotationSystem
from hexorb.trifactor import class_components

__all__ = [
    "Bipartition",
    "DegreeCensus",
    "CaterpillarCertificate",
    "PathCertificate",
    "PreconditionError",
    "is_hamilton_bond",
    "enumerate_hamilton_bonds",
    "bond_limit",
    "end_tree_census",
    "balanced_P",
    "within_3",
    "tree_balance_identity",
    "window_pow2",
    "partition_even_caterpillars",
    "partition_induced_paths",
    "caterpillar_sets",
    "caterpillar_certificate",
    "verify_certificate",
    "verify_partition",
    "equitable_two_coloring",
    "certificate_to_json",
]

DEFAULT_BOND_LIMIT = 26


class PreconditionError(ValueError):
    """The premise of the requested construction does not hold."""


# -- small graph helpers ---------------------------------------------------


def _induced_edge_count(R: RotationSystem, vs: set[int]) -> int:
    return sum(1 for u, v in R.edges if u in vs and v in vs)


def _induced_adjacency(R: RotationSystem, vs: set[int]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in vs}
    for u, v in R.edges:
        if u in vs and v in vs:
            adj[u].append(v)
            adj[v].append(u)
    return adj


def _connected(adj: dict[int, list[int]]) -> bool:
    if not adj:
        return False
    start = next(iter(adj))
    seen = {start}
    queue = deque([start])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def _induces_tree(R: RotationSystem, vs: set[int]) -> bool:
    return bool(vs) and _induced_edge_count(R, vs) == len(vs) - 1 and _connected(_induced_adjacency(R, vs))


def _path_order(R: RotationSystem, vs: set[int]) -> list[int] | None:
    """Vertices of ``vs`` in path order if they induce a path, else ``None``."""
    if not vs:
        return None
    adj = _induced_adjacency(R, vs)
    if sum(len(a) for a in adj.values()) != 2 * (len(vs) - 1):
        return None
    ends = sorted(v for v, a in adj.items() if len(a) <= 1)
    if len(vs) == 1:
        return list(vs)
    if len(ends) != 2 or any(len(a) > 2 for a in adj.values()):
        return None
    order = [ends[0]]
    prev = None
    while len(order) < len(vs):
        nxt = [w for w in adj[order[-1]] if w != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order if order[-1] == ends[1] else None


# -- bonds -----------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset[int]
    side_b: frozenset[int]

    def __post_init__(self) -> None:
        if not self.side_a or not self.side_b:
            raise ValueError("both sides of a bipartition must be non-empty")
        if self.side_a & self.side_b:
            raise ValueError("bipartition sides overlap")

    @classmethod
    def of(cls, R: RotationSystem, side_a: Iterable[int]) -> "Bipartition":
        a = frozenset(side_a)
        return cls(a, frozenset(range(R.vertex_count)) - a)

    def check(self, R: RotationSystem) -> None:
        if self.side_a | self.side_b != frozenset(range(R.vertex_count)):
            raise ValueError("bipartition does not cover the vertex set")


@dataclass(frozen=True)
class DegreeCensus:
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return sum(self.counts.values())


def is_hamilton_bond(R: RotationSystem, p: Bipartition) -> bool:
    """Both sides induce trees (so the cut between them is a minimal cut)."""
    p.check(R)
    return _induces_tree(R, set(p.side_a)) and _induces_tree(R, set(p.side_b))


def bond_limit() -> int:
    raw = os.environ.get("HEXORB_BOND_LIMIT")
    return int(raw) if raw else DEFAULT_BOND_LIMIT


def enumerate_hamilton_bonds(R: RotationSystem, limit: int | None = None) -> Iterator[Bipartition]:
    """Every Hamilton bond once, with vertex 0 on ``side_a``.

    Grows induced trees containing vertex 0 by binary branching on frontier
    vertices (take it or forbid it), so each tree is produced exactly once,
    then tests whether the complement is a tree too.
    """
    limit = bond_limit() if limit is None else limit
    n = R.vertex_count
    if n > limit:
        raise ValueError(f"order {n} exceeds the bond enumeration bound {limit}")
    if n < 2:
        return
    adj = [0] * n
    multi = [0] * n
    for u, v in R.edges:
        if adj[u] >> v & 1:
            multi[u] |= 1 << v
            multi[v] |= 1 << u
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    deg = [R.degree(v) for v in range(n)]
    full = (1 << n) - 1
    E = R.edge_count

    def complement_is_tree(S: int, size: int, degsum: int) -> bool:
        if size == n or degsum != E + 2 * size - n:
            return False
        rest = full & ~S
        seen = rest & -rest
        frontier = seen
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= adj[low.bit_length() - 1]
                f ^= low
            frontier = grow & rest & ~seen
            seen |= frontier
        return seen == rest

    # stack entries: (tree mask, frontier mask, forbidden mask, size, degree sum)
    stack = [(1, adj[0] & ~1, 1, 1, deg[0])]
    while stack:
        S, front, forb, size, degsum = stack.pop()
        while front:
            low = front & -front
            v = low.bit_length() - 1
            front ^= low
            if (adj[v] & S) & ((adj[v] & S) - 1) or multi[v] & S:
                forb |= low
                continue
            break
        else:
            if complement_is_tree(S, size, degsum):
                yield Bipartition(
                    frozenset(i for i in range(n) if S >> i & 1),
                    frozenset(i for i in range(n) if not S >> i & 1),
                )
            continue
        # exclude v, then include v (include is processed first)
        stack.append((S, front, forb | low, size, degsum))
        S2 = S | low
        stack.append((S2, (front | adj[v]) & ~S2 & ~forb, forb, size + 1, degsum + deg[v]))


def end_tree_census(R: RotationSystem, p: Bipartition) -> tuple[DegreeCensus, DegreeCensus]:
    if not is_hamilton_bond(R, p):
        raise ValueError("partition is not a Hamilton bond")
    ca = Counter(R.degree(v) for v in p.side_a)
    cb = Counter(R.degree(v) for v in p.side_b)
    return DegreeCensus(dict(sorted(ca.items()))), DegreeCensus(dict(sorted(cb.items())))


def balanced_P(R: RotationSystem, p: Bipartition) -> bool:
    """Equal per-degree counts on both sides and two degree-3 vertices on each."""
    a, b = end_tree_census(R, p)
    return a.counts == b.counts and a.counts.get(3, 0) == 2


def within_3(R: RotationSystem, p: Bipartition) -> bool:
    a, b = end_tree_census(R, p)
    return abs(a.order - b.order) <= 3


def tree_balance_identity(R: RotationSystem, p: Bipartition) -> bool:
    """``sum (deg - 2)`` over one end-tree equals the same sum over the other."""
    a, b = end_tree_census(R, p)
    return sum((i - 2) * c for i, c in a.counts.items()) == sum((i - 2) * c for i, c in b.counts.items())


# -- power-of-two window --------------------------------------------------


def window_pow2(a: int, b: int, m: int) -> int:
    """Smallest ``v`` in ``[a, b]`` with ``v = 2^j`` or ``v = m - 2^j``.

    Existence is guaranteed when ``m >= 3`` and the window has length at
    least ``m/3 - 1``; any window containing such a value is accepted.
    """
    if not 0 <= a <= b <= m:
        raise ValueError(f"need 0 <= a <= b <= m, got a={a}, b={b}, m={m}")
    for v in range(a, b + 1):
        for w in (v, m - v):
            if w > 0 and w & (w - 1) == 0:
                return v
    raise ValueError(f"[{a}, {b}] holds no power of two and no m minus a power of two (m={m})")


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class CaterpillarCertificate:
    vertices: frozenset[int]
    spine: tuple[int, ...]
    legs: tuple[tuple[int, ...], ...]
    leg_order: int

    kind = "caterpillar"


@dataclass(frozen=True)
class PathCertificate:
    vertices: tuple[int, ...]

    kind = "path"


def certificate_to_json(c: CaterpillarCertificate | PathCertificate) -> dict:
    if isinstance(c, PathCertificate):
        return {"kind": "path", "vertices": list(c.vertices), "spine": list(c.vertices), "legs": []}
    return {
        "kind": "caterpillar",
        "vertices": sorted(c.vertices),
        "spine": list(c.spine),
        "legs": [list(leg) for leg in c.legs],
    }


def _legs_for_spine(R: RotationSystem, vs: set[int], spine: list[int]) -> list[list[int]] | None:
    rest = vs - set(spine)
    adj = _induced_adjacency(R, rest)
    seen: set[int] = set()
    legs = []
    for v in sorted(rest):
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            for w in adj[queue.popleft()]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        order = _path_order(R, comp)
        if order is None:
            return None
        legs.append(order)
    return legs


def _tree_path(adj: dict[int, list[int]], a: int, b: int) -> list[int]:
    parent = {a: a}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def caterpillar_certificate(R: RotationSystem, vs: Iterable[int]) -> CaterpillarCertificate:
    """Find a spine making ``vs`` an even caterpillar.

    Paths get themselves as spine.  Otherwise every path between two
    vertices of the tree is tried in a fixed order.
    """
    vs = set(vs)
    if not _induces_tree(R, vs):
        raise ValueError("vertex set does not induce a tree")
    order = _path_order(R, vs)
    if order is not None:
        return CaterpillarCertificate(frozenset(vs), tuple(order), (), 0)
    adj = _induced_adjacency(R, vs)
    verts = sorted(vs)
    for i, a in enumerate(verts):
        for b in verts[i:]:
            spine = _tree_path(adj, a, b)
            legs = _legs_for_spine(R, vs, spine)
            if not legs:
                continue
            sizes = {len(leg) for leg in legs}
            if len(sizes) == 1 and sizes.pop() % 2 == 0:
                legs.sort()
                return CaterpillarCertificate(frozenset(vs), tuple(spine), tuple(map(tuple, legs)), len(legs[0]))
    raise ValueError("tree is not an even caterpillar")


def verify_certificate(R: RotationSystem, c: CaterpillarCertificate | PathCertificate) -> tuple[bool, str]:
    """Independent re-check of a certificate against ``R``; returns ``(ok, reason)``."""
    n = R.vertex_count
    if isinstance(c, PathCertificate):
        seq = list(c.vertices)
        if not seq or len(set(seq)) != len(seq) or any(not 0 <= v < n for v in seq):
            return False, "bad-vertex-list"
        if _path_order(R, set(seq)) is None:
            return False, "not-induced-path"
        adj = _induced_adjacency(R, set(seq))
        if any(seq[i + 1] not in adj[seq[i]] for i in range(len(seq) - 1)):
            return False, "order-not-a-walk"
        return True, "ok"

    vs = set(c.vertices)
    if not vs or any(not 0 <= v < n for v in vs):
        return False, "bad-vertex-list"
    if not _induces_tree(R, vs):
        return False, "not-induced-tree"
    spine = list(c.spine)
    if not spine or not set(spine) <= vs or _path_order(R, set(spine)) is None:
        return False, "spine-not-induced-path"
    sadj = _induced_adjacency(R, set(spine))
    if any(spine[i + 1] not in sadj[spine[i]] for i in range(len(spine) - 1)):
        return False, "spine-order"
    legs = _legs_for_spine(R, vs, spine)
    if legs is None:
        return False, "leg-not-path"
    if sorted(sorted(leg) for leg in legs) != sorted(sorted(leg) for leg in c.legs):
        return False, "legs-mismatch"
    for leg in c.legs:
        ladj = _induced_adjacency(R, set(leg))
        if any(leg[i + 1] not in ladj[leg[i]] for i in range(len(leg) - 1)):
            return False, "leg-order"
        if len(leg) != c.leg_order:
            return False, "unequal-legs"
    if c.legs and c.leg_order % 2:
        return False, "odd-leg-order"
    return True, "ok"


def verify_partition(R: RotationSystem, certs: Sequence[CaterpillarCertificate | PathCertificate]) -> tuple[bool, str]:
    """All certificates valid, pairwise disjoint and together covering ``V``."""
    seen: set[int] = set()
    for c in certs:
        ok, why = verify_certificate(R, c)
        if not ok:
            return False, why
        vs = set(c.vertices)
        if vs & seen:
            return False, "overlap"
        seen |= vs
    if seen != set(range(R.vertex_count)):
        return False, "not-spanning"
    return True, "ok"


def equitable_two_coloring(R: RotationSystem, s: Iterable[int]) -> tuple[int, int, bool]:
    vs = set(s)
    if not _induces_tree(R, vs):
        raise ValueError("vertex set does not induce a tree")
    adj = _induced_adjacency(R, vs)
    start = min(vs)
    color = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in color:
                color[w] = 1 - color[v]
                queue.append(w)
    c1 = sum(color.values())
    big, small = max(len(vs) - c1, c1), min(len(vs) - c1, c1)
    return big, small, big - small <= 1


# -- drawings at other classes -----------------------------------------------


def _drawing_at(D: LayeredDrawing, q: int) -> tuple[LayeredDrawing, list[int]]:
    """Layered drawing whose anchor class is class ``q`` of ``D``, with a vertex map into ``D``."""
    q %= 3
    if q == D.anchor[1]:
        return D, list(range(D.system.vertex_count))
    iv = orbit(D.index_vector).triple[(q - D.anchor[1]) % 3]
    Dq = build(iv)
    vmap = align(Dq, D.system, D.factorization(), q)
    if vmap is None:
        raise RuntimeError(f"drawing of {iv} does not match class {q} of {D.index_vector}")
    return Dq, vmap


# -- even caterpillars -----------------------------------------------------


def _two_layer_split(k: int, m: int, s: int) -> tuple[set[int], set[int]]:
    """Split the member ``(2, m, s)`` into a caterpillar ``T`` and a path ``S``."""
    assert k == 2
    D = build((2, m, s))
    R = D.system
    at = D.vertex_at
    two_m = 2 * m
    t = [at(p, 1) for p in range(two_m)]
    if s == m - 1:
        u = at(two_m - 1, 2)
        if R.degree(u) != 3 or u == at(0, 0) or not {t[-1], t[0]} <= set(R.neighbors(u)):
            raise AssertionError("corner vertex next to the last cycle edge not found")
        T = {u, at(0, 0)} | set(t[:-1])
    else:
        # collapse the inner path and fold the cycle onto itself
        Hg = build((1, m, s))
        walk = path_walk(Hg.system, Hg.factorization(), Hg.vertex_at(0, 0), 2)
        I: list[int] = []
        V0: set[int] = set()
        for w in walk.vertices:
            x, y = Hg.position(w)
            if y == 0:
                I.append(x)
            else:
                V0.add(at(x, 2))
        d = gcd(s + 1, m)
        V1 = set(V0)
        for i in I:
            V1 |= {at(i, 0), t[i % two_m]}
            if i not in (0, m):
                V1.add(t[(two_m - i) % two_m])
        T = set(V1)
        for i in I:
            T |= {t[(i + j) % two_m] for j in range(1, 2 * d - 1)}
            if i not in (0, m):
                T |= {t[(two_m - i + j) % two_m] for j in range(1, 2 * d - 1)}
        if _path_order(R, V1) is None:
            raise AssertionError("spine set does not induce a path")
    S = set(range(R.vertex_count)) - T
    # cycle-layer structure: T meets it in paths of equal odd order, S in an independent set
    _check_layer_split(R, set(t), T, S)
    return T, S


def _check_layer_split(R: RotationSystem, layer: set[int], odd_side: set[int], indep_side: set[int]) -> None:
    on = odd_side & layer
    adj = _induced_adjacency(R, on)
    seen: set[int] = set()
    sizes = set()
    for v in on:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            for w in adj[queue.popleft()]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        if _path_order(R, comp) is None:
            raise AssertionError("layer piece is not a path")
        sizes.add(len(comp))
    if len(sizes) > 1 or any(x % 2 == 0 for x in sizes):
        raise AssertionError(f"layer pieces have orders {sorted(sizes)}, expected one odd order")
    if _induced_edge_count(R, indep_side & layer):
        raise AssertionError("layer part of the other side is not independent")


def caterpillar_sets(k: int, m: int, s: int) -> tuple[set[int], set[int]]:
    """Vertex sets of two even caterpillars spanning ``build((k, m, s))``; ``k`` even."""
    if k % 2 or k < 2:
        raise PreconditionError("caterpillar layering needs an even number of layers")
    if k == 2:
        return _two_layer_split(k, m, s)
    D = build((k, m, s))
    at = D.vertex_at
    H = build((k - 2, m, (s + 1) % m))
    TH, SH = caterpillar_sets(k - 2, m, (s + 1) % m)
    T: set[int] = set()
    S: set[int] = set()
    for side_h, side_p, other_p in ((TH, T, S), (SH, S, T)):
        for w in side_h:
            x, y = H.position(w)
            if y < k - 3:
                side_p.add(at(x, y))
            elif y == k - 3:
                side_p.add(at(x, k - 3))
                side_p.add(at(x - 1, k - 1))
                other_p.add(at(x, k - 2))
            else:
                side_p.add(at(x - 1, k))
    if T & S or len(T) + len(S) != D.system.vertex_count:
        raise AssertionError("re-expanded sides do not partition the vertex set")
    R = D.system
    for j in range(1, k):
        layer = {at(x, j) for x in range(2 * m)}
        if j % 2:
            _check_layer_split(R, layer, T, S)
        else:
            _check_layer_split(R, layer, S, T)
    return T, S


def partition_even_caterpillars(D: LayeredDrawing) -> tuple[CaterpillarCertificate, CaterpillarCertificate]:
    R = D.system
    n = R.vertex_count
    if n % 4 != 2:
        raise PreconditionError(f"order {n} is not 2 (mod 4)")
    triple = orbit(D.index_vector).triple
    even = [i for i in range(3) if triple[i].k % 2 == 0]
    if not even:
        raise ArithmeticError(f"orbit {triple} of an order-{n} member has no even layer count")
    q = (D.anchor[1] + even[0]) % 3
    Dq, vmap = _drawing_at(D, q)
    iv = Dq.index_vector
    T, S = caterpillar_sets(iv.k, iv.m, iv.s)
    certs = tuple(caterpillar_certificate(R, {vmap[v] for v in side}) for side in (T, S))
    ok, why = verify_partition(R, certs)
    if not ok:
        raise AssertionError(f"caterpillar partition rejected: {why}")
    return certs  # type: ignore[return-value]


# -- induced paths ---------------------------------------------------------


def _path_sets(k: int, m: int, s: int) -> tuple[set[int], set[int]]:
    D = build((k, m, s))
    R = D.system
    if m == 1:
        comps = class_components(R, D.factorization(), 1)
        return set(comps.paths[0]), set(comps.paths[1])
    if k == 1:
        return set(D.layers[0]), set(D.layers[-1])
    s2 = window_pow2(max(s, 1), min(s + k, m) - 1, m)
    if gcd(s2, m) != 1:
        raise AssertionError(f"window value {s2} is not coprime to {m}")
    lift = s2 - s
    if lift == 0:
        comps = class_components(R, D.factorization(), 1)
        return set(comps.paths[0]), set(comps.paths[1])
    H = build((k - lift, m, s2))
    comps = class_components(H.system, H.factorization(), 1)
    if comps.K != 1:
        raise AssertionError("contracted member still has class cycles")
    at = D.vertex_at
    out = []
    for path in comps.paths:
        vs: set[int] = set()
        for w in path:
            x, y = H.position(w)
            if y >= 1:
                vs.add(at(x - lift, y + lift))
            else:
                vs |= {at(x - r, r) for r in range(lift + 1)}
                vs |= {at(-x - r, r) for r in range(1, lift + 1)}
        out.append(vs)
    return out[0], out[1]


def partition_induced_paths(D: LayeredDrawing, q: int) -> tuple[PathCertificate, PathCertificate]:
    R = D.system
    iv: IndexVector = orbit(D.index_vector).triple[(q - D.anchor[1]) % 3]
    if iv.m % 2 == 0:
        raise PreconditionError(f"M = {iv.m} is even at class {q % 3}")
    if 3 * iv.k < iv.m:
        raise PreconditionError(f"K = {iv.k} is below M/3 = {iv.m}/3 at class {q % 3}")
    Dq, vmap = _drawing_at(D, q)
    certs = []
    for side in _path_sets(*Dq.index_vector):
        vs = {vmap[v] for v in side}
        order = _path_order(R, vs)
        if order is None:
            raise AssertionError("constructed side does not induce a path")
        certs.append(PathCertificate(tuple(order)))
    ok, why = verify_partition(R, certs)
    if not ok:
        raise AssertionError(f"path partition rejected: {why}")
    return certs[0], certs[1]

