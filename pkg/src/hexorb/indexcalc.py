"""Index-vectors and orbits, measured on graphs and computed arithmetically.

An index-vector ``(k, m, s)`` of a class ``q`` records the number of class-q
layers ``k`` (cycles plus one), the common length ``m`` of the two maximal
class-q paths and the offset ``s`` at which the outer path is attached.  The
step map sends the vector of class ``q`` to the vector of class ``q + 1``.
Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Literal

from hexorb.planemap import RotationSystem
from hexorb.trifactor import (
    Factorization,
    FactorizationError,
    class_components,
    class_walk,
)

__all__ = [
    "IndexVector",
    "Orbit",
    "BilliardSequence",
    "OrbitClassification",
    "PathWalk",
    "path_walk",
    "branch_index",
    "s_walk",
    "index_vector",
    "measured_orbit",
    "adjacent_branch_indices",
    "s_minus_of",
    "extended_gcd",
    "farey_pair",
    "billiard",
    "step",
    "step_with_s_minus",
    "step_raw",
    "double_mirror_shape",
    "orbit",
    "classify",
    "one_point_witness",
    "double_mirror_by_definition",
    "enumerate_one_point",
    "fibonacci_orbit",
]


@dataclass(frozen=True, order=True)
class IndexVector:
    k: int
    m: int
    s: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be ≥ 1")
        if self.m < 1:
            raise ValueError("m must be ≥ 1")
        if not 0 <= self.s < self.m:
            raise ValueError("s must satisfy 0 ≤ s < m")

    def __iter__(self):
        return iter((self.k, self.m, self.s))

    def __str__(self) -> str:
        return f"({self.k},{self.m},{self.s})"

    @property
    def order(self) -> int:
        """Number of vertices of every graph with this index-vector."""
        return 2 * self.k * self.m + 2


def _iv(iv: IndexVector | Iterable[int]) -> IndexVector:
    return iv if isinstance(iv, IndexVector) else IndexVector(*iv)


# -- graph walks -----------------------------------------------------------


@dataclass(frozen=True)
class PathWalk:
    """Maximal class-q path ``v0 .. vM`` directed away from the anchor ``v0``."""

    anchor: int
    q: int
    vertices: tuple[int, ...]
    darts: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.darts)

    @property
    def terminal(self) -> int:
        return self.vertices[-1]


def path_walk(R: RotationSystem, F: Factorization, anchor: int, q: int) -> PathWalk:
    q %= 3
    if R.degree(anchor) != 3:
        raise FactorizationError(f"walk anchor {anchor} does not have degree 3")
    start = next(d for d in R.rotation[anchor] if F.class_of[d >> 1] == q)
    darts = class_walk(R, F, start)
    verts = (anchor,) + tuple(R.target(d) for d in darts)
    if R.degree(verts[-1]) != 3:
        raise FactorizationError("maximal class path does not end at degree 3")
    return PathWalk(anchor, q, verts, tuple(darts))


def _is_left(R: RotationSystem, w: PathWalk, j: int, d: int) -> bool:
    """Whether dart ``d`` leaving ``v_j`` branches off to the left of ``w``."""
    return (j < w.M and R.next_ccw(w.darts[j]) == d) or (j > 0 and R.next_ccw(d) == w.darts[j - 1] ^ 1)


def _branch_from_dart(R: RotationSystem, w: PathWalk, j: int, d: int) -> int:
    return j if _is_left(R, w, j, d) else 2 * w.M - j


def branch_index(R: RotationSystem, w: PathWalk, e: int) -> int:
    """``j`` for a left branch at ``v_j``, ``2M - j`` for a right branch.

    ``e`` is an edge id sharing exactly one endpoint with the walk.
    """
    if any(d >> 1 == e for d in w.darts):
        raise ValueError(f"edge {e} lies on the walk")
    pos = {v: j for j, v in enumerate(w.vertices)}
    u, v = R.edges[e]
    on = [x for x in (u, v) if x in pos]
    if len(on) != 1:
        raise ValueError(f"edge {e} is not adjacent to the walk at exactly one vertex")
    d = 2 * e if u in pos else 2 * e + 1
    return _branch_from_dart(R, w, pos[R.origin(d)], d)


def _first_landing(R: RotationSystem, w: PathWalk, walk_darts: Iterable[int]) -> tuple[int, int]:
    """First dart of a walk that lands on ``w``; returns ``(j, dart back)``."""
    pos = {v: j for j, v in enumerate(w.vertices)}
    for d in walk_darts:
        v = R.target(d)
        if v in pos:
            return pos[v], d ^ 1
    raise FactorizationError("walk never reaches the opposite maximal path")


def s_walk(
    R: RotationSystem,
    F: Factorization,
    q: int,
    sign: Literal["plus", "minus"] = "plus",
    A: int | None = None,
    C: int | None = None,
) -> int:
    """Measure the attachment offset of class ``q`` by walking the graph.

    ``A`` and ``C`` are ends of the two different maximal class-q paths
    (defaults: the first end of each path from ``class_components``).
    Walk the maximal class-(q+1) path from ``C`` (class q-1 for ``minus``),
    stop at its first edge meeting ``[A, q]`` and read that edge's branch
    index, subtracting ``M`` for a right branch.  ``plus`` lands in
    ``[0, M)``; ``minus`` in ``(0, M]``.
    """
    comps = class_components(R, F, q)
    M = comps.M
    if A is None:
        A = comps.paths[0][0]
    if C is None:
        C = comps.paths[1][0]
    w = path_walk(R, F, A, q)
    if C in w.vertices:
        raise ValueError("A and C must be ends of different maximal paths")
    other = q + 1 if sign == "plus" else q - 1
    j, d = _first_landing(R, w, path_walk(R, F, C, other).darts)
    result = j if _is_left(R, w, j, d) else M - j
    if sign == "plus":
        if not 0 <= result < M:
            raise FactorizationError(f"measured offset {result} outside [0, {M})")
    elif not 0 < result <= M:
        raise FactorizationError(f"measured offset {result} outside (0, {M}]")
    return result


def index_vector(R: RotationSystem, F: Factorization, q: int) -> IndexVector:
    comps = class_components(R, F, q)
    return IndexVector(comps.K, comps.M, s_walk(R, F, q, "plus"))


def measured_orbit(R: RotationSystem, F: Factorization) -> tuple[IndexVector, IndexVector, IndexVector]:
    """Measured index-vectors of classes 0, 1, 2."""
    return tuple(index_vector(R, F, q) for q in range(3))  # type: ignore[return-value]


def adjacent_branch_indices(R: RotationSystem, F: Factorization, A: int, q: int) -> list[int]:
    """Branch indices, relative to ``[A, q]``, of the consecutive edges of
    ``[A, q+1]`` that meet ``[A, q]``."""
    w = path_walk(R, F, A, q)
    cw = path_walk(R, F, A, q + 1)
    pos = {v: j for j, v in enumerate(w.vertices)}
    out = []
    for d in cw.darts:
        a, b = R.origin(d), R.target(d)
        if a in pos and b in pos:
            raise FactorizationError("class q+1 edge joins two vertices of a class-q path")
        if a in pos:
            out.append(_branch_from_dart(R, w, pos[a], d))
        elif b in pos:
            out.append(_branch_from_dart(R, w, pos[b], d ^ 1))
    return out


# -- arithmetic ------------------------------------------------------------


def s_minus_of(iv: IndexVector | Iterable[int]) -> int:
    """Representative of ``s + k (mod m)`` in ``(0, m]``."""
    k, m, s = _iv(iv)
    r = (s + k) % m
    return r if r else m


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    return a, x0, y0


def farey_pair(s: int, m: int) -> tuple[int, int]:
    """Integers ``(a, b)`` with ``a*m - b*s == gcd(s, m)`` and ``0 < b <= m/gcd``.

    For ``s > 0``, ``s/m < a/b`` are neighbours in the Farey sequence of
    order ``m/gcd(s, m)``.  ``s == 0`` gives ``(1, 1)``.
    """
    if m < 1:
        raise ValueError("m must be ≥ 1")
    if not 0 <= s < m:
        raise ValueError("need 0 <= s < m")
    d = gcd(s, m)
    n = m // d
    # s*x + m*y == d; then b == -x (mod n)
    _, x, _ = extended_gcd(s, m)
    b = (-x) % n
    if b == 0:
        b = n
    a, rem = divmod(d + b * s, m)
    assert rem == 0 and a >= 0
    return a, b


@dataclass(frozen=True)
class BilliardSequence:
    """Scaled rebound positions ``g[j] = 2m F(j)`` for ``j = 1 .. m/gcd(s, m)``."""

    s: int
    m: int
    g: tuple[int, ...]

    def __getitem__(self, j: int) -> int:
        """1-based access, matching the usual indexing of the sequence."""
        if not 1 <= j <= len(self.g):
            raise IndexError(j)
        return self.g[j - 1]

    def __len__(self) -> int:
        return len(self.g)


def billiard(s: int, m: int) -> BilliardSequence:
    if not 0 < s < m:
        raise ValueError("need 0 < s < m")
    n = m // gcd(s, m)
    two_m = 2 * m
    g = [0]
    for j in range(1, n):
        prev = g[-1]
        g.append((2 * s - prev) % two_m if j % 2 else (-prev) % two_m)
    return BilliardSequence(s, m, tuple(g))


def step_raw(k: int, m: int, s: int) -> tuple[int, int, int, int]:
    """``(k', m', s', S-(q+1))`` on plain integers, without validation."""
    k1 = gcd(s, m)
    m1 = k * m // k1
    n = m // k1
    _, x, _ = extended_gcd(s, m)
    b = (-x) % n or n
    s_minus_next = b * k
    return k1, m1, (s_minus_next - k1) % m1, s_minus_next


def step_with_s_minus(iv: IndexVector | Iterable[int]) -> tuple[IndexVector, int]:
    """Next index-vector together with the next class's ``S-`` value."""
    k1, m1, s1, s_minus_next = step_raw(*_iv(iv))
    return IndexVector(k1, m1, s1), s_minus_next


def step(iv: IndexVector | Iterable[int]) -> IndexVector:
    return step_with_s_minus(iv)[0]


@dataclass(frozen=True)
class Orbit:
    """Index-vectors of classes q, q+1, q+2 in step order."""

    triple: tuple[IndexVector, IndexVector, IndexVector]

    @property
    def elements(self) -> frozenset[IndexVector]:
        return frozenset(self.triple)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.triple)

    def __str__(self) -> str:
        return " ".join(map(str, self.triple))

    def rotated_to(self, iv: IndexVector) -> "Orbit":
        i = self.triple.index(iv)
        t = self.triple
        return Orbit((t[i], t[(i + 1) % 3], t[(i + 2) % 3]))


def orbit(iv: IndexVector | Iterable[int]) -> Orbit:
    a = _iv(iv)
    b = step(a)
    c = step(b)
    if step(c) != a:
        raise ArithmeticError(f"step applied three times does not return to {a}")
    return Orbit((a, b, c))


def one_point_witness(iv: IndexVector | Iterable[int]) -> tuple[int, int] | None:
    """``(n, x)`` with ``m == k n``, ``s == k x`` and ``n | x^2 + x + 1``, if any."""
    k, m, s = _iv(iv)
    if m % k or s % k:
        return None
    n, x = m // k, s // k
    return (n, x) if (x * x + x + 1) % n == 0 else None


def double_mirror_by_definition(o: Orbit) -> bool:
    """At least two classes satisfy ``S+ == M - S-``."""
    hits = sum(1 for iv in o.triple if iv.s == iv.m - s_minus_of(iv))
    return hits >= 2


def _nonsimple_shape(o: Orbit) -> bool:
    for iv in o.triple:
        if iv.m == 1 and iv.s == 0 and iv.k > 1:
            n = iv.k
            return o.elements == {IndexVector(n, 1, 0), IndexVector(1, n, n - 1), IndexVector(1, n, 0)}
    return False


@dataclass(frozen=True)
class OrbitClassification:
    one_point: bool
    witness: tuple[int, int] | None
    double_mirror: bool
    simple_graph: bool
    mirror_orbit: Orbit


def classify(o: Orbit) -> OrbitClassification:
    first = o.triple[0]
    one_point = o.size == 1
    witness = None
    if one_point:
        witness = one_point_witness(first)
        if witness is None:
            raise ArithmeticError(f"fixed point {first} fails the divisor characterization")
    dm = double_mirror_by_definition(o)
    mirror_first = IndexVector(first.k, first.m, (first.m - s_minus_of(first)) % first.m)
    return OrbitClassification(
        one_point=one_point,
        witness=witness,
        double_mirror=dm,
        simple_graph=not _nonsimple_shape(o),
        mirror_orbit=orbit(mirror_first),
    )


def double_mirror_shape(o: Orbit) -> bool:
    """One-point orbit of the form {(k, k, 0)} or {(k, 3k, k)}."""
    if o.size != 1:
        return False
    k, m, s = o.triple[0]
    return (m == k and s == 0) or (m == 3 * k and s == k)


def enumerate_one_point(max_m: int) -> list[IndexVector]:
    """All ``(k, kn, kx)`` with ``kn <= max_m`` and ``n | x^2 + x + 1``."""
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    found = set()
    for n in range(1, max_m + 1):
        for x in range(n):
            if (x * x + x + 1) % n:
                continue
            for k in range(1, max_m // n + 1):
                found.add(IndexVector(k, k * n, k * x))
    out = sorted(found, key=lambda iv: (iv.m, iv.k, iv.s))
    for iv in out:
        if step(iv) != iv:
            raise ArithmeticError(f"{iv} is not a fixed point of step")
    return out


def fibonacci_orbit(n: int) -> tuple[IndexVector, IndexVector, IndexVector]:
    """The orbit family built from consecutive Fibonacci numbers (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = [0, 1, 1]
    while len(a) <= 2 * n + 2:
        a.append(a[-1] + a[-2])
    a2n, a2n1, a2n2 = a[2 * n], a[2 * n + 1], a[2 * n + 2]
    return (
        IndexVector(1, a2n1 * a2n2, a2n * a2n2),
        IndexVector(a2n2, a2n1, 0),
        IndexVector(a2n1, a2n2, a2n),
    )
