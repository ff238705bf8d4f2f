"""Three-class edge factorization of members of the family P.

Classes live in the cyclic group Q = {0, 1, 2}.  The defining rule: whenever
two darts are counter-clockwise successive at a vertex, the second dart's edge
has the class of the first plus one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from hexorb.planemap import RotationSystem, validate

__all__ = [
    "Factorization",
    "ClassComponents",
    "FactorizationError",
    "factorize",
    "class_components",
    "check_factorization",
    "dart_class",
    "class_walk",
]


class FactorizationError(ValueError):
    """The input is not a member of P, or a factor has the wrong shape."""


@dataclass(frozen=True)
class Factorization:
    class_of: tuple[int, ...]

    def shifted(self, delta: int) -> "Factorization":
        return Factorization(tuple((q + delta) % 3 for q in self.class_of))

    def edges_of(self, q: int) -> list[int]:
        q %= 3
        return [e for e, c in enumerate(self.class_of) if c == q]

    def sizes(self) -> tuple[int, int, int]:
        counts = [0, 0, 0]
        for c in self.class_of:
            counts[c] += 1
        return tuple(counts)  # type: ignore[return-value]


def dart_class(F: Factorization, d: int) -> int:
    return F.class_of[d >> 1]


def check_factorization(R: RotationSystem, F: Factorization) -> bool:
    """True iff every CCW-successive dart pair steps the class by +1."""
    if len(F.class_of) != R.edge_count:
        return False
    return all(
        F.class_of[R.next_ccw(d) >> 1] == (F.class_of[d >> 1] + 1) % 3 for d in range(R.dart_count)
    )


def factorize(R: RotationSystem, anchor_dart: int = 0, anchor_class: int = 0) -> Factorization:
    """Propagate classes from the anchor dart by breadth-first search over darts."""
    if not validate(R).in_P:
        raise FactorizationError("factorize requires a member of P (2-connected, degrees 3 or 6)")
    cls = [-1] * R.dart_count
    cls[anchor_dart] = anchor_class % 3
    queue = deque([anchor_dart])
    while queue:
        d = queue.popleft()
        for e, want in ((R.next_ccw(d), (cls[d] + 1) % 3), (d ^ 1, cls[d])):
            if cls[e] == -1:
                cls[e] = want
                queue.append(e)
            elif cls[e] != want:
                raise FactorizationError(f"class conflict at dart {e}")
    if -1 in cls:
        raise FactorizationError("rotation system is not connected")
    return Factorization(tuple(cls[2 * i] for i in range(R.edge_count)))


def class_walk(R: RotationSystem, F: Factorization, start: int) -> list[int]:
    """Darts of the maximal class walk that begins with dart ``start``.

    The walk keeps going straight (three rotation steps away from the
    arriving dart) until it reaches a vertex of degree 3 or closes up.
    """
    darts = [start]
    d = start
    while True:
        v = R.target(d)
        if R.degree(v) == 3:
            return darts
        back = d ^ 1
        nxt = R.next_ccw(R.next_ccw(R.next_ccw(back)))
        if nxt == start:
            return darts
        darts.append(nxt)
        d = nxt
        if len(darts) > R.dart_count:
            raise FactorizationError("class walk does not terminate")


@dataclass(frozen=True)
class ClassComponents:
    q: int
    paths: tuple[tuple[int, ...], tuple[int, ...]]
    cycles: tuple[tuple[int, ...], ...]
    K: int
    M: int
    path_darts: tuple[tuple[int, ...], tuple[int, ...]]


def _class_dart_at(R: RotationSystem, F: Factorization, v: int, q: int) -> int:
    for d in R.rotation[v]:
        if F.class_of[d >> 1] == q:
            return d
    raise FactorizationError(f"vertex {v} has no class-{q} edge")


def class_components(R: RotationSystem, F: Factorization, q: int) -> ClassComponents:
    """Split the class-``q`` factor into its two maximal paths and its cycles.

    Paths start at the lower-numbered degree-3 end; the first path is the
    one through the lowest-numbered degree-3 vertex.  Cycles are ordered by
    their distance from that path.
    """
    q %= 3
    ends = [v for v in range(R.vertex_count) if R.degree(v) == 3]
    used_edges: set[int] = set()
    paths: list[tuple[int, ...]] = []
    path_darts: list[tuple[int, ...]] = []
    for a in ends:
        d0 = _class_dart_at(R, F, a, q)
        if d0 >> 1 in used_edges:
            continue
        walk = class_walk(R, F, d0)
        used_edges.update(d >> 1 for d in walk)
        verts = (a,) + tuple(R.target(d) for d in walk)
        if R.degree(verts[-1]) != 3:
            raise FactorizationError("class path does not end at a degree-3 vertex")
        paths.append(verts)
        path_darts.append(tuple(walk))
    if len(paths) != 2:
        raise FactorizationError(f"class {q} has {len(paths)} maximal paths, expected 2")
    M = len(paths[0]) - 1
    if len(paths[1]) - 1 != M:
        raise FactorizationError("class paths have different lengths")
    if any(len(set(p)) != len(p) for p in paths):
        raise FactorizationError("class path revisits a vertex")

    cycles: list[tuple[int, ...]] = []
    for e in F.edges_of(q):
        if e in used_edges:
            continue
        walk = class_walk(R, F, 2 * e)
        if R.target(walk[-1]) != R.origin(2 * e) or len(walk) != 2 * M:
            raise FactorizationError(f"class-{q} cycle through edge {e} has the wrong length")
        used_edges.update(d >> 1 for d in walk)
        cycles.append(tuple(R.origin(d) for d in walk))
    covered = sum(len(p) for p in paths) + sum(len(c) for c in cycles)
    if covered != R.vertex_count:
        raise FactorizationError("class components do not partition the vertex set")

    # order cycles by breadth-first distance from the first path
    dist = [-1] * R.vertex_count
    queue = deque(paths[0])
    for v in paths[0]:
        dist[v] = 0
    while queue:
        v = queue.popleft()
        for w in R.neighbors(v):
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                queue.append(w)
    cycles.sort(key=lambda c: (min(dist[v] for v in c), min(c)))
    K = len(cycles) + 1
    return ClassComponents(q, (paths[0], paths[1]), tuple(cycles), K, M, (path_darts[0], path_darts[1]))
