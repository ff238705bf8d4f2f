"""Construct the layered drawing of a member of P for a given index-vector.

Every member is a quotient of the triangular lattice.  Points use axial
coordinates ``(x, y)``; the six directions, in counter-clockwise order, are
``(1,0), (0,1), (-1,1), (-1,0), (0,-1), (1,-1)`` and direction ``d`` carries
class ``d mod 3``.  The quotient group is generated by

* the half-turn about ``(0, 0)``,
* the half-turn about ``(rho/2, k)``,
* the translation ``(2m, 0)``.

Row 0 then folds into the inner path (positions ``0..m``), rows ``1..k-1``
become cycles of length ``2m`` and row ``k`` folds into the outer path.  The
gluing offset ``rho`` is not derived in closed form: every even candidate in
``[0, 2m)`` is built, validated and measured, and the one whose measured
attachment offset equals the request is kept.  Odd offsets fold an edge of
the outer row onto itself and are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from hexorb.indexcalc import IndexVector, _iv, s_walk
from hexorb.planemap import ParseError, RotationSystem, find_isomorphism, op_equivalent, validate
from hexorb.trifactor import Factorization, FactorizationError, factorize

__all__ = [
    "DIRS",
    "LatticeModel",
    "LayeredDrawing",
    "DegenerateGluing",
    "BuildError",
    "build",
    "gluing_table",
    "align",
]

DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class DegenerateGluing(ValueError):
    """The gluing offset folds an edge onto itself or creates a loop."""


class BuildError(RuntimeError):
    """No gluing offset reproduces the requested index-vector."""


class LatticeModel:
    """Quotient of the triangular lattice with parameters ``(k, m, rho)``."""

    def __init__(self, k: int, m: int, rho: int):
        if k < 1 or m < 1:
            raise ValueError("k and m must be >= 1")
        self.k, self.m, self.rho = k, m, rho % (2 * m)
        self._ids: dict[tuple[int, int], int] = {}
        self._pos: list[tuple[int, int]] = []
        for x in range(m + 1):
            self._add((x, 0))
        for y in range(1, k):
            for x in range(2 * m):
                self._add((x, y))
        c = self._outer_center()
        top = m + 1 if self.rho % 2 == 0 else m
        for u in range(top):
            self._add(((c + u) % (2 * m), k))
        self.cones = frozenset(p for p in self._pos if self._is_cone(p))

    def _add(self, p: tuple[int, int]) -> None:
        self._ids[p] = len(self._pos)
        self._pos.append(p)

    def _outer_center(self) -> int:
        return self.rho // 2 if self.rho % 2 == 0 else (self.rho + 1) // 2

    def _is_cone(self, p: tuple[int, int]) -> bool:
        x, y = p
        if y == 0:
            return x in (0, self.m)
        if y == self.k and self.rho % 2 == 0:
            return (x - self.rho // 2) % (2 * self.m) in (0, self.m)
        return False

    @property
    def vertex_count(self) -> int:
        return len(self._pos)

    def canon(self, x: int, y: int) -> tuple[tuple[int, int], bool]:
        """Representative of the orbit of ``(x, y)`` and whether a half-turn was used."""
        k, m, rho = self.k, self.m, self.rho
        two_m = 2 * m
        a = y // (2 * k)
        y -= 2 * k * a
        x -= rho * a
        flip = False
        if y > k:
            x, y = rho - x, 2 * k - y
            flip = True
        x %= two_m
        if y == 0 and x > m:
            x = two_m - x
            flip = not flip
        elif y == k:
            if rho % 2 == 0:
                if (x - rho // 2) % two_m > m:
                    x = (rho - x) % two_m
                    flip = not flip
            else:
                c = (rho + 1) // 2
                if (x - c) % two_m > m - 1:
                    x = (rho - x) % two_m
                    flip = not flip
        return (x, y), flip

    def vertex_at(self, x: int, y: int) -> int:
        return self._ids[self.canon(x, y)[0]]

    def position(self, v: int) -> tuple[int, int]:
        return self._pos[v]

    def directions(self, v: int) -> range:
        return range(3) if self._pos[v] in self.cones else range(6)

    def twin(self, v: int, d: int) -> tuple[int, int]:
        """The dart ``(w, d')`` at the other end of the edge leaving ``v`` in direction ``d``."""
        x, y = self._pos[v]
        dx, dy = DIRS[d]
        p, flip = self.canon(x + dx, y + dy)
        d2 = (d + 3 + (3 if flip else 0)) % 6
        if p in self.cones:
            d2 %= 3
        return self._ids[p], d2

    def rotation_system(self) -> RotationSystem:
        """Rotation system of the quotient; edges are numbered in discovery order."""
        dart_id: dict[tuple[int, int], int] = {}
        edges: list[tuple[int, int]] = []
        for v in range(self.vertex_count):
            for d in self.directions(v):
                if (v, d) in dart_id:
                    continue
                w, d2 = self.twin(v, d)
                if (w, d2) == (v, d) or w == v:
                    raise DegenerateGluing(f"offset {self.rho} folds an edge onto itself")
                if self.twin(w, d2) != (v, d):
                    raise DegenerateGluing(f"offset {self.rho} gives an inconsistent gluing")
                dart_id[(v, d)] = 2 * len(edges)
                dart_id[(w, d2)] = 2 * len(edges) + 1
                edges.append((v, w))
        rotation = tuple(tuple(dart_id[(v, d)] for d in self.directions(v)) for v in range(self.vertex_count))
        return RotationSystem(self.vertex_count, tuple(edges), rotation, self.layers())

    def layers(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.k + 1)]
        for v, (_, y) in enumerate(self._pos):
            rows[y].append(v)
        return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class LayeredDrawing:
    """A built member together with its layer structure.

    ``anchor`` is ``(dart, class)``: dart 0 is the first edge of the inner
    path and carries class 0.  ``layers`` lists the inner path, the cycles
    from the inside out and the outer path.
    """

    system: RotationSystem
    anchor: tuple[int, int]
    layers: tuple[tuple[int, ...], ...]
    gluing_offset: int
    index_vector: IndexVector
    model: LatticeModel

    @property
    def k(self) -> int:
        return self.index_vector.k

    @property
    def m(self) -> int:
        return self.index_vector.m

    @property
    def s(self) -> int:
        return self.index_vector.s

    def factorization(self) -> Factorization:
        return factorize(self.system, self.anchor[0], self.anchor[1])

    def vertex_at(self, x: int, y: int) -> int:
        return self.model.vertex_at(x, y)

    def position(self, v: int) -> tuple[int, int]:
        return self.model.position(v)


def _candidate(k: int, m: int, rho: int) -> tuple[LatticeModel, RotationSystem, int] | None:
    """Build one gluing and measure its attachment offset; ``None`` if invalid."""
    model = LatticeModel(k, m, rho)
    try:
        R = model.rotation_system()
    except (DegenerateGluing, ParseError):
        return None
    if not validate(R).in_P:
        return None
    try:
        F = factorize(R)
        s = s_walk(R, F, 0, "plus")
    except FactorizationError:
        return None
    for v in range(R.vertex_count):
        for d, dart in zip(model.directions(v), R.rotation[v]):
            if F.class_of[dart >> 1] != d % 3:
                raise BuildError("factorization disagrees with lattice directions")
    return model, R, s


@lru_cache(maxsize=512)
def gluing_table(k: int, m: int) -> dict[int, int]:
    """Map measured offset ``s`` to the gluing offset ``rho`` producing it."""
    table: dict[int, int] = {}
    systems: dict[int, RotationSystem] = {}
    for rho in range(0, 2 * m, 2):
        got = _candidate(k, m, rho)
        if got is None:
            continue
        _, R, s = got
        if s in table:
            if not op_equivalent(R, systems[s]):
                raise BuildError(f"offsets {table[s]} and {rho} both measure s={s} but differ")
            continue
        table[s] = rho
        systems[s] = R
    return table


@lru_cache(maxsize=256)
def _build(k: int, m: int, s: int) -> LayeredDrawing:
    iv = IndexVector(k, m, s)
    table = gluing_table(k, m)
    if s not in table:
        raise BuildError(f"no gluing offset produces {iv}")
    rho = table[s]
    got = _candidate(k, m, rho)
    assert got is not None
    model, R, measured = got
    if measured != s:
        raise BuildError(f"rebuilt offset {rho} measured {measured}, expected {s}")
    return LayeredDrawing(R, (0, 0), model.layers(), rho, iv, model)


def build(iv: IndexVector | Iterable[int]) -> LayeredDrawing:
    """The layered member of P whose anchor-class index-vector is ``iv``."""
    return _build(*_iv(iv))


def align(D: LayeredDrawing, R: RotationSystem, F: Factorization, q: int) -> list[int] | None:
    """Vertex map from ``D.system`` into ``R`` sending D's anchor class onto class ``q``.

    Returns ``None`` when no orientation-preserving isomorphism does this.
    """
    q %= 3
    dmap = find_isomorphism(D.system, R, root_filter=lambda r: F.class_of[r >> 1] == q)
    if dmap is None:
        return None
    out = [-1] * D.system.vertex_count
    for d, e in dmap.items():
        out[D.system.origin(d)] = R.origin(e)
    return out
