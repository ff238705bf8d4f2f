"""Embedded plane graphs stored as rotation systems.

A graph with ``E`` edges has ``2E`` darts.  Edge ``i`` owns darts ``2i`` and
``2i + 1``; dart ``2i`` leaves the first listed endpoint, so ``twin(d) = d ^ 1``.
Each vertex keeps the counter-clockwise cyclic list of the darts leaving it.
Multi-edges are allowed, loops are not.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

__all__ = [
    "RotationSystem",
    "ValidationReport",
    "ParseError",
    "parse_rotation_system",
    "to_document",
    "serialize",
    "validate",
    "faces",
    "mirror",
    "op_equivalent",
    "find_isomorphism",
    "canonical_word",
    "export",
    "from_faces",
]


class ParseError(ValueError):
    """Raised for documents that do not describe a valid rotation system."""


@dataclass(frozen=True, eq=False)
class RotationSystem:
    """Immutable rotation system.

    ``rotation[v]`` lists the darts leaving ``v`` in counter-clockwise order.
    ``layers`` optionally records the layered drawing a builder produced
    (vertex ids, innermost layer first); it is metadata and ignored by ``==``.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    layers: tuple[tuple[int, ...], ...] | None = None
    _next: tuple[int, ...] = field(init=False, repr=False)
    _prev: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n, edges, rotation = self.vertex_count, self.edges, self.rotation
        if n < 0:
            raise ParseError("vertex count must be non-negative")
        if len(rotation) != n:
            raise ParseError(f"rotation has {len(rotation)} entries, expected {n}")
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge {i} has endpoint outside 0..{n - 1}")
            if u == v:
                raise ParseError(f"edge {i} is a loop at vertex {u}")
        nd = 2 * len(edges)
        nxt = [-1] * nd
        prv = [-1] * nd
        listed = [False] * nd
        for v, darts in enumerate(rotation):
            for d in darts:
                if not 0 <= d < nd:
                    raise ParseError(f"vertex {v} lists unknown dart {d}")
                if edges[d >> 1][d & 1] != v:
                    raise ParseError(f"vertex {v} lists edge {d >> 1}, which is not incident to it")
                if listed[d]:
                    raise ParseError(f"dart {d} listed twice")
                listed[d] = True
            for i, d in enumerate(darts):
                e = darts[(i + 1) % len(darts)]
                nxt[d] = e
                prv[e] = d
        if -1 in nxt:
            d = nxt.index(-1)
            raise ParseError(f"edge {d >> 1} missing from the rotation of vertex {self.origin(d)}")
        object.__setattr__(self, "_next", tuple(nxt))
        object.__setattr__(self, "_prev", tuple(prv))

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edge_rotation(
        cls,
        vertex_count: int,
        edges: Iterable[Sequence[int]],
        edge_rotation: Iterable[Iterable[int]],
        layers: Iterable[Iterable[int]] | None = None,
    ) -> "RotationSystem":
        """Build from per-vertex CCW lists of *edge* ids (the JSON form)."""
        edges = tuple((int(u), int(v)) for u, v in edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ParseError(f"edge {i} has endpoint outside 0..{vertex_count - 1}")
        rotation = []
        for v, ids in enumerate(edge_rotation):
            darts = []
            for e in ids:
                e = int(e)
                if not 0 <= e < len(edges):
                    raise ParseError(f"vertex {v} lists unknown edge {e}")
                a, b = edges[e]
                if a == v:
                    darts.append(2 * e)
                elif b == v:
                    darts.append(2 * e + 1)
                else:
                    raise ParseError(f"vertex {v} lists edge {e}, which is not incident to it")
            rotation.append(tuple(darts))
        lay = None if layers is None else tuple(tuple(int(x) for x in layer) for layer in layers)
        return cls(int(vertex_count), edges, tuple(rotation), lay)

    # -- dart algebra ---------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def dart_count(self) -> int:
        return 2 * len(self.edges)

    @staticmethod
    def twin(d: int) -> int:
        return d ^ 1

    def origin(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def target(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    def next_ccw(self, d: int) -> int:
        return self._next[d]

    def prev_ccw(self, d: int) -> int:
        return self._prev[d]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbours of ``v`` in rotation order (repeated for multi-edges)."""
        return [self.target(d) for d in self.rotation[v]]

    def edge_rotation(self) -> list[list[int]]:
        return [[d >> 1 for d in darts] for darts in self.rotation]

    def with_layers(self, layers: Iterable[Iterable[int]] | None) -> "RotationSystem":
        lay = None if layers is None else tuple(tuple(layer) for layer in layers)
        return RotationSystem(self.vertex_count, self.edges, self.rotation, lay)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.rotation == other.rotation
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges, self.rotation))


# -- serialization ---------------------------------------------------------


def to_document(R: RotationSystem) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "vertices": R.vertex_count,
        "edges": [list(e) for e in R.edges],
        "rotation": R.edge_rotation(),
    }
    if R.layers is not None:
        doc["layers"] = [list(layer) for layer in R.layers]
    return doc


def serialize(R: RotationSystem) -> str:
    """Canonical JSON text; key order and spacing are fixed."""
    return json.dumps(to_document(R), separators=(", ", ": ")) + "\n"


def parse_rotation_system(document: str | bytes | Mapping[str, Any]) -> RotationSystem:
    """Parse the JSON schema ``{"vertices", "edges", "rotation"[, "layers"]}``."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ParseError("document must be a JSON object")
    try:
        n = document["vertices"]
        edges = document["edges"]
        rotation = document["rotation"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("'vertices' must be an integer")
    if not isinstance(edges, list) or any(
        not isinstance(e, list) or len(e) != 2 or not all(isinstance(x, int) for x in e) for e in edges
    ):
        raise ParseError("'edges' must be a list of integer pairs")
    if not isinstance(rotation, list) or any(not isinstance(r, list) for r in rotation):
        raise ParseError("'rotation' must be a list of lists")
    layers = document.get("layers")
    if layers is not None and (
        not isinstance(layers, list) or any(not isinstance(layer, list) for layer in layers)
    ):
        raise ParseError("'layers' must be a list of vertex-id lists")
    return RotationSystem.from_edge_rotation(n, edges, rotation, layers)


def from_faces(vertex_count: int, triangles: Iterable[Sequence[int]]) -> RotationSystem:
    """Rotation system of a simple map given by its CCW-oriented faces."""
    nxt: dict[tuple[int, int], tuple[int, int]] = {}
    for face in triangles:
        k = len(face)
        for i in range(k):
            v, x, y = face[i], face[(i + 1) % k], face[i - 1]
            nxt[(v, x)] = (v, y)
    edges: list[tuple[int, int]] = []
    index: dict[frozenset[int], int] = {}
    for u, w in sorted(nxt):
        key = frozenset((u, w))
        if key not in index:
            index[key] = len(edges)
            edges.append((u, w))
    rotation: list[list[int]] = []
    for v in range(vertex_count):
        start = min(w for (u, w) in nxt if u == v)
        cyc, cur = [], (v, start)
        while True:
            cyc.append(index[frozenset(cur)])
            cur = nxt[cur]
            if cur == (v, start):
                break
        rotation.append(cyc)
    return RotationSystem.from_edge_rotation(vertex_count, edges, rotation)


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    two_connected: bool
    all_faces_triangles: bool
    degree_histogram: dict[int, int]
    in_P: bool
    in_H: bool
    simple: bool
    euler_characteristic: int | None = None

    def summary(self) -> str:
        hist = ",".join(f"{d}:{c}" for d, c in sorted(self.degree_histogram.items()))
        flags = (
            f"in_P={str(self.in_P).lower()} in_H={str(self.in_H).lower()} "
            f"simple={str(self.simple).lower()} connected={str(self.connected).lower()} "
            f"two_connected={str(self.two_connected).lower()} "
            f"triangles={str(self.all_faces_triangles).lower()}"
        )
        return f"{flags} degrees={{{hist}}}"


def _components(R: RotationSystem) -> int:
    seen = [False] * R.vertex_count
    count = 0
    for s in range(R.vertex_count):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in R.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def _has_cut_vertex(R: RotationSystem) -> bool:
    """Tarjan lowpoint test; edges are tracked by id so parallel edges count."""
    n = R.vertex_count
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(R.rotation[root]))]
        while stack:
            v, parent_edge, it = stack[-1]
            advanced = False
            for d in it:
                if d >> 1 == parent_edge:
                    continue
                w = R.target(d)
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, d >> 1, iter(R.rotation[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if u != root and low[v] >= disc[u]:
                    return True
        if root_children > 1:
            return True
    return False


def _face_cycles(R: RotationSystem) -> list[list[int]]:
    seen = [False] * R.dart_count
    cycles = []
    for d0 in range(R.dart_count):
        if seen[d0]:
            continue
        cyc, d = [], d0
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = R.next_ccw(d ^ 1)
        cycles.append(cyc)
    return cycles


def validate(R: RotationSystem) -> ValidationReport:
    n = R.vertex_count
    hist = dict(sorted(Counter(R.degree(v) for v in range(n)).items()))
    connected = n > 0 and _components(R) == 1
    two_connected = connected and n >= 3 and not _has_cut_vertex(R)
    cycles = _face_cycles(R)
    triangles = bool(cycles) and all(len(c) == 3 for c in cycles)
    pairs = Counter(frozenset(e) for e in R.edges)
    simple = all(c == 1 for c in pairs.values())
    chi = n - R.edge_count + len(cycles) if connected else None
    plane_triangulation = connected and two_connected and triangles and chi == 2
    in_P = plane_triangulation and set(hist) <= {3, 6}
    in_H = plane_triangulation and max(hist, default=0) <= 6
    return ValidationReport(connected, two_connected, triangles, hist, in_P, in_H, simple, chi)


def faces(R: RotationSystem) -> list[list[int]]:
    """Face boundaries as dart cycles; the successor of ``d`` is ``next_ccw(twin(d))``."""
    if R.vertex_count == 0 or _components(R) != 1:
        raise ValueError("face extraction needs a connected rotation system")
    return _face_cycles(R)


def mirror(R: RotationSystem) -> RotationSystem:
    """Reverse every rotation (orientation-reversing reflection)."""
    rotation = tuple(tuple(reversed(darts)) for darts in R.rotation)
    return RotationSystem(R.vertex_count, R.edges, rotation, R.layers)


# -- orientation-preserving isomorphism -------------------------------------


def _traverse(R: RotationSystem, root: int) -> tuple[list[int], list[int]]:
    """Breadth-first dart discovery from ``root``.

    Returns the discovery order and the traversal word: for each dart in
    order, the labels of its rotation successor and its twin.
    """
    label = {root: 0}
    order = [root]
    word: list[int] = []
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for e in (R.next_ccw(d), d ^ 1):
            if e not in label:
                label[e] = len(order)
                order.append(e)
            word.append(label[e])
    return order, word


def canonical_word(R: RotationSystem) -> tuple[int, ...]:
    """Least traversal word over all roots leaving a vertex of minimum degree.

    Isomorphisms preserve degrees, so restricting roots this way still gives
    a complete invariant for connected maps.
    """
    if R.dart_count == 0:
        return ()
    low = min(R.degree(v) for v in range(R.vertex_count) if R.degree(v))
    best: list[int] | None = None
    for r in range(R.dart_count):
        if R.degree(R.origin(r)) != low:
            continue
        _, w = _traverse(R, r)
        if best is None or w < best:
            best = w
    return tuple(best or ())


def find_isomorphism(
    R1: RotationSystem,
    R2: RotationSystem,
    root_filter: Callable[[int], bool] | None = None,
) -> dict[int, int] | None:
    """Dart bijection R1 -> R2 commuting with rotation and twin, or ``None``.

    Dart 0 of ``R1`` is the fixed root; every dart of ``R2`` accepted by
    ``root_filter`` is tried as its image.
    """
    if R1.vertex_count != R2.vertex_count or R1.edge_count != R2.edge_count:
        return None
    if R1.dart_count == 0:
        return {}
    if sorted(map(len, R1.rotation)) != sorted(map(len, R2.rotation)):
        return None
    order1, word1 = _traverse(R1, 0)
    if len(order1) != R1.dart_count:
        raise ValueError("isomorphism test needs connected systems")
    root_degree = R1.degree(R1.origin(0))
    for r in range(R2.dart_count):
        if R2.degree(R2.origin(r)) != root_degree:
            continue
        if root_filter is not None and not root_filter(r):
            continue
        order2, word2 = _traverse(R2, r)
        if word2 == word1 and len(order2) == len(order1):
            return dict(zip(order1, order2))
    return None


def op_equivalent(R1: RotationSystem, R2: RotationSystem) -> bool:
    return find_isomorphism(R1, R2) is not None


def vertex_map(R1: RotationSystem, R2: RotationSystem, dart_map: Mapping[int, int]) -> list[int]:
    """Vertex correspondence induced by a dart isomorphism."""
    out = [-1] * R1.vertex_count
    for d, e in dart_map.items():
        out[R1.origin(d)] = R2.origin(e)
    return out


# -- export ----------------------------------------------------------------

_DOT_COLORS = ("red", "green", "blue")


def _classes_of(F: Any) -> Sequence[int] | None:
    if F is None:
        return None
    return getattr(F, "class_of", F)


def export(R: RotationSystem, F: Any = None, format: str = "json") -> str:
    """Render ``R`` as canonical JSON, Graphviz DOT or a static SVG.

    ``F`` is an optional edge classification (a ``Factorization`` or any
    sequence of classes indexed by edge id) used to colour DOT/SVG output.
    """
    classes = _classes_of(F)
    if classes is not None and len(classes) != R.edge_count:
        raise ValueError("factorization does not cover every edge")
    if format == "json":
        return serialize(R)
    if format == "dot":
        lines = ["graph G {"]
        for v in range(R.vertex_count):
            lines.append(f"  {v};")
        for i, (u, v) in enumerate(R.edges):
            if classes is None:
                lines.append(f"  {u} -- {v} [id={i}];")
            else:
                q = classes[i]
                lines.append(f"  {u} -- {v} [id={i}, class={q}, color={_DOT_COLORS[q]}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if format == "svg":
        from hexorb._layout import render_svg

        return render_svg(R, classes)
    raise ValueError(f"unknown export format {format!r}")
