"""Static SVG rendering: concentric layers when known, Tutte embedding otherwise."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from hexorb.planemap import RotationSystem, faces

SIZE = 640
_COLORS = ("#d62728", "#2ca02c", "#1f77b4")


def layered_positions(R: RotationSystem) -> list[tuple[float, float]]:
    """Layer ``j`` goes on the circle of radius ``j + 1``."""
    pos = [(0.0, 0.0)] * R.vertex_count
    for j, layer in enumerate(R.layers or ()):
        n = len(layer)
        for i, v in enumerate(layer):
            a = 2 * math.pi * i / n
            pos[v] = ((j + 1) * math.cos(a), (j + 1) * math.sin(a))
    return pos


def tutte_positions(R: RotationSystem) -> list[tuple[float, float]]:
    """Barycentric embedding with the face left of dart 0 pinned to a circle."""
    n = R.vertex_count
    if n == 0:
        return []
    outer = next(f for f in faces(R) if 0 in f) if R.edge_count else []
    ring: list[int] = []
    for d in outer:
        v = R.origin(d)
        if v not in ring:
            ring.append(v)
    pos = np.zeros((n, 2))
    for i, v in enumerate(ring):
        a = 2 * math.pi * i / len(ring)
        pos[v] = (math.cos(a), math.sin(a))
    free = [v for v in range(n) if v not in set(ring)]
    if free:
        idx = {v: i for i, v in enumerate(free)}
        A = np.zeros((len(free), len(free)))
        b = np.zeros((len(free), 2))
        for v in free:
            i = idx[v]
            for w in R.neighbors(v):
                A[i, i] += 1
                if w in idx:
                    A[i, idx[w]] -= 1
                else:
                    b[i] += pos[w]
        pos[free] = np.linalg.solve(A, b)
    return [(float(x), float(y)) for x, y in pos]


def render_svg(R: RotationSystem, classes: Sequence[int] | None = None) -> str:
    pos = layered_positions(R) if R.layers else tutte_positions(R)
    if pos:
        span = max(max(abs(x), abs(y)) for x, y in pos) or 1.0
    else:
        span = 1.0
    scale = (SIZE / 2 - 20) / span

    def xy(v: int) -> tuple[float, float]:
        x, y = pos[v]
        return SIZE / 2 + scale * x, SIZE / 2 - scale * y

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    seen: dict[tuple[int, int], int] = {}
    for i, (u, v) in enumerate(R.edges):
        key = (min(u, v), max(u, v))
        rank = seen.get(key, 0)
        seen[key] = rank + 1
        color = "black" if classes is None else _COLORS[classes[i]]
        (x1, y1), (x2, y2) = xy(u), xy(v)
        if rank == 0:
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{color}"/>')
        else:
            # parallel edges bow out alternately to either side
            bend = 18 * ((rank + 1) // 2) * (1 if rank % 2 else -1)
            dx, dy = x2 - x1, y2 - y1
            norm = math.hypot(dx, dy) or 1.0
            cx = (x1 + x2) / 2 - bend * dy / norm
            cy = (y1 + y2) / 2 + bend * dx / norm
            out.append(
                f'<path d="M {x1:.2f} {y1:.2f} Q {cx:.2f} {cy:.2f} {x2:.2f} {y2:.2f}" '
                f'fill="none" stroke="{color}"/>'
            )
    for v in range(R.vertex_count):
        x, y = xy(v)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="white" stroke="black"><title>{v}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
