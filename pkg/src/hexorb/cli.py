"""``hexorb`` command line.

Exit codes: 0 ok, 1 I/O failure, 2 bad input, 3 construction premise not
met, 4 graph walks disagree with the arithmetic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from typing import Sequence

from hexorb.builder import align, build
from hexorb.indexcalc import (
    IndexVector,
    classify,
    measured_orbit,
    orbit,
    s_minus_of,
    s_walk,
    step,
)
from hexorb.planemap import ParseError, RotationSystem, export, parse_rotation_system, validate
from hexorb.spanning import (
    PreconditionError,
    certificate_to_json,
    end_tree_census,
    enumerate_hamilton_bonds,
    equitable_two_coloring,
    partition_even_caterpillars,
    partition_induced_paths,
)
from hexorb.trifactor import factorize

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_PREMISE, EXIT_MISMATCH = 0, 1, 2, 3, 4

CENSUS_HEADER = ["k", "m", "s", "orbit", "orbit_size", "one_point", "double_mirror", "simple", "order"]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _index_vector(values: Sequence[str]) -> IndexVector:
    try:
        k, m, s = (int(v) for v in values)
    except ValueError:
        raise CliError(EXIT_INPUT, "index-vector needs three integers k m s") from None
    try:
        return IndexVector(k, m, s)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _read_graph(path: str) -> RotationSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_rotation_system(text)
    except ParseError as exc:
        raise CliError(EXIT_INPUT, f"parse error: {exc}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror}") from None


def _emit(args: argparse.Namespace, lines: list[str], payload: object) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -- verbs -----------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    iv = _index_vector(args.kms)
    D = build(iv)
    F = None if args.format == "json" else D.factorization()
    _write(export(D.system, F, args.format), args.out)
    return EXIT_OK


def _orbit_payload(iv: IndexVector) -> tuple[list[str], dict]:
    o = orbit(iv)
    c = classify(o)
    line = f"{o} size={o.size}"
    if c.one_point:
        n, x = c.witness  # type: ignore[misc]
        line += f" one_point=(n={n},x={x}) double_mirror={_yn(c.double_mirror)}"
    line += f" simple={_yn(c.simple_graph)}"
    payload = {
        "orbit": [list(v) for v in o],
        "size": o.size,
        "one_point": c.one_point,
        "witness": list(c.witness) if c.witness else None,
        "double_mirror": c.double_mirror,
        "simple": c.simple_graph,
        "mirror_orbit": [list(v) for v in c.mirror_orbit],
        "order": iv.order,
    }
    return [line, f"mirror {c.mirror_orbit}"], payload


def cmd_orbit(args: argparse.Namespace) -> int:
    lines, payload = _orbit_payload(_index_vector(args.kms))
    _emit(args, lines, payload)
    return EXIT_OK


def census_rows(max_km: int) -> list[list[str]]:
    rows = []
    for k in range(1, max_km + 1):
        for m in range(1, max_km // k + 1):
            for s in range(m):
                iv = IndexVector(k, m, s)
                o = orbit(iv)
                c = classify(o)
                rows.append(
                    [
                        str(k), str(m), str(s), str(o), str(o.size),
                        str(c.one_point).lower(), str(c.double_mirror).lower(),
                        str(c.simple_graph).lower(), str(iv.order),
                    ]
                )
    return rows


def cmd_census(args: argparse.Namespace) -> int:
    if args.max_km < 1:
        raise CliError(EXIT_INPUT, "--max-km must be ≥ 1")
    rows = census_rows(args.max_km)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CENSUS_HEADER)
    writer.writerows(rows)
    _write(buf.getvalue(), args.out)
    sizes = Counter(int(r[4]) for r in rows)
    size_text = " ".join(f"{k}:{v}" for k, v in sorted(sizes.items()))
    # every vector determines its orbit, so a vector in two orbits would be a collision
    seen: dict[tuple[str, str, str], str] = {}
    collisions = 0
    for r in rows:
        for part in r[3].split():
            key = tuple(part.strip("()").split(","))
            other = seen.setdefault(key, r[3])  # type: ignore[arg-type]
            if set(other.split()) != set(r[3].split()):
                collisions += 1
    print(
        f"census: {len(rows)} rows; orbit sizes {size_text}; "
        f"two-element orbits {sizes.get(2, 0)}; collisions {collisions}",
        file=sys.stderr,
    )
    return EXIT_OK


def _drawing_for(args: argparse.Namespace):
    """Return ``(system, drawing, vertex map drawing -> system)``."""
    target = args.target
    if len(target) == 3:
        D = build(_index_vector(target))
        return D.system, D, list(range(D.system.vertex_count))
    if len(target) != 1:
        raise CliError(EXIT_INPUT, "partition needs k m s or one JSON graph file")
    R = _read_graph(target[0])
    if not validate(R).in_P:
        return R, None, None
    F = factorize(R)
    iv = measured_orbit(R, F)[0]
    D = build(iv)
    vmap = align(D, R, F, 0)
    if vmap is None:
        raise CliError(EXIT_MISMATCH, f"input graph is not the member built from {iv}")
    return R, D, vmap


def cmd_partition(args: argparse.Namespace) -> int:
    R, D, vmap = _drawing_for(args)
    if args.kind == "bonds":
        bonds = []
        lines = []
        for b in enumerate_hamilton_bonds(R):
            ca, cb = end_tree_census(R, b)
            bonds.append({"side_a": sorted(b.side_a), "side_b": sorted(b.side_b),
                          "census_a": ca.counts, "census_b": cb.counts})
            lines.append(f"{sorted(b.side_a)} | {sorted(b.side_b)}  degrees {ca.counts} / {cb.counts}")
        lines.append(f"{len(bonds)} Hamilton bonds")
        _emit(args, lines, {"bonds": bonds})
        return EXIT_OK
    if D is None:
        raise CliError(EXIT_PREMISE, "input is not a member of P (2-connected, degrees 3 or 6)")
    try:
        if args.kind == "caterpillar":
            certs = partition_even_caterpillars(D)
        else:
            qs = [q for q, iv in enumerate(orbit(D.index_vector)) if iv.m % 2 and 3 * iv.k >= iv.m]
            if not qs:
                raise PreconditionError("no class has M odd and K ≥ M/3")
            certs = partition_induced_paths(D, qs[0])
    except PreconditionError as exc:
        msg = str(exc)
        if args.kind == "caterpillar" and "mod 4" in msg:
            msg = "order ≢ 2 (mod 4)"
        raise CliError(EXIT_PREMISE, msg) from None
    docs = []
    lines = []
    for c in certs:
        doc = certificate_to_json(c)
        doc = {
            key: ([vmap[v] for v in val] if key in ("vertices", "spine") else
                  [[vmap[v] for v in leg] for leg in val] if key == "legs" else val)
            for key, val in doc.items()
        }
        big, small, eq = equitable_two_coloring(R, doc["vertices"])
        doc["coloring"] = [big, small]
        doc["equitable"] = eq
        docs.append(doc)
        lines.append(
            f"{doc['kind']} order={len(doc['vertices'])} coloring={big}/{small} "
            f"equitable={_yn(eq)} vertices={doc['vertices']}"
        )
    _emit(args, lines, {"certificates": docs})
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    R = _read_graph(args.graph)
    report = validate(R)
    lines = [report.summary()]
    payload: dict = {
        "in_P": report.in_P, "in_H": report.in_H, "simple": report.simple,
        "connected": report.connected, "two_connected": report.two_connected,
        "all_faces_triangles": report.all_faces_triangles,
        "degree_histogram": report.degree_histogram,
    }
    code = EXIT_OK
    if report.in_P:
        F = factorize(R)
        mo = measured_orbit(R, F)
        ok = all(step(mo[q]) == mo[(q + 1) % 3] for q in range(3))
        ok = ok and all(s_walk(R, F, q, "minus") == s_minus_of(mo[q]) for q in range(3))
        lines.append("orbit " + "".join(map(str, mo)))
        lines.append("arithmetic=walk " + ("✓" if ok else "✗ mismatch"))
        payload["orbit"] = [list(v) for v in mo]
        payload["arithmetic_agrees"] = ok
        if not ok:
            code = EXIT_MISMATCH
    _emit(args, lines, payload)
    return code


def cmd_export(args: argparse.Namespace) -> int:
    R = _read_graph(args.graph)
    F = factorize(R) if args.format != "json" and validate(R).in_P else None
    _write(export(R, F, args.format), args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hexorb", description="Plane triangulations with degrees 3 and 6.")
    sub = p.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("build", help="build the layered member with a given index-vector")
    b.add_argument("kms", nargs=3, metavar="K_M_S")
    b.add_argument("-o", "--out")
    b.add_argument("-f", "--format", choices=("json", "dot", "svg"), default="json")
    b.set_defaults(func=cmd_build)

    o = sub.add_parser("orbit", help="orbit and classification of an index-vector")
    o.add_argument("kms", nargs=3, metavar="K_M_S")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_orbit)

    c = sub.add_parser("census", help="CSV of every index-vector with k*m up to a bound")
    c.add_argument("--max-km", type=int, required=True)
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_census)

    pa = sub.add_parser("partition", help="spanning caterpillars, induced paths or Hamilton bonds")
    pa.add_argument("target", nargs="+", help="k m s, or a JSON graph file")
    pa.add_argument("--kind", choices=("caterpillar", "paths", "bonds"), default="caterpillar")
    pa.add_argument("--json", action="store_true")
    pa.set_defaults(func=cmd_partition)

    v = sub.add_parser("verify", help="validate a JSON graph and cross-check its orbit")
    v.add_argument("graph")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="convert a JSON graph to json, dot or svg")
    e.add_argument("graph")
    e.add_argument("-o", "--out")
    e.add_argument("-f", "--format", choices=("json", "dot", "svg"), default="json")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"hexorb: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"hexorb: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
