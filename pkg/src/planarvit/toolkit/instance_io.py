"""Plain-text rotation-system instance files.

    pvit 1 <n> <m> <s> <t>
    # optional comment lines
    <id>: <v1> <v2> ... <vd>      neighbours in clockwise order

Every vertex id in ``0..n-1`` appears on exactly one line.
"""

from __future__ import annotations

from ..errors import AsymmetricAdjacency, DuplicateEdge, ParseError
from ..planar_core import EmbeddedGraph, build_embedded_graph

MAGIC = "pvit"
VERSION = 1


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError as exc:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line) from exc


def parse_instance(text: str) -> EmbeddedGraph:
    header = None
    rows: dict[int, tuple[int, list[int]]] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 6 or parts[0] != MAGIC:
                raise ParseError(f"header must be '{MAGIC} {VERSION} n m s t'", no)
            ver, n, m, s, t = _ints(parts[1:], no)
            if ver != VERSION:
                raise ParseError(f"unsupported format version {ver}", no)
            if n < 1 or m < 0:
                raise ParseError("vertex and edge counts must be positive", no)
            header = (n, m, s, t, no)
            continue
        if ":" not in line:
            raise ParseError("vertex line must look like 'id: v1 v2 ...'", no)
        head, _, tail = line.partition(":")
        (vid,) = _ints([head.strip()], no) if head.strip() else (None,)
        if vid is None:
            raise ParseError("missing vertex id", no)
        n = header[0]
        if not 0 <= vid < n:
            raise ParseError(f"vertex id {vid} out of range 0..{n - 1}", no)
        if vid in rows:
            raise ParseError(f"vertex {vid} listed twice (first on line {rows[vid][0]})", no)
        nbrs = _ints(tail.split(), no)
        for w in nbrs:
            if not 0 <= w < n:
                raise ParseError(f"neighbour {w} out of range", no)
            if w == vid:
                raise ParseError(f"self-loop at vertex {vid}", no)
        if len(set(nbrs)) != len(nbrs):
            raise DuplicateEdge(f"line {no}: vertex {vid} lists a neighbour twice")
        rows[vid] = (no, nbrs)
    if header is None:
        raise ParseError("empty instance", 1)
    n, m, s, t, hline = header
    missing = [v for v in range(n) if v not in rows]
    if missing:
        raise ParseError(f"no line for vertex {missing[0]}", hline)
    nbr_sets = {v: set(rows[v][1]) for v in range(n)}
    for v in range(n):
        for w in rows[v][1]:
            if v not in nbr_sets[w]:
                raise AsymmetricAdjacency(
                    f"line {rows[v][0]}: vertex {v} lists {w} but line {rows[w][0]} does not list {v}")
    total = sum(len(rows[v][1]) for v in range(n))
    if total != 2 * m:
        raise ParseError(f"header says {m} edges but the rotations contain {total // 2}", hline)
    return build_embedded_graph(n, s, t, [rows[v][1] for v in range(n)])


def read_instance(path: str) -> EmbeddedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def serialize_instance(g: EmbeddedGraph, comments: list[str] | None = None) -> str:
    out = [f"{MAGIC} {VERSION} {g.n} {g.m} {g.s} {g.t}"]
    for c in comments or ():
        out.append(f"# {c}")
    ptr = g.indptr.tolist()
    nb = g.nbrs.tolist()
    for v in range(g.n):
        out.append(f"{v}: " + " ".join(map(str, nb[ptr[v]:ptr[v + 1]])))
    return "\n".join(out) + "\n"


def write_instance(g: EmbeddedGraph, path: str, comments: list[str] | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(g, comments))
