"""Canonical digraph representation and walk-count primitives.

Vertices are dense 0-based integers.  Edges are an ordered list of
``(source, target)`` pairs; the position of a pair in that list is the
edge's canonical id, which is what CNF constraints refer to.  All counts
are plain Python ints, so they are exact at any magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CountingError, LimitExceeded, reject_unknown_fields

#: Default cap on exhaustive enumerations (walks, covers, maps, ...).
DEFAULT_LIMIT = 10**7


@dataclass(frozen=True)
class DirectedGraph:
    """Simple digraph (no duplicate arcs; self-loops allowed)."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise CountingError("vertex-count-negative", f"n = {self.n}")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise CountingError(
                    "endpoint-out-of-range",
                    f"edge ({u}, {v}) outside vertex range [0, {self.n})",
                )
            if (u, v) in seen:
                raise CountingError("duplicate-edge", f"edge ({u}, {v}) repeated")
            seen.add((u, v))

    def successors(self) -> list[list[int]]:
        """Adjacency lists, each sorted ascending."""
        succ: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            succ[u].append(v)
        for lst in succ:
            lst.sort()
        return succ

    def edge_id(self, u: int, v: int) -> int:
        return self.edges.index((u, v))

    def adjacency_matrix(self) -> list[list[int]]:
        mat = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            mat[u][v] = 1
        return mat


def validate_graph(n: int, edges) -> DirectedGraph:
    """Build a DirectedGraph from raw data, rejecting malformed input."""
    return DirectedGraph(n, tuple((int(u), int(v)) for u, v in edges))


@dataclass(frozen=True)
class VertexColouring:
    """A total colouring ``vertex -> {1, ..., m}`` of a digraph.

    ``m`` is derived as the largest colour in use.
    """

    graph: DirectedGraph
    colours: tuple[int, ...]
    m: int = field(init=False)

    def __post_init__(self):
        if len(self.colours) != self.graph.n:
            raise CountingError(
                "colouring-incomplete",
                f"{len(self.colours)} colours for {self.graph.n} vertices",
            )
        if any(c < 1 for c in self.colours):
            raise CountingError("colour-not-positive", "colours must be >= 1")
        object.__setattr__(self, "m", max(self.colours, default=0))

    def colour_of(self, v: int) -> int:
        return self.colours[v]


def check_vertex(g: DirectedGraph, v: int, name: str) -> None:
    if not (0 <= v < g.n):
        raise CountingError("vertex-out-of-range", f"{name} = {v} not in [0, {g.n})")


def max_out_degree(g: DirectedGraph) -> int:
    """Largest out-degree; 0 for edgeless graphs."""
    deg = [0] * g.n
    for u, _ in g.edges:
        deg[u] += 1
    return max(deg, default=0)


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(n):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(n):
                    oi[j] += aik * bk[j]
    return out


def walk_count_matrix(g: DirectedGraph, a: int) -> list[list[int]]:
    """Entry (u, v) counts walks from u to v with exactly ``a`` edges.

    a = 0 yields the identity table.  Exact for any magnitude.
    """
    if a < 0:
        raise CountingError("negative-length", f"a = {a}")
    n = g.n
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    adj = g.adjacency_matrix()
    for _ in range(a):
        result = _mat_mul(result, adj)
    return result


def enumerate_walks(
    g: DirectedGraph, s: int, t: int, a: int, limit: int = DEFAULT_LIMIT
) -> list[tuple[int, ...]]:
    """All s-to-t walks with exactly ``a`` edges, lexicographic by vertex sequence.

    Raises LimitExceeded when more than ``limit`` walks exist; this is the
    independent brute-force oracle behind every walk counter.
    """
    if a < 0:
        raise CountingError("negative-length", f"a = {a}")
    if limit <= 0:
        raise CountingError("bad-limit", f"limit = {limit}")
    check_vertex(g, s, "s")
    check_vertex(g, t, "t")
    succ = g.successors()
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int) -> None:
        if remaining == 0:
            if prefix[-1] == t:
                if len(out) >= limit:
                    raise LimitExceeded(
                        f"more than {limit} walks of length {a} from {s} to {t}"
                    )
                out.append(tuple(prefix))
            return
        for v in succ[prefix[-1]]:
            prefix.append(v)
            rec(prefix, remaining - 1)
            prefix.pop()

    rec([s], a)
    return out


def total_walks(g: DirectedGraph, a: int) -> int:
    """Number of a-edge walks between any pair of endpoints."""
    return sum(sum(row) for row in walk_count_matrix(g, a))


# ---------------------------------------------------------------------------
# File format: {"n": int, "edges": [[u, v], ...]} with optional "colours",
# "s" and "t".  Unknown fields are rejected.
# ---------------------------------------------------------------------------

GRAPH_FIELDS = {"n", "edges", "colours", "s", "t"}


def graph_from_json(obj: dict, extra_fields: set[str] = frozenset()) -> dict:
    """Parse the graph instance format into its parts.

    Returns a dict with keys "graph" and, when present, "colouring", "s", "t"
    plus any field named in ``extra_fields`` (verbatim).  Rejects unknown keys.
    """
    if not isinstance(obj, dict):
        raise CountingError("malformed-instance", "graph file must be an object")
    reject_unknown_fields(obj, GRAPH_FIELDS | set(extra_fields), "graph instance")
    if "n" not in obj or "edges" not in obj:
        raise CountingError("malformed-instance", 'graph file needs "n" and "edges"')
    g = validate_graph(obj["n"], obj["edges"])
    parts: dict = {"graph": g}
    if "colours" in obj:
        parts["colouring"] = VertexColouring(g, tuple(int(c) for c in obj["colours"]))
    for key in ("s", "t"):
        if key in obj:
            parts[key] = int(obj[key])
    for key in extra_fields:
        if key in obj:
            parts[key] = obj[key]
    return parts


def graph_to_json(g: DirectedGraph, **extra) -> dict:
    obj: dict = {"n": g.n, "edges": [list(e) for e in g.edges]}
    obj.update({k: v for k, v in extra.items() if v is not None})
    return obj
