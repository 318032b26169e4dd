"""Generalized de Bruijn and Kautz digraphs and their Laplacian groups.

DB(n, d) puts edges v -> d*v + i (mod n) for i = 0..d-1; Kautz(n, d) puts
edges v -> -d*(v+1) + i (mod n).  Both families are d-in d-out regular,
hence Eulerian, and may carry loops and parallel edges (stored as
multiplicities).  The groups computed here via Smith Normal Form serve as
the oracle side for the closed-form module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .abelian import AbelianGroup
from .exact_linalg import IntegerMatrix, determinant, finite_part


class Family(str, Enum):
    DE_BRUIJN = "db"
    KAUTZ = "kautz"


@dataclass(frozen=True)
class GraphSpec:
    family: Family
    n: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 1:
            raise ValueError(f"vertex count {self.n} < 1")
        if self.d < 1:
            raise ValueError(f"out-degree {self.d} < 1")


@dataclass(frozen=True)
class Digraph:
    """Multidigraph on 0..n-1 given by an edge-multiplicity matrix."""

    n: int
    adjacency: tuple  # n x n, row-major tuple of tuples

    def __post_init__(self):
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if len(adj) != self.n or any(len(row) != self.n for row in adj):
            raise ValueError("adjacency is not n x n")
        if any(x < 0 for row in adj for x in row):
            raise ValueError("negative edge multiplicity")

    def out_degree(self, v: int) -> int:
        return sum(self.adjacency[v])

    def in_degree(self, v: int) -> int:
        return sum(row[v] for row in self.adjacency)


def build(spec: GraphSpec) -> Digraph:
    n, d = spec.n, spec.d
    adj = [[0] * n for _ in range(n)]
    for v in range(n):
        base = d * v if spec.family is Family.DE_BRUIJN else -d * (v + 1)
        for i in range(d):
            adj[v][(base + i) % n] += 1
    return Digraph(n, tuple(tuple(row) for row in adj))


def is_eulerian(g: Digraph) -> bool:
    return all(g.out_degree(v) == g.in_degree(v) for v in range(g.n))


def laplacian(g: Digraph) -> IntegerMatrix:
    """D - A with D the diagonal of indegrees (equals d*I - A for DB/Kautz)."""
    rows = []
    for v in range(g.n):
        row = [-x for x in g.adjacency[v]]
        row[v] += g.in_degree(v)
        rows.append(row)
    return IntegerMatrix.from_rows(rows)


def reduced_laplacian(g: Digraph, root: int) -> IntegerMatrix:
    if g.n < 2:
        raise ValueError("reduced Laplacian needs at least two vertices")
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} outside 0..{g.n - 1}")
    full = laplacian(g).to_rows()
    rows = [[x for j, x in enumerate(row) if j != root]
            for i, row in enumerate(full) if i != root]
    return IntegerMatrix.from_rows(rows)


def spanning_tree_count(g: Digraph, root: int) -> int:
    """Number of spanning trees oriented toward root (Matrix Tree Theorem)."""
    return abs(determinant(reduced_laplacian(g, root)))


def sandpile_group_snf(g: Digraph, root: int) -> AbelianGroup:
    """Finite part of the Smith group of the reduced Laplacian at root.

    Root-independent when the graph is Eulerian.
    """
    return finite_part(reduced_laplacian(g, root))


def critical_group_snf(g: Digraph) -> AbelianGroup:
    """Finite part of the Smith group of the full Laplacian."""
    return finite_part(laplacian(g))


def digraph_json(g: Digraph, spec: GraphSpec | None = None) -> dict:
    out = {"n": g.n, "adjacency": [list(row) for row in g.adjacency]}
    if spec is not None:
        out["family"] = spec.family.value
        out["d"] = spec.d
    return out
