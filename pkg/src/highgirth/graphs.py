"""Base distance graphs on balanced 0/1 vectors.

The base graph in quarter-dimension ``n`` has one vertex per 0/1 vector of
length ``4n`` with exactly ``2n`` ones; two vertices are adjacent when their
Euclidean scalar product equals ``n``.  Every edge then has squared length
``2n`` exactly, so the graph sits in R^{4n} as a sqrt(2n)-distance graph
(rescalable to unit distance by homothety).

Vertices are stored as integer bitmasks (bit ``i`` holds coordinate ``i+1``)
and listed in colexicographic order of their supports, which coincides with
increasing numeric order of the masks.  All orderings are deterministic:
two constructions of the same graph are identical element for element.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, exp, log
from typing import Iterator

#: Refuse full materialization above this many coordinates unless overridden.
#: C(16,8) = 12870 vertices is the practical desk ceiling.
DIMENSION_GUARD = 16


class SizeGuardError(ValueError):
    """A requested construction exceeds the configured size guard."""


class MetricError(ValueError):
    """An edge violates the common squared-distance invariant."""

    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.edge = edge


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set-bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class BitVertex:
    """A balanced 0/1 vector of even length, stored as a bitmask.

    Bit ``i`` of ``mask`` is coordinate ``i+1``; exactly half the
    coordinates must be 1.
    """

    mask: int
    length: int

    def __post_init__(self):
        if self.length <= 0 or self.length % 2:
            raise ValueError(f"length must be positive and even, got {self.length}")
        if self.mask < 0 or self.mask >> self.length:
            raise ValueError("mask does not fit in the declared length")
        if self.mask.bit_count() * 2 != self.length:
            raise ValueError(
                f"expected {self.length // 2} ones in a vector of length {self.length}, "
                f"got {self.mask.bit_count()}"
            )

    @classmethod
    def from_string(cls, bits: str) -> "BitVertex":
        """Parse a '0'/'1' string; leftmost character is coordinate 1."""
        mask = 0
        for i, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid bit character {ch!r}")
        return cls(mask, len(bits))

    def to_string(self) -> str:
        return "".join("1" if (self.mask >> i) & 1 else "0" for i in range(self.length))

    @property
    def weight(self) -> int:
        return self.mask.bit_count()

    def coords(self) -> tuple[int, ...]:
        return tuple((self.mask >> i) & 1 for i in range(self.length))


def scalar_product(x: BitVertex, y: BitVertex) -> int:
    """Euclidean scalar product of two 0/1 vectors: |{i : x_i = y_i = 1}|."""
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")
    return (x.mask & y.mask).bit_count()


class Graph:
    """An undirected graph on vertices ``0..num_vertices-1``.

    Edges are kept in a canonical sorted list of ``(u, v)`` pairs with
    ``u < v``; adjacency is a bitmask per vertex for fast set algebra.
    """

    __slots__ = ("num_vertices", "edge_list", "adj", "_edge_index")

    def __init__(self, num_vertices: int, edges):
        if num_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        self.num_vertices = num_vertices
        canon = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            canon.append((u, v) if u < v else (v, u))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        self.edge_list: list[tuple[int, int]] = canon
        adj = [0] * num_vertices
        for u, v in canon:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj: list[int] = adj
        self._edge_index: dict[tuple[int, int], int] | None = None

    @property
    def num_edges(self) -> int:
        return len(self.edge_list)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return iter_bits(self.adj[v])

    def edge_index(self, u: int, v: int) -> int:
        """Index of edge ``{u, v}`` in the canonical edge list."""
        if self._edge_index is None:
            self._edge_index = {e: i for i, e in enumerate(self.edge_list)}
        return self._edge_index[(u, v) if u < v else (v, u)]


class BaseGraph(Graph):
    """The fully materialized base graph for quarter-dimension ``n``."""

    __slots__ = ("n", "vertices")

    def __init__(self, n: int, vertices: list[BitVertex], edges):
        super().__init__(len(vertices), edges)
        self.n = n
        self.vertices = vertices

    @property
    def dimension(self) -> int:
        return 4 * self.n

    def vertex_strings(self) -> list[str]:
        return [v.to_string() for v in self.vertices]


def _balanced_masks(dim: int) -> list[int]:
    """All masks of width ``dim`` with ``dim/2`` set bits, in numeric order."""
    mask = (1 << (dim // 2)) - 1
    limit = 1 << dim
    out = []
    while mask < limit:
        out.append(mask)
        # Gosper's hack: next larger mask with the same popcount
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple
    return out


def build_base_graph(n: int, allow_large: bool = False) -> BaseGraph:
    """Construct the base graph for quarter-dimension ``n``.

    Vertices are the C(4n, 2n) balanced 0/1 vectors in colexicographic
    order; edges join vectors with scalar product exactly ``n``.  Refuses
    dimensions above ``DIMENSION_GUARD`` unless ``allow_large`` is set.
    """
    if n < 1:
        raise ValueError(f"quarter-dimension must be >= 1, got {n}")
    dim = 4 * n
    if dim > DIMENSION_GUARD and not allow_large:
        raise SizeGuardError(
            f"dimension {dim} exceeds guard {DIMENSION_GUARD}; "
            f"pass allow_large=True to override"
        )
    masks = _balanced_masks(dim)
    vertices = [BitVertex(m, dim) for m in masks]
    edges = []
    for i, mi in enumerate(masks):
        for j in range(i + 1, len(masks)):
            if (mi & masks[j]).bit_count() == n:
                edges.append((i, j))
    return BaseGraph(n, vertices, edges)


@dataclass(frozen=True)
class EdgeSubset:
    """A subset of a base graph's edges, as a bitmask over its edge list.

    Bit ``i`` of ``mask`` marks membership of ``base.edge_list[i]``.  The
    vertex set is always the full base vertex set (spanning subgraph).
    """

    base: BaseGraph
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.base.num_edges:
            raise ValueError("edge mask wider than the base edge list")

    @classmethod
    def empty(cls, base: BaseGraph) -> "EdgeSubset":
        return cls(base, 0)

    @classmethod
    def full(cls, base: BaseGraph) -> "EdgeSubset":
        return cls(base, (1 << base.num_edges) - 1)

    @classmethod
    def from_edge_indices(cls, base: BaseGraph, indices) -> "EdgeSubset":
        mask = 0
        for i in indices:
            if not 0 <= i < base.num_edges:
                raise ValueError(f"edge index {i} out of range")
            mask |= 1 << i
        return cls(base, mask)

    @classmethod
    def from_hex(cls, base: BaseGraph, hex_mask: str) -> "EdgeSubset":
        return cls(base, int(hex_mask, 16))

    @property
    def num_edges(self) -> int:
        return self.mask.bit_count()

    def edge_indices(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def contains(self, edge_index: int) -> bool:
        return bool((self.mask >> edge_index) & 1)

    def edges(self) -> list[tuple[int, int]]:
        el = self.base.edge_list
        return [el[i] for i in iter_bits(self.mask)]

    def to_graph(self) -> Graph:
        return Graph(self.base.num_vertices, self.edges())

    def mask_hex(self) -> str:
        """Hex encoding of the mask, zero-padded to cover the edge list."""
        width = (self.base.num_edges + 3) // 4
        return format(self.mask, f"0{max(width, 1)}x")


def verify_unit_distance(g: BaseGraph) -> int:
    """Check every edge has squared Euclidean distance exactly ``2n``.

    Returns the common squared distance ``2n`` on success; raises
    ``MetricError`` naming the first violating edge otherwise.  For 0/1
    vectors the squared distance is the Hamming distance, so the check is
    exact integer arithmetic.
    """
    target = 2 * g.n
    for u, v in g.edge_list:
        d2 = (g.vertices[u].mask ^ g.vertices[v].mask).bit_count()
        if d2 != target:
            raise MetricError(
                f"edge ({u}, {v}) has squared distance {d2}, expected {target}",
                edge=(u, v),
            )
    return target


def embed_codimension(g: BaseGraph, j: int) -> list[tuple[int, ...]]:
    """Isometric copy of the vertex set in dimension ``4n + j``.

    Appends ``j`` zero coordinates to each vertex; all pairwise distances
    are preserved exactly.
    """
    if j < 0:
        raise ValueError(f"codimension must be >= 0, got {j}")
    tail = (0,) * j
    return [v.coords() + tail for v in g.vertices]


@dataclass(frozen=True)
class CountSummary:
    """Closed-form counts and finite growth rates for the base graph."""

    n: int
    num_vertices: int
    num_edges: int          # unordered edge count
    ordered_edge_count: int  # counts each edge twice
    vertex_rate: float      # num_vertices ** (1 / 4n)
    edge_rate: float        # ordered_edge_count ** (1 / 4n)


def count_formulas(n: int) -> CountSummary:
    """Vertex and edge counts with their per-coordinate growth rates.

    N = C(4n, 2n) and the unordered edge count M = C(4n, 2n) * C(2n, n)^2 / 2.
    The ordered count 2M is reported alongside, and the rates N^(1/4n) and
    (2M)^(1/4n) approach 2 and 4 respectively as n grows.  Counts use exact
    integer arithmetic.
    """
    if n < 1:
        raise ValueError(f"quarter-dimension must be >= 1, got {n}")
    nv = comb(4 * n, 2 * n)
    ordered = nv * comb(2 * n, n) ** 2
    if ordered % 2:
        raise AssertionError("ordered edge count must be even")
    dim = 4 * n
    return CountSummary(
        n=n,
        num_vertices=nv,
        num_edges=ordered // 2,
        ordered_edge_count=ordered,
        vertex_rate=exp(log(nv) / dim),
        edge_rate=exp(log(ordered) / dim),
    )
