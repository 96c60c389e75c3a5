"""Exact combinatorial solvers: girth, cycle counts, independence, coloring.

These double as search oracles and as certificate verifiers, so every
routine is deterministic for a fixed input and budget, and every witness
re-verifies against the input graph.  Budgets degrade results to bounds
(``exact=False``); they never raise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .graphs import BaseGraph, EdgeSubset, Graph, SizeGuardError, iter_bits

#: Largest cycle length enumerated by default.
MAX_CYCLE_LENGTH = 8

#: Exhaustive subset scans refuse above this many subsets by default.
SUBSET_SCAN_GUARD = 500_000


class ForestError(ValueError):
    """A forbidden-subgraph family member contains no cycle."""


@dataclass(frozen=True)
class SolveBudget:
    """Limits for branch-and-bound searches; 0 means unlimited."""

    node_limit: int = 0
    time_limit: float = 0.0

    def __post_init__(self):
        if self.node_limit < 0 or self.time_limit < 0:
            raise ValueError("budget fields must be nonnegative")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact computation.

    ``value`` is the optimum when ``exact`` is set, otherwise a proven
    lower bound (with ``upper`` an upper bound where available).  Girth
    uses ``math.inf`` for forests.  ``witness`` re-verifies against the
    input graph whenever present.
    """

    value: int | float
    exact: bool
    witness: list | None = None
    upper: int | None = None

    def to_json(self) -> dict:
        value = "infinite" if self.value == math.inf else self.value
        doc: dict = {"value": value, "exact": self.exact}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.upper is not None:
            doc["upper"] = self.upper
        return doc


def as_graph(view) -> Graph:
    """Coerce a graph view (Graph, BaseGraph, or EdgeSubset) to a Graph."""
    if isinstance(view, Graph):
        return view
    if isinstance(view, EdgeSubset):
        return view.to_graph()
    raise TypeError(f"not a graph view: {type(view).__name__}")


def quarter_dimension(view) -> int | None:
    """The quarter-dimension n of a base-graph-derived view, if any."""
    if isinstance(view, BaseGraph):
        return view.n
    if isinstance(view, EdgeSubset):
        return view.base.n
    return None


class _Exhausted(Exception):
    pass


class _Budget:
    """Node/time accounting shared by the branch-and-bound searches."""

    def __init__(self, budget: SolveBudget | None):
        budget = budget or SolveBudget()
        self.node_limit = budget.node_limit
        self.deadline = (
            time.monotonic() + budget.time_limit if budget.time_limit else 0.0
        )
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.node_limit and self.nodes > self.node_limit:
            raise _Exhausted
        if self.deadline and not self.nodes % 256 and time.monotonic() > self.deadline:
            raise _Exhausted


def girth(view) -> SolveResult:
    """Length of the shortest cycle, with one shortest cycle as witness.

    Runs a breadth-first search from every vertex; a non-tree edge seen at
    depth d closes a walk of length dist(u) + dist(w) + 1 through the
    root, and the minimum such walk over all roots is the girth.  Forests
    report ``math.inf`` and no witness.
    """
    g = as_graph(view)
    adj = g.adj
    best: int | float = math.inf
    best_cycle: list[int] | None = None
    for root in range(g.num_vertices):
        if best == 3:
            break
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du >= best:
                continue
            m = adj[u]
            while m:
                low = m & -m
                m ^= low
                w = low.bit_length() - 1
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = du + dist[w] + 1
                    if length < best:
                        cycle = _reconstruct_cycle(parent, u, w)
                        if cycle is not None:
                            best = length
                            best_cycle = cycle
    return SolveResult(value=best, exact=True, witness=best_cycle)


def _reconstruct_cycle(parent: dict, u: int, w: int) -> list[int] | None:
    """Join the BFS-tree paths root..u and root..w; None if they overlap."""
    path_u = [u]
    while parent[path_u[-1]] != -1:
        path_u.append(parent[path_u[-1]])
    path_w = [w]
    while parent[path_w[-1]] != -1:
        path_w.append(parent[path_w[-1]])
    path_u.reverse()  # root .. u
    path_w.reverse()  # root .. w
    if set(path_u) & set(path_w[1:]):
        return None
    return path_u + path_w[:0:-1]  # root .. u, w .. (just after root)


def enumerate_cycles(g: Graph, s: int) -> Iterator[tuple[int, ...]]:
    """Yield every distinct s-cycle of ``g`` exactly once, as vertex tuples.

    Canonical form: the tuple starts at the cycle's smallest vertex, and
    its second vertex is smaller than its last (killing the reflection).
    Tuples are produced in lexicographic order; downstream event indexing
    relies on this order being stable.
    """
    if s < 3:
        raise ValueError(f"cycle length must be >= 3, got {s}")
    adj = g.adj
    for root in range(g.num_vertices):
        above_root = -1 << (root + 1)
        first = adj[root] & above_root
        for v1 in iter_bits(first):
            yield from _extend_cycle(adj, root, [root, v1], (1 << root) | (1 << v1), s)


def _extend_cycle(
    adj: list[int], root: int, path: list[int], used: int, s: int
) -> Iterator[tuple[int, ...]]:
    v = path[-1]
    above_root = -1 << (root + 1)
    if len(path) == s - 1:
        # close the cycle: adjacent to both ends, above the reflection bound
        closing = adj[v] & adj[root] & above_root & ~used & (-1 << (path[1] + 1))
        for w in iter_bits(closing):
            yield tuple(path) + (w,)
        return
    for w in iter_bits(adj[v] & above_root & ~used):
        path.append(w)
        yield from _extend_cycle(adj, root, path, used | (1 << w), s)
        path.pop()


class CycleCount(NamedTuple):
    labeled: int
    distinct: int


def count_cycles(view, s: int, max_s: int = MAX_CYCLE_LENGTH) -> CycleCount:
    """Count s-cycles: labeled (rooted, directed) and distinct edge sets.

    Every distinct cycle corresponds to exactly 2s labeled ones (s roots,
    2 directions).
    """
    if not 3 <= s <= max_s:
        raise ValueError(f"cycle length {s} outside [3, {max_s}]")
    g = as_graph(view)
    distinct = sum(1 for _ in enumerate_cycles(g, s))
    return CycleCount(labeled=2 * s * distinct, distinct=distinct)


def cycle_edges(g: Graph, cycle: Sequence[int]) -> list[tuple[int, int]]:
    """The edge pairs of a cycle given as a vertex sequence."""
    out = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        out.append((u, v) if u < v else (v, u))
    return out


def _greedy_clique(adj: list[int], n: int) -> list[int]:
    """Deterministic greedy clique: highest degree first, ties by index."""
    if n == 0:
        return []
    order = sorted(range(n), key=lambda v: (-adj[v].bit_count(), v))
    clique: list[int] = []
    allowed = (1 << n) - 1
    for v in order:
        if (allowed >> v) & 1:
            clique.append(v)
            allowed &= adj[v]
    return sorted(clique)


def _color_sort(adj: list[int], cands: int) -> list[tuple[int, int]]:
    """Greedy-color candidates; returns (vertex, color) with colors ascending."""
    colored = []
    uncolored = cands
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            colored.append((v, color))
            uncolored &= ~low
            avail &= ~adj[v]
            avail &= ~low
    return colored


def _max_clique(adj: list[int], n: int, budget: _Budget) -> tuple[list[int], bool]:
    """Branch-and-bound maximum clique with greedy-coloring upper bounds."""
    best = _greedy_clique(adj, n)
    exact = True

    def expand(cands: int, current: list[int]):
        nonlocal best
        budget.tick()
        for v, color in reversed(_color_sort(adj, cands)):
            if len(current) + color <= len(best):
                return
            current.append(v)
            narrowed = cands & adj[v]
            if narrowed:
                expand(narrowed, current)
            elif len(current) > len(best):
                best = sorted(current)
            current.pop()
            cands &= ~(1 << v)

    try:
        if n:
            expand((1 << n) - 1, [])
    except _Exhausted:
        exact = False
    return best, exact


#: Components above this size with low average degree use branch-and-reduce.
SPARSE_COMPONENT_SIZE = 64
SPARSE_AVERAGE_DEGREE = 8.0


def _greedy_sparse_mis(adj: list[int], active: int) -> list[int]:
    """Deterministic min-degree greedy independent set (initial incumbent)."""
    chosen = []
    while active:
        best_v, best_d = -1, None
        m = active
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            d = (adj[v] & active).bit_count()
            if best_d is None or d < best_d:
                best_v, best_d = v, d
                if d == 0:
                    break
        chosen.append(best_v)
        active &= ~(adj[best_v] | (1 << best_v))
    return chosen


def _sparse_mis(adj: list[int], n: int, budget: _Budget) -> tuple[list[int], bool]:
    """Branch-and-reduce maximum independent set for sparse graphs.

    Vertices of degree <= 1 are always taken (exchange argument); branching
    happens only on a maximum-degree vertex, in or out.  Far faster than
    the complement-clique route when the complement is dense.
    """
    best = _greedy_sparse_mis(adj, (1 << n) - 1)
    exact = True

    def search(active: int, current: list[int]):
        nonlocal best
        budget.tick()
        mark = len(current)
        try:
            while True:  # peel: degree <= 1 vertices are always optimal picks
                picked = -1
                m = active
                while m:
                    low = m & -m
                    m ^= low
                    v = low.bit_length() - 1
                    if (adj[v] & active).bit_count() <= 1:
                        picked = v
                        break
                if picked < 0:
                    break
                current.append(picked)
                active &= ~(adj[picked] | (1 << picked))
            if not active:
                if len(current) > len(best):
                    best = current.copy()
                return
            if len(current) + active.bit_count() <= len(best):
                return
            v_star, d_star = -1, -1
            m = active
            while m:
                low = m & -m
                m ^= low
                v = low.bit_length() - 1
                d = (adj[v] & active).bit_count()
                if d > d_star:
                    v_star, d_star = v, d
            current.append(v_star)
            search(active & ~(adj[v_star] | (1 << v_star)), current)
            current.pop()
            search(active & ~(1 << v_star), current)
        finally:
            del current[mark:]

    try:
        if n:
            search((1 << n) - 1, [])
    except _Exhausted:
        exact = False
    return sorted(best), exact


def _components(adj: list[int], n: int) -> Iterator[int]:
    """Connected components as vertex bitmasks, by smallest member."""
    seen = 0
    for v in range(n):
        if (seen >> v) & 1:
            continue
        comp = 0
        frontier = 1 << v
        while frontier:
            comp |= frontier
            grown = 0
            for u in iter_bits(frontier):
                grown |= adj[u]
            frontier = grown & ~comp
        seen |= comp
        yield comp


def _path_or_cycle_alpha(adj: list[int], comp: int, verts: list[int]) -> list[int]:
    """Maximum independent set of a degree-<=2 component (path or cycle)."""
    k = len(verts)
    if k <= 2:
        return [verts[0]]
    endpoints = [v for v in verts if (adj[v] & comp).bit_count() <= 1]
    start = min(endpoints) if endpoints else min(verts)
    order = [start]
    visited = {start}
    while len(order) < k:
        nxt = min(
            w
            for w in iter_bits(adj[order[-1]] & comp)
            if w not in visited
        )
        order.append(nxt)
        visited.add(nxt)
    stop = k if endpoints else k - 1  # a cycle must not wrap onto the start
    return [order[i] for i in range(0, stop, 2)]


def independence_number(view, budget: SolveBudget | None = None) -> SolveResult:
    """Exact independence number, assembled per connected component.

    Degree-<=2 components (paths and cycles) are solved in closed form.
    Large sparse components run branch-and-reduce on the graph itself;
    everything else goes through maximum clique on the component's
    complement via branch-and-bound with greedy-coloring upper bounds.
    Within budget the result is exact, otherwise the best independent set
    found so far is returned as a lower bound with ``exact=False``.
    """
    g = as_graph(view)
    acct = _Budget(budget)
    chosen: list[int] = []
    exact = True
    for comp in _components(g.adj, g.num_vertices):
        verts = list(iter_bits(comp))
        if len(verts) == 1:
            chosen.extend(verts)
            continue
        degrees = [(g.adj[v] & comp).bit_count() for v in verts]
        if max(degrees) <= 2:
            chosen.extend(_path_or_cycle_alpha(g.adj, comp, verts))
            continue
        local = {v: i for i, v in enumerate(verts)}
        size = len(verts)
        if size > SPARSE_COMPONENT_SIZE and (
            sum(degrees) / size <= SPARSE_AVERAGE_DEGREE
        ):
            comp_adj = [0] * size
            for v in verts:
                mask = 0
                for w in iter_bits(g.adj[v] & comp):
                    mask |= 1 << local[w]
                comp_adj[local[v]] = mask
            found, comp_exact = _sparse_mis(comp_adj, size, acct)
        else:
            comp_adj = [0] * size
            for v in verts:
                mask = 0
                for w in iter_bits(comp & ~g.adj[v] & ~(1 << v)):
                    mask |= 1 << local[w]
                comp_adj[local[v]] = mask
            found, comp_exact = _max_clique(comp_adj, size, acct)
        chosen.extend(verts[i] for i in found)
        exact = exact and comp_exact
    chosen.sort()
    return SolveResult(value=len(chosen), exact=exact, witness=chosen)


def _greedy_coloring(adj: list[int], n: int) -> list[int]:
    """Sequential coloring in descending-degree order (ties by index)."""
    order = sorted(range(n), key=lambda v: (-adj[v].bit_count(), v))
    color_of = [-1] * n
    color_masks: list[int] = []
    for v in order:
        for c, mask in enumerate(color_masks):
            if not mask & adj[v]:
                color_of[v] = c
                color_masks[c] |= 1 << v
                break
        else:
            color_of[v] = len(color_masks)
            color_masks.append(1 << v)
    return color_of


def _k_colorable(
    adj: list[int], order: list[int], k: int, budget: _Budget
) -> list[int] | None:
    """Backtracking k-colorability along a fixed vertex order.

    Colors are introduced in increasing order (at most one fresh color per
    step) to break color-class symmetry.
    """
    n = len(order)
    color_of = [-1] * len(adj)
    color_masks = [0] * k

    def assign(i: int, used: int) -> bool:
        budget.tick()
        if i == n:
            return True
        v = order[i]
        limit = min(used + 1, k)
        for c in range(limit):
            if not color_masks[c] & adj[v]:
                color_of[v] = c
                color_masks[c] |= 1 << v
                if assign(i + 1, max(used, c + 1)):
                    return True
                color_masks[c] &= ~(1 << v)
        color_of[v] = -1
        return False

    return list(color_of) if assign(0, 0) else None


def chromatic_number(view, budget: SolveBudget | None = None) -> SolveResult:
    """Exact chromatic number by iterative k-colorability branch-and-bound.

    Seeded by a greedy-coloring upper bound and a greedy-clique lower
    bound; vertices are branched in descending-degree order with ties by
    index.  On budget exhaustion returns the proven lower bound with the
    greedy upper bound in ``upper`` and ``exact=False``.
    """
    g = as_graph(view)
    n = g.num_vertices
    if n == 0:
        return SolveResult(value=0, exact=True, witness=[])
    adj = g.adj
    greedy = _greedy_coloring(adj, n)
    ub = max(greedy) + 1
    lb = max(len(_greedy_clique(adj, n)), 1)
    if lb >= ub:
        return SolveResult(value=ub, exact=True, witness=greedy)
    order = sorted(range(n), key=lambda v: (-adj[v].bit_count(), v))
    acct = _Budget(budget)
    proven_lb = lb
    try:
        for k in range(lb, ub):
            coloring = _k_colorable(adj, order, k, acct)
            if coloring is not None:
                return SolveResult(value=k, exact=True, witness=coloring)
            proven_lb = k + 1
    except _Exhausted:
        return SolveResult(value=proven_lb, exact=False, witness=greedy, upper=ub)
    return SolveResult(value=ub, exact=True, witness=greedy)


@dataclass(frozen=True)
class RatioBound:
    """The covering lower bound ceil(N / alpha) and its growth rate."""

    chi_lower: int
    rate: float | None  # (N / alpha) ** (1 / 4n) when n is known


def chromatic_lower_bound_ratio(view, alpha_bound: int) -> RatioBound:
    """Chromatic lower bound ceil(N / alpha_bound) from an independence bound.

    When the view derives from a base graph the per-coordinate rate
    (N / alpha_bound)^(1/4n) is attached for growth comparisons.
    """
    if alpha_bound < 1:
        raise ValueError(f"independence bound must be >= 1, got {alpha_bound}")
    if isinstance(view, EdgeSubset):
        nv = view.base.num_vertices
    else:
        nv = as_graph(view).num_vertices
    bound = -(-nv // alpha_bound)
    n = quarter_dimension(view)
    rate = (nv / alpha_bound) ** (1 / (4 * n)) if n else None
    return RatioBound(chi_lower=bound, rate=rate)


def edges_within(view, subset) -> int:
    """Number of edges of the view's graph inside a vertex subset."""
    g = as_graph(view)
    mask = 0
    for v in subset:
        if not 0 <= v < g.num_vertices:
            raise ValueError(f"vertex index {v} out of range")
        mask |= 1 << v
    return sum((g.adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def min_edges_over_subsets(
    view,
    l: int,
    guard: int = SUBSET_SCAN_GUARD,
    heuristic: bool = False,
    seed: int = 0,
    restarts: int = 20,
) -> SolveResult:
    """Minimum induced edge count over all l-element vertex subsets.

    Exhaustive below ``guard`` subsets (exact, with early exit at zero);
    above the guard a seeded swap-based local search runs instead when
    ``heuristic`` is set, returning an upper bound on the minimum with
    ``exact=False``.
    """
    g = as_graph(view)
    n = g.num_vertices
    if not 1 <= l <= n:
        raise ValueError(f"subset size {l} outside [1, {n}]")
    total = comb(n, l)
    if total <= guard:
        best = None
        best_subset = None
        for subset in combinations(range(n), l):
            mask = 0
            for v in subset:
                mask |= 1 << v
            count = sum((g.adj[v] & mask).bit_count() for v in subset) // 2
            if best is None or count < best:
                best = count
                best_subset = list(subset)
                if best == 0:
                    break
        return SolveResult(value=best, exact=True, witness=best_subset)
    if not heuristic:
        raise SizeGuardError(
            f"C({n}, {l}) = {total} subsets exceed the exhaustive guard {guard}; "
            f"pass heuristic=True for local search"
        )
    return _min_edges_local_search(g, l, seed, restarts)


def _min_edges_local_search(g: Graph, l: int, seed: int, restarts: int) -> SolveResult:
    rng = np.random.default_rng(np.random.PCG64(seed))
    n = g.num_vertices
    best = None
    best_subset = None
    for _ in range(restarts):
        chosen = [int(v) for v in rng.choice(n, size=l, replace=False)]
        mask = 0
        for v in chosen:
            mask |= 1 << v
        count = sum((g.adj[v] & mask).bit_count() for v in chosen) // 2
        improved = True
        while improved:
            improved = False
            for v in sorted(chosen):
                inside = (g.adj[v] & mask).bit_count()
                for u in range(n):
                    if (mask >> u) & 1:
                        continue
                    gain = (g.adj[u] & mask).bit_count() - ((g.adj[u] >> v) & 1)
                    if gain < inside:
                        mask = (mask & ~(1 << v)) | (1 << u)
                        chosen.remove(v)
                        chosen.append(u)
                        count += gain - inside
                        improved = True
                        break
                if improved:
                    break
        if best is None or count < best:
            best = count
            best_subset = sorted(chosen)
            if best == 0:
                break
    return SolveResult(value=best, exact=False, witness=best_subset)


@dataclass(frozen=True)
class FamilyReduction:
    """Shortest-cycle lengths of a forbidden family and the girth target."""

    shortest_cycle_lengths: list[int]
    required_girth: int  # avoiding cycles up to this length kills every member


def family_girth_reduction(forbidden: Sequence) -> FamilyReduction:
    """Reduce forbidding a graph family to a single girth requirement.

    Each member must contain a cycle; a graph whose girth exceeds the
    maximum of the members' shortest-cycle lengths contains none of them.
    Forests are rejected: no girth condition can exclude them.
    """
    if not forbidden:
        raise ValueError("forbidden family must be nonempty")
    lengths = []
    for idx, view in enumerate(forbidden):
        res = girth(view)
        if res.value == math.inf:
            raise ForestError(f"family member {idx} is a forest")
        lengths.append(int(res.value))
    return FamilyReduction(
        shortest_cycle_lengths=lengths, required_girth=max(lengths)
    )


def verify_independent_set(view, vertices: Sequence[int]) -> bool:
    """True iff the vertex set spans no edge of the view's graph."""
    g = as_graph(view)
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(not g.has_edge(u, v) for u, v in combinations(vs, 2))


def verify_coloring(view, color_of: Sequence[int]) -> bool:
    """True iff the color assignment is a proper coloring of the view."""
    g = as_graph(view)
    if len(color_of) != g.num_vertices:
        return False
    return all(color_of[u] != color_of[v] for u, v in g.edge_list)


def verify_cycle(view, cycle: Sequence[int]) -> bool:
    """True iff the vertex sequence is a simple cycle of the view's graph."""
    g = as_graph(view)
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    return all(g.has_edge(u, v) for u, v in cycle_edges(g, cycle))
