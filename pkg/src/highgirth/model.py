"""The edge-percolation probability space over a base graph.

A random subgraph keeps every base edge independently with probability
``p = gamma ** (4n)`` (or an explicit override at desk scale, where the
power underflows).  Two bad-event families live on this space:

* independent-set events: a fixed l-element vertex subset spans no kept
  edge, probability ``(1 - p) ** a`` where ``a`` counts its base edges;
* cycle events: a fixed s-cycle of the base graph survives entirely,
  probability ``p ** s``.

Both families are functions of disjoint-or-overlapping edge indicator
sets, so two events are dependent exactly when their edge sets intersect.

PRNG contract: sampling uses NumPy's PCG64 stream seeded with the model
seed, drawing one uniform per base edge in canonical edge-list order;
edge ``i`` is kept iff draw ``i`` is below ``p``.  Parallel replicas must
derive their seed via ``derive_seed(seed, replica)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .graphs import BaseGraph, EdgeSubset, Graph, SizeGuardError, iter_bits
from .solvers import cycle_edges, enumerate_cycles

KIND_INDEPENDENT_SET = "independent_set"
KIND_CYCLE = "cycle"

#: Independent-set event enumeration refuses above this many subsets.
EVENT_ENUMERATION_GUARD = 500_000


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the random subgraph model.

    ``p`` is recomputed from ``gamma`` as ``gamma ** (4n)`` unless an
    explicit ``p_override`` is given (the asymptotic power underflows
    quickly; finite experiments need a usable edge probability).
    """

    n: int
    gamma: float | None = None
    seed: int = 0
    p_override: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"quarter-dimension must be >= 1, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.p_override is None:
            if self.gamma is None:
                raise ValueError("either gamma or p_override is required")
            if not 0 < self.gamma < 1:
                raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        elif not 0 <= self.p_override <= 1:
            raise ValueError(f"p override must lie in [0, 1], got {self.p_override}")

    @property
    def p(self) -> float:
        if self.p_override is not None:
            return self.p_override
        return self.gamma ** (4 * self.n)

    def replica(self, index: int) -> "ModelParams":
        """Same model with the seed derived for a parallel replica."""
        return ModelParams(
            n=self.n,
            gamma=self.gamma,
            seed=derive_seed(self.seed, index),
            p_override=self.p_override,
        )


def derive_seed(seed: int, replica: int) -> int:
    """Deterministic per-replica seed: SeedSequence([seed, replica])."""
    return int(np.random.SeedSequence([seed, replica]).generate_state(1)[0])


def _stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_subgraph(g: BaseGraph, params: ModelParams) -> EdgeSubset:
    """Draw a random spanning subgraph; identical inputs give identical masks."""
    if params.n != g.n:
        raise ValueError(f"params built for n={params.n}, graph has n={g.n}")
    draws = _stream(params.seed).random(g.num_edges)
    return _mask_from_draws(g, draws, params.p)


def _mask_from_draws(g: BaseGraph, draws: np.ndarray, p: float) -> EdgeSubset:
    kept = draws < p
    packed = np.packbits(kept, bitorder="little")
    return EdgeSubset(g, int.from_bytes(packed.tobytes(), "little"))


def log_probability(g: BaseGraph, sub: EdgeSubset, p: float) -> float:
    """Log-measure of one subgraph: |E| ln p + (M - |E|) ln(1 - p)."""
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly in (0, 1), got {p}")
    kept = sub.num_edges
    total = g.num_edges
    return kept * math.log(p) + (total - kept) * math.log1p(-p)


@dataclass(frozen=True)
class EventSpec:
    """One bad event, reduced to its edge indicator set.

    ``variable_set`` holds base edge indices: an independent-set event
    occurs when all of them are absent, a cycle event when all are
    present.  ``meta`` is the subset size l or the cycle length s;
    ``members`` the vertex indices involved.
    """

    kind: str
    variable_set: tuple[int, ...]
    meta: int
    probability: float
    members: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in (KIND_INDEPENDENT_SET, KIND_CYCLE):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind == KIND_CYCLE and not self.variable_set:
            raise ValueError("cycle events must involve at least one edge")

    @property
    def unavoidable(self) -> bool:
        """Probability-1 events: an independent base subset stays independent."""
        return self.kind == KIND_INDEPENDENT_SET and not self.variable_set

    def occurs(self, mask: int) -> bool:
        """Whether the event holds on a subgraph given as an edge mask."""
        if self.kind == KIND_CYCLE:
            return all((mask >> i) & 1 for i in self.variable_set)
        return not any((mask >> i) & 1 for i in self.variable_set)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "variable_set": list(self.variable_set),
            "meta": self.meta,
            "probability": self.probability,
            "members": list(self.members),
        }


def enumerate_independent_set_events(
    g: BaseGraph, l: int, p: float, guard: int = EVENT_ENUMERATION_GUARD
) -> list[EventSpec]:
    """One event per l-element vertex subset, in combinations order.

    Each event's edge set is the base edges inside the subset; subsets
    spanning no base edge come out with probability 1 (flagged by
    ``EventSpec.unavoidable``) and make any avoidance argument infeasible,
    which happens exactly when l is at most the base independence number.
    """
    nv = g.num_vertices
    if not 1 <= l <= nv:
        raise ValueError(f"subset size {l} outside [1, {nv}]")
    total = comb(nv, l)
    if total > guard:
        raise SizeGuardError(
            f"C({nv}, {l}) = {total} subsets exceed the enumeration guard {guard}"
        )
    events = []
    for subset in combinations(range(nv), l):
        mask = 0
        for v in subset:
            mask |= 1 << v
        edge_ids = []
        for v in subset:
            for w in iter_bits(g.adj[v] & mask):
                if w > v:
                    edge_ids.append(g.edge_index(v, w))
        edge_ids.sort()
        events.append(
            EventSpec(
                kind=KIND_INDEPENDENT_SET,
                variable_set=tuple(edge_ids),
                meta=l,
                probability=(1 - p) ** len(edge_ids),
                members=subset,
            )
        )
    return events


def enumerate_cycle_events(g: BaseGraph, k: int, p: float) -> list[EventSpec]:
    """One event per distinct cycle of length 3..k, in canonical order."""
    if k < 3:
        return []
    events = []
    for s in range(3, k + 1):
        for cycle in enumerate_cycles(g, s):
            edge_ids = tuple(
                sorted(g.edge_index(u, v) for u, v in cycle_edges(g, cycle))
            )
            events.append(
                EventSpec(
                    kind=KIND_CYCLE,
                    variable_set=edge_ids,
                    meta=s,
                    probability=p**s,
                    members=cycle,
                )
            )
    return events


@dataclass
class EventSystem:
    """Enumerated events plus their dependency structure.

    Two events are neighbors exactly when their edge sets intersect.
    Probability-1 independent-set events are split off into
    ``unavoidable`` and excluded from the dependency graph; their presence
    makes the whole avoidance problem infeasible and downstream checkers
    report it.  Neighborhoods are computed on first access: resampling
    searches never need them, and on cycle-rich base graphs they are by
    far the most expensive part of the system.
    """

    events: list[EventSpec]
    unavoidable: list[EventSpec] = field(default_factory=list)

    def __post_init__(self):
        for ev in self.events:
            if ev.unavoidable:
                raise ValueError("unavoidable events cannot enter a system")
        self._neighbors: list[list[int]] | None = None

    @property
    def neighbors(self) -> list[list[int]]:
        if self._neighbors is None:
            by_edge: dict[int, list[int]] = {}
            for i, ev in enumerate(self.events):
                for e in ev.variable_set:
                    by_edge.setdefault(e, []).append(i)
            neighbors: list[list[int]] = []
            for i, ev in enumerate(self.events):
                seen = set()
                for e in ev.variable_set:
                    seen.update(by_edge[e])
                seen.discard(i)
                neighbors.append(sorted(seen))
            self._neighbors = neighbors
        return self._neighbors

    @classmethod
    def from_events(cls, events: list[EventSpec]) -> "EventSystem":
        retained = [ev for ev in events if not ev.unavoidable]
        unavoidable = [ev for ev in events if ev.unavoidable]
        return cls(events=retained, unavoidable=unavoidable)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def feasible(self) -> bool:
        return not self.unavoidable

    @property
    def probabilities(self) -> list[float]:
        return [ev.probability for ev in self.events]

    def split_neighbors(self, i: int) -> dict[tuple[str, int], list[int]]:
        """Neighborhood of event i grouped by (kind, meta)."""
        groups: dict[tuple[str, int], list[int]] = {}
        for j in self.neighbors[i]:
            ev = self.events[j]
            groups.setdefault((ev.kind, ev.meta), []).append(j)
        return groups

    def to_json(self) -> dict:
        return {
            "events": [ev.to_json() for ev in self.events],
            "unavoidable": [ev.to_json() for ev in self.unavoidable],
        }


def dependency_graph(events: list[EventSpec]) -> EventSystem:
    """Build the shared-edge dependency structure over enumerated events."""
    return EventSystem.from_events(events)
