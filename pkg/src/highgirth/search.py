"""Constructive search for sparse high-girth subgraphs with small independence.

Two strategies produce certified subgraphs of a base graph:

* Moser-Tardos resampling: draw every edge Bernoulli(p), then repeatedly
  pick the violated event with the lowest canonical index and redraw its
  edge set, until no bad event holds or the resample budget runs out.
* deletion method: draw once, then repeatedly find the canonically first
  shortest cycle of length <= k and delete its smallest edge; termination
  and the girth guarantee are unconditional.

Either way the result is only ever reported through ``certify``, which
re-verifies girth and independence with the exact solvers and refuses to
emit anything it could not verify.

Randomness follows the model's PRNG contract: the first ``num_edges``
draws of the PCG64 stream are the initial sample (identical to
``sample_subgraph``), and each resampling consumes one further draw per
edge of the resampled event, in ascending edge-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import __version__
from .graphs import BaseGraph, EdgeSubset
from .model import (
    EventSystem,
    ModelParams,
    _mask_from_draws,
    _stream,
    enumerate_cycle_events,
    enumerate_independent_set_events,
    sample_subgraph,
    EVENT_ENUMERATION_GUARD,
)
from .solvers import SolveBudget, girth, independence_number


class CertificationError(Exception):
    """A subgraph failed certification; carries the refuting witness."""

    def __init__(self, reason: str, witness=None):
        super().__init__(reason)
        self.reason = reason
        self.witness = witness


@dataclass(frozen=True)
class GirthCertificate:
    """An independently re-verifiable record of a certified subgraph.

    The chromatic lower bound is ``ceil(N / l)`` where N counts the base
    vertices; ``empirical_rate`` is its (1/4n)-th root.  ``seed`` and the
    sampling probability fields reproduce the subgraph byte for byte.
    """

    n: int
    k: int
    l: int
    alpha: int
    alpha_exact: bool
    chi_lower: int
    empirical_rate: float
    girth: int | float  # math.inf for forests
    edge_mask_hex: str
    seed: int | None = None
    gamma: float | None = None
    p: float | None = None
    solver_versions: dict = field(default_factory=dict)

    def subgraph(self, base: BaseGraph) -> EdgeSubset:
        if base.n != self.n:
            raise ValueError(f"certificate is for n={self.n}, base has n={base.n}")
        return EdgeSubset.from_hex(base, self.edge_mask_hex)

    def to_json(self) -> dict:
        gamma_or_p: dict = {}
        if self.gamma is not None:
            gamma_or_p["gamma"] = self.gamma
        if self.p is not None:
            gamma_or_p["p"] = self.p
        return {
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "alpha": self.alpha,
            "alpha_exact": self.alpha_exact,
            "chi_lower": self.chi_lower,
            "empirical_rate": self.empirical_rate,
            "girth": "infinite" if self.girth == math.inf else self.girth,
            "seed": self.seed,
            "gamma_or_p": gamma_or_p,
            "edge_mask_hex": self.edge_mask_hex,
            "solver_versions": self.solver_versions,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GirthCertificate":
        girth_value = doc["girth"]
        gamma_or_p = doc.get("gamma_or_p", {})
        return cls(
            n=doc["n"],
            k=doc["k"],
            l=doc["l"],
            alpha=doc["alpha"],
            alpha_exact=doc["alpha_exact"],
            chi_lower=doc["chi_lower"],
            empirical_rate=doc["empirical_rate"],
            girth=math.inf if girth_value == "infinite" else girth_value,
            edge_mask_hex=doc["edge_mask_hex"],
            seed=doc.get("seed"),
            gamma=gamma_or_p.get("gamma"),
            p=gamma_or_p.get("p"),
            solver_versions=doc.get("solver_versions", {}),
        )


@dataclass(frozen=True)
class SearchFailure:
    """A search that ended without a certificate, with its statistics."""

    reason: str
    n: int
    k: int
    l: int
    seed: int
    resamples: int = 0
    violated_history: tuple[int, ...] = ()
    witness: list | None = None

    def to_json(self) -> dict:
        return {
            "reason": self.reason,
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "seed": self.seed,
            "resamples": self.resamples,
            "violated_history": list(self.violated_history),
            "witness": self.witness,
        }


def certify(
    sub: EdgeSubset,
    k: int,
    l: int,
    alpha_budget: SolveBudget | None = None,
    seed: int | None = None,
    gamma: float | None = None,
    p: float | None = None,
) -> GirthCertificate:
    """Verify girth > k and independence <= l; emit a certificate or refuse.

    Rejection carries a refuting witness: a short cycle, or an independent
    set larger than l.  If the independence solve leaves budget before
    reaching exactness the certification is refused outright rather than
    emitting an unverified bound.
    """
    if k < 0:
        raise ValueError(f"forbidden-cycle ceiling must be >= 0, got {k}")
    if l < 1:
        raise ValueError(f"independence bound must be >= 1, got {l}")
    girth_result = girth(sub)
    if girth_result.value <= k:
        raise CertificationError(
            f"girth {girth_result.value} is not above {k}",
            witness=girth_result.witness,
        )
    alpha_result = independence_number(sub, alpha_budget)
    if not alpha_result.exact:
        raise CertificationError(
            "independence solve exhausted its budget; refusing to certify "
            "an unverified bound"
        )
    if alpha_result.value > l:
        raise CertificationError(
            f"independence number {alpha_result.value} exceeds the bound {l}",
            witness=alpha_result.witness,
        )
    base = sub.base
    chi_lower = -(-base.num_vertices // l)
    return GirthCertificate(
        n=base.n,
        k=k,
        l=l,
        alpha=int(alpha_result.value),
        alpha_exact=True,
        chi_lower=chi_lower,
        empirical_rate=chi_lower ** (1 / (4 * base.n)),
        girth=girth_result.value,
        edge_mask_hex=sub.mask_hex(),
        seed=seed,
        gamma=gamma,
        p=p,
        solver_versions={"highgirth": __version__},
    )


def recheck_certificate(cert: GirthCertificate, base: BaseGraph) -> list[str]:
    """Re-verify every claim of a certificate from scratch.

    Returns a list of discrepancies (empty means the certificate stands).
    Runs the exact solvers on the reconstructed subgraph, independently of
    whatever produced the certificate.
    """
    problems = []
    sub = cert.subgraph(base)
    girth_result = girth(sub)
    if girth_result.value != cert.girth:
        problems.append(f"girth is {girth_result.value}, certificate says {cert.girth}")
    if girth_result.value <= cert.k:
        problems.append(f"girth {girth_result.value} is not above k = {cert.k}")
    alpha_result = independence_number(sub)
    if alpha_result.value != cert.alpha:
        problems.append(f"alpha is {alpha_result.value}, certificate says {cert.alpha}")
    if alpha_result.value > cert.l:
        problems.append(f"alpha {alpha_result.value} exceeds l = {cert.l}")
    chi_lower = -(-base.num_vertices // cert.l)
    if chi_lower != cert.chi_lower:
        problems.append(f"chi_lower recomputes to {chi_lower}, not {cert.chi_lower}")
    rate = chi_lower ** (1 / (4 * base.n))
    if not math.isclose(rate, cert.empirical_rate, rel_tol=1e-12):
        problems.append(f"empirical rate recomputes to {rate}")
    return problems


def _build_event_system(
    g: BaseGraph,
    k: int,
    l: int,
    p: float,
    subset_events: bool | str,
    guard: int,
) -> EventSystem | None:
    """Cycle events for 3..k plus, when requested and enumerable, l-subset
    events.  Returns None when subset events are mandatory but l-subsets
    cannot be enumerated within the guard."""
    events = []
    if l <= g.num_vertices:
        wanted = subset_events is True or subset_events == "auto"
        enumerable = math.comb(g.num_vertices, l) <= guard
        if subset_events is True and not enumerable:
            return None
        if wanted and enumerable:
            events.extend(enumerate_independent_set_events(g, l, p, guard=guard))
    events.extend(enumerate_cycle_events(g, k, p))
    return EventSystem.from_events(events)


def moser_tardos_search(
    g: BaseGraph,
    params: ModelParams,
    k: int,
    l: int,
    max_resamples: int | None = None,
    subset_events: bool | str = "auto",
    guard: int = EVENT_ENUMERATION_GUARD,
    alpha_budget: SolveBudget | None = None,
) -> GirthCertificate | SearchFailure:
    """Resample violated events until none holds, then certify.

    Events are scanned in canonical order (subset events in combinations
    order first, then cycles by length); the lowest-index violated event
    is resampled each round.  Cycle events for every length 3..k are
    always enumerated; subset events only when ``subset_events`` allows
    and the count C(N, l) fits the guard.  The default budget is ten
    resamples per event.  Budget exhaustion and certification rejections
    come back as ``SearchFailure`` values, never exceptions.
    """
    p = params.p
    system = _build_event_system(g, k, l, p, subset_events, guard)
    if system is None:
        return SearchFailure(
            reason=f"subset events required but C({g.num_vertices}, {l}) "
            f"exceeds the enumeration guard {guard}",
            n=g.n, k=k, l=l, seed=params.seed,
        )
    if not system.feasible:
        return SearchFailure(
            reason=f"{len(system.unavoidable)} l-subsets span no base edge "
            f"(l <= alpha of the base graph); no subgraph can avoid them",
            n=g.n, k=k, l=l, seed=params.seed,
            witness=list(system.unavoidable[0].members),
        )
    if max_resamples is None:
        max_resamples = 10 * len(system)
    rng = _stream(params.seed)
    draws = rng.random(g.num_edges)
    mask = _mask_from_draws(g, draws, p).mask
    history = []
    resamples = 0
    while True:
        violated = [i for i, ev in enumerate(system.events) if ev.occurs(mask)]
        history.append(len(violated))
        if not violated:
            break
        if resamples >= max_resamples:
            return SearchFailure(
                reason=f"resample budget {max_resamples} exhausted with "
                f"{len(violated)} events still violated",
                n=g.n, k=k, l=l, seed=params.seed,
                resamples=resamples, violated_history=tuple(history),
            )
        event = system.events[violated[0]]
        redraw = rng.random(len(event.variable_set))
        for edge_id, value in zip(event.variable_set, redraw):
            if value < p:
                mask |= 1 << edge_id
            else:
                mask &= ~(1 << edge_id)
        resamples += 1
    sub = EdgeSubset(g, mask)
    try:
        cert = certify(
            sub, k, l,
            alpha_budget=alpha_budget,
            seed=params.seed, gamma=params.gamma, p=p,
        )
    except CertificationError as exc:
        return SearchFailure(
            reason=f"certification rejected: {exc.reason}",
            n=g.n, k=k, l=l, seed=params.seed,
            resamples=resamples, violated_history=tuple(history),
            witness=exc.witness,
        )
    return cert


def _first_cycle(adj: list[int], n: int, s: int, start_root: int):
    """Canonically first s-cycle with root >= start_root, or None.

    Matches the lexicographic order of ``enumerate_cycles`` so deletion
    choices are reproducible.
    """
    for root in range(start_root, n):
        above = -1 << (root + 1)
        for v1_bit_path in _first_from(adj, root, [root], 1 << root, s, above):
            return v1_bit_path
    return None


def _first_from(adj, root, path, used, s, above):
    v = path[-1]
    if len(path) == s - 1:
        closing = adj[v] & adj[root] & above & ~used
        if len(path) >= 2:
            closing &= -1 << (path[1] + 1)
        if closing:
            low = closing & -closing
            yield path + [low.bit_length() - 1]
        return
    cands = adj[v] & above & ~used
    while cands:
        low = cands & -cands
        cands ^= low
        w = low.bit_length() - 1
        path.append(w)
        yield from _first_from(adj, root, path, used | (1 << w), s, above)
        path.pop()


def deletion_method(
    g: BaseGraph,
    params: ModelParams,
    k: int,
    alpha_budget: SolveBudget | None = None,
) -> GirthCertificate:
    """Sample once, then delete one edge per short cycle until girth > k.

    Cycles are destroyed shortest first; each round removes the smallest
    edge (by canonical index) of the canonically first shortest cycle, so
    a fixed seed always yields the same subgraph.  Afterwards the exact
    independence number becomes the certificate's bound l.  Terminates
    unconditionally: every deletion kills at least one short cycle.
    """
    sub = sample_subgraph(g, params)
    adj = [0] * g.num_vertices
    mask = sub.mask
    for i in sub.edge_indices():
        u, v = g.edge_list[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    for s in range(3, k + 1):
        root = 0
        while True:
            cycle = _first_cycle(adj, g.num_vertices, s, root)
            if cycle is None:
                break
            root = cycle[0]  # deletions never create cycles at earlier roots
            edge_ids = []
            for i, u in enumerate(cycle):
                v = cycle[(i + 1) % s]
                edge_ids.append(g.edge_index(u, v))
            drop = min(edge_ids)
            a, b = g.edge_list[drop]
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)
            mask &= ~(1 << drop)
    final = EdgeSubset(g, mask)
    alpha_result = independence_number(final, alpha_budget)
    if not alpha_result.exact:
        raise CertificationError(
            "independence solve exhausted its budget; cannot pick a "
            "certified bound l"
        )
    return certify(
        final, k, int(alpha_result.value),
        alpha_budget=alpha_budget,
        seed=params.seed, gamma=params.gamma, p=params.p,
    )


