"""Shadowability verdicts at a stamped resolution.

Every verdict is quantified over a finite, explicitly described universe of
pseudo-orbits (the delta-transition graph up to a horizon) and carries the
(epsilon, delta, horizon) stamp; a "counterexample" verdict never claims to
refute an infinite-precision statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .chain import build_chain_graph, chain_class
from .finitize import CylinderNet
from .pseudo_orbits import PseudoOrbit, validate
from .shadow_search import (
    SearchStats,
    ShadowWitness,
    find_shadow,
    net_shadowability_dfs,
    shadows,
    symbolic_shadowability_scan,
    symbolic_successor_candidates,
)
from .systems import (
    NetSystem,
    SymbolicPoint,
    SymbolicSystem,
    SystemPoint,
    dyadic_radius,
)

SHADOWABLE = "shadowable"
COUNTEREXAMPLE = "counterexample"


@dataclass
class ShadowabilityReport:
    base: object  # point, point set, or "all"
    epsilon: Fraction
    delta: Fraction
    horizon: int
    verdict: str
    counterexample: Optional[PseudoOrbit] = None
    stamps: dict = field(default_factory=dict)

    @property
    def shadowable(self) -> bool:
        return self.verdict == SHADOWABLE

    def reverify_counterexample(self, system) -> bool:
        """The counterexample re-validates as a delta-pseudo-orbit and the
        exhaustive/glued shadow search fails on it."""
        if self.counterexample is None:
            return False
        po = validate(self.counterexample.points, self.delta, system)
        return find_shadow(system, po, self.epsilon) is None


def _wrap_counterexample(system, path, delta) -> PseudoOrbit:
    return validate(path, delta, system)


def is_positively_shadowable_at(system, x: SystemPoint, epsilon, delta,
                                horizon: int = 10, budget: int = 10 ** 6,
                                allowed_nodes=None) -> ShadowabilityReport:
    """Check every delta-pseudo-orbit through x (step count <= horizon) for
    an epsilon-shadow; the verdict is the lexicographically first failing
    pseudo-orbit if any."""
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    stats = SearchStats(budget=budget)
    if isinstance(system, SymbolicSystem):
        bad = symbolic_shadowability_scan(system, [x], epsilon, delta, horizon, stats)
        stamps = {"universe": "cylinder-candidates", "states": stats.states}
    else:
        bad = net_shadowability_dfs(system, x, epsilon, delta, horizon, stats,
                                    allowed_nodes=allowed_nodes)
        stamps = {"universe": "net", "states": stats.states}
    if bad is None:
        return ShadowabilityReport(x, epsilon, delta, horizon, SHADOWABLE, None, stamps)
    po = _wrap_counterexample(system, bad, delta)
    rep = ShadowabilityReport(x, epsilon, delta, horizon, COUNTEREXAMPLE, po, stamps)
    assert rep.reverify_counterexample(system)
    return rep


def has_shadowing_at_resolution(system, delta, epsilon, horizon: int = 10,
                                two_sided: bool = False, budget: int = 10 ** 7,
                                allowed_nodes=None) -> ShadowabilityReport:
    """Like :func:`is_positively_shadowable_at` but quantified over all start
    points.  ``two_sided`` enumerates windows [-horizon, horizon] (invertible
    systems only); for the verdict this equals forward windows of doubled
    length quantified over all starts."""
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    span = horizon
    if two_sided:
        if not getattr(system, "invertible", False):
            raise ValueError("two-sided shadowing needs an invertible system")
        span = 2 * horizon
    stats = SearchStats(budget=budget)
    if isinstance(system, SymbolicSystem):
        s = dyadic_radius(delta) if delta > 0 else None
        rho = dyadic_radius(epsilon) - 1 if epsilon < 1 else -1
        shortcut = (s is None or rho < 0 or
                    (rho >= 1 and s - 1 >= rho) or (rho == 0 and s >= 1))
        if shortcut:
            bad = None  # every delta-step glues consistently; see the scan
        else:
            radius = max(s, rho + 1)
            starts = [p for p in (system.periodic_closure(w, anchor=-radius)
                                  for w in system.words(2 * radius + 1))
                      if p is not None]
            bad = symbolic_shadowability_scan(system, starts, epsilon, delta,
                                              span, stats)
        stamps = {"universe": "cylinder-candidates", "states": stats.states,
                  "two_sided": two_sided}
    else:
        bad = None
        memo: dict = {}
        nodes = range(system.n) if allowed_nodes is None else sorted(allowed_nodes)
        for start in nodes:
            bad = net_shadowability_dfs(system, start, epsilon, delta, span, stats,
                                        memo=memo, allowed_nodes=allowed_nodes)
            if bad is not None:
                break
        stamps = {"universe": "net", "states": stats.states, "two_sided": two_sided}
    if bad is None:
        return ShadowabilityReport("all", epsilon, delta, horizon, SHADOWABLE, None, stamps)
    po = _wrap_counterexample(system, bad, delta)
    rep = ShadowabilityReport("all", epsilon, delta, horizon, COUNTEREXAMPLE, po, stamps)
    assert rep.reverify_counterexample(system)
    return rep


def uniform_delta_for_set(system, points: Sequence[SystemPoint], epsilon,
                          horizon: int = 10, budget: int = 10 ** 6,
                          ladder: Optional[Sequence] = None) -> tuple:
    """A single delta that works for every pseudo-orbit starting within
    delta of the set, found by per-point search then verification over the
    delta-neighborhood (net systems) or directly (symbolic systems).

    Returns (delta, per-point reports).  Raises ValueError when some point
    fails at every ladder rung down to the resolution.
    """
    epsilon = Fraction(epsilon)
    if ladder is None:
        ladder = [epsilon / 2, epsilon / 4, epsilon / 8, epsilon / 16]
        res = getattr(system, "resolution", None)
        if res is not None:
            ladder = [d for d in ladder if d >= res] or [Fraction(res)]

    per_point = {}
    deltas = []
    for x in points:
        found = None
        for d in ladder:
            rep = is_positively_shadowable_at(system, x, epsilon, d, horizon, budget)
            if rep.shadowable:
                found = (d, rep)
                break
        if found is None:
            raise ValueError(f"point {x!r} is not positively shadowable at any "
                             f"ladder delta down to {ladder[-1]}")
        per_point[x if not isinstance(x, SymbolicPoint) else id(x)] = found[1]
        deltas.append(found[0])

    delta = min(deltas)
    if isinstance(system, NetSystem):
        while True:
            neighborhood = set()
            for x in points:
                neighborhood |= set(q for q in range(system.n)
                                    if system.distance_le(x, q, delta))
            ok = True
            for y in sorted(neighborhood):
                rep = is_positively_shadowable_at(system, y, epsilon, delta, horizon, budget)
                if not rep.shadowable:
                    ok = False
                    break
            if ok:
                break
            delta /= 2
            if delta < system.resolution:
                raise ValueError("mesh refinement went below the net resolution")
    return delta, per_point


@dataclass
class ClassShadowabilityReport:
    class_nodes: tuple
    epsilon: Fraction
    delta: Fraction
    horizon: int
    all_shadowable: bool
    failures: list = field(default_factory=list)  # (node, report)
    stamps: dict = field(default_factory=dict)


def chain_class_shadowability(system, x, epsilon, delta, horizon: int = 10,
                              depth: Optional[int] = None,
                              budget: int = 10 ** 6) -> ClassShadowabilityReport:
    """Test every point of the chain class H(x) with the same (epsilon,
    delta): uniform success is what the chain-class theorem predicts, and
    any failure is recorded as a falsification at this resolution."""
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    graph = build_chain_graph(system, delta, depth=depth)
    net = graph.system
    if isinstance(system, SymbolicSystem):
        idx = net.index_of(x)
    else:
        idx = x
    cls = chain_class(graph, idx)
    failures = []
    for node in sorted(cls):
        point = net.reps[node] if isinstance(net, CylinderNet) else node
        target = system if isinstance(system, SymbolicSystem) else net
        rep = is_positively_shadowable_at(target, point, epsilon, delta, horizon, budget)
        if not rep.shadowable:
            failures.append((node, rep))
    return ClassShadowabilityReport(
        tuple(sorted(cls)), epsilon, delta, horizon, not failures, failures,
        stamps={"depth": graph.depth_stamp})


def h_class_two_sided_shadowing(system, x, epsilon, delta, horizon: int = 5,
                                depth: Optional[int] = None,
                                budget: int = 10 ** 6) -> ClassShadowabilityReport:
    """Two-sided windows [-horizon, horizon] through points of H(x), checked
    for a single epsilon-shadow of the full window.

    Windows are relabeled to forward windows of length 2*horizon; the
    quantification runs over pseudo-orbits staying inside the class."""
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    graph = build_chain_graph(system, delta, depth=depth)
    net = graph.system
    idx = net.index_of(x) if isinstance(system, SymbolicSystem) else x
    cls = chain_class(graph, idx)
    failures = []
    if isinstance(system, SymbolicSystem):
        stats = SearchStats(budget=budget)
        reps = [net.reps[i] for i in sorted(cls)]
        members = frozenset(cls)

        def in_class(q: SymbolicPoint) -> bool:
            w = q.window(-net.depth, net.depth)
            i = net.word_index.get(w)
            return i is not None and i in members

        bad = symbolic_shadowability_scan(system, reps, epsilon, delta,
                                          2 * horizon, stats, node_filter=in_class)
        if bad is not None:
            po = validate(bad, delta, system)
            rep = ShadowabilityReport(x, epsilon, delta, horizon, COUNTEREXAMPLE, po)
            failures.append((net.index_of(bad[0]) if in_class(bad[0]) else -1, rep))
    else:
        memo: dict = {}
        stats = SearchStats(budget=budget)
        allowed = frozenset(cls)
        for start in sorted(cls):
            bad = net_shadowability_dfs(net, start, epsilon, delta, 2 * horizon,
                                        stats, memo=memo, allowed_nodes=allowed)
            if bad is not None:
                po = validate(bad, delta, net)
                rep = ShadowabilityReport(start, epsilon, delta, horizon,
                                          COUNTEREXAMPLE, po)
                failures.append((start, rep))
                break
    return ClassShadowabilityReport(
        tuple(sorted(cls)), epsilon, delta, horizon, not failures, failures,
        stamps={"depth": graph.depth_stamp, "two_sided": True})
