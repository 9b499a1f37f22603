"""Separated sets, entropy slope estimates and dynamical-ball witnesses.

Separated-set maxima are exact: a branch-and-bound maximum clique search on
the separation graph for explicit candidate lists, and a word-counting
argument for cylinder universes of symbolic systems (two points separate
within n steps iff their windows on [-t', n+t'] differ, t' the largest i
with 2^-i > epsilon).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .systems import NetSystem, SymbolicSystem, dyadic_radius


@dataclass
class SeparatedSetResult:
    n: int
    epsilon: Fraction
    cardinality: int
    witness: tuple  # points (possibly empty when only the count is materialized)
    exact: bool
    universe: str = "candidates"

    def reverify(self, system) -> bool:
        pts = self.witness
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if not is_separated(system, pts[i], pts[j], self.n, self.epsilon):
                    return False
        return True


def is_separated(system, x, y, n: int, epsilon) -> bool:
    """Whether some iterate 0 <= i <= n puts x, y at distance > epsilon."""
    epsilon = Fraction(epsilon)
    a, b = x, y
    for _ in range(n + 1):
        if system.distance(a, b) > epsilon:
            return True
        a, b = system.step(a), system.step(b)
    return False


def max_clique(neighbors: Sequence[int], n: int) -> list:
    """Exact maximum clique via greedy-coloring branch and bound.

    ``neighbors[i]`` is a bitmask of vertices adjacent to i.
    """
    best: list[int] = []

    def bits(mask: int):
        while mask:
            b = mask & -mask
            yield b.bit_length() - 1
            mask ^= b

    def color_sort(cand: int):
        order = []
        bounds = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~neighbors[v] & ~(1 << v)
                rest &= ~(1 << v)
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(clique: list, cand: int):
        nonlocal best
        order, bounds = color_sort(cand)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            nxt = cand & neighbors[v]
            if nxt:
                expand(clique, nxt)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 1000))
    try:
        expand([], (1 << n) - 1)
    finally:
        sys.setrecursionlimit(old_limit)
    return sorted(best)


def separated_set(system, candidates: Sequence, n: int, epsilon,
                  exact: bool = True, clique_limit: int = 4096) -> SeparatedSetResult:
    """Largest pairwise (n, epsilon)-separated subset of the candidates.

    Exact (clique search) up to ``clique_limit`` candidates when requested;
    greedy lower bound otherwise, flagged as such.
    """
    epsilon = Fraction(epsilon)
    cands = list(candidates)
    m = len(cands)
    if m == 0:
        raise ValueError("need at least one candidate")

    # orbits once, then pairwise separation tests on stored iterates
    orbits = []
    for x in cands:
        orb = [x]
        for _ in range(n):
            orb.append(system.step(orb[-1]))
        orbits.append(orb)

    def sep(i: int, j: int) -> bool:
        oi, oj = orbits[i], orbits[j]
        for t in range(n + 1):
            if system.distance(oi[t], oj[t]) > epsilon:
                return True
        return False

    if exact and m <= clique_limit:
        neighbors = [0] * m
        for i in range(m):
            for j in range(i + 1, m):
                if sep(i, j):
                    neighbors[i] |= 1 << j
                    neighbors[j] |= 1 << i
        chosen = max_clique(neighbors, m)
        witness = tuple(cands[i] for i in chosen)
        return SeparatedSetResult(n, epsilon, len(chosen), witness, True)

    chosen_idx: list[int] = []
    for i in range(m):
        if all(sep(i, j) for j in chosen_idx):
            chosen_idx.append(i)
    witness = tuple(cands[i] for i in chosen_idx)
    return SeparatedSetResult(n, epsilon, len(chosen_idx), witness, False)


def separation_window(epsilon) -> Optional[int]:
    """Largest i with 2^-i > epsilon (None when epsilon >= 1)."""
    epsilon = Fraction(epsilon)
    if epsilon >= 1:
        return None
    return dyadic_radius(epsilon) - 1


def max_separated_cylinders(system: SymbolicSystem, n: int, epsilon,
                            materialize_limit: int = 4096) -> SeparatedSetResult:
    """Exact S(n, epsilon) over the whole symbolic system.

    Points separate within n steps iff their words on [-t', n+t'] differ
    (t' = separation window), so the maximum equals the number of admissible
    words of length n + 2 t' + 1.  The witness set (periodic closures of
    those words) is materialized only when small.
    """
    epsilon = Fraction(epsilon)
    tp = separation_window(epsilon)
    if tp is None:
        # no pair of points is ever further apart than epsilon
        single = system.periodic_closure(system.words(1)[0])
        return SeparatedSetResult(n, epsilon, 1, (single,), True,
                                  universe="whole system")
    width = n + 2 * tp + 1
    count = system.count_words(width)
    witness: tuple = ()
    if count <= materialize_limit:
        pts = []
        for w in system.words(width):
            p = system.periodic_closure(w, anchor=-tp)
            if p is None:
                raise ValueError("cylinder word admits no periodic closure; "
                                 "exact count needs an irreducible system")
            pts.append(p)
        witness = tuple(pts)
        assert len(witness) == count
    return SeparatedSetResult(n, epsilon, count, witness, True,
                              universe="whole system")


@dataclass
class EntropyEstimate:
    epsilon: Fraction
    entries: list            # (n, cardinality)
    slope: float             # least-squares slope of log S(n) against n
    intercept: float
    residuals: list

    def summary(self) -> str:
        return (f"entropy slope {self.slope:.9f} over n = "
                f"{self.entries[0][0]}..{self.entries[-1][0]} at eps {self.epsilon}")


def entropy_estimate(system, epsilon, n_range: Sequence[int],
                     candidates: Optional[Sequence] = None) -> EntropyEstimate:
    """Least-squares slope of log S(n, epsilon) as a function of n.

    Symbolic systems use the exact cylinder counts; net systems need an
    explicit candidate list (defaults to every net point).
    """
    epsilon = Fraction(epsilon)
    ns = list(n_range)
    if len(ns) < 2:
        raise ValueError("need at least two n values")
    entries = []
    for n in ns:
        if isinstance(system, SymbolicSystem) and candidates is None:
            res = max_separated_cylinders(system, n, epsilon)
        else:
            cands = candidates if candidates is not None else range(system.n)
            res = separated_set(system, cands, n, epsilon)
        entries.append((n, res.cardinality))
    xs = [float(n) for n, _ in entries]
    ys = [math.log(c) for _, c in entries]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    residuals = [y - (slope * x + intercept) for x, y in zip(xs, ys)]
    return EntropyEstimate(epsilon, entries, slope, intercept, residuals)


@dataclass
class DynamicalBallReport:
    center: object
    radius: Fraction
    horizon: int
    members: tuple
    cardinality: int
    universe: str
    stamps: dict = field(default_factory=dict)


def expansivity_witness(system, x, e, horizon: int,
                        depth: Optional[int] = None) -> DynamicalBallReport:
    """The finite-horizon dynamical ball around x.

    Net systems: members q with d(f^i(x), f^i(q)) <= e for |i| <= horizon
    (forward window only when the map is not invertible).  Symbolic systems:
    the ball is a cylinder; members are the depth-``depth`` words extending
    its forced window, realized as periodic closures.
    """
    e = Fraction(e)
    if isinstance(system, NetSystem):
        lo = -horizon if system.invertible else 0
        members = []
        for q in range(system.n):
            ok = True
            for i in range(lo, horizon + 1):
                if system.distance(system.iterate(x, i), system.iterate(q, i)) > e:
                    ok = False
                    break
            if ok:
                members.append(q)
        return DynamicalBallReport(x, e, horizon, tuple(members), len(members),
                                   universe="net",
                                   stamps={"window": (lo, horizon)})

    t = dyadic_radius(e) if e < 1 else 0
    if t == 0:
        # radius at least the diameter: the ball is the whole space
        stamp_depth = depth if depth is not None else 1
        width = 2 * stamp_depth + 1
        count = system.count_words(width)
        return DynamicalBallReport(x, e, horizon, (), count,
                                   universe=f"cylinders at depth {stamp_depth}",
                                   stamps={"constraint": None})
    lo, hi = -horizon - (t - 1), horizon + (t - 1)
    stamp_depth = depth if depth is not None else hi
    forced = {j: x.coord(j) for j in range(lo, hi + 1)}
    members = []
    count = 0
    width_lo, width_hi = min(lo, -stamp_depth), max(hi, stamp_depth)
    for w in system.words(width_hi - width_lo + 1):
        if all(w[j - width_lo] == s for j, s in forced.items()):
            count += 1
            p = system.periodic_closure(w, anchor=width_lo)
            if p is not None and len(members) < 4096:
                members.append(p)
    return DynamicalBallReport(x, e, horizon, tuple(members), count,
                               universe=f"cylinders on [{width_lo}, {width_hi}]",
                               stamps={"forced_window": (lo, hi)})
