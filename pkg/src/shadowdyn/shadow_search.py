"""Shadow verification and shadow search.

For net systems a shadow is found (or ruled out) by exhausting the finite
point set.  For symbolic systems the search glues the pseudo-orbit's central
words: a point z epsilon-shadows (x_i) iff z agrees with each x_i on the
shifted window |j| <= t-1 (t the dyadic radius of epsilon), so the candidate
is forced coordinate by coordinate and absence is a proof, not a timeout,
whenever the transition graph is strongly connected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .pseudo_orbits import PseudoOrbit
from .systems import (
    NetSystem,
    SymbolicPoint,
    SymbolicSystem,
    SystemPoint,
    distance_le,
    dyadic_radius,
)


@dataclass(frozen=True)
class ShadowWitness:
    """A point whose orbit stays epsilon-close to a pseudo-orbit segment."""

    shadow_point: SystemPoint
    epsilon: Fraction
    window: tuple  # (first time index, last time index) checked

    def length(self) -> int:
        return self.window[1] - self.window[0] + 1


def _points_of(orbit: Union[PseudoOrbit, Sequence]) -> tuple:
    if isinstance(orbit, PseudoOrbit):
        return orbit.points
    return tuple(orbit)


def shadows(system, z: SystemPoint, orbit, epsilon,
            start_time: int = 0) -> Optional[ShadowWitness]:
    """Witness that d(f^(start_time+i)(z), x_i) <= epsilon for every index i
    of the pseudo-orbit, or None.  ``start_time`` lets the caller check
    two-sided windows by relabeling (z is then the point at the window's
    left edge)."""
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    pts = _points_of(orbit)
    cur = system.iterate(z, start_time) if start_time else z
    if isinstance(system, SymbolicSystem):
        if epsilon == 0:
            for x in pts:
                if cur != x:
                    return None
                cur = cur.shift(1)
            return ShadowWitness(z, epsilon, (start_time, start_time + len(pts) - 1))
        t = dyadic_radius(epsilon) if epsilon < 1 else 0
        for x in pts:
            if t and not distance_le(cur, x, t):
                return None
            cur = cur.shift(1)
    else:
        for x in pts:
            if system.distance(cur, x) > epsilon:
                return None
            cur = system.step(cur)
    return ShadowWitness(z, epsilon, (start_time, start_time + len(pts) - 1))


def glue_constraints(pts: Sequence[SymbolicPoint], rho: int) -> Optional[dict]:
    """Coordinate constraints forced on any shadow agreeing with each x_i on
    the window |j| <= rho.  None when two windows conflict (no shadow)."""
    constraints: dict[int, int] = {}
    for i, x in enumerate(pts):
        for j in range(-rho, rho + 1):
            c = i + j
            s = x.coord(j)
            old = constraints.get(c)
            if old is None:
                constraints[c] = s
            elif old != s:
                return None
    return constraints


def find_shadow(system, orbit, epsilon,
                budget: int = 10 ** 6) -> Optional[ShadowWitness]:
    """A shadow witness for a finite pseudo-orbit, or a proof of absence.

    Net systems: exhaustive search over all net points.  Symbolic systems:
    the glued-word construction; a window conflict or inadmissible glue rules
    every shadow out.  (On a reducible transition graph the glued word may
    admit no eventually periodic closure; None then means no *representable*
    witness.)
    """
    epsilon = Fraction(epsilon)
    pts = _points_of(orbit)
    if isinstance(system, NetSystem):
        for z in range(system.n):
            w = shadows(system, z, pts, epsilon)
            if w is not None:
                return w
        return None

    if epsilon == 0:
        # only a true orbit can be 0-shadowed, by its own start point
        return shadows(system, pts[0], pts, epsilon)
    t = dyadic_radius(epsilon) if epsilon < 1 else 0
    if t == 0:
        return shadows(system, pts[0], pts, epsilon)
    rho = t - 1
    if rho == 0:
        word = tuple(x.coord(0) for x in pts)
        if not system.word_admissible(word):
            return None
        z = system.periodic_closure(word, anchor=0)
        if z is None:
            return None
        w = shadows(system, z, pts, epsilon)
        assert w is not None
        return w
    cons = glue_constraints(pts, rho)
    if cons is None:
        return None
    lo, hi = -rho, len(pts) - 1 + rho
    word = tuple(cons[c] for c in range(lo, hi + 1))
    if not system.word_admissible(word):
        return None
    z = system.periodic_closure(word, anchor=lo)
    if z is None:
        return None
    w = shadows(system, z, pts, epsilon)
    assert w is not None, "glued candidate must shadow by construction"
    return w


# -- shadowability engines ----------------------------------------------------


@dataclass
class SearchStats:
    states: int = 0
    budget: int = 10 ** 6

    def tick(self, k: int = 1):
        from .systems import BudgetExceeded

        self.states += k
        if self.states > self.budget:
            raise BudgetExceeded(f"enumeration exceeded {self.budget} states")


def net_shadowability_dfs(system: NetSystem, start: int, epsilon, delta,
                          horizon: int, stats: SearchStats,
                          memo: Optional[dict] = None,
                          allowed_nodes: Optional[frozenset] = None) -> Optional[list]:
    """Lexicographically first delta-pseudo-orbit from ``start`` (step count
    <= horizon) admitting no epsilon-shadow, or None if all are shadowed.

    Tracks the surviving shadow positions along each path; a path fails
    exactly when that set empties.  Safe (point, candidate-set) states are
    memoized with the depth they were verified to; supersets of safe sets
    are safe.
    """
    epsilon = Fraction(epsilon)
    delta = Fraction(delta)
    if memo is None:
        memo = {}

    t0 = system.ball(start, epsilon)
    if not t0:
        return [start]  # cannot happen: start shadows itself

    def succ(p: int):
        out = system.successors(p, delta)
        if allowed_nodes is None:
            return out
        return [q for q in out if q in allowed_nodes]

    def is_safe(p: int, tset: frozenset, remaining: int) -> bool:
        for s, r in memo.get(p, ()):
            if r >= remaining and s <= tset:
                return True
        return False

    def mark_safe(p: int, tset: frozenset, remaining: int):
        lst = memo.setdefault(p, [])
        lst[:] = [(s, r) for s, r in lst if not (s >= tset and r <= remaining)]
        lst.append((tset, remaining))

    path = [start]

    def dfs(p: int, tset: frozenset, remaining: int) -> Optional[list]:
        if remaining == 0:
            return None
        if is_safe(p, tset, remaining):
            return None
        stats.tick()
        for q in succ(p):
            advanced = frozenset(system.map[w] for w in tset)
            filtered = advanced & system.ball(q, epsilon)
            path.append(q)
            if not filtered:
                return list(path)
            bad = dfs(q, filtered, remaining - 1)
            if bad is not None:
                return bad
            path.pop()
        mark_safe(p, tset, remaining)
        return None

    return dfs(start, frozenset(t0), horizon)


def symbolic_successor_candidates(system: SymbolicSystem, image: SymbolicPoint,
                                  s: int, window_radius: int) -> list:
    """Admissible periodic representatives q with d(image, q) <= 2^-s,
    enumerated by extending the forced central word within the window."""
    lo, hi = -window_radius, window_radius
    forced_lo, forced_hi = -(s - 1), s - 1
    base = image.window(forced_lo, forced_hi) if s >= 1 else ()
    words = [base]
    for c in range(forced_hi + 1, hi + 1):
        words = [w + (sym,) for w in words
                 for sym in range(system.alphabet_size)
                 if (not w or system.allowed(w[-1], sym))]
    for c in range(forced_lo - 1, lo - 1, -1):
        words = [(sym,) + w for w in words
                 for sym in range(system.alphabet_size)
                 if (not w or system.allowed(sym, w[0]))]
    out = []
    for w in sorted(words):
        q = system.periodic_closure(w, anchor=lo)
        if q is not None:
            out.append(q)
    return out


def symbolic_edge_good(system: SymbolicSystem, p: SymbolicPoint,
                       q: SymbolicPoint, rho: int) -> bool:
    """Whether the step p -> q keeps glued shadow windows consistent.

    For rho >= 1 this is agreement of f(p) and q on coordinates
    [-rho, rho-1]; for rho = 0 it is admissibility of the glued transition."""
    if rho == 0:
        return system.allowed(p.coord(0), q.coord(0))
    img = p.shift(1)
    for j in range(-rho, rho):
        if img.coord(j) != q.coord(j):
            return False
    return True


def symbolic_shadowability_scan(system: SymbolicSystem, starts: Sequence[SymbolicPoint],
                                epsilon, delta, horizon: int, stats: SearchStats,
                                window_radius: Optional[int] = None,
                                node_filter=None) -> Optional[list]:
    """First (in DFS/lex order) delta-pseudo-orbit from the given start
    points with no epsilon-shadow, or None.

    Exact for strongly connected transition graphs: a path is unshadowable
    iff it contains an inconsistent step, so the scan looks for the first
    reachable bad edge within the horizon.
    """
    epsilon = Fraction(epsilon)
    delta = Fraction(delta)
    if epsilon >= 1:
        return None  # everything is shadowed by any point
    t = dyadic_radius(epsilon)
    rho = t - 1
    s = dyadic_radius(delta) if delta > 0 else None
    if s is None:
        # delta = 0: pseudo-orbits are orbits, shadowed by their start point
        return None
    if window_radius is None:
        window_radius = max(s, rho + 1)

    if (rho >= 1 and s - 1 >= rho) or (rho == 0 and s >= 1):
        # every delta-step forces agreement beyond the shadow window:
        # all edges are consistent, so every pseudo-orbit glues to a shadow
        return None

    seen: dict = {}
    path: list = []

    def dfs(p: SymbolicPoint, remaining: int) -> Optional[list]:
        if remaining == 0:
            return None
        prev = seen.get(p)
        if prev is not None and prev >= remaining:
            return None
        seen[p] = remaining
        stats.tick()
        img = p.shift(1)
        for q in symbolic_successor_candidates(system, img, s, window_radius):
            if node_filter is not None and not node_filter(q):
                continue
            path.append(q)
            if not symbolic_edge_good(system, p, q, rho):
                return list(path)
            bad = dfs(q, remaining - 1)
            if bad is not None:
                return bad
            path.pop()
        return None

    for x in starts:
        path = [x]
        bad = dfs(x, horizon)
        if bad is not None:
            return bad
    return None
