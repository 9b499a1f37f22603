"""Empirical measures and the explicit weak* metric.

The metric is a weighted sum over a fixed family of tent test functions
with bounded-Lipschitz norm at most 1; the sum is truncated at J terms and
every result carries the certified tail bound 2^(1-J).  The truncated value
is a lower bound for the untruncated metric, so upper-bound inequalities
checked on it are implied by the exact statements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .systems import (
    NetSystem,
    SymbolicPoint,
    SymbolicSystem,
    SystemPoint,
)

ZERO = Fraction(0)


def _atom_key(point):
    """Deterministic total order on atoms of one system kind."""
    if isinstance(point, SymbolicPoint):
        return point.canonical()
    return point


class EmpiricalMeasure:
    """Finitely supported probability measure with exact rational weights."""

    __slots__ = ("atoms",)

    def __init__(self, atoms):
        merged: dict = {}
        for point, weight in atoms:
            w = Fraction(weight)
            if w < 0:
                raise ValueError("weights must be nonnegative")
            if w == 0:
                continue
            merged[point] = merged.get(point, ZERO) + w
        if not merged:
            raise ValueError("measure needs at least one atom")
        total = sum(merged.values())
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        self.atoms = tuple(sorted(merged.items(), key=lambda kv: _atom_key(kv[0])))

    @classmethod
    def from_orbit(cls, system, x: SystemPoint, n: int) -> "EmpiricalMeasure":
        """Uniform weights 1/n on the first n orbit points (merged)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        w = Fraction(1, n)
        pts = []
        cur = x
        for _ in range(n):
            pts.append((cur, w))
            cur = system.step(cur)
        return cls(pts)

    @classmethod
    def point_mass(cls, x: SystemPoint) -> "EmpiricalMeasure":
        return cls([(x, Fraction(1))])

    @classmethod
    def from_sequence(cls, points: Sequence[SystemPoint]) -> "EmpiricalMeasure":
        w = Fraction(1, len(points))
        return cls([(p, w) for p in points])

    @classmethod
    def mix(cls, measures: Sequence["EmpiricalMeasure"],
            weights: Sequence[Fraction]) -> "EmpiricalMeasure":
        if len(measures) != len(weights):
            raise ValueError("one weight per measure")
        atoms = []
        for mu, a in zip(measures, weights):
            a = Fraction(a)
            for p, w in mu.atoms:
                atoms.append((p, a * w))
        return cls(atoms)

    def support(self) -> tuple:
        return tuple(p for p, _ in self.atoms)

    def weight_of(self, point) -> Fraction:
        for p, w in self.atoms:
            if p == point:
                return w
        return ZERO

    def __eq__(self, other):
        if not isinstance(other, EmpiricalMeasure):
            return NotImplemented
        return dict(self.atoms) == dict(other.atoms)

    def __hash__(self):
        return hash(frozenset(self.atoms))

    def __repr__(self):
        return f"EmpiricalMeasure({len(self.atoms)} atoms)"


class TestFunctionFamily:
    """Tent functions phi(y) = max(0, r - d(y, p)) / (1 + r) over an
    enumeration of (center, dyadic radius) pairs, center-major.

    Each function has sup norm r/(1+r) and Lipschitz bound 1/(1+r), so the
    bounded-Lipschitz norm is exactly 1.
    """

    __test__ = False  # not a pytest class despite the name

    def __init__(self, system, centers: Sequence, radii: Optional[Sequence] = None,
                 size: int = 24):
        self.system = system
        self.centers = tuple(centers)
        self.radii = tuple(Fraction(r) for r in (radii or (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))))
        if size < 1:
            raise ValueError("family size must be positive")
        if size > len(self.centers) * len(self.radii):
            raise ValueError("not enough (center, radius) pairs for the requested size")
        self.size = size
        self._value_cache: dict = {}

    @classmethod
    def for_system(cls, system, size: int = 24, depth: int = 2,
                   radii: Optional[Sequence] = None) -> "TestFunctionFamily":
        if isinstance(system, SymbolicSystem):
            width = 2 * depth + 1
            centers = []
            for w in system.words(width):
                p = system.periodic_closure(w, anchor=-depth)
                if p is not None:
                    centers.append(p)
        else:
            centers = list(range(system.n))
        return cls(system, centers, radii=radii, size=size)

    def pair(self, j: int) -> tuple:
        """(center, radius) of the j-th function, 1-based."""
        if not 1 <= j <= self.size:
            raise ValueError("function index out of range")
        c, r = divmod(j - 1, len(self.radii))
        return self.centers[c], self.radii[r]

    def value(self, j: int, y) -> Fraction:
        key = (j, y)
        v = self._value_cache.get(key)
        if v is None:
            p, r = self.pair(j)
            d = self.system.distance(y, p)
            v = max(ZERO, r - d) / (1 + r)
            self._value_cache[key] = v
        return v

    def integral(self, j: int, mu: EmpiricalMeasure) -> Fraction:
        return sum((w * self.value(j, p) for p, w in mu.atoms), ZERO)

    def validate(self, sample_points: Sequence) -> bool:
        """sup|phi| + Lip(phi) <= 1 on all sampled pairs."""
        for j in range(1, self.size + 1):
            _, r = self.pair(j)
            c = 1 / (1 + r)
            sup = ZERO
            for y in sample_points:
                v = self.value(j, y)
                if v > sup:
                    sup = v
            for a in sample_points:
                va = self.value(j, a)
                for b in sample_points:
                    if a is b:
                        continue
                    d = self.system.distance(a, b)
                    if d > 0 and abs(va - self.value(j, b)) > c * d:
                        return False
            if sup + c > 1:
                return False
        return True


@dataclass(frozen=True)
class DStarResult:
    """Truncated weak* distance with its certified truncation tail."""

    value: Fraction
    tail_bound: Fraction
    terms: int

    def upper(self) -> Fraction:
        return self.value + self.tail_bound


def dstar(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
          family: TestFunctionFamily) -> DStarResult:
    """Sum over j <= J of 2^-j |integral difference|, with tail 2^(1-J).

    Symmetric and zero exactly when all J integrals agree; the value is a
    lower bound for the untruncated metric.
    """
    total = ZERO
    weight = Fraction(1, 2)
    for j in range(1, family.size + 1):
        total += weight * abs(family.integral(j, mu) - family.integral(j, nu))
        weight /= 2
    return DStarResult(total, Fraction(2, 1 << family.size), family.size)


# -- measure approximation lemma suite ---------------------------------------


@dataclass
class LemmaViolation:
    item: int
    trial: int
    lhs: Fraction
    rhs: Fraction
    detail: dict = field(default_factory=dict)


@dataclass
class MeasureApproxReport:
    trials: int
    seed: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def _random_point(system, rng) -> SystemPoint:
    if isinstance(system, SymbolicSystem):
        while True:
            length = rng.randint(1, 6)
            word = tuple(rng.randrange(system.alphabet_size) for _ in range(length))
            p = system.periodic_closure(word, anchor=rng.randint(-3, 3))
            if p is not None:
                return p
    return rng.randrange(system.n)


def _nearby_point(system, x, eps: Fraction, rng) -> SystemPoint:
    """A point at distance < eps from x (strict)."""
    if isinstance(system, SymbolicSystem):
        from .systems import dyadic_radius

        t = dyadic_radius(eps)  # 2^-t <= eps; agreement to radius t gives d < eps
        w = x.window(-t - 1, t + 1)
        p = system.periodic_closure(w, anchor=-t - 1)
        if p is not None:
            return p
        return x
    row = system.row(x)
    options = [q for q in range(system.n) if row[q] < eps]
    return rng.choice(options)


def verify_measure_approx(system, family: TestFunctionFamily, trials: int = 1000,
                          seed: int = 0, eps: Fraction = Fraction(1, 4),
                          orbit_len: int = 12) -> MeasureApproxReport:
    """Random instances of the three weak*-approximation inequalities:

    1. averages over two index sets A, B of one sequence differ by at most
       (|A|+|B|)/(|A||B|) |A delta B| + ||A|-|B||/(|A||B|) |A cap B|;
    2. sequences paired within eps give empirical measures within eps;
    3. convex combinations of measures eps-close to mu stay eps-close.

    All evaluations are exact; expected violation count is zero.
    """
    import random as _random

    rng = _random.Random(seed)
    eps = Fraction(eps)
    violations = []
    for trial in range(trials):
        # shared random orbit sequence
        base = _random_point(system, rng)
        seq = [base]
        for _ in range(orbit_len - 1):
            seq.append(system.step(seq[-1]))

        # item 1
        idx = range(orbit_len)
        a_set = sorted(rng.sample(idx, rng.randint(1, orbit_len)))
        b_set = sorted(rng.sample(idx, rng.randint(1, orbit_len)))
        mu_a = EmpiricalMeasure.from_sequence([seq[i] for i in a_set])
        mu_b = EmpiricalMeasure.from_sequence([seq[i] for i in b_set])
        na, nb = len(a_set), len(b_set)
        sym_diff = len(set(a_set) ^ set(b_set))
        inter = len(set(a_set) & set(b_set))
        rhs = (Fraction(na + nb, na * nb) * sym_diff
               + Fraction(abs(na - nb), na * nb) * inter)
        lhs = dstar(mu_a, mu_b, family).value
        if lhs > rhs:
            violations.append(LemmaViolation(1, trial, lhs, rhs,
                                             {"A": a_set, "B": b_set}))

        # item 2
        m = rng.randint(1, orbit_len)
        xs = seq[:m]
        ys = [_nearby_point(system, x, eps, rng) for x in xs]
        mu_x = EmpiricalMeasure.from_sequence(xs)
        mu_y = EmpiricalMeasure.from_sequence(ys)
        lhs = dstar(mu_x, mu_y, family).value
        if lhs >= eps:
            violations.append(LemmaViolation(2, trial, lhs, eps, {"m": m}))

        # item 3
        k = rng.randint(1, 4)
        mu = EmpiricalMeasure.from_sequence(xs)
        parts = []
        for _ in range(k):
            ys = [_nearby_point(system, x, eps, rng) for x in xs]
            parts.append(EmpiricalMeasure.from_sequence(ys))
        if all(dstar(p, mu, family).value < eps for p in parts):
            cuts = sorted(rng.randint(0, 24) for _ in range(k - 1))
            raw = [a - b for a, b in zip(cuts + [24], [0] + cuts)]
            weights = [Fraction(r, 24) for r in raw]
            if sum(weights) == 1 and all(w >= 0 for w in weights):
                mix = EmpiricalMeasure.mix(parts, weights)
                lhs = dstar(mix, mu, family).value
                if lhs >= eps:
                    violations.append(LemmaViolation(3, trial, lhs, eps, {"k": k}))
    return MeasureApproxReport(trials, seed, violations)


# -- block concatenations (generic segments + short connectors) ---------------


@dataclass
class BlockConcatenation:
    """Rounds of connector/generic-segment blocks and a sequence tracing them.

    Y is the concatenation over rounds m of X^m_1 P^m_1 ... X^m_k P^m_k,
    where P^m_i is the n-step orbit of the i-th generic point and every
    connector X^m_i has at most R points; X stays within eps of Y pointwise.
    """

    system: object
    measures: tuple
    generic_points: tuple  # per round: tuple of k points
    n: int
    connectors: tuple      # per round: tuple of k point-tuples (may be empty)
    x_sequence: tuple
    eps: Fraction
    connector_bound: int

    def round_points(self, m: int) -> list:
        out = []
        for i in range(len(self.measures)):
            out.extend(self.connectors[m][i])
            p = self.generic_points[m][i]
            for _ in range(self.n):
                out.append(p)
                p = self.system.step(p)
        return out

    def y_sequence(self) -> list:
        out = []
        for m in range(len(self.generic_points)):
            out.extend(self.round_points(m))
        return out

    def boundaries(self) -> list:
        """Cumulative lengths s_1..s_M of the rounds."""
        out = []
        total = 0
        for m in range(len(self.generic_points)):
            total += len(self.round_points(m))
            out.append(total)
        return out


def build_periodic_block_concatenation(system, periodic_points: Sequence,
                                       eps, n: int, rounds: int,
                                       connector_bound: int = 4) -> BlockConcatenation:
    """Standard instance of the block form: the given periodic orbits are
    visited for n steps each, in order, connected by spliced eps-chains
    (with the chain endpoints dropped); the traced sequence X replaces every
    point by the periodic closure of a central window, staying within eps."""
    from .pseudo_orbits import splice_chain
    from .systems import dyadic_radius

    eps = Fraction(eps)
    pts = list(periodic_points)
    k = len(pts)
    measures = []
    for p in pts:
        period = p.least_period()
        if period is None:
            raise ValueError("generic points must be periodic")
        if n % period:
            raise ValueError("n must be a multiple of every orbit period")
        measures.append(EmpiricalMeasure.from_orbit(system, p, period))

    generic = []
    connectors = []
    for _ in range(rounds):
        row_conn = []
        for i, p in enumerate(pts):
            prev = pts[(i - 1) % k]
            if i == 0 and not connectors:
                row_conn.append(())  # the very first block starts the sequence
                continue
            chain = splice_chain(system, prev.shift(n - 1), p, eps)
            if chain is None:
                raise ValueError("orbits are not eps-spliceable")
            conn = tuple(chain.points[1:-1])
            if len(conn) > connector_bound:
                raise ValueError(f"connector of {len(conn)} points exceeds the "
                                 f"bound {connector_bound}")
            row_conn.append(conn)
        generic.append(tuple(pts))
        connectors.append(tuple(row_conn))

    construction = BlockConcatenation(
        system=system, measures=tuple(measures), generic_points=tuple(generic),
        n=n, connectors=tuple(connectors), x_sequence=(), eps=eps,
        connector_bound=connector_bound)
    t = dyadic_radius(eps)
    xs = []
    for q in construction.y_sequence():
        w = q.window(-t - 1, t + 1)
        closed = system.periodic_closure(w, anchor=-t - 1)
        xs.append(closed if closed is not None else q)
    construction.x_sequence = tuple(xs)
    return construction


@dataclass
class EmpiricalLemmaReport:
    eps: Fraction
    bound: Fraction  # 3 eps
    per_round: list  # (m, s_m, exact value)
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_empirical_lemma(construction: BlockConcatenation,
                           family: TestFunctionFamily) -> EmpiricalLemmaReport:
    """Check d*(average of the measures, empirical of X at each round
    boundary) <= 3 eps, after validating the stated block form."""
    c = construction
    eps = Fraction(c.eps)
    k = len(c.measures)
    if any(len(r) != k for r in c.generic_points) or any(len(r) != k for r in c.connectors):
        raise ValueError("malformed block form: need k entries per round")
    for rnd in c.connectors:
        for conn in rnd:
            if len(conn) > c.connector_bound:
                raise ValueError("malformed block form: connector exceeds the bound")
    y = c.y_sequence()
    if len(c.x_sequence) < len(y):
        raise ValueError("x sequence shorter than the block concatenation")
    for xj, yj in zip(c.x_sequence, y):
        if c.system.distance(xj, yj) > eps:
            raise ValueError("x sequence leaves the eps-tube around the blocks")

    avg = EmpiricalMeasure.mix(list(c.measures),
                               [Fraction(1, k)] * k)
    bound = 3 * eps
    per_round = []
    violations = []
    for m, s_m in enumerate(c.boundaries(), start=1):
        emp = EmpiricalMeasure.from_sequence(list(c.x_sequence[:s_m]))
        val = dstar(avg, emp, family).value
        per_round.append((m, s_m, val))
        if val > bound:
            violations.append((m, s_m, val, bound))
    return EmpiricalLemmaReport(eps, bound, per_round, violations)
