"""Semi-horseshoe certificates from families of separated pseudo-orbit loops.

A family of k delta-loops at a common base point, pairwise more than
4 epsilon apart at some matching index, codes every finite word over k
symbols by a shadow of the corresponding loop concatenation.  Distinct
words of equal length then yield (n |w|, epsilon)-separated points, which
pins the entropy lower bound log(k)/n.  Everything stored is finitely
re-checkable; no claim is made about the infinite factor map.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .pseudo_orbits import PseudoOrbit, concatenate, connect, orbit_segment, repeat, splice_chain, validate
from .shadow_search import ShadowWitness, find_shadow, shadows
from .systems import BudgetExceeded, NetSystem, SymbolicPoint, SymbolicSystem


class RecipeInapplicable(ValueError):
    """The structural hypothesis of a loop-building recipe fails."""


class CertificateAborted(RuntimeError):
    """Some word admits no shadow at this resolution."""

    def __init__(self, word):
        self.word = word
        super().__init__(f"word {word} admits no shadow; "
                         "certificate aborted (falsification at this resolution)")


@dataclass(frozen=True)
class SeparationWitness:
    loop_a: int
    loop_b: int
    index: int
    distance: Fraction


@dataclass
class LoopFamily:
    """k equal-length delta-loops at one base point with pairwise 4 epsilon
    separation witnesses (strict inequality, re-verifiable)."""

    system: object
    base: object
    loops: tuple  # of PseudoOrbit, all loops at base with equal step_count
    delta: Fraction
    epsilon: Fraction
    witnesses: tuple  # SeparationWitness per unordered pair

    @property
    def k(self) -> int:
        return len(self.loops)

    @property
    def n(self) -> int:
        return self.loops[0].step_count

    def reverify(self) -> bool:
        if any(lp.kind != "loop" or lp.start != self.base for lp in self.loops):
            return False
        if len({lp.step_count for lp in self.loops}) != 1:
            return False
        if any(not lp.reverify() for lp in self.loops):
            return False
        bound = 4 * self.epsilon
        seen = set()
        for w in self.witnesses:
            a, b = self.loops[w.loop_a], self.loops[w.loop_b]
            d = self.system.distance(a.points[w.index], b.points[w.index])
            if not (d > bound and d == w.distance):
                return False
            seen.add((w.loop_a, w.loop_b))
        expected = {(i, j) for i in range(self.k) for j in range(i + 1, self.k)}
        return seen == expected


def equalize(loops: Sequence[PseudoOrbit]) -> list:
    """Repeat each loop to the least common multiple of the step counts."""
    n = 1
    for lp in loops:
        n = math.lcm(n, lp.step_count)
    return [repeat(lp, n // lp.step_count) if lp.step_count != n else lp
            for lp in loops]


def separation_witness(system, a: PseudoOrbit, b: PseudoOrbit,
                       threshold: Fraction) -> Optional[tuple]:
    """First index with d(a_i, b_i) > threshold (strict)."""
    for i in range(len(a.points)):
        d = system.distance(a.points[i], b.points[i])
        if d > threshold:
            return i, d
    return None


def make_family(system, base, loops: Sequence[PseudoOrbit], epsilon,
                delta=None) -> LoopFamily:
    """Length-equalize candidate loops and certify pairwise separation."""
    epsilon = Fraction(epsilon)
    if not loops:
        raise ValueError("need at least one loop")
    eq = equalize(loops)
    delta = Fraction(delta) if delta is not None else max(lp.delta for lp in eq)
    witnesses = []
    for i in range(len(eq)):
        for j in range(i + 1, len(eq)):
            w = separation_witness(system, eq[i], eq[j], 4 * epsilon)
            if w is None:
                raise ValueError(f"loops {i} and {j} have no 4-epsilon separation index")
            witnesses.append(SeparationWitness(i, j, w[0], w[1]))
    fam = LoopFamily(system, base, tuple(eq), delta, epsilon, tuple(witnesses))
    assert fam.reverify()
    return fam


def find_loop_family(x, epsilon, delta, n_max: int, k: int, system,
                     budget: int = 20000) -> Optional[LoopFamily]:
    """Search k pairwise-separated delta-loops at x of a common length
    <= n_max.  Assumes x already passed the positive shadowing test at
    (epsilon, delta); the family itself never certifies that.
    """
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    candidates = _candidate_loops(system, x, delta, n_max, budget)
    if not candidates:
        return None
    if k == 1:
        lp = candidates[0]
        return LoopFamily(system, x, (lp,), delta, epsilon, ())

    # greedy: grow a pairwise-separated subfamily, preferring short loops
    chosen: list[PseudoOrbit] = []
    for cand in candidates:
        trial = chosen + [cand]
        eq = equalize(trial)
        if eq[0].step_count > n_max:
            continue
        ok = all(separation_witness(system, a, b, 4 * epsilon) is not None
                 for a, b in itertools.combinations(eq, 2))
        if ok:
            chosen = trial
            if len(chosen) == k:
                return make_family(system, x, chosen, epsilon, delta)
    return None


def _candidate_loops(system, x, delta: Fraction, n_max: int, budget: int) -> list:
    """Delta-loops at x, shortest first."""
    out = []
    if isinstance(system, NetSystem):
        seen_lengths = set()
        loop = connect(x, x, delta, system, max_len=n_max)
        if loop is not None and loop.step_count <= n_max:
            out.append(loop)
            seen_lengths.add(loop.step_count)
        # detours: shortest chains x -> q -> x for every reachable q
        count = 0
        for q in range(system.n):
            if q == x:
                continue
            count += 1
            if count > budget:
                raise BudgetExceeded("loop candidate search exceeded its budget")
            first = connect(x, q, delta, system, max_len=n_max)
            if first is None:
                continue
            back = connect(q, x, delta, system, max_len=n_max - first.step_count)
            if back is None:
                continue
            loop = concatenate(first, back)
            if loop.step_count <= n_max:
                out.append(loop)
    else:
        # dwell loop: the periodic orbit of x when it is periodic
        period = x.least_period()
        if period is not None and period <= n_max:
            out.append(orbit_segment(system, x, period))
        # excursions through periodic closures of small windows
        depth = 2
        width = 2 * depth + 1
        count = 0
        for w in system.words(width):
            q = system.periodic_closure(w, anchor=-depth)
            if q is None or q == x:
                continue
            count += 1
            if count > budget:
                raise BudgetExceeded("loop candidate search exceeded its budget")
            first = splice_chain(system, x, q, delta)
            if first is None:
                continue
            per = q.least_period()
            if per is not None:
                first = concatenate(first, orbit_segment(system, q, per))
            back = splice_chain(system, q, x, delta)
            if back is None:
                continue
            loop = concatenate(first, back)
            if loop.step_count <= n_max:
                out.append(loop)
    out.sort(key=lambda lp: lp.step_count)
    return out


@dataclass
class HorseshoeCertificate:
    """Shadow witnesses for every loop word up to a stamped length."""

    family: LoopFamily
    word_length_max: int
    coded: dict  # word tuple -> ShadowWitness
    entropy_log_arg: int = 0   # k: bound is log(k)/n, kept symbolic
    entropy_divisor: int = 1   # n

    def __post_init__(self):
        if not self.entropy_log_arg:
            self.entropy_log_arg = self.family.k
            self.entropy_divisor = self.family.n

    @property
    def entropy_lower_bound(self) -> float:
        return math.log(self.entropy_log_arg) / self.entropy_divisor

    def word_orbit(self, word: tuple) -> PseudoOrbit:
        lp = self.family.loops
        po = lp[word[0]]
        for s in word[1:]:
            po = concatenate(po, lp[s])
        return po

    def reverify(self, deep: bool = True) -> bool:
        """The tracing clause for every stored word: the coded point stays
        within epsilon of the indicated loop blocks."""
        fam = self.family
        if not fam.reverify():
            return False
        for word, witness in self.coded.items():
            po = self.word_orbit(word)
            if shadows(fam.system, witness.shadow_point, po, fam.epsilon) is None:
                return False
            if not deep:
                break
        return True

    def separated_pair_count(self, length: int) -> int:
        """Number of pairwise separated coded points among words of the
        given length; equals k^length for a sound certificate."""
        fam = self.family
        words = [w for w in self.coded if len(w) == length]
        bound = 2 * fam.epsilon
        count = 0
        for wa, wb in itertools.combinations(words, 2):
            if self._pair_separated(wa, wb, bound):
                count += 1
        full = len(words) * (len(words) - 1) // 2
        return len(words) if count == full else -1

    def _pair_separated(self, wa: tuple, wb: tuple, bound: Fraction) -> bool:
        fam = self.family
        s = next(i for i in range(len(wa)) if wa[i] != wb[i])
        witness = next(w for w in fam.witnesses
                       if {w.loop_a, w.loop_b} == {wa[s], wb[s]})
        time = s * fam.n + witness.index
        za = fam.system.iterate(self.coded[wa].shadow_point, time)
        zb = fam.system.iterate(self.coded[wb].shadow_point, time)
        return fam.system.distance(za, zb) > bound


def build_certificate(family: LoopFamily, word_length_max: int,
                      include_shorter: bool = True) -> HorseshoeCertificate:
    """Shadow every loop word with |w| <= word_length_max at the family's
    epsilon.  Aborts with the offending word when some concatenation admits
    no shadow (a falsification at this resolution)."""
    fam = family
    coded = {}
    lengths = range(1, word_length_max + 1) if include_shorter else [word_length_max]
    if word_length_max == 0:
        return HorseshoeCertificate(fam, 0, {})
    for length in lengths:
        for word in itertools.product(range(fam.k), repeat=length):
            po = None
            for s in word:
                po = fam.loops[s] if po is None else concatenate(po, fam.loops[s])
            witness = find_shadow(fam.system, po, fam.epsilon)
            if witness is None:
                raise CertificateAborted(word)
            coded[word] = witness
    cert = HorseshoeCertificate(fam, word_length_max, coded)
    return cert


@dataclass
class SemiconjugacyReport:
    checked: int
    failures: list  # (word, first bad block index)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_semiconjugacy(cert: HorseshoeCertificate) -> SemiconjugacyReport:
    """Coding commutes with the n-step map and the word shift: for every
    stored word a.w', the n-th iterate of the coded point epsilon-traces the
    loop sequence of w'."""
    fam = cert.family
    checked = 0
    failures = []
    for word, witness in sorted(cert.coded.items()):
        if len(word) < 2:
            continue
        checked += 1
        tail = word[1:]
        shifted = fam.system.iterate(witness.shadow_point, fam.n)
        po = cert.word_orbit(tail)
        if shadows(fam.system, shifted, po, fam.epsilon) is None:
            failures.append((word, 0))
    return SemiconjugacyReport(checked, failures)


# -- recipes -------------------------------------------------------------------


def nonminimal_recipe(x, cycle_points: Sequence, delta, system,
                      class_nodes: Optional[Sequence] = None,
                      z=None) -> LoopFamily:
    """Two separated loops from a chain class strictly containing a cycle.

    One loop dwells near a point z of the class off the cycle set, the other
    runs to the cycle, winds there long enough to cover a multiple of the
    first loop's length, and returns.  The separation scale is
    epsilon = d(z, cycle)/5, with 4 delta < epsilon required.
    """
    delta = Fraction(delta)
    cyc = list(cycle_points)
    if not cyc:
        raise RecipeInapplicable("empty cycle set")

    if isinstance(system, NetSystem):
        members = set(class_nodes) if class_nodes is not None else None
        if z is None:
            z = x if x not in set(cyc) else None
            if z is None and members:
                off = sorted(members - set(cyc))
                z = off[0] if off else None
        if z is None or z in set(cyc):
            raise RecipeInapplicable("chain class does not strictly contain the cycle")
        dist_zk = min(system.distance(z, c) for c in cyc)
        eps = dist_zk / 5
        if not 4 * delta < eps:
            raise ValueError(f"need 4 delta < epsilon = d(z, K)/5 = {eps}")
        c1 = connect(z, z, delta, system)
        if c1 is None:
            raise RecipeInapplicable("no delta-loop through z")
        y = cyc[0]
        a2 = connect(z, y, delta, system)
        a1 = connect(y, z, delta, system)
        if a2 is None or a1 is None:
            raise RecipeInapplicable("z and the cycle are not mutually chained")
        a3 = orbit_segment(system, y, _cycle_length(system, y))
    else:
        if z is None:
            z = x
        if any(z == c for c in cyc):
            raise RecipeInapplicable("base point lies in the cycle set")
        dist_zk = min(system.distance(z, c) for c in cyc)
        eps = dist_zk / 5
        if not 4 * delta < eps:
            raise ValueError(f"need 4 delta < epsilon = d(z, K)/5 = {eps}")
        period = z.least_period()
        if period is None:
            raise RecipeInapplicable("symbolic recipe needs a periodic z")
        c1 = orbit_segment(system, z, period)
        y = cyc[0]
        a2 = splice_chain(system, z, y, delta)
        a1 = splice_chain(system, y, z, delta)
        if a2 is None or a1 is None:
            raise RecipeInapplicable("z and the cycle are not mutually chained")
        yper = y.least_period()
        if yper is None:
            raise RecipeInapplicable("cycle points must be periodic")
        a3 = orbit_segment(system, y, yper)

    n1 = c1.step_count
    dwell_reps = (n1 // a3.step_count) + 2
    c2 = a2
    for _ in range(dwell_reps):
        c2 = concatenate(c2, a3)
    c2 = concatenate(c2, a1)

    fam_loops = equalize([c1, c2])
    x1, x2 = fam_loops
    witness = None
    for i in range(a2.step_count, a2.step_count + dwell_reps * a3.step_count + 1):
        if i % n1 == 0 and i < len(x2.points):
            d = system.distance(x1.points[i], x2.points[i])
            if d > 4 * eps:
                witness = (i, d)
                break
    if witness is None:
        raise RecipeInapplicable("no dwell index aligned with the z-loop")
    fam = LoopFamily(system, z, (x1, x2), delta, eps,
                     (SeparationWitness(0, 1, witness[0], witness[1]),))
    assert fam.reverify()
    return fam


def _cycle_length(system: NetSystem, y: int) -> int:
    cur = system.step(y)
    steps = 1
    while cur != y:
        cur = system.step(cur)
        steps += 1
        if steps > system.n:
            raise RecipeInapplicable("cycle point does not close up")
    return steps


def sensitive_recipe(x, neighborhood: Sequence, constant, system, delta,
                     horizon: int = 64, return_budget: int = 512,
                     epsilon=None) -> LoopFamily:
    """Two separated loops from a sensitive minimal class.

    Finds a pair of neighborhood points whose orbits diverge past the
    sensitivity constant within the horizon and later return to the
    neighborhood; the returning orbit segments, closed up through the base
    point, become the loops.  Requires epsilon < constant/4 (default
    constant/5).
    """
    constant = Fraction(constant)
    delta = Fraction(delta)
    eps = Fraction(epsilon) if epsilon is not None else constant / 5
    if not eps < constant / 4:
        raise ValueError("need epsilon < constant/4")
    pts = list(neighborhood)
    if x not in pts:
        pts = [x] + pts

    div = None
    for a, b in itertools.combinations(pts, 2):
        ca, cb = a, b
        for n in range(1, horizon + 1):
            ca, cb = system.step(ca), system.step(cb)
            if system.distance(ca, cb) > constant:
                div = (a, b, n)
                break
        if div:
            break
    if div is None:
        raise RecipeInapplicable("no diverging pair in the neighborhood "
                                 "(equicontinuous at this resolution)")
    a, b, n = div

    def returning_orbit(p):
        cur = system.step(p)
        seg = [cur]
        for steps in range(2, return_budget + 1):
            cur = system.step(cur)
            if steps > n and any(cur == q for q in pts):
                return seg, steps
            seg.append(cur)
        raise BudgetExceeded("orbit did not return to the neighborhood in budget")

    seg_a, na = returning_orbit(a)
    seg_b, nb = returning_orbit(b)
    c1 = validate([x] + seg_a[:na - 1] + [x], delta, system, kind="loop")
    c2 = validate([x] + seg_b[:nb - 1] + [x], delta, system, kind="loop")
    x1, x2 = equalize([c1, c2])
    d = system.distance(x1.points[n], x2.points[n])
    if not d > 4 * eps:
        raise RecipeInapplicable("diverging index lost after equalization")
    fam = LoopFamily(system, x, (x1, x2), delta, eps,
                     (SeparationWitness(0, 1, n, d),))
    assert fam.reverify()
    return fam
