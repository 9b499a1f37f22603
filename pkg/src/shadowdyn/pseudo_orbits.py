"""The delta-pseudo-orbit calculus: validation, concatenation, loop
repetition and breadth-first chain search on net systems.

Length bookkeeping is in *steps*: a pseudo-orbit with points x_0..x_n has
step_count n, and step counts add exactly under concatenation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .systems import NetSystem, System, SystemPoint, check_point

SEGMENT = "segment"
LOOP = "loop"


class PseudoOrbitError(ValueError):
    """A step of a candidate pseudo-orbit exceeds the declared bound."""

    def __init__(self, first_bad_index: int, worst_error: Fraction, delta: Fraction):
        self.first_bad_index = first_bad_index
        self.worst_error = worst_error
        self.delta = delta
        super().__init__(
            f"step {first_bad_index} violates the bound: error {worst_error} > delta {delta}"
        )


@dataclass(frozen=True)
class PseudoOrbit:
    """A certified delta-pseudo-orbit.

    ``points`` is the full point sequence; consecutive steps satisfy
    d(f(x_i), x_{i+1}) <= delta (re-verifiable via :func:`validate`).
    Loops have first point equal to last and at least one step.
    """

    system: System
    points: tuple
    delta: Fraction
    kind: str

    @property
    def step_count(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> SystemPoint:
        return self.points[0]

    @property
    def end(self) -> SystemPoint:
        return self.points[-1]

    def step_errors(self) -> list[Fraction]:
        sys = self.system
        return [sys.distance(sys.step(self.points[i]), self.points[i + 1])
                for i in range(self.step_count)]

    def reverify(self) -> bool:
        return all(e <= self.delta for e in self.step_errors())

    def __len__(self) -> int:
        return len(self.points)


def validate(points: Sequence[SystemPoint], delta, system: System,
             kind: Optional[str] = None) -> PseudoOrbit:
    """Certify a point sequence as a delta-pseudo-orbit.

    Raises :class:`PseudoOrbitError` carrying the first violating step index
    and the worst step error.  ``kind`` defaults to loop when the endpoints
    coincide and there is at least one step.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    pts = tuple(points)
    if not pts:
        raise ValueError("pseudo-orbit must be nonempty")
    for p in pts:
        check_point(system, p)
    first_bad = None
    worst = Fraction(0)
    for i in range(len(pts) - 1):
        err = system.distance(system.step(pts[i]), pts[i + 1])
        if err > worst:
            worst = err
        if err > delta and first_bad is None:
            first_bad = i
    if first_bad is not None:
        raise PseudoOrbitError(first_bad, worst, delta)
    if kind is None:
        kind = LOOP if len(pts) >= 2 and pts[0] == pts[-1] else SEGMENT
    if kind == LOOP and (len(pts) < 2 or pts[0] != pts[-1]):
        raise ValueError("a loop needs at least one step and equal endpoints")
    if kind not in (SEGMENT, LOOP):
        raise ValueError(f"unknown kind {kind!r}")
    return PseudoOrbit(system, pts, delta, kind)


def orbit_segment(system: System, x: SystemPoint, steps: int) -> PseudoOrbit:
    """The true orbit x, f(x), ..., f^steps(x) as a 0-pseudo-orbit."""
    pts = [x]
    for _ in range(steps):
        pts.append(system.step(pts[-1]))
    return PseudoOrbit(system, tuple(pts), Fraction(0),
                       LOOP if steps >= 1 and pts[0] == pts[-1] else SEGMENT)


def concatenate(x: PseudoOrbit, y: PseudoOrbit) -> PseudoOrbit:
    """Join two pseudo-orbits sharing an endpoint.

    The duplicated junction point appears once; the step bound is the max of
    the two bounds and the junction step is re-verified rather than assumed.
    """
    if x.system is not y.system:
        raise ValueError("pseudo-orbits live on different systems")
    if x.end != y.start:
        raise ValueError("endpoint mismatch: X must end where Y begins")
    delta = max(x.delta, y.delta)
    junction_err = x.system.distance(x.system.step(x.end), y.points[1]) if y.step_count else None
    if junction_err is not None and junction_err > delta:
        raise PseudoOrbitError(x.step_count, junction_err, delta)
    pts = x.points + y.points[1:]
    kind = LOOP if len(pts) >= 2 and pts[0] == pts[-1] else SEGMENT
    return PseudoOrbit(x.system, pts, delta, kind)


def repeat(loop: PseudoOrbit, times: int) -> PseudoOrbit:
    """The loop traversed ``times`` times (step counts multiply)."""
    if loop.kind != LOOP:
        raise ValueError("repeat requires a loop")
    if times < 1:
        raise ValueError("times must be a positive integer")
    body = loop.points[:-1]
    pts = body * times + (loop.points[0],)
    return PseudoOrbit(loop.system, pts, loop.delta, LOOP)


def periodic_extension(loop: PseudoOrbit) -> Iterator[SystemPoint]:
    """Generator yielding points[i mod step_count] indefinitely."""
    if loop.kind != LOOP:
        raise ValueError("periodic extension requires a loop")
    n = loop.step_count
    i = 0
    while True:
        yield loop.points[i % n]
        i += 1


def splice_chain(system, a, b, delta) -> Optional[PseudoOrbit]:
    """A delta-chain between two symbolic points.

    Jumps into a periodic splice point whose window copies f(a), rides the
    shift until the window copies the approach to b, and jumps out; both
    jumps cost at most 2^-s <= delta and all other steps are exact.  None
    when the transition graph admits no connecting paths.
    """
    from .systems import SymbolicPoint, SymbolicSystem, dyadic_radius

    if not isinstance(system, SymbolicSystem):
        raise ValueError("splice_chain works on symbolic systems")
    delta = Fraction(delta)
    if delta <= 0:
        img = a.shift(1)
        if img == b:
            return validate([a, b], 0, system)
        return None
    if system.distance(a.shift(1), b) <= delta:
        return validate([a, b], delta, system)
    s = dyadic_radius(delta)
    if s == 0:
        return validate([a, b], delta, system)
    u = a.window(-s + 2, s)          # forced window of f(a), length 2s-1
    v = b.window(-s + 1, s - 1)      # target window of b, length 2s-1
    p1 = system.connecting_path(u[-1], v[0], min_steps=1)
    p2 = system.connecting_path(v[-1], u[0], min_steps=1)
    if p1 is None or p2 is None:
        return None
    period = u + p1[1:-1] + v + p2[1:-1]
    m0 = SymbolicPoint(period, (), -(s - 1))
    if not system.admissible(m0):
        raise AssertionError("splice point must be admissible by construction")
    pos_v = len(u) + len(p1) - 2
    r = pos_v - 1
    pts = [a] + [m0.shift(i) for i in range(r + 1)] + [b]
    return validate(pts, delta, system)


def connect(a: int, b: int, delta, system: NetSystem,
            max_len: int = 10 ** 6) -> Optional[PseudoOrbit]:
    """Shortest delta-chain from a to b on a net system, or None.

    Found by breadth-first search on the delta-transition graph; among
    shortest chains the pointwise lowest-index one is returned.  When
    a == b the chain makes at least one step.
    """
    if not isinstance(system, NetSystem):
        raise ValueError("connect works on net systems")
    delta = Fraction(delta)

    # backward BFS from b: dist_to[q] = fewest steps from q to b
    preds: list[list[int]] = [[] for _ in range(system.n)]
    for p in range(system.n):
        for q in system.successors(p, delta):
            preds[q].append(p)
    INF = -1
    dist_to = [INF] * system.n
    dist_to[b] = 0
    queue = deque([b])
    while queue:
        q = queue.popleft()
        if dist_to[q] >= max_len:
            continue
        for p in preds[q]:
            if dist_to[p] == INF:
                dist_to[p] = dist_to[q] + 1
                queue.append(p)

    if a == b:
        options = [(dist_to[q], q) for q in system.successors(a, delta) if dist_to[q] != INF]
        if not options:
            return None
        steps = min(options)[0] + 1
    else:
        if dist_to[a] == INF:
            return None
        steps = dist_to[a]
    if steps > max_len:
        return None

    path = [a]
    cur = a
    remaining = steps
    while remaining > 0:
        nxt = None
        for q in system.successors(cur, delta):
            if dist_to[q] == remaining - 1:
                nxt = q
                break
        assert nxt is not None
        path.append(nxt)
        cur = nxt
        remaining -= 1
    assert cur == b
    return validate(path, delta, system)
