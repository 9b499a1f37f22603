"""Executable reconstructions of the reference example systems.

* a three-fixed-point circle flow separating positive from two-sided
  shadowing,
* the layered space of isolated periodic circles over an identity base,
  where shadowable points are dense but the base is unshadowable,
* the extension of a minimal subshift by vertex-shift layers, whose
  positively shadowable set collapses onto the base copy.

Everything is truncated to finite nets with exact product metrics; every
claim checked against these objects carries the truncation stamps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .shadow_search import find_shadow
from .shadowing import has_shadowing_at_resolution, is_positively_shadowable_at
from .systems import (
    NetSystem,
    SymbolicPoint,
    SymbolicSystem,
    circle_distance,
    circle_net,
    symbolic_distance,
)
from .words import SubstitutionLanguage, screen_minimality

F = Fraction


# -- circle flow with three fixed points --------------------------------------


def fig1_circle(net_size: int = 360) -> NetSystem:
    """Circle net with fixed points x = 0, y = 1/3, z = 2/3.

    x repels both neighboring arcs, z attracts both, y attracts the arc
    from x and repels the arc toward z.  Non-fixed points move one net step
    per iterate near a fixed point and two steps elsewhere, in the arc
    direction; motion is clamped at attracting fixed points, so the sampled
    map is intentionally not injective there.
    """
    if net_size < 12 or net_size % 3:
        raise ValueError("net size must be a multiple of 3, at least 12")
    x, y, z = 0, net_size // 3, 2 * net_size // 3
    near = max(1, net_size // 60)

    def speed(i: int, ends: tuple) -> int:
        return 1 if min(abs(i - e) for e in ends) <= near else 2

    def step(i: int) -> int:
        if i in (x, y, z):
            return i
        if x < i < y:
            return min(i + speed(i, (x, y)), y)
        if y < i < z:
            return min(i + speed(i, (y, z)), z)
        return max(i - speed(i, (z, net_size)), z)

    return circle_net(net_size, step)


def crossing_pseudo_orbit(net: NetSystem, delta, variant: int = 1) -> list:
    """The two unshadowable two-sided shapes on the circle flow, relabeled
    to forward windows: climb toward the half-fixed point y, hop across it
    with one delta-jump, then fall into the sink z.

    variant 1 starts adjacent to the repeller x (rendering the backward tail
    that sits at x); variant 2 starts deeper in the arc, rendering the shape
    whose origin lies past y with a backward excursion into (x, y)."""
    delta = Fraction(delta)
    size = net.n
    x, y, z = 0, size // 3, 2 * size // 3
    if delta < Fraction(1, size):
        raise ValueError("delta below the net spacing cannot cross y")
    start = x + 1 if variant == 1 else x + size // 12
    pts = [start]
    while pts[-1] != y:
        pts.append(net.step(pts[-1]))
    pts.append(y + 1)  # the delta-jump off the repelling side of y
    while pts[-1] != z:
        pts.append(net.step(pts[-1]))
    return pts


# -- layered circles over an identity base ------------------------------------


@dataclass
class LayeredSpace:
    """A base system with finitely many isolated layers over it, carrying
    the product max-metric and per-layer isolation stamps."""

    net: NetSystem
    base_indices: tuple
    layers: dict                   # layer key -> tuple of net indices
    heights: dict                  # layer key -> Fraction
    gaps: dict                     # layer key -> isolation gap (exact)
    meta: dict = field(default_factory=dict)

    def layer_of(self, index: int):
        for key, members in self.layers.items():
            if index in members:
                return key
        return None


def dense_shadowable_example(levels: int, base_size: int = 120) -> LayeredSpace:
    """Cyclic layers K_n = {1/n} x {i/n} for n <= levels over an identity
    circle at height 0, all rotating with the same orientation."""
    if levels < 2:
        raise ValueError("need at least two layers")
    labels = []
    step_map = []
    base_idx = []
    layers: dict = {}
    heights: dict = {}

    for j in range(base_size):
        base_idx.append(len(labels))
        labels.append((F(0), F(j, base_size)))
    for n in range(1, levels + 1):
        members = []
        for i in range(n):
            members.append(len(labels))
            labels.append((F(1, n), F(i, n)))
        layers[n] = tuple(members)
        heights[n] = F(1, n)

    for idx, (h, theta) in enumerate(labels):
        if h == 0:
            step_map.append(idx)
        else:
            n = h.denominator
            i = int(theta * n)
            step_map.append(layers[n][(i + 1) % n])

    def dist(a: int, b: int) -> Fraction:
        ha, ta = labels[a]
        hb, tb = labels[b]
        return max(abs(ha - hb), circle_distance(ta, tb))

    net = NetSystem(labels, dist, step_map,
                    resolution=F(1, 2 * base_size * levels),
                    invertible=True, metric_check="full")

    gaps = {}
    for n, members in layers.items():
        inside = set(members)
        gap = None
        for p in members:
            row = net.row(p)
            for q in range(net.n):
                if q in inside:
                    continue
                if gap is None or row[q] < gap:
                    gap = row[q]
        gaps[n] = gap
    return LayeredSpace(net, tuple(base_idx), layers, heights, gaps,
                        meta={"base_size": base_size, "levels": levels})


def reverse_base_pseudo_orbit(space: LayeredSpace, step_lower, delta) -> list:
    """A reverse-oriented pseudo-orbit around the identity base circle with
    every step error in [step_lower, delta]."""
    step_lower, delta = Fraction(step_lower), Fraction(delta)
    base = space.base_indices
    size = len(base)
    jump = None
    for k in range(1, size):
        err = F(k, size)
        if step_lower <= err <= delta:
            jump = k
            break
    if jump is None:
        raise ValueError("net too coarse for the requested step band")
    pts = []
    pos = 0
    for _ in range(size // jump + 2):
        pts.append(base[pos % size])
        pos -= jump
    return pts


# -- the extension of a minimal subshift ---------------------------------------


@dataclass
class CylinderPartition:
    """Cells of a subshift at a window depth, with the chain constant
    delta = (min pairwise cell distance) / 4 and the cell transition graph."""

    level: int
    window_radius: int
    cells: tuple                   # words on [-m, m]
    delta: Fraction
    edges: dict                    # word -> tuple of successor words

    @property
    def cell_count(self) -> int:
        return len(self.cells)


def cylinder_partition(lang: SubstitutionLanguage, level: int) -> CylinderPartition:
    """Cells of diameter at most 1/level: central words at the least depth m
    with 2^-m <= 1/level."""
    if level < 1:
        raise ValueError("level must be positive")
    m = 0
    while F(1, 1 << m) > F(1, level):
        m += 1
    width = 2 * m + 1
    cells = tuple(sorted(lang.factors(width)))
    longer = lang.factors(width + 1)
    edges = {}
    for w in cells:
        edges[w] = tuple(sorted(w2 for w2 in cells
                                if w2[:-1] == w[1:] and (w + (w2[-1],)) in longer))
    gap = None
    for i, a in enumerate(cells):
        for b in cells[i + 1:]:
            first = next(j for j in range(m + 1)
                         if a[m + j] != b[m + j] or a[m - j] != b[m - j])
            d = F(1, 1 << first)
            if gap is None or d < gap:
                gap = d
    return CylinderPartition(level, m, cells, gap / 4, edges)


def _simple_cycles(edges: dict) -> list:
    """All simple cycles of the cell graph, as vertex lists."""
    cells = sorted(edges)
    order = {w: i for i, w in enumerate(cells)}
    cycles = []

    def dfs(start, current, path, visited):
        for nxt in edges[current]:
            if nxt == start and len(path) >= 1:
                cycles.append(list(path))
            elif order[nxt] > order[start] and nxt not in visited:
                visited.add(nxt)
                path.append(nxt)
                dfs(start, nxt, path, visited)
                path.pop()
                visited.remove(nxt)

    for start in cells:
        dfs(start, start, [start], {start})
    return cycles


def vertex_shift_points(part: CylinderPartition) -> list:
    """Periodic points of the vertex shift: decoded simple cycles of the
    cell graph together with all their shifts (closed under the shift)."""
    m = part.window_radius
    points = []
    seen = set()
    for cycle in _simple_cycles(part.edges):
        period = tuple(w[m] for w in cycle)
        base = SymbolicPoint(period)
        for t in range(len(period)):
            p = base.shift(t)
            if p not in seen:
                seen.add(p)
                points.append(p)
    return points


_THIRD_WEIGHTS_CACHE: dict = {}


def embed_binary(point: SymbolicPoint, window: int) -> Fraction:
    """Injective rational embedding of the window [-window, window]: base-3
    digits at interleaved positions 0, -1, 1, -2, 2, ...; values lie in
    [0, 1/2]."""
    total = F(0)
    rank = 0
    for j in range(0, window + 1):
        coords = (j,) if j == 0 else (-j, j)
        for c in coords:
            if point.coord(c):
                w = _THIRD_WEIGHTS_CACHE.get(rank)
                if w is None:
                    w = F(1, 3 ** (rank + 1))
                    _THIRD_WEIGHTS_CACHE[rank] = w
                total += w
            rank += 1
    return total


@dataclass
class ExtensionLevel:
    level: int
    partition: CylinderPartition
    shift_points: tuple            # X_n: vertex-shift periodic points
    minimal_cycle: tuple           # M_n: shifts of the minimal periodization
    indices: tuple                 # net indices of the product layer
    height: Fraction
    minimal_scale: Fraction        # embedding scale 1/(2 level)


@dataclass
class ExtensionSpace:
    """Truncated model of the subshift extension: the base copy of the
    input system plus one product layer per level."""

    net: NetSystem
    base_indices: tuple
    base_points: tuple
    levels: dict                   # level -> ExtensionLevel
    screen: object
    meta: dict = field(default_factory=dict)


def extension_builder(lang: SubstitutionLanguage, max_level: int,
                      base_period: int = 34, minimal_period: int = 13) -> ExtensionSpace:
    """Build the layered extension of a minimal subshift, truncated at
    ``max_level`` layers, with the exact product max-metric
    d = max(symbolic distance, embedded minimal coordinate, height gap).

    The input must pass the minimality screen (uniform recurrence plus
    aperiodic complexity at the tested depths).
    """
    if max_level < 1:
        raise ValueError("need at least one level")
    screen = screen_minimality(lang)
    if not screen.passed:
        raise ValueError("input subshift fails the minimality screen")

    base_word = lang.prefix(base_period)
    base_cycle = SymbolicPoint(base_word)
    base_points = tuple(base_cycle.shift(t) for t in range(base_period))
    minimal_word = lang.prefix(minimal_period)
    minimal_cycle = SymbolicPoint(minimal_word)
    minimal_points = tuple(minimal_cycle.shift(t) for t in range(minimal_period))

    labels = []       # (binary point, minimal embedded value, height)
    structure = []    # ("base", t) or ("Z", level, xi, mi)
    base_idx = []
    for t, p in enumerate(base_points):
        base_idx.append(len(labels))
        labels.append((p, F(0), F(0)))
        structure.append(("base", t))

    levels = {}
    for n in range(1, max_level + 1):
        part = cylinder_partition(lang, n)
        xpts = vertex_shift_points(part)
        scale = F(1, n)
        idxs = []
        for xi, xp in enumerate(xpts):
            for mi, mp in enumerate(minimal_points):
                idxs.append(len(labels))
                labels.append((xp, scale * embed_binary(mp, minimal_period), F(1, n)))
                structure.append(("Z", n, xi, mi))
        levels[n] = ExtensionLevel(n, part, tuple(xpts), minimal_points,
                                   tuple(idxs), F(1, n), scale / 2)

    index_of = {}
    for i, (xp, ev, h) in enumerate(labels):
        index_of[(xp, ev, h)] = i

    step_map = []
    for i, tag in enumerate(structure):
        xp, ev, h = labels[i]
        if tag[0] == "base":
            step_map.append(index_of[(xp.shift(1), ev, h)])
        else:
            _, n, xi, mi = tag
            lvl = levels[n]
            nxt_m = lvl.minimal_cycle[(mi + 1) % len(lvl.minimal_cycle)]
            target = (xp.shift(1), F(1, n) * embed_binary(nxt_m, minimal_period), h)
            step_map.append(index_of[target])

    dist_cache: dict = {}

    def dist(a: int, b: int) -> Fraction:
        if a > b:
            a, b = b, a
        key = (a, b)
        v = dist_cache.get(key)
        if v is None:
            xa, ea, ha = labels[a]
            xb, eb, hb = labels[b]
            v = max(symbolic_distance(xa, xb), abs(ea - eb), abs(ha - hb))
            dist_cache[key] = v
        return v

    net = NetSystem(labels, dist, step_map,
                    resolution=F(1, 1 << (base_period + 1)),
                    invertible=True, metric_check="skip")
    report = net.validate_metric(mode="sample")
    if not report.ok:
        raise AssertionError(report.summary())
    net.metric_report = report

    return ExtensionSpace(net, tuple(base_idx), base_points, levels, screen,
                          meta={"base_period": base_period,
                                "minimal_period": minimal_period,
                                "max_level": max_level})


def minimal_layer_net(space: ExtensionSpace, level: int) -> NetSystem:
    """The minimal-coordinate factor of a layer as a standalone net."""
    lvl = space.levels[level]
    pts = lvl.minimal_cycle
    values = [F(1, level) * embed_binary(p, space.meta["minimal_period"])
              for p in pts]
    k = len(pts)

    def dist(i: int, j: int) -> Fraction:
        return abs(values[i] - values[j])

    smallest = min(abs(values[i] - values[j])
                   for i in range(k) for j in range(k) if i != j)
    return NetSystem(list(range(k)), dist, [(i + 1) % k for i in range(k)],
                     resolution=smallest / 2,
                     invertible=True, metric_check="full")


@dataclass
class ExtensionReport:
    base_shadowable: list          # (index, report)
    layer_counterexamples: dict    # level -> (pseudo-orbit points, eps)
    layer_shadowing: dict          # level -> ShadowabilityReport
    stamps: dict

    @property
    def ok(self) -> bool:
        return (all(r.shadowable for _, r in self.base_shadowable)
                and all(v is not None for v in self.layer_counterexamples.values())
                and all(not r.shadowable for r in self.layer_shadowing.values()))


def verify_extension_claims(space: ExtensionSpace,
                            base_epsilon=F(1), base_delta=F(1, 8),
                            base_horizon: int = 4,
                            layer_horizon: int = 12,
                            base_samples: int = 4) -> ExtensionReport:
    """Three checks at the stamped truncation:

    (a) sampled base points pass the positive shadowing test at the stated
        constants (the diameter bound makes epsilon = 1 pass by exhaustion);
    (b) each layer's minimal coordinate admits an explicitly unshadowable
        pseudo-orbit, found by search and lifted to a product pseudo-orbit
        that no point of the whole truncated space shadows;
    (c) no layer subsystem passes the shadowing test at its own scale.
    """
    net = space.net
    base_reports = []
    stride = max(1, len(space.base_indices) // base_samples)
    for idx in space.base_indices[::stride]:
        rep = is_positively_shadowable_at(net, idx, base_epsilon, base_delta,
                                          horizon=base_horizon)
        base_reports.append((idx, rep))

    layer_counterexamples = {}
    layer_shadowing = {}
    stamps_layers = {}
    for n, lvl in space.levels.items():
        mnet = minimal_layer_net(space, n)
        found = None
        base_delta_b = _branching_delta(mnet)
        delta_b = eps_b = rep = None
        for i in range(5):
            delta_b = base_delta_b * (1 << i)
            eps_b = 4 * delta_b
            rep = has_shadowing_at_resolution(mnet, delta_b, eps_b,
                                              horizon=layer_horizon)
            if not rep.shadowable:
                break
        stamps_layers[n] = (delta_b, eps_b)
        if not rep.shadowable:
            lifted = _lift_counterexample(space, n, rep.counterexample.points)
            if find_shadow(net, lifted, eps_b) is None:
                found = (tuple(lifted), eps_b)
        layer_counterexamples[n] = found
        layer_shadowing[n] = has_shadowing_at_resolution(
            net, delta_b, eps_b, horizon=layer_horizon,
            allowed_nodes=frozenset(lvl.indices), two_sided=False)
    return ExtensionReport(base_reports, layer_counterexamples, layer_shadowing,
                           stamps={"base": (base_epsilon, base_delta, base_horizon),
                                   "layer_horizon": layer_horizon,
                                   "layer_constants": stamps_layers})


def _branching_delta(mnet: NetSystem) -> Fraction:
    """Smallest delta opening a second successor somewhere in the net."""
    best = None
    for i in range(mnet.n):
        fi = mnet.step(i)
        row = mnet.row(fi)
        for q in range(mnet.n):
            if q == fi:
                continue
            if best is None or row[q] < best:
                best = row[q]
    return best


def _lift_counterexample(space: ExtensionSpace, level: int,
                         minimal_indices: Sequence[int]) -> list:
    """Pair a minimal-coordinate pseudo-orbit with a true vertex-shift orbit
    at the layer height; the product steps keep the same error bound."""
    lvl = space.levels[level]
    per_x = len(lvl.minimal_cycle)
    xindex = {p: i for i, p in enumerate(lvl.shift_points)}
    xcur = lvl.shift_points[0]
    lifted = []
    for mi in minimal_indices:
        lifted.append(lvl.indices[xindex[xcur] * per_x + mi])
        xcur = xcur.shift(1)
    return lifted
