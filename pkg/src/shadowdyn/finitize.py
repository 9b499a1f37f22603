"""Cylinder finitizations: a symbolic system sampled at a fixed window depth
becomes a net system whose points are periodic representatives of the
admissible central words.  Every claim computed on the net carries the depth
it was verified at.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .systems import BudgetExceeded, NetSystem, SymbolicPoint, SymbolicSystem


class CylinderNet(NetSystem):
    """Net of one periodic representative per admissible word on the window
    [-depth, depth].  Distances between distinct representatives are the
    exact symbolic distances, which are determined by the words alone."""

    def __init__(self, system: SymbolicSystem, depth: int, max_points: int = 20000):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.base = system
        self.depth = depth
        width = 2 * depth + 1
        if system.count_words(width) > max_points:
            raise BudgetExceeded(
                f"{system.count_words(width)} cylinder words at depth {depth} "
                f"exceed the budget of {max_points}")
        words = []
        reps = []
        for w in system.words(width):
            rep = system.periodic_closure(w, anchor=-depth)
            if rep is None:
                continue  # word admits no representable closure (reducible SFT)
            words.append(w)
            reps.append(rep)
        self.words_ = tuple(words)
        self.reps = tuple(reps)
        self.word_index = {w: i for i, w in enumerate(words)}

        step_map = []
        for i, w in enumerate(words):
            nxt = w[1:] + (reps[i].coord(depth + 1),)
            step_map.append(self.word_index[nxt])

        def dist(i: int, j: int) -> Fraction:
            if i == j:
                return Fraction(0)
            wi, wj = words[i], words[j]
            for a in range(depth + 1):
                if wi[depth + a] != wj[depth + a] or wi[depth - a] != wj[depth - a]:
                    return Fraction(1, 1 << a)
            raise AssertionError("distinct words must disagree inside the window")

        super().__init__(words, dist, step_map,
                         resolution=Fraction(1, 1 << (depth + 1)),
                         invertible=False, metric_check="skip")
        # the ultrametric identity makes the full triangle check redundant,
        # but run it anyway on small nets
        if self.n <= 512:
            rep = self.validate_metric()
            if not rep.ok:
                raise AssertionError(rep.summary())
            self.metric_report = rep

    def index_of(self, p: SymbolicPoint) -> int:
        """Net point whose cylinder contains p (same central window)."""
        w = p.window(-self.depth, self.depth)
        idx = self.word_index.get(w)
        if idx is None:
            raise ValueError("point's central word is not represented in this net")
        return idx

    def nearest(self, p: SymbolicPoint) -> SymbolicPoint:
        return self.reps[self.index_of(p)]
