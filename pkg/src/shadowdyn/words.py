"""Substitution languages: factor sets of the fixed point of a primitive
substitution, with the screens other modules need (aperiodicity via factor
complexity, minimality via uniform recurrence at tested depths).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


class SubstitutionLanguage:
    """Factors of the one-sided fixed point of a substitution.

    The rules must be prolongable on the seed symbol (rules[seed] starts
    with seed), which makes the iteration converge to a fixed point.
    """

    def __init__(self, rules: dict, seed: int = 0):
        self.rules = {a: tuple(img) for a, img in rules.items()}
        self.seed = seed
        if not self.rules[seed] or self.rules[seed][0] != seed:
            raise ValueError("substitution must be prolongable on the seed")
        self._prefix: tuple = (seed,)
        self._factor_cache: dict[int, frozenset] = {}

    @classmethod
    def fibonacci(cls) -> "SubstitutionLanguage":
        """0 -> 01, 1 -> 0."""
        return cls({0: (0, 1), 1: (0,)})

    def substitute(self, word: Sequence[int]) -> tuple:
        out: list[int] = []
        for s in word:
            out.extend(self.rules[s])
        return tuple(out)

    def prefix(self, length: int) -> tuple:
        while len(self._prefix) < length:
            self._prefix = self.substitute(self._prefix)
        return self._prefix[:length]

    def factors(self, length: int) -> frozenset:
        """All length-``length`` factors (stable under prefix growth)."""
        if length == 0:
            return frozenset({()})
        cached = self._factor_cache.get(length)
        if cached is not None:
            return cached
        span = max(64, 16 * length)
        found = self._scan(length, span)
        while True:
            span *= 2
            again = self._scan(length, span)
            if again == found:
                break
            found = again
        self._factor_cache[length] = found
        return found

    def _scan(self, length: int, span: int) -> frozenset:
        text = self.prefix(span)
        return frozenset(text[i:i + length] for i in range(len(text) - length + 1))

    def complexity(self, length: int) -> int:
        return len(self.factors(length))

    def is_factor(self, word: Sequence[int]) -> bool:
        word = tuple(word)
        return word in self.factors(len(word))

    def alphabet(self) -> tuple:
        return tuple(sorted(self.rules))

    def right_extensions(self, word: Sequence[int]) -> tuple:
        word = tuple(word)
        longer = self.factors(len(word) + 1)
        return tuple(sorted({w[-1] for w in longer if w[:-1] == word}))

    def left_extensions(self, word: Sequence[int]) -> tuple:
        word = tuple(word)
        longer = self.factors(len(word) + 1)
        return tuple(sorted({w[0] for w in longer if w[1:] == word}))


@dataclass
class MinimalityScreen:
    lengths: tuple
    recurrence_windows: dict      # factor length -> R with every R-factor containing all
    aperiodic: bool
    passed: bool


def screen_minimality(lang: SubstitutionLanguage, lengths: Sequence[int] = (1, 2, 3, 5),
                      window_cap: int = 4096) -> MinimalityScreen:
    """Uniform recurrence at the tested depths: for each tested factor
    length, some window size R makes every length-R factor contain every
    factor of the tested length.  Aperiodicity is the complexity bound
    p(len) >= len + 1 at the tested depths."""
    windows = {}
    ok = True
    for ell in lengths:
        needed = lang.factors(ell)
        r = 2 * ell
        found = None
        while r <= window_cap:
            if all(_contains_all(u, needed, ell) for u in lang.factors(r)):
                found = r
                break
            r *= 2
        if found is None:
            ok = False
            break
        windows[ell] = found
    aperiodic = all(lang.complexity(ell) >= ell + 1 for ell in lengths)
    return MinimalityScreen(tuple(lengths), windows, aperiodic, ok and aperiodic)


def _contains_all(window: tuple, needed: frozenset, ell: int) -> bool:
    present = {window[i:i + ell] for i in range(len(window) - ell + 1)}
    return needed <= present
