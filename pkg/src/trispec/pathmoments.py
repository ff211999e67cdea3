"""Bridge-path enumeration and the combinatorial limit-moment formulas.

Even spectral moments of the limiting law are weighted counts of one-step
bridges (walks on Z with +-1 steps returning to 0): each bridge
contributes the product, over every half-integer level it traverses, of
the entry moment of order equal to the crossing count at that level.
Moment inputs are plain accessors ``k -> m_k`` so the engine serves
closed-form laws, Fractions for exact identities, and empirical moment
sequences alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

__all__ = [
    "ENUMERATION_GUARD",
    "LatticePath",
    "CrossingProfile",
    "ColoredWord",
    "enumerate_bridges",
    "crossing_profile",
    "limit_moment",
    "mixture_moment",
    "joint_moment",
    "word_from_letters",
]

# C(24, 12) ~ 2.7e6 bridges; beyond this exact enumeration stops being sane
ENUMERATION_GUARD = 24

MomentFn = Callable[[int], float]


@dataclass(frozen=True)
class LatticePath:
    """A +-1 step sequence returning to its start (bridge condition)."""

    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.steps):
            raise ValueError("steps must be +-1")
        if sum(self.steps) != 0:
            raise ValueError("path must return to 0")

    @property
    def positions(self) -> tuple[int, ...]:
        pos = [0]
        for s in self.steps:
            pos.append(pos[-1] + s)
        return tuple(pos)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class CrossingProfile:
    """Per-level crossing counts of a bridge, keyed by half-integer level."""

    counts: dict

    def __post_init__(self):
        for level, c in self.counts.items():
            if c <= 0 or c % 2:
                raise ValueError(f"crossing count at level {level} must be even > 0")

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class ColoredWord:
    """Color index per step, identifying which model contributed it."""

    colors: tuple[int, ...]

    def __post_init__(self):
        if any(c < 1 for c in self.colors):
            raise ValueError("colors are 1-based indices")

    @property
    def n_colors(self) -> int:
        return max(self.colors) if self.colors else 0

    def __len__(self):
        return len(self.colors)


def word_from_letters(text: str) -> ColoredWord:
    """Map letters to colors by order of first appearance (XYXY -> 1212)."""
    seen: dict[str, int] = {}
    colors = []
    for ch in text.strip().upper():
        if ch not in seen:
            seen[ch] = len(seen) + 1
        colors.append(seen[ch])
    return ColoredWord(tuple(colors))


def _check_guard(k: int) -> None:
    if k > ENUMERATION_GUARD:
        raise ValueError(f"path length {k} exceeds enumeration guard {ENUMERATION_GUARD}")


def enumerate_bridges(k: int) -> list[LatticePath]:
    """All C(k, k/2) bridges of length k (empty for odd k), in the
    deterministic order induced by the up-step position sets."""
    if k < 0:
        raise ValueError("length must be >= 0")
    _check_guard(k)
    if k % 2:
        return []
    out = []
    for ups in combinations(range(k), k // 2):
        steps = [-1] * k
        for i in ups:
            steps[i] = 1
        out.append(LatticePath(tuple(steps)))
    return out


def crossing_profile(path: LatticePath) -> CrossingProfile:
    """Count, per half-integer level, the steps whose endpoints straddle it."""
    counts: dict[float, int] = {}
    h = 0
    for s in path.steps:
        level = h + 0.5 if s == 1 else h - 0.5
        counts[level] = counts.get(level, 0) + 1
        h += s
    return CrossingProfile(counts)


def limit_moment(k: int, m: MomentFn, alpha=0):
    """k-th limiting spectral moment of the power-scaled model.

    0 for odd k; for even k, (1/(alpha*k + 1)) times the sum over bridges
    of the product over traversed levels of m(crossing count).  Passing
    Fraction-valued ``m`` and ``alpha`` keeps the result exact.
    """
    if k % 2:
        return 0
    total = 0
    for path in enumerate_bridges(k):
        term = 1
        for c in crossing_profile(path).counts.values():
            term = term * m(c)
        total = total + term
    return total / (alpha * k + 1)


def mixture_moment(k: int, m_x: MomentFn, m_t: MomentFn):
    """Moment of the scale mixture: even moments factorize, odd vanish."""
    if k % 2:
        return 0
    return m_x(k) * m_t(k)


def joint_moment(word: ColoredWord, per_color_moments: Sequence[MomentFn]):
    """Limiting normalized trace of the word's matrix product.

    Sums over all step-sign assignments forming a bridge; each bridge
    weighs in the product over (level, color) pairs of the color's entry
    moment at that pair's crossing count.  Odd per-color counts invoke
    odd moments, so centered laws kill words with unpaired colors.
    """
    k = len(word)
    _check_guard(k)
    if len(per_color_moments) < word.n_colors:
        raise ValueError("need one moment accessor per color")
    if k == 0:
        return 1
    total = 0
    for path in enumerate_bridges(k):
        counts: dict[tuple[float, int], int] = {}
        h = 0
        for s, color in zip(path.steps, word.colors):
            level = h + 0.5 if s == 1 else h - 0.5
            key = (level, color)
            counts[key] = counts.get(key, 0) + 1
            h += s
        term = 1
        for (_, color), c in counts.items():
            term = term * per_color_moments[color - 1](c)
        total = total + term
    return total
