"""Exact geometric realization of words and the cut-and-project window.

Letters become intervals: a has length equal to the inflation multiplier, b
has length one. Left interval endpoints are the point set, kept as exact
integer pairs (u, v) representing u + v * multiplier. Conjugating the
multiplier in place of the multiplier maps a point to internal space (its
star image); realized legal words stay inside the closed window
[conjugate - 1, 1 - conjugate].
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .words import conjugate_multiplier, multiplier, word_to_codes

_INT_GUARD = 1 << 62


@dataclass(frozen=True)
class QuadraticInteger:
    """Exact element u + v * multiplier of the degree-two integer ring for parameter m."""

    u: int
    v: int
    m: int = 1

    def _check(self, other: "QuadraticInteger") -> None:
        if not isinstance(other, QuadraticInteger):
            raise TypeError(f"expected QuadraticInteger, got {type(other).__name__}")
        if other.m != self.m:
            raise ValueError(f"mixed ring parameters {self.m} and {other.m}")

    def __add__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check(other)
        return QuadraticInteger(self.u + other.u, self.v + other.v, self.m)

    def __sub__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check(other)
        return QuadraticInteger(self.u - other.u, self.v - other.v, self.m)

    def __neg__(self) -> "QuadraticInteger":
        return QuadraticInteger(-self.u, -self.v, self.m)

    def __mul__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        # multiplier^2 = m * multiplier + 1
        self._check(other)
        return QuadraticInteger(
            self.u * other.u + self.v * other.v,
            self.u * other.v + other.u * self.v + self.m * self.v * other.v,
            self.m,
        )

    @property
    def value(self) -> float:
        return self.u + self.v * multiplier(self.m)

    @property
    def star(self) -> float:
        return self.u + self.v * conjugate_multiplier(self.m)


def star_map(x: QuadraticInteger) -> float:
    """Internal-space image of x (conjugation of the multiplier)."""
    return x.star


@dataclass(frozen=True, eq=False)
class PointSet:
    """Left interval endpoints of a realized word, plus its total physical length."""

    us: np.ndarray
    vs: np.ndarray
    m: int
    total_length: QuadraticInteger
    anchor: QuadraticInteger = field(default=None)

    def __len__(self) -> int:
        return int(self.us.shape[0])

    def point(self, i: int) -> QuadraticInteger:
        return QuadraticInteger(int(self.us[i]), int(self.vs[i]), self.m)

    def positions(self) -> np.ndarray:
        return self.us + self.vs * multiplier(self.m)

    def star_positions(self) -> np.ndarray:
        return self.us + self.vs * conjugate_multiplier(self.m)

    def to_csv(self, path) -> None:
        lam = multiplier(self.m)
        lam_c = conjugate_multiplier(self.m)
        with open(path, "w", encoding="ascii") as fh:
            fh.write("u,v,real_value,star_value\n")
            for u, v in zip(self.us, self.vs):
                fh.write(f"{u},{v},{u + v * lam:.17g},{u + v * lam_c:.17g}\n")


def realize(word: str, m: int, anchor: QuadraticInteger | None = None) -> PointSet:
    """Point set of `word`: point j sits at anchor plus the lengths of letters before j."""
    if anchor is None:
        anchor = QuadraticInteger(0, 0, m)
    elif anchor.m != m:
        raise ValueError(f"anchor ring parameter {anchor.m} does not match m={m}")
    codes = word_to_codes(word)
    if codes.size >= _INT_GUARD // 4:
        raise OverflowError("word too long for 64-bit coordinates")
    b_steps = codes.astype(np.int64)
    a_steps = np.int64(1) - b_steps
    us = anchor.u + np.cumsum(b_steps) - b_steps
    vs = anchor.v + np.cumsum(a_steps) - a_steps
    n_b = int(b_steps.sum())
    total = QuadraticInteger(n_b, codes.size - n_b, m)
    return PointSet(us, vs, m, total, anchor)


def window_bounds(m: int) -> tuple[float, float]:
    """Closed internal-space interval [conjugate - 1, 1 - conjugate]."""
    c = conjugate_multiplier(m)
    return c - 1.0, 1.0 - c


def window_check(points: PointSet, tol: float = 1e-9) -> list[tuple[int, float]]:
    """Indices and star values of points outside the closed window (boundary tolerance tol)."""
    lo, hi = window_bounds(points.m)
    star = points.star_positions()
    outside = np.nonzero((star < lo - tol) | (star > hi + tol))[0]
    return [(int(i), float(star[i])) for i in outside]


def empirical_density(points: PointSet) -> float:
    """Points per unit length over the span between the first and last point."""
    if len(points) < 2:
        raise ValueError("density needs at least two points")
    positions = points.positions()
    return (len(points) - 1) / float(positions[-1] - positions[0])


def autocorrelation_coefficients(
    points: PointSet, max_distance: float, include_negative: bool = False
) -> dict[QuadraticInteger, float]:
    """Pair-count coefficients per exact difference with real value in [0, max_distance].

    The coefficient of a difference z is the number of ordered point pairs at
    difference z divided by the span; z = 0 is assigned the point density so
    that it agrees with empirical_density.
    """
    if max_distance <= 0:
        raise ValueError(f"max_distance must be positive, got {max_distance}")
    positions = points.positions()
    span = float(positions[-1] - positions[0])
    counts: Counter = Counter()
    hi = 0
    n = len(points)
    for i in range(n):
        if hi < i + 1:
            hi = i + 1
        while hi < n and positions[hi] - positions[i] <= max_distance:
            hi += 1
        for j in range(i + 1, hi):
            counts[(int(points.us[j] - points.us[i]), int(points.vs[j] - points.vs[i]))] += 1
    result = {QuadraticInteger(0, 0, points.m): empirical_density(points)}
    for (du, dv), count in counts.items():
        result[QuadraticInteger(du, dv, points.m)] = count / span
        if include_negative:
            result[QuadraticInteger(-du, -dv, points.m)] = count / span
    return result
