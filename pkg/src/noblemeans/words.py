"""Two-letter alphabet plumbing: words, probability vectors, inflation constants."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LETTER_A = "a"
LETTER_B = "b"
_ORD_A = ord(LETTER_A)

PROB_SUM_TOL = 1e-12


def multiplier(m: int) -> float:
    """Inflation multiplier of the family with parameter m (the larger root of x^2 = m*x + 1)."""
    _check_m(m)
    return 0.5 * (m + math.sqrt(m * m + 4))


def conjugate_multiplier(m: int) -> float:
    """Algebraic conjugate of the multiplier; lies in (-1, 0)."""
    _check_m(m)
    return 0.5 * (m - math.sqrt(m * m + 4))


@dataclass(frozen=True)
class NobleMeansFamily:
    """Parameter m together with its inflation constants."""

    m: int

    def __post_init__(self):
        _check_m(self.m)

    @property
    def multiplier(self) -> float:
        return multiplier(self.m)

    @property
    def conjugate(self) -> float:
        return conjugate_multiplier(self.m)

    @property
    def root(self) -> float:
        """sqrt(m^2 + 4) = multiplier - conjugate."""
        return math.sqrt(self.m * self.m + 4)


def _check_m(m) -> None:
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"family parameter m must be a positive integer, got {m!r}")


def word_to_codes(word: str) -> np.ndarray:
    """Encode a word over {a, b} as a uint8 array with a=0, b=1."""
    codes = np.frombuffer(word.encode("ascii"), dtype=np.uint8) - _ORD_A
    if codes.size and codes.max() > 1:
        raise ValueError(f"word contains letters outside {{a, b}}: {word!r}")
    return codes


def codes_to_word(codes: np.ndarray) -> str:
    return (np.asarray(codes, dtype=np.uint8) + _ORD_A).tobytes().decode("ascii")


def subword(word: str, i: int, j: int) -> str:
    """The inclusive subword word[i..j]; requires 0 <= i <= j < len(word)."""
    if not (0 <= i <= j < len(word)):
        raise ValueError(f"subword bounds ({i}, {j}) invalid for length {len(word)}")
    return word[i : j + 1]


def check_probabilities(probs, m: int | None = None, strict: bool = False) -> np.ndarray:
    """Validate a probability vector (p_0, ..., p_m); returns it as a float array.

    With strict=True every entry must be positive, as required by the entropy
    and frequency computations.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("probability vector must be a non-empty 1-D sequence")
    if m is not None and p.size != m + 1:
        raise ValueError(f"expected m + 1 = {m + 1} probabilities, got {p.size}")
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities must sum to 1 (got {p.sum()!r})")
    if strict and np.any(p <= 0):
        raise ValueError("this operation requires strictly positive probabilities")
    return p


def make_rng(seed) -> np.random.Generator:
    """Seeded generator; identical seeds and call sequences reproduce outputs bit-for-bit."""
    return np.random.Generator(np.random.PCG64(seed))
