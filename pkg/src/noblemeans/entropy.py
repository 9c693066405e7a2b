"""Generation sets, their growth rate, and subword complexity.

Level n holds every exact realization of the (n-1)-fold image of b; level
sets satisfy the concatenation recursion with one lower-level factor inserted
at each of the m + 1 slots. Their cardinalities grow like exp(h * length), so
levels are built once per (m, n) as deduplicated fixed-width byte arrays and
cached, with a configurable cap on stored letters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .substitution import legal_words
from .words import codes_to_word, conjugate_multiplier, multiplier

DEFAULT_LETTER_CAP = 10**8
_CHUNK_ROWS = 1 << 19

# per-m list of levels; level arrays are sorted unique void keys over uint8 rows
_level_cache: dict[int, dict[int, np.ndarray]] = {}


def generation_lengths(m: int, n_max: int) -> list[int]:
    """Word lengths per level: 0, 1, 1, then length(n+1) = m*length(n) + length(n-1)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    lengths = [0, 1, 1]
    for n in range(2, n_max):
        lengths.append(m * lengths[n] + lengths[n - 1])
    return lengths[: n_max + 1]


def _as_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    return rows.view(np.dtype((np.void, rows.shape[1]))).ravel()


def _as_rows(keys: np.ndarray, width: int) -> np.ndarray:
    return keys.view(np.uint8).reshape(-1, width)


def _cached_letters(levels: dict[int, np.ndarray], lengths: list[int]) -> int:
    return sum(arr.shape[0] * lengths[n] for n, arr in levels.items())


def _build_level(m: int, n: int, levels: dict[int, np.ndarray], lengths, max_letters: int):
    """Materialize level n from levels n-1 and n-2, deduplicating in chunks."""
    width = lengths[n]
    budget = max_letters - _cached_letters(levels, lengths)
    prev = _as_rows(levels[n - 1], lengths[n - 1])
    prev2 = _as_rows(levels[n - 2], lengths[n - 2])
    # the union can only be larger than either operand of the concatenation
    if max(prev.shape[0], prev2.shape[0]) * width > budget:
        raise ResourceLimitError(
            f"level {n} for m={m} needs more than the configured cap of"
            f" {max_letters} stored letters; largest feasible level is {n - 1}",
            largest_feasible=n - 1,
        )
    acc = np.empty(0, dtype=np.dtype((np.void, width)))
    for i in range(m + 1):
        factors = [prev2 if j == i else prev for j in range(m + 1)]
        counts = [f.shape[0] for f in factors]
        total = math.prod(counts)
        for lo in range(0, total, _CHUNK_ROWS):
            flat = np.arange(lo, min(lo + _CHUNK_ROWS, total))
            digits = np.unravel_index(flat, counts)
            block = np.concatenate(
                [factors[j][digits[j]] for j in range(m + 1)], axis=1
            )
            acc = np.union1d(acc, _as_keys(block))
            if acc.shape[0] * width > budget:
                raise ResourceLimitError(
                    f"level {n} for m={m} exceeded the configured cap of"
                    f" {max_letters} stored letters; largest feasible level is {n - 1}",
                    largest_feasible=n - 1,
                )
    levels[n] = acc


def _levels_up_to(m: int, n: int, max_letters: int) -> dict[int, np.ndarray]:
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    lengths = generation_lengths(m, max(n, 2))
    levels = _level_cache.setdefault(m, {})
    if 1 not in levels:
        levels[1] = _as_keys(np.array([[1]], dtype=np.uint8))  # the single word b
        levels[2] = _as_keys(np.array([[0]], dtype=np.uint8))  # the single word a
    for lev in range(3, n + 1):
        if lev not in levels:
            _build_level(m, lev, levels, lengths, max_letters)
    return levels


def clear_generation_cache() -> None:
    _level_cache.clear()


@dataclass(frozen=True)
class GenerationSet:
    level: int
    word_length: int
    words: frozenset[str]


def generation_set(m: int, n: int, max_letters: int = DEFAULT_LETTER_CAP) -> GenerationSet:
    """The exact set of realizations at level n (level 1 is {b}, level 2 is {a})."""
    lengths = generation_lengths(m, max(n, 2))
    if n == 0:
        return GenerationSet(0, 0, frozenset())
    levels = _levels_up_to(m, n, max_letters)
    width = lengths[n]
    words = frozenset(codes_to_word(r) for r in _as_rows(levels[n], width))
    return GenerationSet(n, width, words)


def _union_count_one_ahead(n: int, levels, lengths) -> int:
    """Exact |level n| from the materialized levels n-1 and n-2 (m = 1 only).

    Both concatenation orders have size |P|*|Q|; their intersection consists of
    words that split both ways, which pairs a suffix map against a prefix map
    of the longer factor. Counted without materializing level n.
    """
    P = _as_rows(levels[n - 1], lengths[n - 1])
    q_keys = np.sort(levels[n - 2])
    L2 = lengths[n - 2]
    Ls = lengths[n - 1] - L2  # = lengths[n - 3]
    prefix_in_q = np.isin(_as_keys(P[:, :L2]), q_keys)
    a_keys, a_counts = np.unique(_as_keys(P[:, L2:])[prefix_in_q], return_counts=True)
    suffix_in_q = np.isin(_as_keys(P[:, Ls:]), q_keys)
    b_keys, b_counts = np.unique(_as_keys(P[:, :Ls])[suffix_in_q], return_counts=True)
    common, ia, ib = np.intersect1d(a_keys, b_keys, assume_unique=True, return_indices=True)
    overlap = int(np.sum(a_counts[ia] * b_counts[ib], dtype=np.int64))
    return 2 * P.shape[0] * q_keys.shape[0] - overlap


def generation_count(m: int, n: int, max_letters: int = DEFAULT_LETTER_CAP) -> int:
    """|level n|, materializing it when feasible, else counting one level ahead (m = 1)."""
    if n == 0:
        return 0
    try:
        levels = _levels_up_to(m, n, max_letters)
        return int(levels[n].shape[0])
    except ResourceLimitError:
        if m != 1 or n < 5:
            raise
        lengths = generation_lengths(m, n)
        levels = _levels_up_to(m, n - 1, max_letters)
        return _union_count_one_ahead(n, levels, lengths)


def empirical_entropy(m: int, n: int, max_letters: int = DEFAULT_LETTER_CAP) -> float:
    """log |level n| per letter (natural logarithm); defined for n >= 3."""
    if n < 3:
        raise ValueError(f"empirical entropy needs n >= 3, got {n}")
    count = generation_count(m, n, max_letters)
    return math.log(count) / generation_lengths(m, n)[n]


@dataclass(frozen=True)
class EntropyResult:
    value: float
    terms_used: int
    tail_bound: float


def entropy_series(m: int, tol: float = 1e-9) -> EntropyResult:
    """Topological entropy in nats per letter via the series

        prefactor * sum_{i >= 2} log(m*(i-1) + 1) / multiplier^i,

    with prefactor (multiplier - 1) / (1 - conjugate). Terms are added until a
    closed-form tail bound (log x <= sqrt(x), then a geometric majorant)
    drops below `tol`.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    lam = multiplier(m)
    prefactor = (lam - 1.0) / (1.0 - conjugate_multiplier(m))
    r = 1.0 / lam
    total = 0.0
    i = 2
    while True:
        total += math.log(m * (i - 1) + 1) * r**i
        nxt = i + 1
        # sum_{j > i} sqrt(m*j) r^j <= sqrt(m/nxt) * sum_{j > i} j r^j, closed form
        tail = (
            prefactor
            * math.sqrt(m / nxt)
            * r**nxt
            * (nxt * (1.0 - r) + r)
            / (1.0 - r) ** 2
        )
        if tail < tol:
            return EntropyResult(prefactor * total, i - 1, tail)
        i = nxt


def complexity_formula(m: int, length: int) -> int:
    """Closed-form legal-word count, valid only for m + 3 <= length <= 2m + 2."""
    if not (m + 3 <= length <= 2 * m + 2):
        raise ValueError(
            f"closed form is only valid for {m + 3} <= length <= {2 * m + 2}, got {length}"
        )
    binom = 1 + length + length * (length - 1) // 2 + length * (length - 1) * (length - 2) // 6
    correction = m * (m + 1) * (3 * length - 2 * m - 4)
    return binom - correction // 6


def complexity_exact(m: int, length: int) -> int:
    """Legal-word count by exhaustive closure."""
    return len(legal_words(m, length))
