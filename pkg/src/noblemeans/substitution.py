"""Deterministic and random noble means rules, legality of finite words.

The deterministic family maps a -> a^i b a^(m-i) (one rule per 0 <= i <= m)
and b -> a. The random rule picks i independently at each occurrence of a,
with probability p_i, so a realization is a pure function of (seed, word).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .errors import ResourceLimitError
from .words import check_probabilities, codes_to_word, word_to_codes

DEFAULT_CLOSURE_CAP = 2_000_000


def letter_images(m: int) -> list[str]:
    """The m + 1 images of the letter a, indexed by i."""
    return ["a" * i + "b" + "a" * (m - i) for i in range(m + 1)]


def deterministic_substitute(m: int, i: int, word: str) -> str:
    """Apply the i-th member of the family to every letter of `word`."""
    if not 0 <= i <= m:
        raise ValueError(f"rule index i must lie in [0, {m}], got {i}")
    table = str.maketrans({"a": letter_images(m)[i], "b": "a"})
    word_to_codes(word)  # validates the alphabet
    return word.translate(table)


def random_substitute(m: int, probs, word: str, rng: np.random.Generator) -> str:
    """Apply the random rule once, drawing one image index per a, left to right."""
    p = check_probabilities(probs, m)
    codes = word_to_codes(word)
    n_a = int((codes == 0).sum())
    choices = rng.choice(m + 1, size=n_a, p=p).astype(np.uint8)
    return codes_to_word(_kernels.substitute(codes, m, choices))


def iterate_random(m: int, probs, word: str, k: int, rng: np.random.Generator) -> str:
    """k-fold application of the random rule; k = 0 returns the word unchanged."""
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    p = check_probabilities(probs, m)
    codes = word_to_codes(word)
    for _ in range(k):
        n_a = int((codes == 0).sum())
        choices = rng.choice(m + 1, size=n_a, p=p).astype(np.uint8)
        codes = _kernels.substitute(codes, m, choices)
    return codes_to_word(codes)


def substitution_matrix(m: int) -> np.ndarray:
    """Letter-count matrix [[m, 1], [1, 0]] in row/column order (a, b)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return np.array([[m, 1], [1, 0]], dtype=np.int64)


def abelianization(word: str) -> tuple[int, int]:
    """Letter counts (number of a's, number of b's)."""
    codes = word_to_codes(word)
    n_b = int(codes.sum())
    return codes.size - n_b, n_b


def _word_length_after(m: int, k: int) -> int:
    """Length of the k-fold image of a (deterministic: every rule shares letter counts)."""
    n_a, n_b = 1, 0
    for _ in range(k):
        n_a, n_b = m * n_a + n_b, n_a
    return n_a + n_b


def _realizations(word: str, images: dict[str, list[str]]):
    for combo in product(*[images[c] for c in word]):
        yield "".join(combo)


def _window_closure_step(words, images, length: int) -> set[str]:
    """All length-`length` windows of all realizations of the one-step image of each word.

    Runs a suffix DP per word instead of enumerating the full realization
    product: the set of trailing (length-1)-fragments of partial realizations
    determines every window that ends inside the next letter image.
    """
    keep = length - 1
    out: set[str] = set()
    for u in words:
        states = {""}
        for c in u:
            next_states = set()
            for s in states:
                for img in images[c]:
                    t = s + img
                    for j in range(len(t) - length + 1):
                        out.add(t[j : j + length])
                    next_states.add(t[max(0, len(t) - keep) :])
            states = next_states
    return out


@lru_cache(maxsize=None)
def _legal_word_set(m: int, length: int, cap: int) -> frozenset[str]:
    images = {"a": letter_images(m), "b": ["a"]}
    # grow full realization sets of the k-fold images of a until words reach `length`
    level, k = {"a"}, 0
    while len(next(iter(level))) < length:
        expansions = sum((m + 1) ** sum(1 for c in w if c == "a") for w in level)
        if expansions > cap:
            raise ResourceLimitError(
                f"legal-word closure for length {length} needs {expansions} seed"
                f" realizations (cap {cap})"
            )
        level = {r for w in level for r in _realizations(w, images)}
        k += 1
    windows = {w[j : j + length] for w in level for j in range(len(w) - length + 1)}
    # iterate the window map to its fixed point; the extra length condition
    # guards against stabilization before long-range windows can appear
    while True:
        nxt = _window_closure_step(windows, images, length)
        k += 1
        if nxt == windows and _word_length_after(m, k) >= 2 * length:
            return frozenset(windows)
        windows |= nxt


def legal_words(m: int, length: int, cap: int = DEFAULT_CLOSURE_CAP) -> list[str]:
    """All legal words of the given length, in lexicographic order (a < b)."""
    if length < 1:
        raise ValueError(f"word length must be >= 1, got {length}")
    return sorted(_legal_word_set(m, length, cap))


def is_legal(m: int, word: str, cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """Whether `word` occurs as a subword of some realization of an iterated image of a."""
    word_to_codes(word)
    if len(word) == 0:
        return True
    return word in _legal_word_set(m, len(word), cap)
