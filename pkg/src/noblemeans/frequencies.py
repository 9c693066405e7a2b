"""Sliding-window lift of the random rule, its matrix, and subword frequencies.

Lifting the rule to the alphabet of legal length-ell words sends a word w to
the sequence of ell-windows of a realization of its image, one window per
letter of the image of w's first letter. The matrix of expected window counts
is primitive; its dominant right eigenvector, normalized to total mass one,
lists the asymptotic frequencies of the legal ell-words (equivalently, the
cylinder measures).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .errors import NumericError, ResourceLimitError
from .substitution import iterate_random, legal_words, letter_images
from .words import check_probabilities, make_rng, multiplier, word_to_codes

REALIZATION_CAP = 1_000_000
PF_EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class InducedSubstitution:
    m: int
    ell: int
    probs: tuple[float, ...]
    # source word -> tuple of (window sequence, probability) over realizations
    rules: dict[str, tuple[tuple[tuple[str, ...], float], ...]]


@dataclass(frozen=True)
class InducedMatrix:
    m: int
    ell: int
    words: tuple[str, ...]
    matrix: np.ndarray


def _image_windows(m: int, ell: int, probs, word: str):
    """Realizations of the one-step image of `word` with their window sequences.

    Yields (windows, probability) pairs; every realization contributes exactly
    as many windows as the image of the first letter has letters, which the
    image length always covers.
    """
    images = letter_images(m)
    n_a = sum(1 for c in word if c == "a")
    if (m + 1) ** n_a > REALIZATION_CAP:
        raise ResourceLimitError(
            f"word {word!r} has {(m + 1) ** n_a} realizations (cap {REALIZATION_CAP})"
        )
    n_windows = m + 1 if word[0] == "a" else 1
    options = [
        [(img, probs[i]) for i, img in enumerate(images)] if c == "a" else [("a", 1.0)]
        for c in word
    ]
    for combo in product(*options):
        realization = "".join(part for part, _ in combo)
        prob = 1.0
        for _, p in combo:
            prob *= p
        windows = tuple(realization[k : k + ell] for k in range(n_windows))
        yield windows, prob


def induced_substitution(m: int, ell: int, probs) -> InducedSubstitution:
    """The window lift of the random rule on legal ell-words; needs ell >= 2."""
    if ell < 2:
        raise ValueError(f"the window lift is defined for ell >= 2, got {ell}")
    p = check_probabilities(probs, m, strict=True)
    rules = {
        w: tuple(_image_windows(m, ell, p, w)) for w in legal_words(m, ell)
    }
    return InducedSubstitution(m, ell, tuple(p), rules)


def induced_matrix(m: int, ell: int, probs) -> InducedMatrix:
    """Expected window counts: entry (v, w) = E[#windows equal to v from source w].

    For ell = 1 this reduces to the plain letter-count matrix [[m, 1], [1, 0]].
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    p = check_probabilities(probs, m, strict=True)
    words = tuple(legal_words(m, ell))
    index = {w: i for i, w in enumerate(words)}
    matrix = np.zeros((len(words), len(words)))
    for w in words:
        col = index[w]
        for windows, prob in _image_windows(m, ell, p, w):
            for v in windows:
                matrix[index[v], col] += prob
    return InducedMatrix(m, ell, words, matrix)


def matrix_spectrum(induced) -> np.ndarray:
    """Eigenvalues with multiplicity, sorted by decreasing modulus."""
    matrix = induced.matrix if isinstance(induced, InducedMatrix) else np.asarray(induced)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("spectrum needs a square matrix")
    eigenvalues = np.linalg.eigvals(matrix)
    return eigenvalues[np.argsort(-np.abs(eigenvalues))]


def perron_frequencies(
    induced: InducedMatrix,
    residual_tol: float = 1e-12,
    max_iterations: int = 100_000,
) -> dict[str, float]:
    """Dominant right eigenvector by power iteration, normalized to sum one.

    The dominant eigenvalue must come out equal to the inflation multiplier
    (it never depends on the probabilities); a mismatch raises NumericError.
    """
    matrix = induced.matrix
    x = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    for _ in range(max_iterations):
        y = matrix @ x
        eigenvalue = y.sum()
        y /= eigenvalue
        if np.abs(y - x).sum() <= residual_tol:
            x = y
            break
        x = y
    else:
        raise NumericError(f"power iteration did not reach {residual_tol} in {max_iterations} steps")
    lam = multiplier(induced.m)
    if abs(eigenvalue - lam) > PF_EIGENVALUE_TOL:
        raise NumericError(
            f"dominant eigenvalue {eigenvalue!r} deviates from the multiplier {lam!r}"
        )
    return dict(zip(induced.words, x))


@lru_cache(maxsize=64)
def _frequency_table(m: int, ell: int, probs: tuple[float, ...]) -> dict[str, float]:
    return perron_frequencies(induced_matrix(m, ell, probs))


def cylinder_measure(m: int, ell: int, probs, word: str) -> float:
    """Measure of the cylinder fixing `word` at any position; 0 for illegal words."""
    if len(word) != ell:
        raise ValueError(f"word length {len(word)} does not match ell={ell}")
    p = check_probabilities(probs, m, strict=True)
    table = _frequency_table(m, ell, tuple(p))
    return table.get(word, 0.0)


def empirical_frequencies(m: int, probs, ell: int, min_letters: int, seed) -> dict[str, float]:
    """Sliding-window frequencies along one random realization grown from `a`.

    The word is grown by repeated substitution until it has at least
    `min_letters` letters; all windows count, including both boundaries.
    """
    p = check_probabilities(probs, m, strict=True)
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    if ell > 24:
        raise ResourceLimitError(f"window table for ell={ell} would hold 2**{ell} entries")
    if min_letters < ell:
        raise ValueError(f"need at least ell={ell} letters, got {min_letters}")
    rng = make_rng(seed)
    word = "a"
    while len(word) < min_letters:
        word = iterate_random(m, p, word, 1, rng)
    codes = word_to_codes(word)
    counts = _kernels.window_counts(codes, ell)
    total = int(counts.sum())
    result = {}
    for value in np.nonzero(counts)[0]:
        letters = [(int(value) >> (ell - 1 - j)) & 1 for j in range(ell)]
        key = "".join("ab"[bit] for bit in letters)
        result[key] = counts[value] / total
    return result
