"""Pure numpy versions of the hot loops; same contracts as the compiled module."""
from __future__ import annotations

import numpy as np

_PHASE_CHUNK = 1 << 22  # cap on the k x positions outer product


def substitute(codes: np.ndarray, m: int, choices: np.ndarray) -> np.ndarray:
    """One substitution round: a -> a^i b a^(m-i) with i from `choices`, b -> a.

    `choices` holds one image index per occurrence of a, in word order.
    """
    codes = np.ascontiguousarray(codes, dtype=np.uint8)
    choices = np.ascontiguousarray(choices, dtype=np.uint8)
    a_mask = codes == 0
    n_a = int(a_mask.sum())
    if choices.shape[0] != n_a:
        raise ValueError(f"need one choice per 'a' ({n_a}), got {choices.shape[0]}")
    lengths = np.where(a_mask, m + 1, 1).astype(np.int64)
    starts = np.cumsum(lengths) - lengths
    out = np.zeros(int(lengths.sum()), dtype=np.uint8)
    # each a-image is all a's except a single b at offset `choice`; b-images are a single a
    out[starts[a_mask] + choices] = 1
    return out


def window_counts(codes: np.ndarray, width: int) -> np.ndarray:
    """Occurrence counts of every length-`width` window, indexed by its base-2 value."""
    if width < 1:
        raise ValueError("window width must be >= 1")
    codes = np.ascontiguousarray(codes, dtype=np.uint8)
    n = codes.shape[0]
    table = np.zeros(1 << width, dtype=np.int64)
    if n < width:
        return table
    values = np.zeros(n - width + 1, dtype=np.int64)
    for offset in range(width):
        values = (values << 1) | codes[offset : n - width + 1 + offset]
    return np.bincount(values, minlength=1 << width).astype(np.int64)


def phase_sums(positions: np.ndarray, k_values: np.ndarray) -> np.ndarray:
    """g(k) = sum_j exp(-2*pi*i*k*x_j) for every k."""
    positions = np.ascontiguousarray(positions, dtype=np.float64)
    k_values = np.ascontiguousarray(k_values, dtype=np.float64)
    out = np.empty(k_values.shape[0], dtype=np.complex128)
    if positions.size == 0:
        out[:] = 0
        return out
    step = max(1, _PHASE_CHUNK // max(1, positions.shape[0]))
    for lo in range(0, k_values.shape[0], step):
        block = k_values[lo : lo + step]
        out[lo : lo + step] = np.exp(np.outer(block, positions) * (-2j * np.pi)).sum(axis=1)
    return out
