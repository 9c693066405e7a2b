"""Mixed diffraction of the random golden-mean chain, plus Monte Carlo spectra.

The random concatenation model builds the level-n interval word from
independent level-(n-1) and level-(n-2) words in either order; with phases at
right interval endpoints its expected exponential sum and variance obey
two-term recursions whose initial values are e^{-2*pi*i*k} (single b
interval) and e^{-2*pi*i*k*multiplier} (single a interval). For m = 1 the
same distribution arises from iterating the random rule on the letter a, so
sampled spectra can be checked against the recursion output. Bragg peak
weights follow from a contraction product over the letter intensity
amplitudes; both pathways to the pure point part are exposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ResourceLimitError
from .words import check_probabilities, conjugate_multiplier, make_rng, multiplier

GOLDEN = multiplier(1)
GOLDEN_CONJ = conjugate_multiplier(1)
SQRT5 = GOLDEN - GOLDEN_CONJ

EXHAUSTIVE_LEVEL_CAP = 7
ETA_BASE_EPS = 1e-8

# density amplitudes at frequency zero: (1, multiplier - 1) / sqrt(5)
ETA_AT_ZERO = np.array([1.0 / SQRT5, (GOLDEN - 1.0) / SQRT5], dtype=complex)


def fibonacci_numbers(n_max: int) -> np.ndarray:
    """F_0 .. F_{n_max} with F_0 = 0, F_1 = 1."""
    f = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        f[1] = 1
    for i in range(2, n_max + 1):
        f[i] = f[i - 1] + f[i - 2]
    return f


def level_spans(n_max: int) -> np.ndarray:
    """Physical lengths L_0 .. L_{n_max} of the level words; L_n equals multiplier**n."""
    f = fibonacci_numbers(n_max)
    spans = np.empty(n_max + 1)
    spans[0] = 1.0
    for n in range(1, n_max + 1):
        spans[n] = GOLDEN * f[n] + f[n - 1]
    return spans


def _phase(x):
    return np.exp(-2j * np.pi * np.asarray(x))


def mean_amplitude(k, n_max: int, p0: float):
    """Expected exponential sums A_0 .. A_{n_max}; k may be a scalar or an array.

    Returns shape (n_max + 1,) for scalar k, (n_max + 1, len(k)) otherwise.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    p1 = 1.0 - p0
    k = np.asarray(k, dtype=float)
    spans = level_spans(n_max)
    out = np.empty((n_max + 1,) + k.shape, dtype=complex)
    out[0] = _phase(k)
    out[1] = _phase(k * GOLDEN)
    for n in range(2, n_max + 1):
        out[n] = (p1 + p0 * _phase(k * spans[n - 2])) * out[n - 1] + (
            p0 + p1 * _phase(k * spans[n - 1])
        ) * out[n - 2]
    return out


def variance_step(k, n: int, amplitudes, misprint: bool = False):
    """Increment driving the variance recursion at level n (n >= 2).

    The cross term conjugates the level-(n-2) amplitude; `misprint` conjugates
    the level-(n-1) amplitude instead, which wrecks the convergence of the
    normalized variance and is kept only as a diagnostic.
    """
    if n < 2:
        raise ValueError(f"variance step needs n >= 2, got {n}")
    k = np.asarray(k, dtype=float)
    spans = level_spans(n)
    a_prev, a_prev2 = amplitudes[n - 1], amplitudes[n - 2]
    cos1 = 1.0 - np.cos(2 * np.pi * k * spans[n - 1])
    cos2 = 1.0 - np.cos(2 * np.pi * k * spans[n - 2])
    bracket = (1.0 - _phase(-k * spans[n - 1])) * (1.0 - _phase(k * spans[n - 2]))
    if misprint:
        cross = bracket * np.conj(a_prev) * a_prev2
    else:
        cross = bracket * a_prev * np.conj(a_prev2)
    return cos1 * np.abs(a_prev2) ** 2 + cos2 * np.abs(a_prev) ** 2 - cross.real


def amplitude_variance(k, n_max: int, p0: float, misprint: bool = False):
    """Variances B_0 .. B_{n_max} of the exponential sums (B_0 = B_1 = 0)."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    k = np.asarray(k, dtype=float)
    amplitudes = mean_amplitude(k, n_max, p0)
    out = np.zeros((n_max + 1,) + k.shape)
    weight = 2.0 * p0 * (1.0 - p0)
    for n in range(2, n_max + 1):
        out[n] = out[n - 1] + out[n - 2] + weight * variance_step(k, n, amplitudes, misprint)
    return out


def amplitude_variance_closed_form(k, n: int, p0: float):
    """B_n as the Fibonacci-weighted sum of variance increments (no recursion)."""
    if n < 2:
        raise ValueError(f"closed form needs n >= 2, got {n}")
    k = np.asarray(k, dtype=float)
    amplitudes = mean_amplitude(k, n, p0)
    fib = fibonacci_numbers(n + 1)
    total = np.zeros(k.shape)
    for i in range(2, n + 1):
        total = total + fib[n + 1 - i] * variance_step(k, i, amplitudes)
    return 2.0 * p0 * (1.0 - p0) * total


def pure_point_estimate(k, n: int, p0: float):
    """Finite-level Bragg weight |A_n(k)|^2 / L_n^2."""
    amplitudes = mean_amplitude(k, n, p0)
    return np.abs(amplitudes[n]) ** 2 / level_spans(n)[n] ** 2


def ac_density(k, n: int, p0: float, misprint: bool = False):
    """Finite-level absolutely continuous density B_n(k) / L_n."""
    return amplitude_variance(k, n, p0, misprint)[n] / level_spans(n)[n]


def letter_amplitudes(y: float, p0: float, n_levels: int | None = None) -> np.ndarray:
    """Fourier amplitudes (eta_a, eta_b) of the two letter densities at frequency y.

    Golden-mean case only. Evaluated by unwinding the self-similarity n times,
    left factor first, until the remaining argument y * conjugate**n is below
    1e-8, where the exact zero-frequency vector closes the recursion.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0}")
    p1 = 1.0 - p0
    xi = GOLDEN_CONJ
    if n_levels is None:
        n_levels = 8
        while abs(y) * abs(xi) ** n_levels >= ETA_BASE_EPS:
            n_levels += 1
    product = np.eye(2, dtype=complex)
    for level in range(1, n_levels + 1):
        m0 = np.array([[np.exp(-2j * np.pi * y * xi ** (level - 1)), 1.0], [1.0, 0.0]])
        m1 = np.array([[1.0, 1.0], [np.exp(-2j * np.pi * y * xi**level), 0.0]])
        product = product @ (p0 * m0 + p1 * m1)
    return abs(xi) ** n_levels * (product @ ETA_AT_ZERO)


@dataclass(frozen=True)
class FourierModulePoint:
    """Candidate Bragg position (u + v * multiplier) / sqrt(m^2 + 4) with its star value."""

    u: int
    v: int
    m: int = 1

    @property
    def _root(self) -> float:
        return math.sqrt(self.m * self.m + 4)

    @property
    def value(self) -> float:
        return (self.u + self.v * multiplier(self.m)) / self._root

    @property
    def star(self) -> float:
        # the root conjugates to its negative
        return -(self.u + self.v * conjugate_multiplier(self.m)) / self._root


def fourier_module_points(m: int, k_max: float, star_cutoff: float) -> list[FourierModulePoint]:
    """All module points with |value| <= k_max and |star| <= star_cutoff, sorted by value."""
    if k_max <= 0 or star_cutoff <= 0:
        raise ValueError("k_max and star_cutoff must be positive")
    lam = multiplier(m)
    root = math.sqrt(m * m + 4)
    points = []
    v_bound = int(math.floor(k_max + star_cutoff)) + 1
    for v in range(-v_bound, v_bound + 1):
        u_lo = int(math.ceil(-v * lam - root * k_max))
        u_hi = int(math.floor(-v * lam + root * k_max))
        for u in range(u_lo, u_hi + 1):
            point = FourierModulePoint(u, v, m)
            if abs(point.value) <= k_max and abs(point.star) <= star_cutoff:
                points.append(point)
    return sorted(points, key=lambda p: p.value)


def bragg_intensity(point: FourierModulePoint, p0: float) -> float:
    """Pure point weight |eta_a(-star) + eta_b(-star)|^2 at a module point."""
    if point.m != 1:
        raise NotImplementedError("Bragg weights via letter amplitudes exist only for m = 1")
    eta = letter_amplitudes(-point.star, p0)
    return float(abs(eta[0] + eta[1]) ** 2)


def _amplitude_distribution(n: int, k: float, p0: float, memo: dict) -> tuple[np.ndarray, np.ndarray]:
    if n in memo:
        return memo[n]
    if n == 0:
        dist = (np.array([np.exp(-2j * np.pi * k)]), np.array([1.0]))
    elif n == 1:
        dist = (np.array([np.exp(-2j * np.pi * k * GOLDEN)]), np.array([1.0]))
    else:
        spans = level_spans(n)
        g1, q1 = _amplitude_distribution(n - 1, k, p0, memo)
        g2, q2 = _amplitude_distribution(n - 2, k, p0, memo)
        phase1 = np.exp(-2j * np.pi * k * spans[n - 1])
        phase2 = np.exp(-2j * np.pi * k * spans[n - 2])
        joint = (q1[:, None] * q2[None, :]).ravel()
        dist = (
            np.concatenate(
                [
                    (g1[:, None] + phase1 * g2[None, :]).ravel(),
                    (phase2 * g1[:, None] + g2[None, :]).ravel(),
                ]
            ),
            np.concatenate([(1.0 - p0) * joint, p0 * joint]),
        )
    memo[n] = dist
    return dist


def exhaustive_moments(k: float, n: int, p0: float) -> tuple[complex, float]:
    """(E g_n, E |g_n|^2) by enumerating every realization of the concatenation model.

    Independent oracle for the recursions; the tree doubles per internal node,
    so levels beyond 7 are refused.
    """
    if n > EXHAUSTIVE_LEVEL_CAP:
        raise ResourceLimitError(
            f"exhaustive enumeration is capped at level {EXHAUSTIVE_LEVEL_CAP}, got {n}"
        )
    amplitudes, weights = _amplitude_distribution(n, k, p0, {})
    mean = complex(
        math.fsum(weights * amplitudes.real), math.fsum(weights * amplitudes.imag)
    )
    second = math.fsum(weights * (amplitudes.real**2 + amplitudes.imag**2))
    return mean, second


@dataclass
class SpectrumTable:
    """Sampled diffraction data on a k-grid; optional columns are None.

    module_u / module_v hold integer module coordinates as floats, NaN on rows
    that are not module points.
    """

    k: np.ndarray
    pp: np.ndarray | None = None
    ac: np.ndarray | None = None
    mc_mean: np.ndarray | None = None
    mc_stderr: np.ndarray | None = None
    module_u: np.ndarray | None = None
    module_v: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.k.shape[0])


def sample_level_word(m: int, probs, level: int, rng) -> np.ndarray:
    """Coded letters of one realization at the given level (level 0 is the word b)."""
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if level == 0:
        return np.array([1], dtype=np.uint8)
    p = check_probabilities(probs, m)
    codes = np.array([0], dtype=np.uint8)
    for _ in range(level - 1):
        n_a = int((codes == 0).sum())
        choices = rng.choice(m + 1, size=n_a, p=p).astype(np.uint8)
        codes = _kernels.substitute(codes, m, choices)
    return codes


def monte_carlo_spectrum(
    m: int, probs, level: int, k_values, samples: int, seed
) -> SpectrumTable:
    """Mean and standard error of |g(k)|^2 / span over independent level words.

    Phases sit at right interval endpoints, matching the recursion's initial
    conditions. Per-sample seeds derive from (seed, sample index), so results
    do not depend on evaluation order.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    k_values = np.ascontiguousarray(k_values, dtype=float)
    lam = multiplier(m)
    sums = np.zeros(k_values.shape[0])
    sums_sq = np.zeros(k_values.shape[0])
    for child in np.random.SeedSequence(seed).spawn(samples):
        rng = np.random.Generator(np.random.PCG64(child))
        codes = sample_level_word(m, probs, level, rng)
        b_steps = codes.astype(np.int64)
        a_steps = np.int64(1) - b_steps
        ends = np.cumsum(b_steps) + np.cumsum(a_steps) * lam
        span = float(ends[-1])
        g = _kernels.phase_sums(ends, k_values)
        intensity = (g.real**2 + g.imag**2) / span
        sums += intensity
        sums_sq += intensity**2
    mean = sums / samples
    if samples > 1:
        variance = np.maximum(sums_sq - samples * mean**2, 0.0) / (samples - 1)
        stderr = np.sqrt(variance / samples)
    else:
        stderr = np.full_like(mean, np.nan)
    return SpectrumTable(k=k_values, mc_mean=mean, mc_stderr=stderr)


def diffraction_table(
    m: int,
    probs,
    level: int,
    k_max: float = 3.0,
    grid_points: int = 2000,
    star_cutoff: float = 8.0,
    samples: int = 1000,
    seed=0,
    misprint: bool = False,
) -> SpectrumTable:
    """Spectrum on the uniform [0, k_max] grid joined with the module points.

    Monte Carlo columns are always filled; the finite-level analytic columns
    (Bragg weight estimate and diffuse density) exist only for m = 1.
    """
    module = [p for p in fourier_module_points(m, k_max, star_cutoff) if p.value >= 0]
    grid = np.linspace(0.0, k_max, grid_points)
    k_values = np.unique(np.concatenate([grid, [p.value for p in module]]))
    module_u = np.full(k_values.shape, np.nan)
    module_v = np.full(k_values.shape, np.nan)
    lookup = {round(p.value, 12): p for p in module}
    for i, k in enumerate(k_values):
        point = lookup.get(round(float(k), 12))
        if point is not None:
            module_u[i] = point.u
            module_v[i] = point.v
    table = monte_carlo_spectrum(m, probs, level, k_values, samples, seed)
    pp = ac = None
    if m == 1:
        p = check_probabilities(probs, m)
        pp = pure_point_estimate(k_values, level, float(p[0]))
        ac = ac_density(k_values, level, float(p[0]), misprint)
    return SpectrumTable(
        k=k_values,
        pp=pp,
        ac=ac,
        mc_mean=table.mc_mean,
        mc_stderr=table.mc_stderr,
        module_u=module_u,
        module_v=module_v,
    )


_CSV_COLUMNS = ("k", "pp", "ac", "mc_mean", "mc_stderr", "u", "v")


def spectrum_export(table: SpectrumTable, path, fmt: str = "csv") -> None:
    """Write the table; CSV columns are exactly (k, pp, ac, mc_mean, mc_stderr, u, v)."""
    if len(table) == 0:
        raise ValueError("refusing to export an empty spectrum table")
    if fmt not in ("csv", "txt"):
        raise ValueError(f"unknown format {fmt!r}")
    try:
        with open(path, "w", encoding="ascii") as fh:
            if fmt == "csv":
                fh.write(",".join(_CSV_COLUMNS) + "\n")
                for i in range(len(table)):
                    cells = [f"{table.k[i]:.17g}"]
                    for column in (table.pp, table.ac, table.mc_mean, table.mc_stderr):
                        if column is None:
                            cells.append("")
                        else:
                            cells.append(f"{column[i]:.17g}")
                    for column in (table.module_u, table.module_v):
                        if column is None or np.isnan(column[i]):
                            cells.append("")
                        else:
                            cells.append(f"{int(column[i])}")
                    fh.write(",".join(cells) + "\n")
            else:
                fh.write("# " + "  ".join(_CSV_COLUMNS) + "\n")
                for i in range(len(table)):
                    row = [f"{table.k[i]:<22.17g}"]
                    for column in (table.pp, table.ac, table.mc_mean, table.mc_stderr):
                        row.append("-" if column is None else f"{column[i]:<22.17g}")
                    for column in (table.module_u, table.module_v):
                        if column is None or np.isnan(column[i]):
                            row.append("-")
                        else:
                            row.append(str(int(column[i])))
                    fh.write("  ".join(row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing spectrum to {path}: {exc}") from exc


def spectrum_load(path) -> SpectrumTable:
    """Parse a CSV written by spectrum_export; empty cells become NaN / absent columns."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != _CSV_COLUMNS:
            raise ValueError(f"unexpected header {header!r} in {path}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    columns = []
    for j in range(len(_CSV_COLUMNS)):
        cells = [row[j] for row in rows]
        if all(c == "" for c in cells):
            columns.append(None)
        else:
            columns.append(np.array([float(c) if c else np.nan for c in cells]))
    return SpectrumTable(
        k=columns[0],
        pp=columns[1],
        ac=columns[2],
        mc_mean=columns[3],
        mc_stderr=columns[4],
        module_u=columns[5],
        module_v=columns[6],
    )
