import cmath
import math

import numpy as np
import pytest

from noblemeans.diffraction import (
    FourierModulePoint,
    ac_density,
    amplitude_variance,
    amplitude_variance_closed_form,
    bragg_intensity,
    diffraction_table,
    exhaustive_moments,
    fibonacci_numbers,
    fourier_module_points,
    letter_amplitudes,
    level_spans,
    mean_amplitude,
    monte_carlo_spectrum,
    pure_point_estimate,
    sample_level_word,
    spectrum_export,
    spectrum_load,
    variance_step,
)
from noblemeans.errors import ResourceLimitError
from noblemeans.words import multiplier

GOLDEN = multiplier(1)
DENSITY = GOLDEN / math.sqrt(5)

# frozen from the exhaustive two-branch enumeration at level 2
DELTA_2_AT_HALF = 1.3623748900804804


def test_fibonacci_and_spans():
    assert fibonacci_numbers(10).tolist() == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    spans = level_spans(30)
    assert spans[0] == 1.0
    assert spans[1] == pytest.approx(GOLDEN, abs=1e-15)
    for n in range(31):
        assert spans[n] == pytest.approx(GOLDEN**n, rel=1e-9)


def test_amplitude_initial_conditions():
    for k in (0.0, 0.37, 1.9):
        amps = mean_amplitude(k, 3, 0.4)
        assert complex(amps[0]) == pytest.approx(cmath.exp(-2j * math.pi * k), abs=1e-12)
        assert complex(amps[1]) == pytest.approx(cmath.exp(-2j * math.pi * k * GOLDEN), abs=1e-12)


def test_amplitude_at_zero_counts_points():
    fib = fibonacci_numbers(13)
    amps = mean_amplitude(0.0, 12, 0.3)
    for n in range(13):
        assert complex(amps[n]) == pytest.approx(fib[n + 1], abs=1e-9)


def test_amplitude_bounded_by_point_count():
    ks = np.linspace(0.0, 3.0, 101)
    amps = mean_amplitude(ks, 12, 0.7)
    fib = fibonacci_numbers(13)
    for n in range(13):
        assert np.all(np.abs(amps[n]) <= fib[n + 1] + 1e-9)


def test_variance_step_values():
    assert variance_step(0.0, 5, mean_amplitude(0.0, 5, 0.5)) == pytest.approx(0.0, abs=1e-12)
    got = variance_step(0.5, 2, mean_amplitude(0.5, 2, 0.5))
    assert got == pytest.approx(DELTA_2_AT_HALF, abs=1e-12)


def test_variance_step_nonnegative_on_grid():
    ks = np.linspace(0.0, 3.0, 301)
    for p0 in (0.2, 0.5, 0.8):
        amps = mean_amplitude(ks, 12, p0)
        for n in range(2, 13):
            assert float(variance_step(ks, n, amps).min()) > -1e-9


def test_variance_recursion_basics():
    ks = np.linspace(0.0, 3.0, 40)
    var = amplitude_variance(ks, 10, 0.5)
    assert np.all(var[0] == 0) and np.all(var[1] == 0)
    assert np.allclose(var[2], 0.5 * variance_step(ks, 2, mean_amplitude(ks, 2, 0.5)))
    assert np.allclose(amplitude_variance(0.0, 10, 0.5)[2:], 0.0, atol=1e-12)
    for p0 in (0.0, 1.0):
        assert np.allclose(amplitude_variance(ks, 10, p0), 0.0, atol=1e-12)


def test_closed_form_matches_recursion():
    ks = np.linspace(0.01, 3.0, 50)
    for n in (2, 11, 30):
        rec = amplitude_variance(ks, n, 0.35)[n]
        closed = amplitude_variance_closed_form(ks, n, 0.35)
        assert np.allclose(closed, rec, rtol=1e-9, atol=1e-12)
    single = amplitude_variance_closed_form(0.5, 2, 0.5)
    assert float(single) == pytest.approx(2 * 0.25 * DELTA_2_AT_HALF, abs=1e-12)


def test_exhaustive_moments_oracle():
    k = 0.7
    mean0, second0 = exhaustive_moments(k, 0, 0.3)
    assert mean0 == pytest.approx(cmath.exp(-2j * math.pi * k), abs=1e-15)
    assert second0 == pytest.approx(1.0, abs=1e-15)
    for n in (2, 4, 5):
        for p0 in (0.3, 0.62):
            mean, second = exhaustive_moments(k, n, p0)
            assert mean == pytest.approx(complex(mean_amplitude(k, n, p0)[n]), abs=1e-12)
            variance = second - abs(mean) ** 2
            assert variance == pytest.approx(float(amplitude_variance(k, n, p0)[n]), abs=1e-12)
    with pytest.raises(ResourceLimitError):
        exhaustive_moments(k, 8, 0.5)


def test_pure_point_estimate_behaviour():
    assert float(pure_point_estimate(0.0, 20, 0.5)) == pytest.approx(DENSITY**2, abs=1e-3)
    k_offmodule = math.sqrt(2) / 3
    assert float(pure_point_estimate(k_offmodule, 20, 0.5)) < float(
        pure_point_estimate(k_offmodule, 6, 0.5)
    )
    ks = np.linspace(0.0, 3.0, 101)
    assert np.all(pure_point_estimate(ks, 15, 0.5) <= 1.0 + 1e-12)


def test_ac_density_behaviour():
    assert float(ac_density(0.0, 20, 0.5)) == 0.0
    ks = np.linspace(0.0, 3.0, 101)
    assert np.all(ac_density(ks, 20, 0.5) >= -1e-12)


def test_misprinted_conjugation_diverges():
    ks = np.linspace(0.0, 3.0, 100)
    spans = level_spans(25)
    right = amplitude_variance(ks, 25, 0.5)[25] / spans[25]
    wrong = amplitude_variance(ks, 25, 0.5, misprint=True)[25] / spans[25]
    assert float(np.max(wrong / np.maximum(right, 1e-300))) > 10.0


def test_letter_amplitudes_at_zero():
    eta = letter_amplitudes(0.0, 0.5)
    assert eta[0] == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    assert eta[1] == pytest.approx((GOLDEN - 1) / math.sqrt(5), abs=1e-12)
    assert (eta[0] + eta[1]).real == pytest.approx(DENSITY, abs=1e-12)


def test_letter_amplitudes_bounded_by_density():
    for y in np.linspace(-4.0, 4.0, 33):
        eta = letter_amplitudes(float(y), 0.5)
        assert abs(eta[0]) + abs(eta[1]) <= DENSITY + 1e-9


def test_bragg_intensity_pathways_agree():
    zero = FourierModulePoint(0, 0, 1)
    assert bragg_intensity(zero, 0.5) == pytest.approx(DENSITY**2, abs=1e-9)
    assert bragg_intensity(zero, 0.5) == pytest.approx(
        float(pure_point_estimate(0.0, 20, 0.5)), abs=1e-3
    )
    points = [
        p
        for p in fourier_module_points(1, 3.0, 1.0)
        if p.value > 0
    ]
    points.sort(key=lambda p: abs(p.star))
    assert len(points) >= 5
    for p in points[:5]:
        assert bragg_intensity(p, 0.5) == pytest.approx(
            float(pure_point_estimate(p.value, 20, 0.5)), abs=1e-2
        )


def test_bragg_intensity_fades_with_star_distance():
    near = FourierModulePoint(1, 2, 1)  # star ~ 0.106
    far = FourierModulePoint(-8, 5, 1)
    assert abs(far.star) > 4 * abs(near.star)
    assert bragg_intensity(far, 0.5) < bragg_intensity(near, 0.5)


def test_bragg_intensity_requires_golden_case():
    with pytest.raises(NotImplementedError):
        bragg_intensity(FourierModulePoint(0, 0, 2), 0.5)


def test_fourier_module_points():
    points = fourier_module_points(1, 3.0, 8.0)
    pairs = {(p.u, p.v) for p in points}
    assert (0, 0) in pairs
    assert {(-u, -v) for u, v in pairs} == pairs
    one = FourierModulePoint(1, 0, 1)
    assert one.value == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    values = [p.value for p in points]
    assert values == sorted(values)
    assert all(abs(p.value) <= 3.0 and abs(p.star) <= 8.0 for p in points)


def test_sample_level_word_structure():
    rng = np.random.default_rng(0)
    assert sample_level_word(1, (0.5, 0.5), 0, rng).tolist() == [1]
    fib = fibonacci_numbers(8)
    for level in (1, 2, 5):
        codes = sample_level_word(1, (0.5, 0.5), level, np.random.default_rng(level))
        assert codes.size == fib[level + 1]
        assert int((codes == 0).sum()) == fib[level]


def test_monte_carlo_zero_frequency_is_deterministic():
    level = 4
    table = monte_carlo_spectrum(1, (0.5, 0.5), level, np.array([0.0]), samples=50, seed=3)
    fib = fibonacci_numbers(level + 1)
    span = level_spans(level)[level]
    assert table.mc_mean[0] == pytest.approx(fib[level + 1] ** 2 / span, rel=1e-12)
    assert table.mc_stderr[0] == pytest.approx(0.0, abs=1e-9)


def test_monte_carlo_stderr_scales_with_samples():
    ks = np.array([0.3, 0.9, 1.7])
    small = monte_carlo_spectrum(1, (0.5, 0.5), 5, ks, samples=250, seed=11)
    large = monte_carlo_spectrum(1, (0.5, 0.5), 5, ks, samples=500, seed=11)
    ratios = small.mc_stderr / large.mc_stderr
    assert np.all(ratios > math.sqrt(2) * 0.8)
    assert np.all(ratios < math.sqrt(2) * 1.2)


def test_monte_carlo_agrees_with_recursions_even_for_other_m():
    table = monte_carlo_spectrum(2, (0.2, 0.5, 0.3), 4, np.linspace(0, 2, 9), samples=40, seed=5)
    assert np.all(table.mc_mean >= 0)
    assert len(table) == 9


def test_diffraction_table_and_roundtrip(tmp_path):
    table = diffraction_table(
        1, (0.5, 0.5), 5, k_max=1.5, grid_points=40, star_cutoff=2.0, samples=30, seed=2
    )
    assert table.pp is not None and table.ac is not None
    assert np.all(table.mc_mean >= 0) and np.all(table.pp >= 0) and np.all(table.ac >= -1e-12)
    module_rows = ~np.isnan(table.module_u)
    assert module_rows.any()
    path = tmp_path / "spectrum.csv"
    spectrum_export(table, path)
    text = path.read_text().splitlines()
    assert text[0] == "k,pp,ac,mc_mean,mc_stderr,u,v"
    assert sum(line.startswith("k,") for line in text) == 1
    loaded = spectrum_load(path)
    assert np.array_equal(loaded.k, table.k)
    assert np.array_equal(loaded.pp, table.pp)
    assert np.array_equal(loaded.ac, table.ac)
    assert np.array_equal(loaded.mc_mean, table.mc_mean)
    assert np.array_equal(loaded.mc_stderr, table.mc_stderr)
    assert np.array_equal(np.isnan(loaded.module_u), np.isnan(table.module_u))
    finite = ~np.isnan(table.module_u)
    assert np.array_equal(loaded.module_u[finite], table.module_u[finite])


def test_diffraction_table_without_analytic_columns(tmp_path):
    table = diffraction_table(
        2, (0.3, 0.3, 0.4), 4, k_max=1.0, grid_points=20, star_cutoff=2.0, samples=10, seed=4
    )
    assert table.pp is None and table.ac is None
    path = tmp_path / "m2.csv"
    spectrum_export(table, path)
    loaded = spectrum_load(path)
    assert loaded.pp is None and loaded.ac is None
    assert np.array_equal(loaded.mc_mean, table.mc_mean)


def test_spectrum_export_txt_and_errors(tmp_path):
    table = diffraction_table(
        1, (0.5, 0.5), 4, k_max=1.0, grid_points=10, star_cutoff=1.5, samples=5, seed=0
    )
    txt = tmp_path / "spectrum.txt"
    spectrum_export(table, txt, fmt="txt")
    assert txt.read_text().startswith("# k")
    with pytest.raises(ValueError):
        spectrum_export(table, tmp_path / "x.csv", fmt="json")
    with pytest.raises(OSError) as err:
        spectrum_export(table, tmp_path / "missing" / "x.csv")
    assert "missing" in str(err.value)
