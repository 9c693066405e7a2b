"""Command-line front end: generate, entropy, complexity, frequencies, diffract, validate.

Exit codes: 0 success, 1 usage error, 2 numeric/resource error, 3 validation
failure. All subcommands are deterministic given their flags and seed; the
default seed can be set through NOBLEMEANS_SEED, and a flat key=value config
file (--config) supplies defaults that explicit flags override.
"""
from __future__ import annotations

import os
import sys

import click
import numpy as np

from . import diffraction, entropy, frequencies, substitution, words
from .errors import NumericError, ResourceLimitError
from .validate import ValidationFailure, run_checks

SEED_ENV = "NOBLEMEANS_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _parse_probs(text: str, m: int) -> np.ndarray:
    """Comma-separated decimals; must sum to 1 within 1e-9, then renormalized exactly."""
    try:
        values = np.array([float(x) for x in text.split(",")], dtype=float)
    except ValueError as exc:
        raise click.UsageError(f"cannot parse probabilities {text!r}: {exc}") from exc
    if values.size != m + 1:
        raise click.UsageError(f"expected {m + 1} probabilities for m={m}, got {values.size}")
    if np.any(values < 0):
        raise click.UsageError("probabilities must be nonnegative")
    total = values.sum()
    if abs(total - 1.0) > 1e-9:
        raise click.UsageError(f"probabilities sum to {total!r}, expected 1 within 1e-9")
    return values / total


def _parse_range(text: str) -> list[int]:
    """Accepts '3', '1-7', or '1,3,5'."""
    result = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                result.extend(range(int(lo), int(hi) + 1))
            else:
                result.append(int(part))
    except ValueError as exc:
        raise click.UsageError(f"cannot parse range {text!r}: {exc}") from exc
    return result


def _write_rows(out, header: list[str], rows) -> None:
    def fmt(x) -> str:
        if x is None:
            return ""
        if isinstance(x, float):
            return f"{x:.17g}"
        return str(x)

    lines = [",".join(header)] + [",".join(fmt(c) for c in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _load_config(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise click.UsageError(f"bad config line {line!r} in {path}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Flat key=value file supplying defaults; flags override it.")
@click.pass_context
def cli(ctx, config):
    """Random noble means substitutions: sampling, entropy, word statistics, diffraction."""
    if config:
        flat = _load_config(config)
        ctx.default_map = {name: flat for name in cli.commands}


@cli.command()
@click.option("--m", default=1, show_default=True, help="Family parameter (>= 1).")
@click.option("--probs", default=None, help="Comma-separated p_0..p_m; default uniform.")
@click.option("--steps", default=5, show_default=True, help="Substitution rounds applied to 'a'.")
@click.option("--seed", default=None, type=int, help=f"RNG seed (default ${SEED_ENV} or 0).")
@click.option("--out", default=None, type=click.Path(), help="Write output here instead of stdout.")
def generate(m, probs, steps, seed, out):
    """Sample one realization and print it with its letter counts and seed."""
    seed = _default_seed() if seed is None else seed
    p = _parse_probs(probs, m) if probs else np.full(m + 1, 1.0 / (m + 1))
    word = substitution.iterate_random(m, p, "a", steps, words.make_rng(seed))
    n_a, n_b = substitution.abelianization(word)
    text = f"{word}\na_count={n_a} b_count={n_b} seed={seed}\n"
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@cli.command("entropy")
@click.option("--m", "m_range", default="1", show_default=True,
              help="Family parameter, range ('1-7') or list ('1,3').")
@click.option("--mode", type=click.Choice(["series", "empirical", "both"]), default="series",
              show_default=True)
@click.option("--tol", default=1e-9, show_default=True, help="Series tail tolerance.")
@click.option("--max-n", default=8, show_default=True, help="Highest level for empirical mode.")
@click.option("--max-letters", default=entropy.DEFAULT_LETTER_CAP, show_default=True,
              help="Cap on stored letters for level sets.")
@click.option("--out", default=None, type=click.Path())
def entropy_cmd(m_range, mode, tol, max_n, max_letters, out):
    """Topological entropy: series values and/or empirical growth rates (CSV)."""
    rows = []
    error = None
    for m in _parse_range(m_range):
        if mode in ("series", "both"):
            rows.append((m, None, entropy.entropy_series(m, tol).value, "series"))
        if mode in ("empirical", "both"):
            for n in range(3, max_n + 1):
                try:
                    rows.append((m, n, entropy.empirical_entropy(m, n, max_letters), "empirical"))
                except ResourceLimitError as exc:
                    error = exc
                    break
    _write_rows(out, ["m", "n_or_ell", "value", "method"], rows)
    if error is not None:
        raise error  # partial rows were already emitted; exit code 2


@cli.command("complexity")
@click.option("--m", "m_range", default="1", show_default=True)
@click.option("--lengths", default="1-4", show_default=True, help="Word lengths, e.g. '1-6'.")
@click.option("--mode", type=click.Choice(["exact", "formula", "both"]), default="both",
              show_default=True)
@click.option("--out", default=None, type=click.Path())
def complexity_cmd(m_range, lengths, mode, out):
    """Legal-word counts, exhaustive and/or closed-form (CSV)."""
    rows = []
    for m in _parse_range(m_range):
        for ell in _parse_range(lengths):
            if mode in ("exact", "both"):
                rows.append((m, ell, float(entropy.complexity_exact(m, ell)), "exact"))
            if mode in ("formula", "both") and (m + 3 <= ell <= 2 * m + 2):
                rows.append((m, ell, float(entropy.complexity_formula(m, ell)), "formula"))
    _write_rows(out, ["m", "n_or_ell", "value", "method"], rows)


@cli.command("frequencies")
@click.option("--m", default=1, show_default=True)
@click.option("--ell", default=2, show_default=True, help="Window length.")
@click.option("--probs", default=None, help="Comma-separated p_0..p_m; default uniform.")
@click.option("--empirical", default=0, show_default=True,
              help="Letters for the sampled comparison column; 0 skips sampling.")
@click.option("--seed", default=None, type=int)
@click.option("--out", default=None, type=click.Path())
def frequencies_cmd(m, ell, probs, empirical, seed, out):
    """Subword frequencies: dominant-eigenvector values vs sampled values (CSV)."""
    seed = _default_seed() if seed is None else seed
    p = _parse_probs(probs, m) if probs else np.full(m + 1, 1.0 / (m + 1))
    analytic = frequencies.perron_frequencies(frequencies.induced_matrix(m, ell, p))
    sampled = (
        frequencies.empirical_frequencies(m, p, ell, empirical, seed) if empirical else {}
    )
    rows = []
    for word in sorted(analytic):
        a = analytic[word]
        if empirical:
            e = sampled.get(word, 0.0)
            rows.append((word, float(a), float(e), float(abs(a - e))))
        else:
            rows.append((word, float(a), None, None))
    _write_rows(out, ["word", "analytic_frequency", "empirical_frequency", "abs_error"], rows)


@cli.command("diffract")
@click.option("--m", default=1, show_default=True)
@click.option("--probs", default=None, help="Comma-separated p_0..p_m; default uniform.")
@click.option("--n", "level", default=6, show_default=True, help="Inflation level of the sampled words.")
@click.option("--kmax", default=3.0, show_default=True)
@click.option("--grid", default=2000, show_default=True, help="Uniform grid points on [0, kmax].")
@click.option("--samples", default=1000, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "txt"]), default="csv", show_default=True)
@click.option("--misprint-mode", is_flag=True,
              help="Diagnostic: use the divergent conjugation in the variance recursion.")
def diffract_cmd(m, probs, level, kmax, grid, samples, seed, out, fmt, misprint_mode):
    """Sampled diffraction spectrum with analytic columns where available (m=1)."""
    seed = _default_seed() if seed is None else seed
    p = _parse_probs(probs, m) if probs else np.full(m + 1, 1.0 / (m + 1))
    table = diffraction.diffraction_table(
        m, p, level, k_max=kmax, grid_points=grid, samples=samples, seed=seed,
        misprint=misprint_mode,
    )
    if out:
        diffraction.spectrum_export(table, out, fmt)
    else:
        import tempfile

        fd, path = tempfile.mkstemp(suffix=f".{fmt}")
        os.close(fd)
        try:
            diffraction.spectrum_export(table, path, fmt)
            with open(path, "r", encoding="ascii") as fh:
                click.echo(fh.read(), nl=False)
        finally:
            os.unlink(path)


@cli.command("validate")
@click.option("--misprint-mode", is_flag=True,
              help="Also demonstrate the divergent conjugation variant (expected-divergent).")
@click.option("--quick", is_flag=True, help="Shrink the Monte Carlo checks for a fast pass.")
def validate_cmd(misprint_mode, quick):
    """Run the cross-validation suite; exit 0 only if every check passes."""
    results = run_checks(misprint_demo=misprint_mode, quick=quick)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{status} {r.name} ({r.seconds:.1f}s): {r.detail}")
        failed += not r.passed
    if failed:
        click.echo(f"{failed} of {len(results)} checks failed", err=True)
        raise ValidationFailure(failed)
    click.echo(f"all {len(results)} checks passed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except ValidationFailure:
        return 3
    except (ResourceLimitError, NumericError, OverflowError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
