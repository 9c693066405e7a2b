import numpy as np
import pytest

from noblemeans.words import (
    NobleMeansFamily,
    check_probabilities,
    codes_to_word,
    conjugate_multiplier,
    make_rng,
    multiplier,
    subword,
    word_to_codes,
)


def test_code_roundtrip():
    for word in ("", "a", "b", "abba", "aababb"):
        assert codes_to_word(word_to_codes(word)) == word


def test_codes_are_lexicographic():
    assert word_to_codes("ab").tolist() == [0, 1]


def test_bad_letters_rejected():
    with pytest.raises(ValueError):
        word_to_codes("abc")


def test_subword_inclusive_bounds():
    assert subword("ababa", 1, 3) == "bab"
    assert subword("ababa", 0, 0) == "a"
    assert len(subword("ababa", 1, 3)) == 3
    for i, j in [(-1, 2), (3, 2), (0, 5)]:
        with pytest.raises(ValueError):
            subword("ababa", i, j)


@pytest.mark.parametrize("m", range(1, 8))
def test_family_constants(m):
    family = NobleMeansFamily(m)
    lam, conj = family.multiplier, family.conjugate
    assert lam + conj == pytest.approx(m, abs=1e-12)
    assert lam * conj == pytest.approx(-1.0, abs=1e-12)
    assert lam > 1 > 0 > conj > -1
    assert family.root == pytest.approx(lam - conj, abs=1e-12)
    assert multiplier(m) == lam and conjugate_multiplier(m) == conj


def test_family_requires_positive_integer():
    for bad in (0, -1, 1.5):
        with pytest.raises(ValueError):
            NobleMeansFamily(bad)


def test_probability_validation():
    p = check_probabilities([0.25, 0.75], m=1)
    assert p.tolist() == [0.25, 0.75]
    with pytest.raises(ValueError):
        check_probabilities([0.5, 0.6], m=1)
    with pytest.raises(ValueError):
        check_probabilities([0.5, 0.5, 0.0], m=1)
    with pytest.raises(ValueError):
        check_probabilities([-0.1, 1.1], m=1)
    with pytest.raises(ValueError):
        check_probabilities([1.0, 0.0], m=1, strict=True)
    assert check_probabilities([1.0, 0.0], m=1).tolist() == [1.0, 0.0]


def test_rng_reproducible():
    a = make_rng(123).integers(0, 1 << 32, size=8)
    b = make_rng(123).integers(0, 1 << 32, size=8)
    assert np.array_equal(a, b)
