from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from rigiditylab import (
    ExactLength,
    FactorizationTooLargeError,
    find_integer_relation,
    is_q_independent,
    normalize_sqrt,
    q_basis,
)
from rigiditylab.lengths import relation_residual_exact

SQUAREFREE = [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23]


def render(ell: ExactLength, digits: int = 30) -> str:
    with mp.workdps(digits + 10):
        return mp.nstr(ell.value_mp(), digits + 1)


def test_normalize_examples():
    assert normalize_sqrt(8) == ExactLength(Fraction(2), 2)
    assert normalize_sqrt(1) == ExactLength(Fraction(1), 1)
    assert normalize_sqrt(Fraction(9, 2)) == ExactLength(Fraction(3, 2), 2)


def test_normalize_roundtrip_random():
    rng = np.random.default_rng(23)
    for _ in range(200):
        q = Fraction(int(rng.integers(1, 5000)), int(rng.integers(1, 5000)))
        ell = normalize_sqrt(q)
        assert ell.squared() == q
        assert ell.r > 0


def test_normalize_large_prime_cofactor():
    p = 15485863  # prime beyond the trial-division bound
    ell = normalize_sqrt(4 * p)
    assert ell == ExactLength(Fraction(2), p)


def test_normalize_square_of_large_prime():
    p = 1000003
    assert normalize_sqrt(p * p) == ExactLength(Fraction(p), 1)


def test_normalize_large_semiprime():
    p, q = 1000003, 1000033
    ell = normalize_sqrt(p * q)
    assert ell == ExactLength(Fraction(1), p * q)


def test_normalize_budget_exceeded():
    p = 2000003  # p**3 is below 2**63 but cannot be certified squarefree
    with pytest.raises(FactorizationTooLargeError):
        normalize_sqrt(p**3)
    with pytest.raises(FactorizationTooLargeError):
        normalize_sqrt(2**63)


def test_q_basis_examples():
    span = q_basis([normalize_sqrt(2), normalize_sqrt(8), normalize_sqrt(3)])
    assert [b.d for b in span.basis] == [2, 3]
    assert span.coefficients == [
        [Fraction(1), Fraction(0)],
        [Fraction(2), Fraction(0)],
        [Fraction(0), Fraction(1)],
    ]

    span = q_basis([ExactLength(Fraction(1), 2)] * 12)
    assert [b.d for b in span.basis] == [2]
    assert all(row == [Fraction(1)] for row in span.coefficients)

    span = q_basis([ExactLength(Fraction(3), 1), ExactLength(Fraction(5, 2), 1)])
    assert [b.d for b in span.basis] == [1]
    assert [row[0] for row in span.coefficients] == [Fraction(3), Fraction(5, 2)]


def test_q_basis_reconstruction_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        lengths = [
            ExactLength(
                Fraction(int(rng.integers(1, 30)), int(rng.integers(1, 12))),
                int(SQUAREFREE[rng.integers(0, len(SQUAREFREE))]),
            )
            for _ in range(int(rng.integers(1, 10)))
        ]
        span = q_basis(lengths)
        for row, ell in zip(span.coefficients, lengths):
            # exactly one nonzero coefficient, on the length's own radicand,
            # so the row reconstructs its length exactly
            assert sum(1 for c in row if c) == 1
            j = next(k for k, c in enumerate(row) if c)
            assert span.basis[j].d == ell.d
            assert row[j] == ell.r


def test_independence_examples():
    assert (
        is_q_independent([normalize_sqrt(2), normalize_sqrt(3), normalize_sqrt(5)]).kind
        == "independent_exact"
    )
    verdict = is_q_independent([normalize_sqrt(2), normalize_sqrt(8)])
    assert verdict.kind == "dependent"
    assert verdict.relation == (2, -1)
    verdict = is_q_independent(
        [ExactLength(Fraction(1), 1), ExactLength(Fraction(2), 1)]
    )
    assert verdict.relation == (2, -1)


def test_relation_annihilates_exactly():
    lengths = [normalize_sqrt(Fraction(9, 2)), normalize_sqrt(2), normalize_sqrt(5)]
    verdict = is_q_independent(lengths)
    assert verdict.kind == "dependent"
    assert relation_residual_exact(lengths, verdict.relation)


def test_find_relation_examples():
    assert find_integer_relation([1.0, 0.5], height=10**3) == (1, -2)

    with mp.workdps(40):
        s2 = mp.nstr(mp.sqrt(2), 31)
        s3 = mp.nstr(mp.sqrt(3), 31)
        one_plus = mp.nstr(1 + mp.sqrt(2), 31)
    assert find_integer_relation(["1.0", s2, one_plus]) == (1, 1, -1)
    assert find_integer_relation(["1.0", s2, s3], height=10**6) is None


def test_find_relation_input_validation():
    with pytest.raises(ValueError):
        find_integer_relation([])
    with pytest.raises(ValueError):
        find_integer_relation([1.0] * 65)
    with pytest.raises(ValueError):
        find_integer_relation([float("nan"), 1.0])


def test_heuristic_agrees_with_exact_random():
    rng = np.random.default_rng(17)
    for trial in range(25):
        n = int(rng.integers(2, 7))
        with_duplicate = trial % 2 == 0
        radicands = list(rng.choice(SQUAREFREE[1:], size=n, replace=False))
        if with_duplicate:
            radicands[-1] = radicands[0]
        lengths = [
            ExactLength(
                Fraction(int(rng.integers(1, 12)), int(rng.integers(1, 8))), int(d)
            )
            for d in radicands
        ]
        exact = is_q_independent(lengths)
        numeric = find_integer_relation([render(ell) for ell in lengths])
        if exact.kind == "dependent":
            assert numeric is not None
            assert relation_residual_exact(lengths, numeric)
        else:
            assert numeric is None
