"""Number-theoretic closed forms checked against brute-force summation."""

from __future__ import annotations

import math

import pytest

from quditzx.gauss import (
    GammaValue,
    epsilon,
    gamma,
    gamma_oracle,
    gauss_sum,
    gauss_sum_oracle,
    gauss_sum_tilde,
    jacobi,
)
from quditzx.measure import MeasureContext

CLOSED_FORM_MODULI = [1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16]


def legendre_brute(k: int, p: int) -> int:
    # Euler criterion for odd prime p
    v = pow(k, (p - 1) // 2, p)
    return {0: 0, 1: 1, p - 1: -1}[v]


def test_jacobi_examples() -> None:
    assert jacobi(2, 15) == 1
    assert jacobi(0, 9) == 0
    for m in (1, 3, 5, 7, 9, 15):
        assert jacobi(1, m) == 1


def test_jacobi_matches_euler_criterion_on_primes() -> None:
    for p in (3, 5, 7, 11, 13):
        for k in range(-p, 2 * p):
            assert jacobi(k, p) == legendre_brute(k % p, p)


def test_jacobi_is_multiplicative_in_the_denominator() -> None:
    for k in range(-10, 20):
        assert jacobi(k, 15) == jacobi(k, 3) * jacobi(k, 5)
        assert jacobi(k, 21) == jacobi(k, 3) * jacobi(k, 7)


def test_jacobi_rejects_even_or_nonpositive_modulus() -> None:
    with pytest.raises(ValueError):
        jacobi(1, 4)
    with pytest.raises(ValueError):
        jacobi(1, 0)
    with pytest.raises(ValueError):
        jacobi(1, -3)


def test_epsilon_values() -> None:
    assert epsilon(5) == 1
    assert epsilon(3) == 1j
    assert epsilon(1) == 1
    for m in (3, 5, 7, 9):
        assert abs(epsilon(m) ** 2 - jacobi(-1, m)) < 1e-15
    with pytest.raises(ValueError):
        epsilon(4)


def test_gauss_sum_examples() -> None:
    assert abs(gauss_sum(1, 0, 4) - (2 + 2j)) < 1e-12
    assert abs(gauss_sum(1, 0, 3) - 1j * math.sqrt(3)) < 1e-12
    assert gauss_sum(2, 1, 4) == 0


def test_gauss_sum_rejects_twice_odd_modulus() -> None:
    for N in (2, 6, 10, 14):
        with pytest.raises(ValueError):
            gauss_sum(1, 0, N)
    with pytest.raises(ValueError):
        gauss_sum(1, 0, 0)
    gauss_sum_oracle(1, 0, 6)  # oracle is unrestricted


@pytest.mark.parametrize("N", CLOSED_FORM_MODULI)
def test_gauss_sum_matches_oracle_on_grid(N: int) -> None:
    for r in range(2 * N):
        for s in range(2 * N):
            closed = gauss_sum(r, s, N)
            brute = gauss_sum_oracle(r, s, N)
            assert abs(closed - brute) < 1e-9, (r, s, N)


def test_gauss_sum_handles_negative_arguments() -> None:
    for N in (3, 4, 8, 9):
        for r in range(-N, 0):
            for s in range(-N, 0):
                assert abs(gauss_sum(r, s, N) - gauss_sum_oracle(r, s, N)) < 1e-9


def test_twice_odd_modulus_vanishes_for_odd_combination() -> None:
    for M in (1, 3, 5):
        for r in range(2 * M):
            for s in range(2 * M):
                if (M * r + s) % 2 == 1:
                    assert abs(gauss_sum_oracle(r, s, 2 * M)) < 1e-9


def test_full_sum_splits_through_half_exponent_variant() -> None:
    for M in range(1, 7):
        for r in range(M):
            for s in range(M):
                lhs = gauss_sum_oracle(r, s, 2 * M)
                rhs = (1 + (-1) ** ((M * r + s) % 2)) * gauss_sum_tilde(r, s, M)
                assert abs(lhs - rhs) < 1e-9


def test_gamma_examples() -> None:
    g = gamma(0, 0, MeasureContext(7))
    assert abs(g.value - math.sqrt(7)) < 1e-10
    assert g.magnitude_class == "sqrt_t" and g.t == 7

    g = gamma(0, 1, MeasureContext(2))
    assert abs(g.value - cmath_exp_quarter()) < 1e-10

    g = gamma(1, 2, MeasureContext(4))
    assert g.value == 0 and g.magnitude_class == "zero" and g.t == 2


def cmath_exp_quarter() -> complex:
    import cmath

    return cmath.exp(1j * cmath.pi / 4)


@pytest.mark.parametrize("dim", range(2, 13))
def test_gamma_matches_oracle_and_magnitude_law(dim: int) -> None:
    ctx = MeasureContext(dim)
    for a in range(-dim, 2 * dim):
        for b in range(-dim, 2 * dim):
            got = gamma(a, b, ctx)
            brute = gamma_oracle(a, b, ctx)
            assert abs(got.value - brute) < 1e-9, (a, b, dim)
            t = math.gcd(b, dim)
            assert got.t == t
            mag = abs(got.value)
            if got.magnitude_class == "zero":
                assert mag < 1e-10
            else:
                assert abs(mag - math.sqrt(t)) < 1e-10


def test_gamma_at_origin_is_sqrt_dim() -> None:
    for dim in range(2, 13):
        g = gamma(0, 0, MeasureContext(dim))
        assert abs(g.value - math.sqrt(dim)) < 1e-10


def test_gamma_unit_second_argument_has_unit_magnitude() -> None:
    for dim in range(2, 10):
        ctx = MeasureContext(dim)
        for u in range(1, dim):
            if math.gcd(u, dim) != 1:
                continue
            g = gamma(0, u, ctx)
            assert abs(g.value * g.value.conjugate() - 1) < 1e-9


def test_gamma_rejects_non_default_normalization() -> None:
    ctx = MeasureContext(3, nu=1.0)
    with pytest.raises(ValueError):
        gamma(0, 1, ctx)
    with pytest.raises(ValueError):
        gamma_oracle(0, 1, ctx)


def test_gamma_value_label() -> None:
    assert GammaValue(0j, "zero", 3).label() == "zero"
    assert GammaValue(1 + 0j, "sqrt_t", 4).label() == "sqrt_t(4)"
