"""Functional relations, boundary tables, growth rates, and recurrences."""

import doctest
from fractions import Fraction

import pytest

import raisepeel.tq
from raisepeel.qfield import Q_GEN
from raisepeel.tq import (
    a1_prime_seq,
    a1_second_seq,
    a1_seq,
    a2_prime_seq,
    a2_second_seq,
    a2_seq,
    bae_residuals,
    bethe_roots,
    boundary_values,
    c_constant,
    derivative_worksheet,
    hypergeometric_check,
    lambda_alpha,
    lambda_alpha_formula,
    lambda_beta,
    lambda_beta_formula,
    lambda_from_roots,
    p_poly,
    q_poly,
    recurrence_check,
    tq_residual,
    verify_tq,
    verify_wronskian,
)

F = Fraction
ORDERS = range(1, 13)


def test_polynomials_small_orders():
    assert q_poly(1).rational_coeffs() == (F(-1, 2), F(1))
    assert p_poly(1).rational_coeffs() == (F(-2), F(1))
    assert q_poly(2).rational_coeffs() == (F(2, 5), F(-8, 5), F(1))
    # the companion polynomial is the reversed one over its value at zero
    for n in (1, 2, 3, 4):
        q = q_poly(n)
        rev = q.reversed_coeffs()
        assert p_poly(n) == rev.exact_div(
            type(rev)([q.rational_coeffs()[0]]))


@pytest.mark.parametrize("n", ORDERS)
def test_functional_relations(n):
    report = verify_tq(n)
    assert report.passed
    assert report.q_relation_zero and report.p_relation_zero
    assert report.q_monic_degree and report.p_is_reversed_q
    assert report.product_condition and report.transfer_value_at_q
    assert tq_residual(n, "q").degree == -1
    assert tq_residual(n, "p").degree == -1


def test_relation_breaks_under_perturbation():
    # negative control: bump one coefficient and the twisted product
    # condition Q(1/q) = q (q-1)^n Q(q) must fail
    n = 2
    q = Q_GEN
    poly = q_poly(n)
    coeffs = list(poly.coeffs)
    coeffs[1] = coeffs[1] + F(1, 7)
    broken = type(poly)(coeffs)
    lhs = broken(q.inverse())
    rhs = q * (q - 1) ** n * broken(q)
    assert lhs != rhs
    intact = poly(q.inverse()) == q * (q - 1) ** n * poly(q)
    assert intact


@pytest.mark.parametrize("n", ORDERS)
def test_wronskian_identities(n):
    report = verify_wronskian(n)
    assert report.passed


@pytest.mark.parametrize("n", ORDERS)
def test_boundary_table(n):
    report = boundary_values(n)
    assert len(report.entries) == 12
    assert report.passed
    assert report.factorial_descent_ok
    assert report.derivative_identities_ok
    for entry in report.entries:
        if entry.applicable:
            assert entry.direct == entry.closed, entry.name


def test_boundary_table_n1_degenerate_entries_flagged():
    report = boundary_values(1)
    notes = [e for e in report.entries if e.note]
    # the second-derivative entries at the inverse point degenerate at
    # the smallest order; they stay in the table but carry a note
    assert notes
    assert all(e.passed for e in report.entries)


@pytest.mark.parametrize("n", ORDERS)
def test_derivative_worksheet(n):
    assert derivative_worksheet(n).passed


@pytest.mark.parametrize("n", ORDERS)
def test_hypergeometric_forms(n):
    assert hypergeometric_check(n).passed


def test_growth_rate_values():
    assert lambda_alpha(1) == F(1, 2)
    assert lambda_beta(1) == F(1)
    assert lambda_alpha(2) == F(1, 5)
    assert lambda_beta(2) == F(12, 5)
    assert lambda_alpha(3) == F(9, 70)
    assert lambda_beta(3) == F(129, 35)


@pytest.mark.parametrize("n", range(1, 21))
def test_growth_rates_match_closed_forms(n):
    assert lambda_alpha(n) == lambda_alpha_formula(n)
    assert lambda_beta(n) == lambda_beta_formula(n)
    assert lambda_alpha_formula(n) == F(3 * n, 2 * (4 * n * n - 1))
    assert lambda_beta_formula(n) == F(n * (5 * n * n - 2), 4 * n * n - 1)


def test_constant_c_is_rational_and_nonzero():
    for n in range(1, 9):
        assert c_constant(n) != 0


def test_recurrence_seeds():
    assert (a1_seq(1), a1_seq(2)) == (F(2), F(5))
    assert (a2_seq(1), a2_seq(2)) == (F(1), F(4))
    assert (a1_prime_seq(1), a1_prime_seq(2)) == (F(1), F(5, 3))
    assert (a2_prime_seq(1), a2_prime_seq(2)) == (F(0), F(2, 3))
    assert (a1_second_seq(2), a1_second_seq(3)) == (F(1), F(20, 13))
    assert (a2_second_seq(2), a2_second_seq(3)) == (F(0), F(7, 13))


def test_recurrences_to_order_thirty():
    report = recurrence_check(n_max=30)
    assert report.passed


def test_difference_identity():
    for n in range(1, 25):
        assert a1_seq(n) - a2_seq(n) == 1


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_roots_and_energies(n):
    report = lambda_from_roots(n)
    assert report.passed
    assert report.max_bae_residual < 1e-8
    assert report.energy_target == -1.5 * n
    assert abs(report.energy - report.energy_target) < 1e-8
    assert len(report.roots) == n
    residuals = bae_residuals(n, bethe_roots(n))
    assert max(residuals) < 1e-8


def test_docstring_examples():
    failures, _ = doctest.testmod(raisepeel.tq, verbose=False)
    assert failures == 0
