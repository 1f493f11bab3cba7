import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectra_qkit import (FormalSeries, ModularParameter, QProductSpec, TruncationPolicy, enumerate_partitions,
                          eta, eta_series, numeric_qproduct, partition_gf, series_qproduct, weber_f,
                          weber_f_eta_quotient, weber_f_eta_quotient_series, weber_f_series)
from spectra_qkit.errors import BudgetError, DomainError, GridError

I = ModularParameter(0.0, 1.0)
EULER = QProductSpec(start=1, sign=-1)


def brute_product(spec, count):
    """Factor-by-factor integer expansion, independent of series_qproduct."""
    def times(a, b):
        return [sum(a[j] * b[i - j] for j in range(i + 1)) for i in range(count)]

    coeffs = [1] + [0] * (count - 1)
    for m in range(max(spec.start, 1), count):
        if spec.odd_only and m % 2 == 0:
            continue
        w = spec.exponent_weight(m)
        factor = [0] * count
        if w > 0:
            factor[0], factor[m] = 1, spec.sign
        else:
            # 1 / (1 + s q^m) = sum_k (-s)^k q^{mk}
            for k in range(0, count, m):
                factor[k] = (-spec.sign) ** (k // m)
        for _ in range(abs(w)):
            coeffs = times(coeffs, factor)
    return coeffs


def test_euler_pentagonal_pattern():
    assert series_qproduct(EULER, 6).coefficients() == [1, -1, -1, 0, 0, 1]


def test_order_one_is_identically_one():
    assert series_qproduct(EULER, 1).is_one()


def test_euler_product_times_partitions_is_one():
    for order in (1, 5, 20, 40):
        assert (series_qproduct(EULER, order) * partition_gf(order)).is_one()


def test_off_grid_shift_rejected():
    with pytest.raises(GridError):
        series_qproduct(QProductSpec(start=1, shift=Fraction(1, 5)), 4)


def test_nonpositive_first_exponent_rejected():
    with pytest.raises(DomainError):
        QProductSpec(start=0, shift=Fraction(0))
    with pytest.raises(DomainError):
        QProductSpec(start=0, shift=Fraction(-1, 2))


@given(st.integers(0, 3), st.sampled_from([1, -1]), st.booleans(), st.booleans(), st.integers(-2, 2))
def test_series_matches_brute_expansion(start, sign, weighted, odd_only, power):
    if start == 0:
        start = 1
    spec = QProductSpec(start=start, sign=sign, weighted=weighted, odd_only=odd_only, power=power)
    assert series_qproduct(spec, 15).coefficients(15) == brute_product(spec, 15)


def test_numeric_euler_matches_series_at_i():
    value = numeric_qproduct(EULER, I).value
    assert abs(value - series_qproduct(EULER, 12).evaluate(I)) < 1e-12


def test_numeric_tends_to_one_as_im_grows():
    assert abs(numeric_qproduct(EULER, ModularParameter(0.1, 40.0)).value - 1) < 1e-15


def test_numeric_tail_is_honest():
    spec = QProductSpec(start=1, shift=Fraction(1, 2), sign=1, weighted=True)
    tau = ModularParameter(0.2, 0.3)
    coarse = numeric_qproduct(spec, tau, TruncationPolicy(tol=1e-6))
    fine = numeric_qproduct(spec, tau, TruncationPolicy(tol=1e-15))
    assert abs(coarse.value - fine.value) <= coarse.tail + fine.tail


def test_numeric_budget_error_when_cutoff_too_small():
    with pytest.raises(BudgetError):
        numeric_qproduct(EULER, ModularParameter(0.0, 0.01), TruncationPolicy(cutoff=10))


def test_im_tau_must_be_positive():
    with pytest.raises(DomainError):
        ModularParameter(0.0, 0.0)


@given(st.floats(-0.5, 0.5), st.floats(0.12, 1.0), st.integers(1, 2), st.sampled_from([Fraction(0), Fraction(1, 2)]),
       st.sampled_from([1, -1]))
def test_numeric_and_series_agree_where_q_is_small(re, im, start, shift, sign):
    tau = ModularParameter(re, im)
    spec = QProductSpec(start=start, shift=shift, sign=sign)
    order = 40
    s = series_qproduct(spec, order)
    x = abs(tau.q)
    # coefficients of these products are bounded by p(n) <= exp(pi sqrt(2n/3)); tail of the series beyond order
    tail = sum(math.exp(math.pi * math.sqrt(2 * n / 3)) * x ** n for n in range(order, 400))
    assert abs(numeric_qproduct(spec, tau).value - s.evaluate(tau)) < tail + 1e-12


def test_partition_numbers():
    assert partition_gf(6).coefficients() == [1, 1, 2, 3, 5, 7]
    assert partition_gf(1)[0] == 1


def test_partition_gf_matches_enumeration():
    gf = partition_gf(31)
    for n in range(31):
        assert gf[n] == len(enumerate_partitions(n))


def test_enumerate_four():
    assert enumerate_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert enumerate_partitions(0) == [()]


def test_euler_distinct_equals_odd():
    assert len(enumerate_partitions(6, "distinct")) == len(enumerate_partitions(6, "odd")) == 4
    for n in range(25):
        assert len(enumerate_partitions(n, "distinct")) == len(enumerate_partitions(n, "odd"))


@given(st.integers(0, 14), st.sampled_from(["all", "distinct", "odd", "distinct-odd"]))
def test_partitions_are_valid_and_unique(n, constraint):
    parts = enumerate_partitions(n, constraint)
    assert len(set(parts)) == len(parts)
    for p in parts:
        assert sum(p) == n
        assert list(p) == sorted(p, reverse=True)
        if "odd" in constraint:
            assert all(x % 2 for x in p)
        if "distinct" in constraint:
            assert len(set(p)) == len(p)


def test_unknown_constraint_rejected():
    with pytest.raises(DomainError):
        enumerate_partitions(3, "even")


def test_eta_offset_is_exact():
    assert eta_series(5).offset == Fraction(1, 24)


def test_eta_numeric_matches_series():
    assert abs(eta(I).value - eta_series(10).evaluate(I)) < 1e-12


def test_eta_24_over_q_is_euler_product_24():
    lhs = (eta_series(10) ** 24).shift(-1)
    rhs = series_qproduct(QProductSpec(start=1, sign=-1, power=24), 10)
    assert lhs == rhs


def test_f_triple_is_one_as_series():
    product = weber_f_series(1, 20) * weber_f_series(2, 20) * weber_f_series(3, 20)
    assert product.is_one()


def test_f1_f2_is_odd_euler_product():
    lhs = weber_f_series(1, 12) * weber_f_series(2, 12)
    rhs = series_qproduct(QProductSpec(start=1, sign=-1, odd_only=True), 12).shift(Fraction(-1, 24))
    assert lhs.agrees_with(rhs)


@pytest.mark.parametrize("index", [1, 2, 3])
def test_product_and_eta_quotient_forms_agree(index):
    assert abs(weber_f(index, I).value - weber_f_eta_quotient(index, I).value) < 1e-10
    assert weber_f_series(index, 8).agrees_with(weber_f_eta_quotient_series(index, 8))


def test_f_index_validated():
    with pytest.raises(DomainError):
        weber_f(4, I)


def test_m_base_one_breaks_the_triple():
    product = weber_f_series(1, 6, m_base=1) * weber_f_series(2, 6, m_base=1) * weber_f_series(3, 6, m_base=1)
    assert not product.is_one()
    assert product[1] == 0 and product[2] == 1
