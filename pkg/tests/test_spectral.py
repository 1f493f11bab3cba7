import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectra_qkit import (ModularParameter, QProductSpec, TruncationPolicy, ZeroIndex, generator_matrix, growth_check,
                          growth_samples, hyperbolic_action, numeric_qproduct, order_of_vanishing, ruelle,
                          verify_zero, z_gamma_from_logseries, z_gamma_logseries, z_gamma_product, z_ratio,
                          zeros_predicted)
from spectra_qkit.errors import CutoffError, DomainError, PoleError

TAU = ModularParameter(0.25, 1.0)
TAU2 = ModularParameter(0.3, 1.1)


def square_lattice_product(s, tau, k_max=25):
    """Z over the full square k1, k2 <= k_max with plain cmath, as an oracle for the diagonal truncation."""
    alpha, beta = tau.alpha, tau.beta
    value = 1
    for k1 in range(k_max + 1):
        for k2 in range(k_max + 1):
            value *= 1 - cmath.exp(1j * beta * (k1 - k2) - (k1 + k2 + s) * alpha)
    return value


def test_z_vanishes_at_zero():
    assert z_gamma_product(0, TAU).value == 0


@pytest.mark.parametrize("s", [2, 0.7 - 1.3j, 3 + 2j, -0.4 + 0.2j])
def test_product_matches_square_lattice_oracle(s):
    assert abs(z_gamma_product(s, TAU).value - square_lattice_product(s, TAU)) < 1e-12


def test_product_matches_logseries_at_two():
    assert abs(z_gamma_product(2, TAU).value - z_gamma_from_logseries(2, TAU).value) < 1e-10


def test_product_near_one_for_large_im_tau():
    assert abs(z_gamma_product(2, ModularParameter(0.1, 50.0)).value - 1) < 1e-12


def test_logseries_vanishes_for_large_re_s():
    assert abs(z_gamma_logseries(40, TAU).value) < 1e-100


def test_logseries_needs_positive_re_s():
    with pytest.raises(DomainError):
        z_gamma_logseries(-0.5, TAU)
    with pytest.raises(DomainError):
        z_gamma_logseries(0, TAU)


@given(st.floats(0.2, 5), st.floats(-4, 4), st.floats(-0.5, 0.5), st.floats(0.5, 2))
def test_conjugation_symmetry(re_s, im_s, re_tau, im_tau):
    tau = ModularParameter(re_tau, im_tau)
    s = complex(re_s, im_s)
    mirrored = tau.reflected()
    assert z_gamma_logseries(s.conjugate(), mirrored).value == pytest.approx(
        z_gamma_logseries(s, tau).value.conjugate(), abs=1e-13)
    assert z_gamma_product(s.conjugate(), mirrored).value == pytest.approx(
        z_gamma_product(s, tau).value.conjugate(), abs=1e-13)


@given(st.floats(0.5, 5), st.floats(-2, 2), st.sampled_from([TAU, TAU2, ModularParameter(0, 1)]))
def test_two_representations_agree(re_s, im_s, tau):
    s = complex(re_s, im_s)
    prod = z_gamma_product(s, tau)
    series = z_gamma_from_logseries(s, tau)
    assert abs(prod.value - series.value) <= prod.tail + series.tail + 1e-13


@pytest.mark.parametrize("s", [0.3 + 0.5j, 2, -1.7 + 0.4j])
def test_doubling_cutoff_stays_within_reported_tail(s):
    k = 6
    coarse = z_gamma_product(s, TAU, TruncationPolicy(cutoff=k, adaptive=False))
    fine = z_gamma_product(s, TAU, TruncationPolicy(cutoff=2 * k, adaptive=False))
    assert abs(coarse.value - fine.value) <= coarse.tail


def test_fixed_cutoff_must_cover_growing_factors():
    with pytest.raises(CutoffError):
        z_gamma_product(-5.5, TAU, TruncationPolicy(cutoff=3, adaptive=False))


def test_im_tau_domain():
    with pytest.raises(DomainError):
        ModularParameter(0.2, -1.0)


def test_ruelle_vanishes_at_zero():
    assert abs(ruelle(0, TAU2).value) == 0


def test_ruelle_is_alternating_product():
    z = [z_gamma_product(1 + k, TAU2).value for k in range(3)]
    assert ruelle(1, TAU2).value == pytest.approx(z[0] * z[2] / z[1], rel=1e-14)


def test_ruelle_pole_raises():
    # Z(1 + s) vanishes at s = -1
    with pytest.raises(PoleError):
        ruelle(-1, TAU2)


@pytest.mark.parametrize("xi", [1, Fraction(3, 2), Fraction(1, 2), 2])
def test_plain_ratio_is_q_product(xi):
    s = float(xi) * complex(1, -TAU.t)
    ell, eps = int(xi), xi - int(xi)
    if ell == 0:
        ell, eps = 0, Fraction(xi)
    expected = numeric_qproduct(QProductSpec(start=ell, shift=eps, sign=-1), TAU).value
    assert abs(z_ratio(s, TAU, "plain").value - expected) < 1e-9


def test_eta_shifted_ratio_with_half_period_flips_sign():
    s = complex(1, -TAU.t)
    expected = numeric_qproduct(QProductSpec(start=1, sign=1), TAU).value
    got = z_ratio(s, TAU, "eta-shifted", eta=TAU.half_period_eta).value
    assert abs(got - expected) < 1e-9


def test_eta_shifted_ratio_with_inverse_two_tau_does_not_flip():
    s = complex(1, -TAU.t)
    plus = numeric_qproduct(QProductSpec(start=1, sign=1), TAU).value
    assert abs(z_ratio(s, TAU, "eta-shifted").value - plus) > 1e-4


def test_purely_imaginary_tau_plain_ratio_steps_by_one():
    tau = ModularParameter(0.0, 1.2)
    s = 0.8 + 0.3j
    direct = z_gamma_product(s, tau).value / z_gamma_product(s + 1, tau).value
    assert z_ratio(s, tau).value == pytest.approx(direct, rel=1e-14)


def test_unknown_variant():
    with pytest.raises(DomainError):
        z_ratio(1, TAU, "sideways")


def test_order_of_vanishing_is_one():
    slopes = order_of_vanishing(TAU2)
    assert slopes[-1] == pytest.approx(1, abs=1e-3)


def test_zero_locations():
    assert ZeroIndex(0, 0, 0).location(TAU2) == 0
    beta_over_alpha = TAU2.beta / TAU2.alpha
    assert ZeroIndex(0, 1, 0).location(TAU2) == pytest.approx(complex(-1, beta_over_alpha))
    assert ZeroIndex(1, 0, 0).location(TAU2) == pytest.approx(complex(0, 2 * math.pi / TAU2.alpha))


def test_zeros_predicted_box():
    found = zeros_predicted(TAU2, (-0.5, 0.5, -0.5, 0.5))
    assert [idx for idx, _ in found] == [ZeroIndex(0, 0, 0)]
    assert zeros_predicted(TAU2, (0.2, 0.8, -1, 1)) == []


def test_zeros_predicted_ordering_and_membership():
    box = (-3, 1, -7, 7)
    found = zeros_predicted(TAU2, box)
    keys = [(i.k1 + i.k2, i.k1 - i.k2, i.n) for i, _ in found]
    assert keys == sorted(keys, key=lambda k: (k[0], -k[1], k[2])) or keys == sorted(keys)
    for _, z in found:
        assert -3 <= z.real <= 1 and -7 <= z.imag <= 7
    # brute force count over a generous index range
    brute = {(n, k1, k2) for k1 in range(4) for k2 in range(4 - k1) for n in range(-20, 21)
             if -7 <= ZeroIndex(n, k1, k2).location(TAU2).imag <= 7}
    assert {(i.n, i.k1, i.k2) for i, _ in found} == brute


def test_verify_zero_residuals():
    assert verify_zero(ZeroIndex(0, 0, 0), TAU2).residual == 0
    assert verify_zero(ZeroIndex(0, 1, 0), TAU2).residual < 1e-10
    assert verify_zero(ZeroIndex(1, 0, 0), TAU2).residual < 1e-10


def test_verify_zero_cutoff():
    with pytest.raises(CutoffError):
        verify_zero(ZeroIndex(0, 3, 3), TAU2, TruncationPolicy(cutoff=4))


def test_growth_on_positive_axis_is_bounded_by_one():
    samples = [1 + 0.5 * k for k in range(10)]
    fit = growth_check(TAU2, samples)
    assert fit.passed
    assert max(fit.log_moduli) <= 1e-12


def test_growth_fit_on_square():
    samples = growth_samples(TAU2, 100)
    fit = growth_check(TAU2, samples)
    assert fit.passed and math.isfinite(fit.c1) and fit.c2 >= 0
    assert len(fit.samples) == 100


def test_growth_excludes_samples_at_zeros():
    fit = growth_check(TAU2, [0j, 1 + 0j])
    assert fit.excluded == (0j,)


def test_identity_action():
    assert hyperbolic_action(np.eye(2), (0.3, -0.2, 1.5)) == pytest.approx((0.3, -0.2, 1.5))


def test_generator_dilates_by_e_alpha():
    u, v, w = hyperbolic_action(generator_matrix(TAU2), (0, 0, 1))
    assert (u, v) == pytest.approx((0, 0), abs=1e-12)
    assert w == pytest.approx(math.exp(TAU2.alpha))


def test_action_rejects_bad_input():
    with pytest.raises(DomainError):
        hyperbolic_action(np.eye(2), (0, 0, 0))
    with pytest.raises(DomainError):
        hyperbolic_action(2 * np.eye(2), (0, 0, 1))


coords = st.floats(-2, 2)


@st.composite
def sl2c(draw):
    a, b, c = (complex(draw(coords), draw(coords)) for _ in range(3))
    if abs(a) < 0.1:
        a += 1
    return np.array([[a, b], [c, (1 + b * c) / a]])


@given(sl2c(), sl2c(), coords, coords, st.floats(0.1, 3))
def test_action_composes(g, h, x, y, z):
    lhs = hyperbolic_action(g @ h, (x, y, z), det_tol=1e-8)
    rhs = hyperbolic_action(g, hyperbolic_action(h, (x, y, z), det_tol=1e-8), det_tol=1e-8)
    assert lhs[2] > 0
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)
