# tests/test_mellin.py
import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special

from backend.errors import ConvergenceError, DomainError, NoContourError, PoleError
from backend.mellin import (
    BivariateFoxHSpec,
    ContourSpec,
    FoxHSpec,
    GammaTerm,
    choose_bivariate_contours,
    choose_contour,
    clamp_probability,
    clip_probability,
    eval_bivariate_fox_h,
    eval_fox_h,
    exp_integral_Ei,
    exp_integral_En,
    integrate_fox_h,
    log_gamma_complex,
    scaled_exp_integral_En,
)
from backend.channels import AlphaMuParams, alpha_mu_cdf_closed
from backend.mellin import fox_h
from backend.mellin.quadrature import integrate_panels


# --------------------------------------------------
# special functions
# --------------------------------------------------
def test_log_gamma_matches_lgamma_on_the_real_axis():
    for x in (0.3, 1.0, 2.5, 17.0):
        assert log_gamma_complex(x).real == pytest.approx(math.lgamma(x), abs=1e-12)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_log_gamma_raises_at_poles(z):
    with pytest.raises(PoleError):
        log_gamma_complex(z)


def test_log_gamma_off_axis_is_not_a_pole():
    v = log_gamma_complex(-1.0 + 0.5j)
    assert math.isfinite(v.real)


def test_log_gamma_known_values():
    assert abs(log_gamma_complex(1.0)) < 1e-15
    assert log_gamma_complex(0.5).real == pytest.approx(0.5723649429, abs=1e-10)


@pytest.mark.parametrize("z", [2 + 3j, 0.3 - 4.5j, -2.5 + 0.1j])
def test_log_gamma_complex_against_mpmath(z):
    ref = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
    v = log_gamma_complex(z)
    assert v.real == pytest.approx(ref.real, abs=1e-12)
    assert v.imag == pytest.approx(ref.imag, abs=1e-12)


def test_exponential_integral_known_values():
    e1 = exp_integral_En(1, 1.0)
    assert e1 == pytest.approx(0.2193839344, abs=1e-10)
    assert exp_integral_Ei(-1.0) == pytest.approx(-e1, abs=1e-14)
    assert exp_integral_Ei(1.0) == pytest.approx(1.8951178164, abs=1e-10)


def test_ei_is_undefined_at_zero():
    with pytest.raises(DomainError):
        exp_integral_Ei(0.0)


def test_real_order_exponential_integral_against_definition():
    n, x = 2.5, 1.3
    ref, _ = integrate.quad(lambda t: math.exp(-x * t) * t ** (-n), 1.0, math.inf, epsabs=1e-14)
    assert exp_integral_En(n, x) == pytest.approx(ref, rel=1e-10)


def test_integer_order_exponential_integral_uses_scipy():
    assert exp_integral_En(1, 0.7) == pytest.approx(float(special.exp1(0.7)), rel=1e-14)


def test_scaled_exponential_integral_for_large_argument():
    x = 1000.0
    expected = (1.0 - 1.0 / x + 2.0 / x ** 2 - 6.0 / x ** 3) / x
    assert scaled_exp_integral_En(1, x) == pytest.approx(expected, rel=1e-9)


def test_exponential_integral_domain():
    with pytest.raises(DomainError):
        exp_integral_En(1, 0.0)
    with pytest.raises(DomainError):
        exp_integral_En(0, 1.0)


# --------------------------------------------------
# parameter validation
# --------------------------------------------------
def test_gamma_term_needs_positive_scale():
    with pytest.raises(DomainError):
        GammaTerm(0.5, 0.0)


def test_orders_must_fit_the_parameter_lists():
    with pytest.raises(DomainError):
        FoxHSpec(2, 0, [], [(0.0, 1.0)])


def test_contour_spec_validation():
    with pytest.raises(DomainError):
        ContourSpec(0.5, -1.0, 1e-8, 1000)
    with pytest.raises(DomainError):
        ContourSpec(0.5, 8.0, 1.5, 1000)


# --------------------------------------------------
# univariate reductions
# --------------------------------------------------
@pytest.mark.parametrize("z", [1e-3, 0.1, 1.0, 5.0, 30.0])
def test_h10_01_is_exponential(z):
    spec = FoxHSpec(1, 0, [], [(0.0, 1.0)])
    assert eval_fox_h(spec, z) == pytest.approx(math.exp(-z), abs=1e-10)


@pytest.mark.parametrize("b", [0.5, 1.0, 2.7])
def test_h10_01_with_shift_is_power_times_exponential(b):
    spec = FoxHSpec(1, 0, [], [(b, 1.0)])
    for z in (0.1, 1.0, 10.0):
        ref = z ** b * math.exp(-z)
        assert eval_fox_h(spec, z) == pytest.approx(ref, rel=1e-9)


def test_scale_parameter_rescales_the_argument():
    # (1/2 pi i) int Gamma(s/2) z^{-s} ds = 2 exp(-z^2)
    spec = FoxHSpec(1, 0, [], [(0.0, 0.5)])
    for z in (0.3, 1.0, 2.0):
        assert eval_fox_h(spec, z) == pytest.approx(2.0 * math.exp(-z * z), abs=1e-9)


def test_h11_11_is_rational():
    # Gamma(s) Gamma(1 - s) kernel gives 1/(1 + z)
    spec = FoxHSpec(1, 1, [(0.0, 1.0)], [(0.0, 1.0)])
    for z in (0.01, 0.5, 3.0, 200.0):
        assert eval_fox_h(spec, z) == pytest.approx(1.0 / (1.0 + z), rel=1e-7)


def test_full_line_integration_has_no_imaginary_residue():
    spec = FoxHSpec(1, 1, [(0.0, 1.0)], [(0.0, 1.0)])
    ev = integrate_fox_h(spec, 2.0, full_line=True)
    assert ev.value == pytest.approx(1.0 / 3.0, rel=1e-8)
    assert abs(ev.imag) < 1e-9


def test_first_evaluation_of_a_shape_checks_the_full_line(monkeypatch):
    monkeypatch.setattr(fox_h, "_SYMMETRY_CHECKED", set())
    spec = FoxHSpec(1, 1, [(0.0, 1.0)], [(0.0, 1.0)])
    first = integrate_fox_h(spec, 2.0)
    assert first.half_line
    assert (1, 1, 1, 1) in fox_h._SYMMETRY_CHECKED
    assert abs(first.imag) < 1e-9
    calls = []
    monkeypatch.setattr(fox_h, "_check_symmetry", lambda *args: calls.append(args))
    assert integrate_fox_h(spec, 0.5).value == pytest.approx(2.0 / 3.0, rel=1e-7)
    assert calls == []


class SkewedSpec(FoxHSpec):
    """Exponential kernel with a magnitude that differs above and below the real axis."""

    def log_kernel(self, s):
        return super().log_kernel(s) + 0.5 * np.tanh(np.imag(s))


def test_asymmetric_integrand_is_rejected(monkeypatch):
    monkeypatch.setattr(fox_h, "_SYMMETRY_CHECKED", set())
    with pytest.raises(ConvergenceError):
        integrate_fox_h(SkewedSpec(1, 0, [], [(0.0, 1.0)]), 1.0)
    assert fox_h._SYMMETRY_CHECKED == set()


def test_contour_placements_agree():
    spec = FoxHSpec(1, 1, [(1.0, 1.0)], [(1.5, 0.8), (0.0, 1.0)])
    a = integrate_fox_h(spec, 0.7, choose_contour(spec, 0.7, placement="default")).value
    b = integrate_fox_h(spec, 0.7, choose_contour(spec, 0.7, placement="saddle")).value
    assert a == pytest.approx(b, abs=1e-9)


def test_evaluation_reports_nodes_and_error():
    ev = integrate_fox_h(FoxHSpec(1, 0, [], [(0.0, 1.0)]), 1.0)
    assert ev.nodes > 0
    assert 0.0 <= ev.error < 1e-6


@pytest.mark.parametrize("t,s,g", [(0.5, 3.0, 1.0), (1.2, 4.5, 2.5), (0.0, 2.5, 0.3)])
def test_beta_integral_identity(t, s, g):
    # int_0^inf z^t (z + g)^{-s} dz = g^{t-s+1} B(t+1, s-t-1)
    ref = g ** (t - s + 1.0) * special.beta(t + 1.0, s - t - 1.0)
    direct, _ = integrate.quad(lambda z: z ** t * (z + g) ** (-s), 0.0, math.inf, epsabs=1e-14, epsrel=1e-12)
    assert direct == pytest.approx(ref, rel=1e-8)
    # the integrand factor (1 + x)^{-s} = H^{1,1}_{1,1}[x | (1-s, 1); (0, 1)] / Gamma(s)
    spec = FoxHSpec(1, 1, [(1.0 - s, 1.0)], [(0.0, 1.0)])
    for x in (0.2, 3.0):
        assert eval_fox_h(spec, x) / math.gamma(s) == pytest.approx((1.0 + x) ** (-s), rel=1e-8)


def test_single_pole_family_gets_unit_offset():
    contour = choose_contour(FoxHSpec(1, 0, [], [(0.0, 1.0)]), 1.0, placement="default")
    assert contour.sigma == 1.0


@pytest.mark.parametrize("placement", ["default", "saddle"])
def test_alpha_mu_cdf_contour_separates_the_poles(placement):
    p = AlphaMuParams(1.6, 1.5, 10.0)
    spec = p.cdf_spec()
    # Gamma(mu + nu s) poles at -(mu + k)/nu, Gamma(-s) poles at 0, 1, 2, ...
    lo, hi = spec.pole_interval()
    assert lo == pytest.approx(-1.5 / 1.25)
    assert hi == 0.0
    for g in (0.05, 5.0, 400.0):
        contour = choose_contour(spec, p.lam * g, placement=placement)
        assert lo < contour.sigma < hi
        value = p.kappa / p.lam * integrate_fox_h(spec, p.lam * g, contour).value
        assert value == pytest.approx(float(alpha_mu_cdf_closed(p, g)), abs=1e-8)


def test_overlapping_pole_families_have_no_contour():
    # Gamma(1 + s) has its rightmost left pole at -1; Gamma(1 - 2 - s) its leftmost right pole at -1
    spec = FoxHSpec(1, 1, [(2.0, 1.0)], [(1.0, 1.0)])
    with pytest.raises(NoContourError):
        choose_contour(spec, 1.0)
    with pytest.raises(NoContourError):
        eval_fox_h(spec, 1.0)


@pytest.mark.parametrize("z", [0.0, -1.0, math.inf])
def test_argument_must_be_positive(z):
    with pytest.raises(DomainError):
        eval_fox_h(FoxHSpec(1, 0, [], [(0.0, 1.0)]), z)


def test_unknown_placement_is_rejected():
    with pytest.raises(ValueError):
        choose_contour(FoxHSpec(1, 0, [], [(0.0, 1.0)]), 1.0, placement="leftmost")


# --------------------------------------------------
# panel quadrature
# --------------------------------------------------
def test_panels_integrate_polynomials_and_rows():
    res = integrate_panels(lambda x: np.stack([x ** 2, np.cos(x)], axis=1), 0.0, 1.0, 1e-12, 100_000)
    assert res.value[0] == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert res.value[1] == pytest.approx(math.sin(1.0), abs=1e-14)


def test_panels_raise_when_budget_is_exhausted():
    with pytest.raises(ConvergenceError) as info:
        integrate_panels(lambda x: np.sin(1.0 / (x + 1e-4)), 0.0, 1.0, 1e-13, 400, axis="s")
    assert info.value.axis == "s"


def test_panels_reject_non_finite_integrand():
    with pytest.raises(ConvergenceError):
        integrate_panels(lambda x: np.where(x > 0.5, np.inf, x), 0.0, 1.0, 1e-8, 10_000)


# --------------------------------------------------
# bivariate
# --------------------------------------------------
def test_bivariate_without_joint_block_factorises():
    spec = BivariateFoxHSpec([], FoxHSpec(1, 0, [], [(0.0, 1.0)]), FoxHSpec(1, 0, [], [(0.0, 1.0)]))
    for z1, z2 in ((0.5, 2.0), (1.0, 1.0)):
        assert eval_bivariate_fox_h(spec, z1, z2) == pytest.approx(math.exp(-z1 - z2), abs=1e-6)


@pytest.mark.parametrize("placement", ["default", "saddle"])
def test_bivariate_joint_block_against_closed_form(placement):
    # Gamma(s) Gamma(t) Gamma(2 - s - t) x^{-s} y^{-t} integrates to 1/(1 + x + y)^2
    spec = BivariateFoxHSpec([(-1.0, 1.0, 1.0)], FoxHSpec(1, 0, [], [(0.0, 1.0)]), FoxHSpec(1, 0, [], [(0.0, 1.0)]))
    for x, y in ((0.5, 0.5), (2.0, 0.3)):
        contours = choose_bivariate_contours(spec, x, y, placement=placement)
        sigma_s, sigma_t = contours[0].sigma, contours[1].sigma
        assert sigma_s > 0.0 and sigma_t > 0.0 and sigma_s + sigma_t < 2.0
        value = eval_bivariate_fox_h(spec, x, y, contours)
        assert value == pytest.approx(1.0 / (1.0 + x + y) ** 2, rel=1e-5)


def test_bivariate_joint_block_leaving_no_room():
    # sigma_s > 0, sigma_t > 0 and sigma_s + sigma_t < -1 cannot hold together
    spec = BivariateFoxHSpec([(2.0, 1.0, 1.0)], FoxHSpec(1, 0, [], [(0.0, 1.0)]), FoxHSpec(1, 0, [], [(0.0, 1.0)]))
    with pytest.raises(NoContourError):
        choose_bivariate_contours(spec, 1.0, 1.0)


# --------------------------------------------------
# probability clamping
# --------------------------------------------------
def test_clamp_absorbs_quadrature_noise_only():
    assert clamp_probability(1.0 + 1e-10, rel_tol=1e-9) == 1.0
    assert clamp_probability(-1e-10, rel_tol=1e-9) == 0.0
    assert clamp_probability(0.25) == 0.25
    with pytest.raises(ConvergenceError):
        clamp_probability(1.01, rel_tol=1e-9)


def test_clip_bounds_asymptotes():
    assert clip_probability(1.7) == 1.0
    assert clip_probability(-0.2) == 0.0
    with pytest.raises(ConvergenceError):
        clip_probability(math.nan)
