import math

import numpy as np
import pytest

from src.models.atlas import RegimeVerdict
from src.utils.errors import ParameterRangeError, ValidationError
from src.utils.exponent_atlas import (classify_singular_stability, exponent_bounds, exponent_report,
                                      joseph_lundgren_exponent, laplacian_sharp_exponent, lemma2_case,
                                      make_params, mu_bar, nu_bar, singular_coefficient, sphere_constant_rigidity,
                                      stability_intervals, subcritical_rates, theta, theta_roots)


@pytest.mark.parametrize('N, nu, p', [(2, 1.0, 3.0), (5, 0.0, 3.0), (5, -1.0, 3.0), (5, 1.0, 1.0), (5.5, 1.0, 3.0)])
def test_make_params_rejects_invalid_triples(N, nu, p):
    with pytest.raises(ValidationError):
        make_params(N, nu, p)


def test_derived_quantities():
    params = make_params(15, 6.5, 3.0)
    assert params.nu_star == 6.5
    assert params.mu == 0.0
    assert params.beta == pytest.approx(5.5)
    assert params.gamma == pytest.approx(12.0)
    assert singular_coefficient(params) == pytest.approx(math.sqrt(12.0))


def test_singular_coefficient_of_focus_triple():
    params = make_params(5, 1.5, 5.0)
    assert singular_coefficient(params) == pytest.approx(1.25 ** 0.25, rel=1e-12)
    assert singular_coefficient(params) == pytest.approx(1.05737, abs=1e-5)


def test_singular_coefficient_outside_existence_range():
    with pytest.raises(ParameterRangeError):
        singular_coefficient(make_params(5, 1.5, 1.2))


def test_bounds_with_infinite_upper_exponent():
    p_lower, p_sobolev, p_upper = exponent_bounds(10, 4.0)
    assert p_lower == pytest.approx(1.25)
    assert p_sobolev == pytest.approx(1.5)
    assert math.isinf(p_upper)


def test_nu_bar_and_mu_bar():
    assert nu_bar(10) == pytest.approx(4.0)
    assert mu_bar(10) == 0.0
    for N in (11, 15, 23):
        assert nu_bar(N) ** 2 - ((N - 2) / 2) ** 2 == pytest.approx(mu_bar(N), rel=1e-10)


def test_report_without_supercritical_roots():
    report = exponent_report(10, 4.0)
    assert math.isinf(report.p_upper)
    assert report.nu_bar == pytest.approx(4.0)
    assert report.p_minus is None and report.p_plus is None
    assert report.root_case == 'low-i'
    assert report.lemma2_case == 'c'
    assert len(report.stability_intervals) == 1


def test_laplacian_exponents_recovered_at_nu_star():
    report = exponent_report(11, 4.5)
    assert report.root_case == 'high-iii'
    assert report.lemma2_case == 'b'
    assert report.p_minus == pytest.approx(joseph_lundgren_exponent(11), rel=1e-9)
    assert report.p_minus == pytest.approx(6.92202, abs=1e-4)
    assert report.p_sharp == pytest.approx(laplacian_sharp_exponent(11), rel=1e-9)
    assert report.p_jl == report.p_minus


def test_two_supercritical_roots_between_nu_star_and_nu_bar():
    report = exponent_report(15, 6.6)
    assert report.root_case == 'high-ii'
    assert report.lemma2_case == 'a'
    assert report.p_sobolev < report.p_minus < report.p_plus
    upper = report.stability_intervals[-1]
    assert upper.lower_closed and upper.upper_closed
    assert upper.contains(report.p_minus) and upper.contains(report.p_plus)


def test_double_root_at_nu_bar():
    N = 15
    roots = theta_roots(N, nu_bar(N))
    assert roots.case == 'high-ii'
    assert roots.double_root
    report = exponent_report(N, nu_bar(N))
    assert report.p_minus == pytest.approx((N + 2) / (N - 10), rel=1e-8)
    assert report.p_plus == pytest.approx((N + 2) / (N - 10), rel=1e-8)


def test_no_supercritical_roots_above_nu_bar():
    report = exponent_report(15, 7.0)
    assert report.root_case == 'high-i'
    assert report.lemma2_case == 'c'
    assert report.p_minus is None


@pytest.mark.parametrize('N, nu', [(3, 0.2), (5, 1.0), (8, 2.0), (12, 5.5), (20, 12.0), (26, 11.0)])
def test_roots_solve_theta_equation(N, nu):
    nu_star = (N - 2) / 2
    roots = theta_roots(N, nu)
    for sigma in (roots.sigma_sharp, roots.sigma_minus, roots.sigma_plus):
        if sigma is not None:
            assert theta(sigma, nu_star) == pytest.approx(-2 * nu ** 2, abs=1e-9 * max(1.0, 2 * nu ** 2))


@pytest.mark.parametrize('N, nu, expected', [(12, 5.0, 'b'), (12, 5.02, 'a'), (12, 6.0, 'c'), (10, 4.0, 'c'),
                                             (8, 1.0, 'b'), (11, 4.5, 'b')])
def test_case_labels(N, nu, expected):
    assert lemma2_case(N, nu) == expected


def test_ordering_chain_on_grid():
    for N in range(3, 25):
        nu_star = (N - 2) / 2
        for nu in np.linspace(0.1, 2 * max(nu_star, 1.0), 9):
            r = exponent_report(N, float(nu))
            assert 1 < r.p_lower < r.p_sharp < r.p_sobolev
            if r.p_minus is not None:
                assert r.p_sobolev < r.p_minus
                assert r.p_minus < r.p_upper
            if r.p_plus is not None:
                assert r.p_minus <= r.p_plus < r.p_upper


def test_inequality_and_intervals_agree():
    for N in (3, 6, 11, 15, 24):
        for nu in np.linspace(0.3, N / 2 + 1.5, 7):
            nu = float(nu)
            intervals = stability_intervals(N, nu)
            p_lower, _, p_upper = exponent_bounds(N, nu)
            top = p_upper if math.isfinite(p_upper) else p_lower + 25
            for p in np.linspace(p_lower, top, 23)[1:-1]:
                params = make_params(N, nu, float(p))
                margin = params.p * params.gamma - nu ** 2
                if abs(margin) < 1e-6:
                    continue
                assert (margin < 0) == any(i.contains(float(p)) for i in intervals)


def test_classify_singular_stability():
    assert classify_singular_stability(make_params(15, 6.5, 3.0)) == RegimeVerdict.STABLE
    assert classify_singular_stability(make_params(5, 1.5, 5.0)) == RegimeVerdict.UNSTABLE
    assert classify_singular_stability(make_params(5, 1.5, 1.2)) == RegimeVerdict.OUTSIDE_RANGE


def test_sphere_rigidity_only_decided_below_threshold():
    assert sphere_constant_rigidity(make_params(15, 6.5, 3.0)) is None
    assert sphere_constant_rigidity(make_params(5, 1.5, 2.5)) is not None


def test_subcritical_rates():
    rates = subcritical_rates(make_params(5, 1.5, 2.0))
    assert rates['decay_exponent_infinity'] == pytest.approx(-3.0)
    with pytest.raises(ParameterRangeError):
        subcritical_rates(make_params(5, 1.5, 5.0))


@pytest.mark.parametrize('N, nu, expected', [(10, 4.0, 'low-i'), (8, 1.0, 'low-ii'), (15, 7.0, 'high-i'),
                                             (15, 6.6, 'high-ii'), (11, 4.5, 'high-iii')])
def test_theta_roots_for_every_case(N, nu, expected):
    roots = theta_roots(N, nu)
    nu_star = (N - 2) / 2
    assert roots.case == expected
    assert -nu_star - nu < roots.sigma_sharp < -nu_star
    assert (roots.sigma_minus is None) == (expected in ('low-i', 'high-i'))
    assert (roots.sigma_plus is None) == (expected != 'high-ii')
