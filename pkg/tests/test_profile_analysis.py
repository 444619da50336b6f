import math

import numpy as np
import pytest

from src.models.profile import CertificateVerdict, DecayClass, RadialProfile
from src.utils.errors import InsufficientGridError, ValidationError
from src.utils.heteroclinic_solver import build_profile, singular_profile
from src.utils.profile_analysis import (classify_decay, hardy_quadratic_form, phragmen_check, profile_diagnostics,
                                        radial_residual, stability_certificate, tail_sign_changes)


def power_profile(exponent, start=0.0, stop=10.0, count=1001):
    grid = np.linspace(start, stop, count)
    return RadialProfile(log_r_grid=grid, values=np.exp(exponent * grid))


def test_singular_profile_is_slow_and_exact(stable_params):
    profile = singular_profile(stable_params, np.linspace(0.0, 20.0, 2001))
    fit = classify_decay(profile, stable_params)
    assert fit.classification == DecayClass.SLOW
    assert fit.fitted_exponent == pytest.approx(-1.0)
    assert fit.limit_error == pytest.approx(0.0, abs=1e-12)
    assert radial_residual(profile, stable_params) <= 1e-12


def test_fast_and_unclassified_decay(stable_params):
    # nu_star + nu = 13
    fast = classify_decay(power_profile(-13.0), stable_params)
    assert fast.classification == DecayClass.FAST
    assert fast.limit_constant == pytest.approx(1.0)
    other = classify_decay(power_profile(-5.0), stable_params)
    assert other.classification == DecayClass.UNCLASSIFIED


def test_decay_fit_needs_two_decades(stable_params):
    with pytest.raises(InsufficientGridError):
        classify_decay(power_profile(-1.0, stop=4.0), stable_params)


def test_heteroclinic_profile_is_slow(stable_traj, stable_params):
    profile = build_profile(stable_traj, 1.0, stable_params)
    fit = classify_decay(profile, stable_params)
    assert fit.classification == DecayClass.SLOW
    assert fit.limit_error <= 1e-6
    assert radial_residual(profile, stable_params) <= 1e-5


def test_phragmen_bounds_at_infinity(stable_params):
    assert phragmen_check(singular_profile(stable_params, np.linspace(0.0, 10.0, 501)),
                          stable_params, 'infinity').passed
    assert phragmen_check(power_profile(-13.0), stable_params, 'infinity').passed
    too_fast = phragmen_check(power_profile(-15.0), stable_params, 'infinity')
    assert not too_fast.passed
    assert too_fast.violation['quantity'] == 'lower_bound'


def test_phragmen_bounds_at_origin(stable_traj, stable_params):
    report = phragmen_check(build_profile(stable_traj, 1.0, stable_params), stable_params, 'origin')
    assert report.passed
    with pytest.raises(ValidationError):
        phragmen_check(power_profile(-1.0), stable_params, 'nowhere')


def test_quadratic_form_with_constant_potential(spiral_params):
    grid = np.linspace(0.0, 30.0, 3001)
    profile = singular_profile(spiral_params, grid)
    value, weight = hardy_quadratic_form(profile, spiral_params, 10.0, 10.0)
    assert weight == pytest.approx(10.0 - 4.0 / 3.0, abs=1e-3)
    potential = spiral_params.p * spiral_params.gamma
    assert value == pytest.approx(2.0 + (spiral_params.nu ** 2 - potential) * weight, rel=1e-10)
    with pytest.raises(ValidationError):
        hardy_quadratic_form(profile, spiral_params, 10.0, 2.0)
    with pytest.raises(InsufficientGridError):
        hardy_quadratic_form(profile, spiral_params, 25.0, 10.0)


def test_stable_profile_is_certified(stable_traj, stable_params, opts):
    certificate = stability_certificate(build_profile(stable_traj, 1.0, stable_params), stable_params, opts)
    assert certificate.verdict == CertificateVerdict.CERTIFIED_STABLE
    assert certificate.sup_potential <= stable_params.nu ** 2


def test_unstable_singular_solution_has_witness(spiral_params, opts):
    profile = singular_profile(spiral_params, np.linspace(-10.0, 40.0, 5001))
    certificate = stability_certificate(profile, spiral_params, opts)
    assert certificate.verdict == CertificateVerdict.WITNESS_UNSTABLE
    assert certificate.witness['quadratic_form'] < 0
    assert certificate.witness['R_outer'] == pytest.approx(math.exp(40.0))


def test_sign_changes_of_spiral_profile(spiral_traj, spiral_params):
    profile = build_profile(spiral_traj, 1.0, spiral_params)
    singular = singular_profile(spiral_params, profile.log_r_grid)
    report = tail_sign_changes(profile, singular, 1.0, spiral_params)
    assert report.count >= 5
    spacing = np.diff(report.locations[-6:])
    assert np.mean(spacing) == pytest.approx(math.pi / 2, rel=2e-2)


def test_no_sign_changes_in_stable_regime(stable_traj, stable_params):
    profile = build_profile(stable_traj, 1.0, stable_params)
    singular = singular_profile(stable_params, profile.log_r_grid)
    assert tail_sign_changes(profile, singular, 1.0, stable_params).count == 0


def test_sign_changes_need_overlap(spiral_params):
    a = singular_profile(spiral_params, np.linspace(0.0, 1.0, 101))
    with pytest.raises(InsufficientGridError):
        tail_sign_changes(a, a, math.exp(0.5), spiral_params)
    with pytest.raises(ValidationError):
        tail_sign_changes(a, a, 0.0)


def test_profile_diagnostics_report(stable_traj, stable_params, opts):
    report = profile_diagnostics(build_profile(stable_traj, 1.0, stable_params), stable_params, opts)
    assert report['lambda'] == 1.0
    assert report['decay']['classification'] == DecayClass.SLOW
    assert [item['location'] for item in report['phragmen']] == ['origin', 'infinity']
    assert report['certificate']['verdict'] == CertificateVerdict.CERTIFIED_STABLE


def test_sign_changes_are_antisymmetric(spiral_traj, spiral_params):
    profile = build_profile(spiral_traj, 1.0, spiral_params)
    singular = singular_profile(spiral_params, profile.log_r_grid)
    forward = tail_sign_changes(profile, singular, 1.0, spiral_params)
    backward = tail_sign_changes(singular, profile, 1.0, spiral_params)
    assert forward.count == backward.count > 0
    assert forward.locations == backward.locations
    assert forward.window == backward.window


@pytest.mark.parametrize('lam', [2.0, 4.0, 0.5])
def test_decay_fit_is_invariant_under_lambda_scaling(stable_traj, stable_params, lam):
    reference = classify_decay(build_profile(stable_traj, 1.0, stable_params), stable_params)
    scaled = classify_decay(build_profile(stable_traj, lam, stable_params), stable_params)
    assert scaled.classification == reference.classification == DecayClass.SLOW
    assert scaled.fitted_exponent == pytest.approx(reference.fitted_exponent, rel=1e-9)
    assert scaled.limit_constant == pytest.approx(reference.limit_constant, rel=1e-12)


def test_witness_improves_with_annulus_length(spiral_params):
    grid = np.linspace(-10.0, 40.0, 5001)
    profile = singular_profile(spiral_params, grid)
    limit = spiral_params.nu ** 2 - spiral_params.p * spiral_params.gamma
    assert limit < 0
    values, gaps = [], []
    for length in (5.0, 10.0, 20.0):
        value, weight = hardy_quadratic_form(profile, spiral_params, 40.0 - length, length)
        values.append(value)
        gaps.append(abs(value / weight - limit))
    assert values[0] > values[1] > values[2]
    assert gaps[0] > gaps[1] > gaps[2]
    assert values[2] < 0
