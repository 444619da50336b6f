#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Diagnostics of radial profiles

Decay classification, Phragmen-type tail bounds, stability certificates with
log-cutoff instability witnesses, and sign changes between two profiles.
All checks work in t = log r on the profile's own grid.
"""
import logging
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.config import SolverOptions
from src.models.params import Params
from src.models.phase import AttractorType
from src.models.profile import (CertificateVerdict, DecayClass, DecayFit, PhragmenReport,
                                RadialProfile, SignChangeReport, StabilityCertificate)
from src.utils.errors import InsufficientGridError, ValidationError
from src.utils.exponent_atlas import in_existence_range, singular_coefficient
from src.utils.fowler_dynamics import eigen_analysis, positive_power

DECADE = math.log(10.0)
RATE_MATCH = 0.05
FIT_RESIDUAL_MAX = 1e-3
PHRAGMEN_TOL = 0.02
CERTIFY_SLACK = 1e-12
RAMP = 1.0


def _fowler_w(profile: RadialProfile, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """(w, w') of a profile; w' from the exact slopes when the profile has them."""
    k = params.k
    scale = np.exp(k * profile.log_r_grid)
    w = scale * profile.values
    return w, k * w + scale * profile.log_slopes()


def _is_uniform(grid: np.ndarray) -> bool:
    steps = np.diff(grid)
    return steps.size > 0 and np.allclose(steps, steps[0], rtol=1e-6, atol=0.0)


def radial_residual(profile: RadialProfile, params: Params) -> float:
    """Scaled sup-norm residual of w'' + 2 beta w' - gamma w + w^p on interior samples.

    w'' comes from fourth-order central differences of w'; the sup is divided
    by max(w) * max(1, gamma).
    """
    grid = profile.log_r_grid
    if grid.size < 5:
        raise InsufficientGridError('residual needs at least 5 samples')
    w, w_prime = _fowler_w(profile, params)
    if _is_uniform(grid):
        h = grid[1] - grid[0]
        accel = (-w_prime[4:] + 8 * w_prime[3:-1] - 8 * w_prime[1:-3] + w_prime[:-4]) / (12 * h)
        inner = slice(2, -2)
    else:
        accel = np.gradient(w_prime, grid, edge_order=2)[1:-1]
        inner = slice(1, -1)
    residual = accel + 2 * params.beta * w_prime[inner] - params.gamma * w[inner] \
        + positive_power(w[inner], params.p)
    scale = max(float(np.max(w)), 1e-300) * max(1.0, params.gamma)
    return float(np.max(np.abs(residual)) / scale)


def classify_decay(profile: RadialProfile, params: Params) -> DecayFit:
    """Power-law slope of the last decade of r against the slow and fast rates.

    Args:
        profile (RadialProfile): needs at least two decades of r
        params (Params): problem triple

    Returns:
        DecayFit: UNCLASSIFIED when neither candidate matches within 5 %
    """
    grid = profile.log_r_grid
    if grid[-1] - grid[0] < 2 * DECADE:
        raise InsufficientGridError(
            f'decay fit needs two decades of r, grid spans {(grid[-1] - grid[0]) / DECADE:.3g}')
    mask = grid >= grid[-1] - DECADE
    window = (float(math.exp(grid[mask][0])), float(math.exp(grid[-1])))
    values = profile.values[mask]
    if np.any(values <= 0) or np.count_nonzero(mask) < 3:
        return DecayFit(math.nan, window, DecayClass.UNCLASSIFIED, math.inf)

    x = grid[mask]
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    fit_residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))

    candidates = {DecayClass.SLOW: -params.k, DecayClass.FAST: -params.nu_star - params.nu}
    classification = DecayClass.UNCLASSIFIED
    best = math.inf
    for label, rate in candidates.items():
        miss = abs(slope - rate)
        if miss < RATE_MATCH * abs(rate) and fit_residual < FIT_RESIDUAL_MAX and miss < best:
            classification, best = label, miss

    limit_constant = None
    limit_error = None
    if classification == DecayClass.SLOW:
        limit_constant = float(values[-1] * math.exp(params.k * x[-1]))
        if in_existence_range(params) and params.gamma > 0:
            C = singular_coefficient(params)
            limit_error = abs(limit_constant - C) / C
    elif classification == DecayClass.FAST:
        # the constant of the fast branch is fitted, not checked
        limit_constant = float(values[-1] * math.exp((params.nu_star + params.nu) * x[-1]))
    return DecayFit(float(slope), window, classification, fit_residual, limit_constant, limit_error)


def _direction_slope(t: np.ndarray, quantity: np.ndarray, direction: float) -> float:
    slope, _ = np.polyfit(direction * t, np.log(quantity), 1)
    return float(slope)


def phragmen_check(profile: RadialProfile, params: Params, location: str,
                   tol: float = PHRAGMEN_TOL) -> PhragmenReport:
    """Growth bounds of a positive Hardy superharmonic near 0 or infinity.

    Toward the checked end, one rescaled quantity must stay bounded below
    (its log-slope may not fall below -tol) and the other must keep a finite
    liminf (its log-slope may not exceed tol).
    """
    if location not in ('origin', 'infinity'):
        raise ValidationError(f"location must be 'origin' or 'infinity', got {location!r}")
    grid = profile.log_r_grid
    if location == 'infinity':
        mask = grid >= grid[-1] - DECADE
        direction = 1.0
        bounded_exp = params.nu_star + params.nu
        liminf_exp = params.nu_star - params.nu
    else:
        mask = grid <= grid[0] + DECADE
        direction = -1.0
        bounded_exp = params.nu_star - params.nu
        liminf_exp = params.nu_star + params.nu
    t = grid[mask]
    values = profile.values[mask]
    if t.size < 3:
        raise InsufficientGridError(f'Phragmen check at {location} needs 3 samples in the end decade')
    if np.any(values <= 0):
        i = int(np.nonzero(values <= 0)[0][0])
        return PhragmenReport(location, False, -math.inf, math.nan,
                              {'r': float(math.exp(t[i])), 'value': float(values[i])})

    lower = values * np.exp(bounded_exp * t)
    upper = values * np.exp(liminf_exp * t)
    lower_slope = _direction_slope(t, lower, direction)
    upper_slope = _direction_slope(t, upper, direction)
    violation = None
    end = -1 if direction > 0 else 0
    if lower_slope < -tol:
        violation = {'r': float(math.exp(t[end])), 'quantity': 'lower_bound',
                     'value': float(lower[end]), 'slope': lower_slope}
    elif upper_slope > tol:
        violation = {'r': float(math.exp(t[end])), 'quantity': 'finite_liminf',
                     'value': float(upper[end]), 'slope': upper_slope}
    return PhragmenReport(location, violation is None, lower_slope, upper_slope, violation)


def scaled_potential(profile: RadialProfile, params: Params) -> np.ndarray:
    """p U^{p-1} r^2 on the grid"""
    w, _ = _fowler_w(profile, params)
    return params.p * positive_power(w, params.p - 1)


def _cutoff(t: np.ndarray, t_start: float, length: float) -> np.ndarray:
    rise = np.clip((t - t_start) / RAMP, 0.0, 1.0)
    fall = np.clip((t_start + length - t) / RAMP, 0.0, 1.0)
    return np.minimum(rise, fall)


def hardy_quadratic_form(profile: RadialProfile, params: Params, t_start: float,
                         length: float) -> Tuple[float, float]:
    """Second variation at U on phi = r^{-nu_star} chi(log r), per unit sphere area.

    chi ramps linearly from 0 to 1 over [t_start, t_start + 1], stays at 1 and
    ramps down over the last unit of the annulus. With phi in that form the
    form reduces to int chi'^2 + (nu^2 - p U^{p-1} r^2) chi^2 dt.

    Returns:
        (value, weight): the form and int chi^2 dt
    """
    grid = profile.log_r_grid
    if length <= 2 * RAMP:
        raise ValidationError(f'annulus length must exceed {2 * RAMP}, got {length}')
    if t_start < grid[0] or t_start + length > grid[-1]:
        raise InsufficientGridError(
            f'annulus [{t_start:.6g}, {t_start + length:.6g}] leaves the grid [{grid[0]:.6g}, {grid[-1]:.6g}]')
    mask = (grid >= t_start) & (grid <= t_start + length)
    t = grid[mask]
    chi = _cutoff(t, t_start, length)
    potential = scaled_potential(profile, params)[mask]
    gradient_term = 2.0 / RAMP
    value = gradient_term + float(np.trapezoid((params.nu ** 2 - potential) * chi ** 2, t))
    weight = float(np.trapezoid(chi ** 2, t))
    return value, weight


def stability_certificate(profile: RadialProfile, params: Params,
                          opts: Optional[SolverOptions] = None) -> StabilityCertificate:
    """Hardy domination certificate, or a log-cutoff witness of instability."""
    opts = opts or SolverOptions()
    potential = scaled_potential(profile, params)
    sup_potential = float(np.max(potential))
    nu2 = params.nu ** 2
    if sup_potential <= nu2 + CERTIFY_SLACK:
        return StabilityCertificate(CertificateVerdict.CERTIFIED_STABLE, sup_potential)

    grid = profile.log_r_grid
    tail = grid >= grid[-1] - DECADE
    tail_min = float(np.min(potential[tail]))
    if tail_min < nu2 + opts.witness_margin:
        logging.debug(f'tail potential {tail_min:.6g} not above nu^2={nu2:.6g}; no witness attempted')
        return StabilityCertificate(CertificateVerdict.INCONCLUSIVE, sup_potential,
                                    {'tail_min_potential': tail_min})

    attempts = []
    for length in sorted(opts.witness_lengths):
        t_start = float(grid[-1] - length)
        if t_start < grid[0]:
            break
        value, weight = hardy_quadratic_form(profile, params, t_start, length)
        witness = {
            'R_inner': math.exp(t_start),
            'R_outer': math.exp(t_start + length),
            'length': length,
            'ramp': RAMP,
            'cutoff': 'piecewise-linear in log r',
            'quadratic_form': value,
            'weight': weight
        }
        attempts.append(witness)
        if value < 0:
            return StabilityCertificate(CertificateVerdict.WITNESS_UNSTABLE, sup_potential, witness)
    return StabilityCertificate(CertificateVerdict.INCONCLUSIVE, sup_potential,
                                attempts[-1] if attempts else {'tail_min_potential': tail_min})


def tail_sign_changes(profile_a: RadialProfile, profile_b: RadialProfile, R: float,
                      params: Optional[Params] = None, R_max: Optional[float] = None,
                      deadband: float = 1e-12) -> SignChangeReport:
    """Sign changes of A - B on (R, R_max) over the merged grids of both profiles.

    With ``params`` of a focus attractor the overlap must cover one predicted
    half period pi / omega.
    """
    if not R > 0:
        raise ValidationError(f'R must be positive, got {R}')
    lo = max(math.log(R), profile_a.log_r_grid[0], profile_b.log_r_grid[0])
    hi = min(profile_a.log_r_grid[-1], profile_b.log_r_grid[-1])
    if R_max is not None:
        hi = min(hi, math.log(R_max))
    if hi <= lo:
        raise InsufficientGridError(f'profiles do not overlap beyond R={R}')
    if params is not None and params.gamma > 0 and params.beta > 0:
        eig = eigen_analysis(params)
        if eig.attractor_type == AttractorType.FOCUS:
            period = math.pi / eig.omega_spiral
            if hi - lo < period:
                raise InsufficientGridError(
                    f'overlap {hi - lo:.4g} in log r is shorter than the half period {period:.4g}')

    merged = np.union1d(profile_a.log_r_grid, profile_b.log_r_grid)
    t = merged[(merged >= lo) & (merged <= hi)]
    a = np.interp(t, profile_a.log_r_grid, profile_a.values)
    b = np.interp(t, profile_b.log_r_grid, profile_b.values)
    diff = a - b
    live = np.nonzero(np.abs(diff) > deadband * np.maximum(np.abs(a), np.abs(b)))[0]
    locations = []
    for i, j in zip(live[:-1], live[1:]):
        if diff[i] * diff[j] < 0:
            locations.append(float(t[i] - diff[i] * (t[j] - t[i]) / (diff[j] - diff[i])))
    return SignChangeReport(len(locations), tuple(locations), (float(lo), float(hi)))


def profile_diagnostics(profile: RadialProfile, params: Params,
                        opts: Optional[SolverOptions] = None) -> Dict[str, Any]:
    """Decay fit, both Phragmen checks, certificate and residual of one profile"""
    opts = opts or SolverOptions()
    report = {
        'lambda': profile.lam,
        'radial_residual': radial_residual(profile, params),
        'phragmen': [phragmen_check(profile, params, where).to_dict() for where in ('origin', 'infinity')],
        'certificate': stability_certificate(profile, params, opts).to_dict()
    }
    try:
        report['decay'] = classify_decay(profile, params).to_dict()
    except InsufficientGridError as e:
        logging.warning(f'decay fit skipped: {e}')
        report['decay'] = None
    return report
