#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Fowler variables and the planar system

With t = log r and w(t) = r^{2/(p-1)} U(r) the radial equation becomes the
autonomous system

    x' = y,   y' = -2 beta y + gamma x - x^p

on the half plane x >= 0. The origin is a saddle, (gamma^{1/(p-1)}, 0) the
singular solution; E = y^2/2 - gamma x^2/2 + x^{p+1}/(p+1) decreases along
orbits at the rate -2 beta y^2.
"""
import cmath
import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from src.models.params import Params
from src.models.phase import AttractorType, EigenData, PhaseState, PhaseTrajectory
from src.models.profile import RadialProfile
from src.utils.errors import DomainError, ParameterRangeError

CENTER_TOL = 1e-12


def positive_power(x, p: float):
    """x^p for x >= 0 (arrays or scalars), exp(p log x) with 0 -> 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f'x^p undefined for x < 0 (min x = {float(np.min(arr))})')
    with np.errstate(divide='ignore'):
        out = np.where(arr > 0, np.exp(p * np.log(np.where(arr > 0, arr, 1.0))), 0.0)
    if np.ndim(x) == 0:
        return float(out)
    return out


def fowler_forward(params: Params, U: RadialProfile) -> PhaseTrajectory:
    """U(r) on a log-radius grid -> (w, w') on t = log r"""
    grid = U.log_r_grid
    if not np.all(np.isfinite(grid)):
        raise DomainError('profile contains samples at r <= 0')
    k = params.k
    scale = np.exp(k * grid)
    w = scale * U.values
    w_prime = k * w + scale * U.log_slopes()
    return PhaseTrajectory(t_grid=grid, states=np.column_stack([w, w_prime]))


def fowler_inverse(params: Params, traj: PhaseTrajectory, lam: float = None) -> RadialProfile:
    """(w, w') on t -> U(r) with log r = t; slopes carry r U'(r) exactly."""
    k = params.k
    decay = np.exp(-k * traj.t_grid)
    values = decay * traj.w
    slopes = decay * (traj.w_prime - k * traj.w)
    return RadialProfile(log_r_grid=traj.t_grid.copy(), values=values, lam=lam, slopes=slopes)


def _check_state(state: PhaseState):
    if state.x < 0:
        raise DomainError(f'phase state outside x >= 0: x = {state.x}')


def field_arrays(x, y, params: Params):
    """Vectorised right-hand side; x must be nonnegative."""
    return y, -2 * params.beta * y + params.gamma * x - positive_power(x, params.p)


def vector_field(state: PhaseState, params: Params) -> PhaseState:
    _check_state(state)
    dx, dy = field_arrays(state.x, state.y, params)
    return PhaseState(float(dx), float(dy))


def equilibria(params: Params) -> List[PhaseState]:
    """Origin and, when gamma > 0, the singular solution gamma^{1/(p-1)}."""
    if params.gamma <= 0:
        logging.warning(f'gamma = {params.gamma} <= 0 for p={params.p}: only the origin is an equilibrium')
        return [PhaseState(0.0, 0.0)]
    return [PhaseState(0.0, 0.0), PhaseState(attractor_x(params), 0.0)]


def attractor_x(params: Params) -> float:
    if params.gamma <= 0:
        raise ParameterRangeError(f'no positive equilibrium: gamma = {params.gamma} <= 0')
    return params.gamma ** (1 / (params.p - 1))


def jacobian(state: PhaseState, params: Params) -> np.ndarray:
    _check_state(state)
    p = params.p
    dfdx = params.gamma - p * positive_power(state.x, p - 1)
    return np.array([[0.0, 1.0], [dfdx, -2 * params.beta]])


def eigen_analysis(params: Params) -> EigenData:
    """Eigenvalues at both equilibria and the type of the singular one.

    alpha_plus / alpha_minus belong to the saddle at the origin; the starred
    pair is kept complex so node and focus share one representation.
    """
    if params.gamma <= 0:
        raise ParameterRangeError(f'eigen analysis needs gamma > 0, got gamma = {params.gamma}')
    beta, gamma, p = params.beta, params.gamma, params.p
    root = math.sqrt(beta ** 2 + gamma)
    alpha_plus = -beta + root
    alpha_minus = -beta - root

    disc = beta ** 2 - (p - 1) * gamma
    sq = cmath.sqrt(complex(disc, 0.0))
    alpha_star_plus = complex(-beta) + sq
    alpha_star_minus = complex(-beta) - sq

    if abs(beta) <= CENTER_TOL * max(1.0, params.nu_star):
        attractor_type = AttractorType.CENTER
    elif beta < 0:
        attractor_type = AttractorType.REPELLER
    elif disc >= 0:
        attractor_type = AttractorType.NODE
    else:
        attractor_type = AttractorType.FOCUS

    omega = math.sqrt(-disc) if disc < 0 else 0.0
    return EigenData(
        alpha_plus=alpha_plus,
        alpha_minus=alpha_minus,
        alpha_star_plus=alpha_star_plus,
        alpha_star_minus=alpha_star_minus,
        eigvec_plus=(1.0, alpha_plus),
        eigvec_minus=(1.0, alpha_minus),
        attractor_type=attractor_type,
        omega_spiral=omega
    )


def decay_rates(params: Params) -> Dict[str, complex]:
    """Fowler eigenvalues shifted by -2/(p-1): exponents of U near 0 and infinity."""
    eig = eigen_analysis(params)
    k = params.k
    return {
        'alpha_plus': eig.alpha_plus - k,
        'alpha_minus': eig.alpha_minus - k,
        'alpha_star_plus': eig.alpha_star_plus - k,
        'alpha_star_minus': eig.alpha_star_minus - k
    }


def lyapunov_energy(state: PhaseState, params: Params) -> float:
    _check_state(state)
    return float(energy_arrays(state.x, state.y, params))


def energy_arrays(x, y, params: Params):
    p = params.p
    return 0.5 * np.square(y) - 0.5 * params.gamma * np.square(x) + positive_power(x, p + 1) / (p + 1)


def energy_rate(state: PhaseState, params: Params) -> float:
    """dE/dt along the field, -2 beta y^2"""
    _check_state(state)
    return -2 * params.beta * state.y ** 2


def energy_gradient(state: PhaseState, params: Params) -> Tuple[float, float]:
    _check_state(state)
    return (-params.gamma * state.x + positive_power(state.x, params.p), state.y)


def phase_portrait(params: Params, traj: PhaseTrajectory) -> List[Dict[str, float]]:
    """Rows (t, x, y, energy) of a trajectory"""
    energy = energy_arrays(traj.w, traj.w_prime, params)
    return [
        {'t': float(t), 'x': float(x), 'y': float(y), 'energy': float(e)}
        for t, x, y, e in zip(traj.t_grid, traj.w, traj.w_prime, energy)
    ]
