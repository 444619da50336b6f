#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Heteroclinic shooting and the slow decay family U_lambda

The orbit leaving the saddle (0, 0) along (1, alpha_plus) is integrated until
it reaches the singular equilibrium. Its time translation is fixed by
w(t) e^{-alpha_plus t} -> 1 as t -> -inf, and U_lambda(r) = r^{-2/(p-1)}
w(log(lambda r)).
"""
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from src.config import SolverOptions
from src.models.params import Params
from src.models.phase import Approach, ApproachReport, AttractorType, PhaseTrajectory
from src.models.profile import DecayClass, RadialProfile
from src.utils.errors import (AmbiguousApproachError, InsufficientGridError, NonConvergenceError,
                              ParameterRangeError, ValidationError)
from src.utils.exponent_atlas import singular_coefficient, slow_decay_nonexistence
from src.utils.fowler_dynamics import attractor_x, eigen_analysis, field_arrays

RICHARDSON_RATIO = 4.0
LEVEL_FRACTION = 0.5


def unstable_manifold_coefficients(params: Params) -> Tuple[float, float]:
    """(c, d) with y = alpha_plus x + c x^p on the manifold and
    w(t) = e^{alpha_plus t} + d e^{p alpha_plus t} on the normalised orbit."""
    a = eigen_analysis(params).alpha_plus
    p, beta = params.p, params.beta
    c = -1.0 / ((p + 1) * a + 2 * beta)
    d = c / ((p - 1) * a)
    return c, d


def head_expansion(t: np.ndarray, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """(w, w') of the normalised orbit for t far below the integration start."""
    a = eigen_analysis(params).alpha_plus
    p = params.p
    _, d = unstable_manifold_coefficients(params)
    lead = np.exp(a * np.asarray(t, dtype=float))
    second = d * lead ** p
    return lead + second, a * lead + p * a * second


def _rhs(params: Params):
    def f(t, s):
        dx, dy = field_arrays(max(s[0], 0.0), s[1], params)
        return [dx, dy]
    return f


class HeteroclinicShooter:
    """Shoots the normalised heteroclinic orbit for one parameter triple."""

    def __init__(self, params: Params, opts: Optional[SolverOptions] = None):
        self.params = params
        self.opts = opts or SolverOptions()
        self._check_range()
        self.eig = eigen_analysis(params)
        self.x_eq = attractor_x(params)
        self.manifold_c, self.head_d = unstable_manifold_coefficients(params)

    def _check_range(self):
        params = self.params
        if slow_decay_nonexistence(params):
            raise ParameterRangeError(
                f'p={params.p} >= p_upper={params.p_upper}: no slow decay solution exists')
        if not params.p > params.p_sobolev:
            raise ParameterRangeError(
                f'shooting needs p_S < p < p_upper; got p={params.p} <= p_S={params.p_sobolev}')
        if params.beta <= 0 or params.gamma <= 0:
            raise ParameterRangeError(f'need beta > 0 and gamma > 0, got beta={params.beta}, gamma={params.gamma}')

    def slowest_rate(self) -> float:
        if self.eig.attractor_type == AttractorType.FOCUS:
            return self.params.beta
        return abs(self.eig.alpha_star_plus.real)

    def t_max(self) -> float:
        if self.opts.t_max is not None:
            return self.opts.t_max
        return 200.0 / self.slowest_rate()

    def _start(self, eps: float) -> Tuple[float, float, float]:
        """Start state (x0, y0) at distance eps along the manifold and its normalised time."""
        a = self.eig.alpha_plus
        p = self.params.p
        x0 = eps / math.hypot(1.0, a)
        y0 = a * x0
        if self.opts.manifold_correction:
            y0 += self.manifold_c * x0 ** p
            shift = math.log(x0 - self.head_d * x0 ** p) / a
        else:
            shift = math.log(x0) / a
        return x0, y0, shift

    def _run(self, eps: float):
        x0, y0, shift = self._start(eps)
        x_eq = self.x_eq
        tol_attr = self.opts.tol_attr

        def arrived(t, s):
            return math.hypot(s[0] - x_eq, s[1]) - tol_attr
        arrived.terminal = True
        arrived.direction = -1

        atol = min(self.opts.atol, self.opts.rtol * x0)
        sol = solve_ivp(_rhs(self.params), (shift, shift + self.t_max()), [x0, y0],
                        method='RK45', rtol=self.opts.rtol, atol=atol,
                        dense_output=True, events=arrived)
        if sol.status < 0:
            raise NonConvergenceError(f'integrator failed: {sol.message}')
        if sol.t_events[0].size == 0:
            raise NonConvergenceError(
                f'attractor not reached within t_max={self.t_max():.6g} '
                f'(distance {math.hypot(sol.y[0, -1] - x_eq, sol.y[1, -1]):.3e})')
        return sol, shift, float(sol.t_events[0][0])

    def _level_time(self, sol) -> float:
        level = LEVEL_FRACTION * self.x_eq
        above = np.nonzero(sol.y[0] >= level)[0]
        i = int(above[0])
        return brentq(lambda t: sol.sol(t)[0] - level, sol.t[i - 1], sol.t[i], xtol=1e-14)

    def shoot(self) -> PhaseTrajectory:
        eps = self.opts.eps_start
        sol, shift, arrival = self._run(eps)
        correction = 0.0
        if self.opts.richardson:
            coarse_level = self._level_time(sol)
            sol, shift, arrival = self._run(eps / RICHARDSON_RATIO)
            fine_level = self._level_time(sol)
            order = self.params.p - 1
            if self.opts.manifold_correction:
                order *= 2
            factor = RICHARDSON_RATIO ** (-order)
            coarse_error = (coarse_level - fine_level) / (1.0 - factor)
            correction = coarse_error * factor
            logging.debug(f'Richardson shift correction {correction:.3e} (order {order:g})')

        # normalised time = integrator time - correction
        start = shift - correction
        arrival_time = arrival - correction
        h = self.opts.grid_step
        count = int(math.floor((arrival_time - (start - self.opts.head_span)) / h))
        t_grid = arrival_time - h * np.arange(count, -1, -1, dtype=float)
        integration_start = int(np.searchsorted(t_grid, start, side='left'))

        states = np.empty((t_grid.size, 2))
        head_w, head_y = head_expansion(t_grid[:integration_start], self.params)
        states[:integration_start, 0] = head_w
        states[:integration_start, 1] = head_y
        tail_t = np.clip(t_grid[integration_start:] + correction, sol.t[0], sol.t[-1])
        states[integration_start:] = sol.sol(tail_t).T

        approach = Approach.SPIRAL if self.eig.attractor_type == AttractorType.FOCUS else Approach.MONOTONE
        logging.info(f'heteroclinic for N={self.params.N}, nu={self.params.nu}, p={self.params.p}: '
                     f'arrival t={arrival_time:.6f}, shift={start:.10f}, {t_grid.size} samples')
        return PhaseTrajectory(
            t_grid=t_grid,
            states=states,
            normalization_shift=start,
            approach=approach,
            arrival_time=arrival_time,
            integration_start=integration_start
        )


def shoot_heteroclinic(params: Params, opts: Optional[SolverOptions] = None) -> PhaseTrajectory:
    """Normalised heteroclinic orbit from the saddle to the singular equilibrium.

    Args:
        params (Params): validated triple with p_S < p < p_upper
        opts (SolverOptions): integrator and grid settings

    Returns:
        PhaseTrajectory: uniform grid ending at the attractor arrival time; the
        samples before ``integration_start`` come from the head expansion
    """
    return HeteroclinicShooter(params, opts).shoot()


def rk4_oracle(traj: PhaseTrajectory, params: Params, substeps: int = 2) -> np.ndarray:
    """Fixed-step RK4 from the first integrated sample, step grid_step / substeps.

    Returns the states on the trajectory grid from ``integration_start`` on.
    """
    i0 = traj.integration_start
    h = traj.step / substeps
    f = _rhs(params)

    def stage(s):
        return np.asarray(f(0.0, s))

    state = traj.states[i0].copy()
    out = np.empty((traj.t_grid.size - i0, 2))
    out[0] = state
    for j in range(1, out.shape[0]):
        for _ in range(substeps):
            k1 = stage(state)
            k2 = stage(state + 0.5 * h * k1)
            k3 = stage(state + 0.5 * h * k2)
            k4 = stage(state + h * k3)
            state = state + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[j] = state
    return out


def singular_profile(params: Params, log_r_grid: np.ndarray) -> RadialProfile:
    """Exact U_inf = C r^{-2/(p-1)} on the given grid"""
    C = singular_coefficient(params)
    log_r = np.asarray(log_r_grid, dtype=float)
    values = C * np.exp(-params.k * log_r)
    return RadialProfile(log_r_grid=log_r, values=values, lam=math.inf,
                         decay_class=DecayClass.SLOW, slopes=-params.k * values)


def _check_lambda(lam: float):
    if lam is None or not lam > 0:
        raise ValidationError(f'lambda must be positive, got {lam}')


def build_profile(traj: PhaseTrajectory, lam: float, params: Params) -> RadialProfile:
    """U_lambda on the trajectory grid shifted by -log(lambda)."""
    _check_lambda(lam)
    if math.isinf(lam):
        return singular_profile(params, traj.t_grid)
    k = params.k
    log_r = traj.t_grid - math.log(lam)
    decay = np.exp(-k * log_r)
    values = decay * traj.w
    slopes = decay * (traj.w_prime - k * traj.w)
    return RadialProfile(log_r_grid=log_r, values=np.maximum(values, 0.0), lam=lam,
                         decay_class=DecayClass.SLOW, slopes=slopes)


def _attractor_flow(dev0: float, y0: float, tau: np.ndarray, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """Linear flow of (w - x_eq, w') at the attractor over times tau >= 0."""
    beta = params.beta
    stiffness = (params.p - 1) * params.gamma
    disc = beta ** 2 - stiffness
    if disc > 1e-14 * beta ** 2:
        s = math.sqrt(disc)
        fast = np.exp((-beta - s) * tau)
        slow = np.exp((-beta + s) * tau)
        even = 0.5 * (slow + fast)
        odd = (slow - fast) / (2 * s)
    elif disc < -1e-14 * beta ** 2:
        s = math.sqrt(-disc)
        envelope = np.exp(-beta * tau)
        even = envelope * np.cos(s * tau)
        odd = envelope * np.sin(s * tau) / s
    else:
        even = np.exp(-beta * tau)
        odd = tau * even
    dev = even * dev0 + odd * (beta * dev0 + y0)
    y = even * y0 + odd * (-stiffness * dev0 - beta * y0)
    return dev, y


def sample_profile(traj: PhaseTrajectory, lam: float, params: Params,
                   log_r_grid: np.ndarray) -> RadialProfile:
    """U_lambda on an arbitrary log-radius grid.

    Hermite interpolation of (w, w') inside the trajectory, the head expansion
    before it and the linearised flow at the attractor after arrival.
    """
    _check_lambda(lam)
    log_r = np.asarray(log_r_grid, dtype=float)
    if math.isinf(lam):
        return singular_profile(params, log_r)
    t = log_r + math.log(lam)
    t0, t1 = traj.t_grid[0], traj.t_grid[-1]
    w = np.empty_like(t)
    y = np.empty_like(t)

    head = t < t0
    tail = t > t1
    inside = ~(head | tail)
    if np.any(inside):
        spline = CubicHermiteSpline(traj.t_grid, traj.w, traj.w_prime)
        w[inside] = spline(t[inside])
        # w' from the same Hermite interpolation applied to (w', w'')
        _, accel = field_arrays(np.maximum(traj.w, 0.0), traj.w_prime, params)
        y[inside] = CubicHermiteSpline(traj.t_grid, traj.w_prime, accel)(t[inside])
    if np.any(head):
        w[head], y[head] = head_expansion(t[head], params)
    if np.any(tail):
        x_eq = attractor_x(params)
        dev, y_tail = _attractor_flow(traj.w[-1] - x_eq, traj.w_prime[-1], t[tail] - t1, params)
        w[tail] = x_eq + dev
        y[tail] = y_tail

    k = params.k
    decay = np.exp(-k * log_r)
    return RadialProfile(log_r_grid=log_r, values=np.maximum(decay * w, 0.0), lam=lam,
                         decay_class=DecayClass.SLOW, slopes=decay * (y - k * w))


def lambda_for_value(traj: PhaseTrajectory, params: Params, R: float, value: float) -> float:
    """Smallest lambda with U_lambda(R) = value (first crossing of the level)."""
    if not R > 0 or not value > 0:
        raise ValidationError(f'R and value must be positive, got R={R}, value={value}')
    target = value * R ** params.k
    w = traj.w
    if target > float(np.max(w)):
        raise ParameterRangeError(
            f'value {value} at R={R} exceeds every U_lambda(R) (sup w = {float(np.max(w)):.6g})')
    if target <= w[0]:
        head = lambda t: head_expansion(np.array([t]), params)[0][0] - target
        a = eigen_analysis(params).alpha_plus
        lower = min(math.log(target) / a, traj.t_grid[0]) - 10.0
        t_star = brentq(head, lower, traj.t_grid[0], xtol=1e-14)
    else:
        i = int(np.nonzero(w >= target)[0][0])
        spline = CubicHermiteSpline(traj.t_grid, w, traj.w_prime)
        t_star = brentq(lambda t: float(spline(t)) - target, traj.t_grid[i - 1], traj.t_grid[i], xtol=1e-14)
    return math.exp(t_star) / R


def detect_approach(traj: PhaseTrajectory, params: Params, deadband: float = 1e-12,
                    step_tol: float = 1e-9) -> ApproachReport:
    """Monotone or spiral approach to the attractor, with level crossing times."""
    x_eq = attractor_x(params)
    dev = traj.w - x_eq
    live = np.nonzero(np.abs(dev) > deadband * x_eq)[0]
    crossings = []
    for i, j in zip(live[:-1], live[1:]):
        if dev[i] * dev[j] < 0:
            t_i, t_j = traj.t_grid[i], traj.t_grid[j]
            crossings.append(float(t_i - dev[i] * (t_j - t_i) / (dev[j] - dev[i])))

    eig = eigen_analysis(params)
    predicted = Approach.SPIRAL if eig.attractor_type == AttractorType.FOCUS else Approach.MONOTONE
    if len(crossings) >= 2:
        approach = Approach.SPIRAL
    elif np.all(np.diff(traj.w) >= -step_tol * max(1.0, x_eq)):
        approach = Approach.MONOTONE
    else:
        raise AmbiguousApproachError(
            f'trajectory neither monotone nor spiralling ({len(crossings)} crossing(s)) '
            f'before t={traj.t_grid[-1]:.6g}')
    if approach != predicted:
        logging.warning(f'approach {approach.value} differs from eigen prediction {predicted.value} '
                        f'for N={params.N}, nu={params.nu}, p={params.p}')
    return ApproachReport(approach=approach, crossing_times=crossings, predicted=predicted)


def attractor_rate(traj: PhaseTrajectory, params: Params,
                   window: Tuple[float, float] = (1e-7, 1e-4)) -> float:
    """Exponential rate of w - x_eq on the last decades before arrival.

    Least-squares slope of log|w - x_eq| against t over samples with
    window[0] * x_eq <= |w - x_eq| <= window[1] * x_eq.
    """
    report = detect_approach(traj, params)
    if report.approach == Approach.SPIRAL:
        raise ParameterRangeError('attractor_rate needs a monotone approach; trajectory spirals')
    x_eq = attractor_x(params)
    dev = np.abs(traj.w - x_eq)
    mask = (dev >= window[0] * x_eq) & (dev <= window[1] * x_eq)
    mask[:traj.integration_start] = False
    if np.count_nonzero(mask) < 5:
        raise InsufficientGridError(f'only {np.count_nonzero(mask)} samples in the rate window')
    slope, _ = np.polyfit(traj.t_grid[mask], np.log(dev[mask]), 1)
    eig = eigen_analysis(params)
    disc = params.beta ** 2 - (params.p - 1) * params.gamma
    if abs(disc) <= 1e-6 * params.beta ** 2:
        logging.warning(f'double attractor eigenvalue (disc={disc:.3e}); rate {slope:.6f} is approximate')
    logging.debug(f'attractor rate {slope:.8f}, predicted {eig.alpha_star_plus.real:.8f}')
    return float(slope)


def trajectory_metadata(traj: PhaseTrajectory, params: Params, opts: SolverOptions) -> Dict:
    eig = eigen_analysis(params)
    return {
        'params': params.to_dict(),
        'eigen': eig.to_dict(),
        'trajectory': traj.metadata(),
        'attractor_x': attractor_x(params),
        'options': opts.to_dict()
    }
