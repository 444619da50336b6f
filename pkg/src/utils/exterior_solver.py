#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exterior Dirichlet problem outside a ball

Radial solutions of -Delta u + mu u / r^2 = u^p for r > R_K with u = psi on
the sphere, built from a slow decay base solution U* by a sub/supersolution
pair and monotone iteration. Everything is discretised with centred second
order differences on a uniform grid in t = log r, truncated with a Robin
condition carrying the known decay rate.
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_banded

from src.config import SolverOptions
from src.models.exterior import (ExteriorFamily, ExteriorProblem, ExteriorSolution, ExteriorTemplate,
                                 LinearHardyProblem, lambda_key)
from src.models.params import Params
from src.models.phase import PhaseTrajectory
from src.models.profile import DecayClass, RadialProfile
from src.utils.errors import (MaxIterationsError, MonotonicityBrokenError, NoncoerciveError, NonConvergenceError,
                              ParameterRangeError, ValidationError)
from src.utils.exponent_atlas import singular_coefficient
from src.utils.fowler_dynamics import positive_power
from src.utils.heteroclinic_solver import lambda_for_value, sample_profile

PROGRESS_EVERY = 50
RESOLVE_FLOOR = 1e-8
TAIL_FLOOR = 1e-11
DECADE = math.log(10.0)


def exterior_grid(R_K: float, opts: SolverOptions) -> np.ndarray:
    """Uniform log-radius grid from log(R_K) over opts.exterior_span"""
    if not R_K > 0:
        raise ValidationError(f'R_K must be positive, got {R_K}')
    count = int(round(opts.exterior_span / opts.exterior_step))
    return math.log(R_K) + opts.exterior_step * np.arange(count + 1, dtype=float)


def _grid_step(grid: np.ndarray) -> float:
    steps = np.diff(grid)
    if steps.size < 2 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValidationError('exterior problems need a uniform log-radius grid with at least 3 samples')
    return float(steps[0])


def solve_two_point(step: float, drift: float, coeff: np.ndarray, rhs: np.ndarray,
                    left: float, robin_rate: float, robin_shift: float = 0.0) -> np.ndarray:
    """Solve -z'' - drift z' + coeff z = rhs on a uniform grid.

    z(t_0) = left, and z'(t_n) = robin_rate z(t_n) + robin_shift through a ghost
    point. Returns z on all n + 1 samples.
    """
    n = coeff.size - 1
    inv2 = 1.0 / step ** 2
    half = drift / (2.0 * step)
    lower = -inv2 + half
    upper = -inv2 - half

    bands = np.zeros((3, n))
    bands[1] = 2.0 * inv2 + coeff[1:]
    bands[0, 1:] = upper
    bands[2, :-1] = lower
    b = np.array(rhs[1:], dtype=float)
    b[0] -= lower * left

    # ghost-point row at the outer end
    bands[2, n - 2] = -2.0 * inv2
    bands[1, n - 1] = 2.0 * inv2 - 2.0 * robin_rate / step - drift * robin_rate + coeff[n]
    b[n - 1] += 2.0 * robin_shift / step + drift * robin_shift

    z = np.empty(n + 1)
    z[0] = left
    z[1:] = solve_banded((1, 1), bands, b)
    return z


def fowler_operator(v: np.ndarray, step: float, params: Params) -> np.ndarray:
    """-v'' - 2 beta v' + gamma v on interior samples, with the solver's stencil"""
    second = (v[2:] - 2 * v[1:-1] + v[:-2]) / step ** 2
    first = (v[2:] - v[:-2]) / (2 * step)
    return -second - 2 * params.beta * first + params.gamma * v[1:-1]


def rate_bracket(q_tail: np.ndarray, params: Params) -> Tuple[float, float]:
    """Decay exponents for the smallest and largest tail value of r^2 V"""
    nu2 = params.nu ** 2
    fast = -params.nu_star - math.sqrt(max(nu2 - float(np.min(q_tail)), 0.0))
    slow = -params.nu_star - math.sqrt(max(nu2 - float(np.max(q_tail)), 0.0))
    return fast, slow


def check_coercive(prob: LinearHardyProblem, params: Params, tol: float = 1e-9):
    """Raise NoncoerciveError when r^2 V exceeds the Hardy bound nu^2 somewhere"""
    q = prob.scaled_potential
    nu2 = params.nu ** 2
    worst = float(np.max(q))
    if worst > nu2 + tol * max(1.0, nu2):
        i = int(np.argmax(q))
        raise NoncoerciveError(
            f'r^2 V = {worst:.10g} exceeds nu^2 = {nu2:.10g} at r = {math.exp(prob.log_r_grid[i]):.6g}')


def solve_linear_hardy(prob: LinearHardyProblem, params: Params,
                       tol: float = 1e-9) -> RadialProfile:
    """Minimal positive solution of -Delta h + mu h / r^2 = V h outside B_{R_K}.

    Args:
        prob (LinearHardyProblem): boundary value and V sampled on a uniform log-r grid
        params (Params): supplies N, nu and mu
        tol (float): slack allowed above the Hardy bound r^2 V <= nu^2

    Returns:
        RadialProfile: h on the problem grid, truncated with h'/h = alpha_trunc / r
    """
    if prob.boundary_value < 0:
        raise ValidationError(f'boundary value must be >= 0, got {prob.boundary_value}')
    grid = prob.log_r_grid
    step = _grid_step(grid)
    q = prob.scaled_potential
    check_coercive(prob, params, tol)
    if prob.boundary_value == 0:
        return RadialProfile(log_r_grid=grid, values=np.zeros_like(grid))

    alpha_trunc = -params.nu_star - math.sqrt(max(params.nu ** 2 - float(q[-1]), 0.0))
    h = solve_two_point(step, params.N - 2.0, params.mu - q, np.zeros_like(q),
                        prob.boundary_value, alpha_trunc)
    if np.min(h) < 0:
        logging.debug(f'linear solution dips to {np.min(h):.3e}; clipped at 0')
    return RadialProfile(log_r_grid=grid, values=np.maximum(h, 0.0), decay_class=DecayClass.FAST)


def march_base(start: Tuple[float, float], step: float, params: Params, count: int) -> np.ndarray:
    """Continue -v'' - 2 beta v' + gamma v = v^p forward from two samples, on the solver stencil.

    Returns count + 1 values; the last one is the ghost sample past the grid
    end. Near the attractor both modes of the recurrence decay.
    """
    beta, gamma, p = params.beta, params.gamma, params.p
    inv2 = 1.0 / step ** 2
    lead = inv2 + beta / step
    v = np.empty(count + 1)
    v[0], v[1] = start
    try:
        for i in range(1, count):
            here, back = float(v[i]), float(v[i - 1])
            v[i + 1] = ((2.0 * here - back) * inv2 + beta * back / step + gamma * here
                        - max(here, 0.0) ** p) / lead
    except OverflowError:
        v[-1] = math.inf
    if not np.all(np.isfinite(v)):
        raise NonConvergenceError('discrete base overflowed while marching outward')
    return v


def check_correction_order(h: np.ndarray, eta: np.ndarray):
    """0 < eta < h wherever h is resolvable; the shared boundary sample is skipped"""
    mask = np.zeros(h.size, dtype=bool)
    mask[1:] = h[1:] > TAIL_FLOOR * float(np.max(h))
    if not np.any(mask):
        return
    ratio = eta[mask] / h[mask]
    if np.any(ratio <= 0) or np.any(ratio >= 1):
        raise MonotonicityBrokenError(
            f'eta / h leaves (0, 1): range [{float(np.min(ratio)):.6g}, {float(np.max(ratio)):.6g}]')


class ExteriorSolver:
    """Sub/supersolution construction and monotone iteration for one problem.

    Base, corrections and iterates share one stencil and one Robin row, so the
    sub/supersolution inequalities hold for the discrete equations themselves.
    """

    def __init__(self, ext: ExteriorProblem, opts: Optional[SolverOptions] = None):
        self.ext = ext
        self.params = ext.params
        self.opts = opts or SolverOptions()
        self.grid = ext.base_solution.log_r_grid
        self.step = _grid_step(self.grid)
        self.k = self.params.k
        self.scale = np.exp(self.k * self.grid)
        self._validate()
        self.base_v, self.rho, self.robin_shift = self._discrete_base()
        self._corrections: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def _discrete_base(self) -> Tuple[np.ndarray, float, float]:
        """U* marched from its first two samples, with the Robin (rho, shift) it satisfies at the end"""
        params = self.params
        sampled = self.scale * self.ext.base_solution.values
        marched = march_base((float(sampled[0]), float(sampled[1])), self.step, params, self.grid.size)
        v, ghost = marched[:-1], float(marched[-1])
        end = float(v[-1])
        q_end = params.p * positive_power(end, params.p - 1)
        rho = -params.beta - math.sqrt(max(params.beta ** 2 + params.gamma - q_end, 0.0))
        slope = (ghost - float(v[-2])) / (2.0 * self.step)
        logging.debug(f'discrete base: max shift from sampled {float(np.max(np.abs(v - sampled))):.3e}, '
                      f'outer rate {rho:.6g}')
        return v, rho, slope - rho * end

    def _validate(self):
        params = self.params
        if params.p * params.gamma > params.nu ** 2:
            raise ParameterRangeError(
                f'exterior construction needs p*gamma <= nu^2, got {params.p * params.gamma:.10g} '
                f'> {params.nu ** 2:.10g}')
        if abs(self.grid[0] - math.log(self.ext.R_K)) > 1e-12 * max(1.0, abs(self.grid[0])):
            raise ValidationError('base solution grid must start at log(R_K)')
        boundary = float(self.ext.base_solution.values[0])
        if self.ext.psi < 0 or self.ext.psi > boundary * (1 + 1e-12):
            raise ParameterRangeError(
                f'psi must satisfy 0 <= psi <= U*(R_K) = {boundary:.10g}, got {self.ext.psi}')

    def _to_profile(self, v: np.ndarray, lam: Optional[float], decay=DecayClass.SLOW) -> RadialProfile:
        return RadialProfile(log_r_grid=self.grid, values=np.maximum(v / self.scale, 0.0),
                             lam=lam, decay_class=decay)

    def _boundary_v(self) -> float:
        return self.ext.R_K ** self.k * self.ext.psi

    def _correction(self, weight: float) -> np.ndarray:
        """Linear problem with potential weight * U*^{p-1} and data U*(R_K) - psi, in Fowler form"""
        params = self.params
        q = weight * positive_power(self.base_v, params.p - 1)
        data = max(float(self.base_v[0]) - self._boundary_v(), 0.0)
        prob = LinearHardyProblem(
            R_K=self.ext.R_K,
            boundary_value=data / self.scale[0],
            log_r_grid=self.grid,
            potential=q * np.exp(-2 * self.grid),
            decaying_rate_bracket=rate_bracket(q[self.grid >= self.grid[-1] - DECADE], params)
        )
        check_coercive(prob, params)
        if data == 0:
            return np.zeros_like(self.grid)
        h = solve_two_point(self.step, 2 * params.beta, params.gamma - q, np.zeros_like(q), data, self.rho)
        if np.min(h) < 0:
            logging.debug(f'correction with weight {weight:g} dips to {np.min(h):.3e}; clipped at 0')
        return np.maximum(h, 0.0)

    def corrections(self) -> Tuple[np.ndarray, np.ndarray]:
        """(h_psi, eta_psi) in Fowler form, checked for 0 < eta < h"""
        if self._corrections is None:
            h = self._correction(self.params.p)
            eta = self._correction(1.0)
            check_correction_order(h, eta)
            self._corrections = (h, eta)
        return self._corrections

    def linear_corrections(self) -> Tuple[RadialProfile, RadialProfile]:
        h, eta = self.corrections()
        return self._to_profile(h, None, DecayClass.FAST), self._to_profile(eta, None, DecayClass.FAST)

    def build_subsolution(self) -> RadialProfile:
        """U* - h_psi, h_psi solving the linear problem with potential p U*^{p-1}"""
        v = self.base_v - self.corrections()[0]
        v[0] = self._boundary_v()
        if np.any(v[1:] <= 0):
            i = 1 + int(np.argmin(v[1:]))
            raise MonotonicityBrokenError(f'subsolution not positive at r = {math.exp(self.grid[i]):.6g}')
        self.check_inequality(v, below=True)
        return self._to_profile(v, None)

    def build_supersolution(self) -> RadialProfile:
        """U* - eta_psi, eta_psi solving the linear problem with potential U*^{p-1}"""
        v = self.base_v - self.corrections()[1]
        v[0] = self._boundary_v()
        self.check_inequality(v, below=False)
        return self._to_profile(v, None)

    def _scaled_residual(self, v: np.ndarray) -> np.ndarray:
        residual = fowler_operator(v, self.step, self.params) - positive_power(v[1:-1], self.params.p)
        return residual / (max(float(np.max(v)), 1e-300) * max(1.0, self.params.gamma))

    def check_inequality(self, v: np.ndarray, below: bool):
        """Raise MonotonicityBrokenError when v fails the sub- (below) or supersolution inequality"""
        residual = self._scaled_residual(v)
        worst = float(np.max(residual)) if below else float(-np.min(residual))
        kind = 'subsolution' if below else 'supersolution'
        if worst > self.opts.inequality_tol:
            i = 1 + int(np.argmax(residual) if below else np.argmin(residual))
            raise MonotonicityBrokenError(
                f'{kind} inequality violated by {worst:.3e} at r = {math.exp(self.grid[i]):.6g} '
                f'(tolerance {self.opts.inequality_tol:.1e})')
        logging.debug(f'{kind} inequality holds up to {max(worst, 0.0):.3e}')

    def monotone_iterate(self, sub: RadialProfile, sup: RadialProfile) -> ExteriorSolution:
        """Iterate -v'' - 2 beta v' + (gamma + M) v = v_k^p + M v_k upward from the subsolution.

        M = p max(super_v^{p-1}) is one constant of the r^2-scaled equation.
        """
        params = self.params
        sub_v = self.scale * sub.values
        sup_v = self.scale * sup.values
        sub_v[0] = sup_v[0] = self._boundary_v()
        top = float(np.max(sup_v))
        slack = self.opts.sandwich_tol * top
        lam = self.ext.lam

        if np.any(sub_v > sup_v + slack):
            raise MonotonicityBrokenError('subsolution lies above the supersolution')

        shift = params.p * float(np.max(positive_power(sup_v, params.p - 1)))
        coeff = np.full(self.grid.size, params.gamma + shift)

        v = sub_v.copy()
        for iteration in range(1, self.opts.max_iters + 1):
            rhs = positive_power(v, params.p) + shift * v
            nxt = solve_two_point(self.step, 2 * params.beta, coeff, rhs, self._boundary_v(),
                                  self.rho, self.robin_shift)
            if np.any(nxt < v - slack) or np.any(nxt > sup_v + slack) or np.any(nxt < sub_v - slack):
                raise MonotonicityBrokenError(
                    f'iterate {iteration} left the sandwich [sub, super] (lambda={lambda_key(lam)})')
            change = float(np.max(np.abs(nxt - v))) / max(float(np.max(np.abs(nxt))), 1e-300)
            v = nxt
            if iteration % PROGRESS_EVERY == 0:
                logging.debug(f'monotone iteration {iteration}: relative change {change:.3e}')
            if change < self.opts.iteration_tol:
                logging.info(f'monotone iteration converged in {iteration} steps (lambda={lambda_key(lam)})')
                return self._finish(v, sub, sup, iteration)
        raise MaxIterationsError(
            f'monotone iteration did not converge in {self.opts.max_iters} steps (lambda={lambda_key(lam)})')

    def _finish(self, v: np.ndarray, sub: RadialProfile, sup: RadialProfile, iterations: int) -> ExteriorSolution:
        residual = float(np.max(np.abs(self._scaled_residual(v))))
        if residual > self.opts.residual_tol:
            raise NonConvergenceError(
                f'nonlinear residual {residual:.3e} above {self.opts.residual_tol:.1e} after {iterations} '
                f'iterations (lambda={lambda_key(self.ext.lam)})')
        profile = self._to_profile(v, self.ext.lam)
        return ExteriorSolution(
            problem=self.ext,
            profile=profile,
            subsolution=sub,
            supersolution=sup,
            iterations=iterations,
            residual=residual,
            tail_deviation=self._tail_deviation(v),
            discrete_base=self._to_profile(self.base_v, self.ext.lam)
        )

    def _tail_deviation(self, v: np.ndarray) -> float:
        """r^{nu_star} (U* - U) at the end of the resolvable tail, relative to its peak.

        Beyond the last sample where U* - U stays above round-off the
        difference carries no information.
        """
        gap = np.abs(self.base_v - v)
        deviation = gap * np.exp(self.params.beta * (self.grid - self.grid[0]))
        peak = float(np.max(deviation))
        resolvable = np.nonzero(gap >= TAIL_FLOOR * float(np.max(np.abs(v))))[0]
        if peak == 0 or resolvable.size == 0:
            return 0.0
        return float(deviation[resolvable[-1]] / peak)

    def solve(self) -> ExteriorSolution:
        sub = self.build_subsolution()
        sup = self.build_supersolution()
        return self.monotone_iterate(sub, sup)


def build_subsolution(ext: ExteriorProblem, opts: Optional[SolverOptions] = None) -> RadialProfile:
    return ExteriorSolver(ext, opts).build_subsolution()


def build_supersolution(ext: ExteriorProblem, opts: Optional[SolverOptions] = None) -> RadialProfile:
    return ExteriorSolver(ext, opts).build_supersolution()


def monotone_iterate(sub: RadialProfile, sup: RadialProfile, ext: ExteriorProblem,
                     opts: Optional[SolverOptions] = None) -> ExteriorSolution:
    return ExteriorSolver(ext, opts).monotone_iterate(sub, sup)


def solve_exterior(ext: ExteriorProblem, opts: Optional[SolverOptions] = None) -> ExteriorSolution:
    return ExteriorSolver(ext, opts).solve()


def lambda_threshold(template: ExteriorTemplate, traj: PhaseTrajectory) -> float:
    """lambda_psi = min{lambda : U_lambda(R_K) > psi}; 0 when psi = 0."""
    params = template.params
    if template.psi < 0:
        raise ValidationError(f'psi must be >= 0, got {template.psi}')
    singular_at_boundary = singular_coefficient(params) * template.R_K ** (-params.k)
    if template.psi >= singular_at_boundary:
        raise ParameterRangeError(
            f'psi = {template.psi} must be below U_inf(R_K) = {singular_at_boundary:.10g}')
    if template.psi == 0:
        return 0.0
    return lambda_for_value(traj, params, template.R_K, template.psi)


def make_problem(template: ExteriorTemplate, traj: Optional[PhaseTrajectory], lam: float,
                 opts: SolverOptions) -> ExteriorProblem:
    """Problem with base U_lambda sampled on the exterior grid of the template"""
    grid = exterior_grid(template.R_K, opts)
    base = sample_profile(traj, lam, template.params, grid)
    return ExteriorProblem(params=template.params, R_K=template.R_K, psi=template.psi, base_solution=base)


def _log_slope(t: np.ndarray, values: np.ndarray) -> float:
    positive = values > 0
    if np.count_nonzero(positive) < 3:
        return math.nan
    slope, _ = np.polyfit(t[positive], np.log(values[positive]), 1)
    return float(slope)


def distinctness_certificate(first: ExteriorSolution, second: ExteriorSolution) -> Dict[str, Any]:
    """Evidence that two family members differ: sup distance and tail separation.

    In the last decade where the two bases still differ above round-off,
    r^{nu_star} |U_i - U_j| must exceed the sum of r^{nu_star} |U*_i - U_i^psi|
    and the separation may not decay while the deviations do not grow.
    """
    params = first.problem.params
    grid = first.profile.log_r_grid
    if grid.size != second.profile.log_r_grid.size or not np.allclose(grid, second.profile.log_r_grid):
        raise ValidationError('distinctness needs solutions on a common grid')
    k, beta = params.k, params.beta
    scale = np.exp(k * grid)
    v_i, v_j = scale * first.profile.values, scale * second.profile.values
    base_i = scale * first.base.values
    base_j = scale * second.base.values
    sup_distance = float(np.max(np.abs(first.profile.values - second.profile.values)))

    resolvable = np.nonzero(np.abs(base_i - base_j) >= RESOLVE_FLOOR * float(np.max(base_i)))[0]
    record = {
        'lambda_i': first.problem.lam,
        'lambda_j': second.problem.lam,
        'sup_distance': sup_distance,
        'window': None,
        'separation': None,
        'deviation_i': None,
        'deviation_j': None,
        'separation_slope': None,
        'distinct': False
    }
    if resolvable.size < 3:
        return record
    end = int(resolvable[-1])
    window = (grid >= grid[end] - DECADE) & (grid <= grid[end])
    t = grid[window]
    weight = np.exp(beta * (t - grid[0]))
    separation = weight * np.abs(v_i[window] - v_j[window])
    dev_i = weight * np.abs(base_i[window] - v_i[window])
    dev_j = weight * np.abs(base_j[window] - v_j[window])
    separation_slope = _log_slope(t, separation)
    separated = bool(separation[-1] > dev_i[-1] + dev_j[-1])
    trend_ok = not (separation_slope < -0.02) if not math.isnan(separation_slope) else False
    record.update({
        'window': [float(math.exp(t[0])), float(math.exp(t[-1]))],
        'separation': float(separation[-1]),
        'deviation_i': float(dev_i[-1]),
        'deviation_j': float(dev_j[-1]),
        'separation_slope': separation_slope,
        'distinct': sup_distance > 0 and separated and trend_ok
    })
    return record


def continuum_family(template: ExteriorTemplate, lambda_list: Sequence[float], traj: Optional[PhaseTrajectory],
                     opts: Optional[SolverOptions] = None) -> ExteriorFamily:
    """Exterior solutions U_lambda^psi for every lambda above lambda_psi.

    Args:
        template (ExteriorTemplate): params, R_K and psi
        lambda_list (list): positive lambdas, math.inf for the singular base
        traj (PhaseTrajectory): normalised heteroclinic of the params
        opts (SolverOptions): grid and iteration settings

    Returns:
        ExteriorFamily: solutions in input order plus pairwise distinctness
    """
    opts = opts or SolverOptions()
    if not lambda_list:
        raise ValidationError('lambda list must not be empty')
    threshold = lambda_threshold(template, traj)
    for lam in lambda_list:
        if not lam > threshold:
            raise ParameterRangeError(f'lambda = {lam} must exceed lambda_psi = {threshold:.10g}')

    solutions: List[ExteriorSolution] = []
    for lam in lambda_list:
        ext = make_problem(template, traj, lam, opts)
        solutions.append(solve_exterior(ext, opts))

    distinctness = []
    for i in range(len(solutions)):
        for j in range(i + 1, len(solutions)):
            distinctness.append(distinctness_certificate(solutions[i], solutions[j]))
    return ExteriorFamily(solutions=solutions, lambda_threshold=threshold, distinctness=distinctness)
