#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Acceptance harness

Each check returns a dict with its name, a pass flag, the elapsed time and a
detail block. ``run_checks`` runs them in a fixed order; a check that raises
is recorded as failed with the error message.
"""
import logging
import math
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.config import SolverOptions
from src.models.exterior import ExteriorTemplate, LinearHardyProblem
from src.models.phase import Approach
from src.models.profile import CertificateVerdict, DecayClass
from src.utils.exponent_atlas import (classify_singular_stability, exponent_report, joseph_lundgren_exponent,
                                      laplacian_sharp_exponent, make_params, singular_coefficient,
                                      stability_intervals)
from src.utils.exterior_solver import continuum_family, exterior_grid, solve_linear_hardy
from src.utils.fowler_dynamics import attractor_x, eigen_analysis, energy_arrays
from src.utils.heteroclinic_solver import (build_profile, detect_approach, rk4_oracle, shoot_heteroclinic,
                                           singular_profile)
from src.utils.profile_analysis import (classify_decay, radial_residual, stability_certificate,
                                        tail_sign_changes)

SEED = 20240601
STABLE_TRIPLES = [(15, 6.5, 3.0), (12, 5.0, 4.0), (11, 4.5, 10.0), (20, 9.0, 2.0), (14, 6.0, 3.5)]
UNSTABLE_TRIPLES = [(5, 1.5, 5.0), (6, 2.0, 4.0), (4, 1.0, 5.0), (8, 3.0, 2.5), (10, 4.0, 2.0)]
# shooting asymptotics run over both regimes, ten triples each
HETEROCLINIC_TRIPLES = (STABLE_TRIPLES
                        + [(15, 6.6, 3.0), (18, 8.0, 3.0), (25, 11.5, 2.5), (13, 5.5, 4.0), (22, 10.0, 3.0)]
                        + UNSTABLE_TRIPLES
                        + [(7, 2.0, 3.0), (9, 3.0, 2.2), (5, 1.0, 4.0), (12, 5.0, 2.0), (10, 3.5, 2.5)])


def random_pairs(rng: np.random.Generator, count: int) -> List[Tuple[int, float]]:
    Ns = rng.integers(3, 31, size=count)
    pairs = []
    for N in Ns:
        nu_star = (N - 2) / 2
        pairs.append((int(N), float(rng.uniform(0.05, 2.5 * max(nu_star, 1.0)))))
    return pairs


def check_closed_forms() -> Dict[str, Any]:
    worst_star = 0.0
    worst_bar = 0.0
    for N in range(11, 31):
        nu_star = (N - 2) / 2
        report = exponent_report(N, nu_star)
        worst_star = max(worst_star,
                         abs(report.p_sharp - laplacian_sharp_exponent(N)) / laplacian_sharp_exponent(N),
                         abs(report.p_minus - joseph_lundgren_exponent(N)) / joseph_lundgren_exponent(N))
        bar = exponent_report(N, report.nu_bar)
        target = (N + 2) / (N - 10)
        worst_bar = max(worst_bar, abs(bar.p_minus - target) / target, abs(bar.p_plus - target) / target)
    return {'passed': worst_star <= 1e-9 and worst_bar <= 1e-8,
            'detail': {'nu_star_rel_error': worst_star, 'nu_bar_rel_error': worst_bar}}


def check_ordering_chain(count: int = 10000) -> Dict[str, Any]:
    rng = np.random.default_rng(SEED)
    violations = []
    for N, nu in random_pairs(rng, count):
        r = exponent_report(N, nu)
        chain = [('one', 1.0), ('p_lower', r.p_lower), ('p_sharp', r.p_sharp), ('p_sobolev', r.p_sobolev)]
        if r.p_minus is not None:
            chain.append(('p_minus', r.p_minus))
        if r.p_plus is not None:
            chain.append(('p_plus', r.p_plus))
        chain.append(('p_upper', r.p_upper))
        ok = True
        for (name_a, a), (name_b, b) in zip(chain[:-1], chain[1:]):
            ok = ok and (a <= b if (name_a, name_b) == ('p_minus', 'p_plus') else a < b)
        if not ok and len(violations) < 10:
            violations.append({'N': N, 'nu': nu, 'chain': dict(chain)})
    return {'passed': not violations, 'detail': {'samples': count, 'violations': violations}}


def check_dual_path(count: int = 10000) -> Dict[str, Any]:
    rng = np.random.default_rng(SEED + 1)
    disagreements = []
    for N, nu in random_pairs(rng, count):
        p_lower = 1 + 2 / ((N - 2) / 2 + nu)
        p_hi = 1 + 2 / ((N - 2) / 2 - nu) if nu < (N - 2) / 2 else p_lower + 20
        p = float(rng.uniform(p_lower, p_hi))
        params = make_params(N, nu, p)
        if not params.p_lower < p < params.p_upper:
            continue
        lhs, rhs = p * params.gamma, nu ** 2
        if abs(lhs - rhs) <= 1e-9 * max(1.0, rhs):
            continue
        by_intervals = any(i.contains(p) for i in stability_intervals(N, nu))
        if (lhs <= rhs) != by_intervals and len(disagreements) < 10:
            disagreements.append({'N': N, 'nu': nu, 'p': p})
    return {'passed': not disagreements, 'detail': {'samples': count, 'disagreements': disagreements}}


def check_singular_residual() -> Dict[str, Any]:
    worst = 0.0
    points = 0
    grid = np.linspace(-5.0, 5.0, 401)
    for N in (3, 5, 8, 11, 15):
        for nu in np.linspace(0.2, (N - 2) / 2 + 2.0, 5):
            params = make_params(N, float(nu), 2.0)
            upper = params.p_upper if math.isfinite(params.p_upper) else params.p_lower + 10
            for p in np.linspace(params.p_lower, upper, 6)[1:-1]:
                params = make_params(N, float(nu), float(p))
                worst = max(worst, radial_residual(singular_profile(params, grid), params))
                points += 1
    return {'passed': worst <= 1e-12 and points >= 100, 'detail': {'points': points, 'max_residual': worst}}


def check_heteroclinic(opts: SolverOptions, triples) -> Dict[str, Any]:
    rows = []
    passed = True
    for N, nu, p in triples:
        params = make_params(N, nu, p)
        traj = shoot_heteroclinic(params, opts)
        profile = build_profile(traj, 1.0, params)
        C = singular_coefficient(params)
        tail = profile.values[-1] * math.exp(params.k * profile.log_r_grid[-1]) / C
        head = profile.values[0] * math.exp((params.nu_star - params.nu) * profile.log_r_grid[0])
        energy = energy_arrays(traj.w, traj.w_prime, params)
        energy_rise = float(np.max(np.diff(energy)))
        oracle = rk4_oracle(traj, params, substeps=2)
        oracle_error = float(np.max(np.abs(oracle[:, 0] - traj.w[traj.integration_start:])))
        ok = abs(tail - 1) <= 1e-3 and abs(head - 1) <= 5e-3 and energy_rise <= 1e-8 and oracle_error <= 1e-6
        passed = passed and ok
        rows.append({'N': N, 'nu': nu, 'p': p, 'tail_ratio': tail, 'head_ratio': head,
                     'energy_rise': energy_rise, 'oracle_error': oracle_error, 'passed': ok})
    return {'passed': passed, 'detail': rows}


def check_dichotomy(opts: SolverOptions) -> Dict[str, Any]:
    stable = make_params(15, 6.5, 3.0)
    traj = shoot_heteroclinic(stable, opts)
    # lambda_2 = e^{offset * step} keeps U_1 and U_2 on one grid: U_lambda(r) r^k = w(t + log lambda)
    offset = 70
    x_eq = attractor_x(stable)
    t = traj.t_grid[:-offset]
    low, high = traj.w[:-offset], traj.w[offset:]
    resolved = x_eq - high >= 1e-7 * x_eq
    ordered = bool(np.all(low[resolved] < high[resolved]) and np.all(high[resolved] < x_eq))
    separation = (high - low)[resolved] * np.exp(stable.beta * t[resolved])
    tail = t[resolved] >= t[resolved][-1] - math.log(10.0)
    separation_slope = float(np.polyfit(t[resolved][tail], np.log(separation[tail]), 1)[0])

    unstable = make_params(5, 1.5, 5.0)
    spiral = shoot_heteroclinic(unstable, opts)
    profile = build_profile(spiral, 1.0, unstable)
    singular = singular_profile(unstable, profile.log_r_grid)
    report = tail_sign_changes(profile, singular, math.exp(5.0), unstable, R_max=math.exp(20.0))
    spacing = float(np.mean(np.diff(report.locations[-11:]))) if report.count >= 2 else math.nan
    expected = math.pi / eigen_analysis(unstable).omega_spiral
    oscillating = report.count >= 3 and abs(spacing - expected) <= 0.05 * expected
    return {'passed': ordered and separation_slope >= 0 and oscillating,
            'detail': {'ordered': ordered, 'separation_slope': separation_slope,
                       'sign_changes': report.count, 'spacing': spacing, 'expected_spacing': expected}}


def check_linear_solver() -> Dict[str, Any]:
    params = make_params(15, 6.5, 3.0)
    errors = {}
    for step in (0.004, 0.002):
        grid = exterior_grid(1.0, SolverOptions(exterior_step=step))
        for name, q in (('free', 0.0), ('singular', params.p * params.gamma)):
            prob = LinearHardyProblem(R_K=1.0, boundary_value=1.0, log_r_grid=grid,
                                      potential=q * np.exp(-2 * grid))
            h = solve_linear_hardy(prob, params)
            rate = -params.nu_star - math.sqrt(params.nu ** 2 - q)
            exact = np.exp(rate * grid)
            tail = grid >= grid[-1] - 1.0
            errors[(name, step)] = (float(np.max(np.abs(h.values - exact))),
                                    float(np.max(np.abs(h.values[tail] - exact[tail]))))
    ratios = {name: errors[(name, 0.004)][0] / errors[(name, 0.002)][0] for name in ('free', 'singular')}
    tails = {name: errors[(name, 0.002)][1] for name in ('free', 'singular')}
    passed = all(3.0 <= r <= 5.0 for r in ratios.values()) and all(t <= 1e-6 for t in tails.values())
    return {'passed': passed, 'detail': {'convergence_ratio': ratios, 'tail_error': tails}}


def check_exterior(opts: SolverOptions) -> Dict[str, Any]:
    params = make_params(15, 6.5, 3.0)
    traj = shoot_heteroclinic(params, opts)
    family = continuum_family(ExteriorTemplate(params, 1.0, 0.0), [1.0, 2.0, 4.0, math.inf], traj, opts)
    rows = []
    passed = family.all_distinct
    for solution in family.solutions:
        fit = classify_decay(solution.profile, params)
        below = bool(np.all(solution.profile.values <= solution.base.values * (1 + 1e-9)))
        positive = bool(np.all(solution.profile.values[1:] > 0))
        ok = (below and positive and solution.residual <= opts.residual_tol
              and fit.classification == DecayClass.SLOW and fit.limit_error is not None
              and fit.limit_error <= 1e-3 and solution.tail_deviation <= 1e-2)
        passed = passed and ok
        rows.append({'lambda': solution.problem.lam, 'iterations': solution.iterations,
                     'residual': solution.residual, 'limit_error': fit.limit_error,
                     'tail_deviation': solution.tail_deviation, 'passed': ok})
    return {'passed': passed, 'detail': {'solutions': rows, 'all_distinct': family.all_distinct}}


def check_certificates(opts: SolverOptions) -> Dict[str, Any]:
    rows = []
    passed = True
    for N, nu, p in STABLE_TRIPLES:
        params = make_params(N, nu, p)
        traj = shoot_heteroclinic(params, opts)
        verdict = stability_certificate(build_profile(traj, 1.0, params), params, opts).verdict
        ok = verdict == CertificateVerdict.CERTIFIED_STABLE
        passed = passed and ok
        rows.append({'N': N, 'nu': nu, 'p': p, 'profile': 'U_1', 'verdict': verdict})
    grid = np.linspace(-10.0, 40.0, 5001)
    for N, nu, p in UNSTABLE_TRIPLES + [(7, 2.0, 3.0), (9, 3.0, 2.2), (3, 0.4, 7.0), (5, 1.0, 4.0),
                                        (4, 0.5, 4.0)]:
        params = make_params(N, nu, p)
        if classify_singular_stability(params).value != 'unstable-oscillatory':
            continue
        verdict = stability_certificate(singular_profile(params, grid), params, opts).verdict
        ok = verdict == CertificateVerdict.WITNESS_UNSTABLE
        passed = passed and ok
        rows.append({'N': N, 'nu': nu, 'p': p, 'profile': 'U_inf', 'verdict': verdict})
    return {'passed': passed, 'detail': rows}


def check_approach(opts: SolverOptions) -> Dict[str, Any]:
    rows = []
    passed = True
    for N, nu, p in STABLE_TRIPLES + UNSTABLE_TRIPLES:
        params = make_params(N, nu, p)
        report = detect_approach(shoot_heteroclinic(params, opts), params)
        expected = Approach.MONOTONE if classify_singular_stability(params).value == 'stable-ordered' \
            else Approach.SPIRAL
        ok = report.approach == expected and report.consistent
        passed = passed and ok
        rows.append({'N': N, 'nu': nu, 'p': p, 'approach': report.approach, 'passed': ok})
    return {'passed': passed, 'detail': rows}


def harness(opts: SolverOptions, quick: bool = False) -> List[Tuple[str, Callable[[], Dict[str, Any]]]]:
    samples = 1000 if quick else 10000
    checks = [
        ('closed_forms', check_closed_forms),
        ('ordering_chain', lambda: check_ordering_chain(samples)),
        ('dual_path', lambda: check_dual_path(samples)),
        ('singular_residual', check_singular_residual),
        ('heteroclinic_asymptotics', lambda: check_heteroclinic(
            opts, STABLE_TRIPLES[:2] + UNSTABLE_TRIPLES[:2] if quick else HETEROCLINIC_TRIPLES)),
        ('approach', lambda: check_approach(opts)),
        ('dichotomy', lambda: check_dichotomy(opts)),
        ('linear_solver', check_linear_solver),
        ('certificates', lambda: check_certificates(opts)),
    ]
    if not quick:
        checks.append(('exterior', lambda: check_exterior(opts)))
    return checks


def run_checks(opts: Optional[SolverOptions] = None, quick: bool = False,
               only: Optional[List[str]] = None) -> List[Dict[str, Any]]:
    opts = opts or SolverOptions()
    results = []
    for name, check in harness(opts, quick):
        if only and name not in only:
            continue
        started = time.perf_counter()
        try:
            outcome = check()
        except Exception as e:
            logging.error(f'check {name} raised: {e}')
            outcome = {'passed': False, 'detail': {'error': str(e)}}
        elapsed = time.perf_counter() - started
        logging.info(f'check {name}: {"pass" if outcome["passed"] else "FAIL"} in {elapsed:.2f}s')
        results.append({'name': name, 'passed': outcome['passed'], 'seconds': round(elapsed, 3),
                        'detail': outcome['detail']})
    return results
