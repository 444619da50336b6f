#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Parameter sweeps over (N, nu, p)

Rows are computed independently (in worker processes when more than one
worker is configured) and always emitted in lexicographic (N, nu, p) order.
A failing row keeps its error message and the sweep goes on.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.config import SolverOptions
from src.models.exterior import ExteriorTemplate
from src.models.sweep import SweepSpec
from src.utils.errors import HardyError
from src.utils.exponent_atlas import classify_singular_stability, exponent_report, make_params
from src.utils.exterior_solver import continuum_family
from src.utils.heteroclinic_solver import build_profile, shoot_heteroclinic
from src.utils.profile_analysis import classify_decay, stability_certificate
from src.utils.serialization import exponent_cell

TASK_COLUMNS = {
    'exponents': ['p_lower', 'p_sharp', 'p_sobolev', 'p_minus', 'p_plus', 'p_upper', 'nu_bar', 'case', 'verdict'],
    'shoot': ['approach', 'arrival_time', 'normalization_shift'],
    'certify': ['decay_class', 'certificate'],
    'exterior': ['exterior_iterations', 'exterior_residual']
}
AUTO_SPAN = 10.0


def sweep_columns(spec: SweepSpec) -> List[str]:
    columns = ['N', 'nu', 'p']
    for task in TASK_COLUMNS:
        if task in spec.tasks:
            columns.extend(TASK_COLUMNS[task])
    return columns + ['error']


def auto_p_values(N: int, nu: float, count: int) -> List[float]:
    """Interior points of (p_S, p_upper), or (p_S, p_S + 10) when p_upper is infinite"""
    nu_star = (N - 2) / 2
    p_sobolev = (N + 2) / (N - 2)
    p_upper = 1 + 2 / (nu_star - nu) if nu < nu_star else math.inf
    upper = p_upper if math.isfinite(p_upper) else p_sobolev + AUTO_SPAN
    if upper <= p_sobolev:
        return []
    return [float(v) for v in np.linspace(p_sobolev, upper, count + 2)[1:-1]]


def sweep_points(spec: SweepSpec) -> List[Tuple[int, float, float]]:
    points = []
    for N in sorted(set(spec.N_list)):
        for nu in sorted(set(spec.nu_grid.values())):
            if spec.p_grid is None:
                p_values = auto_p_values(N, nu, spec.auto_count) if N >= 3 and nu > 0 else []
            else:
                p_values = spec.p_grid.values()
            for p in sorted(set(p_values)):
                points.append((N, nu, p))
    return points


def sweep_row(point: Tuple[int, float, float], tasks: Tuple[str, ...], opts: SolverOptions) -> Dict[str, Any]:
    """All requested tasks for one (N, nu, p); the first failure ends the row."""
    N, nu, p = point
    row: Dict[str, Any] = {'N': N, 'nu': nu, 'p': p}
    try:
        params = make_params(N, nu, p)
        if 'exponents' in tasks:
            report = exponent_report(N, nu)
            for column in TASK_COLUMNS['exponents'][:-1]:
                row[column] = exponent_cell(report, column)
            row['verdict'] = classify_singular_stability(params)
        traj = None
        if 'shoot' in tasks or 'certify' in tasks:
            traj = shoot_heteroclinic(params, opts)
            row['approach'] = traj.approach
            row['arrival_time'] = traj.arrival_time
            row['normalization_shift'] = traj.normalization_shift
        if 'certify' in tasks:
            profile = build_profile(traj, 1.0, params)
            row['decay_class'] = classify_decay(profile, params).classification
            row['certificate'] = stability_certificate(profile, params, opts).verdict
        if 'exterior' in tasks:
            if traj is None:
                traj = shoot_heteroclinic(params, opts)
            family = continuum_family(ExteriorTemplate(params, 1.0, 0.0), [1.0], traj, opts)
            row['exterior_iterations'] = family.solutions[0].iterations
            row['exterior_residual'] = family.solutions[0].residual
    except HardyError as e:
        row['error'] = f'{e.code}: {e}'
        logging.warning(f'sweep row N={N}, nu={nu}, p={p} failed: {e}')
    except Exception as e:
        row['error'] = f'ERROR: {e}'
        logging.warning(f'sweep row N={N}, nu={nu}, p={p} failed unexpectedly: {e}')
    return row


def _row_job(args):
    return sweep_row(*args)


def run_sweep(spec: SweepSpec, opts: Optional[SolverOptions] = None, workers: int = 1) -> List[Dict[str, Any]]:
    """Rows of the regime atlas; empty when no tasks are requested."""
    opts = opts or SolverOptions()
    if not spec.tasks:
        return []
    points = sweep_points(spec)
    jobs = [(point, tuple(spec.tasks), opts) for point in points]
    logging.info(f'sweep of {len(jobs)} points with {workers} worker(s)')
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs))
    else:
        rows = [_row_job(job) for job in jobs]
    return rows
