#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Solver options

All numeric knobs of the shooting, analysis and exterior solvers live here.
A JSON file passed with ``--config`` overrides any subset of them.
"""
import json
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Optional, Tuple

from src.utils.errors import ValidationError

WORKERS_ENV = 'HARDY_WORKERS'


@dataclass(frozen=True)
class SolverOptions:
    # heteroclinic shooting
    eps_start: float = 1e-6
    rtol: float = 1e-10
    atol: float = 1e-10
    tol_attr: float = 1e-9
    t_max: Optional[float] = None
    grid_step: float = 0.01
    head_span: float = 25.0
    manifold_correction: bool = False
    richardson: bool = True
    # exponent atlas
    root_tol: float = 1e-12
    # exterior problem
    exterior_span: float = 30.0
    exterior_step: float = 0.002
    max_iters: int = 500
    iteration_tol: float = 1e-9
    residual_tol: float = 1e-6
    inequality_tol: float = 1e-4
    sandwich_tol: float = 1e-6
    # diagnostics
    sign_deadband: float = 1e-12
    witness_lengths: Tuple[float, ...] = (5.0, 10.0, 20.0, 40.0)
    witness_margin: float = 1e-6

    def __post_init__(self):
        positive = ['eps_start', 'rtol', 'atol', 'tol_attr', 'grid_step', 'root_tol',
                    'exterior_span', 'exterior_step', 'iteration_tol', 'residual_tol',
                    'inequality_tol', 'sandwich_tol', 'sign_deadband']
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValidationError(f'option {name} must be positive, got {getattr(self, name)}')
        if self.head_span < 0:
            raise ValidationError(f'option head_span must be >= 0, got {self.head_span}')
        if self.t_max is not None and not self.t_max > 0:
            raise ValidationError(f'option t_max must be positive, got {self.t_max}')
        if self.max_iters < 1:
            raise ValidationError(f'option max_iters must be >= 1, got {self.max_iters}')
        if not self.witness_lengths or min(self.witness_lengths) <= 2:
            raise ValidationError('option witness_lengths must be lengths > 2 (two unit ramps)')

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['witness_lengths'] = list(self.witness_lengths)
        return data


def options_from_dict(overrides: Dict[str, Any], base: Optional[SolverOptions] = None) -> SolverOptions:
    """Apply a dict of overrides on top of ``base`` (defaults when omitted)."""
    base = base or SolverOptions()
    known = {f.name: f for f in fields(SolverOptions)}
    cleaned = {}
    for key, value in overrides.items():
        if key not in known:
            raise ValidationError(f'unknown solver option: {key}')
        default = getattr(base, key)
        if key == 'witness_lengths':
            if not isinstance(value, (list, tuple)):
                raise ValidationError('option witness_lengths must be a list of numbers')
            value = tuple(float(v) for v in value)
        elif key == 't_max':
            value = None if value is None else float(value)
        elif isinstance(default, bool):
            if not isinstance(value, bool):
                raise ValidationError(f'option {key} must be true or false')
        elif isinstance(default, int):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f'option {key} must be an integer')
        elif isinstance(default, float):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f'option {key} must be a number')
            value = float(value)
        cleaned[key] = value
    return replace(base, **cleaned)


def load_options(path: Optional[str]) -> SolverOptions:
    """Read solver options from a JSON file; defaults when ``path`` is None."""
    if path is None:
        return SolverOptions()
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f'cannot read config file {path}: {e}')
    if not isinstance(data, dict):
        raise ValidationError(f'config file {path} must contain a JSON object')
    return options_from_dict(data)


def worker_count() -> int:
    """Sweep worker count from the environment (1 when unset)."""
    raw = os.environ.get(WORKERS_ENV, '1')
    try:
        workers = int(raw)
    except ValueError:
        raise ValidationError(f'{WORKERS_ENV} must be an integer, got {raw!r}')
    if workers < 1:
        raise ValidationError(f'{WORKERS_ENV} must be >= 1, got {workers}')
    return workers
