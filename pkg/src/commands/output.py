#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Shared output helpers of the CLI commands

Successful commands print one JSON object with ``success: true`` on stdout;
failures print the error dict and exit with the error's exit code.
"""
import logging
import math
import os
from typing import Any, Dict

import click

from src.config import SolverOptions
from src.utils.errors import HardyError, ValidationError
from src.utils.serialization import dumps


def emit(payload: Dict[str, Any]):
    body = {'success': True}
    body.update(payload)
    click.echo(dumps(body), nl=False)


def fail(error: Exception):
    if isinstance(error, HardyError):
        click.echo(dumps(error.to_dict()), nl=False)
        raise click.exceptions.Exit(error.exit_code)
    logging.exception(f'unexpected failure: {error}')
    click.echo(dumps({'success': False, 'error': str(error), 'code': 'ERROR'}), nl=False)
    raise click.exceptions.Exit(1)


def solver_options(ctx: click.Context) -> SolverOptions:
    obj = ctx.find_root().obj or {}
    return obj.get('opts') or SolverOptions()


def out_path(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def parse_lambda(value: Any) -> float:
    """Positive float or the string 'inf'"""
    try:
        lam = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f'lambda must be a positive number or "inf", got {value!r}')
    if math.isnan(lam) or not lam > 0:
        raise ValidationError(f'lambda must be positive, got {value!r}')
    return lam
