#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
exterior: slow decay solutions outside a ball from a JSON problem file

Problem file keys: N, nu, p, R_K, psi, and either ``lambda`` or
``lambda_list`` (numbers or "inf"); optional ``options`` override the solver
options for this problem only.
"""
import json
import logging
import math

import click

from src.commands.output import emit, fail, out_path, parse_lambda, solver_options
from src.config import options_from_dict
from src.models.exterior import ExteriorTemplate, lambda_key
from src.utils.errors import ValidationError
from src.utils.exponent_atlas import make_params
from src.utils.exterior_solver import continuum_family
from src.utils.heteroclinic_solver import shoot_heteroclinic
from src.utils.serialization import PROFILE_COLUMNS, profile_rows, write_csv, write_json


def read_problem(path: str) -> dict:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise ValidationError(f'problem file is not valid JSON: {e}')
    if not isinstance(data, dict):
        raise ValidationError('problem file must contain a JSON object')
    missing = [key for key in ('N', 'nu', 'p', 'R_K', 'psi') if key not in data]
    if missing:
        raise ValidationError(f'problem file misses {missing}')
    if ('lambda' in data) == ('lambda_list' in data):
        raise ValidationError('give exactly one of "lambda" and "lambda_list"')
    return data


@click.command('exterior')
@click.option('--problem', 'problem_file', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True)
@click.pass_context
def exterior_cmd(ctx, problem_file, out_dir):
    """Solve the exterior problem for each lambda and certify distinctness."""
    try:
        data = read_problem(problem_file)
        opts = options_from_dict(data.get('options') or {}, solver_options(ctx))
        params = make_params(data['N'], data['nu'], data['p'])
        try:
            template = ExteriorTemplate(params, float(data['R_K']), float(data['psi']))
        except (TypeError, ValueError):
            raise ValidationError('R_K and psi must be numbers')
        raw = data['lambda_list'] if 'lambda_list' in data else [data['lambda']]
        if not isinstance(raw, list):
            raise ValidationError('lambda_list must be a list')
        lambdas = [parse_lambda(value) for value in raw]

        needs_orbit = template.psi > 0 or any(math.isfinite(lam) for lam in lambdas)
        traj = shoot_heteroclinic(params, opts) if needs_orbit else None
        logging.info(f'Exterior family for {len(lambdas)} lambda(s), R_K={template.R_K}, psi={template.psi}.')
        family = continuum_family(template, lambdas, traj, opts)

        files = []
        for solution in family.solutions:
            path = out_path(out_dir, f'profile_lambda_{lambda_key(solution.problem.lam)}.csv')
            write_csv(path, PROFILE_COLUMNS, profile_rows(solution.profile, params))
            files.append(path)
        certificate_file = out_path(out_dir, 'certificate.json')
        write_json(certificate_file, {'template': template, 'options': opts.to_dict(), 'family': family})
        files.append(certificate_file)
        emit({'files': files, 'lambda_threshold': family.lambda_threshold,
              'all_distinct': family.all_distinct,
              'iterations': [s.iterations for s in family.solutions]})
    except click.exceptions.Exit:
        raise
    except Exception as e:
        fail(e)
