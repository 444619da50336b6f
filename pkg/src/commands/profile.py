#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
profile: shoot the heteroclinic, export U_lambda and its diagnostics
"""
import logging

import click

from src.commands.output import emit, fail, out_path, parse_lambda, solver_options
from src.utils.exponent_atlas import classify_singular_stability, make_params
from src.utils.heteroclinic_solver import (build_profile, detect_approach, shoot_heteroclinic,
                                           trajectory_metadata)
from src.utils.profile_analysis import profile_diagnostics
from src.utils.serialization import (PROFILE_COLUMNS, TRAJECTORY_COLUMNS, profile_rows, trajectory_rows,
                                     write_csv, write_json)


@click.command('profile')
@click.option('--N', 'N', type=int, required=True)
@click.option('--nu', type=float, required=True)
@click.option('--p', type=float, required=True)
@click.option('--lambda', 'lam', default='1', show_default=True, help='Family parameter, or "inf"')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True)
@click.pass_context
def profile_cmd(ctx, N, nu, p, lam, out_dir):
    """Slow decay solution U_lambda with decay, Phragmen and stability diagnostics."""
    try:
        opts = solver_options(ctx)
        params = make_params(N, nu, p)
        lam = parse_lambda(lam)
        logging.info(f'Profile for N={N}, nu={nu}, p={p}, lambda={lam}.')
        traj = shoot_heteroclinic(params, opts)
        profile = build_profile(traj, lam, params)
        approach = detect_approach(traj, params)

        files = [out_path(out_dir, 'profile.csv'), out_path(out_dir, 'trajectory.csv'),
                 out_path(out_dir, 'diagnostics.json')]
        write_csv(files[0], PROFILE_COLUMNS, profile_rows(profile, params))
        write_csv(files[1], TRAJECTORY_COLUMNS, trajectory_rows(traj, params))
        diagnostics = {
            'metadata': trajectory_metadata(traj, params, opts),
            'lambda': lam,
            'regime': classify_singular_stability(params),
            'approach': approach,
            'diagnostics': profile_diagnostics(profile, params, opts)
        }
        write_json(files[2], diagnostics)
        emit({'files': files, 'certificate': diagnostics['diagnostics']['certificate']['verdict'],
              'approach': approach.approach})
    except click.exceptions.Exit:
        raise
    except Exception as e:
        fail(e)
