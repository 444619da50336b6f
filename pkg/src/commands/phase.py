#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
phase: Fowler phase portrait of the heteroclinic orbit
"""
import click

from src.commands.output import emit, fail, out_path, solver_options
from src.utils.exponent_atlas import make_params
from src.utils.fowler_dynamics import equilibria, phase_portrait
from src.utils.heteroclinic_solver import shoot_heteroclinic, trajectory_metadata
from src.utils.serialization import PHASE_COLUMNS, write_csv, write_json


@click.command('phase')
@click.option('--N', 'N', type=int, required=True)
@click.option('--nu', type=float, required=True)
@click.option('--p', type=float, required=True)
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True)
@click.pass_context
def phase_cmd(ctx, N, nu, p, out_dir):
    """Rows (t, x, y, energy) plus equilibria and eigen data."""
    try:
        opts = solver_options(ctx)
        params = make_params(N, nu, p)
        traj = shoot_heteroclinic(params, opts)
        csv_file = out_path(out_dir, 'phase.csv')
        json_file = out_path(out_dir, 'phase.json')
        write_csv(csv_file, PHASE_COLUMNS, phase_portrait(params, traj))
        metadata = trajectory_metadata(traj, params, opts)
        metadata['equilibria'] = equilibria(params)
        write_json(json_file, metadata)
        emit({'files': [csv_file, json_file], 'samples': int(traj.t_grid.size)})
    except click.exceptions.Exit:
        raise
    except Exception as e:
        fail(e)
