#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
sweep: regime atlas over a (N, nu, p) grid
"""
import json
import logging

import click

from src.commands.output import emit, fail, out_path, solver_options
from src.config import worker_count
from src.models.sweep import SweepSpec
from src.utils.errors import ValidationError
from src.utils.serialization import write_csv
from src.utils.sweep import run_sweep, sweep_columns


@click.command('sweep')
@click.option('--spec', 'spec_file', type=click.Path(exists=True, dir_okay=False), required=True,
              help='JSON sweep spec: N_list, nu_grid, p_grid ("auto" or {min, max, count}), tasks')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), required=True)
@click.pass_context
def sweep_cmd(ctx, spec_file, out_dir):
    """One atlas.csv row per (N, nu, p); failing rows carry an error column."""
    try:
        try:
            with open(spec_file, 'r', encoding='utf-8') as handle:
                spec = SweepSpec.from_dict(json.load(handle))
        except json.JSONDecodeError as e:
            raise ValidationError(f'sweep spec is not valid JSON: {e}')
        workers = worker_count()
        rows = run_sweep(spec, solver_options(ctx), workers)
        path = out_path(out_dir, 'atlas.csv')
        write_csv(path, sweep_columns(spec), rows)
        failed = sum(1 for row in rows if row.get('error'))
        logging.info(f'sweep wrote {len(rows)} rows ({failed} failed) to {path}')
        emit({'files': [path], 'rows': len(rows), 'failed_rows': failed})
    except click.exceptions.Exit:
        raise
    except Exception as e:
        fail(e)
