#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
exponents: critical exponent atlas of one (N, nu)
"""
import logging

import click

from src.commands.output import emit, fail, out_path
from src.utils.exponent_atlas import exponent_report
from src.utils.serialization import csv_text, dumps, EXPONENT_COLUMNS, exponent_rows, write_text


@click.command('exponents')
@click.option('--N', 'N', type=int, required=True, help='Space dimension, N >= 3')
@click.option('--nu', type=float, required=True, help='Hardy coupling nu > 0')
@click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default='json', show_default=True)
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
              help='Write exponents.json / exponents.csv here instead of stdout')
def exponents_cmd(N, nu, fmt, out_dir):
    """Critical exponents, stability intervals and case label."""
    try:
        logging.info(f'Exponent atlas for N={N}, nu={nu}.')
        report = exponent_report(N, nu)
        if fmt == 'csv':
            text = csv_text(EXPONENT_COLUMNS, exponent_rows([report]))
            if out_dir is None:
                click.echo(text, nl=False)
                return
            path = out_path(out_dir, 'exponents.csv')
            write_text(path, text)
            emit({'files': [path]})
            return
        if out_dir is None:
            emit({'report': report})
            return
        path = out_path(out_dir, 'exponents.json')
        write_text(path, dumps(report))
        emit({'files': [path], 'report': report})
    except click.exceptions.Exit:
        raise
    except Exception as e:
        fail(e)
