#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
verify: acceptance harness; exit 0 only when every selected check passes
"""
import click

from src.commands.output import fail, out_path, solver_options
from src.utils.serialization import dumps, write_text
from src.utils.verification import harness, run_checks


@click.command('verify')
@click.option('--quick', is_flag=True, help='Fewer random samples, no exterior family')
@click.option('--check', 'only', multiple=True, help='Run only the named check (repeatable)')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None)
@click.pass_context
def verify_cmd(ctx, quick, only, out_dir):
    """Closed forms, orderings, heteroclinic asymptotics, certificates and exterior checks."""
    try:
        opts = solver_options(ctx)
        known = [name for name, _ in harness(opts, quick)]
        unknown = [name for name in only if name not in known]
        if unknown:
            raise click.BadParameter(f'unknown check(s) {unknown}; available: {known}', param_hint='--check')
        results = run_checks(opts, quick=quick, only=list(only))
        passed = all(result['passed'] for result in results)
        body = {'success': passed, 'checks': results}
        text = dumps(body)
        if out_dir is not None:
            write_text(out_path(out_dir, 'verify.json'), text)
        click.echo(text, nl=False)
    except (click.exceptions.Exit, click.BadParameter):
        raise
    except Exception as e:
        fail(e)
    if not passed:
        raise click.exceptions.Exit(1)
