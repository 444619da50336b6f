import json
import math

import numpy as np
import pytest

from src.models.atlas import RegimeVerdict
from src.models.profile import RadialProfile
from src.utils.exponent_atlas import exponent_report, make_params
from src.utils.serialization import (EXPONENT_COLUMNS, csv_text, dumps, exponent_report_from_json, exponent_rows,
                                     format_cell, loads, profile_rows, to_jsonable)


def test_special_values_in_json():
    text = dumps({'upper': math.inf, 'lower': -math.inf, 'root': complex(-1.0, 2.0),
                  'verdict': RegimeVerdict.STABLE, 'count': np.int64(3), 'value': np.float64(0.5)})
    raw = json.loads(text)
    assert raw == {'upper': 'inf', 'lower': '-inf', 'root': [-1.0, 2.0], 'verdict': 'stable-ordered',
                   'count': 3, 'value': 0.5}
    assert loads(text)['upper'] == math.inf
    assert text.endswith('\n')


def test_unknown_objects_are_rejected():
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_exponent_report_survives_json():
    report = exponent_report(15, 6.6)
    assert exponent_report_from_json(dumps(report)) == report


def test_csv_cells():
    assert format_cell(0.1) == '0.10000000000000001'
    assert format_cell(math.inf) == 'inf'
    assert format_cell(None) == ''
    assert format_cell(True) == 'true'
    assert format_cell(RegimeVerdict.UNSTABLE) == 'unstable-oscillatory'


def test_exponent_csv_row():
    text = csv_text(EXPONENT_COLUMNS, exponent_rows([exponent_report(10, 4.0)]))
    header, row = text.splitlines()
    assert header == ','.join(EXPONENT_COLUMNS)
    cells = dict(zip(EXPONENT_COLUMNS, row.split(',')))
    assert cells['N'] == '10'
    assert cells['p_upper'] == 'inf'
    assert cells['p_minus'] == ''
    assert cells['case'] == 'c'


def test_exponent_csv_header_order():
    assert ','.join(EXPONENT_COLUMNS) == 'N,nu,p_lower,p_sharp,p_sobolev,p_minus,p_plus,p_upper,nu_bar,case'
    text = csv_text(EXPONENT_COLUMNS, exponent_rows([exponent_report(11, 4.5)]))
    header, row = text.splitlines()
    cells = dict(zip(header.split(','), row.split(',')))
    assert float(cells['p_sharp']) < float(cells['p_sobolev']) < float(cells['p_minus'])
    assert cells['p_plus'] == '' and cells['p_upper'] == 'inf'
    assert cells['case'] == 'b'


def test_empty_csv_keeps_header():
    assert csv_text(['a', 'b'], []) == 'a,b\n'


def test_profile_rows():
    params = make_params(15, 6.5, 3.0)
    profile = RadialProfile(log_r_grid=np.array([0.0, 1.0]), values=np.array([2.0, 1.0]))
    rows = profile_rows(profile, params)
    assert rows[0] == {'r': 1.0, 'U': 2.0, 'U_scaled': 2.0}
    assert rows[1]['r'] == pytest.approx(math.e)
    assert rows[1]['U_scaled'] == pytest.approx(math.e)
