import math

import pytest

from src.models.sweep import GridSpec, SweepSpec
from src.utils.errors import ValidationError
from src.utils.sweep import auto_p_values, run_sweep, sweep_columns, sweep_points


def spec(**overrides):
    data = {'N_list': [5, 3], 'nu_grid': {'min': 0.5, 'max': 1.5, 'count': 2},
            'p_grid': {'min': 4.0, 'max': 4.0, 'count': 1}, 'tasks': ['exponents']}
    data.update(overrides)
    return SweepSpec.from_dict(data)


def test_spec_validation():
    with pytest.raises(ValidationError):
        GridSpec(min=1.0, max=0.0, count=3)
    with pytest.raises(ValidationError):
        spec(tasks=['exponents', 'plot'])
    with pytest.raises(ValidationError):
        SweepSpec.from_dict({'nu_grid': {'min': 1, 'max': 2, 'count': 2}})
    assert spec(p_grid='auto').p_grid is None


def test_columns_follow_tasks():
    columns = sweep_columns(spec(tasks=['shoot', 'exponents']))
    assert columns[:3] == ['N', 'nu', 'p']
    assert columns.index('p_upper') < columns.index('approach')
    assert columns[-1] == 'error'


def test_points_are_sorted():
    points = sweep_points(spec())
    assert points == [(3, 0.5, 4.0), (3, 1.5, 4.0), (5, 0.5, 4.0), (5, 1.5, 4.0)]


def test_auto_p_values_stay_inside_existence_range():
    values = auto_p_values(5, 0.5, 3)
    # p_S = 7/3, p_upper = 3
    assert len(values) == 3
    assert all(7 / 3 < p < 3 for p in values)
    assert auto_p_values(5, 2.0, 4)[-1] < 7 / 3 + 10
    assert auto_p_values(5, 2.0, 4) == sorted(auto_p_values(5, 2.0, 4))


def test_rows_keep_going_after_failures():
    rows = run_sweep(spec(N_list=[2, 5], nu_grid={'min': 1.0, 'max': 1.0, 'count': 1}))
    assert [row['N'] for row in rows] == [2, 5]
    assert rows[0]['error'].startswith('VALIDATION')
    assert 'error' not in rows[1]
    assert rows[1]['p_upper'] == pytest.approx(5.0)
    assert not math.isnan(rows[1]['p_sharp'])


def test_empty_task_list():
    assert run_sweep(spec(tasks=[])) == []
