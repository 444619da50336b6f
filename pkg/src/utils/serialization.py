#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
JSON and CSV output

JSON floats use Python's shortest round-trip repr; infinities are written as
the strings "inf" / "-inf", complex numbers as [re, im] and enums by value.
CSV floats use 17 significant digits so repeated runs are byte-identical.
"""
import csv
import io
import json
import math
import os
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from src.models.atlas import ExponentReport
from src.models.params import Params
from src.models.phase import PhaseTrajectory
from src.models.profile import RadialProfile
from src.utils.fowler_dynamics import energy_arrays

EXPONENT_COLUMNS = ['N', 'nu', 'p_lower', 'p_sharp', 'p_sobolev', 'p_minus', 'p_plus', 'p_upper', 'nu_bar', 'case']
# CSV column -> ExponentReport field, where the two differ
EXPONENT_FIELDS = {'case': 'lemma2_case'}
TRAJECTORY_COLUMNS = ['t', 'w', 'w_prime', 'energy']
PHASE_COLUMNS = ['t', 'x', 'y', 'energy']
PROFILE_COLUMNS = ['r', 'U', 'U_scaled']


def _float_token(value: float):
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    if math.isnan(value):
        return 'nan'
    return value


def to_jsonable(obj: Any) -> Any:
    """Plain JSON value tree of reports, models, numpy values and enums"""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float_token(float(obj))
    if isinstance(obj, complex):
        return [_float_token(obj.real), _float_token(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    raise TypeError(f'cannot serialise {type(obj).__name__}')


def from_jsonable(obj: Any) -> Any:
    """Inverse of the float tokens: "inf" / "-inf" / "nan" back to floats"""
    if isinstance(obj, str) and obj in ('inf', '-inf', 'nan'):
        return float(obj)
    if isinstance(obj, dict):
        return {key: from_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, list):
        return [from_jsonable(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False, allow_nan=False) + '\n'


def loads(text: str) -> Any:
    return from_jsonable(json.loads(text))


def exponent_report_from_json(text: str) -> ExponentReport:
    return ExponentReport.from_dict(loads(text))


def format_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return format(value, '.17g')
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def csv_text(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_text(path: str, text: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)


def write_json(path: str, obj: Any):
    write_text(path, dumps(obj))


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]):
    write_text(path, csv_text(columns, rows))


def exponent_cell(report: ExponentReport, column: str) -> Any:
    return getattr(report, EXPONENT_FIELDS.get(column, column))


def exponent_rows(reports: Sequence[ExponentReport]) -> List[Dict[str, Any]]:
    return [{column: exponent_cell(report, column) for column in EXPONENT_COLUMNS} for report in reports]


def trajectory_rows(traj: PhaseTrajectory, params: Params) -> List[Dict[str, float]]:
    energy = energy_arrays(traj.w, traj.w_prime, params)
    return [
        {'t': t, 'w': w, 'w_prime': y, 'energy': e}
        for t, w, y, e in zip(traj.t_grid.tolist(), traj.w.tolist(), traj.w_prime.tolist(), energy.tolist())
    ]


def profile_rows(profile: RadialProfile, params: Params) -> List[Dict[str, float]]:
    scaled = profile.scaled(params.k)
    return [
        {'r': r, 'U': u, 'U_scaled': s}
        for r, u, s in zip(profile.r.tolist(), profile.values.tolist(), scaled.tolist())
    ]
