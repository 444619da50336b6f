from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.utils.errors import ValidationError

TASKS = ('exponents', 'shoot', 'certify', 'exterior')


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError(f'grid count must be >= 1, got {self.count}')
        if self.max < self.min:
            raise ValidationError(f'grid max {self.max} is below min {self.min}')

    def values(self) -> List[float]:
        if self.count == 1:
            return [float(self.min)]
        return [float(v) for v in np.linspace(self.min, self.max, self.count)]

    def to_dict(self):
        return {'min': self.min, 'max': self.max, 'count': self.count}


@dataclass(frozen=True)
class SweepSpec:
    """Parameter sweep over (N, nu, p); p_grid None means 'auto'"""

    N_list: Tuple[int, ...]
    nu_grid: GridSpec
    p_grid: Optional[GridSpec]
    tasks: Tuple[str, ...]
    auto_count: int = 5

    def __post_init__(self):
        if not self.N_list:
            raise ValidationError('N_list must not be empty')
        unknown = [t for t in self.tasks if t not in TASKS]
        if unknown:
            raise ValidationError(f'unknown sweep tasks {unknown}, supported: {list(TASKS)}')
        if self.auto_count < 1:
            raise ValidationError('auto p-grid count must be >= 1')

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepSpec':
        try:
            N_list = tuple(int(n) for n in data['N_list'])
            nu_grid = GridSpec(**data['nu_grid'])
            raw_p = data.get('p_grid', 'auto')
            auto_count = 5
            if raw_p == 'auto' or raw_p is None:
                p_grid = None
            elif isinstance(raw_p, dict) and raw_p.get('auto'):
                p_grid = None
                auto_count = int(raw_p.get('count', 5))
            else:
                p_grid = GridSpec(**raw_p)
            tasks = tuple(data.get('tasks', ['exponents']))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f'invalid sweep spec: {e}')
        return cls(N_list=N_list, nu_grid=nu_grid, p_grid=p_grid, tasks=tasks, auto_count=auto_count)

    def to_dict(self):
        return {
            'N_list': list(self.N_list),
            'nu_grid': self.nu_grid.to_dict(),
            'p_grid': 'auto' if self.p_grid is None else self.p_grid.to_dict(),
            'tasks': list(self.tasks)
        }
