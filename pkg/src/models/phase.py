from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np


class AttractorType(str, Enum):
    NODE = 'node'
    FOCUS = 'focus'
    CENTER = 'center'
    REPELLER = 'repeller'


class Approach(str, Enum):
    MONOTONE = 'monotone'
    SPIRAL = 'spiral'


@dataclass(frozen=True)
class PhaseState:
    """Point (x, y) = (w, w') of the Fowler plane"""

    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def to_dict(self):
        return {'x': self.x, 'y': self.y}


@dataclass(frozen=True)
class EigenData:
    """Linearisation of the Fowler field at the saddle (0, 0) and at the attractor"""

    alpha_plus: float
    alpha_minus: float
    alpha_star_plus: complex
    alpha_star_minus: complex
    eigvec_plus: Tuple[float, float]
    eigvec_minus: Tuple[float, float]
    attractor_type: AttractorType
    omega_spiral: float = 0.0

    @property
    def is_real(self) -> bool:
        return self.alpha_star_plus.imag == 0.0

    def to_dict(self):
        return {
            'alpha_plus': self.alpha_plus,
            'alpha_minus': self.alpha_minus,
            'alpha_star_plus': self.alpha_star_plus,
            'alpha_star_minus': self.alpha_star_minus,
            'eigvec_plus': list(self.eigvec_plus),
            'eigvec_minus': list(self.eigvec_minus),
            'attractor_type': self.attractor_type,
            'omega_spiral': self.omega_spiral
        }


@dataclass(frozen=True, eq=False)
class PhaseTrajectory:
    """Uniformly sampled Fowler trajectory.

    ``states`` is an (n, 2) array of (w, w') rows. ``normalization_shift`` is the
    normalised time of the integration start; ``integration_start`` indexes the
    first sample produced by the integrator (earlier samples come from the
    head expansion).
    """

    t_grid: np.ndarray
    states: np.ndarray
    normalization_shift: float = 0.0
    approach: Optional[Approach] = None
    arrival_time: Optional[float] = None
    integration_start: int = 0

    def __post_init__(self):
        t_grid = np.asarray(self.t_grid, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if t_grid.ndim != 1 or states.shape != (t_grid.size, 2):
            raise ValueError('states must be an (n, 2) array matching t_grid')
        if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0):
            raise ValueError('t_grid must be strictly increasing')
        object.__setattr__(self, 't_grid', t_grid)
        object.__setattr__(self, 'states', states)

    @property
    def w(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def w_prime(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def step(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    def state(self, index: int) -> PhaseState:
        return PhaseState(float(self.states[index, 0]), float(self.states[index, 1]))

    def metadata(self):
        return {
            'normalization_shift': self.normalization_shift,
            'approach': self.approach,
            'arrival_time': self.arrival_time,
            't_start': float(self.t_grid[0]),
            't_end': float(self.t_grid[-1]),
            'samples': int(self.t_grid.size)
        }


@dataclass(frozen=True)
class ApproachReport:
    approach: Approach
    crossing_times: List[float] = field(default_factory=list)
    predicted: Optional[Approach] = None

    @property
    def consistent(self) -> bool:
        return self.predicted is None or self.predicted == self.approach

    def mean_spacing(self, last: int = 10) -> Optional[float]:
        if len(self.crossing_times) < 2:
            return None
        tail = np.asarray(self.crossing_times[-(last + 1):])
        return float(np.mean(np.diff(tail)))

    def to_dict(self):
        return {
            'approach': self.approach,
            'predicted': self.predicted,
            'consistent': self.consistent,
            'crossings': len(self.crossing_times),
            'crossing_times': list(self.crossing_times),
            'mean_spacing': self.mean_spacing()
        }
