import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.models.params import Params
from src.models.profile import RadialProfile


@dataclass(frozen=True)
class ExteriorTemplate:
    """Exterior data shared by every member of a lambda family"""

    params: Params
    R_K: float
    psi: float

    def to_dict(self):
        return {'params': self.params.to_dict(), 'R_K': self.R_K, 'psi': self.psi}


@dataclass(frozen=True, eq=False)
class ExteriorProblem:
    """Radial exterior Dirichlet problem on the complement of the ball B_{R_K}"""

    params: Params
    R_K: float
    psi: float
    base_solution: RadialProfile

    @property
    def lam(self) -> Optional[float]:
        return self.base_solution.lam

    def to_dict(self):
        return {
            'params': self.params.to_dict(),
            'R_K': self.R_K,
            'psi': self.psi,
            'lambda': self.lam
        }


@dataclass(frozen=True, eq=False)
class LinearHardyProblem:
    """-Delta h + mu h / r^2 = V h outside B_{R_K}, h = boundary_value on the sphere.

    ``potential`` samples V(r) on ``log_r_grid``; the grid starts at log(R_K)
    and must be uniform.
    """

    R_K: float
    boundary_value: float
    log_r_grid: np.ndarray
    potential: np.ndarray
    decaying_rate_bracket: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        grid = np.asarray(self.log_r_grid, dtype=float)
        potential = np.asarray(self.potential, dtype=float)
        if potential.shape != grid.shape:
            raise ValueError('potential must be sampled on log_r_grid')
        object.__setattr__(self, 'log_r_grid', grid)
        object.__setattr__(self, 'potential', potential)

    @property
    def scaled_potential(self) -> np.ndarray:
        """r^2 V(r)"""
        return self.potential * np.exp(2 * self.log_r_grid)


@dataclass(frozen=True, eq=False)
class ExteriorSolution:
    problem: ExteriorProblem
    profile: RadialProfile
    subsolution: RadialProfile
    supersolution: RadialProfile
    iterations: int
    residual: float
    tail_deviation: float
    # U* marched on the stencil of the iterates; None means the sampled base
    discrete_base: Optional[RadialProfile] = None

    @property
    def base(self) -> RadialProfile:
        return self.discrete_base if self.discrete_base is not None else self.problem.base_solution

    def certificate(self) -> Dict[str, Any]:
        values = self.profile.values
        sampled = self.problem.base_solution.values
        return {
            'problem': self.problem.to_dict(),
            'iterations': self.iterations,
            'residual': self.residual,
            'tail_deviation': self.tail_deviation,
            'min_interior_value': float(np.min(values[1:])),
            'max_excess_over_base': float(np.max(values - self.base.values)),
            'max_base_discretisation_gap': float(np.max(np.abs(self.base.values - sampled))),
            'boundary_value': float(values[0])
        }


@dataclass(frozen=True, eq=False)
class ExteriorFamily:
    solutions: List[ExteriorSolution]
    lambda_threshold: float
    distinctness: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def all_distinct(self) -> bool:
        return all(item['distinct'] for item in self.distinctness)

    def to_dict(self):
        return {
            'lambda_threshold': self.lambda_threshold,
            'lambdas': [s.problem.lam for s in self.solutions],
            'solutions': [s.certificate() for s in self.solutions],
            'distinctness': self.distinctness,
            'all_distinct': self.all_distinct
        }


def lambda_key(lam: Optional[float]) -> str:
    if lam is None:
        return 'none'
    if math.isinf(lam):
        return 'inf'
    return format(lam, 'g')
