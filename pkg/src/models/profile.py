import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np


class DecayClass(str, Enum):
    SLOW = 'slow'
    FAST = 'fast'
    UNCLASSIFIED = 'unclassified'


class CertificateVerdict(str, Enum):
    CERTIFIED_STABLE = 'certified_stable'
    WITNESS_UNSTABLE = 'witness_unstable'
    INCONCLUSIVE = 'inconclusive'


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Radial function U(r) sampled on a log-radius grid.

    ``slopes`` holds dU/dt = r U'(r) when known exactly; otherwise it is None
    and derivatives are taken numerically. ``lam`` is the family parameter
    (math.inf for the singular solution, None for profiles outside the family).
    """

    log_r_grid: np.ndarray
    values: np.ndarray
    lam: Optional[float] = None
    decay_class: DecayClass = DecayClass.UNCLASSIFIED
    slopes: Optional[np.ndarray] = None

    def __post_init__(self):
        grid = np.asarray(self.log_r_grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or values.shape != grid.shape:
            raise ValueError('values must match log_r_grid')
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError('log_r_grid must be strictly increasing')
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError('profile values must be finite and nonnegative')
        object.__setattr__(self, 'log_r_grid', grid)
        object.__setattr__(self, 'values', values)
        if self.slopes is not None:
            object.__setattr__(self, 'slopes', np.asarray(self.slopes, dtype=float))

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.log_r_grid)

    @property
    def is_singular(self) -> bool:
        return self.lam is not None and math.isinf(self.lam)

    def scaled(self, exponent: float) -> np.ndarray:
        """U(r) * r^exponent"""
        return self.values * np.exp(exponent * self.log_r_grid)

    def log_slopes(self) -> np.ndarray:
        if self.slopes is not None:
            return self.slopes
        return np.gradient(self.values, self.log_r_grid, edge_order=2)


@dataclass(frozen=True)
class DecayFit:
    fitted_exponent: float
    window: Tuple[float, float]
    classification: DecayClass
    fit_residual: float
    limit_constant: Optional[float] = None
    limit_error: Optional[float] = None

    def to_dict(self):
        return {
            'fitted_exponent': self.fitted_exponent,
            'window': list(self.window),
            'classification': self.classification,
            'fit_residual': self.fit_residual,
            'limit_constant': self.limit_constant,
            'limit_error': self.limit_error
        }


@dataclass(frozen=True)
class PhragmenReport:
    location: str
    passed: bool
    lower_slope: float
    upper_slope: float
    violation: Optional[Dict[str, float]] = None

    def to_dict(self):
        return {
            'location': self.location,
            'passed': self.passed,
            'lower_slope': self.lower_slope,
            'upper_slope': self.upper_slope,
            'violation': self.violation
        }


@dataclass(frozen=True)
class StabilityCertificate:
    verdict: CertificateVerdict
    sup_potential: float
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'sup_potential': self.sup_potential,
            'witness': self.witness
        }


@dataclass(frozen=True)
class SignChangeReport:
    count: int
    locations: Tuple[float, ...]
    window: Tuple[float, float]

    def to_dict(self):
        return {
            'count': self.count,
            'locations': list(self.locations),
            'window': list(self.window)
        }
