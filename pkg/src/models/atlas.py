import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional


class RegimeVerdict(str, Enum):
    STABLE = 'stable-ordered'
    UNSTABLE = 'unstable-oscillatory'
    OUTSIDE_RANGE = 'outside-existence-range'


@dataclass(frozen=True)
class PInterval:
    """Interval of exponents p; an infinite upper end is always open"""

    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool

    def contains(self, p: float) -> bool:
        above = p >= self.lower if self.lower_closed else p > self.lower
        if math.isinf(self.upper):
            return above
        below = p <= self.upper if self.upper_closed else p < self.upper
        return above and below

    def to_dict(self):
        return {
            'lower': self.lower,
            'upper': self.upper,
            'lower_closed': self.lower_closed,
            'upper_closed': self.upper_closed
        }


@dataclass(frozen=True)
class ThetaRoots:
    sigma_sharp: float
    sigma_minus: Optional[float]
    sigma_plus: Optional[float]
    case: str
    double_root: bool = False


@dataclass(frozen=True)
class ExponentReport:
    """Critical exponent atlas of one (N, nu)"""

    N: int
    nu: float
    p_lower: float
    p_sobolev: float
    p_upper: float
    sigma_sharp: float
    sigma_minus: Optional[float]
    sigma_plus: Optional[float]
    p_sharp: float
    p_minus: Optional[float]
    p_plus: Optional[float]
    nu_bar: float
    stability_intervals: List[PInterval] = field(default_factory=list)
    lemma2_case: str = 'c'
    root_case: str = ''
    hardy_constant: float = 0.0
    mu_bar: float = 0.0
    p_jl: Optional[float] = None

    def is_stable_exponent(self, p: float) -> bool:
        return any(interval.contains(p) for interval in self.stability_intervals)

    def to_dict(self):
        return {
            'N': self.N,
            'nu': self.nu,
            'p_lower': self.p_lower,
            'p_sobolev': self.p_sobolev,
            'p_upper': self.p_upper,
            'sigma_sharp': self.sigma_sharp,
            'sigma_minus': self.sigma_minus,
            'sigma_plus': self.sigma_plus,
            'p_sharp': self.p_sharp,
            'p_minus': self.p_minus,
            'p_plus': self.p_plus,
            'nu_bar': self.nu_bar,
            'stability_intervals': [interval.to_dict() for interval in self.stability_intervals],
            'lemma2_case': self.lemma2_case,
            'root_case': self.root_case,
            'hardy_constant': self.hardy_constant,
            'mu_bar': self.mu_bar,
            'p_jl': self.p_jl
        }

    @classmethod
    def from_dict(cls, data):
        values = dict(data)
        values['stability_intervals'] = [PInterval(**item) for item in data['stability_intervals']]
        return cls(**values)
