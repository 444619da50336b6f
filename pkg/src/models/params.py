import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Params:
    """Problem triple (N, nu, p) with the derived quantities of the radial equation"""

    N: int
    nu: float
    p: float
    nu_star: float = field(init=False)
    mu: float = field(init=False)
    beta: float = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        nu_star = (self.N - 2) / 2
        beta = nu_star - 2 / (self.p - 1)
        object.__setattr__(self, 'nu_star', nu_star)
        object.__setattr__(self, 'mu', self.nu ** 2 - nu_star ** 2)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'gamma', self.nu ** 2 - beta ** 2)

    @property
    def k(self) -> float:
        """Fowler exponent 2/(p-1)"""
        return 2 / (self.p - 1)

    @property
    def p_sobolev(self) -> float:
        return (self.N + 2) / (self.N - 2)

    @property
    def p_lower(self) -> float:
        return 1 + 2 / (self.nu_star + self.nu)

    @property
    def p_upper(self) -> float:
        if self.nu < self.nu_star:
            return 1 + 2 / (self.nu_star - self.nu)
        return math.inf

    @property
    def is_stable_regime(self) -> bool:
        return self.p * self.gamma <= self.nu ** 2

    def to_dict(self):
        return {
            'N': self.N,
            'nu': self.nu,
            'p': self.p,
            'nu_star': self.nu_star,
            'mu': self.mu,
            'beta': self.beta,
            'gamma': self.gamma
        }
