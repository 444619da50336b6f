#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Critical exponent atlas

Constants and critical exponents of the explicit singular solution
U_inf = C_{p,nu} r^{-2/(p-1)}, the stability classification of U_inf and
validation of (N, nu, p) triples.

The stability inequality p * gamma <= nu^2 is equivalent, with s = -2/(p-1),
to theta(s) <= -2 nu^2 where theta(s) = (s + nu_star)^2 (s - 2). The roots
of theta(s) = -2 nu^2 are found by bracketed Brent iteration on the
brackets the monotonicity of theta provides.
"""
import logging
import math
from typing import List, Optional, Tuple

from scipy.optimize import brentq

from src.models.atlas import ExponentReport, PInterval, RegimeVerdict, ThetaRoots
from src.models.params import Params
from src.utils.errors import ParameterRangeError, ValidationError

ROOT_TOL = 1e-12
BOUNDARY_TOL = 1e-9


def make_params(N: int, nu: float, p: float) -> Params:
    """Validate a triple and return it with all derived fields populated."""
    if isinstance(N, bool) or int(N) != N:
        raise ValidationError(f'N must be an integer, got {N}')
    N = int(N)
    nu = float(nu)
    p = float(p)
    if N < 3:
        raise ValidationError(f'N must satisfy N >= 3, got N={N}')
    if not nu > 0 or math.isinf(nu):
        raise ValidationError(f'nu must satisfy nu > 0, got nu={nu}')
    if not p > 1 or math.isinf(p):
        raise ValidationError(f'p must satisfy p > 1, got p={p}')
    return Params(N=N, nu=nu, p=p)


def _check_pair(N: int, nu: float) -> Tuple[int, float]:
    make_params(N, nu, 2.0)
    return int(N), float(nu)


def hardy_constant(N: int) -> float:
    """Optimal Hardy constant C_H = nu_star^2"""
    return ((N - 2) / 2) ** 2


def exponent_bounds(N: int, nu: float) -> Tuple[float, float, float]:
    """Return (p_lower, p_sobolev, p_upper); p_upper is math.inf when nu >= nu_star."""
    N, nu = _check_pair(N, nu)
    nu_star = (N - 2) / 2
    p_lower = 1 + 2 / (nu_star + nu)
    p_sobolev = (N + 2) / (N - 2)
    p_upper = 1 + 2 / (nu_star - nu) if nu < nu_star else math.inf
    return p_lower, p_sobolev, p_upper


def theta(s: float, nu_star: float) -> float:
    return (s + nu_star) ** 2 * (s - 2)


def nu_bar(N: int) -> float:
    """Coupling at which the two supercritical stability exponents merge"""
    nu_star = (N - 2) / 2
    return math.sqrt(2 * (2 + nu_star) ** 3 / 27)


def mu_bar(N: int) -> float:
    """nu_bar^2 - nu_star^2, equal to (N - 10)^2 (N - 1) / 108"""
    return (N - 10) ** 2 * (N - 1) / 108


def _root(f, lower: float, upper: float, tol: float) -> float:
    root = brentq(f, lower, upper, xtol=1e-15, maxiter=200)
    residual = abs(f(root))
    if residual > tol:
        logging.warning(f'theta root residual {residual:.3e} above tolerance {tol:.1e}')
    return root


def theta_roots(N: int, nu: float, tol: float = ROOT_TOL) -> ThetaRoots:
    """Classify and compute the roots of theta(s) = -2 nu^2 on (-nu_star-nu, min(-nu_star+nu, 0)).

    Args:
        N (int): dimension, N >= 3
        nu (float): Hardy coupling, nu > 0
        tol (float): residual tolerance, relative to max(1, 2 nu^2)

    Returns:
        ThetaRoots: sigma_sharp always, sigma_minus / sigma_plus when present and
        the sub-case label ('low-i', 'low-ii', 'high-i', 'high-ii', 'high-iii';
        'low' is N <= 10 where s_min >= 0)
    """
    N, nu = _check_pair(N, nu)
    nu_star = (N - 2) / 2
    scale = max(1.0, 2 * nu ** 2)
    f = lambda s: theta(s, nu_star) + 2 * nu ** 2
    tol = tol * scale

    sigma_sharp = _root(f, -nu_star - nu, -nu_star, tol)
    s_min = -(nu_star - 4) / 3

    if s_min >= 0:
        if nu >= nu_star:
            return ThetaRoots(sigma_sharp, None, None, 'low-i')
        sigma_minus = _root(f, -nu_star, -nu_star + nu, tol)
        return ThetaRoots(sigma_sharp, sigma_minus, None, 'low-ii')

    if nu <= nu_star:
        sigma_minus = _root(f, -nu_star, s_min, tol)
        return ThetaRoots(sigma_sharp, sigma_minus, None, 'high-iii')
    at_min = f(s_min)
    if abs(at_min) <= tol:
        logging.debug(f'double root at s_min={s_min} for N={N}, nu={nu}')
        return ThetaRoots(sigma_sharp, s_min, s_min, 'high-ii', double_root=True)
    if at_min > 0:
        return ThetaRoots(sigma_sharp, None, None, 'high-i')
    sigma_minus = _root(f, -nu_star, s_min, tol)
    sigma_plus = _root(f, s_min, 0.0, tol)
    return ThetaRoots(sigma_sharp, sigma_minus, sigma_plus, 'high-ii')


def _sigma_to_p(sigma: Optional[float]) -> Optional[float]:
    return None if sigma is None else 1 - 2 / sigma


def stability_exponents(N: int, nu: float) -> Tuple[float, Optional[float], Optional[float]]:
    """Return (p_sharp, p_minus, p_plus) from the theta roots."""
    roots = theta_roots(N, nu)
    return (_sigma_to_p(roots.sigma_sharp),
            _sigma_to_p(roots.sigma_minus),
            _sigma_to_p(roots.sigma_plus))


def lemma2_case(N: int, nu: float) -> str:
    """Case label a / b / c of the stability classification in (p, nu).

    At nu = nu_bar with N >= 11 both (a) and (c) apply; (a) is returned since
    its closed interval [p_-, p_+] keeps the single stable supercritical point.
    """
    N, nu = _check_pair(N, nu)
    nu_star = (N - 2) / 2
    if N >= 11 and nu_star < nu <= nu_bar(N):
        return 'a'
    if nu < nu_star or (nu == nu_star and N >= 11):
        return 'b'
    return 'c'


def stability_intervals(N: int, nu: float) -> List[PInterval]:
    """Intervals of p in (p_lower, p_upper) on which U_inf is stable."""
    p_lower, _, p_upper = exponent_bounds(N, nu)
    p_sharp, p_minus, p_plus = stability_exponents(N, nu)
    intervals = [PInterval(p_lower, p_sharp, False, True)]
    case = lemma2_case(N, nu)
    if case == 'a':
        intervals.append(PInterval(p_minus, p_plus, True, True))
    elif case == 'b':
        intervals.append(PInterval(p_minus, p_upper, True, False))
    return intervals


def joseph_lundgren_exponent(N: int) -> float:
    """Stability exponent of the unperturbed Laplacian; math.inf for N <= 10."""
    if N <= 10:
        return math.inf
    root = math.sqrt(N - 1)
    return (N - 2 * root) / (N - 4 - 2 * root)


def laplacian_sharp_exponent(N: int) -> float:
    root = math.sqrt(N - 1)
    return (N + 2 * root) / (N - 4 + 2 * root)


def laplacian_singular_coefficient(N: int, p: float) -> float:
    """C_p of the singular solution of -Delta u = u^p"""
    k = 2 / (p - 1)
    base = k * (N - 2 - k)
    if base <= 0:
        raise ParameterRangeError(f'C_p undefined for N={N}, p={p}: need p > N/(N-2)')
    return base ** (1 / (p - 1))


def exponent_report(N: int, nu: float) -> ExponentReport:
    """Full critical-exponent atlas for one (N, nu)."""
    N, nu = _check_pair(N, nu)
    p_lower, p_sobolev, p_upper = exponent_bounds(N, nu)
    roots = theta_roots(N, nu)
    nu_star = (N - 2) / 2
    p_minus = _sigma_to_p(roots.sigma_minus)
    p_jl = None
    if nu == nu_star:
        p_jl = p_minus if p_minus is not None else math.inf
    return ExponentReport(
        N=N,
        nu=nu,
        p_lower=p_lower,
        p_sobolev=p_sobolev,
        p_upper=p_upper,
        sigma_sharp=roots.sigma_sharp,
        sigma_minus=roots.sigma_minus,
        sigma_plus=roots.sigma_plus,
        p_sharp=_sigma_to_p(roots.sigma_sharp),
        p_minus=p_minus,
        p_plus=_sigma_to_p(roots.sigma_plus),
        nu_bar=nu_bar(N),
        stability_intervals=stability_intervals(N, nu),
        lemma2_case=lemma2_case(N, nu),
        root_case=roots.case,
        hardy_constant=hardy_constant(N),
        mu_bar=mu_bar(N),
        p_jl=p_jl
    )


def in_existence_range(params: Params) -> bool:
    return params.p_lower < params.p < params.p_upper


def singular_coefficient(params: Params) -> float:
    """C_{p,nu} = gamma^{1/(p-1)}; raises when U_inf does not exist."""
    if not in_existence_range(params) or params.gamma <= 0:
        raise ParameterRangeError(
            f'no positive singular solution for N={params.N}, nu={params.nu}, p={params.p}: '
            f'need {params.p_lower} < p < {params.p_upper} (C_{{p,nu}}^(p-1) = {params.gamma})'
        )
    return params.gamma ** (1 / (params.p - 1))


def classify_singular_stability(params: Params) -> RegimeVerdict:
    """Stability of U_inf by the inequality p * gamma <= nu^2.

    The verdict is cross-checked against membership of p in the stability
    intervals computed from the theta roots; a disagreement away from the
    interval end points is logged as an error.
    """
    if not in_existence_range(params):
        return RegimeVerdict.OUTSIDE_RANGE
    lhs = params.p * params.gamma
    rhs = params.nu ** 2
    by_inequality = lhs <= rhs
    by_intervals = any(i.contains(params.p) for i in stability_intervals(params.N, params.nu))
    if by_inequality != by_intervals:
        if abs(lhs - rhs) <= BOUNDARY_TOL * max(1.0, rhs):
            by_inequality = True
        else:
            logging.error(f'stability paths disagree for {params.to_dict()}: '
                          f'p*gamma={lhs}, nu^2={rhs}, intervals say {by_intervals}')
    return RegimeVerdict.STABLE if by_inequality else RegimeVerdict.UNSTABLE


def is_weak_solution(params: Params) -> bool:
    """U_inf lies in H^1_loc(R^N) exactly when p > p_S"""
    return in_existence_range(params) and params.p > params.p_sobolev


def slow_decay_nonexistence(params: Params) -> bool:
    """No slow decay solution exists in any exterior domain when p >= p_upper"""
    return params.p >= params.p_upper


def sphere_constant_rigidity(params: Params) -> Optional[bool]:
    """Whether C_{p,nu} is known to be the only positive solution on the sphere.

    Only decided for 1 < p < (N+1)/(N-3) (every p when N = 3); None elsewhere.
    """
    if params.N > 3 and params.p >= (params.N + 1) / (params.N - 3):
        return None
    if params.gamma <= 0:
        return None
    return (params.p - 1) * params.gamma <= params.N - 1


def subcritical_rates(params: Params) -> dict:
    """Predicted rates of the fast decay heteroclinic for p_lower < p < p_S."""
    if not params.p_lower < params.p < params.p_sobolev:
        raise ParameterRangeError(
            f'subcritical branch needs {params.p_lower} < p < {params.p_sobolev}, got p={params.p}')
    return {
        'decay_exponent_infinity': -params.nu_star - params.nu,
        'singularity_exponent_origin': -params.k,
        'attractor': 'repeller'
    }
