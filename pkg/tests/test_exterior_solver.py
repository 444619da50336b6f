import math

import numpy as np
import pytest

from src.config import SolverOptions
from src.models.exterior import ExteriorProblem, ExteriorTemplate, LinearHardyProblem, lambda_key
from src.models.profile import DecayClass
from src.utils.errors import (MonotonicityBrokenError, NoncoerciveError, NonConvergenceError, ParameterRangeError,
                              ValidationError)
from src.utils.exterior_solver import (ExteriorSolver, check_correction_order, continuum_family, exterior_grid,
                                       fowler_operator, lambda_threshold, make_problem, march_base, solve_exterior,
                                       solve_linear_hardy, solve_two_point)
from src.utils.fowler_dynamics import attractor_x
from src.utils.profile_analysis import classify_decay


@pytest.fixture(scope='module')
def family(stable_params, stable_traj, opts):
    template = ExteriorTemplate(stable_params, 1.0, 0.0)
    return continuum_family(template, [1.0, 2.0, 4.0, math.inf], stable_traj, opts)


@pytest.fixture(scope='module')
def short_opts():
    return SolverOptions(exterior_span=20.0)


@pytest.fixture(scope='module')
def solver(stable_params, stable_traj, short_opts):
    return ExteriorSolver(make_problem(ExteriorTemplate(stable_params, 1.0, 0.0), stable_traj, 1.0, short_opts),
                          short_opts)


def test_exterior_grid_is_uniform():
    grid = exterior_grid(2.0, SolverOptions(exterior_span=1.0, exterior_step=0.01))
    assert grid.size == 101
    assert grid[0] == pytest.approx(math.log(2.0))
    assert np.diff(grid) == pytest.approx(np.full(100, 0.01))
    with pytest.raises(ValidationError):
        exterior_grid(0.0, SolverOptions())


def test_two_point_solver_with_exact_robin_end():
    grid = np.linspace(0.0, 5.0, 501)
    z = solve_two_point(0.01, 0.0, np.ones(501), np.zeros(501), 1.0, -1.0)
    assert z == pytest.approx(np.exp(-grid), rel=1e-4)


def test_free_linear_problem_decays_fast(stable_params):
    # mu = 0, V = 0: h = r^{2-N}
    grid = exterior_grid(1.0, SolverOptions(exterior_span=5.0, exterior_step=0.002))
    prob = LinearHardyProblem(R_K=1.0, boundary_value=1.0, log_r_grid=grid, potential=np.zeros_like(grid))
    h = solve_linear_hardy(prob, stable_params)
    assert h.decay_class == DecayClass.FAST
    assert h.values[0] == 1.0
    assert h.values == pytest.approx(np.exp(-13.0 * grid), rel=1e-2)


def test_linear_problem_rejects_large_potential(stable_params):
    grid = exterior_grid(1.0, SolverOptions(exterior_span=2.0, exterior_step=0.01))
    q = np.full(grid.size, stable_params.nu ** 2 + 1.0)
    prob = LinearHardyProblem(R_K=1.0, boundary_value=1.0, log_r_grid=grid, potential=q * np.exp(-2 * grid))
    with pytest.raises(NoncoerciveError):
        solve_linear_hardy(prob, stable_params)


def test_linear_problem_with_zero_data(stable_params):
    grid = exterior_grid(1.0, SolverOptions(exterior_span=2.0, exterior_step=0.01))
    prob = LinearHardyProblem(R_K=1.0, boundary_value=0.0, log_r_grid=grid, potential=np.zeros_like(grid))
    assert np.all(solve_linear_hardy(prob, stable_params).values == 0.0)


def test_threshold(stable_params, stable_traj):
    x_eq = attractor_x(stable_params)
    assert lambda_threshold(ExteriorTemplate(stable_params, 1.0, 0.0), stable_traj) == 0.0
    threshold = lambda_threshold(ExteriorTemplate(stable_params, 1.0, 0.5 * x_eq), stable_traj)
    assert threshold > 0
    with pytest.raises(ParameterRangeError):
        lambda_threshold(ExteriorTemplate(stable_params, 1.0, x_eq), stable_traj)
    with pytest.raises(ParameterRangeError):
        continuum_family(ExteriorTemplate(stable_params, 1.0, 0.5 * x_eq), [0.5 * threshold], stable_traj)
    with pytest.raises(ValidationError):
        continuum_family(ExteriorTemplate(stable_params, 1.0, 0.0), [], stable_traj)


def test_unstable_triple_is_rejected(spiral_params):
    problem = make_problem(ExteriorTemplate(spiral_params, 1.0, 0.0), None, math.inf,
                           SolverOptions(exterior_span=2.0, exterior_step=0.01))
    with pytest.raises(ParameterRangeError):
        solve_exterior(problem)


def test_solutions_are_sandwiched(family, stable_params, opts):
    k = stable_params.k
    slack = opts.sandwich_tol * attractor_x(stable_params)
    for solution in family.solutions:
        values = solution.profile.values
        assert values[0] == 0.0
        assert np.all(values[1:] > 0)
        assert np.all(values <= solution.base.values * (1 + 1e-9))
        scaled = solution.profile.scaled(k)
        assert np.all(solution.subsolution.scaled(k) <= scaled + slack)
        assert np.all(scaled <= solution.supersolution.scaled(k) + slack)
        assert solution.residual <= opts.residual_tol
        assert 0 < solution.iterations <= opts.max_iters


def test_discrete_base_stays_close_to_sampled_base(family, stable_params):
    x_eq = attractor_x(stable_params)
    for solution in family.solutions:
        gap = solution.base.scaled(stable_params.k) - solution.problem.base_solution.scaled(stable_params.k)
        assert solution.base.values[0] == pytest.approx(solution.problem.base_solution.values[0], rel=1e-14)
        assert np.max(np.abs(gap)) <= 1e-3 * x_eq


def test_solutions_keep_slow_decay(family, stable_params):
    for solution in family.solutions:
        fit = classify_decay(solution.profile, stable_params)
        assert fit.classification == DecayClass.SLOW
        assert fit.limit_error <= 1e-3
        assert solution.tail_deviation <= 1e-2


def test_family_members_are_distinct(family):
    assert family.lambda_threshold == 0.0
    assert [s.problem.lam for s in family.solutions] == [1.0, 2.0, 4.0, math.inf]
    assert len(family.distinctness) == 6
    assert family.all_distinct
    record = family.distinctness[0]
    assert record['separation'] > record['deviation_i'] + record['deviation_j']
    certificate = family.to_dict()
    assert certificate['lambdas'] == [1.0, 2.0, 4.0, math.inf]
    assert certificate['solutions'][0]['boundary_value'] == 0.0


def test_lambda_key():
    assert lambda_key(math.inf) == 'inf'
    assert lambda_key(2.0) == '2'
    assert lambda_key(0.25) == '0.25'


def test_marched_base_solves_the_discrete_equation(stable_params, stable_traj, short_opts):
    x_eq = attractor_x(stable_params)
    flat = march_base((x_eq, x_eq), 0.01, stable_params, 500)
    assert flat.size == 501
    assert flat == pytest.approx(np.full(501, x_eq), rel=1e-12)

    problem = make_problem(ExteriorTemplate(stable_params, 1.0, 0.0), stable_traj, 1.0, short_opts)
    step = short_opts.exterior_step
    sampled = problem.base_solution.scaled(stable_params.k)
    v = march_base((sampled[0], sampled[1]), step, stable_params, sampled.size)[:-1]
    residual = fowler_operator(v, step, stable_params) - v[1:-1] ** stable_params.p
    assert np.max(np.abs(residual)) <= 1e-8 * x_eq
    assert np.max(np.abs(v - sampled)) <= 1e-3 * x_eq


def test_linear_corrections_are_ordered(solver):
    h, eta = solver.linear_corrections()
    boundary = solver.ext.base_solution.values[0]
    assert h.values[0] == pytest.approx(boundary, rel=1e-12)
    assert eta.values[0] == pytest.approx(boundary, rel=1e-12)
    resolvable = h.values[1:] > 1e-9 * boundary
    assert np.count_nonzero(resolvable) > 100
    ratio = eta.values[1:][resolvable] / h.values[1:][resolvable]
    assert np.all((ratio > 0) & (ratio < 1))


def test_correction_order_is_enforced():
    check_correction_order(np.array([1.0, 0.5, 0.2, 0.0]), np.array([1.0, 0.3, 0.1, 0.0]))
    check_correction_order(np.zeros(4), np.zeros(4))
    with pytest.raises(MonotonicityBrokenError):
        check_correction_order(np.array([1.0, 0.5, 0.2]), np.array([1.0, 0.6, 0.1]))
    with pytest.raises(MonotonicityBrokenError):
        check_correction_order(np.array([1.0, 0.5, 0.2]), np.array([1.0, 0.3, 0.0]))


def test_inequality_violation_raises(solver):
    # 1.5 U* is a strict subsolution and fails the supersolution inequality
    lifted = 1.5 * solver.base_v
    solver.check_inequality(lifted, below=True)
    with pytest.raises(MonotonicityBrokenError):
        solver.check_inequality(lifted, below=False)
    solver.check_inequality(solver.base_v, below=False)


def test_boundary_data_on_the_base_is_a_fixed_point(stable_params, stable_traj, short_opts):
    base = make_problem(ExteriorTemplate(stable_params, 1.0, 0.0), stable_traj, 1.0, short_opts).base_solution
    problem = ExteriorProblem(params=stable_params, R_K=1.0, psi=float(base.values[0]), base_solution=base)
    solution = solve_exterior(problem, short_opts)
    assert solution.iterations <= 2
    assert solution.profile.values == pytest.approx(solution.base.values, rel=1e-9)
    assert solution.profile.values[0] == pytest.approx(base.values[0], rel=1e-12)
    assert solution.residual <= short_opts.residual_tol


def test_positive_boundary_data(stable_params, stable_traj, short_opts):
    psi = 0.5 * attractor_x(stable_params)
    template = ExteriorTemplate(stable_params, 1.0, psi)
    threshold = lambda_threshold(template, stable_traj)
    family = continuum_family(template, [2.0 * threshold, math.inf], stable_traj, short_opts)
    for solution in family.solutions:
        values = solution.profile.values
        assert values[0] == pytest.approx(psi, rel=1e-12)
        assert np.all(values[1:] > 0)
        assert np.all(values <= solution.base.values * (1 + 1e-9))
        assert solution.residual <= short_opts.residual_tol
        assert classify_decay(solution.profile, stable_params).classification == DecayClass.SLOW
    assert family.all_distinct


def test_loose_iteration_leaves_residual_error(stable_params, stable_traj):
    loose = SolverOptions(exterior_span=5.0, iteration_tol=1e-2)
    problem = make_problem(ExteriorTemplate(stable_params, 1.0, 0.0), stable_traj, 1.0, loose)
    with pytest.raises(NonConvergenceError):
        solve_exterior(problem, loose)
