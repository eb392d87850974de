import dataclasses
import math

import numpy as np
import pytest

from model.bounds import pi_p
from model.eigensolver1d import (
    SolverOptions, build_problem, identity_residuals, minimize_eig, phi, phi_inverse, trial_result,
    rayleigh, shooting_eig, zero_pmean_shift,
)
from model.errors import InvalidArgumentError, UnsupportedError
from model.spaces import make_space


def _interval_eigenvalue(p, length):
    return (p - 1.0) * (pi_p(p) / length) ** p


def test_phi_and_inverse():
    s = np.array([-2.0, -0.5, 0.0, 0.3, 4.0])
    np.testing.assert_allclose(phi(s, 3.0), np.sign(s) * s ** 2)
    np.testing.assert_allclose(phi_inverse(phi(s, 3.5), 3.5), s)

def test_build_problem():
    """
    Closed problems have N nodes, the others N + 1 with Dirichlet ends fixed.
    """
    circle = build_problem(make_space("circle", 2.0 * math.pi), 2.0, 64)
    assert len(circle.nodes) == 64 and circle.N == 64
    assert circle.right[-1] == 0
    assert circle.constrained

    interval = build_problem(make_space("interval", 1.0, bc="dirichlet"), 3.0, 32)
    assert len(interval.nodes) == 33
    assert interval.fixed[0] and interval.fixed[-1] and not interval.fixed[1:-1].any()
    assert not interval.constrained
    assert interval.weights.sum() == pytest.approx(1.0)

    with pytest.raises(InvalidArgumentError):
        build_problem(make_space("interval", 1.0), 2.0, 8)
    with pytest.raises(InvalidArgumentError):
        build_problem(make_space("interval", 1.0), 1.0, 64)

def test_rayleigh_gradient_matches_finite_differences():
    problem = build_problem(make_space("interval", 1.0, f="x"), 3.0, 16)
    u = np.cos(np.pi * problem.nodes) + 0.2 * np.sin(5.0 * problem.nodes)
    value, gradient = rayleigh(problem, u)
    step = 1e-6
    for i in (0, 5, 16):
        bumped = u.copy()
        bumped[i] += step
        lowered = u.copy()
        lowered[i] -= step
        estimate = (rayleigh(problem, bumped)[0] - rayleigh(problem, lowered)[0]) / (2.0 * step)
        assert gradient[i] == pytest.approx(estimate, rel=1e-5, abs=1e-6)
    assert value > 0.0

    with pytest.raises(InvalidArgumentError):
        rayleigh(problem, np.zeros_like(u))
    with pytest.raises(InvalidArgumentError):
        rayleigh(problem, u[:-1])

def test_zero_pmean_shift():
    """
    The shift puts u on the zero p-mean cone; constants cannot be recentered.
    """
    problem = build_problem(make_space("interval", 1.0, f="x**2"), 3.0, 64)
    u = np.exp(problem.nodes)
    c = zero_pmean_shift(problem, u)
    assert u.min() < c < u.max()
    assert np.sum(phi(u - c, 3.0) * problem.mass) == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(InvalidArgumentError):
        zero_pmean_shift(problem, np.ones_like(u))

@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_linear_eigenvalue_on_the_interval(bc):
    """
    λ = 1 on [0, π] for both conditions at p = 2.
    """
    problem = build_problem(make_space("interval", math.pi, bc=bc), 2.0, 256)
    result = minimize_eig(problem, SolverOptions(N=256, restarts=1))
    assert result.converged
    assert result.eigenvalue == pytest.approx(1.0, rel=1e-4)
    assert np.abs(result.u).max() == pytest.approx(1.0)
    assert result.weak_residual <= 1e-6

def test_circle_eigenvalue():
    problem = build_problem(make_space("circle", 2.0 * math.pi), 2.0, 256)
    result = minimize_eig(problem, SolverOptions(N=256, restarts=1))
    assert result.eigenvalue == pytest.approx(1.0, rel=1e-4)
    assert result.pmean_residual <= 1e-8

def test_nonlinear_neumann_eigenvalue():
    """
    p = 3 on [0, 1]: (p − 1)(π_p/L)^p, the discrete identities hold at the minimizer.
    """
    problem = build_problem(make_space("interval", 1.0), 3.0, 512)
    result = minimize_eig(problem, SolverOptions(N=512, restarts=2, seed=7))
    assert result.eigenvalue == pytest.approx(_interval_eigenvalue(3.0, 1.0), rel=1e-3)
    assert result.weak_residual <= 1e-6
    assert identity_residuals(problem, result) == {
        "eq34": result.weak_residual, "rayleigh_gap": result.rayleigh_gap,
    }
    assert result.pmean_residual <= 1e-8
    summary = result.summary()
    assert summary["lambda"] == result.eigenvalue
    assert summary["nodes"] == 513

def test_ball_dirichlet_eigenvalue():
    """
    The unit disk's first Dirichlet eigenvalue is j_{0,1}².
    """
    problem = build_problem(make_space("ball", 1.0, bc="dirichlet", n=2), 2.0, 512)
    result = minimize_eig(problem, SolverOptions(N=512, restarts=0))
    assert result.eigenvalue == pytest.approx(5.783185962946784, rel=1e-3)

def test_trial_result_is_a_negative_control():
    """
    A linear function is no eigenfunction at p = 3: the energy identity fails.
    """
    problem = build_problem(make_space("interval", 1.0), 3.0, 256)
    control = trial_result(problem, problem.nodes)
    assert not control.converged
    assert control.eigenvalue == pytest.approx(32.0, rel=1e-2)
    assert control.weak_residual > 1e-2

@pytest.mark.slow
@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_shooting_on_the_interval(bc):
    expected = _interval_eigenvalue(3.0, 1.0)
    assert shooting_eig(make_space("interval", 1.0), 3.0, bc=bc) == pytest.approx(expected, rel=1e-6)

@pytest.mark.slow
def test_shooting_on_spheres_and_circles():
    assert shooting_eig(make_space("sphere", n=2), 2.0) == pytest.approx(2.0, rel=1e-4)
    assert shooting_eig(make_space("circle", 2.0 * math.pi), 2.0) == pytest.approx(1.0, rel=1e-6)
    assert shooting_eig(make_space("circle", 2.0 * math.pi, f="cos(x)"), 2.0) > 0.0

def test_shooting_rejections():
    """
    Odd circle weights cannot be halved; circles only take the closed condition.
    """
    with pytest.raises(UnsupportedError):
        shooting_eig(make_space("circle", 2.0 * math.pi, f="sin(x)"), 2.0)
    with pytest.raises(UnsupportedError):
        shooting_eig(make_space("circle", 2.0 * math.pi), 2.0, bc="dirichlet")

def test_zero_pmean_shift_is_the_weighted_mean_at_p2():
    problem = build_problem(make_space("interval", 1.0, f="x"), 2.0, 128)
    u = np.sin(3.0 * problem.nodes) + problem.nodes ** 2
    expected = np.sum(u * problem.mass) / np.sum(problem.mass)
    assert zero_pmean_shift(problem, u) == pytest.approx(expected, rel=1e-12)

@pytest.mark.parametrize("bc", ["neumann", "dirichlet"])
def test_minimize_eig_runs_on_constrained_and_fixed_problems(bc):
    """
    Neumann iterates are recentered on every step, Dirichlet ones are not.
    """
    problem = build_problem(make_space("interval", 1.0, bc=bc), 2.0, 512)
    result = minimize_eig(problem, SolverOptions(N=512, restarts=1))
    assert result.eigenvalue == pytest.approx(math.pi ** 2, rel=1e-4)
    if bc == "neumann":
        assert result.pmean_residual <= 1e-8
    else:
        assert result.pmean_residual is None

@pytest.mark.parametrize("p", [2.0, 3.0])
def test_scaling_law(p):
    """
    Doubling the length divides λ by 2^p.
    """
    options = SolverOptions(N=512, restarts=1)
    short = minimize_eig(build_problem(make_space("interval", 1.0), p, 512), options)
    long = minimize_eig(build_problem(make_space("interval", 2.0), p, 512), options)
    assert short.eigenvalue / long.eigenvalue == pytest.approx(2.0 ** p, rel=1e-3)

def test_constant_shift_of_the_weight():
    """
    f and f + 3 give the same measure up to a factor, hence the same λ.
    """
    options = SolverOptions(N=256, restarts=1)
    plain = minimize_eig(build_problem(make_space("interval", 1.0, f="(0.5)*x**2"), 3.0, 256), options)
    shifted = minimize_eig(build_problem(make_space("interval", 1.0, f="(0.5)*x**2 + 3"), 3.0, 256), options)
    assert shifted.eigenvalue == pytest.approx(plain.eigenvalue, rel=1e-10)

@pytest.mark.slow
def test_mesh_convergence():
    """
    |λ_N − λ_2N| shrinks monotonically for N = 256, 512, 1024.
    """
    space = make_space("interval", 1.0, f="x**2")
    values = []
    for N in (256, 512, 1024, 2048):
        values.append(minimize_eig(build_problem(space, 3.0, N), SolverOptions(N=N, restarts=1)).eigenvalue)
    differences = [abs(a - b) for a, b in zip(values, values[1:])]
    assert differences[0] > differences[1] > differences[2]

def test_rayleigh_gap_flags_a_foreign_eigenvalue():
    """
    The gap is zero for the minimizer's own λ and exposes a λ that does not
    belong to u.
    """
    problem = build_problem(make_space("interval", 1.0), 2.0, 128)
    result = minimize_eig(problem, SolverOptions(N=128, restarts=0))
    assert result.rayleigh_gap <= 1e-9 * result.eigenvalue
    foreign = dataclasses.replace(result, eigenvalue=1.01 * result.eigenvalue)
    residuals = identity_residuals(problem, foreign)
    assert residuals["rayleigh_gap"] == pytest.approx(0.01 * result.eigenvalue, rel=1e-6)
    assert residuals["eq34"] > 1e-3
