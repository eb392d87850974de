import math

import numpy as np
import pytest

from model.errors import InvalidArgumentError, InvalidSpaceError
from model.spaces import BoundaryCondition, SpaceKind, make_space, radial_dimension_term


def test_make_space_defaults():
    """
    Circles default to closed, spheres to natural and intervals to neumann.
    """
    circle = make_space("circle", 2.0 * math.pi)
    assert circle.bc is BoundaryCondition.CLOSED
    assert circle.closed and not circle.has_boundary
    assert circle.diameter == pytest.approx(math.pi)

    sphere = make_space("sphere", n=3)
    assert sphere.length == pytest.approx(math.pi)
    assert sphere.end_conditions == (BoundaryCondition.NATURAL, BoundaryCondition.NATURAL)
    assert sphere.offsets[0] == pytest.approx(math.pi * 1e-4)

    interval = make_space("interval", 2.0, start=-1.0)
    assert interval.kind is SpaceKind.INTERVAL
    assert interval.bc is BoundaryCondition.NEUMANN
    assert interval.endpoints == (-1.0, 1.0)

    ball = make_space("ball", 1.5, bc="dirichlet", n=3)
    assert ball.end_conditions == (BoundaryCondition.NATURAL, BoundaryCondition.DIRICHLET)
    assert ball.offsets == (pytest.approx(1.5e-4), 0.0)
    assert ball.diameter == pytest.approx(3.0)

@pytest.mark.parametrize("kwargs", [
    {"kind": "torus", "length": 1.0},
    {"kind": "interval"},
    {"kind": "interval", "length": 1.0, "bc": "robin"},
    {"kind": "circle", "length": 1.0, "bc": "dirichlet"},
    {"kind": "sphere", "length": 2.0},
    {"kind": "sphere", "n": 1},
    {"kind": "interval", "length": 1.0, "n": 2},
])
def test_make_space_rejects_bad_arguments(kwargs):
    with pytest.raises(InvalidArgumentError):
        make_space(**kwargs)

def test_invalid_spaces():
    """
    Nonpositive lengths and nonperiodic circle weights are invalid spaces.
    """
    with pytest.raises(InvalidSpaceError):
        make_space("interval", 0.0)
    with pytest.raises(InvalidSpaceError):
        make_space("circle", 2.0 * math.pi, f="x")
    make_space("circle", 2.0 * math.pi, f="sin(x)")

def test_density():
    """
    ρ = J e^{-f}: sin^{n−1} on spheres, r^{n−1} on balls.
    """
    sphere = make_space("sphere", n=3, f="x")
    np.testing.assert_allclose(sphere.density([1.0]), [math.sin(1.0) ** 2 * math.exp(-1.0)])
    ball = make_space("ball", 2.0, n=2)
    np.testing.assert_allclose(ball.density([0.5, 1.0]), [0.5, 1.0])

def test_curvature_scan():
    """
    Closed-form profiles of Ric_f^m on each family.
    """
    gaussian = make_space("interval", 2.0, f="x**2/2", start=-1.0)
    x = np.array([-1.0, 0.0, 0.5])
    np.testing.assert_allclose(gaussian.curvature_scan(x, math.inf), np.ones(3))
    np.testing.assert_allclose(gaussian.curvature_scan(x, 3.0), 1.0 - x ** 2 / 2.0)

    sphere = make_space("sphere", n=2)
    np.testing.assert_allclose(sphere.curvature_scan([0.5, 1.5], 2.0), [1.0, 1.0])

    ball = make_space("ball", 1.0, n=3)
    np.testing.assert_allclose(ball.curvature_scan([0.2, 0.9], math.inf), [0.0, 0.0])

    circle = make_space("circle", 2.0 * math.pi, f="sin(x)")
    np.testing.assert_allclose(circle.curvature_scan([0.3], math.inf), [-math.sin(0.3)])

    with pytest.raises(InvalidArgumentError):
        gaussian.curvature_scan(x, 1.0)

def test_boundary_scan():
    """
    Interval ends give H_f = −∂f/∂n and II = 0; a flat ball of radius R has
    II = 1/R and H = (n − 1)/R.
    """
    assert make_space("circle", 1.0).boundary_scan() == (None, None)
    assert make_space("sphere").boundary_scan() == (None, None)

    hf_min, ii_min = make_space("interval", 2.0, f="x**2/2", start=-1.0).boundary_scan()
    assert hf_min == pytest.approx(-1.0)
    assert ii_min == 0.0

    hf_min, ii_min = make_space("ball", 2.0, n=3).boundary_scan()
    assert hf_min == pytest.approx(1.0)
    assert ii_min == pytest.approx(0.5)

def test_sample_points():
    """
    Closed spaces sample a half-open period, warped spaces stay off their poles.
    """
    circle = make_space("circle", 4.0)
    np.testing.assert_allclose(circle.sample_points(4), [0.0, 1.0, 2.0, 3.0])
    sphere = make_space("sphere")
    samples = sphere.sample_points(64)
    assert samples[0] > 0.0 and samples[-1] < math.pi

def test_radial_dimension_term():
    df = np.array([0.0, 2.0])
    np.testing.assert_allclose(radial_dimension_term(math.inf, 1, df), [0.0, 0.0])
    np.testing.assert_allclose(radial_dimension_term(3.0, 1, df), [0.0, 2.0])
    np.testing.assert_allclose(radial_dimension_term(1.0, 1, [0.0, 0.0]), [0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        radial_dimension_term(1.0, 1, df)
    with pytest.raises(InvalidArgumentError):
        radial_dimension_term(0.5, 1, df)
