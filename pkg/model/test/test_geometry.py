import math

import numpy as np
import pytest

from model.charts import get_chart
from model.errors import DegenerateGradientError, InvalidArgumentError
from model.geometry import (
    boundary_geometry, boundary_tangential, christoffel, covariant_data, curvature,
    dimension_correction, p_laplacian,
)


@pytest.fixture
def sphere():
    return get_chart("sphere2")

@pytest.fixture
def plane():
    return get_chart("euclidean_plane")


def test_christoffel_symbols_of_the_sphere(sphere):
    """
    Γ^θ_φφ = −sinθ cosθ and Γ^φ_θφ = cotθ, all others zero.
    """
    theta = 0.7
    gamma = christoffel(sphere, (theta, 1.3))
    assert gamma[0, 1, 1] == pytest.approx(-math.sin(theta) * math.cos(theta))
    assert gamma[1, 0, 1] == pytest.approx(1.0 / math.tan(theta))
    assert gamma[1, 1, 0] == pytest.approx(gamma[1, 0, 1])
    assert gamma[0, 0, 0] == pytest.approx(0.0, abs=1e-14)

def test_curvature_of_model_spaces(sphere, plane):
    """
    Ric = g on the unit sphere, Ric = 0 on flat charts and Ric_f adds Hess f.
    """
    unweighted = curvature(sphere, sphere.field("0"), math.inf, (1.1, 0.4))
    np.testing.assert_allclose(unweighted.ric, np.diag([1.0, math.sin(1.1) ** 2]), atol=1e-12)
    assert unweighted.min_eig == pytest.approx(1.0)

    # Hess cosθ = −cosθ g on the unit sphere
    weighted = curvature(sphere, sphere.field("cos(theta)"), math.inf, (1.1, 0.4))
    assert weighted.min_eig == pytest.approx(1.0 - math.cos(1.1))

    gaussian = curvature(plane, plane.field("(x**2 + y**2)/2"), math.inf, (0.3, -0.2))
    np.testing.assert_allclose(gaussian.ric, np.zeros((2, 2)), atol=1e-14)
    assert gaussian.min_eig == pytest.approx(1.0)

    # Ric_f^m subtracts ∇f⊗∇f/(m − n): along x, 1 − x²/(m − 2)
    finite = curvature(plane, plane.field("x**2/2"), 4.0, (0.5, 0.0))
    assert finite.min_eig == pytest.approx(min(1.0 - 0.25 / 2.0, 0.0))

def test_dimension_correction():
    """
    The m-dimensional correction vanishes for m = ∞ and for m = n with
    constant f, and is undefined below the dimension.
    """
    np.testing.assert_allclose(dimension_correction(math.inf, 2, [1.0, 2.0]), np.zeros((2, 2)))
    np.testing.assert_allclose(dimension_correction(2.0, 2, [0.0, 0.0]), np.zeros((2, 2)))
    np.testing.assert_allclose(dimension_correction(4.0, 2, [1.0, 2.0]), [[0.5, 1.0], [1.0, 2.0]])
    with pytest.raises(InvalidArgumentError):
        dimension_correction(1.5, 2, [0.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        dimension_correction(2.0, 2, [1.0, 0.0])

def test_covariant_data(plane):
    """
    Gradient, Hessian and Laplacians of u = x² + y with f = y.
    """
    data = covariant_data(plane, plane.field("x**2 + y"), plane.field("y"), 2.0, (0.5, 0.1))
    np.testing.assert_allclose(data.grad_u, [1.0, 1.0])
    assert data.w == pytest.approx(2.0)
    np.testing.assert_allclose(data.hess_u, [[2.0, 0.0], [0.0, 0.0]])
    assert data.lap_u == pytest.approx(2.0)
    assert data.lap_f_u == pytest.approx(1.0)
    assert data.delta_inf_u == pytest.approx(1.0)    # Hess(∇u, ∇u)/w = 2/2
    assert data.hess_sq == pytest.approx(4.0)
    assert data.hess_sq_A == pytest.approx(data.hess_sq)

def test_degenerate_gradient(plane):
    """
    At a critical point only p = 2 is defined.
    """
    u, f = plane.field("x**2 + y**2"), plane.field("0")
    data = covariant_data(plane, u, f, 2.0, (0.0, 0.0))
    assert data.delta_inf_u is None
    assert data.lap_u == pytest.approx(4.0)
    with pytest.raises(DegenerateGradientError):
        covariant_data(plane, u, f, 3.0, (0.0, 0.0))
    with pytest.raises(DegenerateGradientError):
        p_laplacian(plane, f, 3.0, u, (0.0, 0.0))

def test_p_laplacian():
    """
    Δ_p of x²/2 on a line is (|x|x)' = 2|x| at p = 3; linear functions are
    p-harmonic in flat space.
    """
    line = get_chart("line1d", start=-2.0, stop=2.0)
    assert p_laplacian(line, line.field("0"), 3.0, line.field("x**2/2"), (1.0,)) == pytest.approx(2.0)
    assert p_laplacian(line, line.field("0"), 3.0, line.field("x**2/2"), (-1.5,)) == pytest.approx(3.0)
    # Δ_f x = −f' for f = x²/2
    assert p_laplacian(line, line.field("x**2/2"), 2.0, line.field("x"), (0.5,)) == pytest.approx(-0.5)

    plane = get_chart("euclidean_plane")
    assert p_laplacian(plane, plane.field("0"), 4.0, plane.field("x + 2*y"), (0.1, 0.2)) \
        == pytest.approx(0.0, abs=1e-14)

def test_boundary_geometry():
    """
    The unit circle has II = H = 1, the equator of the hemisphere is totally
    geodesic and interval ends have H_f = −∂f/∂n.
    """
    disk = get_chart("disk_polar")
    data = boundary_geometry(disk, disk.field("r**2/2"), 0.8)
    np.testing.assert_allclose(data.normal, [1.0, 0.0])
    np.testing.assert_allclose(data.II, [[1.0]])
    assert data.H == pytest.approx(1.0)
    assert data.H_f == pytest.approx(0.0, abs=1e-14)

    hemisphere = get_chart("hemisphere2")
    equator = boundary_geometry(hemisphere, hemisphere.field("0"), 2.0)
    assert equator.H == pytest.approx(0.0, abs=1e-12)

    line = get_chart("line1d")
    f = line.field("x")
    assert boundary_geometry(line, f, 0.0, 0).H_f == pytest.approx(1.0)
    assert boundary_geometry(line, f, 0.0, 1).H_f == pytest.approx(-1.0)

    with pytest.raises(InvalidArgumentError):
        boundary_geometry(get_chart("flat_torus"), f, 0.0)
    with pytest.raises(InvalidArgumentError):
        boundary_geometry(line, f, 0.0, 5)

def test_boundary_tangential():
    """
    u = r cosφ on the unit circle: u_n = cosφ, ∇_∂u = −sinφ, Δ_∂u = −cosφ
    and ∇_∂u_n = −sinφ.
    """
    disk = get_chart("disk_polar")
    phi = 0.9
    data = boundary_tangential(disk, disk.field("0"), disk.field("r*cos(phi)"), phi)
    assert data.u_n == pytest.approx(math.cos(phi))
    assert data.grad_bdy_u == pytest.approx(-math.sin(phi))
    assert data.lap_bdy_f_u == pytest.approx(-math.cos(phi))
    assert data.grad_bdy_un == pytest.approx(-math.sin(phi))
