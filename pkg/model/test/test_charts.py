import math

import numpy as np
import pytest

from model.charts import CHART_IDS, get_chart
from model.errors import InvalidArgumentError


@pytest.mark.parametrize("chart_id", CHART_IDS)
def test_catalog_metrics_are_positive_definite(chart_id):
    """
    Every catalog chart has a symmetric positive definite metric on its
    quadrature box.
    """
    chart = get_chart(chart_id)
    chart.validate(samples=8)
    assert chart.dim == len(chart.domain) == len(chart.periodic)
    assert chart.diameter > 0.0

def test_quadrature_box_and_collar():
    """
    Singular sides are pulled in by the interior offset and become collar
    edges whose normal points at the excised part.
    """
    sphere = get_chart("sphere2", interior_offset=1e-4)
    (theta, phi) = sphere.quadrature_box()
    assert theta == pytest.approx((1e-4, math.pi - 1e-4))
    assert phi == pytest.approx((0.0, 2.0 * math.pi))
    north, south = sphere.collar()
    assert (north.value, north.outward) == (pytest.approx(1e-4), -1)
    assert (south.value, south.outward) == (pytest.approx(math.pi - 1e-4), 1)
    assert not sphere.has_boundary

    disk = get_chart("disk_polar")
    assert disk.has_boundary
    (edge,) = disk.boundary
    assert edge.point(0.5, 2) == (1.0, 0.5)
    assert edge.free_axis == 1
    (inner,) = disk.collar()
    assert inner.value == pytest.approx(1e-3)

def test_chart_parameters():
    """
    1D charts accept their parameters; bad ones are rejected.
    """
    line = get_chart("line1d", start=-1.0, stop=2.0)
    assert line.domain == ((-1.0, 2.0),)
    assert line.diameter == pytest.approx(3.0)
    assert [segment.outward for segment in line.boundary] == [-1, 1]
    assert line.boundary[0].point(0.0, 1) == (-1.0,)

    circle = get_chart("circle1d", length=4.0)
    assert circle.diameter == pytest.approx(2.0)
    assert circle.collar() == ()

    with pytest.raises(InvalidArgumentError):
        get_chart("line1d", start=1.0, stop=0.0)
    with pytest.raises(InvalidArgumentError):
        get_chart("circle1d", radius=1.0)
    with pytest.raises(InvalidArgumentError):
        get_chart("klein_bottle")
    with pytest.raises(InvalidArgumentError):
        get_chart("sphere2", interior_offset=0.5)

def test_fields_and_metric_values():
    """
    Charts parse expressions over their own coordinate names.
    """
    sphere = get_chart("sphere2")
    u = sphere.field("cos(theta)")
    assert u.evaluate(0.0, 1.0) == pytest.approx(1.0)
    np.testing.assert_allclose(sphere.metric_at((math.pi / 2, 0.3)), np.eye(2))
    assert sphere.contains((1.0, 10.0))
    assert not sphere.contains((4.0, 1.0))
    assert not sphere.contains((1.0,))
