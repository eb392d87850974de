"""
Catalog of model charts.

Charts are looked up by string id (`get_chart("sphere2")`). Each entry ships
its metric as a matrix of scalar fields plus the analytic metadata the checks
need: diameter, periodic axes, boundary segments and the singular coordinate
sides that quadrature and sampling must stay away from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .fields import Constant, ScalarField, parse_field

DEFAULT_INTERIOR_OFFSET = 1e-3


@dataclass(frozen=True)
class BoundarySegment:
    """
    Piece of a chart boundary where coordinate `axis` is held at `value`.

    On 2D charts the free coordinate is the boundary parameter s; on 1D
    charts a segment is a single point and s is ignored.

    Attributes:
        name (str): Label used in reports.
        axis (int): Coordinate held fixed.
        value (float): Its value on the segment.
        outward (int): +1 if the outward normal points toward increasing
    x_axis, -1 otherwise.
        parameter_range (tuple[float, float]): Range of s.
        periodic (bool): Whether s runs around a closed curve.
    """
    name: str
    axis: int
    value: float
    outward: int
    parameter_range: tuple[float, float] = (0.0, 0.0)
    periodic: bool = False

    def point(self, s: float, dim: int) -> tuple[float, ...]:
        """ Chart coordinates of the boundary point with parameter s """
        if dim == 1:
            return (self.value,)
        coords = [0.0, 0.0]
        coords[self.axis] = self.value
        coords[1 - self.axis] = float(s)
        return tuple(coords)

    @property
    def free_axis(self) -> int:
        """ Coordinate that parameterizes the segment (2D charts) """
        return 1 - self.axis


@dataclass(frozen=True)
class Chart:
    """
    Model manifold patch (M, g) in coordinates.

    Attributes:
        id (str): Catalog tag.
        coordinates (tuple[str, ...]): Coordinate names used by expressions.
        metric (tuple[tuple[ScalarField, ...], ...]): g_ij as fields.
        domain (tuple[tuple[float, float], ...]): Coordinate box.
        periodic (tuple[bool, ...]): Per-axis periodicity.
        boundary (tuple[BoundarySegment, ...]): Boundary of M.
        singular_sides (tuple[tuple[int, float], ...]): (axis, value) pairs
    where the coordinates degenerate (poles, disk center).
        diameter (float): Riemannian diameter of the modelled space.
        interior_offset (float): Distance kept from singular sides.
    """
    id: str
    coordinates: tuple[str, ...]
    metric: tuple[tuple[ScalarField, ...], ...]
    domain: tuple[tuple[float, float], ...]
    periodic: tuple[bool, ...]
    diameter: float
    boundary: tuple[BoundarySegment, ...] = ()
    singular_sides: tuple[tuple[int, float], ...] = ()
    interior_offset: float = DEFAULT_INTERIOR_OFFSET
    description: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        """ Number of coordinates """
        return len(self.coordinates)

    @property
    def has_boundary(self) -> bool:
        """ Whether M itself has a boundary """
        return len(self.boundary) > 0

    def field(self, text: str) -> ScalarField:
        """ Parses an expression over this chart's coordinate names """
        return parse_field(text, self.coordinates)

    def metric_at(self, point) -> np.ndarray:
        """ Values g_ij at a point """
        return np.array([[g.evaluate(*point) for g in row] for row in self.metric], dtype=float)

    def quadrature_box(self) -> tuple[tuple[float, float], ...]:
        """ Coordinate box with every singular side pulled in by the offset """
        box = [list(bounds) for bounds in self.domain]
        for axis, value in self.singular_sides:
            lo, hi = box[axis]
            if math.isclose(value, lo, abs_tol=1e-15):
                box[axis][0] = lo + self.interior_offset
            else:
                box[axis][1] = hi - self.interior_offset
        return tuple(tuple(bounds) for bounds in box)

    def collar(self) -> tuple[BoundarySegment, ...]:
        """
        Inner edges left by excising the singular sides. Their outward normal
        points toward the excised collar.
        """
        if self.dim != 2:
            return ()
        box = self.quadrature_box()
        segments = []
        for axis, value in self.singular_sides:
            lo, hi = box[axis]
            at_low = math.isclose(value, self.domain[axis][0], abs_tol=1e-15)
            free = 1 - axis
            segments.append(BoundarySegment(
                name=f"collar:{self.coordinates[axis]}={value:g}",
                axis=axis,
                value=lo if at_low else hi,
                outward=-1 if at_low else 1,
                parameter_range=self.domain[free],
                periodic=self.periodic[free],
            ))
        return tuple(segments)

    def contains(self, point, tol: float = 1e-12) -> bool:
        """ Whether a point lies in the closed coordinate box """
        if len(point) != self.dim:
            return False
        for x, (lo, hi), periodic in zip(point, self.domain, self.periodic):
            if not periodic and not lo - tol <= x <= hi + tol:
                return False
        return True

    def validate(self, samples: int = 16) -> None:
        """
        Checks that g is symmetric positive definite on a sample grid of the
        quadrature box.

        Raises:
            InvalidArgumentError: the metric fails the check somewhere.
        """
        axes = [np.linspace(lo, hi, samples) for lo, hi in self.quadrature_box()]
        for point in np.array(np.meshgrid(*axes, indexing="ij")).reshape(self.dim, -1).T:
            g = self.metric_at(point)
            if not np.allclose(g, g.T) or np.linalg.eigvalsh(g).min() <= 0.0:
                raise InvalidArgumentError(
                    f'Metric of chart "{self.id}" is not positive definite at {point.tolist()}.'
                )


def _flat(coords: tuple[str, ...]) -> tuple[tuple[ScalarField, ...], ...]:
    dim = len(coords)
    return tuple(
        tuple(Constant(1.0 if i == j else 0.0) for j in range(dim)) for i in range(dim)
    )


def _euclidean_plane(offset: float) -> Chart:
    return Chart(
        id="euclidean_plane",
        coordinates=("x", "y"),
        metric=_flat(("x", "y")),
        domain=((-1.0, 1.0), (-1.0, 1.0)),
        periodic=(False, False),
        diameter=2.0 * math.sqrt(2.0),
        interior_offset=offset,
        description="Euclidean plane patch [-1, 1]², used as an open chart.",
    )


def _flat_torus(offset: float) -> Chart:
    return Chart(
        id="flat_torus",
        coordinates=("x", "y"),
        metric=_flat(("x", "y")),
        domain=((0.0, 2.0 * math.pi), (0.0, 2.0 * math.pi)),
        periodic=(True, True),
        diameter=math.pi * math.sqrt(2.0),
        interior_offset=offset,
        description="Flat torus R²/(2πZ)².",
    )


def _sphere2(offset: float) -> Chart:
    sin_sq = parse_field("sin(theta)**2", ("theta", "phi"))
    return Chart(
        id="sphere2",
        coordinates=("theta", "phi"),
        metric=((Constant(1.0), Constant(0.0)), (Constant(0.0), sin_sq)),
        domain=((0.0, math.pi), (0.0, 2.0 * math.pi)),
        periodic=(False, True),
        diameter=math.pi,
        singular_sides=((0, 0.0), (0, math.pi)),
        interior_offset=offset,
        description="Unit 2-sphere in polar coordinates (theta, phi).",
    )


def _hemisphere2(offset: float) -> Chart:
    sin_sq = parse_field("sin(theta)**2", ("theta", "phi"))
    return Chart(
        id="hemisphere2",
        coordinates=("theta", "phi"),
        metric=((Constant(1.0), Constant(0.0)), (Constant(0.0), sin_sq)),
        domain=((0.0, math.pi / 2.0), (0.0, 2.0 * math.pi)),
        periodic=(False, True),
        diameter=math.pi,
        boundary=(BoundarySegment(
            name="equator", axis=0, value=math.pi / 2.0, outward=1,
            parameter_range=(0.0, 2.0 * math.pi), periodic=True,
        ),),
        singular_sides=((0, 0.0),),
        interior_offset=offset,
        description="Closed upper unit hemisphere, totally geodesic boundary.",
    )


def _disk_polar(offset: float) -> Chart:
    r_sq = parse_field("r**2", ("r", "phi"))
    return Chart(
        id="disk_polar",
        coordinates=("r", "phi"),
        metric=((Constant(1.0), Constant(0.0)), (Constant(0.0), r_sq)),
        domain=((0.0, 1.0), (0.0, 2.0 * math.pi)),
        periodic=(False, True),
        diameter=2.0,
        boundary=(BoundarySegment(
            name="unit circle", axis=0, value=1.0, outward=1,
            parameter_range=(0.0, 2.0 * math.pi), periodic=True,
        ),),
        singular_sides=((0, 0.0),),
        interior_offset=offset,
        description="Closed unit disk in polar coordinates.",
    )


def _line1d(offset: float, start: float = 0.0, stop: float = 1.0) -> Chart:
    if stop <= start:
        raise InvalidArgumentError(f"line1d needs start < stop, got [{start}, {stop}].")
    return Chart(
        id="line1d",
        coordinates=("x",),
        metric=((Constant(1.0),),),
        domain=((float(start), float(stop)),),
        periodic=(False,),
        diameter=float(stop - start),
        boundary=(
            BoundarySegment(name="left", axis=0, value=float(start), outward=-1),
            BoundarySegment(name="right", axis=0, value=float(stop), outward=1),
        ),
        interior_offset=offset,
        description="Interval [start, stop].",
    )


def _circle1d(offset: float, length: float = 2.0 * math.pi) -> Chart:
    if length <= 0.0:
        raise InvalidArgumentError(f"circle1d needs a positive length, got {length}.")
    return Chart(
        id="circle1d",
        coordinates=("x",),
        metric=((Constant(1.0),),),
        domain=((0.0, float(length)),),
        periodic=(True,),
        diameter=float(length) / 2.0,
        interior_offset=offset,
        description="Circle of circumference `length`.",
    )


_CATALOG = {
    "euclidean_plane": _euclidean_plane,
    "flat_torus": _flat_torus,
    "sphere2": _sphere2,
    "hemisphere2": _hemisphere2,
    "disk_polar": _disk_polar,
    "line1d": _line1d,
    "circle1d": _circle1d,
}

CHART_IDS = tuple(_CATALOG)


def get_chart(chart_id: str, interior_offset: float = DEFAULT_INTERIOR_OFFSET, **params) -> Chart:
    """
    Builds a catalog chart.

    Args:
        chart_id (str): One of `CHART_IDS`.
        interior_offset (float): Distance kept from singular coordinate sides.
        **params: Chart parameters (`start`/`stop` for line1d, `length` for
    circle1d).

    Returns:
        Chart: the catalog entry.

    Raises:
        InvalidArgumentError: unknown id, bad parameters or offset.
    """
    if chart_id not in _CATALOG:
        raise InvalidArgumentError(
            f'Unknown chart "{chart_id}"; expected one of {", ".join(CHART_IDS)}.'
        )
    if not 0.0 < interior_offset < 0.1:
        raise InvalidArgumentError(f"Interior offset must lie in (0, 0.1), got {interior_offset}.")
    try:
        return _CATALOG[chart_id](interior_offset, **params)
    except TypeError as err:
        raise InvalidArgumentError(f'Bad parameters for chart "{chart_id}": {err}.') from err
