"""
One-dimensional model spaces: intervals, circles and the radial reductions of
round spheres and flat balls with radial weights.

A space knows its weighted density ρ = J e^{-f}, its diameter, the boundary
conditions at both ends and the closed-form curvature of Ric_f^m along the
radial coordinate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError, InvalidSpaceError
from .fields import ScalarField, parse_field

logger = logging.getLogger(__name__)

ENDPOINT_OFFSET = 1e-4
PERIODICITY_TOLERANCE = 1e-9


class SpaceKind(Enum):
    """ Family of a 1D model space """
    INTERVAL = "interval"
    CIRCLE = "circle"
    SPHERE = "sphere"
    BALL = "ball"


class BoundaryCondition(Enum):
    """ Condition imposed at an end of a 1D problem """
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    CLOSED = "closed"
    NATURAL = "natural"


_ALLOWED_BC = {
    SpaceKind.INTERVAL: (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN),
    SpaceKind.CIRCLE: (BoundaryCondition.CLOSED,),
    SpaceKind.SPHERE: (BoundaryCondition.NATURAL,),
    SpaceKind.BALL: (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN),
}


def radial_dimension_term(m: float, n: int, df: np.ndarray) -> np.ndarray:
    """
    Values of f'²/(m − n) along samples; zero for m = ∞, and for m = n
    where f' vanishes.

    Raises:
        InvalidArgumentError: m < n, or m = n with f' ≠ 0 somewhere.
    """
    df = np.asarray(df, dtype=float)
    if math.isinf(m) and m > 0:
        return np.zeros_like(df)
    if m < n or (m == n and np.abs(df).max(initial=0.0) > 1e-12):
        raise InvalidArgumentError(
            f"Ric_f^m needs m > {n} (or m = {n} with constant f), got m = {m}."
        )
    if m == n:
        return np.zeros_like(df)
    return df ** 2 / (m - n)


@dataclass(frozen=True)
class ModelSpace1D:
    """
    Rotationally symmetric model space reduced to its radial coordinate.

    Attributes:
        kind (SpaceKind): interval, circle, sphere (unit round S^n) or ball
    (flat ball of radius `length` in R^n).
        length (float): Interval length, circumference, π for spheres, radius
    for balls.
        f (ScalarField): Radial weight potential, a field over "x".
        bc (BoundaryCondition): Condition at the boundary ends.
        n_ambient (int): Dimension of the represented manifold.
        start (float): Left end of an interval.
        f_text (str): Expression `f` was parsed from.
    """
    kind: SpaceKind
    length: float
    f: ScalarField
    bc: BoundaryCondition
    n_ambient: int = 1
    start: float = 0.0
    f_text: str = "0"

    def __post_init__(self):
        if not self.length > 0.0 or not math.isfinite(self.length):
            raise InvalidSpaceError(f"Space length must be positive, got {self.length}.")
        if self.bc not in _ALLOWED_BC[self.kind]:
            raise InvalidArgumentError(
                f'Boundary condition "{self.bc.value}" is not available on a {self.kind.value}.'
            )
        if self.kind in (SpaceKind.SPHERE, SpaceKind.BALL) and self.n_ambient < 2:
            raise InvalidArgumentError(
                f"A {self.kind.value} reduction needs n ≥ 2, got {self.n_ambient}."
            )
        if self.kind in (SpaceKind.INTERVAL, SpaceKind.CIRCLE) and self.n_ambient != 1:
            raise InvalidArgumentError(f"A {self.kind.value} is 1-dimensional.")
        if self.kind is SpaceKind.CIRCLE:
            self._check_periodic()

    def _check_periodic(self):
        left = self.f.jet_at([self.start])
        right = self.f.jet_at([self.start + self.length])
        for order in range(3):
            a, b = left.derivative((order,)), right.derivative((order,))
            if abs(a - b) > PERIODICITY_TOLERANCE * (1.0 + abs(a) + abs(b)):
                raise InvalidSpaceError(
                    f'Weight "{self.f_text}" is not {self.length:g}-periodic '
                    f"(derivative {order}: {a!r} vs {b!r})."
                )

    @property
    def endpoints(self) -> tuple[float, float]:
        return self.start, self.start + self.length

    @property
    def closed(self) -> bool:
        return self.kind is SpaceKind.CIRCLE

    @property
    def end_conditions(self) -> tuple[BoundaryCondition, BoundaryCondition]:
        """ Conditions at the left and right ends """
        if self.kind is SpaceKind.SPHERE:
            return BoundaryCondition.NATURAL, BoundaryCondition.NATURAL
        if self.kind is SpaceKind.BALL:
            return BoundaryCondition.NATURAL, self.bc
        return self.bc, self.bc

    @property
    def offsets(self) -> tuple[float, float]:
        """ Distance kept from ends where the Jacobian vanishes """
        offset = self.length * ENDPOINT_OFFSET
        if self.kind is SpaceKind.SPHERE:
            return offset, offset
        if self.kind is SpaceKind.BALL:
            return offset, 0.0
        return 0.0, 0.0

    @property
    def diameter(self) -> float:
        if self.kind is SpaceKind.CIRCLE:
            return self.length / 2.0
        if self.kind is SpaceKind.SPHERE:
            return math.pi
        if self.kind is SpaceKind.BALL:
            return 2.0 * self.length
        return self.length

    @property
    def has_boundary(self) -> bool:
        return self.kind in (SpaceKind.INTERVAL, SpaceKind.BALL)

    def jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind is SpaceKind.SPHERE:
            return np.sin(x) ** (self.n_ambient - 1)
        if self.kind is SpaceKind.BALL:
            return x ** (self.n_ambient - 1)
        return np.ones_like(x)

    def density(self, x) -> np.ndarray:
        """ ρ(x) = J(x) e^{-f(x)} """
        x = np.asarray(x, dtype=float)
        return self.jacobian(x) * np.exp(-np.asarray(self.f.evaluate(x), dtype=float))

    def weight_derivatives(self, x) -> tuple[np.ndarray, np.ndarray]:
        """ f' and f'' at the sample points, read off jets """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        first = np.empty_like(x)
        second = np.empty_like(x)
        for i, xi in enumerate(x):
            jet = self.f.jet_at([xi])
            first[i] = jet.derivative((1,))
            second[i] = jet.derivative((2,))
        return first, second

    def sample_points(self, samples: int) -> np.ndarray:
        """ Uniform samples of the radial coordinate, kept off vanishing-Jacobian ends """
        a, b = self.endpoints
        left, right = self.offsets
        if self.closed:
            return a + self.length * np.arange(samples) / samples
        return np.linspace(a + left, b - right, samples)

    def curvature_scan(self, x, m: float) -> np.ndarray:
        """
        Smallest eigenvalue of Ric_f^m relative to g at radial coordinates x.

        Intervals and circles: f'' − f'²/(m−1). Unit spheres S^n: the radial
        direction gives (n−1) + f'' − f'²/(m−n), the spherical ones
        (n−1) + f' cot x. Flat balls: f'' − f'²/(m−n) and f'/x.

        Raises:
            InvalidArgumentError: m < n, or m = n with nonconstant f.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        first, second = self.weight_derivatives(x)
        n = self.n_ambient
        radial = second - radial_dimension_term(m, n, first)
        if self.kind is SpaceKind.SPHERE:
            return np.minimum(radial + (n - 1), (n - 1) + first / np.tan(x))
        if self.kind is SpaceKind.BALL:
            return np.minimum(radial, first / x)
        return radial

    def boundary_scan(self) -> tuple[float | None, float | None]:
        """
        Minima of H_f and II over the boundary, or (None, None) without one.

        Interval ends have II = 0 and H = 0, so H_f = −∂f/∂n. The sphere of
        radius R bounding a flat ball has II = 1/R and H = (n−1)/R.
        """
        if not self.has_boundary:
            return None, None
        a, b = self.endpoints
        if self.kind is SpaceKind.BALL:
            first, _ = self.weight_derivatives([b])
            radius = self.length
            return (self.n_ambient - 1) / radius - float(first[0]), 1.0 / radius
        first, _ = self.weight_derivatives([a, b])
        return float(min(first[0], -first[1])), 0.0


def make_space(kind: str, length: float | None = None, f: str = "0", bc: str | None = None,
               n: int | None = None, start: float = 0.0) -> ModelSpace1D:
    """
    Builds a model space from harness-level parameters.

    Args:
        kind (str): "interval", "circle", "sphere" or "ball".
        length (float | None): Length, circumference or radius. Spheres are
    always the unit sphere.
        f (str): Weight expression over "x".
        bc (str | None): Boundary condition; defaults to "closed" for
    circles, "natural" for spheres and "neumann" otherwise.
        n (int | None): Ambient dimension of sphere and ball reductions.
        start (float): Left end of an interval.

    Returns:
        ModelSpace1D: the validated space.

    Raises:
        InvalidArgumentError: unknown kind or bc, bad parameters.
        InvalidSpaceError: nonperiodic circle weight, nonpositive length.
    """
    try:
        space_kind = SpaceKind(kind)
    except ValueError as err:
        raise InvalidArgumentError(f'Unknown space kind "{kind}".') from err
    defaults = {
        SpaceKind.CIRCLE: BoundaryCondition.CLOSED,
        SpaceKind.SPHERE: BoundaryCondition.NATURAL,
    }
    try:
        condition = BoundaryCondition(bc) if bc else defaults.get(space_kind, BoundaryCondition.NEUMANN)
    except ValueError as err:
        raise InvalidArgumentError(f'Unknown boundary condition "{bc}".') from err

    if space_kind is SpaceKind.SPHERE:
        if length is not None and not math.isclose(length, math.pi):
            raise InvalidArgumentError("Sphere reductions are the unit sphere, length π.")
        length = math.pi
        start = 0.0
    elif length is None:
        raise InvalidArgumentError(f"A {space_kind.value} needs a length.")
    if space_kind in (SpaceKind.CIRCLE, SpaceKind.BALL):
        start = 0.0

    dimension = n if n is not None else (2 if space_kind in (SpaceKind.SPHERE, SpaceKind.BALL) else 1)
    return ModelSpace1D(
        kind=space_kind,
        length=float(length),
        f=parse_field(f, ("x",)),
        bc=condition,
        n_ambient=int(dimension),
        start=float(start),
        f_text=f,
    )
