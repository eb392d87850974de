"""
Chart-based Riemannian calculus.

All quantities are read off order-3 jets: the metric jets give Christoffel
symbols exact through order 2, which in turn give Hessians of fields and the
Ricci tensor. `PointCalculus` holds those jets for one point and is shared by
the identity checks so each node is only expanded once.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .charts import BoundarySegment, Chart
from .errors import DegenerateGradientError, InvalidArgumentError, SingularPointError
from .fields import ScalarField
from .jets import Jet, jet_seed

logger = logging.getLogger(__name__)

DEGENERATE_THRESHOLD = 1e-12
SINGULAR_TOLERANCE = 1e-14


class PointCalculus:
    """
    Metric, inverse metric and Christoffel jets at one chart point.

    Args:
        chart (Chart): Chart the point lives on.
        seeds (Sequence[Jet]): Seeded coordinate jets of the point.

    Raises:
        SingularPointError: det g vanishes at the point.
    """

    def __init__(self, chart: Chart, seeds: Sequence[Jet]):
        self.chart = chart
        self.dim = chart.dim
        self.seeds = list(seeds)
        self.point = tuple(seed.value for seed in self.seeds)
        g = [[entry.jet(self.seeds) for entry in row] for row in chart.metric]
        if self.dim == 1:
            det = g[0][0]
        else:
            det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        if det.value <= SINGULAR_TOLERANCE:
            raise SingularPointError(
                f'Metric of chart "{chart.id}" is singular at {list(self.point)} (det g = {det.value:.3e}).'
            )
        inv_det = 1.0 / det
        if self.dim == 1:
            ginv = [[inv_det]]
        else:
            ginv = [
                [g[1][1] * inv_det, -(g[0][1] * inv_det)],
                [-(g[1][0] * inv_det), g[0][0] * inv_det],
            ]
        self.g = g
        self.det = det
        self.ginv = ginv
        # dg[i][j][k] = ∂_k g_ij
        dg = [[[g[i][j].diff(k) for k in range(self.dim)] for j in range(self.dim)]
              for i in range(self.dim)]
        self.gamma = [[[self._christoffel(dg, k, i, j) for j in range(self.dim)]
                       for i in range(self.dim)] for k in range(self.dim)]

    @classmethod
    def at(cls, chart: Chart, point: Sequence[float]) -> PointCalculus:
        """
        Seeds the coordinates of `point` and expands the metric there.

        Raises:
            InvalidArgumentError: the point has the wrong dimension or lies
        outside the chart's coordinate box.
        """
        point = tuple(float(x) for x in point)
        if not chart.contains(point):
            raise InvalidArgumentError(
                f'Point {list(point)} is not in the domain of chart "{chart.id}".'
            )
        return cls(chart, [jet_seed(x, i, chart.dim) for i, x in enumerate(point)])

    def _christoffel(self, dg, k: int, i: int, j: int) -> Jet:
        total = None
        for l in range(self.dim):
            term = self.ginv[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
            total = term if total is None else total + term
        return total * 0.5

    @property
    def metric(self) -> np.ndarray:
        return np.array([[entry.value for entry in row] for row in self.g])

    @property
    def inverse(self) -> np.ndarray:
        return np.array([[entry.value for entry in row] for row in self.ginv])

    @property
    def volume_density(self) -> float:
        """ sqrt(det g) """
        return math.sqrt(self.det.value)

    def christoffel_values(self) -> np.ndarray:
        """ Γ^k_ij as a [k, i, j] array """
        return np.array([[[entry.value for entry in row] for row in plane] for plane in self.gamma])

    def gradient(self, jet: Jet) -> list[Jet]:
        """ Jets of the partial derivatives ∂_i φ """
        return [jet.diff(i) for i in range(self.dim)]

    def raise_index(self, covector: Sequence[Jet]) -> list[Jet]:
        """ g^{ij} a_j as jets """
        return [sum((self.ginv[i][j] * covector[j] for j in range(self.dim)), start=0.0)
                for i in range(self.dim)]

    def pairing(self, a: Sequence[Jet], b: Sequence[Jet]) -> Jet:
        """ g^{ij} a_i b_j for covectors given as jets """
        total = None
        for i in range(self.dim):
            for j in range(self.dim):
                term = self.ginv[i][j] * a[i] * b[j]
                total = term if total is None else total + term
        return total

    def hessian(self, du: Sequence[Jet]) -> list[list[Jet]]:
        """ Jets of Hess φ(e_i, e_j) = ∂_i∂_j φ − Γ^k_ij ∂_k φ from the jets of ∂φ """
        hess = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                entry = du[i].diff(j)
                for k in range(self.dim):
                    entry = entry - self.gamma[k][i][j] * du[k]
                row.append(entry)
            hess.append(row)
        return hess

    def hessian_values(self, jet: Jet) -> np.ndarray:
        """ Hessian matrix values of a field jet """
        return jet.hessian() - np.einsum("kij,k->ij", self.christoffel_values(), jet.gradient())

    def trace(self, tensor: Sequence[Sequence[Jet]]) -> Jet:
        """ g^{ij} T_ij as a jet """
        total = None
        for i in range(self.dim):
            for j in range(self.dim):
                term = self.ginv[i][j] * tensor[i][j]
                total = term if total is None else total + term
        return total

    def ricci(self) -> np.ndarray:
        """
        Ricci tensor from derivatives of the Christoffel jets:
        R_ij = ∂_k Γ^k_ij − ∂_i Γ^k_kj + Γ^k_kl Γ^l_ij − Γ^k_il Γ^l_kj.
        """
        n = self.dim
        gamma = self.christoffel_values()
        dgamma = np.array([[[self.gamma[k][i][j].gradient() for j in range(n)]
                            for i in range(n)] for k in range(n)])
        ric = (
            np.einsum("kijk->ij", dgamma)
            - np.einsum("kkji->ij", dgamma)
            + np.einsum("kkl,lij->ij", gamma, gamma)
            - np.einsum("kil,lkj->ij", gamma, gamma)
        )
        return ric

    def unit_normal(self, segment: BoundarySegment) -> list[Jet]:
        """ Jets of the outward unit normal n^k = ±g^{ak}/sqrt(g^{aa}) of {x_a = const} """
        a = segment.axis
        scale = self.ginv[a][a] ** -0.5
        return [self.ginv[a][k] * scale * float(segment.outward) for k in range(self.dim)]


@dataclass(frozen=True)
class CovariantData:
    """
    First and second order covariant quantities of u at a point.

    `delta_inf_u` is None when w is at or below the degenerate threshold;
    only p = 2 tolerates that.
    """
    grad_u: np.ndarray
    w: float
    hess_u: np.ndarray
    lap_u: float
    lap_f_u: float
    delta_inf_u: float | None
    hess_sq: float
    hess_sq_A: float


@dataclass(frozen=True)
class Curvature:
    ric: np.ndarray
    ric_f: np.ndarray
    ric_fm: np.ndarray
    min_eig: float


@dataclass(frozen=True)
class BoundaryData:
    """
    Boundary geometry at one boundary point, plus the tangential data of a
    field when computed by `boundary_tangential`.

    Tangential vectors are 1-dimensional on 2D charts and are stored as their
    component along the unit tangent; on 1D charts they vanish.
    """
    point: tuple[float, ...]
    normal: np.ndarray
    tangent: np.ndarray
    II: np.ndarray
    H: float
    H_f: float
    arc_density: float
    u_n: float | None = None
    grad_bdy_u: float | None = None
    lap_bdy_f_u: float | None = None
    grad_bdy_un: float | None = None


def point_calculus(chart: Chart, x: Sequence[float]) -> PointCalculus:
    return PointCalculus.at(chart, x)


def dimension_correction(m: float, n: int, df: np.ndarray) -> np.ndarray:
    """
    The term ∇f⊗∇f/(m − n) of Ric_f^m; zero for m = ∞, and for m = n where ∇f
    vanishes.

    Raises:
        InvalidArgumentError: m < n, or m = n with ∇f ≠ 0.
    """
    df = np.asarray(df, dtype=float)
    if math.isinf(m) and m > 0:
        return np.zeros((df.size, df.size))
    if m < n or (m == n and np.abs(df).max(initial=0.0) > 1e-12):
        raise InvalidArgumentError(
            f"Ric_f^m needs m > {n} (or m = {n} with constant f), got m = {m}."
        )
    if m == n:
        return np.zeros((df.size, df.size))
    return np.outer(df, df) / (m - n)


def christoffel(chart: Chart, x: Sequence[float]) -> np.ndarray:
    """
    Christoffel symbols of the Levi-Civita connection.

    Args:
        chart (Chart): Catalog chart.
        x (Sequence[float]): Point in the chart's domain.

    Returns:
        np.ndarray: Γ^k_ij indexed [k, i, j], symmetric in i and j.

    Raises:
        SingularPointError: the metric is singular at x.
    """
    return point_calculus(chart, x).christoffel_values()


def covariant_at(calc: PointCalculus, u_jet: Jet, f_jet: Jet, p: float,
               threshold: float) -> CovariantData:
    du = calc.gradient(u_jet)
    w_jet = calc.pairing(du, du)
    w = max(w_jet.value, 0.0)
    ginv = calc.inverse
    grad_u = ginv @ u_jet.gradient()
    hess = calc.hessian_values(u_jet)
    lap = float(np.sum(ginv * hess))
    lap_f = lap - float(f_jet.gradient() @ grad_u)
    mixed = ginv @ hess
    hess_sq = float(np.trace(mixed @ mixed))

    if w <= threshold:
        if p != 2.0:
            raise DegenerateGradientError(
                f"|∇u|² = {w:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
            )
        return CovariantData(grad_u, w, hess, lap, lap_f, None, hess_sq, hess_sq)

    grad_w = w_jet.gradient()
    grad_w_sq = float(grad_w @ ginv @ grad_w)
    u_dot_w = float(grad_u @ grad_w)
    delta_inf = float(grad_u @ hess @ grad_u) / w
    hess_sq_a = (
        hess_sq
        + (p - 2.0) / 2.0 * grad_w_sq / w
        + (p - 2.0) ** 2 / 4.0 * u_dot_w ** 2 / w ** 2
    )
    return CovariantData(grad_u, w, hess, lap, lap_f, delta_inf, hess_sq, hess_sq_a)


def covariant_data(chart: Chart, u: ScalarField, f: ScalarField, p: float,
                   x: Sequence[float], threshold: float = DEGENERATE_THRESHOLD) -> CovariantData:
    """
    Gradient, Hessian and the Laplacian family of u at x.

    Args:
        chart (Chart): Catalog chart.
        u (ScalarField): Test function.
        f (ScalarField): Weight potential of dμ = e^{-f} dV.
        p (float): Exponent used for |Hess u|²_A.
        x (Sequence[float]): Point in the chart's domain.
        threshold (float): Degenerate-gradient threshold for w = |∇u|².

    Returns:
        CovariantData: the point's covariant quantities.

    Raises:
        DegenerateGradientError: w ≤ threshold with p ≠ 2.
        SingularPointError: the metric is singular at x.
    """
    calc = point_calculus(chart, x)
    return covariant_at(calc, u.jet(calc.seeds), f.jet(calc.seeds), float(p), threshold)


def curvature_at(calc: PointCalculus, f_jet: Jet, m: float) -> Curvature:
    ric = calc.ricci()
    ric_f = ric + calc.hessian_values(f_jet)
    ric_fm = ric_f - dimension_correction(m, calc.dim, f_jet.gradient())
    symmetric = 0.5 * (ric_fm + ric_fm.T)
    min_eig = float(scipy.linalg.eigh(symmetric, calc.metric, eigvals_only=True)[0])
    return Curvature(ric, ric_f, ric_fm, min_eig)


def curvature(chart: Chart, f: ScalarField, m: float, x: Sequence[float]) -> Curvature:
    """
    Ricci, Bakry-Émery Ricci and m-Bakry-Émery Ricci tensors at x.

    Args:
        chart (Chart): Catalog chart.
        f (ScalarField): Weight potential.
        m (float): Synthetic dimension, `math.inf` allowed.
        x (Sequence[float]): Point in the chart's domain.

    Returns:
        Curvature: tensors and the smallest eigenvalue of Ric_f^m relative
    to g.

    Raises:
        InvalidArgumentError: m ≤ dim (see `dimension_correction`).
    """
    calc = point_calculus(chart, x)
    return curvature_at(calc, f.jet(calc.seeds), float(m))


def weighted_laplacian_jet(calc: PointCalculus, u_jet: Jet, f_jet: Jet) -> Jet:
    """ Jet of Δ_f u = Δu − ⟨∇f, ∇u⟩, exact through order 1 """
    du = calc.gradient(u_jet)
    lap = calc.trace(calc.hessian(du))
    return lap - calc.pairing(calc.gradient(f_jet), du)


def p_laplacian_jet(calc: PointCalculus, u_jet: Jet, f_jet: Jet, p: float,
                    threshold: float = DEGENERATE_THRESHOLD) -> Jet:
    """
    Jet of Δ_{p,f}u = w^{p/2−1}(Δ_f u + (p−2)Δ_∞u), exact through order 1.

    Raises:
        DegenerateGradientError: w ≤ threshold with p ≠ 2.
    """
    du = calc.gradient(u_jet)
    hess = calc.hessian(du)
    lap_f = calc.trace(hess) - calc.pairing(calc.gradient(f_jet), du)
    if p == 2.0:
        return lap_f
    w = calc.pairing(du, du)
    if w.value <= threshold:
        raise DegenerateGradientError(
            f"|∇u|² = {w.value:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
        )
    grad_u = calc.raise_index(du)
    infinity = None
    for i in range(calc.dim):
        for j in range(calc.dim):
            term = grad_u[i] * grad_u[j] * hess[i][j]
            infinity = term if infinity is None else infinity + term
    return w ** (p / 2.0 - 1.0) * (lap_f + (p - 2.0) * infinity / w)


def p_laplacian(chart: Chart, f: ScalarField, p: float, u: ScalarField,
                x: Sequence[float], threshold: float = DEGENERATE_THRESHOLD) -> float:
    """
    Weighted p-Laplacian Δ_{p,f}u = e^f div(e^{-f}|∇u|^{p−2}∇u) at x.

    Raises:
        DegenerateGradientError: ∇u vanishes at x with p ≠ 2.
    """
    calc = point_calculus(chart, x)
    return p_laplacian_jet(calc, u.jet(calc.seeds), f.jet(calc.seeds), float(p), threshold).value


def _segment(chart: Chart, segment: int | BoundarySegment) -> BoundarySegment:
    if isinstance(segment, BoundarySegment):
        return segment
    if not chart.has_boundary:
        raise InvalidArgumentError(f'Chart "{chart.id}" has no boundary.')
    try:
        return chart.boundary[segment]
    except IndexError as err:
        raise InvalidArgumentError(
            f'Chart "{chart.id}" has {len(chart.boundary)} boundary segments, got index {segment}.'
        ) from err


def boundary_at(calc: PointCalculus, segment: BoundarySegment, f_jet: Jet,
              u_jet: Jet | None = None) -> BoundaryData:
    normal_jets = calc.unit_normal(segment)
    normal = np.array([n.value for n in normal_jets])
    df = f_jet.gradient()
    weight = math.exp(-f_jet.value)

    if calc.dim == 1:
        tangent = np.zeros(1)
        second = np.zeros((0, 0))
        mean = 0.0
        arc_density = weight
    else:
        b = segment.free_axis
        h = calc.g[b][b].value
        tangent = np.zeros(calc.dim)
        tangent[b] = 1.0 / math.sqrt(h)
        gamma = calc.christoffel_values()
        covariant_n = np.array([
            normal_jets[k].gradient()[b] + sum(gamma[k, b, l] * normal[l] for l in range(calc.dim))
            for k in range(calc.dim)
        ]) / math.sqrt(h)
        mean = float(covariant_n @ calc.metric @ tangent)
        second = np.array([[mean]])
        arc_density = weight * math.sqrt(h)

    mean_f = mean - float(df @ normal)
    data = dict(point=calc.point, normal=normal, tangent=tangent, II=second, H=mean,
                H_f=mean_f, arc_density=arc_density)
    if u_jet is None:
        return BoundaryData(**data)

    du = calc.gradient(u_jet)
    normal_derivative = None
    for k in range(calc.dim):
        term = normal_jets[k] * du[k]
        normal_derivative = term if normal_derivative is None else normal_derivative + term

    if calc.dim == 1:
        return BoundaryData(**data, u_n=normal_derivative.value, grad_bdy_u=0.0,
                            lap_bdy_f_u=0.0, grad_bdy_un=0.0)

    b = segment.free_axis
    h_jet = calc.g[b][b]
    h, h_s = h_jet.value, h_jet.gradient()[b]
    u_s = u_jet.gradient()[b]
    second_axis = [0] * calc.dim
    second_axis[b] = 2
    u_ss = u_jet.derivative(tuple(second_axis))
    lap_bdy = u_ss / h - 0.5 * h_s * u_s / h ** 2
    lap_bdy_f = lap_bdy - df[b] * u_s / h
    return BoundaryData(
        **data,
        u_n=normal_derivative.value,
        grad_bdy_u=u_s / math.sqrt(h),
        lap_bdy_f_u=lap_bdy_f,
        grad_bdy_un=normal_derivative.gradient()[b] / math.sqrt(h),
    )


def _boundary_calculus(chart: Chart, s: float, segment: BoundarySegment) -> PointCalculus:
    lo, hi = segment.parameter_range
    if chart.dim == 2 and not segment.periodic and not lo - 1e-12 <= s <= hi + 1e-12:
        raise InvalidArgumentError(f"Boundary parameter {s} outside [{lo}, {hi}].")
    return point_calculus(chart, segment.point(s, chart.dim))


def boundary_geometry(chart: Chart, f: ScalarField, s: float,
                      segment: int | BoundarySegment = 0) -> BoundaryData:
    """
    Outward unit normal, second fundamental form, mean curvature and weighted
    mean curvature at boundary parameter s.

    II(T, T) = ⟨∇_T n, T⟩ on the unit tangent T, so convex boundaries have
    II ≥ 0.

    Args:
        chart (Chart): Catalog chart with a boundary.
        f (ScalarField): Weight potential.
        s (float): Boundary parameter (ignored on 1D charts).
        segment (int | BoundarySegment): Boundary segment index, or an
    explicit segment such as a collar edge.

    Returns:
        BoundaryData: geometry part only.

    Raises:
        InvalidArgumentError: the chart has no boundary.
    """
    segment = _segment(chart, segment)
    calc = _boundary_calculus(chart, s, segment)
    return boundary_at(calc, segment, f.jet(calc.seeds))


def boundary_tangential(chart: Chart, f: ScalarField, u: ScalarField, s: float,
                        segment: int | BoundarySegment = 0) -> BoundaryData:
    """
    Boundary geometry plus u_n, ∇_∂u, Δ_{∂,f}u and ∇_∂u_n at parameter s.

    Raises:
        InvalidArgumentError: the chart has no boundary.
    """
    segment = _segment(chart, segment)
    calc = _boundary_calculus(chart, s, segment)
    return boundary_at(calc, segment, f.jet(calc.seeds), u.jet(calc.seeds))
