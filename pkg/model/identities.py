"""
Pointwise weighted p-Bochner formulas and the integrated weighted p-Reilly
formula, each returned as both sides plus a residual.

Left-hand sides differentiate composed fields (|∇u|^p) through jets and apply
the linearized operators to them; right-hand sides are assembled from
`CovariantData`, the curvature tensors and the jet of Δ_{p,f}u. The two paths
only share the metric expansion.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .charts import Chart
from .errors import DegenerateGradientError, InvalidArgumentError
from .fields import Composed, ScalarField
from .geometry import (
    DEGENERATE_THRESHOLD,
    PointCalculus,
    boundary_at,
    covariant_at,
    curvature_at,
    p_laplacian_jet,
    point_calculus,
    weighted_laplacian_jet,
)
from .jets import Jet
from .quadrature import QuadratureSpec, axis_rule, tensor_rule

logger = logging.getLogger(__name__)

COLLAR_NODES = 16


@dataclass(frozen=True)
class Linearized:
    """ 𝓛_f ψ (curly) and L_f ψ (straight) at a point """
    curly: float
    straight: float


@dataclass(frozen=True)
class BochnerResidual:
    lhs22: float
    rhs22: float
    lhs23: float
    rhs23: float
    res22: float
    res23: float
    scale: float


@dataclass(frozen=True)
class ReillyResidual:
    """
    Both sides of the integrated weighted p-Reilly formula.

    `boundary_rhs` includes `collar_rhs`, the flux through the inner edges
    left by excising singular coordinate sides; `collar_bound` estimates what
    the excised collar itself would contribute to the interior integral.
    `remark_rhs` is the p = 2 boundary form with 2Δ_{∂,f}u and no ∇_∂u_n term.
    """
    interior_lhs: float
    boundary_rhs: float
    residual: float
    quad_nodes: tuple[int, int]
    collar_rhs: float = 0.0
    collar_bound: float = 0.0
    remark_rhs: float | None = None
    remark_residual: float | None = None

    @property
    def outer_rhs(self) -> float:
        """ Flux through the boundary of M alone """
        return self.boundary_rhs - self.collar_rhs


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 2.0:
        raise InvalidArgumentError(f"The p-Bochner and p-Reilly checks need p ≥ 2, got {p}.")
    return p


def grad_power_field(chart: Chart, u: ScalarField, p: float,
                     threshold: float = DEGENERATE_THRESHOLD) -> ScalarField:
    """
    The field x ↦ |∇u|^p = (g^{ij}u_i u_j)^{p/2}, jet-evaluable through order
    2 wherever |∇u|² > threshold.

    Args:
        chart (Chart): Catalog chart.
        u (ScalarField): Test function.
        p (float): Exponent, p ≥ 2.
        threshold (float): Degenerate-gradient threshold.

    Returns:
        ScalarField: composed field.
    """
    p = _check_p(p)

    def build(seeds: Sequence[Jet]) -> Jet:
        calc = PointCalculus(chart, seeds)
        du = calc.gradient(u.jet(seeds))
        w = calc.pairing(du, du)
        if w.value <= threshold:
            raise DegenerateGradientError(
                f"|∇u|² = {w.value:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
            )
        return w if p == 2.0 else w ** (p / 2.0)

    return Composed(build, label=f"|∇({u!r})|^{p:g}")


def _linearized(calc: PointCalculus, u_jet: Jet, f_jet: Jet, psi_jet: Jet, p: float,
                threshold: float) -> Linearized:
    ginv = calc.inverse
    du = u_jet.gradient()
    grad_u = ginv @ du
    grad_psi = ginv @ psi_jet.gradient()
    w = float(du @ grad_u)
    if w <= threshold:
        raise DegenerateGradientError(
            f"|∇u|² = {w:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
        )
    hess_u = calc.hessian_values(u_jet)
    hess_psi = calc.hessian_values(psi_jet)
    df = f_jet.gradient()

    lap_f_psi = float(np.sum(ginv * hess_psi)) - float(df @ grad_psi)
    straight = w ** ((p - 2.0) / 2.0) * lap_f_psi \
        + (p - 2.0) * w ** ((p - 4.0) / 2.0) * float(grad_u @ hess_psi @ grad_u)

    lap_f_u = float(np.sum(ginv * hess_u)) - float(df @ grad_u)
    delta_pf = w ** ((p - 2.0) / 2.0) * (lap_f_u + (p - 2.0) * float(grad_u @ hess_u @ grad_u) / w)
    u_dot_psi = float(du @ grad_psi)
    across = grad_psi - grad_u * u_dot_psi / w
    curly = straight \
        + (p - 2.0) * delta_pf * u_dot_psi / w \
        + 2.0 * (p - 2.0) * w ** ((p - 4.0) / 2.0) * float(grad_u @ hess_u @ across)
    return Linearized(curly=curly, straight=straight)


def linearized_apply(chart: Chart, f: ScalarField, p: float, u: ScalarField, psi: ScalarField,
                     x: Sequence[float], threshold: float = DEGENERATE_THRESHOLD) -> Linearized:
    """
    Applies the linearized operators of the weighted p-Laplacian at u to ψ.

    L_f ψ = |∇u|^{p−2}Δ_f ψ + (p−2)|∇u|^{p−4} Hess ψ(∇u, ∇u), and 𝓛_f adds
    the first order terms (p−2)Δ_{p,f}u⟨∇u,∇ψ⟩/|∇u|² and
    2(p−2)|∇u|^{p−4} Hess u(∇u, ∇ψ − ⟨ν,∇ψ⟩ν) with ν = ∇u/|∇u|.

    Raises:
        DegenerateGradientError: |∇u|² ≤ threshold at x.
    """
    calc = point_calculus(chart, x)
    return _linearized(calc, u.jet(calc.seeds), f.jet(calc.seeds), psi.jet(calc.seeds),
                       float(p), threshold)


def bochner_residual(chart: Chart, f: ScalarField, p: float, u: ScalarField,
                     x: Sequence[float], threshold: float = DEGENERATE_THRESHOLD) -> BochnerResidual:
    """
    Both sides of the weighted p-Bochner formulas at x.

    lhs22 = (1/p) L_f(|∇u|^p) and
    rhs22 = |∇u|^{2p−4}(|Hess u|² + p(p−2)(Δ_∞u)² + Ric_f(∇u,∇u))
            + |∇u|^{p−2}(⟨∇Δ_{p,f}u, ∇u⟩ − (p−2)Δ_∞u Δ_{p,f}u);
    lhs23 = (1/p) 𝓛_f(|∇u|^p) and
    rhs23 = |∇u|^{2p−4}(|Hess u|²_A + Ric_f(∇u,∇u)) + |∇u|^{p−2}⟨∇u, ∇Δ_{p,f}u⟩.

    Raises:
        InvalidArgumentError: p < 2.
        DegenerateGradientError: |∇u|² ≤ threshold at x.
        SingularPointError: the metric is singular at x.
    """
    p = _check_p(p)
    calc = point_calculus(chart, x)
    u_jet = u.jet(calc.seeds)
    f_jet = f.jet(calc.seeds)

    psi_jet = grad_power_field(chart, u, p, threshold).jet(calc.seeds)
    linear = _linearized(calc, u_jet, f_jet, psi_jet, p, threshold)
    lhs22 = linear.straight / p
    lhs23 = linear.curly / p

    data = covariant_at(calc, u_jet, f_jet, p, threshold)
    ric_f = calc.ricci() + calc.hessian_values(f_jet)
    ricci_term = float(data.grad_u @ ric_f @ data.grad_u)
    delta_pf = p_laplacian_jet(calc, u_jet, f_jet, p, threshold)
    transport = float(delta_pf.gradient() @ data.grad_u)

    w = data.w
    if data.delta_inf_u is None:
        raise DegenerateGradientError(
            f"|∇u|² = {w:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
        )
    quartic = w ** (p - 2.0)
    quadratic = w ** ((p - 2.0) / 2.0)
    terms22 = (
        quartic * data.hess_sq,
        quartic * p * (p - 2.0) * data.delta_inf_u ** 2,
        quartic * ricci_term,
        quadratic * transport,
        -quadratic * (p - 2.0) * data.delta_inf_u * delta_pf.value,
    )
    terms23 = (
        quartic * data.hess_sq_A,
        quartic * ricci_term,
        quadratic * transport,
    )
    rhs22 = math.fsum(terms22)
    rhs23 = math.fsum(terms23)
    scale = max(abs(t) for t in (lhs22, lhs23, *terms22, *terms23))
    norm = max(scale, 1.0)
    return BochnerResidual(
        lhs22=lhs22, rhs22=rhs22, lhs23=lhs23, rhs23=rhs23,
        res22=abs(lhs22 - rhs22) / norm, res23=abs(lhs23 - rhs23) / norm,
        scale=scale,
    )


def classical_bochner(chart: Chart, f: ScalarField, u: ScalarField,
                      x: Sequence[float]) -> tuple[float, float]:
    """
    ½Δ_f|∇u|² and |Hess u|² + ⟨∇u, ∇Δ_f u⟩ + Ric_f(∇u, ∇u) at x, computed
    without any p-dependent code.

    Returns:
        tuple[float, float]: (lhs, rhs).
    """
    calc = point_calculus(chart, x)
    u_jet = u.jet(calc.seeds)
    f_jet = f.jet(calc.seeds)
    ginv = calc.inverse
    df = f_jet.gradient()

    du = calc.gradient(u_jet)
    w_jet = calc.pairing(du, du)
    grad_w = ginv @ w_jet.gradient()
    lhs = 0.5 * (float(np.sum(ginv * calc.hessian_values(w_jet))) - float(df @ grad_w))

    grad_u = ginv @ u_jet.gradient()
    mixed = ginv @ calc.hessian_values(u_jet)
    ric_f = calc.ricci() + calc.hessian_values(f_jet)
    transport = float(weighted_laplacian_jet(calc, u_jet, f_jet).gradient() @ grad_u)
    rhs = float(np.trace(mixed @ mixed)) + transport + float(grad_u @ ric_f @ grad_u)
    return lhs, rhs


def trace_inequality_gap(chart: Chart, f: ScalarField, p: float, m: float, u: ScalarField,
                         x: Sequence[float], threshold: float = DEGENERATE_THRESHOLD) -> float:
    """
    |∇u|^{2p−4}(|Hess u|²_A + Ric_f(∇u,∇u)) − (1/m)(Δ_{p,f}u)²
    − |∇u|^{2p−4} Ric_f^m(∇u,∇u), nonnegative for m ≥ dim.

    Raises:
        InvalidArgumentError: p < 2, or m below the chart dimension.
        DegenerateGradientError: |∇u|² ≤ threshold at x.
    """
    p = _check_p(p)
    calc = point_calculus(chart, x)
    u_jet = u.jet(calc.seeds)
    f_jet = f.jet(calc.seeds)
    data = covariant_at(calc, u_jet, f_jet, p, threshold)
    if data.w <= threshold:
        raise DegenerateGradientError(
            f"|∇u|² = {data.w:.3e} at {list(calc.point)} is below the threshold {threshold:g}."
        )
    curv = curvature_at(calc, f_jet, float(m))
    delta_pf = data.w ** ((p - 2.0) / 2.0) * (data.lap_f_u + (p - 2.0) * data.delta_inf_u)
    quartic = data.w ** (p - 2.0)
    lhs = quartic * (data.hess_sq_A + float(data.grad_u @ curv.ric_f @ data.grad_u))
    rhs = delta_pf ** 2 / float(m) + quartic * float(data.grad_u @ curv.ric_fm @ data.grad_u)
    return lhs - rhs


def _collar_volume(chart: Chart) -> float:
    """ Riemannian volume of the strips cut off at the singular sides """
    total = 0.0
    box = chart.quadrature_box()
    for axis, value in chart.singular_sides:
        strip = list(chart.domain)
        lo, hi = box[axis]
        strip[axis] = (value, lo) if value < lo else (hi, value)
        points, weights = tensor_rule(strip, chart.periodic, COLLAR_NODES)
        for point, weight in zip(points, weights):
            total += weight * math.sqrt(max(np.linalg.det(chart.metric_at(point)), 0.0))
    return total


def reilly_residual(chart: Chart, f: ScalarField, p: float, u: ScalarField,
                    quad: QuadratureSpec = QuadratureSpec(),
                    threshold: float = DEGENERATE_THRESHOLD) -> ReillyResidual:
    """
    Integrates both sides of the weighted p-Reilly formula

        ∫_M (Δ_{p,f}u)² − |∇u|^{2p−4}(|Hess u|²_A + Ric_f(∇u,∇u)) dμ
        = ∫_∂M |∇u|^{2p−4}[(H_f u_n + Δ_{∂,f}u)u_n + II(∇_∂u,∇_∂u) − ⟨∇_∂u,∇_∂u_n⟩] dσ

    with dμ = e^{-f}dV and dσ = e^{-f}dV_∂M.

    Args:
        chart (Chart): Catalog chart with a boundary.
        f (ScalarField): Weight potential.
        p (float): Exponent, p ≥ 2.
        u (ScalarField): Test function.
        quad (QuadratureSpec): Node counts.
        threshold (float): Degenerate-gradient threshold.

    Returns:
        ReillyResidual: both sides and their relative residual.

    Raises:
        InvalidArgumentError: the chart has no boundary, or p < 2.
        DegenerateGradientError: p > 2 and |∇u|² ≤ threshold at an interior
    node; the message names the node.
    """
    p = _check_p(p)
    if not chart.has_boundary:
        raise InvalidArgumentError(f'Chart "{chart.id}" has no boundary.')

    points, weights = tensor_rule(chart.quadrature_box(), chart.periodic, quad.nodes)
    interior = []
    peak = 0.0
    for index, (point, weight) in enumerate(zip(points, weights)):
        calc = PointCalculus.at(chart, point)
        u_jet = u.jet(calc.seeds)
        f_jet = f.jet(calc.seeds)
        try:
            data = covariant_at(calc, u_jet, f_jet, p, threshold)
        except DegenerateGradientError as err:
            raise DegenerateGradientError(f"Interior node {index} at {point.tolist()}: {err}") from err
        ric_f = calc.ricci() + calc.hessian_values(f_jet)
        if data.delta_inf_u is None:
            delta_pf = data.lap_f_u
        else:
            delta_pf = data.w ** ((p - 2.0) / 2.0) * (data.lap_f_u + (p - 2.0) * data.delta_inf_u)
        integrand = delta_pf ** 2 - data.w ** (p - 2.0) * (
            data.hess_sq_A + float(data.grad_u @ ric_f @ data.grad_u)
        )
        density = math.exp(-f_jet.value)
        peak = max(peak, abs(integrand) * density)
        interior.append(weight * integrand * density * calc.volume_density)
    interior_lhs = math.fsum(interior)

    outer, collar, remark = [], [], []
    segments = [(segment, False) for segment in chart.boundary]
    segments += [(segment, True) for segment in chart.collar()]
    for segment, is_collar in segments:
        if chart.dim == 1:
            nodes, node_weights = np.zeros(1), np.ones(1)
        else:
            lo, hi = segment.parameter_range
            nodes, node_weights = axis_rule(quad.boundary_nodes, lo, hi, segment.periodic)
        for s, weight in zip(nodes, node_weights):
            calc = PointCalculus.at(chart, segment.point(s, chart.dim))
            u_jet = u.jet(calc.seeds)
            data = boundary_at(calc, segment, f.jet(calc.seeds), u_jet)
            du = u_jet.gradient()
            w = max(float(du @ calc.inverse @ du), 0.0)
            second = float(data.II[0, 0]) * data.grad_bdy_u ** 2 if data.II.size else 0.0
            integrand = (data.H_f * data.u_n + data.lap_bdy_f_u) * data.u_n \
                + second - data.grad_bdy_u * data.grad_bdy_un
            value = weight * w ** (p - 2.0) * integrand * data.arc_density
            (collar if is_collar else outer).append(value)
            if p == 2.0:
                variant = (data.H_f * data.u_n + 2.0 * data.lap_bdy_f_u) * data.u_n + second
                remark.append(weight * variant * data.arc_density)

    collar_rhs = math.fsum(collar)
    boundary_rhs = math.fsum(outer) + collar_rhs
    residual = abs(interior_lhs - boundary_rhs) / max(abs(interior_lhs), abs(boundary_rhs), 1.0)
    remark_rhs = remark_residual = None
    if p == 2.0:
        remark_rhs = math.fsum(remark)
        remark_residual = abs(remark_rhs - boundary_rhs) / max(abs(remark_rhs), abs(boundary_rhs), 1.0)

    collar_bound = peak * _collar_volume(chart)
    logger.debug("Reilly on %s with %s nodes: lhs=%.3e rhs=%.3e", chart.id, quad, interior_lhs, boundary_rhs)
    return ReillyResidual(
        interior_lhs=interior_lhs,
        boundary_rhs=boundary_rhs,
        residual=residual,
        quad_nodes=(quad.nodes, quad.boundary_nodes),
        collar_rhs=collar_rhs,
        collar_bound=collar_bound,
        remark_rhs=remark_rhs,
        remark_residual=remark_residual,
    )
