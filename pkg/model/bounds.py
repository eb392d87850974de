"""
Lower bounds for the first eigenvalue of the weighted p-Laplacian, the scan
of their hypotheses, and the gradient estimate used by the diameter bound.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .charts import Chart
from .eigensolver1d import EigenResult
from .errors import InvalidArgumentError, NotApplicableError
from .fields import Constant, ScalarField, parse_field
from .geometry import boundary_geometry, curvature
from .spaces import ModelSpace1D, SpaceKind

logger = logging.getLogger(__name__)

MIN_SAMPLES = 64
DEFAULT_SAMPLES = 1000
PASS_TOLERANCE = 1e-6
GRADIENT_TOLERANCE = 1e-3
GRADIENT_EPSILON = 1e-6


class Theorem(Enum):
    """ Lower-bound statement a report checks """
    T1_1_CLOSED = "T1.1-closed"
    T1_1_DIRICHLET = "T1.1-dirichlet"
    T1_1_NEUMANN = "T1.1-neumann"
    T1_3_CLOSED = "T1.3-closed"
    T1_3_DIRICHLET = "T1.3-dirichlet"
    T1_3_NEUMANN = "T1.3-neumann"
    T1_5 = "T1.5"

    @property
    def family(self) -> str:
        return self.value.split("-")[0]

    @property
    def condition(self) -> str:
        """ "closed", "dirichlet" or "neumann" """
        return self.value.split("-")[1] if "-" in self.value else "neumann"


def theorem_of(theorem_id) -> Theorem:
    """
    Raises:
        InvalidArgumentError: unknown theorem id.
    """
    if isinstance(theorem_id, Theorem):
        return theorem_id
    try:
        return Theorem(theorem_id)
    except ValueError as err:
        known = ", ".join(t.value for t in Theorem)
        raise InvalidArgumentError(f'Unknown theorem "{theorem_id}"; expected one of {known}.') from err


def pi_p(p: float, mode: str = "closed_form") -> float:
    """
    Generalized π, π_p = 2∫₀¹ (1 − s^p)^{−1/p} ds = 2π/(p sin(π/p)).

    The quadrature mode substitutes s = t^{1/p}, which turns the integral into
    (2/p)∫₀¹ t^{1/p−1}(1 − t)^{−1/p} dt, and integrates the algebraic
    endpoint weights exactly with QUADPACK's QAWS rule.

    Args:
        p (float): Exponent, p > 1.
        mode (str): "closed_form" or "quadrature".

    Raises:
        InvalidArgumentError: p ≤ 1 or unknown mode.
    """
    if not (p > 1.0 and math.isfinite(p)):
        raise InvalidArgumentError(f"π_p needs p > 1, got {p}.")
    if mode == "closed_form":
        return 2.0 * math.pi / (p * math.sin(math.pi / p))
    if mode == "quadrature":
        value, _ = quad(lambda t: 1.0, 0.0, 1.0, weight="alg", wvar=(1.0 / p - 1.0, -1.0 / p),
                        epsabs=1e-14, epsrel=1e-14, limit=200)
        return 2.0 * value / p
    raise InvalidArgumentError(f'Unknown π_p mode "{mode}".')


def bound_lichnerowicz(p: float, m: float, K: float) -> float:
    """
    (1/(p−1)^{p−1})(mK/(m−1))^{p/2}; K^{p/2}/(p−1)^{p−1} when m = ∞.

    Raises:
        NotApplicableError: p < 2 or K ≤ 0.
        InvalidArgumentError: m ≤ 1.
    """
    if p < 2.0:
        raise NotApplicableError(f"The Lichnerowicz-type bound assumes p ≥ 2, got p = {p}.")
    if K <= 0.0:
        raise NotApplicableError(f"The Lichnerowicz-type bound needs K > 0, got K = {K}.")
    if m <= 1.0:
        raise InvalidArgumentError(f"Synthetic dimension must exceed 1, got m = {m}.")
    curvature_term = K if math.isinf(m) else m * K / (m - 1.0)
    return curvature_term ** (p / 2.0) / (p - 1.0) ** (p - 1.0)


def bound_liyau(p: float, D: float) -> float:
    """ (p−1)(π_p/(2D))^p """
    if D <= 0.0:
        raise InvalidArgumentError(f"Diameter must be positive, got {D}.")
    return (p - 1.0) * (pi_p(p) / (2.0 * D)) ** p


def bound_valtorta(p: float, D: float) -> float:
    """ Sharp comparator (p−1)(π_p/D)^p for nonnegative Ricci curvature """
    if D <= 0.0:
        raise InvalidArgumentError(f"Diameter must be positive, got {D}.")
    return (p - 1.0) * (pi_p(p) / D) ** p


def negative_constant(p: float, m: float) -> float:
    """ C(p, m) = 2/(m+1) (p/(p−1))^{p−1} e^{−p} """
    return 2.0 / (m + 1.0) * (p / (p - 1.0)) ** (p - 1.0) * math.exp(-p)


def bound_negative(p: float, m: float, K: float, D: float) -> float:
    """
    C(p, m) D^{−p} exp(−√((m−1)K) D) for Ric_f^m ≥ −Kg.

    Raises:
        NotApplicableError: m = ∞.
        InvalidArgumentError: m ≤ 1, K < 0, D ≤ 0 or p ≤ 1.
    """
    if math.isinf(m):
        raise NotApplicableError("The negative-curvature bound needs a finite m.")
    if not p > 1.0 or m <= 1.0 or K < 0.0 or D <= 0.0:
        raise InvalidArgumentError(f"Bad arguments p={p}, m={m}, K={K}, D={D}.")
    return negative_constant(p, m) / D ** p * math.exp(-math.sqrt((m - 1.0) * K) * D)


def bound_matei(p: float, K: float) -> float:
    """
    Comparator (K/(p−1))^{p/2} for Ric ≥ Kg, K > 0, on a closed manifold
    without weight. Only reported next to T1.1 when both hold.
    """
    if K <= 0.0:
        raise NotApplicableError(f"Comparator needs K > 0, got K = {K}.")
    return (K / (p - 1.0)) ** (p / 2.0)


def bound_futaki_li_li(D: float, K: float) -> float:
    """
    sup over s in (0, 1) of 4s(1−s)π²/D² + sK, the p = 2 comparator for
    Ric_f ≥ K. The maximizer ½ + KD²/(8π²) is clipped to [0, 1].
    """
    if D <= 0.0:
        raise InvalidArgumentError(f"Diameter must be positive, got {D}.")
    s = min(1.0, max(0.0, 0.5 + K * D * D / (8.0 * math.pi ** 2)))
    return 4.0 * s * (1.0 - s) * math.pi ** 2 / D ** 2 + s * K


@dataclass(frozen=True)
class Hypotheses:
    """
    Sampled curvature and boundary data a theorem is gated on.

    Attributes:
        K_min (float): Smallest eigenvalue of Ric_f^m relative to g found.
        m (float): Synthetic dimension the scan used.
        D (float): Diameter.
        has_boundary (bool): Whether the space has a boundary.
        Hf_min (float | None): Smallest weighted mean curvature on ∂M.
        II_min (float | None): Smallest second fundamental form value on ∂M.
        p (float | None): Exponent of the eigenproblem.
        dimension (int): Dimension n of the manifold.
        K_at (tuple[float, ...]): Sample where K_min was attained.
        unweighted (bool): f is a constant, so Ric_f^m reduces to Ric.
    """
    K_min: float
    m: float
    D: float
    has_boundary: bool
    Hf_min: float | None = None
    II_min: float | None = None
    p: float | None = None
    dimension: int = 1
    K_at: tuple[float, ...] = ()
    unweighted: bool = False

    def __post_init__(self):
        if not self.D > 0.0:
            raise InvalidArgumentError(f"Diameter must be positive, got {self.D}.")
        if not self.has_boundary and (self.Hf_min is not None or self.II_min is not None):
            raise InvalidArgumentError("Boundary data given for a space without boundary.")

    def record(self) -> dict:
        return {
            "K_min": self.K_min,
            "m": "inf" if math.isinf(self.m) else self.m,
            "D": self.D,
            "has_boundary": self.has_boundary,
            "Hf_min": self.Hf_min,
            "II_min": self.II_min,
            "dimension": self.dimension,
            "unweighted": self.unweighted,
        }


def _scan_space(space: ModelSpace1D, m: float, samples: int, p: float | None) -> Hypotheses:
    x = space.sample_points(samples)
    values = space.curvature_scan(x, m)
    index = int(np.argmin(values))
    hf_min, ii_min = space.boundary_scan()
    return Hypotheses(
        K_min=float(values[index]), m=m, D=space.diameter, has_boundary=space.has_boundary,
        Hf_min=hf_min, II_min=ii_min, p=p, dimension=space.n_ambient, K_at=(float(x[index]),),
        unweighted=isinstance(space.f, Constant),
    )


def _scan_chart(chart: Chart, f: ScalarField, m: float, samples: int, p: float | None) -> Hypotheses:
    per_axis = max(2, math.ceil(samples ** (1.0 / chart.dim)))
    axes = []
    for (lo, hi), periodic in zip(chart.quadrature_box(), chart.periodic):
        axes.append(np.linspace(lo, hi, per_axis, endpoint=not periodic))
    k_min, k_at = math.inf, ()
    for point in itertools.product(*axes):
        value = curvature(chart, f, m, point).min_eig
        if value < k_min:
            k_min, k_at = value, tuple(float(c) for c in point)

    hf_min = ii_min = None
    if chart.has_boundary:
        hf_values, ii_values = [], []
        for segment in chart.boundary:
            lo, hi = segment.parameter_range
            params = [0.0] if chart.dim == 1 else np.linspace(lo, hi, per_axis, endpoint=not segment.periodic)
            for s in params:
                data = boundary_geometry(chart, f, float(s), segment)
                hf_values.append(data.H_f)
                ii_values.append(float(np.min(data.II)) if data.II.size else 0.0)
        hf_min, ii_min = float(min(hf_values)), float(min(ii_values))
    return Hypotheses(
        K_min=float(k_min), m=m, D=chart.diameter, has_boundary=chart.has_boundary,
        Hf_min=hf_min, II_min=ii_min, p=p, dimension=chart.dim, K_at=k_at,
        unweighted=isinstance(f, Constant),
    )


def hypothesis_scan(space: ModelSpace1D | Chart, f: ScalarField | str | None = None,
                    m: float = math.inf, samples: int = DEFAULT_SAMPLES,
                    p: float | None = None) -> Hypotheses:
    """
    Samples the curvature and boundary hypotheses of the bound theorems.

    1D model spaces use their closed-form curvature profile; charts evaluate
    Ric_f^m through jets on a grid over the quadrature box.

    Args:
        space (ModelSpace1D | Chart): Where to scan.
        f (ScalarField | str | None): Weight; defaults to the space's own
    weight for 1D spaces and to 0 for charts.
        m (float): Synthetic dimension, `math.inf` allowed.
        samples (int): Total number of curvature samples, at least 64.
        p (float | None): Exponent carried into the result.

    Returns:
        Hypotheses: the scanned data.

    Raises:
        InvalidArgumentError: too few samples, or m ≤ n finite.
    """
    if samples < MIN_SAMPLES:
        raise InvalidArgumentError(f"Hypothesis scans need at least {MIN_SAMPLES} samples, got {samples}.")
    m = float(m)
    if isinstance(space, ModelSpace1D):
        if isinstance(f, str):
            space = dataclasses.replace(space, f=parse_field(f, ("x",)), f_text=f)
        elif f is not None:
            space = dataclasses.replace(space, f=f, f_text=repr(f))
        hypotheses = _scan_space(space, m, samples, p)
    else:
        if f is None:
            f = "0"
        if isinstance(f, str):
            f = space.field(f)
        hypotheses = _scan_chart(space, f, m, samples, p)
    logger.debug("Hypotheses: %s", hypotheses)
    return hypotheses


@dataclass
class BoundReport:
    """
    Outcome of checking one theorem against an eigenvalue.

    Attributes:
        theorem (Theorem): Checked statement.
        applicable (bool): Whether every hypothesis held.
        reason (str): Failed gate, empty when applicable.
        rhs (float | None): Bound value.
        eigenvalue (float): λ checked.
        margin (float | None): λ − rhs.
        passed (bool): Not applicable, or margin ≥ −tol·max(|rhs|, 1).
        diagnostics (dict): Comparator values.
    """
    theorem: Theorem
    applicable: bool
    reason: str
    rhs: float | None
    eigenvalue: float
    margin: float | None
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def record(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "applicable": self.applicable,
            "reason": self.reason,
            "rhs": self.rhs,
            "lambda": self.eigenvalue,
            "margin": self.margin,
            "pass": self.passed,
            **self.diagnostics,
        }


def _boundary_gate(condition: str, hyp: Hypotheses) -> str:
    if condition == "closed":
        return "space has a boundary" if hyp.has_boundary else ""
    if not hyp.has_boundary:
        return f"{condition} condition needs a boundary"
    if condition == "dirichlet" and hyp.Hf_min < 0.0:
        return "Hf_min < 0"
    if condition == "neumann" and hyp.II_min < 0.0:
        return "II_min < 0 (boundary not convex)"
    return ""


def _gate(theorem: Theorem, hyp: Hypotheses) -> str:
    """ First failed hypothesis, or an empty string """
    p = hyp.p
    if theorem.family == "T1.1":
        if p is None or p < 2.0:
            return "p < 2"
        if not hyp.K_min > 0.0:
            return "K_min ≤ 0"
        if not math.isinf(hyp.m) and hyp.m <= 1.0:
            return "m ≤ 1"
        return _boundary_gate(theorem.condition, hyp)
    if theorem.family == "T1.3":
        if hyp.K_min < 0.0:
            if math.isinf(hyp.m):
                return "Ric_f has negative eigenvalues (K_min < 0)"
            return "Ric_f ≥ 0 not established by a finite-m scan with K_min < 0"
        return _boundary_gate(theorem.condition, hyp)
    if math.isinf(hyp.m):
        return "m = ∞ (finite m required)"
    if hyp.has_boundary:
        if hyp.II_min < 0.0:
            return "II_min < 0 (boundary not convex)"
    return ""


def _bound_value(theorem: Theorem, hyp: Hypotheses) -> tuple[float, dict]:
    p = hyp.p
    diagnostics = {}
    if theorem.family == "T1.1":
        rhs = bound_lichnerowicz(p, hyp.m, hyp.K_min)
        if hyp.unweighted and not hyp.has_boundary:
            diagnostics["comparator_rhs"] = bound_matei(p, hyp.K_min)
    elif theorem.family == "T1.3":
        rhs = bound_liyau(p, hyp.D)
        sharp = bound_valtorta(p, hyp.D)
        diagnostics["sharp_rhs"] = sharp
        if p == 2.0 and theorem.condition == "closed":
            ricci_lower = hyp.K_min if math.isinf(hyp.m) else 0.0
            diagnostics["comparator_rhs"] = bound_futaki_li_li(hyp.D, ricci_lower)
    else:
        K = max(0.0, -hyp.K_min)
        rhs = bound_negative(p, hyp.m, K, hyp.D)
        diagnostics["K"] = K
        diagnostics["C_pm"] = negative_constant(p, hyp.m)
    return rhs, diagnostics


def check_bound(theorem_id, hyp: Hypotheses, lam: float, tol: float = PASS_TOLERANCE) -> BoundReport:
    """
    Checks λ against a theorem after gating on its hypotheses.

    A bound is never evaluated outside its theorem's hypotheses: reports of
    inapplicable theorems carry the failed gate and pass vacuously.

    Args:
        theorem_id (Theorem | str): e.g. "T1.1-closed".
        hyp (Hypotheses): Scanned hypotheses, with p set.
        lam (float): First eigenvalue for the theorem's boundary condition.
        tol (float): Relative slack of the pass test.

    Returns:
        BoundReport: rhs, margin and pass flag, plus comparators.

    Raises:
        InvalidArgumentError: unknown theorem id, or hypotheses without p.
    """
    theorem = theorem_of(theorem_id)
    if hyp.p is None:
        raise InvalidArgumentError("Hypotheses must carry the exponent p.")
    reason = _gate(theorem, hyp)
    if reason:
        logger.info("%s not applicable: %s", theorem.value, reason)
        return BoundReport(theorem, False, reason, None, float(lam), None, True)
    try:
        rhs, diagnostics = _bound_value(theorem, hyp)
    except NotApplicableError as err:
        return BoundReport(theorem, False, str(err), None, float(lam), None, True)
    margin = float(lam) - rhs
    passed = margin >= -tol * max(abs(rhs), 1.0)
    if rhs > 0.0:
        diagnostics["ratio"] = float(lam) / rhs
    if "sharp_rhs" in diagnostics:
        diagnostics["sharpness"] = float(lam) / diagnostics["sharp_rhs"]
    if not passed:
        logger.warning("%s violated: λ = %.17g < rhs = %.17g", theorem.value, lam, rhs)
    return BoundReport(theorem, True, "", rhs, float(lam), margin, passed, diagnostics)


def gradient_estimate_check(space: ModelSpace1D, result: EigenResult, p: float,
                            hyp: Hypotheses | None = None) -> dict:
    """
    Checks max |u'|^p/(1 − |u|^p) ≤ λ/(p−1) for an eigenfunction on a closed space.

    u is flipped so that |min u| ≤ max u, scaled to max u = 1 − ε and the
    quotient is taken per cell, with u' the cell slope and |u| the cell
    average.

    Args:
        space (ModelSpace1D): A circle.
        result (EigenResult): Solver output on that circle.
        p (float): Exponent.
        hyp (Hypotheses | None): Precomputed scan at m = ∞.

    Returns:
        dict: maxF, bound, ratio and pass.

    Raises:
        NotApplicableError: not a circle, or Ric_f ≥ 0 fails.
        InvalidArgumentError: u vanishes identically.
    """
    if space.kind is not SpaceKind.CIRCLE:
        raise NotApplicableError("The gradient estimate is checked on closed circles only.")
    if hyp is None:
        hyp = hypothesis_scan(space, m=math.inf, p=p)
    if hyp.K_min < -1e-12:
        raise NotApplicableError(f"Ric_f ≥ 0 fails: K_min = {hyp.K_min:.6g}.")
    u = np.asarray(result.u, dtype=float)
    if -u.min() > u.max():
        u = -u
    top = u.max()
    if top <= 0.0:
        raise InvalidArgumentError("Gradient estimate of a vanishing function.")
    u = u / top * (1.0 - GRADIENT_EPSILON)
    nodes = np.asarray(result.nodes, dtype=float)
    h = space.length / len(nodes)
    following = np.roll(u, -1)
    slopes = (following - u) / h
    cell_values = 0.5 * (u + following)
    quotient = np.abs(slopes) ** p / (1.0 - np.abs(cell_values) ** p)
    max_f = float(quotient.max())
    bound = result.eigenvalue / (p - 1.0)
    return {
        "maxF": max_f,
        "bound": bound,
        "ratio": max_f / bound if bound > 0.0 else math.inf,
        "pass": max_f <= bound * (1.0 + GRADIENT_TOLERANCE),
    }
