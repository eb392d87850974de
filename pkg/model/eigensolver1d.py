"""
First eigenvalue of the weighted p-Laplacian on 1D model spaces.

Two independent methods:

* `minimize_eig` minimizes the discrete p-Rayleigh quotient of piecewise
  linear functions (midpoint density per cell, trapezoid weights per node)
  over the zero p-mean cone, or over functions vanishing at Dirichlet ends.
* `shooting_eig` integrates the first-order system for (u, q = ρΦ(u')) with
  RK4 on a graded grid and locates λ by multisection on the first sign change
  of the tracked component.

Φ(s) = |s|^{p−2}s throughout.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq
from scipy.sparse.linalg import spsolve

from .errors import BracketError, InvalidArgumentError, InvalidSpaceError, UnsupportedError
from .spaces import BoundaryCondition, ModelSpace1D, SpaceKind

logger = logging.getLogger(__name__)

MIN_CELLS = 16
ARMIJO = 1e-4
MAX_BACKTRACKS = 40
CONVERGED_STREAK = 3
LAMBDA_CEILING = 1e12
# smallest relative tolerance brentq accepts
BRENT_RTOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True)
class SolverOptions:
    """
    Options of the Rayleigh minimizer.

    Attributes:
        N (int): Number of cells.
        restarts (int): Random restarts after the deterministic start.
        max_iter (int): Iteration cap per start.
        tol (float): Relative Rayleigh decrease treated as stagnation.
        seed (int): Seed of the random restarts.
    """
    N: int = 1024
    restarts: int = 4
    max_iter: int = 500
    tol: float = 1e-12
    seed: int = 0


@dataclass(frozen=True)
class ShootingOptions:
    """
    Options of the shooting oracle.

    Attributes:
        initial_steps (int): RK4 steps of the first pass.
        max_steps (int): Step count after which doubling stops.
        rtol (float): Relative change of λ between passes that ends the
    refinement.
        batch (int): Trial λ values integrated together per multisection round.
    """
    initial_steps: int = 512
    max_steps: int = 65536
    rtol: float = 1e-8
    batch: int = 32


@dataclass(frozen=True)
class Problem1D:
    """
    Discretized eigenproblem.

    Closed problems have N distinct nodes and a wrap-around cell; the others
    have N + 1 nodes.

    Attributes:
        space (ModelSpace1D): Source space.
        p (float): Exponent.
        nodes (np.ndarray): Node coordinates.
        h (float): Cell width.
        left (np.ndarray): Left node index of every cell.
        right (np.ndarray): Right node index of every cell.
        rho_mid (np.ndarray): ρ at cell midpoints.
        rho_nodes (np.ndarray): ρ at nodes.
        weights (np.ndarray): Trapezoid weights per node.
        fixed (np.ndarray): Dirichlet nodes, held at zero.
    """
    space: ModelSpace1D
    p: float
    nodes: np.ndarray
    h: float
    left: np.ndarray
    right: np.ndarray
    rho_mid: np.ndarray
    rho_nodes: np.ndarray
    weights: np.ndarray
    fixed: np.ndarray

    @property
    def N(self) -> int:
        return len(self.left)

    @property
    def constrained(self) -> bool:
        """ Whether iterates live on the zero p-mean cone (no Dirichlet end) """
        return not self.fixed.any()

    @property
    def mass(self) -> np.ndarray:
        """ ρ w per node """
        return self.rho_nodes * self.weights


@dataclass
class EigenResult:
    """
    Output of `minimize_eig`.

    Attributes:
        eigenvalue (float): λ, the smallest Rayleigh value found.
        u (np.ndarray): Minimizer at the nodes, largest entry scaled to +1.
        nodes (np.ndarray): Node coordinates.
        iterations (int): Iterations spent by the winning start.
        restarts (int): Starts run after the deterministic one.
        converged (bool): Whether the winning start met the stopping rule.
        weak_residual (float): Discrete energy identity residual `eq34`.
        rayleigh_gap (float): |λ − R(u)| for the reported u.
        pmean_residual (float | None): Relative |Σ Φ(u) ρ w| on constrained
    problems.
    """
    eigenvalue: float
    u: np.ndarray
    nodes: np.ndarray
    iterations: int
    restarts: int
    converged: bool
    weak_residual: float = math.nan
    rayleigh_gap: float = math.nan
    pmean_residual: float | None = None

    def summary(self) -> dict:
        """ JSON-ready scalars of the result """
        return {
            "lambda": self.eigenvalue,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "converged": self.converged,
            "eq34": self.weak_residual,
            "rayleigh_gap": self.rayleigh_gap,
            "pmean_residual": self.pmean_residual,
            "nodes": len(self.nodes),
        }


def phi(s, p: float) -> np.ndarray:
    """ Φ(s) = |s|^{p−2}s """
    s = np.asarray(s, dtype=float)
    return np.sign(s) * np.abs(s) ** (p - 1.0)


def phi_inverse(z, p: float) -> np.ndarray:
    """ Inverse of Φ """
    z = np.asarray(z, dtype=float)
    return np.sign(z) * np.abs(z) ** (1.0 / (p - 1.0))


def _check_exponent(p: float):
    if not (p > 1.0 and math.isfinite(p)):
        raise InvalidArgumentError(f"The p-Laplacian needs 1 < p < ∞, got p = {p}.")


def build_problem(space: ModelSpace1D, p: float, N: int) -> Problem1D:
    """
    Lays a uniform grid over the space.

    Warped spaces keep `space.offsets` away from the ends where J vanishes.

    Args:
        space (ModelSpace1D): Model space.
        p (float): Exponent in (1, ∞).
        N (int): Number of cells, at least 16.

    Returns:
        Problem1D: the discretized problem.

    Raises:
        InvalidArgumentError: p or N out of range.
        InvalidSpaceError: ρ is not positive and finite on the grid.
    """
    _check_exponent(p)
    if N < MIN_CELLS:
        raise InvalidArgumentError(f"At least {MIN_CELLS} cells are needed, got N = {N}.")
    a, b = space.endpoints
    left_offset, right_offset = space.offsets
    cells = np.arange(N)
    if space.closed:
        h = space.length / N
        nodes = a + h * cells
        right = (cells + 1) % N
        weights = np.full(N, h)
    else:
        lo, hi = a + left_offset, b - right_offset
        h = (hi - lo) / N
        nodes = np.linspace(lo, hi, N + 1)
        right = cells + 1
        weights = np.full(N + 1, h)
        weights[[0, -1]] = h / 2.0
    rho_mid = space.density(nodes[cells] + h / 2.0)
    rho_nodes = space.density(nodes)
    for label, values in (("cell midpoints", rho_mid), ("nodes", rho_nodes)):
        if not np.all(np.isfinite(values)) or values.min() <= 0.0:
            raise InvalidSpaceError(f"Density is not positive at the {label} of the grid.")

    fixed = np.zeros(len(nodes), dtype=bool)
    left_bc, right_bc = space.end_conditions
    if left_bc is BoundaryCondition.DIRICHLET:
        fixed[0] = True
    if right_bc is BoundaryCondition.DIRICHLET:
        fixed[-1] = True
    return Problem1D(
        space=space, p=float(p), nodes=nodes, h=h, left=cells, right=right,
        rho_mid=rho_mid, rho_nodes=rho_nodes, weights=weights, fixed=fixed,
    )


def _check_samples(problem: Problem1D, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != problem.nodes.shape:
        raise InvalidArgumentError(
            f"Expected {len(problem.nodes)} node samples, got shape {u.shape}."
        )
    return u


def _energy(problem: Problem1D, u: np.ndarray) -> tuple[float, float, np.ndarray]:
    slopes = (u[problem.right] - u[problem.left]) / problem.h
    numerator = float(np.sum(np.abs(slopes) ** problem.p * problem.rho_mid) * problem.h)
    denominator = float(np.sum(np.abs(u) ** problem.p * problem.mass))
    return numerator, denominator, slopes


def _rayleigh_value(problem: Problem1D, u: np.ndarray) -> float:
    numerator, denominator, _ = _energy(problem, u)
    if denominator <= 0.0:
        return math.inf
    return numerator / denominator


def rayleigh(problem: Problem1D, u) -> tuple[float, np.ndarray]:
    """
    Discrete p-Rayleigh quotient and its exact gradient.

    R(u) = Σ_cells |Δu/h|^p ρ_mid h / Σ_nodes |u|^p ρ w.

    Returns:
        tuple[float, np.ndarray]: value and gradient with respect to the node
    values.

    Raises:
        InvalidArgumentError: wrong shape, or a zero denominator.
    """
    u = _check_samples(problem, u)
    numerator, denominator, slopes = _energy(problem, u)
    if denominator <= 0.0:
        raise InvalidArgumentError("Rayleigh quotient of the zero function.")
    value = numerator / denominator
    p = problem.p
    size = len(u)
    flux = p * phi(slopes, p) * problem.rho_mid
    grad_numerator = (np.bincount(problem.right, flux, minlength=size)
                      - np.bincount(problem.left, flux, minlength=size))
    grad_denominator = p * phi(u, p) * problem.mass
    return value, (grad_numerator - value * grad_denominator) / denominator


def _pmean(problem: Problem1D, u: np.ndarray, c: float) -> float:
    return float(np.sum(phi(u - c, problem.p) * problem.mass))


def zero_pmean_shift(problem: Problem1D, u) -> float:
    """
    The constant c with Σ Φ(u − c) ρ w = 0.

    The sum is strictly decreasing in c and changes sign on [min u, max u],
    so a bracketing root finder always succeeds.

    Raises:
        InvalidArgumentError: u is constant.
    """
    u = _check_samples(problem, u)
    lo, hi = float(u.min()), float(u.max())
    if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
        raise InvalidArgumentError("Cannot recenter a constant function.")
    at_lo, at_hi = _pmean(problem, u, lo), _pmean(problem, u, hi)
    if at_lo == 0.0:
        return lo
    if at_hi == 0.0:
        return hi
    scale = max(abs(lo), abs(hi))
    return float(brentq(lambda c: _pmean(problem, u, c), lo, hi,
                        xtol=1e-16 * scale, rtol=BRENT_RTOL, maxiter=400))


def _pmean_residual(problem: Problem1D, u: np.ndarray) -> float:
    total = np.sum(np.abs(u) ** (problem.p - 1.0) * problem.mass)
    return abs(_pmean(problem, u, 0.0)) / total


def _project(problem: Problem1D, u: np.ndarray) -> np.ndarray:
    """ Admissible, normalized copy of u: Dirichlet nodes zeroed, p-mean removed, max|u| = 1 """
    u = np.array(u, dtype=float)
    u[problem.fixed] = 0.0
    if problem.constrained:
        u = u - zero_pmean_shift(problem, u)
    scale = np.abs(u).max()
    if scale == 0.0 or not math.isfinite(scale):
        raise InvalidArgumentError("Iterate vanished or overflowed.")
    return u / scale


def _initial_guess(problem: Problem1D, rng: np.random.Generator | None) -> np.ndarray:
    """ Lowest sin-like mode for the problem's ends, perturbed by low-order trig terms when rng is given """
    space = problem.space
    a, _ = space.endpoints
    t = (problem.nodes - a) / space.length
    if space.closed:
        u = np.cos(2.0 * np.pi * t)
        if rng is not None:
            for k in range(1, 5):
                c, s = rng.normal(0.0, 0.5, size=2)
                u = u + (c * np.cos(2.0 * np.pi * k * t) + s * np.sin(2.0 * np.pi * k * t)) / k
        return u
    left_fixed, right_fixed = problem.fixed[0], problem.fixed[-1]
    if left_fixed and right_fixed:
        u = np.sin(np.pi * t)
    elif right_fixed:
        u = np.cos(np.pi * t / 2.0)
    elif left_fixed:
        u = np.sin(np.pi * t / 2.0)
    else:
        u = np.cos(np.pi * t)
    if rng is not None:
        for k in range(1, 5):
            u = u + rng.normal(0.0, 0.5) * np.sin(np.pi * k * t) / k
    return u


def _preconditioner(problem: Problem1D, u: np.ndarray, value: float) -> sp.csc_matrix:
    """
    (p−1)(K_w + σM_w) on the free nodes: the stiffness and mass matrices
    linearized at u, with floors where |u'| or |u| vanish.
    """
    p = problem.p
    slopes = np.abs(u[problem.right] - u[problem.left]) / problem.h
    slope_floor = 1e-3 * max(slopes.max(), np.finfo(float).tiny)
    kappa = np.maximum(slopes, slope_floor) ** (p - 2.0) * problem.rho_mid / problem.h
    diagonal = np.maximum(np.abs(u), 1e-3) ** (p - 2.0) * problem.mass
    size = len(u)
    rows = np.concatenate([problem.left, problem.right, problem.left, problem.right])
    cols = np.concatenate([problem.left, problem.right, problem.right, problem.left])
    data = np.concatenate([kappa, kappa, -kappa, -kappa])
    stiffness = sp.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()
    matrix = (p - 1.0) * (stiffness + 0.1 * value * sp.diags(diagonal))
    free = np.flatnonzero(~problem.fixed)
    return matrix[free][:, free].tocsc()


def _descend(problem: Problem1D, u: np.ndarray, options: SolverOptions) -> tuple[np.ndarray, float, int, bool]:
    """ Preconditioned descent from one start; returns (u, R(u), iterations, converged) """
    free = np.flatnonzero(~problem.fixed)
    u = _project(problem, u)
    value, grad = rayleigh(problem, u)
    streak = 0
    converged = False
    iteration = 0
    for iteration in range(1, options.max_iter + 1):
        direction = np.zeros_like(u)
        direction[free] = -spsolve(_preconditioner(problem, u, value), grad[free])
        slope = float(grad @ direction)
        if not slope < 0.0:
            direction = np.where(problem.fixed, 0.0, -grad)
            slope = float(grad @ direction)
        _, denominator, _ = _energy(problem, u)
        step = denominator / problem.p
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            try:
                trial = _project(problem, u + step * direction)
            except InvalidArgumentError:
                trial = None
            if trial is not None:
                trial_value = _rayleigh_value(problem, trial)
                if trial_value <= value + ARMIJO * step * slope:
                    accepted = trial, trial_value
                    break
            step *= 0.5
        if accepted is None:
            # no representable decrease left
            converged = abs(slope) * denominator / problem.p <= 1e-10 * value
            break
        trial, trial_value = accepted
        decrease = (value - trial_value) / trial_value
        u = trial
        value, grad = rayleigh(problem, u)
        streak = streak + 1 if decrease < options.tol else 0
        if streak >= CONVERGED_STREAK:
            converged = True
            break
    return u, value, iteration, converged


def identity_residuals(problem: Problem1D, result: EigenResult) -> dict:
    """
    Discrete energy identity λΣ|u|^{2p−2}ρw = Σ_cells |u'|^p ⟨(p−1)|u|^{p−2}⟩ ρ_mid h.

    The cell average of (p−1)|u|^{p−2} along the linear interpolant is
    (Φ(u_r) − Φ(u_l))/(u_r − u_l). At a discrete minimizer both sides agree
    up to rounding.

    Returns:
        dict: `eq34` (relative gap of the two sides) and `rayleigh_gap`,
    |λ − R(u)|, which only departs from rounding when λ did not come from u.
    """
    u = _check_samples(problem, result.u)
    p = problem.p
    lhs = result.eigenvalue * float(np.sum(np.abs(u) ** (2.0 * p - 2.0) * problem.mass))
    u_left, u_right = u[problem.left], u[problem.right]
    jump = u_right - u_left
    average = np.zeros_like(jump)
    moving = jump != 0.0
    average[moving] = (phi(u_right[moving], p) - phi(u_left[moving], p)) / jump[moving]
    slopes = jump / problem.h
    rhs = float(np.sum(np.abs(slopes) ** p * average * problem.rho_mid) * problem.h)
    scale = max(abs(lhs), abs(rhs), np.finfo(float).tiny)
    return {
        "eq34": abs(lhs - rhs) / scale,
        "rayleigh_gap": abs(result.eigenvalue - _rayleigh_value(problem, u)),
    }


def _finish(problem: Problem1D, u: np.ndarray, value: float, iterations: int, restarts: int,
            converged: bool) -> EigenResult:
    u = u / u[np.argmax(np.abs(u))]
    result = EigenResult(
        eigenvalue=float(value), u=u, nodes=problem.nodes, iterations=iterations,
        restarts=restarts, converged=converged,
    )
    residuals = identity_residuals(problem, result)
    result.weak_residual = residuals["eq34"]
    result.rayleigh_gap = residuals["rayleigh_gap"]
    if problem.constrained:
        result.pmean_residual = _pmean_residual(problem, u)
    return result


def trial_result(problem: Problem1D, u) -> EigenResult:
    """
    Wraps an arbitrary admissible function as an unconverged result with
    λ = R(u), e.g. as a negative control for `identity_residuals`.
    """
    u = _project(problem, _check_samples(problem, u))
    return _finish(problem, u, _rayleigh_value(problem, u), 0, 0, False)


def minimize_eig(problem: Problem1D, options: SolverOptions = SolverOptions()) -> EigenResult:
    """
    First eigenvalue by constrained minimization of the discrete Rayleigh quotient.

    The first start is the sin-like mode matching the ends; the `restarts`
    further starts perturb it with seeded random trig terms. Each step solves
    with the linearized stiffness (+ a mass shift) as preconditioner, then
    backtracks until the Armijo condition holds. Constrained iterates are
    recentered onto the zero p-mean cone after every step.

    Args:
        problem (Problem1D): Discretized problem.
        options (SolverOptions): Iteration controls.

    Returns:
        EigenResult: best start; non-convergence is flagged, not raised.
    """
    rng = np.random.default_rng(options.seed)
    best = None
    for start in range(options.restarts + 1):
        guess = _initial_guess(problem, rng if start else None)
        try:
            u, value, iterations, converged = _descend(problem, guess, options)
        except InvalidArgumentError as err:
            logger.warning("Start %d abandoned: %s", start, err)
            continue
        logger.debug("Start %d: R = %.17g after %d iterations (converged=%s)",
                     start, value, iterations, converged)
        if best is None or value < best[1]:
            best = u, value, iterations, converged
    if best is None:
        raise InvalidArgumentError("Every start of the Rayleigh minimization degenerated.")
    u, value, iterations, converged = best
    if not converged:
        logger.warning("Rayleigh minimization did not converge within %d iterations (R = %.17g)",
                       options.max_iter, value)
    return _finish(problem, u, value, iterations, options.restarts, converged)


@dataclass(frozen=True)
class _Trajectory:
    """
    Samples of ρ and dx/dt on the graded grid x(t) = a + (b−a)(t − sin(2πt)/2π),
    which clusters steps at both ends.
    """
    rho: np.ndarray
    speed: np.ndarray
    rho_mid: np.ndarray
    speed_mid: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.rho_mid)

    @classmethod
    def build(cls, space: ModelSpace1D, a: float, b: float, steps: int) -> _Trajectory:
        def sample(t):
            x = a + (b - a) * (t - np.sin(2.0 * np.pi * t) / (2.0 * np.pi))
            return space.density(x), (b - a) * (1.0 - np.cos(2.0 * np.pi * t))

        t = np.linspace(0.0, 1.0, steps + 1)
        rho, speed = sample(t)
        rho_mid, speed_mid = sample(t[:-1] + 0.5 / steps)
        return cls(rho, speed, rho_mid, speed_mid)


def _crossed(trajectory: _Trajectory, p: float, lambdas, dirichlet_start: bool,
             track_u: bool) -> np.ndarray:
    """
    Integrates one trajectory per λ and reports whether the tracked component
    (u for a Dirichlet right end, q otherwise) changed sign strictly before b.
    Trajectories that overflow count as crossed.
    """
    lam = np.asarray(lambdas, dtype=float)
    h = 1.0 / trajectory.steps
    u = np.zeros_like(lam) if dirichlet_start else np.ones_like(lam)
    q = np.full_like(lam, trajectory.rho[0]) if dirichlet_start else np.zeros_like(lam)
    crossed = np.zeros(lam.shape, dtype=bool)

    def rhs(u, q, rho, speed):
        return speed * phi_inverse(q / rho, p), -speed * lam * rho * phi(u, p)

    previous = u if track_u else q
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(trajectory.steps):
            rho_mid, speed_mid = trajectory.rho_mid[i], trajectory.speed_mid[i]
            k1u, k1q = rhs(u, q, trajectory.rho[i], trajectory.speed[i])
            k2u, k2q = rhs(u + 0.5 * h * k1u, q + 0.5 * h * k1q, rho_mid, speed_mid)
            k3u, k3q = rhs(u + 0.5 * h * k2u, q + 0.5 * h * k2q, rho_mid, speed_mid)
            k4u, k4q = rhs(u + h * k3u, q + h * k3q, trajectory.rho[i + 1], trajectory.speed[i + 1])
            u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            q = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
            current = u if track_u else q
            crossed |= ((previous * current < 0.0)
                        | ((current == 0.0) & (previous != 0.0))
                        | ~np.isfinite(current))
            if crossed.all():
                break
            previous = current
    return crossed


def _multisection(crossed, lo: float, hi: float, rtol: float, batch: int) -> float:
    """ Shrinks [lo, hi] around the first λ whose trajectory crosses """
    while hi - lo > rtol * hi:
        trial = np.linspace(lo, hi, batch + 2)[1:-1]
        flags = crossed(trial)
        if not flags.any():
            lo = trial[-1]
            continue
        first = int(np.argmax(flags))
        hi = trial[first]
        if first > 0:
            lo = trial[first - 1]
    return 0.5 * (lo + hi)


def _shoot(space: ModelSpace1D, p: float, a: float, b: float, left: BoundaryCondition,
           right: BoundaryCondition, options: ShootingOptions) -> float:
    dirichlet_start = left is BoundaryCondition.DIRICHLET
    track_u = right is BoundaryCondition.DIRICHLET
    locate_tol = options.rtol * 1e-2
    steps = options.initial_steps

    def predicate(trajectory):
        return lambda lambdas: _crossed(trajectory, p, lambdas, dirichlet_start, track_u)

    crossed = predicate(_Trajectory.build(space, a, b, steps))
    hi = 1.0
    while not crossed([hi])[0]:
        hi *= 4.0
        if hi > LAMBDA_CEILING:
            raise BracketError(
                f"No eigenvalue bracket in [0, {LAMBDA_CEILING:g}] on [{a:g}, {b:g}] "
                f"({left.value}/{right.value})."
            )
    estimate = _multisection(crossed, 0.0, hi, locate_tol, options.batch)

    while steps * 2 <= options.max_steps:
        steps *= 2
        crossed = predicate(_Trajectory.build(space, a, b, steps))
        lo_guess, hi_guess = estimate * (1.0 - 1e-3), estimate * (1.0 + 1e-3)
        flags = crossed([lo_guess, hi_guess])
        if flags[0] or not flags[1]:
            lo_guess, hi_guess = 0.0, hi
        refined = _multisection(crossed, lo_guess, hi_guess, locate_tol, options.batch)
        change = abs(refined - estimate) / refined
        logger.debug("Shooting with %d steps: λ = %.17g (change %.3g)", steps, refined, change)
        estimate = refined
        if change <= options.rtol:
            return estimate
    logger.warning("Shooting stopped at %d steps before λ settled to %g", steps, options.rtol)
    return estimate


def _with_condition(space: ModelSpace1D, bc) -> ModelSpace1D:
    if bc is None:
        return space
    try:
        condition = BoundaryCondition(bc) if isinstance(bc, str) else bc
        return dataclasses.replace(space, bc=condition)
    except (ValueError, InvalidArgumentError) as err:
        raise UnsupportedError(
            f'Shooting does not support bc "{getattr(bc, "value", bc)}" on a {space.kind.value}.'
        ) from err


def shooting_eig(space: ModelSpace1D, p: float, bc=None,
                 options: ShootingOptions = ShootingOptions()) -> float:
    """
    First eigenvalue by shooting, an oracle independent of `minimize_eig`.

    Circles are reduced to the half period [0, L/2], which requires f to be
    even about 0; the answer is the smaller of the even (Neumann) and odd
    (Dirichlet) half-period problems.

    Args:
        space (ModelSpace1D): Model space.
        p (float): Exponent in (1, ∞).
        bc (BoundaryCondition | str | None): Override of `space.bc`.
        options (ShootingOptions): Step and tolerance controls.

    Returns:
        float: λ.

    Raises:
        UnsupportedError: odd circle weights or an unavailable bc.
        BracketError: no sign change below the λ ceiling.
    """
    _check_exponent(p)
    space = _with_condition(space, bc)
    if space.kind is SpaceKind.CIRCLE:
        half = space.length / 2.0
        x = np.linspace(0.0, half, 257)
        f_values = np.asarray(space.f.evaluate(x), dtype=float)
        mirrored = np.asarray(space.f.evaluate(space.length - x), dtype=float)
        if np.max(np.abs(f_values - mirrored)) > 1e-12 * (1.0 + np.max(np.abs(f_values))):
            raise UnsupportedError(
                f'Circle shooting needs a weight even about 0; "{space.f_text}" is not.'
            )
        even = _shoot(space, p, 0.0, half, BoundaryCondition.NEUMANN, BoundaryCondition.NEUMANN, options)
        odd = _shoot(space, p, 0.0, half, BoundaryCondition.DIRICHLET, BoundaryCondition.DIRICHLET, options)
        logger.debug("Circle halves: even %.17g, odd %.17g", even, odd)
        return min(even, odd)
    a, b = space.endpoints
    left_offset, right_offset = space.offsets
    left, right = space.end_conditions
    return _shoot(space, p, a + left_offset, b - right_offset, left, right, options)
