"""
Quadrature rules for the integrated identity checks.

Gauss-Legendre on bounded axes, the trapezoid rule on periodic ones (it is
spectrally accurate for smooth periodic integrands).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Node counts of the integrated checks.

    Attributes:
        nodes (int): Interior nodes per axis.
        boundary_nodes (int): Nodes per boundary curve.
    """
    nodes: int = 64
    boundary_nodes: int = 256

    def __post_init__(self):
        if self.nodes < 2 or self.boundary_nodes < 2:
            raise InvalidArgumentError(
                f"Quadrature needs at least 2 nodes, got {self.nodes}/{self.boundary_nodes}."
            )


@functools.cache
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(n)
    return nodes, weights


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """ n-point Gauss-Legendre nodes and weights on [a, b] """
    nodes, weights = _legendre(n)
    half = 0.5 * (b - a)
    return a + half * (nodes + 1.0), half * weights


def periodic_trapezoid(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """ n equispaced nodes on [a, b) with equal weights """
    step = (b - a) / n
    return a + step * np.arange(n), np.full(n, step)


def axis_rule(n: int, a: float, b: float, periodic: bool) -> tuple[np.ndarray, np.ndarray]:
    """ Trapezoid on periodic axes, Gauss-Legendre otherwise """
    if periodic:
        return periodic_trapezoid(n, a, b)
    return gauss_legendre(n, a, b)


def tensor_rule(box, periodic, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Tensor-product rule over a coordinate box.

    Args:
        box (Sequence[tuple[float, float]]): Per-axis bounds.
        periodic (Sequence[bool]): Per-axis periodicity.
        n (int): Nodes per axis.

    Returns:
        tuple[np.ndarray, np.ndarray]: points of shape (n**dim, dim) in
    lexicographic order, and their weights.
    """
    rules = [axis_rule(n, lo, hi, flag) for (lo, hi), flag in zip(box, periodic)]
    points = np.array(list(itertools.product(*[nodes for nodes, _ in rules])))
    weights = np.array([np.prod(w) for w in itertools.product(*[w for _, w in rules])])
    return points, weights
