"""
Truncated multivariate Taylor arithmetic ("jets") of order 3.

Every partial derivative used by the geometry and identity modules is read off
a `Jet`: seed the chart coordinates with `jet_seed`, push them through the
arithmetic below and extract derivatives with `Jet.derivative`. Coefficients
are stored as Taylor coefficients (∂^α φ / α!), so multiplication is a plain
truncated convolution.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError, InvalidArgumentError

ORDER = 3
DIMENSIONS = (1, 2, 3)


@functools.cache
def multi_indices(dim: int) -> tuple[tuple[int, ...], ...]:
    """
    Multi-indices α with |α| ≤ 3 in graded order: total degree first, then
    the first variable's exponent descending.

    For dim = 1 this is simply (0,), (1,), (2,), (3,).

    Args:
        dim (int): Number of chart variables, 1 to 3.

    Returns:
        tuple[tuple[int, ...], ...]: binomial(dim + 3, 3) multi-indices.
    """
    if dim not in DIMENSIONS:
        raise InvalidArgumentError(f"Jet dimension must be 1, 2 or 3, got {dim}.")
    alphas = [
        alpha for alpha in itertools.product(range(ORDER + 1), repeat=dim)
        if sum(alpha) <= ORDER
    ]
    return tuple(sorted(alphas, key=lambda a: (sum(a), tuple(-k for k in a))))


@functools.cache
def _positions(dim: int) -> dict[tuple[int, ...], int]:
    return {alpha: pos for pos, alpha in enumerate(multi_indices(dim))}


@functools.cache
def _product_table(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ Index triples (i, j, k) with α_i + α_j = α_k and |α_k| ≤ 3 """
    alphas = multi_indices(dim)
    positions = _positions(dim)
    left, right, target = [], [], []
    for i, a in enumerate(alphas):
        for j, b in enumerate(alphas):
            total = tuple(x + y for x, y in zip(a, b))
            if sum(total) <= ORDER:
                left.append(i)
                right.append(j)
                target.append(positions[total])
    return np.array(left), np.array(right), np.array(target)


@functools.cache
def _factorials(dim: int) -> np.ndarray:
    return np.array([
        math.prod(math.factorial(k) for k in alpha)
        for alpha in multi_indices(dim)
    ], dtype=float)


@functools.cache
def _diff_table(dim: int, var: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ For ∂/∂x_var: (source positions, target positions, factors) """
    positions = _positions(dim)
    source, target, factor = [], [], []
    for beta in multi_indices(dim):
        if sum(beta) == ORDER:
            continue
        alpha = list(beta)
        alpha[var] += 1
        source.append(positions[tuple(alpha)])
        target.append(positions[beta])
        factor.append(float(alpha[var]))
    return np.array(source), np.array(target), np.array(factor)


class Jet:
    """
    Order-3 truncated Taylor expansion of a scalar in `dim` chart variables.

    Jets obtained through `diff` lose one order of exactness: after k
    differentiations only the coefficients with |α| ≤ 3 − k are meaningful,
    the top ones being truncated to zero.

    Args:
        dim (int): Number of variables (1, 2 or 3).
        coeffs (array-like): Taylor coefficients in `multi_indices(dim)` order.
    """

    __slots__ = ("dim", "coeffs")
    __array_priority__ = 1000

    def __init__(self, dim: int, coeffs):
        size = len(multi_indices(dim))
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (size,):
            raise InvalidArgumentError(
                f"A {dim}-variable jet has {size} coefficients, got {coeffs.shape}."
            )
        self.dim = dim
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value: float, dim: int) -> Jet:
        """ Jet of a constant function """
        coeffs = np.zeros(len(multi_indices(dim)))
        coeffs[0] = value
        return cls(dim, coeffs)

    @property
    def value(self) -> float:
        """ Order-0 coefficient, i.e. the function value """
        return float(self.coeffs[0])

    def coefficient(self, alpha: tuple[int, ...]) -> float:
        """ Taylor coefficient ∂^α φ / α! """
        try:
            return float(self.coeffs[_positions(self.dim)[tuple(alpha)]])
        except KeyError as err:
            raise InvalidArgumentError(
                f"Multi-index {alpha} is not stored in a {self.dim}-variable jet."
            ) from err

    def derivative(self, alpha: tuple[int, ...]) -> float:
        """ Partial derivative ∂^α φ at the expansion point """
        alpha = tuple(alpha)
        return self.coefficient(alpha) * math.prod(math.factorial(k) for k in alpha)

    def derivatives(self) -> np.ndarray:
        """ All stored partial derivatives, in `multi_indices` order """
        return self.coeffs * _factorials(self.dim)

    def gradient(self) -> np.ndarray:
        """ First partial derivatives """
        return self.coeffs[1:self.dim + 1].copy()

    def hessian(self) -> np.ndarray:
        """ Matrix of second partial derivatives """
        hess = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                alpha = [0] * self.dim
                alpha[i] += 1
                alpha[j] += 1
                hess[i, j] = self.derivative(tuple(alpha))
        return hess

    def diff(self, var: int) -> Jet:
        """
        Jet of ∂φ/∂x_var. Exact through order 2; the order-3 coefficients of
        the result are zero.
        """
        if not 0 <= var < self.dim:
            raise InvalidArgumentError(
                f"Variable index {var} out of range for a {self.dim}-variable jet."
            )
        source, target, factor = _diff_table(self.dim, var)
        coeffs = np.zeros_like(self.coeffs)
        coeffs[target] = self.coeffs[source] * factor
        return Jet(self.dim, coeffs)

    def _coerce(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.dim != self.dim:
                raise InvalidArgumentError(
                    f"Jet dimension mismatch: {self.dim} and {other.dim}."
                )
            return other
        if isinstance(other, Real):
            return Jet.constant(float(other), self.dim)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet(self.dim, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.dim, other.coeffs - self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet(self.dim, self.coeffs * float(other))
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Jet(self.dim, self.coeffs / float(other))
        if isinstance(other, Jet):
            return jet_mul(self, jet_chain(INV, other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return jet_chain(INV, self) * float(other)
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            result = Jet.constant(1.0, self.dim)
            for _ in range(exponent):
                result = jet_mul(result, self)
            return result
        if isinstance(exponent, Real):
            return jet_chain(power(float(exponent)), self)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Jet(dim={self.dim}, coeffs={self.coeffs.tolist()})"


@dataclass(frozen=True)
class Primitive:
    """
    Tagged univariate function usable in `jet_chain`.

    Attributes:
        name (str): One of "exp", "sin", "cos", "log", "pow", "inv".
        exponent (float | None): Exponent α of "pow".
    """
    name: str
    exponent: float | None = None

    def taylor(self, x0: float) -> tuple[float, float, float, float]:
        """
        Derivatives g(x0), g'(x0), g''(x0), g'''(x0).

        Raises:
            DomainError: nonpositive base for log/pow, zero base for inv.
        """
        if self.name == "exp":
            e = math.exp(x0)
            return e, e, e, e
        if self.name == "sin":
            s, c = math.sin(x0), math.cos(x0)
            return s, c, -s, -c
        if self.name == "cos":
            s, c = math.sin(x0), math.cos(x0)
            return c, -s, -c, s
        if self.name == "log":
            if x0 <= 0.0:
                raise DomainError(f"log of nonpositive base {x0!r}.")
            return math.log(x0), 1.0 / x0, -1.0 / x0**2, 2.0 / x0**3
        if self.name == "pow":
            if x0 <= 0.0:
                raise DomainError(
                    f"pow_{self.exponent} of nonpositive base {x0!r}."
                )
            a = self.exponent
            return (
                x0**a,
                a * x0**(a - 1.0),
                a * (a - 1.0) * x0**(a - 2.0),
                a * (a - 1.0) * (a - 2.0) * x0**(a - 3.0),
            )
        if self.name == "inv":
            if x0 == 0.0:
                raise DomainError("Reciprocal of zero.")
            return 1.0 / x0, -1.0 / x0**2, 2.0 / x0**3, -6.0 / x0**4
        raise InvalidArgumentError(f'Unknown primitive "{self.name}".')

    def apply(self, x):
        """ Plain (numpy-broadcastable) evaluation """
        if self.name == "exp":
            return np.exp(x)
        if self.name == "sin":
            return np.sin(x)
        if self.name == "cos":
            return np.cos(x)
        if self.name == "log":
            if np.any(np.asarray(x) <= 0.0):
                raise DomainError("log of nonpositive base.")
            return np.log(x)
        if self.name == "pow":
            if np.any(np.asarray(x) <= 0.0):
                raise DomainError(f"pow_{self.exponent} of nonpositive base.")
            return np.power(x, self.exponent)
        if self.name == "inv":
            if np.any(np.asarray(x) == 0.0):
                raise DomainError("Reciprocal of zero.")
            return 1.0 / np.asarray(x, dtype=float)
        raise InvalidArgumentError(f'Unknown primitive "{self.name}".')


EXP = Primitive("exp")
SIN = Primitive("sin")
COS = Primitive("cos")
LOG = Primitive("log")
INV = Primitive("inv")


def power(exponent: float) -> Primitive:
    """ The primitive x ↦ x^exponent, defined for x > 0 """
    return Primitive("pow", float(exponent))


def jet_seed(value: float, var_index: int, dim: int) -> Jet:
    """
    Jet of the coordinate function x_var_index taking `value` at the
    expansion point.

    Raises:
        InvalidArgumentError: var_index outside [0, dim).
    """
    if not 0 <= var_index < dim:
        raise InvalidArgumentError(
            f"Seed index {var_index} out of range for {dim} variables."
        )
    jet = Jet.constant(value, dim)
    unit = [0] * dim
    unit[var_index] = 1
    jet.coeffs[_positions(dim)[tuple(unit)]] = 1.0
    return jet


def jet_mul(a: Jet, b: Jet) -> Jet:
    """
    Truncated Cauchy product of two jets.

    Raises:
        InvalidArgumentError: the jets have different dimensions.
    """
    if a.dim != b.dim:
        raise InvalidArgumentError(f"Jet dimension mismatch: {a.dim} and {b.dim}.")
    left, right, target = _product_table(a.dim)
    coeffs = np.bincount(
        target,
        weights=a.coeffs[left] * b.coeffs[right],
        minlength=a.coeffs.size,
    )
    return Jet(a.dim, coeffs)


def jet_chain(primitive: Primitive, a: Jet) -> Jet:
    """
    Univariate Taylor composition g(a) through order 3.

    Raises:
        DomainError: see `Primitive.taylor`.
    """
    g0, g1, g2, g3 = primitive.taylor(a.value)
    h = a - a.value
    h2 = jet_mul(h, h)
    h3 = jet_mul(h2, h)
    return Jet(a.dim, g1 * h.coeffs + (g2 / 2.0) * h2.coeffs + (g3 / 6.0) * h3.coeffs) + g0
