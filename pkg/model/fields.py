"""
Scalar fields over chart coordinates.

A `ScalarField` is an immutable expression tree that evaluates either to a
`Jet` (all derivatives through order 3 at a point) or, in plain numpy
arithmetic, to values. `Composed` wraps fields derived from other fields'
jets (|∇u|^p, Δ_{p,f}u, ...) so they can be differentiated again.

`parse_field` turns the harness expression grammar (numbers, coordinate
names, pi, e, + - * / **, sin, cos, exp, log, sqrt, pow) into a tree. It walks
the Python AST and never executes user code.
"""

from __future__ import annotations

import ast
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from numbers import Real

import numpy as np

from .errors import ConfigurationError, InvalidArgumentError
from .jets import COS, EXP, INV, LOG, SIN, Jet, Primitive, jet_chain, jet_seed, power


class ScalarField(ABC):
    """ Smooth function of the chart coordinates """

    @abstractmethod
    def jet(self, seeds: Sequence[Jet]) -> Jet:
        """
        Evaluates the field through jet arithmetic.

        Args:
            seeds (Sequence[Jet]): Seeded coordinate jets of the point.

        Returns:
            Jet: the field's order-3 jet at that point.
        """

    @abstractmethod
    def evaluate(self, *coords):
        """ Plain evaluation; coordinates may be floats or numpy arrays """

    def jet_at(self, point: Sequence[float]) -> Jet:
        """ Jet of the field at a chart point """
        dim = len(point)
        return self.jet([jet_seed(float(x), i, dim) for i, x in enumerate(point)])

    def __add__(self, other) -> ScalarField:
        return Sum(self, as_field(other))

    def __radd__(self, other) -> ScalarField:
        return Sum(as_field(other), self)

    def __sub__(self, other) -> ScalarField:
        return Sum(self, Product(Constant(-1.0), as_field(other)))

    def __rsub__(self, other) -> ScalarField:
        return Sum(as_field(other), Product(Constant(-1.0), self))

    def __neg__(self) -> ScalarField:
        return Product(Constant(-1.0), self)

    def __mul__(self, other) -> ScalarField:
        return Product(self, as_field(other))

    def __rmul__(self, other) -> ScalarField:
        return Product(as_field(other), self)

    def __truediv__(self, other) -> ScalarField:
        if isinstance(other, Real):
            return Product(self, Constant(1.0 / float(other)))
        return Product(self, Apply(INV, as_field(other)))

    def __pow__(self, exponent) -> ScalarField:
        if isinstance(exponent, int) and exponent >= 0:
            result: ScalarField = Constant(1.0)
            for _ in range(exponent):
                result = Product(result, self)
            return result
        return Apply(power(float(exponent)), self)


def as_field(value) -> ScalarField:
    """ Wraps numbers into constant fields """
    if isinstance(value, ScalarField):
        return value
    if isinstance(value, Real):
        return Constant(float(value))
    raise InvalidArgumentError(f"Cannot build a scalar field from {value!r}.")


class Constant(ScalarField):
    """ Constant field """

    def __init__(self, value: float):
        self.value = float(value)

    def jet(self, seeds):
        return Jet.constant(self.value, seeds[0].dim)

    def evaluate(self, *coords):
        if coords and isinstance(coords[0], np.ndarray):
            return np.full_like(coords[0], self.value, dtype=float)
        return self.value

    def __repr__(self):
        return f"{self.value!r}"


class Coordinate(ScalarField):
    """ The coordinate function x_index """

    def __init__(self, index: int, name: str = ""):
        self.index = index
        self.name = name or f"x{index}"

    def jet(self, seeds):
        return seeds[self.index]

    def evaluate(self, *coords):
        return coords[self.index]

    def __repr__(self):
        return self.name


class Sum(ScalarField):
    """ left + right """

    def __init__(self, left: ScalarField, right: ScalarField):
        self.left = left
        self.right = right

    def jet(self, seeds):
        return self.left.jet(seeds) + self.right.jet(seeds)

    def evaluate(self, *coords):
        return self.left.evaluate(*coords) + self.right.evaluate(*coords)

    def __repr__(self):
        return f"({self.left!r} + {self.right!r})"


class Product(ScalarField):
    """ left · right """

    def __init__(self, left: ScalarField, right: ScalarField):
        self.left = left
        self.right = right

    def jet(self, seeds):
        if isinstance(self.left, Constant):
            return self.right.jet(seeds) * self.left.value
        return self.left.jet(seeds) * self.right.jet(seeds)

    def evaluate(self, *coords):
        return self.left.evaluate(*coords) * self.right.evaluate(*coords)

    def __repr__(self):
        return f"({self.left!r} * {self.right!r})"


class Apply(ScalarField):
    """ primitive(argument) """

    def __init__(self, primitive: Primitive, argument: ScalarField):
        self.primitive = primitive
        self.argument = argument

    def jet(self, seeds):
        return jet_chain(self.primitive, self.argument.jet(seeds))

    def evaluate(self, *coords):
        return self.primitive.apply(self.argument.evaluate(*coords))

    def __repr__(self):
        if self.primitive.name == "pow":
            return f"pow({self.argument!r}, {self.primitive.exponent!r})"
        return f"{self.primitive.name}({self.argument!r})"


class Composed(ScalarField):
    """
    Field built from the jets of other fields, e.g. x ↦ |∇u|^p(x).

    The builder receives the seeded coordinate jets and returns a jet whose
    exactness depends on how many differentiations it performed.

    Args:
        builder (Callable[[Sequence[Jet]], Jet]): jet-level definition.
        label (str): Human readable name used in reprs and errors.
    """

    def __init__(self, builder: Callable[[Sequence[Jet]], Jet], label: str = "composed"):
        self.builder = builder
        self.label = label

    def jet(self, seeds):
        return self.builder(seeds)

    def evaluate(self, *coords):
        arrays = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        if arrays[0].ndim == 0:
            return self.jet_at([float(a) for a in arrays]).value
        out = np.empty(arrays[0].shape)
        for index in np.ndindex(out.shape):
            out[index] = self.jet_at([float(a[index]) for a in arrays]).value
        return out

    def __repr__(self):
        return self.label


_FUNCTIONS = {"sin": SIN, "cos": COS, "exp": EXP, "log": LOG}
_CONSTANTS = {"pi": math.pi, "e": math.e}


def parse_field(text: str, variables: Sequence[str]) -> ScalarField:
    """
    Parses an expression of the scenario grammar into a scalar field.

    The grammar is: numbers, the chart's coordinate names, `pi`, `e`, the
    operators + - * / **, and the functions sin, cos, exp, log, sqrt and
    pow(base, exponent) with a constant exponent.

    Args:
        text (str): Expression, e.g. "0.2*r**2" or "sin(x)+2*cos(y)".
        variables (Sequence[str]): Coordinate names in chart order.

    Returns:
        ScalarField: the parsed tree.

    Raises:
        ConfigurationError: anything outside the grammar.
    """
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as err:
        raise ConfigurationError(f'Cannot parse expression "{text}": {err.msg}.') from err
    names = {name: Coordinate(i, name) for i, name in enumerate(variables)}
    return _build(tree.body, names, text)


def _constant_of(node: ast.AST, text: str) -> float:
    """ Folds a constant sub-expression (used for exponents) """
    field = _build(node, {}, text)
    if not isinstance(field, Constant):
        value = field.evaluate()
        if not isinstance(value, Real):
            raise ConfigurationError(f'Exponent in "{text}" must be a constant.')
        return float(value)
    return field.value


def _build(node: ast.AST, names: dict[str, Coordinate], text: str) -> ScalarField:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return Constant(float(node.value))
    if isinstance(node, ast.Name):
        if node.id in names:
            return names[node.id]
        if node.id in _CONSTANTS:
            return Constant(_CONSTANTS[node.id])
        raise ConfigurationError(f'Unknown name "{node.id}" in "{text}".')
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        operand = _build(node.operand, names, text)
        return -operand if isinstance(node.op, ast.USub) else operand
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _power(_build(node.left, names, text), _constant_of(node.right, text))
        left = _build(node.left, names, text)
        right = _build(node.right, names, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, Constant):
                if right.value == 0.0:
                    raise ConfigurationError(f'Division by zero in "{text}".')
                return left / right.value
            return left / right
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name, args = node.func.id, node.args
        if name in _FUNCTIONS and len(args) == 1:
            return Apply(_FUNCTIONS[name], _build(args[0], names, text))
        if name == "sqrt" and len(args) == 1:
            return Apply(power(0.5), _build(args[0], names, text))
        if name == "pow" and len(args) == 2:
            return _power(_build(args[0], names, text), _constant_of(args[1], text))
    raise ConfigurationError(
        f'Unsupported construct "{ast.dump(node)[:40]}..." in "{text}".'
    )


def _power(base: ScalarField, exponent: float) -> ScalarField:
    if float(exponent).is_integer() and 0 <= exponent <= 16:
        return base ** int(exponent)
    return Apply(power(exponent), base)
