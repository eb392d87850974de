import math

import numpy as np
import pytest

from model.errors import ConfigurationError, DomainError
from model.fields import Composed, Constant, Coordinate, parse_field


def test_parse_and_evaluate():
    """
    Parsed expressions evaluate on floats and on numpy arrays.
    """
    field = parse_field("sin(x) + 2*cos(y)", ("x", "y"))
    assert field.evaluate(0.0, 0.0) == pytest.approx(2.0)
    values = field.evaluate(np.array([math.pi / 2, 0.0]), np.array([0.0, math.pi]))
    np.testing.assert_allclose(values, [3.0, -2.0])

    assert parse_field("pi", ("x",)).evaluate(0.3) == pytest.approx(math.pi)
    assert parse_field("-(0.5)*x", ("x",)).evaluate(2.0) == pytest.approx(-1.0)
    assert parse_field("sqrt(x)", ("x",)).evaluate(4.0) == pytest.approx(2.0)
    assert parse_field("pow(x, 3)", ("x",)).evaluate(2.0) == pytest.approx(8.0)
    assert parse_field("x/(1 + x)", ("x",)).evaluate(1.0) == pytest.approx(0.5)

def test_constant_folding():
    """
    Expressions without coordinates fold to numbers, used for lengths like "2*pi".
    """
    assert parse_field("2*pi", ()).evaluate() == pytest.approx(2.0 * math.pi)
    assert parse_field("e**2", ()).evaluate() == pytest.approx(math.e ** 2)

def test_jets_of_parsed_fields():
    """
    Jets of a parsed field carry the exact derivatives.
    """
    field = parse_field("x**2*y + exp(x)", ("x", "y"))
    jet = field.jet_at([1.0, 3.0])
    assert jet.value == pytest.approx(3.0 + math.e)
    assert jet.derivative((1, 0)) == pytest.approx(6.0 + math.e)
    assert jet.derivative((0, 1)) == pytest.approx(1.0)
    assert jet.derivative((2, 0)) == pytest.approx(6.0 + math.e)
    assert jet.derivative((1, 1)) == pytest.approx(2.0)
    assert jet.derivative((3, 0)) == pytest.approx(math.e)

def test_field_arithmetic():
    """
    Fields combine with numbers and with each other.
    """
    x = Coordinate(0, "x")
    field = (2.0 - x) * x / 4.0 + Constant(1.0)
    assert field.evaluate(1.0) == pytest.approx(1.25)
    assert (-x).evaluate(3.0) == pytest.approx(-3.0)
    assert (x ** 3).jet_at([2.0]).derivative((2,)) == pytest.approx(12.0)

def test_composed_field():
    """
    A field built from jets can be evaluated pointwise and on arrays.
    """
    x = Coordinate(0, "x")
    square = Composed(lambda seeds: (x * x).jet(seeds), "x^2")
    assert square.evaluate(3.0) == pytest.approx(9.0)
    np.testing.assert_allclose(square.evaluate(np.array([1.0, 2.0])), [1.0, 4.0])
    assert repr(square) == "x^2"

@pytest.mark.parametrize("text", [
    "__import__('os')",
    "x.real",
    "unknown(x)",
    "z + 1",
    "x**y",
    "x/0",
    "lambda: 1",
    "sin(x",
])
def test_rejected_expressions(text):
    """
    Anything outside the grammar is a configuration error, never executed.
    """
    with pytest.raises(ConfigurationError):
        parse_field(text, ("x", "y"))

def test_domain_error_on_evaluation():
    """
    log of a nonpositive value surfaces as a DomainError when jets are taken.
    """
    field = parse_field("log(x)", ("x",))
    with pytest.raises(DomainError):
        field.jet_at([-1.0])
