import math

import pytest

from model.bounds import (
    Hypotheses, Theorem, bound_futaki_li_li, bound_lichnerowicz, bound_liyau, bound_matei,
    bound_negative, bound_valtorta, check_bound, gradient_estimate_check, hypothesis_scan,
    negative_constant, pi_p, theorem_of,
)
from model.charts import get_chart
from model.eigensolver1d import SolverOptions, build_problem, minimize_eig
from model.errors import InvalidArgumentError, NotApplicableError
from model.spaces import make_space


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
def test_pi_p_modes_agree(p):
    assert pi_p(p, "quadrature") == pytest.approx(pi_p(p), rel=1e-12)

def test_pi_p_values():
    assert pi_p(2.0) == pytest.approx(math.pi)
    assert pi_p(3.0) == pytest.approx(4.0 * math.pi / (3.0 * math.sqrt(3.0)))
    with pytest.raises(InvalidArgumentError):
        pi_p(1.0)
    with pytest.raises(InvalidArgumentError):
        pi_p(2.0, "series")

def test_bound_formulas():
    """
    Known values of every lower bound.
    """
    assert bound_liyau(2.0, math.pi) == pytest.approx(0.25)
    assert bound_valtorta(2.0, math.pi) == pytest.approx(1.0)
    assert bound_lichnerowicz(2.0, 2.0, 1.0) == pytest.approx(2.0)
    assert bound_lichnerowicz(2.0, math.inf, 1.0) == pytest.approx(1.0)
    assert bound_lichnerowicz(3.0, 3.0, 2.0) == pytest.approx(3.0 ** 1.5 / 4.0)
    assert bound_matei(3.0, 2.0) == pytest.approx(1.0)
    assert negative_constant(2.0, 3.0) == pytest.approx(math.exp(-2.0))
    assert bound_negative(2.0, 3.0, 0.0, 1.0) == pytest.approx(math.exp(-2.0))
    assert bound_negative(2.0, 3.0, 2.0, 1.0) == pytest.approx(math.exp(-4.0))
    assert bound_futaki_li_li(math.pi, 0.0) == pytest.approx(1.0)
    assert bound_futaki_li_li(1.0, 100.0 * math.pi ** 2) == pytest.approx(100.0 * math.pi ** 2)

def test_bound_preconditions():
    with pytest.raises(NotApplicableError):
        bound_lichnerowicz(1.5, 3.0, 1.0)
    with pytest.raises(NotApplicableError):
        bound_lichnerowicz(2.0, 3.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        bound_lichnerowicz(2.0, 1.0, 1.0)
    with pytest.raises(NotApplicableError):
        bound_negative(2.0, math.inf, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        bound_negative(2.0, 3.0, -1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        bound_liyau(2.0, 0.0)

def test_theorem_ids():
    assert theorem_of("T1.1-closed") is Theorem.T1_1_CLOSED
    assert Theorem.T1_3_DIRICHLET.family == "T1.3"
    assert Theorem.T1_3_DIRICHLET.condition == "dirichlet"
    assert Theorem.T1_5.condition == "neumann"
    with pytest.raises(InvalidArgumentError):
        theorem_of("T9")

def test_hypothesis_scan_of_model_spaces():
    """
    Sphere n = 2 at m = 2 has K_min = 1; the Gaussian interval has K_min = 1 at
    m = ∞ and a flat, H_f-negative boundary.
    """
    sphere = hypothesis_scan(make_space("sphere", n=2), m=2.0, p=2.0)
    assert sphere.K_min == pytest.approx(1.0)
    assert sphere.D == pytest.approx(math.pi)
    assert not sphere.has_boundary and sphere.Hf_min is None
    assert sphere.unweighted

    gaussian = hypothesis_scan(make_space("interval", 6.0, start=-3.0), f="x**2/2", p=2.0)
    assert gaussian.K_min == pytest.approx(1.0)
    assert gaussian.II_min == 0.0
    assert gaussian.Hf_min == pytest.approx(-3.0)
    assert not gaussian.unweighted

    circle = hypothesis_scan(make_space("circle", 2.0 * math.pi, f="sin(x)"), m=3.0, samples=100000)
    assert circle.K_min == pytest.approx(-1.0)
    assert circle.record()["m"] == 3.0

    with pytest.raises(InvalidArgumentError):
        hypothesis_scan(make_space("sphere"), samples=10)

def test_hypothesis_scan_of_charts():
    """
    Charts scan Ric_f^m through jets; the unit disk has a convex boundary.
    """
    sphere = hypothesis_scan(get_chart("sphere2"), m=math.inf, samples=100)
    assert sphere.K_min == pytest.approx(1.0)
    assert sphere.dimension == 2
    assert sphere.unweighted

    disk = hypothesis_scan(get_chart("disk_polar"), f="r**2", samples=64)
    assert disk.K_min == pytest.approx(2.0)
    assert disk.II_min == pytest.approx(1.0)
    assert disk.Hf_min == pytest.approx(-1.0)
    assert not disk.unweighted
    assert hypothesis_scan(get_chart("flat_torus"), samples=64).record()["m"] == "inf"

def test_check_bound_examples():
    """
    The round S² at p = 2 attains T1.1 with λ = 2; an interval of length π
    sits far above T1.3's (p − 1)(π_p/2D)^p.
    """
    sphere = Hypotheses(K_min=1.0, m=2.0, D=math.pi, has_boundary=False, p=2.0, dimension=2,
                        unweighted=True)
    report = check_bound("T1.1-closed", sphere, 2.0)
    assert report.applicable and report.passed
    assert report.rhs == pytest.approx(2.0)
    assert report.margin == pytest.approx(0.0, abs=1e-12)
    assert report.diagnostics["comparator_rhs"] == pytest.approx(1.0)

    interval = Hypotheses(K_min=0.0, m=math.inf, D=math.pi, has_boundary=True,
                          Hf_min=0.0, II_min=0.0, p=2.0)
    report = check_bound("T1.3-neumann", interval, 1.0)
    assert report.rhs == pytest.approx(0.25)
    assert report.diagnostics["ratio"] == pytest.approx(4.0)
    assert report.diagnostics["sharpness"] == pytest.approx(1.0)
    assert report.record()["pass"]

    violated = check_bound("T1.3-neumann", interval, 0.1)
    assert violated.applicable and not violated.passed

def test_ricci_comparator_needs_a_closed_unweighted_space():
    """
    The comparator (K/(p − 1))^{p/2} stays out of weighted and bounded T1.1 reports.
    """
    weighted = Hypotheses(K_min=1.0, m=math.inf, D=math.pi, has_boundary=False, p=3.0)
    assert "comparator_rhs" not in check_bound("T1.1-closed", weighted, 5.0).diagnostics

    disk = Hypotheses(K_min=1.0, m=math.inf, D=2.0, has_boundary=True, Hf_min=1.0, II_min=1.0,
                      p=3.0, unweighted=True)
    report = check_bound("T1.1-neumann", disk, 5.0)
    assert report.applicable
    assert "comparator_rhs" not in report.diagnostics

    closed = Hypotheses(K_min=2.0, m=math.inf, D=math.pi, has_boundary=False, p=3.0, unweighted=True)
    assert check_bound("T1.1-closed", closed, 5.0).diagnostics["comparator_rhs"] == pytest.approx(1.0)

def test_check_bound_gating():
    """
    Theorems outside their hypotheses pass vacuously with the failed gate.
    """
    flat = Hypotheses(K_min=0.0, m=math.inf, D=1.0, has_boundary=False, p=2.0)
    report = check_bound("T1.1-closed", flat, 1.0)
    assert not report.applicable and report.passed
    assert report.reason == "K_min ≤ 0"
    assert report.rhs is None

    assert check_bound("T1.3-neumann", flat, 1.0).reason == "neumann condition needs a boundary"
    assert check_bound("T1.5", flat, 1.0).reason == "m = ∞ (finite m required)"

    negative = Hypotheses(K_min=-1.0, m=3.0, D=math.pi, has_boundary=False, p=2.0)
    assert "finite-m" in check_bound("T1.3-closed", negative, 1.0).reason
    report = check_bound("T1.5", negative, 1.0)
    assert report.applicable
    assert report.diagnostics["K"] == pytest.approx(1.0)
    assert report.rhs == pytest.approx(bound_negative(2.0, 3.0, 1.0, math.pi))

    concave = Hypotheses(K_min=1.0, m=math.inf, D=1.0, has_boundary=True, Hf_min=-0.5,
                         II_min=-0.1, p=2.0)
    assert check_bound("T1.1-dirichlet", concave, 1.0).reason == "Hf_min < 0"
    assert check_bound("T1.1-neumann", concave, 1.0).reason.startswith("II_min < 0")

    low_p = Hypotheses(K_min=1.0, m=math.inf, D=1.0, has_boundary=False, p=1.5)
    assert check_bound("T1.1-closed", low_p, 1.0).reason == "p < 2"

    with pytest.raises(InvalidArgumentError):
        check_bound("T1.1-closed", Hypotheses(K_min=1.0, m=2.0, D=1.0, has_boundary=False), 1.0)

def test_hypotheses_validation():
    with pytest.raises(InvalidArgumentError):
        Hypotheses(K_min=0.0, m=math.inf, D=0.0, has_boundary=False)
    with pytest.raises(InvalidArgumentError):
        Hypotheses(K_min=0.0, m=math.inf, D=1.0, has_boundary=False, Hf_min=0.0)

def test_gradient_estimate_on_the_circle():
    """
    At p = 2 the eigenfunction cos x saturates max |u'|²/(1 − u²) ≤ λ.
    """
    space = make_space("circle", 2.0 * math.pi)
    result = minimize_eig(build_problem(space, 2.0, 512), SolverOptions(N=512, restarts=1))
    check = gradient_estimate_check(space, result, 2.0)
    assert check["pass"]
    assert check["ratio"] == pytest.approx(1.0, abs=1e-3)

    with pytest.raises(NotApplicableError):
        gradient_estimate_check(make_space("interval", 1.0), result, 2.0)
    curved = make_space("circle", 2.0 * math.pi, f="sin(x)")
    with pytest.raises(NotApplicableError):
        gradient_estimate_check(curved, result, 2.0)
