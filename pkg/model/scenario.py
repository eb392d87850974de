"""
Scenario engine of the verification lab.

A scenario is one JSON document whose `kind` selects what runs: a π_p
cross-check, an eigensolve, a bound report, the gradient estimate, pointwise
Bochner checks, integrated Reilly checks or a sweep over scenario cells. Every
run produces a report carrying the scenario echo, the outcome, the checks that
decided pass/fail and the wall time.
"""

from __future__ import annotations

import copy
import hashlib
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from http import HTTPStatus
from numbers import Real

import numpy as np
from jsonschema import validate, ValidationError

from data.database import DatabaseInterface
from .bounds import (
    DEFAULT_SAMPLES, GRADIENT_TOLERANCE, MIN_SAMPLES, PASS_TOLERANCE, Theorem,
    check_bound, gradient_estimate_check, hypothesis_scan, pi_p, theorem_of,
)
from .charts import CHART_IDS, DEFAULT_INTERIOR_OFFSET, Chart, get_chart
from .eigensolver1d import (
    EigenResult, Problem1D, ShootingOptions, SolverOptions, build_problem,
    minimize_eig, trial_result, shooting_eig,
)
from .errors import ConfigurationError, LabError, NumericalFailureError
from .fields import ScalarField, parse_field
from .geometry import point_calculus
from .identities import bochner_residual, classical_bochner, reilly_residual, trace_inequality_gap
from .quadrature import QuadratureSpec
from .report import ReportModel, canonical, jsonable, report_row
from .spaces import BoundaryCondition, ModelSpace1D, SpaceKind, make_space
from .suite import SUITES

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "plap-lab/report/v1"
SWEEP_SCHEMA = "plap-lab/sweep/v1"
SUITE_SCHEMA = "plap-lab/suite/v1"

DEFAULT_MAX_CELLS = 10000
DEFAULT_POINTS = 20
EQ34_LIMIT = 1e-6
PMEAN_LIMIT = 1e-8
ORACLE_TOLERANCE = 1e-4
CONTROL_FLOOR = 1e-2
BOCHNER_TOLERANCE = 1e-7
REILLY_TOLERANCE = 1e-6
REMARK_TOLERANCE = 1e-8
TRACE_TOLERANCE = 1e-9
MONOTONE_FLOOR = 1e-12
SAMPLE_FLOOR = 0.1
SAMPLE_RETRIES = 20

KINDS = ("pi_p", "eigen", "bound", "gradient_estimate", "bochner", "reilly", "sweep")
SWEEP_AXES = ("K_scale", "L", "m", "p")

_number = {"type": "number"}
_positive = {"type": "number", "exclusiveMinimum": 0}
_exponent = {"type": "number", "exclusiveMinimum": 1}
_expression = {"type": ["string", "number"]}
_dimension = {"oneOf": [{"type": "number"}, {"const": "inf"}]}

_common = {
    "id": {"type": "string", "minLength": 1},
    "kind": {"enum": list(KINDS)},
    "description": {"type": "string"},
    "seed": {"type": "integer", "minimum": 0},
    "expect": {
        "type": "object",
        "additionalProperties": {
            "type": "object",
            "properties": {
                "value": {"type": ["number", "boolean", "string"]},
                "abs": {"type": "number", "minimum": 0},
                "rel": {"type": "number", "minimum": 0},
                "min": _number,
                "max": _number,
            },
            "minProperties": 1,
            "additionalProperties": False,
        },
    },
}

_space = {
    "space": {"enum": [kind.value for kind in SpaceKind]},
    "L": _expression,
    "start": _number,
    "n": {"type": "integer", "minimum": 1},
    "bc": {"enum": [condition.value for condition in BoundaryCondition]},
    "f": _expression,
}

_solver = {
    "N": {"type": "integer", "minimum": 16},
    "solver": {
        "type": "object",
        "properties": {
            "N": {"type": "integer", "minimum": 16},
            "restarts": {"type": "integer", "minimum": 0},
            "max_iter": {"type": "integer", "minimum": 1},
            "tol": _positive,
        },
        "additionalProperties": False,
    },
}

_chart = {
    "chart": {"enum": list(CHART_IDS)},
    "chart_params": {"type": "object", "additionalProperties": _number},
    "interior_offset": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.1},
    "f": _expression,
}

_cases = {
    "u": _expression,
    "p": {"type": "number", "minimum": 2},
    "random": {
        "type": "object",
        "properties": {
            "cases": {"type": "integer", "minimum": 1, "maximum": 1000},
            "p": {"type": "array", "items": {"type": "number", "minimum": 2}, "minItems": 1},
        },
        "required": ["cases"],
        "additionalProperties": False,
    },
    "tolerance": _positive,
}

_samples = {"type": "integer", "minimum": MIN_SAMPLES}


def _kind_schema(properties: dict, required: list, **extra) -> dict:
    return {
        "properties": {**_common, **properties},
        "required": ["kind", *required],
        "additionalProperties": False,
        **extra,
    }


_KIND_SCHEMAS = {
    "pi_p": _kind_schema({"p": _exponent}, ["p"]),
    "eigen": _kind_schema(
        {
            **_space, **_solver,
            "p": _exponent,
            "m": _dimension,
            "samples": _samples,
            "oracle": {"type": "boolean"},
            "negative_control": {"type": "boolean"},
            "shooting": {
                "type": "object",
                "properties": {
                    "initial_steps": {"type": "integer", "minimum": 8},
                    "max_steps": {"type": "integer", "minimum": 8},
                    "rtol": _positive,
                },
                "additionalProperties": False,
            },
        },
        ["space", "p"],
    ),
    "bound": _kind_schema(
        {
            **_space, **_solver, **_chart,
            "theorem": {"enum": [theorem.value for theorem in Theorem]},
            "p": _exponent,
            "m": _dimension,
            "samples": _samples,
            "lambda": _number,
            "tolerance": _positive,
        },
        ["theorem", "p"],
        oneOf=[{"required": ["space"]}, {"required": ["chart", "lambda"]}],
    ),
    "gradient_estimate": _kind_schema(
        {**_space, **_solver, "p": _exponent, "samples": _samples},
        ["space", "p"],
    ),
    "bochner": _kind_schema(
        {**_chart, **_cases, "points": {"type": "integer", "minimum": 1}, "m": _dimension},
        ["chart"],
        oneOf=[{"required": ["u", "p"]}, {"required": ["random"]}],
    ),
    "reilly": _kind_schema(
        {
            **_chart, **_cases,
            "quadrature": {
                "type": "object",
                "properties": {
                    "nodes": {"type": "integer", "minimum": 2},
                    "boundary_nodes": {"type": "integer", "minimum": 2},
                },
                "additionalProperties": False,
            },
            "refinements": {"type": "integer", "minimum": 1, "maximum": 6},
        },
        ["chart"],
        oneOf=[{"required": ["u", "p"]}, {"required": ["random"]}],
    ),
    "sweep": _kind_schema(
        {
            "base": {"type": "object", "required": ["kind"]},
            "axes": {
                "type": "object",
                "properties": {
                    "p": {"type": "array", "items": _exponent, "minItems": 1},
                    "L": {"type": "array", "items": _expression, "minItems": 1},
                    "m": {"type": "array", "items": _dimension, "minItems": 1},
                    "K_scale": {"type": "array", "items": _number, "minItems": 1},
                },
                "minProperties": 1,
                "additionalProperties": False,
            },
            "max_cells": {"type": "integer", "minimum": 1},
        },
        ["base", "axes"],
    ),
}

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {"kind": {"enum": list(KINDS)}},
    "required": ["kind"],
    "allOf": [
        {"if": {"properties": {"kind": {"const": kind}}}, "then": schema}
        for kind, schema in _KIND_SCHEMAS.items()
    ],
}


def scenario_id(config: dict) -> str:
    """ Stable id of a scenario that does not name itself """
    digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
    return f"{config.get('kind', 'scenario')}-{digest[:12]}"


def scenario_seed(scenario: str, seed: int) -> int:
    """ Per-scenario seed: the first 8 bytes of sha256("<id>:<seed>") """
    digest = hashlib.sha256(f"{scenario}:{seed}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def validate_config(config: dict) -> dict:
    """
    Validates a scenario against `SCENARIO_SCHEMA` and fills in its id.

    Args:
        config (dict): Scenario document.

    Returns:
        dict: a copy of the scenario with `id` set.

    Raises:
        ConfigurationError: the document does not match its kind's schema;
    the message starts with the offending field path.
    """
    try:
        validate(instance=config, schema=SCENARIO_SCHEMA)
    except ValidationError as msg:
        path = "/".join(str(part) for part in msg.absolute_path) or "<root>"
        raise ConfigurationError(f"{path}: {msg.message}") from msg
    config = copy.deepcopy(config)
    config.setdefault("id", scenario_id(config))
    return config


def _real(value, name: str) -> float:
    if isinstance(value, Real):
        return float(value)
    folded = parse_field(str(value), ()).evaluate()
    if not isinstance(folded, Real):
        raise ConfigurationError(f'{name}: "{value}" is not a constant.')
    return float(folded)


def _synthetic_dimension(value) -> float:
    return math.inf if value == "inf" else float(value)


def _check(name: str, value, limit, passed) -> dict:
    return {"name": name, "value": value, "limit": limit, "pass": bool(passed)}


def _space_of(config: dict, bc: str | None = None) -> ModelSpace1D:
    return make_space(
        config["space"],
        length=_real(config["L"], "L") if "L" in config else None,
        f=str(config.get("f", "0")),
        bc=bc or config.get("bc"),
        n=config.get("n"),
        start=float(config.get("start", 0.0)),
    )


def _space_record(space: ModelSpace1D) -> dict:
    return {
        "kind": space.kind.value,
        "L": space.length,
        "start": space.start,
        "n": space.n_ambient,
        "bc": space.bc.value,
        "f": space.f_text,
    }


def _chart_of(config: dict) -> Chart:
    return get_chart(
        config["chart"],
        interior_offset=config.get("interior_offset", DEFAULT_INTERIOR_OFFSET),
        **config.get("chart_params", {}),
    )


def _solver_options(config: dict, seed: int) -> SolverOptions:
    options = dict(config.get("solver", {}))
    if "N" in config:
        options["N"] = config["N"]
    return SolverOptions(seed=seed, **options)


def _solve(space: ModelSpace1D, p: float, options: SolverOptions) -> tuple[Problem1D, EigenResult]:
    problem = build_problem(space, p, options.N)
    return problem, minimize_eig(problem, options)


def _solver_checks(problem: Problem1D, result: EigenResult, options: SolverOptions) -> list[dict]:
    checks = [
        _check("converged", result.iterations, options.max_iter, result.converged),
        _check("eq34", result.weak_residual, EQ34_LIMIT, result.weak_residual <= EQ34_LIMIT),
    ]
    if problem.constrained:
        checks.append(_check(
            "pmean", result.pmean_residual, PMEAN_LIMIT, result.pmean_residual <= PMEAN_LIMIT
        ))
    return checks


def _control_function(problem: Problem1D, rng: np.random.Generator) -> np.ndarray:
    """ Seeded random trig sum, far from any eigenfunction """
    a, length = problem.nodes[0], problem.nodes[-1] - problem.nodes[0]
    t = (problem.nodes - a) / length
    u = np.zeros_like(t)
    for k in range(1, 6):
        u += rng.normal() * np.sin(2.0 * math.pi * k * t) + rng.normal() * np.cos(2.0 * math.pi * k * t) / k
    return u + 0.5 * np.sin(math.pi * t) ** 3


def _run_pi_p(config: dict, seed: int) -> tuple[dict, list[dict]]:
    p = float(config["p"])
    closed_form = pi_p(p)
    quadrature = pi_p(p, mode="quadrature")
    diff = abs(closed_form - quadrature)
    outcome = {"p": p, "closed_form": closed_form, "quadrature": quadrature, "diff": diff, "residual": diff}
    return outcome, [_check("pi_p_modes", diff, 1e-10, diff <= 1e-10)]


def _run_eigen(config: dict, seed: int) -> tuple[dict, list[dict]]:
    space = _space_of(config)
    p = float(config["p"])
    options = _solver_options(config, seed)
    problem, result = _solve(space, p, options)
    outcome = {"space": _space_record(space), "p": p, **result.summary(), "residual": result.weak_residual}
    checks = _solver_checks(problem, result, options)

    if config.get("oracle"):
        reference = shooting_eig(space, p, options=ShootingOptions(**config.get("shooting", {})))
        gap = abs(result.eigenvalue - reference) / abs(reference)
        outcome["oracle"] = {"lambda": reference, "rel_gap": gap}
        checks.append(_check("oracle_gap", gap, ORACLE_TOLERANCE, gap <= ORACLE_TOLERANCE))

    if config.get("negative_control"):
        if p == 2.0:
            raise ConfigurationError(
                "negative_control: at p = 2 the energy identity holds for every u, use p ≠ 2."
            )
        control = trial_result(problem, _control_function(problem, np.random.default_rng(seed)))
        outcome["control_eq34"] = control.weak_residual
        checks.append(_check(
            "control_eq34", control.weak_residual, CONTROL_FLOOR, control.weak_residual > CONTROL_FLOOR
        ))

    if "m" in config:
        hyp = hypothesis_scan(
            space, m=_synthetic_dimension(config["m"]),
            samples=config.get("samples", DEFAULT_SAMPLES), p=p,
        )
        outcome["hypotheses"] = hyp.record()
    return outcome, checks


def _theorem_condition(theorem: Theorem, config: dict) -> str | None:
    """ The theorem's boundary condition on spaces with a boundary """
    if config["space"] in (SpaceKind.INTERVAL.value, SpaceKind.BALL.value) \
            and theorem.condition in (BoundaryCondition.DIRICHLET.value, BoundaryCondition.NEUMANN.value):
        return theorem.condition
    return config.get("bc")


def _run_bound(config: dict, seed: int) -> tuple[dict, list[dict]]:
    theorem = theorem_of(config["theorem"])
    p = float(config["p"])
    m = _synthetic_dimension(config.get("m", "inf"))
    samples = config.get("samples", DEFAULT_SAMPLES)
    tolerance = config.get("tolerance", PASS_TOLERANCE)
    outcome = {"theorem": theorem.value, "p": p}
    checks = []

    if "chart" in config:
        chart = _chart_of(config)
        hyp = hypothesis_scan(chart, str(config.get("f", "0")), m, samples, p)
        lam = float(config["lambda"])
        outcome["chart"] = chart.id
    else:
        space = _space_of(config, bc=_theorem_condition(theorem, config))
        hyp = hypothesis_scan(space, m=m, samples=samples, p=p)
        outcome["space"] = _space_record(space)
        if "lambda" in config:
            lam = float(config["lambda"])
        else:
            options = _solver_options(config, seed)
            problem, result = _solve(space, p, options)
            outcome.update(result.summary())
            outcome["residual"] = result.weak_residual
            checks.extend(_solver_checks(problem, result, options))
            lam = result.eigenvalue

    report = check_bound(theorem, hyp, lam, tol=tolerance)
    outcome["lambda"] = lam
    outcome["hypotheses"] = hyp.record()
    outcome["bound"] = report.record()
    if report.applicable:
        limit = -tolerance * max(abs(report.rhs), 1.0)
        checks.append(_check("bound_margin", report.margin, limit, report.passed))
    return outcome, checks


def _run_gradient_estimate(config: dict, seed: int) -> tuple[dict, list[dict]]:
    space = _space_of(config)
    p = float(config["p"])
    options = _solver_options(config, seed)
    problem, result = _solve(space, p, options)
    hyp = hypothesis_scan(space, m=math.inf, samples=config.get("samples", DEFAULT_SAMPLES), p=p)
    estimate = gradient_estimate_check(space, result, p, hyp)
    outcome = {
        "space": _space_record(space), "p": p, **result.summary(),
        "residual": result.weak_residual,
        "hypotheses": hyp.record(),
        "gradient": estimate,
    }
    checks = _solver_checks(problem, result, options)
    checks.append(_check("gradient_ratio", estimate["ratio"], 1.0 + GRADIENT_TOLERANCE, estimate["pass"]))
    return outcome, checks


def _coefficient(rng: np.random.Generator, scale: float = 1.0) -> str:
    return f"({rng.uniform(-scale, scale):.6f})"


def _unit_direction(rng: np.random.Generator) -> tuple[str, str]:
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return f"({math.cos(angle):.6f})", f"({math.sin(angle):.6f})"


def _planar_case(rng: np.random.Generator, x: str, y: str) -> str:
    """ a·X + b·Y + ε(X² − Y²) with (a, b) a unit vector; no critical points while |X|, |Y| ≤ 1 """
    a, b = _unit_direction(rng)
    return f"{a}*{x} + {b}*{y} + {_coefficient(rng, 0.1)}*(({x})**2 - ({y})**2)"


def _case_euclidean_plane(rng):
    u = _planar_case(rng, "x", "y") + f" + {_coefficient(rng, 0.1)}*sin(x*y)"
    f = f"{_coefficient(rng, 0.5)}*(x**2 + y**2)/2 + {_coefficient(rng, 0.5)}*y"
    return u, f


def _case_flat_torus(rng):
    k1, k2 = rng.integers(1, 4, size=2)
    u = (f"{_coefficient(rng)}*sin({k1}*x + {_coefficient(rng, math.pi)}) + "
         f"{_coefficient(rng)}*cos({k2}*y + {_coefficient(rng, math.pi)}) + "
         f"{_coefficient(rng, 0.5)}*sin(x + y)")
    f = f"{_coefficient(rng, 0.5)}*cos(x) + {_coefficient(rng, 0.5)}*sin(2*y)"
    return u, f


def _case_sphere2(rng):
    x, y, z = "sin(theta)*cos(phi)", "sin(theta)*sin(phi)", "cos(theta)"
    u = (f"{_coefficient(rng)}*{x} + {_coefficient(rng)}*{y} + {_coefficient(rng)}*{z} + "
         f"{_coefficient(rng)}*{x}*{z}")
    f = f"{_coefficient(rng, 0.5)}*{z} + {_coefficient(rng, 0.5)}*{x}*{y}"
    return u, f


def _case_hemisphere2(rng):
    # stereographic coordinates of the upper hemisphere fill the unit disk
    x = "sin(theta)*cos(phi)/(1 + cos(theta))"
    y = "sin(theta)*sin(phi)/(1 + cos(theta))"
    f = f"{_coefficient(rng, 0.5)}*cos(theta) + {_coefficient(rng, 0.5)}*sin(theta)*cos(phi)"
    return _planar_case(rng, x, y), f


def _case_disk_polar(rng):
    x, y = "r*cos(phi)", "r*sin(phi)"
    f = f"{_coefficient(rng, 0.5)}*r**2 + {_coefficient(rng, 0.5)}*r*cos(phi)"
    return _planar_case(rng, x, y), f


def _case_line1d(rng):
    slope = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
    u = f"({slope:.6f})*x + {_coefficient(rng, 0.1)}*sin(3*x)"
    f = f"{_coefficient(rng, 0.5)}*x**2"
    return u, f


def _case_circle1d(rng):
    u = f"{_coefficient(rng)}*sin(x) + {_coefficient(rng)}*cos(2*x) + {_coefficient(rng, 0.5)}*sin(3*x)"
    f = f"{_coefficient(rng, 0.5)}*cos(x)"
    return u, f


_CORPUS = {
    "euclidean_plane": _case_euclidean_plane,
    "flat_torus": _case_flat_torus,
    "sphere2": _case_sphere2,
    "hemisphere2": _case_hemisphere2,
    "disk_polar": _case_disk_polar,
    "line1d": _case_line1d,
    "circle1d": _case_circle1d,
}


def random_cases(chart_id: str, rng: np.random.Generator, count: int,
                 exponents=(2.0, 3.0, 4.0)) -> list[dict]:
    """
    Seeded corpus of smooth (u, f, p) test cases written in the expression
    grammar of `chart_id`.

    Exponents cycle through `exponents` so every value is covered. Functions on
    charts with a boundary have no critical points on the closed domain.

    Returns:
        list[dict]: `u`, `f` and `p` per case.
    """
    generator = _CORPUS[chart_id]
    cases = []
    for index in range(count):
        u, f = generator(rng)
        cases.append({"u": u, "f": f, "p": float(exponents[index % len(exponents)])})
    return cases


def _cases_of(config: dict, chart: Chart, rng: np.random.Generator, exponents) -> list[dict]:
    if "random" in config:
        spec = config["random"]
        return random_cases(chart.id, rng, spec["cases"], spec.get("p", exponents))
    return [{"u": str(config["u"]), "f": str(config.get("f", "0")), "p": float(config["p"])}]


def _sample_point(chart: Chart, u: ScalarField, box, rng: np.random.Generator) -> tuple[list[float] | None, int]:
    """
    Uniform point of `box` where |∇u|² > SAMPLE_FLOOR, drawn at most
    SAMPLE_RETRIES times.

    Returns:
        tuple: the point (None when every draw was rejected) and the number of
    rejected draws.
    """
    for rejected in range(SAMPLE_RETRIES):
        x = [rng.uniform(lo, hi) for lo, hi in box]
        calc = point_calculus(chart, x)
        du = calc.gradient(u.jet(calc.seeds))
        if calc.pairing(du, du).value > SAMPLE_FLOOR:
            return x, rejected
    return None, SAMPLE_RETRIES


def _run_bochner(config: dict, seed: int) -> tuple[dict, list[dict]]:
    chart = _chart_of(config)
    rng = np.random.default_rng(seed)
    cases = _cases_of(config, chart, rng, (2.0, 3.0, 4.0))
    points = config.get("points", DEFAULT_POINTS)
    tolerance = config.get("tolerance", BOCHNER_TOLERANCE)
    m = _synthetic_dimension(config["m"]) if "m" in config else None
    box = chart.quadrature_box()

    records = []
    for case in cases:
        u, f, p = chart.field(case["u"]), chart.field(case["f"]), case["p"]
        record = {**case, "evaluated": 0, "skipped": 0, "resampled": 0, "max_res22": 0.0, "max_res23": 0.0}
        for _ in range(points):
            x, rejected = _sample_point(chart, u, box, rng)
            record["resampled"] += rejected
            if x is None:
                record["skipped"] += 1
                continue
            residual = bochner_residual(chart, f, p, u, x)
            record["evaluated"] += 1
            record["max_res22"] = max(record["max_res22"], residual.res22)
            record["max_res23"] = max(record["max_res23"], residual.res23)
            if p == 2.0:
                lhs, rhs = classical_bochner(chart, f, u, x)
                gap = max(abs(residual.lhs22 - lhs), abs(lhs - rhs)) / max(1.0, abs(lhs), abs(rhs))
                record["reduction_gap"] = max(record.get("reduction_gap", 0.0), gap)
            if m is not None:
                trace = trace_inequality_gap(chart, f, p, m, u, x) / max(1.0, residual.scale)
                record["min_trace_gap"] = min(record.get("min_trace_gap", math.inf), trace)
        records.append(record)
        logger.debug("Bochner case %s: res22 %.3g, res23 %.3g", case, record["max_res22"], record["max_res23"])

    evaluated = sum(record["evaluated"] for record in records)
    max22 = max(record["max_res22"] for record in records)
    max23 = max(record["max_res23"] for record in records)
    outcome = {
        "chart": chart.id,
        "cases": records,
        "points": evaluated,
        "skipped": sum(record["skipped"] for record in records),
        "resampled": sum(record["resampled"] for record in records),
        "max_res22": max22,
        "max_res23": max23,
        "residual": max(max22, max23),
    }
    checks = [
        _check("evaluated_points", evaluated, 1, evaluated >= 1),
        _check("res22", max22, tolerance, max22 <= tolerance),
        _check("res23", max23, tolerance, max23 <= tolerance),
    ]
    gaps = [record["reduction_gap"] for record in records if "reduction_gap" in record]
    if gaps:
        outcome["reduction_gap"] = max(gaps)
        checks.append(_check("p2_reduction", max(gaps), tolerance, max(gaps) <= tolerance))
    traces = [record["min_trace_gap"] for record in records if "min_trace_gap" in record]
    if traces:
        outcome["min_trace_gap"] = min(traces)
        checks.append(_check("trace_inequality", min(traces), -TRACE_TOLERANCE, min(traces) >= -TRACE_TOLERANCE))
    return outcome, checks


def _run_reilly(config: dict, seed: int) -> tuple[dict, list[dict]]:
    chart = _chart_of(config)
    rng = np.random.default_rng(seed)
    cases = _cases_of(config, chart, rng, (2.0, 3.0))
    quad = QuadratureSpec(**config.get("quadrature", {}))
    levels = config.get("refinements", 1)
    tolerance = config.get("tolerance", REILLY_TOLERANCE)

    records, checks = [], []
    for index, case in enumerate(cases):
        u, f, p = chart.field(case["u"]), chart.field(case["f"]), case["p"]
        history = []
        for level in reversed(range(levels)):
            spec = QuadratureSpec(max(2, quad.nodes >> level), max(2, quad.boundary_nodes >> level))
            result = reilly_residual(chart, f, p, u, spec)
            history.append(result.residual)
        record = {
            **case,
            "interior_lhs": result.interior_lhs,
            "boundary_rhs": result.boundary_rhs,
            "outer_rhs": result.outer_rhs,
            "collar_rhs": result.collar_rhs,
            "collar_bound": result.collar_bound,
            "residual": result.residual,
            "remark_residual": result.remark_residual,
            "quad_nodes": list(result.quad_nodes),
            "refinements": history,
        }
        records.append(record)
        checks.append(_check(f"reilly[{index}]", result.residual, tolerance, result.residual <= tolerance))
        if levels > 1:
            increases = sum(
                1 for coarse, fine in itertools.pairwise(history)
                if fine > coarse and fine > MONOTONE_FLOOR
            )
            checks.append(_check(f"monotone[{index}]", increases, 0, increases == 0))
        if result.remark_residual is not None:
            checks.append(_check(
                f"remark[{index}]", result.remark_residual, REMARK_TOLERANCE,
                result.remark_residual <= REMARK_TOLERANCE,
            ))

    outcome = {
        "chart": chart.id,
        "cases": records,
        "nodes": quad.nodes,
        "residual": max(record["residual"] for record in records),
    }
    return outcome, checks


_RUNNERS = {
    "pi_p": _run_pi_p,
    "eigen": _run_eigen,
    "bound": _run_bound,
    "gradient_estimate": _run_gradient_estimate,
    "bochner": _run_bochner,
    "reilly": _run_reilly,
}


def _lookup(outcome: dict, path: str):
    value = outcome
    for part in path.split("."):
        if isinstance(value, list) and part.isdigit() and int(part) < len(value):
            value = value[int(part)]
        elif isinstance(value, dict) and part in value:
            value = value[part]
        else:
            raise ConfigurationError(f'expect/{path}: no such outcome field.')
    return value


def _expect_checks(outcome: dict, expect: dict) -> list[dict]:
    """
    Turns the scenario's `expect` block into checks.

    `value` with `abs`/`rel` compares numbers within abs + rel·|value|
    (exactly without either); booleans and strings compare for equality.
    `min` and `max` are inclusive limits.
    """
    checks = []
    for path, spec in expect.items():
        actual = _lookup(outcome, path)
        if "value" in spec:
            expected = spec["value"]
            if isinstance(expected, (bool, str)) or not isinstance(actual, Real) or isinstance(actual, bool):
                checks.append(_check(f"expect:{path}", actual, expected, actual == expected))
            else:
                limit = spec.get("abs", 0.0) + spec.get("rel", 0.0) * abs(expected)
                diff = abs(float(actual) - expected)
                checks.append(_check(f"expect:{path}", diff, limit, diff <= limit))
        numeric = isinstance(actual, Real) and not isinstance(actual, bool)
        if "min" in spec:
            checks.append(_check(f"expect:{path}>=", actual, spec["min"], numeric and actual >= spec["min"]))
        if "max" in spec:
            checks.append(_check(f"expect:{path}<=", actual, spec["max"], numeric and actual <= spec["max"]))
    return checks


def _status(checks_passed: bool, error: LabError | None) -> HTTPStatus:
    if error is not None:
        return error.status
    return HTTPStatus.OK if checks_passed else HTTPStatus.CONFLICT


def _worst(statuses) -> HTTPStatus:
    """ Aggregate status: configuration errors first, then failures, then conflicts """
    statuses = [HTTPStatus(status) for status in statuses]
    for status in (HTTPStatus.BAD_REQUEST, HTTPStatus.UNPROCESSABLE_ENTITY, HTTPStatus.CONFLICT):
        if status in statuses:
            return status
    return HTTPStatus.OK


def _run_single(config: dict, seed: int) -> dict:
    effective_seed = config.get("seed", seed)
    derived = scenario_seed(config["id"], effective_seed)
    logger.info('Running scenario "%s" (%s)', config["id"], config["kind"])
    started = time.perf_counter()
    outcome, checks, error = None, [], None
    try:
        outcome, checks = _RUNNERS[config["kind"]](config, derived)
        outcome["seed"] = derived
        checks = checks + _expect_checks(outcome, config.get("expect", {}))
    except LabError as err:
        logger.warning('Scenario "%s" failed: %s', config["id"], err)
        outcome, checks, error = None, [], err
    except Exception as err:
        logger.exception('Scenario "%s" crashed', config["id"])
        outcome, checks, error = None, [], NumericalFailureError.wrap(err)
    passed = error is None and all(check["pass"] for check in checks)
    report = {
        "schema": REPORT_SCHEMA,
        "scenario": config,
        "outcome": outcome,
        "checks": checks,
        "pass": passed,
        "status": int(_status(passed, error)),
        "timing": {"wall_ms": (time.perf_counter() - started) * 1000.0},
    }
    if error is not None:
        report["error"] = {**error.record(), "detail": {"scenario": config["id"], "kind": config["kind"]}}
    if not passed and error is None:
        failed = [check["name"] for check in checks if not check["pass"]]
        logger.warning('Scenario "%s" failed checks: %s', config["id"], ", ".join(failed))
    return jsonable(report)


def _run_cell(config: dict, seed: int) -> dict:
    return _run_single(config, seed)


def run_many(configs: list[dict], seed: int = 0, jobs: int = 1) -> list[dict]:
    """
    Runs validated scenarios, in parallel processes when `jobs` > 1.

    Reports come back in the order of `configs` whatever the execution order.
    """
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_run_cell, configs, itertools.repeat(seed)))
    return [_run_cell(config, seed) for config in configs]


def sweep_cells(config: dict) -> list[dict]:
    """
    Expands a sweep into validated scenario cells.

    Axes are taken in lexicographic name order and the Cartesian product is
    walked with the last axis fastest. `K_scale` multiplies the weight f, so
    it scales Ric_f on flat spaces.

    Raises:
        ConfigurationError: the product exceeds `max_cells`, the base is itself
    a sweep, or a cell is invalid.
    """
    base, axes = config["base"], config["axes"]
    if base.get("kind") == "sweep":
        raise ConfigurationError("base/kind: a sweep cannot sweep sweeps.")
    names = sorted(axes)
    total = math.prod(len(axes[name]) for name in names)
    cap = config.get("max_cells", DEFAULT_MAX_CELLS)
    if total > cap:
        raise ConfigurationError(f"axes: {total} cells exceed max_cells = {cap}.")
    prefix = base.get("id", config["id"])
    cells = []
    for values in itertools.product(*(axes[name] for name in names)):
        cell = copy.deepcopy(base)
        for name, value in zip(names, values):
            if name == "K_scale":
                cell["f"] = f"({value})*({cell.get('f', '0')})"
            else:
                cell[name] = value
        cell["id"] = f"{prefix}[{','.join(f'{name}={value}' for name, value in zip(names, values))}]"
        cells.append(validate_config(cell))
    return cells


def _collect(schema: str, header: dict, reports: list[dict], started: float) -> dict:
    passed = all(report["pass"] for report in reports)
    return {
        "schema": schema,
        **header,
        "reports": reports,
        "rows": [report_row(report) for report in reports],
        "pass": passed,
        "status": int(_worst(report["status"] for report in reports)),
        "timing": {"wall_ms": (time.perf_counter() - started) * 1000.0},
    }


def run_sweep(config: dict, seed: int = 0, jobs: int = 1) -> dict:
    """ Runs every cell of a sweep; rows follow the lexicographic cell order """
    started = time.perf_counter()
    cells = sweep_cells(config)
    logger.info('Sweep "%s": %d cells on %d job(s)', config["id"], len(cells), jobs)
    reports = run_many(cells, config.get("seed", seed), jobs)
    return jsonable(_collect(SWEEP_SCHEMA, {"scenario": config, "cells": len(cells)}, reports, started))


def run_scenario(config: dict, seed: int = 0, jobs: int = 1) -> dict:
    """
    Validates and runs one scenario.

    Args:
        config (dict): Scenario document.
        seed (int): Global seed; a scenario's own `seed` takes precedence.
    Per-scenario seeds are derived with `scenario_seed`.
        jobs (int): Worker processes for sweeps.

    Returns:
        dict: the report. Runtime errors of the numeric layer come back as a
    report with an `error` record and the error's status.

    Raises:
        ConfigurationError: schema violations and invalid sweeps.
    """
    config = validate_config(config)
    if config["kind"] == "sweep":
        return run_sweep(config, seed, jobs)
    return _run_single(config, seed)


def run_suite(name: str = "acceptance", seed: int = 0, jobs: int = 1) -> dict:
    """
    Runs a built-in suite of scenarios.

    Raises:
        ConfigurationError: unknown suite.
    """
    if name not in SUITES:
        raise ConfigurationError(f'Unknown suite "{name}"; expected one of {", ".join(SUITES)}.')
    started = time.perf_counter()
    configs = [validate_config(config) for config in SUITES[name]()]
    reports = run_many(configs, seed, jobs)
    return jsonable(_collect(SUITE_SCHEMA, {"suite": name, "scenarios": len(configs)}, reports, started))


def exit_code(status: int) -> int:
    """ CLI exit code of a report status: 0 pass, 1 failed check or error, 2 configuration """
    if status == HTTPStatus.OK:
        return 0
    if status == HTTPStatus.BAD_REQUEST:
        return 2
    return 1


class ScenarioModel:
    """
    The ScenarioModel class runs scenarios, sweeps and suites and stores the
    reports it produces.

    Args:
        database (DatabaseInterface): Instance of a class that implements the
    `DatabaseInterface`, used to store reports.
    """

    # Schema used for scenario validation.
    _schema = SCENARIO_SCHEMA

    def __init__(self, database: DatabaseInterface):
        self.reports = ReportModel(database)

    def validate(self, config: dict) -> tuple[dict | str, HTTPStatus]:
        """
        Validates a scenario without running it.

        Returns:
            tuple[dict | str, HTTPStatus]: the scenario with its id and 200
        (OK), or the offending field path and message with 400 (BAD_REQUEST).
        """
        try:
            return (validate_config(config), HTTPStatus.OK)
        except ConfigurationError as msg:
            return (str(msg), HTTPStatus.BAD_REQUEST)

    def run(self, config: dict, seed: int = 0, jobs: int = 1) -> tuple[dict | str, HTTPStatus]:
        """
        Runs a scenario of any kind.

        Args:
            config (dict): Scenario document.
            seed (int): Global seed.
            jobs (int): Worker processes for sweeps.

        Returns:
            tuple[dict | str, HTTPStatus]: The report with 200 (OK) when
        every check passed, 409 (CONFLICT) when a check failed, or the status
        of the error the numeric layer raised. Invalid documents give a
        message and 400 (BAD_REQUEST).
        """
        try:
            report = run_scenario(config, seed, jobs)
        except ConfigurationError as msg:
            return (str(msg), HTTPStatus.BAD_REQUEST)
        return (report, HTTPStatus(report["status"]))

    def submit(self, config: dict, seed: int = 0) -> tuple[dict | str, HTTPStatus]:
        """
        Runs a single scenario and stores its report.

        Returns:
            tuple[dict | str, HTTPStatus]: The stored record
        `{id, scenario_id, kind, pass, report}` with the report's status, or
        a message and 400 (BAD_REQUEST).
        """
        if isinstance(config, dict) and config.get("kind") == "sweep":
            return ('Sweeps are run through "/sweep".', HTTPStatus.BAD_REQUEST)
        report, status = self.run(config, seed)
        if isinstance(report, str):
            return (report, status)
        record, _ = self.reports.create(report)
        return (record, status)

    def sweep(self, config: dict, seed: int = 0, jobs: int = 1) -> tuple[dict | str, HTTPStatus]:
        """
        Runs a sweep.

        Returns:
            tuple[dict | str, HTTPStatus]: The sweep report with its rows and
        aggregate status, or a message and 400 (BAD_REQUEST).
        """
        if not isinstance(config, dict) or config.get("kind") != "sweep":
            return ('Expected a scenario of kind "sweep".', HTTPStatus.BAD_REQUEST)
        return self.run(config, seed, jobs)

    def suite(self, name: str, seed: int = 0, jobs: int = 1,
              strip_timing: bool = False) -> tuple[dict | str, HTTPStatus]:
        """
        Runs a built-in suite.

        Returns:
            tuple[dict | str, HTTPStatus]: The suite report (without wall
        times when `strip_timing` is set) and its aggregate status, or a
        message and 404 (NOT_FOUND) for an unknown suite.
        """
        if name not in SUITES:
            return (f'Suite "{name}" not found.', HTTPStatus.NOT_FOUND)
        report = run_suite(name, seed, jobs)
        if strip_timing:
            report = canonical(report)
        return (report, HTTPStatus(report["status"]))

    def pi_p(self, p) -> tuple[dict | str, HTTPStatus]:
        """
        Both evaluations of π_p.

        Returns:
            tuple[dict | str, HTTPStatus]: closed form, quadrature and their
        difference with 200 (OK), or a message and 400 (BAD_REQUEST).
        """
        try:
            p = float(p)
        except (TypeError, ValueError):
            return (f'Parameter "p" must be a number, got "{p}".', HTTPStatus.BAD_REQUEST)
        if not 1.0 < p < math.inf:
            return (f"π_p needs p > 1, got {p}.", HTTPStatus.BAD_REQUEST)
        outcome, _ = _run_pi_p({"p": p}, 0)
        del outcome["residual"]
        return (jsonable(outcome), HTTPStatus.OK)
