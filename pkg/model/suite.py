"""
Built-in scenario suites.

`acceptance` encodes the verification catalog as plain scenario documents with
`expect` blocks, so a single `suite acceptance` run checks every reference
value and tolerance.
"""

import math


def _pi_p_scenarios() -> list[dict]:
    exact = {2.0: math.pi, 3.0: 4.0 * math.pi / (3.0 * math.sqrt(3.0))}
    scenarios = []
    for p in (1.5, 2.0, 3.0, 5.0):
        scenario = {"id": f"pi_p/p={p:g}", "kind": "pi_p", "p": p}
        if p in exact:
            scenario["expect"] = {"closed_form": {"value": exact[p], "abs": 1e-12}}
        scenarios.append(scenario)
    return scenarios


def _exact_eigen_scenarios() -> list[dict]:
    scenarios = [
        {
            "id": f"exact/interval-{bc}", "kind": "eigen", "space": "interval", "L": "pi",
            "f": "0", "p": 2, "bc": bc, "N": 1024,
            "expect": {"lambda": {"value": 1.0, "abs": 1e-5}},
        }
        for bc in ("dirichlet", "neumann")
    ]
    scenarios.append({
        "id": "exact/circle", "kind": "eigen", "space": "circle", "L": "2*pi",
        "f": "0", "p": 2, "N": 1024,
        "expect": {"lambda": {"value": 1.0, "abs": 1e-5}},
    })
    return scenarios


def _oracle_scenarios() -> list[dict]:
    scenarios = []
    for p in (2, 3):
        for bc in ("dirichlet", "neumann"):
            scenarios.append({
                "id": f"oracle/interval-{bc}/p={p}", "kind": "eigen", "space": "interval",
                "L": 1, "f": "0", "p": p, "bc": bc, "N": 1024, "oracle": True,
            })
        for n in (2, 3):
            scenarios.append({
                "id": f"oracle/sphere{n}/p={p}", "kind": "eigen", "space": "sphere",
                "n": n, "f": "0", "p": p, "N": 1024, "oracle": True,
            })
    return scenarios


def _lichnerowicz_scenarios() -> list[dict]:
    scenarios = []
    for n, abs_tol in ((2, 1e-4), (3, 1e-3)):
        scenarios.append({
            "id": f"T1.1/sphere{n}/sharp", "kind": "bound", "theorem": "T1.1-closed",
            "space": "sphere", "n": n, "f": "0", "p": 2, "m": n, "N": 4096,
            "tolerance": 1e-5,
            "expect": {
                "lambda": {"value": float(n), "abs": abs_tol},
                "bound.rhs": {"value": float(n), "abs": 1e-12},
                "bound.margin": {"min": -1e-3, "max": 1e-3},
            },
        })
    for n in (2, 3):
        for p in (2.5, 3.0):
            scenarios.append({
                "id": f"T1.1/sphere{n}/p={p:g}", "kind": "bound", "theorem": "T1.1-closed",
                "space": "sphere", "n": n, "f": "0", "p": p, "m": n, "N": 4096,
                "expect": {
                    "bound.rhs": {"value": n ** (p / 2.0) / (p - 1.0) ** (p - 1.0), "rel": 1e-12},
                    "bound.margin": {"min": 1e-9},
                },
            })
    scenarios.append({
        "id": "T1.1/gaussian-interval", "kind": "bound", "theorem": "T1.1-neumann",
        "space": "interval", "start": -3, "L": 6, "f": "x**2/2", "p": 2, "m": "inf",
        "N": 1024,
        "expect": {
            "bound.applicable": {"value": True},
            "hypotheses.II_min": {"value": 0.0, "abs": 0.0},
            "hypotheses.K_min": {"value": 1.0, "abs": 1e-12},
            "bound.rhs": {"value": 1.0, "abs": 1e-12},
            "bound.margin": {"min": 0.0},
        },
    })
    return scenarios


def _liyau_scenarios() -> list[dict]:
    return [
        {
            "id": f"T1.3/interval/p={p}/L={length}", "kind": "bound", "theorem": "T1.3-neumann",
            "space": "interval", "L": length, "f": "0", "p": p, "m": "inf", "N": 1024,
            "expect": {"bound.ratio": {"value": 2.0 ** p, "rel": 0.01}},
        }
        for p in (2, 3)
        for length in (1, 2)
    ]


def _negative_curvature_scenarios() -> list[dict]:
    scenarios = []
    for p in (2, 3):
        c_pm = 2.0 / (3.0 + 1.0) * (p / (p - 1.0)) ** (p - 1.0) * math.exp(-p)
        scenarios.append({
            "id": f"T1.5/circle-sin/p={p}", "kind": "bound", "theorem": "T1.5",
            "space": "circle", "L": "2*pi", "f": "sin(x)", "p": p, "m": 3,
            "samples": 100000, "N": 1024,
            "expect": {
                "bound.applicable": {"value": True},
                "hypotheses.K_min": {"value": -1.0, "abs": 1e-6},
                "bound.C_pm": {"value": c_pm, "rel": 1e-12},
                "bound.ratio": {"min": 10.0},
            },
        })
    return scenarios


def _bochner_scenarios() -> list[dict]:
    scenarios = [
        {
            "id": f"bochner/{chart}/random", "kind": "bochner", "chart": chart,
            "random": {"cases": 12, "p": [2, 3, 4]}, "points": 10,
        }
        for chart in ("flat_torus", "sphere2")
    ]
    scenarios.append({
        "id": "bochner/euclidean_plane/linear", "kind": "bochner", "chart": "euclidean_plane",
        "u": "x + 2*y", "f": "0", "p": 3, "points": 10,
        "expect": {"max_res22": {"value": 0.0, "abs": 1e-14}, "max_res23": {"value": 0.0, "abs": 1e-14}},
    })
    return scenarios


def _reilly_scenarios() -> list[dict]:
    exact_zero = {
        "cases.0.interior_lhs": {"value": 0.0, "abs": 1e-8},
        "cases.0.outer_rhs": {"value": 0.0, "abs": 1e-8},
    }
    return [
        {
            "id": "reilly/disk/linear", "kind": "reilly", "chart": "disk_polar",
            "u": "r*cos(phi)", "f": "0", "p": 2, "expect": exact_zero,
        },
        {
            "id": "reilly/hemisphere/height", "kind": "reilly", "chart": "hemisphere2",
            "interior_offset": 1e-5, "u": "cos(theta)", "f": "0", "p": 2, "expect": exact_zero,
        },
        {
            "id": "reilly/disk/random", "kind": "reilly", "chart": "disk_polar",
            "random": {"cases": 3, "p": [2, 3]}, "refinements": 3,
            "quadrature": {"nodes": 64, "boundary_nodes": 256},
        },
        {
            "id": "reilly/hemisphere/random", "kind": "reilly", "chart": "hemisphere2",
            "interior_offset": 1e-5, "random": {"cases": 2, "p": [2, 3]}, "refinements": 3,
            "quadrature": {"nodes": 64, "boundary_nodes": 256},
        },
    ]


def _gradient_scenarios() -> list[dict]:
    scenarios = []
    for p in (2, 3):
        scenario = {
            "id": f"gradient/circle/p={p}", "kind": "gradient_estimate", "space": "circle",
            "L": "2*pi", "f": "0", "p": p, "N": 1024,
        }
        if p == 2:
            scenario["expect"] = {"gradient.ratio": {"value": 1.0, "abs": 1e-3}}
        scenarios.append(scenario)
    return scenarios


def _control_scenarios() -> list[dict]:
    return [{
        "id": "control/interval-neumann/p=3", "kind": "eigen", "space": "interval", "L": 1,
        "f": "0", "p": 3, "bc": "neumann", "N": 512, "negative_control": True,
    }]


def acceptance_scenarios() -> list[dict]:
    """ Every acceptance check as a scenario document, in catalog order """
    return [
        *_pi_p_scenarios(),
        *_exact_eigen_scenarios(),
        *_oracle_scenarios(),
        *_lichnerowicz_scenarios(),
        *_liyau_scenarios(),
        *_negative_curvature_scenarios(),
        *_bochner_scenarios(),
        *_reilly_scenarios(),
        *_gradient_scenarios(),
        *_control_scenarios(),
    ]


SUITES = {"acceptance": acceptance_scenarios}
