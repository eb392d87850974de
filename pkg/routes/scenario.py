"""
This file contains the entry points for the '/scenario', '/sweep', '/suite'
and '/pi-p' routes. The configuration documents they accept are described in
`RUN_COMMANDS.md`.
"""

from http import HTTPStatus

from flask import request
from markupsafe import escape

from model.scenario import ScenarioModel

from . import api, db

scenario_model = ScenarioModel(db)


def _integer_arg(name: str, default: int) -> int | None:
    value = request.args.get(name)
    if value is None:
        return default
    return int(value) if value.isdigit() else None


@api.post('/scenario')
def run_scenario():
    """
    Entry point for POST '/scenario' route.
    """
    seed = _integer_arg('seed', 0)
    if seed is None:
        return ('Parameter "seed" must be a non-negative integer.', HTTPStatus.BAD_REQUEST)
    config = request.get_json()
    api.logger.info("Scenario submitted: %s", config.get("id") if isinstance(config, dict) else None)
    return scenario_model.submit(config, seed)

@api.post('/sweep')
def run_sweep():
    """
    Entry point for POST '/sweep' route.
    """
    seed = _integer_arg('seed', 0)
    jobs = _integer_arg('jobs', 1)
    if seed is None or not jobs:
        return (
            'Parameters "seed" and "jobs" must be non-negative integers, "jobs" at least 1.',
            HTTPStatus.BAD_REQUEST
        )
    return scenario_model.sweep(request.get_json(), seed, jobs)

@api.get('/suite/<name>')
def run_suite(name):
    """
    Entry point for GET '/suite/<name>' route.
    """
    seed = _integer_arg('seed', 0)
    if seed is None:
        return ('Parameter "seed" must be a non-negative integer.', HTTPStatus.BAD_REQUEST)
    strip_timing = 'canonical' in request.args.keys()
    return scenario_model.suite(str(escape(name)), seed, strip_timing=strip_timing)

@api.get('/pi-p')
def get_pi_p():
    """
    Entry point for GET '/pi-p' route.
    """
    p = request.args.get('p')
    if p is None:
        return ('Parameter "p" is missing.', HTTPStatus.BAD_REQUEST)
    return scenario_model.pi_p(str(escape(p)))
