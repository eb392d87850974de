from http import HTTPStatus
import csv
import io
import json
import math
import shutil

import numpy as np
import pytest

from data.database import PotatoDatabase
from model.errors import OutputError
from model.report import (
    CSV_COLUMNS, ReportModel, canonical, emit, jsonable, report_row, to_csv,
)

@pytest.fixture
def database(tmp_path):
    """
    Creates a PotatoDB instance based on a temporary copy of the json files
    under `model/test/data` folder.
    """
    shutil.copyfile("model/test/data/reports.json", tmp_path / "reports.json")
    return PotatoDatabase(tmp_path)

@pytest.fixture
def model(database):
    """
    Creates a ReportModel instance based on the temporary PotatoDB created
    before.
    """
    return ReportModel(database)

@pytest.fixture
def report():
    return {
        "schema": "plap-lab/report/v1",
        "scenario": {"kind": "eigen", "id": "interval-pi", "space": "interval", "p": 2},
        "outcome": {
            "space": {"kind": "interval", "bc": "dirichlet"},
            "p": np.float64(2.0),
            "lambda": 1.0000125,
            "residual": 3e-15,
            "nodes": np.int64(1025),
            "seed": 42,
            "hypotheses": {"K_min": 0.0, "m": "inf", "D": math.pi},
        },
        "checks": [],
        "pass": True,
        "status": 200,
        "timing": {"wall_ms": 12.5},
    }


def test_get_all(model):
    all_reports, code = model.get_all()
    assert code == HTTPStatus.OK
    assert len(all_reports) == 2

def test_get_by_id(model):
    """
    Test the `get_by_id` model method in 2 scenarios:
        - `report_id` exists
        - `report_id` does not exist
    """
    ([record], code) = model.get_by_id("5f0c7a2e-8d5b-11ef-9a61-0242ac120002")
    assert code == HTTPStatus.OK
    assert record["scenario_id"] == "pi_p-3"
    assert record["report"]["status"] == 200

    ([], code) = model.get_by_id("wrong_id")
    assert code == HTTPStatus.NOT_FOUND

def test_get_by_kind(model):
    ([record], code) = model.get_by_kind("bound")
    assert code == HTTPStatus.OK
    assert record["report"]["outcome"]["bound"]["theorem"] == "T1.3-neumann"

    ([], code) = model.get_by_kind("reilly")
    assert code == HTTPStatus.OK

def test_create(model, report):
    """
    Test the `create` model method in 2 scenarios:
        - a report from the engine is stored with a new UUID
        - a report without its scenario is rejected
    """
    record, code = model.create(report)
    assert code == HTTPStatus.CREATED
    assert record["scenario_id"] == "interval-pi"
    assert record["kind"] == "eigen"
    assert record["report"]["outcome"]["nodes"] == 1025
    ([stored], _) = model.get_by_id(record["id"])
    assert stored == record

    message, code = model.create({"pass": True})
    assert code == HTTPStatus.BAD_REQUEST
    assert "scenario" in message

    del report["status"]
    message, code = model.create(report)
    assert code == HTTPStatus.BAD_REQUEST
    assert "status" in message

def test_delete(model):
    """
    Test the `delete` model method in 2 scenarios:
        - `report_id` exists
        - `report_id` does not exist
    """
    report_id = "6a91d3f4-8d5b-11ef-9a61-0242ac120002"
    _, code = model.delete(report_id)
    assert code == HTTPStatus.OK
    ([], code) = model.get_by_id(report_id)
    assert code == HTTPStatus.NOT_FOUND

    _, code = model.delete(report_id)
    assert code == HTTPStatus.NOT_FOUND


def test_jsonable():
    """
    numpy scalars become Python numbers, non-finite floats become null.
    """
    converted = jsonable({"a": np.float64(0.5), "b": (1, np.int32(2)), "c": math.inf,
                          "d": np.array([1.0, math.nan]), "e": np.bool_(True)})
    assert converted == {"a": 0.5, "b": [1, 2], "c": None, "d": [1.0, None], "e": True}
    assert type(converted["b"][1]) is int
    json.dumps(converted, allow_nan=False)

def test_canonical_drops_timings(report):
    document = {"reports": [report], "timing": {"wall_ms": 3.0}}
    stripped = canonical(document)
    assert "timing" not in stripped
    assert "timing" not in stripped["reports"][0]
    assert stripped["reports"][0]["outcome"] == report["outcome"]

def test_report_row(report):
    row = report_row(report)
    assert tuple(row) == CSV_COLUMNS
    assert row["scenario_id"] == "interval-pi"
    assert row["bc"] == "dirichlet"
    assert row["m"] == "inf"
    assert row["rhs"] is None
    assert row["wall_ms"] == 12.5

def test_csv_layout(report):
    """
    Header plus one row per report; floats carry 17 significant digits.
    """
    text = to_csv({"rows": [report_row(report), report_row(report)]})
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 3
    values = dict(zip(rows[0], rows[1]))
    assert float(values["lambda"]) == 1.0000125
    assert values["D"] == format(math.pi, ".17g")
    assert values["pass"] == "true"
    assert values["rhs"] == ""

    single = to_csv(jsonable(report))
    assert len(single.splitlines()) == 2

def test_emit_writes_atomically(tmp_path, report):
    path = tmp_path / "report.json"
    text = emit(jsonable(report), "json", str(path), strip_timing=True)
    assert path.read_text(encoding="utf-8") == text
    loaded = json.loads(text)
    assert loaded["outcome"]["lambda"] == 1.0000125
    assert "timing" not in loaded
    assert list(tmp_path.iterdir()) == [path]

    csv_path = tmp_path / "report.csv"
    emit(jsonable(report), "csv", str(csv_path))
    assert csv_path.read_text(encoding="utf-8").startswith(",".join(CSV_COLUMNS))

def test_emit_to_a_missing_directory(tmp_path, report):
    with pytest.raises(OutputError):
        emit(report, "json", str(tmp_path / "missing" / "report.json"))
    with pytest.raises(ValueError):
        emit(report, "yaml")

def test_json_reports_reparse_to_the_same_text(report):
    """
    Floats are written with their shortest repr, so parsing and emitting again
    reproduces the report byte for byte, non-finite values included.
    """
    report["outcome"]["eq34"] = math.nan
    report["outcome"]["tiny"] = np.float64(1.0) / 3.0 * 1e-300
    text = emit(jsonable(report))
    assert emit(json.loads(text)) == text
    assert json.loads(text)["outcome"]["eq34"] is None
