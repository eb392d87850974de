"""
Reports: JSON/CSV emission and the report store.
"""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import tempfile
import uuid
from enum import Enum
from http import HTTPStatus

import numpy as np
from jsonschema import validate, ValidationError

from data.database import DatabaseInterface, TableEnum
from .errors import OutputError

CSV_COLUMNS = (
    "scenario_id", "kind", "space", "p", "m", "K_min", "D", "bc", "lambda",
    "rhs", "margin", "pass", "residual", "nodes", "seed", "wall_ms",
)

TIMING_KEYS = ("timing", "wall_ms")


class ReportFormat(Enum):
    """ Represents an output format of reports """
    JSON = "json"
    CSV = "csv"


def jsonable(obj):
    """
    Plain-JSON copy of a report: numpy scalars become Python numbers, tuples
    become lists and non-finite floats become null.
    """
    if isinstance(obj, dict):
        return {str(key): jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, Enum):
        return obj.value
    return obj


def canonical(obj):
    """ Copy without wall-clock timings, for byte-for-byte comparisons """
    if isinstance(obj, dict):
        return {key: canonical(value) for key, value in obj.items() if key not in TIMING_KEYS}
    if isinstance(obj, list):
        return [canonical(value) for value in obj]
    return obj


def report_row(report: dict) -> dict:
    """
    Flattens a scenario report into one CSV row keyed by `CSV_COLUMNS`.
    Fields a kind does not produce are None.
    """
    scenario = report.get("scenario") or {}
    outcome = report.get("outcome") or {}
    hypotheses = outcome.get("hypotheses") or {}
    bound = outcome.get("bound") or {}
    space = outcome.get("space") or {}
    return {
        "scenario_id": scenario.get("id"),
        "kind": scenario.get("kind"),
        "space": scenario.get("space", scenario.get("chart")),
        "p": outcome.get("p", scenario.get("p")),
        "m": hypotheses.get("m", scenario.get("m")),
        "K_min": hypotheses.get("K_min"),
        "D": hypotheses.get("D"),
        "bc": space.get("bc", scenario.get("bc")),
        "lambda": outcome.get("lambda"),
        "rhs": bound.get("rhs"),
        "margin": bound.get("margin"),
        "pass": report.get("pass"),
        "residual": outcome.get("residual"),
        "nodes": outcome.get("nodes"),
        "seed": outcome.get("seed"),
        "wall_ms": (report.get("timing") or {}).get("wall_ms"),
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def to_csv(document: dict) -> str:
    """ Rows of a sweep or suite report, or the single row of a scenario report """
    rows = document["rows"] if "rows" in document else [report_row(document)]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in CSV_COLUMNS])
    return buffer.getvalue()


def to_json(document: dict) -> str:
    return json.dumps(jsonable(document), indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """
    Writes `text` to a temporary file next to `path` and renames it into
    place, so readers never see a partial report.

    Raises:
        OutputError: the directory is missing or the write fails.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise OutputError(f'Output directory "{directory}" does not exist.')
    temporary = None
    try:
        with tempfile.NamedTemporaryFile(
            "w", dir=directory, suffix=".tmp", delete=False, encoding="utf-8", newline=""
        ) as handle:
            temporary = handle.name
            handle.write(text)
        os.replace(temporary, path)
    except OSError as err:
        if temporary is not None:
            with contextlib.suppress(OSError):
                os.unlink(temporary)
        raise OutputError(f'Cannot write "{path}": {err}') from err


def emit(document: dict, fmt: ReportFormat | str = ReportFormat.JSON, path: str | None = None,
         strip_timing: bool = False) -> str:
    """
    Serializes a report, and writes it when a path is given.

    Args:
        document (dict): Scenario, sweep or suite report.
        fmt (ReportFormat | str): "json" (full nested report) or "csv" (the
    fixed column set, floats with 17 significant digits).
        path (str | None): Destination file.
        strip_timing (bool): Drop wall times.

    Returns:
        str: the serialized report.

    Raises:
        OutputError: unwritable destination.
    """
    fmt = ReportFormat(fmt)
    if strip_timing:
        document = canonical(document)
    text = to_json(document) if fmt is ReportFormat.JSON else to_csv(document)
    if path is not None:
        write_atomic(path, text)
    return text


class ReportModel:
    """
    The ReportModel class stores scenario reports and retrieves them by id or
    scenario kind.

    Args:
        database (DatabaseInterface): Instance of a class that implements the
    `DatabaseInterface`. This parameter is used to interact with the database
    for performing operations like reading, creating and deleting data.
    """

    # Schema used for report record validation.
    _schema = {
        "type": "object",
        "properties": {
            "id": {
                "type": "string",
                "format": "uuid"
            },
            "scenario_id": {
                "type": "string"
            },
            "kind": {
                "type": "string"
            },
            "pass": {
                "type": "boolean"
            },
            "report": {
                "type": "object",
                "required": ["schema", "scenario", "checks", "pass", "status"]
            }
        },
        "required": ["id", "scenario_id", "kind", "pass", "report"],
        "additionalProperties": False
    }

    def __init__(self, database: DatabaseInterface):
        self.db = database

    def get_all(self) -> tuple[list[dict], HTTPStatus]:
        """
        Retrieve all records from the REPORTS table with an HTTP status code of
        200 (OK).
        """
        return (self.db.read(TableEnum.REPORTS, lambda record: True), HTTPStatus.OK)

    def get_by_id(self, report_id: str) -> tuple[list[dict], HTTPStatus]:
        """
        Retrieves a stored report by its UUID.

        The HTTP status code options are:
            - 404 (UUID not found)
            - 200 (OK)

        Args:
            report_id (str): UUID of the record to look for.
        Returns:
            tuple[list[dict], HTTPStatus]: the matching records and the
        corresponding HTTP status code.
        """
        result = self.db.read(
            TableEnum.REPORTS,
            lambda record: record["id"] == report_id
        )
        return (result, HTTPStatus.OK if result else HTTPStatus.NOT_FOUND)

    def get_by_kind(self, kind: str) -> tuple[list[dict], HTTPStatus]:
        """
        Retrieves every stored report of a scenario kind. An unknown kind
        simply matches nothing.
        """
        return (
            self.db.read(TableEnum.REPORTS, lambda record: record["kind"] == kind),
            HTTPStatus.OK
        )

    def create(self, report: dict) -> tuple[dict | str, HTTPStatus]:
        """
        Wraps a scenario report into a record with a generated UUID and stores
        it.

        The HTTP status code options are:
            - 201 (Created)
            - 400 (Bad Request)

        Args:
            report (dict): Report produced by the scenario engine.

        Returns:
            tuple[dict | str, HTTPStatus]: the stored record, or a message in
        case the report is malformed.
        """
        if not isinstance(report, dict) or not isinstance(report.get("scenario"), dict):
            return ("A report must carry its scenario.", HTTPStatus.BAD_REQUEST)

        scenario = report["scenario"]
        record = {
            "id": str(uuid.uuid1()),
            "scenario_id": scenario.get("id"),
            "kind": scenario.get("kind"),
            "pass": report.get("pass"),
            "report": jsonable(report),
        }
        try:
            validate(instance=record, schema=self._schema)
        except ValidationError as msg:
            return (msg.message, HTTPStatus.BAD_REQUEST)
        self.db.create(TableEnum.REPORTS, record)
        return (record, HTTPStatus.CREATED)

    def delete(self, report_id: str) -> tuple[str, HTTPStatus]:
        """
        Deletes a stored report.

        The HTTP status code options are:
            - 200 (OK)
            - 404 (UUID not found)
        """
        found = self.db.read(
            TableEnum.REPORTS,
            lambda record: record["id"] == report_id
        )
        if len(found) == 0:
            return (
                f'Report with "id": "{report_id}" not found.',
                HTTPStatus.NOT_FOUND
            )

        self.db.delete(TableEnum.REPORTS, lambda record: record["id"] == report_id)
        return (f'Report "{report_id}" deleted.', HTTPStatus.OK)
