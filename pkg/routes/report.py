"""
This file contains the entry points for the '/report' routes, which read and
delete the reports stored by POST '/scenario'.
"""

from http import HTTPStatus

from flask import request
from markupsafe import escape

from model.report import ReportModel

from . import api, db

report_model = ReportModel(db)

@api.get('/report')
def get_report():
    """
    Entry point for GET '/report' route.
    """
    report_id = request.args.get('id')
    kind = request.args.get('kind')
    if report_id and kind:
        return (
            'You cannot set "id" and "kind" parameters together.',
            HTTPStatus.BAD_REQUEST
        )
    if report_id:
        return report_model.get_by_id(escape(report_id))
    if kind:
        return report_model.get_by_kind(escape(kind))
    return report_model.get_all()

@api.delete('/report')
def delete_report():
    """
    Entry point for DELETE '/report' route.
    """
    report_id = request.args.get('id')
    if report_id:
        return report_model.delete(escape(report_id))
    return ('Parameter "id" is missing.', HTTPStatus.BAD_REQUEST)
