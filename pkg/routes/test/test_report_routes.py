from http import HTTPStatus
import uuid

from flask.testing import FlaskClient
from pytest_mock import MockType
import pytest

from routes import api
from routes.report import report_model

@pytest.fixture()
def client(mocker) -> FlaskClient:
    """
    Mocker of a client of our API.
    With this we can simulate requests to different api routes.
    """
    api.testing = True
    return api.test_client()

def test_get_report(client: FlaskClient, mocker: MockType):
    """
    For this test we want to know that whatever response we get from
    `report_model.get_all()`, `report_model.get_by_id()`, or
    `report_model.get_by_kind()` methods, they are replicated for the caller
    of GET on `/report` route, without any parameter, with `id` parameter, and
    with `kind` parameter, respectively.
    """
    get_all_mock_return = (b"mock response for get_all", 200)
    get_by_id_mock_return = (b"mock response for get_by_id", 404)
    get_by_kind_mock_return = (b"mock response for get_by_kind", 200)

    mocker.patch.object(report_model, "get_all", return_value=get_all_mock_return)
    mocker.patch.object(report_model, "get_by_id", return_value=get_by_id_mock_return)
    mocker.patch.object(report_model, "get_by_kind", return_value=get_by_kind_mock_return)

    res = client.get("/report")
    assert res.data == get_all_mock_return[0]
    assert res.status_code == get_all_mock_return[1]

    mock_id = str(uuid.uuid1())
    res = client.get(f"/report?id={mock_id}")
    assert res.data == get_by_id_mock_return[0]
    assert res.status_code == get_by_id_mock_return[1]

    res = client.get("/report?kind=bound")
    assert res.data == get_by_kind_mock_return[0]
    assert res.status_code == get_by_kind_mock_return[1]

    res = client.get(f"/report?id={mock_id}&kind=bound")
    assert res.status_code == HTTPStatus.BAD_REQUEST

def test_delete_report(client: FlaskClient, mocker: MockType):
    """
    For this test we want to know that we enforce `id` parameter to be part of
    the request, and whatever response we get from `report_model.delete()`
    method, it is replicated for the caller of DELETE on `/report` route.
    """
    mock_return = (b"mock response for delete", 200)
    mocker.patch.object(report_model, "delete", return_value=mock_return)

    res = client.delete("/report")
    assert res.status_code == HTTPStatus.BAD_REQUEST

    res = client.delete("/report?id=mock-id")
    assert res.data == mock_return[0]
    assert res.status_code == mock_return[1]
