import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from http import HTTPStatus

import pytest

from mfscp.cli import run_solve
from mfscp.formats import parse
from mfscp.service import SolveService, make_server

from conftest import DATA

BODY = (DATA / "appendix_row.txt").read_bytes()


@pytest.fixture
def server():
    srv = make_server(SolveService(size_cap=11, max_concurrent=2), port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


def request(url, body=None):
    req = urllib.request.Request(url, data=body, method="POST" if body is not None else "GET")
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_health(server):
    status, payload = request(server + "/health")
    assert status == 200
    assert payload["status"] == "ok" and payload["size_cap"] == 11


def test_solve_with_columns(server):
    status, payload = request(server + "/solve?format=row&columns=1", BODY)
    assert status == 200
    assert payload["cost"] == 5.0 and payload["feasible"]
    assert payload["columns"] in ([1, 4], [2, 3])
    assert (payload["M"], payload["N"], payload["nnz"]) == (4, 5, 11)
    assert payload["density"] == pytest.approx(0.55)


def test_matches_cli(server):
    for seed in range(3):
        _, payload = request(server + f"/solve?trials=2&seed={seed}", BODY)
        sol = run_solve(parse(BODY, "row"), 2, seed)
        assert payload["cost"] == sol.cost


def test_size_cap_boundary():
    assert SolveService(size_cap=11).handle_solve(BODY)[0] == HTTPStatus.OK
    status, payload = SolveService(size_cap=10).handle_solve(BODY)
    assert status == HTTPStatus.REQUEST_ENTITY_TOO_LARGE
    assert "B = 10" in payload["message"]


def test_size_cap_over_http(server):
    body = b"1 12\n" + b"1 " * 12 + b"\n12 " + " ".join(str(j) for j in range(1, 13)).encode()
    status, payload = request(server + "/solve", body)
    assert status == 413 and payload["error"] == "SizeCap"


def test_body_limit():
    status, _ = SolveService(max_body_bytes=10).handle_solve(BODY)
    assert status == HTTPStatus.REQUEST_ENTITY_TOO_LARGE


@pytest.mark.parametrize("query, body", [
    ("", b"garbage"),
    ("?format=row", b"1 2\n1 1\n"),
    ("?format=xml", BODY),
    ("?trials=0", BODY),
    ("?trials=11", BODY),
    ("?seed=abc", BODY),
])
def test_bad_requests(server, query, body):
    status, payload = request(server + "/solve" + query, body)
    assert status == 400
    assert payload["schema"] == 1 and payload["error"]


def test_not_found(server):
    assert request(server + "/nope")[0] == 404
    assert request(server + "/nope", b"x")[0] == 404


def test_malformed_body_never_solves(monkeypatch):
    import mfscp.cli
    monkeypatch.setattr(mfscp.cli, "run_solve", lambda *a, **k: pytest.fail("solver ran"))
    assert SolveService().handle_solve(b"4 5 1 2")[0] == HTTPStatus.BAD_REQUEST


def test_exhaustion_is_500(monkeypatch):
    import mfscp.cli
    from mfscp.errors import ResourceExhausted

    def boom(*args, **kwargs):
        raise ResourceExhausted("caps hit")
    monkeypatch.setattr(mfscp.cli, "run_solve", boom)
    assert SolveService().handle_solve(BODY)[0] == HTTPStatus.INTERNAL_SERVER_ERROR


def test_concurrent_identical_requests(server):
    url = server + "/solve?trials=3&seed=5&columns=1"
    with ThreadPoolExecutor(6) as pool:
        results = list(pool.map(lambda _: request(url, BODY), range(6)))
    payloads = [p for _, p in results]
    for p in payloads:
        p.pop("wall_seconds")
    assert all(p == payloads[0] for p in payloads)
