import json
import math

import numpy as np
import pytest
from scipy import sparse

from fluxmol import caching
from fluxmol import consts
from fluxmol import excep
from fluxmol import utils
from fluxmol.datatypes import FluxPoint


def test_flux_units():
    assert utils.flux_to_radians(0.5, "two-pi") == pytest.approx(math.pi)
    assert utils.flux_from_radians(math.pi, "two-pi") == pytest.approx(0.5)
    assert utils.flux_to_radians(1.25) == 1.25
    with pytest.raises(excep.InvalidParameterException):
        utils.flux_to_radians(1.0, "degrees")


def test_hermiticity_dense_and_sparse():
    m = np.array([[1.0, 2.0], [2.0, 3.0]])
    assert utils.hermiticity_error(m) == 0.0
    assert utils.is_hermitian(sparse.csr_matrix(m))
    assert not utils.is_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert utils.hermiticity_error(np.zeros((3, 3))) == 0.0


def test_to_jsonable():
    doc = utils.to_jsonable({"a": np.float64(1.5), "b": np.arange(3), "c": 1 + 2j, "d": FluxPoint(1.0, 2.0), 3: (1, 2)})
    assert doc == {"a": 1.5, "b": [0, 1, 2], "c": {"re": 1.0, "im": 2.0}, "d": {"phi_c_rad": 1.0, "phi_d_rad": 2.0}, "3": [1, 2]}


def test_json_schema_round_trip(tmp_path):
    path = str(tmp_path / "doc.json")
    utils.write_json(path, {"value": 1})
    with open(path) as fd:
        assert list(json.load(fd))[0] == "schema"
    assert utils.read_json(path)["value"] == 1


def test_json_rejects_other_schema(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps({"schema": "fluxmol/v9", "value": 1}))
    with pytest.raises(excep.SchemaException):
        utils.read_json(str(path))
    assert utils.read_json(str(path), require_schema = False)["value"] == 1


def test_json_errors(tmp_path):
    with pytest.raises(excep.ConfigException):
        utils.read_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(excep.ConfigException):
        utils.read_json(str(bad))


def test_csv_round_trip(tmp_path):
    path = str(tmp_path / "rows.csv")
    utils.write_csv(path, ["a", "b", "c"], [[1, 0.1, None], [2, 1.0 / 3.0, "x"]])
    rows = utils.read_csv(path)
    assert rows[0] == {"a": "1", "b": "0.1", "c": None}
    assert float(rows[1]["b"]) == pytest.approx(1.0 / 3.0, rel = 1e-14)
    with pytest.raises(excep.InvalidParameterException):
        utils.write_csv(path, ["a"], [[1, 2]])


def test_csv_is_byte_identical(tmp_path):
    rows = [[0.1 * n, math.sin(n)] for n in range(10)]
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    utils.write_csv(a, ["x", "y"], rows)
    utils.write_csv(b, ["x", "y"], rows)
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


def test_parallel_map_keeps_order():
    assert utils.parallel_map(lambda x: x * x, range(6), threads = 3) == [0, 1, 4, 9, 16, 25]
    assert utils.parallel_map(lambda x: -x, [1, 2]) == [-1, -2]


def test_cached_function():
    calls = []

    @caching.cached("test")
    def square(n):
        calls.append(n)
        return np.arange(n) ** 2

    first = square(4)
    second = square(4)
    assert first is second
    assert calls == [4]
    assert square.cache().hits == 1
    with pytest.raises(ValueError):
        first[0] = 7
    caching.clear_caches()
    square(4)
    assert calls == [4, 4]


def test_cache_evicts_least_recently_used():
    calls = []

    @caching.cached("bounded", maxsize = 2)
    def cube(n):
        calls.append(n)
        return np.full(2, n ** 3)

    cube.cache().clear()
    cube(1)
    cube(2)
    cube(1)
    cube(3)
    assert len(cube.cache()) == 2
    assert cube.cache().evictions == 1
    cube(1)
    assert calls == [1, 2, 3]
    cube(2)
    assert calls == [1, 2, 3, 2]
    with pytest.raises(ValueError):
        caching.Cache("empty", maxsize = 0)
