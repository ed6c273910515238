"""
Tests for report writers, grid parsing and the experiment config schema
"""
import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import ConfigError
from experiment_config import ExperimentConfig, SymbolSpec, load_experiment_config
from reports.report_io import (
    file_manifest,
    matrix_rows,
    read_matrix_binary,
    to_jsonable,
    write_csv,
    write_json,
    write_matrix_binary,
)
from utils.grid_utils import dyadic_radii, parse_dims, parse_pair, parse_radii


def test_to_jsonable():
    assert to_jsonable(math.inf) == "empty"
    assert to_jsonable(1 + 2j) == [1.0, 2.0]
    assert str(to_jsonable(-0.0)) == "0.0"
    assert to_jsonable({"a": np.array([1, 2]), 3: (np.float64(0.5), np.bool_(True))}) == {"a": [1, 2], "3": [0.5, True]}
    with pytest.raises(ValueError):
        to_jsonable(float("nan"))


def test_write_json_is_sorted_and_complete(tmp_path):
    path = write_json(tmp_path / "r.json", {"b": 1, "a": math.inf})
    text = path.read_text(encoding="utf-8")
    assert text == '{\n  "a": "empty",\n  "b": 1\n}\n'
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_write_csv_precision(tmp_path):
    path = write_csv(tmp_path / "t.csv", [{"x": 0.1, "n": 3}], ["n", "x"])
    assert path.read_bytes() == b"n,x\n3,0.10000000000000001\n"


def test_matrix_rows_skip_zeros():
    rows = matrix_rows(np.array([[0.0, 2.0 - 1j], [1e-16, 0.0]]))
    assert rows == [{"row": 0, "col": 1, "re": 2.0, "im": -1.0}]


def test_matrix_binary_layout(tmp_path):
    matrix = np.array([[1.0, 2j, 3.0]])
    path = write_matrix_binary(tmp_path / "m.bin", matrix)
    data = path.read_bytes()
    assert data[:16] == (1).to_bytes(8, "little") + (3).to_bytes(8, "little")
    assert len(data) == 16 + 3 * 16
    np.testing.assert_array_equal(read_matrix_binary(path), matrix)


def test_file_manifest(tmp_path):
    path = write_json(tmp_path / "sub" / "x.json", {"k": 1})
    manifest = file_manifest([path], tmp_path)
    assert manifest[0]["file"] == "sub/x.json"
    assert len(manifest[0]["sha256"]) == 64


def test_grid_parsing():
    assert dyadic_radii(3) == [0.5, 0.75, 0.875]
    assert parse_dims("8..20:4") == [8, 12, 16, 20]
    assert parse_dims("2..4") == [2, 3, 4]
    assert parse_dims("8,12,16") == [8, 12, 16]
    assert parse_dims(None) is None
    assert parse_pair("2,3") == (2, 3)
    assert parse_radii("") == []
    with pytest.raises(ValueError):
        parse_pair("1,2,3")
    with pytest.raises(ValueError):
        parse_dims("2..8:0")


def test_experiment_config_defaults():
    config = ExperimentConfig()
    assert config.scenario == "prop1"
    assert config.rank_degrees() == (2, 3)
    assert config.rank_dims() == [8, 12, 16, 20]
    assert len(config.probe_radii()) == config.radii_levels
    tridisc = ExperimentConfig(n_vars=3)
    assert tridisc.rank_degrees() == (1, 1)
    assert tridisc.rank_dims() == [3, 4, 5, 6]


@pytest.mark.parametrize(
    "data",
    [
        {"unknown": 1},
        {"schema_version": 2},
        {"dims": [8, 8, 12]},
        {"radii": []},
        {"tolerances": {"tol_c": 0}},
        {"phi": {"zeros": [[1.0, 0.0]]}},
    ],
)
def test_experiment_config_rejects(data):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(data)


def test_symbol_spec_to_blaschke():
    theta = SymbolSpec(zeros=[[0.5, 0.0], [0.0, 0.0]], origin_multiplicity=1).to_blaschke("theta")
    assert theta.degree == 3
    assert theta.origin_order == 2


def test_load_experiment_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"scenario": "exm1", "tolerances": {"tol_s": 0.5}}), encoding="utf-8")
    config = load_experiment_config(str(path), {"angular_samples": 64, "tolerances": {"tol_s": None, "tol_c": 0.2}})
    assert config.scenario == "exm1"
    assert config.angular_samples == 64
    assert config.tolerances.tol_s == 0.5
    assert config.tolerances.tol_c == 0.2
    with pytest.raises(ConfigError):
        load_experiment_config(str(tmp_path / "missing.json"))
