import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

import maxcorr as mx
from maxcorr.errors import NotNormalized, ValidationError
from maxcorr.io import (
    dumps_canonical,
    marginals_from_json_obj,
    marginals_to_json_obj,
    read_dataset_csv,
    read_generic_csv,
    read_joint_csv,
    read_marginals_json,
    read_moments_json,
    write_dataset_csv,
    write_joint_csv,
    write_marginals_json,
)


class TestJointCsv:
    def test_round_trip(self, tmp_path):
        joint = mx.nonadditive_fixture()
        path = tmp_path / "joint.csv"
        write_joint_csv(joint, path)
        loaded = read_joint_csv(path)
        assert loaded.spec == joint.spec
        assert_allclose(loaded.prob, joint.prob, atol=0)

    def test_rows_in_any_order_and_missing_atoms(self, tmp_path):
        path = tmp_path / "joint.csv"
        path.write_text("x1,y,prob\n1,1,0.5\n0,0,0.5\n")
        loaded = read_joint_csv(path)
        assert_allclose(loaded.prob, mx.copy_fixture().prob, atol=0)

    def test_alphabet_inferred_from_labels(self, tmp_path):
        path = tmp_path / "joint.csv"
        path.write_text("x1,x2,y,prob\n2,0,0,0.5\n0,1,1,0.5\n")
        loaded = read_joint_csv(path)
        assert loaded.spec.m == 3

    def test_explicit_alphabet_override(self, tmp_path):
        path = tmp_path / "joint.csv"
        path.write_text("x1,y,prob\n0,0,0.5\n1,1,0.5\n")
        assert read_joint_csv(path, m=4).spec.m == 4

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "joint.csv"
        path.write_text("a,b,c\n0,0,1\n")
        with pytest.raises(ValidationError):
            read_joint_csv(path)

    def test_unnormalized_rejected(self, tmp_path):
        path = tmp_path / "joint.csv"
        path.write_text("x1,y,prob\n0,0,0.5\n1,1,0.4\n")
        with pytest.raises(NotNormalized):
            read_joint_csv(path)


class TestDatasetCsv:
    def test_round_trip(self, tmp_path):
        data = mx.sample_dataset(mx.nonadditive_fixture(), n=37, seed=0)
        path = tmp_path / "data.csv"
        write_dataset_csv(data, path)
        loaded = read_dataset_csv(path)
        assert np.array_equal(loaded.rows, data.rows)

    def test_bad_label_rejected(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("x1,y\n0,7\n")
        with pytest.raises(ValidationError):
            read_dataset_csv(path)


class TestGenericCsv:
    def test_reads_cells(self, tmp_path):
        path = tmp_path / "generic.csv"
        path.write_text("x,y,prob\n0,0,0.25\n0,1,0.25\n1,0,0.25\n2,1,0.25\n")
        joint = read_generic_csv(path)
        assert joint.nx == 3 and joint.ny == 2
        assert joint.prob[2, 1] == 0.25
        assert joint.prob[1, 1] == 0.0

    def test_duplicate_cell_rejected(self, tmp_path):
        path = tmp_path / "generic.csv"
        path.write_text("x,y,prob\n0,0,0.5\n0,0,0.5\n")
        with pytest.raises(ValidationError):
            read_generic_csv(path)


class TestMarginalsJson:
    def test_round_trip(self, tmp_path):
        marginals = mx.pairwise_from_joint(mx.random_joint(mx.AlphabetSpec(3, 2), seed=9))
        path = tmp_path / "marginals.json"
        write_marginals_json(marginals, path)
        loaded = read_marginals_json(path)
        assert loaded.spec == marginals.spec
        assert_allclose(loaded.xy, marginals.xy, atol=0)
        for key in marginals.xx:
            assert_allclose(loaded.xx[key], marginals.xx[key], atol=0)
        assert mx.validate_marginals(loaded).ok

    def test_keys_are_one_based_upper_triangle(self):
        marginals = mx.pairwise_from_joint(mx.random_joint(mx.AlphabetSpec(3, 2), seed=1))
        obj = marginals_to_json_obj(marginals)
        assert set(obj["xx"]) == {"1,2", "1,3", "2,3"}
        assert set(obj["xy"]) == {"1", "2", "3"}
        tab = np.asarray(obj["xx"]["1,2"]).reshape(2, 2)
        assert_allclose(tab, marginals.xx[(0, 1)], atol=0)

    def test_missing_table_rejected(self):
        marginals = mx.pairwise_from_joint(mx.random_joint(mx.AlphabetSpec(2, 2), seed=2))
        obj = marginals_to_json_obj(marginals)
        del obj["xx"]["1,2"]
        with pytest.raises(ValidationError):
            marginals_from_json_obj(obj)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "marginals.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            read_marginals_json(path)


class TestMomentsJson:
    def test_reads_mu_and_lambda(self, tmp_path):
        path = tmp_path / "moments.json"
        path.write_text(json.dumps({"mu": [0, 0], "lambda": [1, 0.5, 0.5, 1]}))
        moments = read_moments_json(path)
        assert moments.p == 1
        assert moments.sigma[0, 1] == 0.5

    def test_wrong_lambda_size_rejected(self, tmp_path):
        path = tmp_path / "moments.json"
        path.write_text(json.dumps({"mu": [0, 0], "lambda": [1, 0, 0]}))
        with pytest.raises(ValidationError):
            read_moments_json(path)


class TestCanonicalJson:
    def test_sorted_keys_and_17_digit_floats(self):
        text = dumps_canonical({"b": 0.6, "a": [1, 2.0, None, True]})
        assert text == '{"a":[1,2,null,true],"b":0.59999999999999998}'

    def test_nan_becomes_null(self):
        assert dumps_canonical([float("nan")]) == "[null]"

    def test_round_trips_through_json_loads(self):
        value = {"x": [0.1, 1e-300, 123456789.123456789], "y": "s"}
        text = dumps_canonical(value)
        parsed = json.loads(text)
        assert parsed["x"] == value["x"]

    def test_deterministic(self):
        obj = {"z": np.array([0.3, 0.7]), "a": {"nested": 1.5}}
        assert dumps_canonical(obj) == dumps_canonical(obj)

    def test_rejects_infinity(self):
        with pytest.raises(ValidationError):
            dumps_canonical([float("inf")])
