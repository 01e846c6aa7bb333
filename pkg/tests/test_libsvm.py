import os

import numpy as np
import pytest

from krrlab import Dataset, DataFormatError, export_libsvm, parse_libsvm

FIXTURE = os.path.join(os.path.dirname(__file__), "data", "sample200.libsvm")


def test_basic_line(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("1 1:0.5 3:2.0\n")
    data = parse_libsvm(str(p), 3)
    assert data.responses[0] == 1.0
    assert np.array_equal(data.features, [[0.5, 0.0, 2.0]])


def test_blank_lines_skipped(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("\n1 1:1\n\n-2 2:3.5\n\n")
    data = parse_libsvm(str(p), 2)
    assert data.n == 2
    assert np.array_equal(data.responses, [1.0, -2.0])


def test_non_increasing_index(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("1 3:1 2:1\n")
    with pytest.raises(DataFormatError, match="non-increasing index at line 1"):
        parse_libsvm(str(p), 3)


def test_duplicate_index(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("1 2:1 2:1\n")
    with pytest.raises(DataFormatError, match="non-increasing"):
        parse_libsvm(str(p), 3)


def test_index_out_of_range(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("0 1:1\n-1 5:2\n")
    with pytest.raises(DataFormatError, match="line 2"):
        parse_libsvm(str(p), 4)


def test_malformed_token(tmp_path):
    p = tmp_path / "toy.libsvm"
    p.write_text("1 1:\n")
    with pytest.raises(DataFormatError, match="malformed token"):
        parse_libsvm(str(p), 2)
    p.write_text("x 1:1\n")
    with pytest.raises(DataFormatError, match="bad label"):
        parse_libsvm(str(p), 2)


def test_round_trip_exact(tmp_path):
    rng = np.random.default_rng(5)
    X = rng.standard_normal((40, 9))
    X[rng.random((40, 9)) < 0.3] = 0.0
    y = rng.standard_normal(40) * 1e3
    data = Dataset(X, y)
    path = str(tmp_path / "rt.libsvm")
    export_libsvm(data, path)
    back = parse_libsvm(path, 9)
    assert np.array_equal(back.features, data.features)
    assert np.array_equal(back.responses, data.responses)


def test_fixture_parses(tmp_path):
    data = parse_libsvm(FIXTURE, 24)
    assert data.n == 200 and data.d == 24
    out = str(tmp_path / "copy.libsvm")
    export_libsvm(data, out)
    again = parse_libsvm(out, 24)
    assert np.array_equal(again.features, data.features)
    assert np.array_equal(again.responses, data.responses)
