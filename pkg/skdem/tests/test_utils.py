import os

import pytest

import numpy as np
from numpy.testing import assert_array_equal
from numpy.testing import assert_equal

from skdem import dump
from skdem import load
from skdem.bank import ElementBank
from skdem.dac import run_dac
from skdem.utils import atomic_write
from skdem.utils import check_random_state
from skdem.utils import read_csv
from skdem.utils import write_csv


@pytest.mark.fast_test
def test_dump_and_load(tmp_path):
    out = run_dac([3, 4, 3, 4, 7, 0], "dwa", ElementBank([1.01] * 7))
    path = str(tmp_path / "dac.pkl")
    dump(out, path)
    loaded = load(path)
    assert_array_equal(loaded.v, out.v)
    assert_array_equal(loaded.pointer_trace, [1, 4, 1, 4, 1, 1])

    dump(out, path, compress=9)
    assert_array_equal(load(path).masks, out.masks)


@pytest.mark.fast_test
def test_atomic_write(tmp_path):
    path = tmp_path / "sub" / "file.txt"
    with atomic_write(path) as f:
        f.write("first")
    assert path.read_text() == "first"

    with pytest.raises(RuntimeError):
        with atomic_write(path) as f:
            f.write("second")
            raise RuntimeError("interrupted")
    assert path.read_text() == "first"
    assert os.listdir(tmp_path / "sub") == ["file.txt"]


@pytest.mark.fast_test
def test_csv_roundtrip(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, [[0, 1, 2], [0.1, 0.25, -2.5]], ["n", "x"],
              ["%d", "%.17g"])
    assert path.read_text().splitlines() == ["n,x", "0,0.10000000000000001",
                                             "1,0.25",
                                             "2,-2.5"]
    columns = read_csv(path)
    assert_array_equal(columns["n"], [0, 1, 2])
    assert_array_equal(columns["x"], [0.1, 0.25, -2.5])
    with pytest.raises(ValueError):
        write_csv(path, [[0, 1], [0.5]], ["n", "x"], ["%d", "%g"])


@pytest.mark.fast_test
def test_check_random_state():
    a = check_random_state(2 ** 64 - 1).randint(0, 100, size=5)
    b = check_random_state(2 ** 64 - 1).randint(0, 100, size=5)
    assert_array_equal(a, b)
    rng = np.random.RandomState(0)
    assert check_random_state(rng) is rng
    assert isinstance(check_random_state(None), np.random.RandomState)
    assert_equal(check_random_state(np.int64(3)).rand(),
                 check_random_state(3).rand())
    with pytest.raises(ValueError):
        check_random_state(-1)
