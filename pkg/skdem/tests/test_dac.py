import pytest

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal
from numpy.testing import assert_equal

from skdem.bank import MEASURED_GAINS
from skdem.bank import ElementBank
from skdem.dac import dac_convert
from skdem.dac import element_error
from skdem.dac import run_dac
from skdem.dac import write_dac_csv
from skdem.exceptions import SelectionError
from skdem.selection import AddedSequenceSpec
from skdem.selection import DataWeightedAveraging
from skdem.selection import SelectionMask
from skdem.utils import check_random_state
from skdem.utils import read_csv


@pytest.fixture
def codes():
    return check_random_state(0).randint(0, 8, size=300)


@pytest.mark.fast_test
def test_dac_convert_single_cycle():
    bank = ElementBank([1.1, 0.9, 1.0, 1.2])
    mask = SelectionMask([1, 0, 0, 1])
    assert_allclose(dac_convert(mask, bank), 1.1 + 1.2 - 2.)
    assert_allclose(dac_convert([1, 0, 0, 1], bank, delta=0.5),
                    0.5 * (2.3 - 2.))
    assert_allclose(element_error(mask, bank), 0.3)
    assert_allclose(dac_convert(mask, bank) -
                    dac_convert(mask, ElementBank.ideal(4)),
                    element_error(mask, bank))
    with pytest.raises(ValueError):
        dac_convert([1, 0, 1], bank)
    with pytest.raises(ValueError):
        element_error([1, 0, 1], bank)


@pytest.mark.fast_test
@pytest.mark.parametrize("strategy, modulus", [("thermometer", 7),
                                               ("dwa", 7), ("sadwa", 8)])
def test_ideal_bank_output_depends_on_count_only(codes, strategy, modulus):
    added = AddedSequenceSpec("seeded_random") if strategy == "sadwa" \
        else None
    out = run_dac(codes, strategy, ElementBank.ideal(modulus), added=added)
    assert_array_equal(out.e, 0.)
    assert_allclose(out.v, codes + out.added - modulus / 2.,
                    atol=1e-12)
    assert_allclose(out.compensated(), out.ideal(), atol=1e-12)


@pytest.mark.fast_test
def test_output_formulas(codes):
    bank = ElementBank(MEASURED_GAINS[:7])
    out = run_dac(codes, "dwa", bank, delta=2.)
    assert_equal(len(out), codes.size)
    assert_equal(out.modulus, 7)
    assert_allclose(out.v, 2. * (out.masks @ bank.gains - 3.5))
    assert_allclose(out.e, 2. * (out.masks @ (bank.gains - 1.)),
                    atol=1e-12)
    assert_allclose(out.v - out.e, 2. * (codes - 3.5))
    assert_array_equal(out.ideal(), 2. * (codes - 3.5))
    assert_array_equal(out.compensated(), out.v)
    n = 17
    assert_allclose(out.v[n], dac_convert(out.masks[n], bank, 2.))
    assert_allclose(out.e[n], element_error(out.masks[n], bank, 2.),
                    atol=1e-12)


@pytest.mark.fast_test
def test_sadwa_compensation(codes):
    bank = ElementBank(MEASURED_GAINS)
    out = run_dac(codes, "sadwa", bank, added=AddedSequenceSpec(
        "constant_one"))
    assert_array_equal(out.added, 1)
    assert_allclose(out.compensated(), out.v - 1.)
    assert_allclose(out.compensated() - out.e, codes - 4., atol=1e-12)


@pytest.mark.fast_test
def test_outputs_are_read_only(codes):
    out = run_dac(codes, "dwa", ElementBank.ideal(7))
    for a in (out.v, out.e, out.pointer_trace, out.masks):
        with pytest.raises(ValueError):
            a[0] = 0


@pytest.mark.fast_test
def test_run_dac_accepts_selector_instance(codes):
    selector = DataWeightedAveraging(7, initial_pointer=5)
    out = run_dac(codes, selector, ElementBank.ideal(7))
    assert_equal(out.pointer_trace[0], 5)


@pytest.mark.fast_test
def test_run_dac_rejects_invalid_setup(codes):
    with pytest.raises(ValueError):
        run_dac(codes, "dwa", [1.] * 7)
    with pytest.raises(ValueError):
        run_dac(codes, DataWeightedAveraging(8), ElementBank.ideal(7))
    with pytest.raises(ValueError):
        run_dac(codes, "dwa", ElementBank.ideal(7),
                added=AddedSequenceSpec("constant_one"))
    with pytest.raises(SelectionError):
        run_dac([3, 9, 1], "dwa", ElementBank.ideal(7))


@pytest.mark.fast_test
def test_write_dac_csv(tmp_path, codes):
    out = run_dac(codes, "dwa", ElementBank(MEASURED_GAINS[:7]))
    path = tmp_path / "dac.csv"
    write_dac_csv(path, out)
    assert path.read_text().splitlines()[0] == "n,code,s,tau,v,e"
    columns = read_csv(path)
    assert_array_equal(columns["code"], codes)
    assert_array_equal(columns["tau"], out.pointer_trace)
    assert_array_equal(columns["v"], out.v)
    assert_array_equal(columns["e"], out.e)
