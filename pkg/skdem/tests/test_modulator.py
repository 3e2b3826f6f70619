import warnings

import pytest

import numpy as np
from numpy.testing import assert_allclose
from numpy.testing import assert_array_equal
from numpy.testing import assert_equal

from skdem.exceptions import InstabilityError
from skdem.exceptions import QuantizerOverloadWarning
from skdem.exceptions import SimulationError
from skdem.modulator import InputSpec
from skdem.modulator import ModulatorConfig
from skdem.modulator import SdmState
from skdem.modulator import generate_input
from skdem.modulator import quantize
from skdem.modulator import read_codes_csv
from skdem.modulator import run_modulator
from skdem.modulator import sdm_step
from skdem.modulator import write_codes_csv
from skdem.spectral import estimate_psd

FS = 12.5e6
F_COHERENT = 30 * FS / 65536


def dc_input(offset, n_samples=4096):
    return InputSpec(-np.inf, 1000., FS, n_samples, dc_offset=offset)


@pytest.mark.fast_test
def test_config_levels():
    config = ModulatorConfig()
    assert_equal(config.quantizer_levels, 8)
    assert_equal(config.max_code, 7)
    assert_equal(config.full_scale, 3.5)
    assert_equal(config.no_overload_amplitude, 2.5)
    assert_array_equal(config.level([0, 3, 4, 7]), [-3.5, -0.5, 0.5, 3.5])
    assert_equal(ModulatorConfig(bits=4, delta=0.5).full_scale, 3.75)


@pytest.mark.fast_test
@pytest.mark.parametrize("kwargs", [{"bits": 0}, {"bits": 2.5},
                                    {"delta": 0.}, {"delta": -1.},
                                    {"instability_bound": 0.}])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        ModulatorConfig(**kwargs)


@pytest.mark.fast_test
def test_invalid_input_spec():
    with pytest.raises(ValueError):
        InputSpec(-50., 0., FS, 16)
    with pytest.raises(ValueError):
        InputSpec(-50., FS / 2, FS, 16)
    with pytest.raises(ValueError):
        InputSpec(-50., 1e3, FS, 0)
    with pytest.raises(ValueError):
        InputSpec(np.nan, 1e3, FS, 16)


@pytest.mark.fast_test
def test_quantizer_thresholds():
    config = ModulatorConfig()
    assert_equal(quantize(0., config), 4)
    assert_equal(quantize(-1e-12, config), 3)
    assert_equal(quantize(0.999, config), 4)
    assert_equal(quantize(1., config), 5)
    assert_equal(quantize(-4., config), 0)
    assert_equal(quantize(-1e6, config), 0)
    assert_equal(quantize(3.2, config), 7)


@pytest.mark.fast_test
def test_generate_input():
    config = ModulatorConfig()
    spec = InputSpec(0., FS / 16, FS, 64, dc_offset=0.25)
    x = generate_input(spec, config)
    assert_allclose(np.max(x), 3.5 + 0.25)
    assert_allclose(np.mean(x), 0.25, atol=1e-12)
    spec = InputSpec(-20., 5720., FS, 8)
    assert_allclose(generate_input(spec)[3],
                    0.35 * np.sin(2 * np.pi * 5720. / FS * 3))


@pytest.mark.fast_test
def test_zero_input_idles_between_middle_codes():
    codes, levels = run_modulator(dc_input(0.))
    assert_array_equal(codes[:8], [4, 3, 3, 4, 4, 3, 3, 4])
    assert set(np.unique(codes)) == {3, 4}
    assert_array_equal(levels, codes - 3.5)


@pytest.mark.fast_test
@pytest.mark.parametrize("offset, code", [(0.5, 4), (-0.5, 3)])
def test_half_step_input_locks_code(offset, code):
    codes, _ = run_modulator(dc_input(offset))
    assert np.all(codes == code)


@pytest.mark.fast_test
@pytest.mark.parametrize("offset", [-2.2, -0.3, 0.1, 1.7])
def test_output_tracks_dc_input(offset):
    _, levels = run_modulator(dc_input(offset))
    assert abs(np.mean(levels) - offset) < 1e-2


@pytest.mark.fast_test
def test_sdm_step_updates_state_in_place():
    config = ModulatorConfig()
    state = SdmState()
    code, level, new_state = sdm_step(state, 0.7, config)
    assert new_state is state
    assert_equal((code, level), (4, 0.5))
    assert_allclose((state.integ1, state.integ2, state.feedback),
                    (0.7, 0.7, 0.5))


@pytest.mark.fast_test
def test_instability_is_detected():
    with pytest.raises(InstabilityError) as excinfo:
        run_modulator(dc_input(10.))
    err = excinfo.value
    assert isinstance(err, SimulationError)
    assert err.stage == "modulator"
    assert err.cycle is not None and 0 < err.cycle < 4096
    assert abs(err.state.integ2) > 100 or abs(err.state.integ1) > 100


@pytest.mark.fast_test
def test_overload_warning():
    config = ModulatorConfig(instability_bound=1e6)
    with pytest.warns(QuantizerOverloadWarning):
        run_modulator(dc_input(3.6, n_samples=200), config)


@pytest.mark.fast_test
def test_no_overload_for_small_inputs():
    spec = InputSpec(-50., F_COHERENT, FS, 8192)
    with warnings.catch_warnings():
        warnings.simplefilter("error", QuantizerOverloadWarning)
        codes, _ = run_modulator(spec)
    assert codes.min() >= 2 and codes.max() <= 5


@pytest.mark.fast_test
def test_noise_shaping_slope():
    # second-order shaping: 40 dB per decade well below f_S / 2
    spec = InputSpec(-10., F_COHERENT, FS, 65536 + 2048)
    _, levels = run_modulator(spec)
    psd = estimate_psd(levels[2048:], FS, "hann", 65536)
    low = np.mean(psd.bin_power[100:121])
    high = np.mean(psd.bin_power[1000:1211])
    assert abs(10 * np.log10(high / low) - 40) < 8


@pytest.mark.fast_test
def test_codes_csv_roundtrip(tmp_path):
    codes, levels = run_modulator(InputSpec(-10., F_COHERENT, FS, 512))
    path = tmp_path / "codes.csv"
    write_codes_csv(path, codes, levels)
    assert path.read_text().splitlines()[0] == "n,code,level"
    codes2, levels2 = read_codes_csv(path)
    assert_array_equal(codes2, codes)
    assert_array_equal(levels2, levels)
