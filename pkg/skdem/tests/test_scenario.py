import os

import pytest
import yaml

import numpy as np
from numpy.testing import assert_array_equal
from numpy.testing import assert_equal

from skdem.bank import MEASURED_GAINS
from skdem.exceptions import ConfigurationError
from skdem.exceptions import SimulationError
from skdem.scenario import OUTPUT_DIR_ENV
from skdem.scenario import Scenario
from skdem.scenario import check_expectations
from skdem.scenario import default_output_dir
from skdem.scenario import list_presets
from skdem.scenario import load_preset
from skdem.scenario import run_scenario
from skdem.scenario import run_sweep
from skdem.scenario import simulate
from skdem.spectral import sndr_deficit
from skdem.spectral import sweep_dynamic_range

BUNDLE_CSVS = ("codes.csv", "selection.csv", "dac.csv", "psd.csv")


def small_config(**sections):
    """A short-record scenario that simulates in a fraction of a second."""
    config = {
        "name": "small",
        "input": {"amplitude_dbfs": -40., "freq_hz": 20000.},
        "selection": {"strategy": "dwa"},
        "bank": {"preset": "measured-bank-7"},
        "analysis": {"record_length": 8192, "n_fft": 8192,
                     "transient_discard": 512},
    }
    config.update(sections)
    return config


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


@pytest.mark.fast_test
def test_presets_load_and_validate():
    catalog = list_presets()
    names = [name for name, _ in catalog]
    assert len(names) == 11
    assert names == sorted(names)
    for name, description in catalog:
        assert description
        scenario = load_preset(name)
        assert scenario.name == name
        assert scenario.bank.count == scenario.modulus
        assert_equal(scenario.input.n_samples, 65536 + 2048)


@pytest.mark.fast_test
def test_preset_contents():
    top = load_preset("fig2-top")
    assert top.strategy == "dwa"
    assert_equal(top.modulus, 7)
    assert_array_equal(top.bank.gains, MEASURED_GAINS[:7])
    assert_equal(top.band_edge_hz, 48828.125)
    assert_equal(round(top.signal_freq_hz, 2), 5722.05)

    mid = load_preset("fig2-mid")
    assert mid.strategy == "sadwa"
    assert_equal(mid.modulus, 8)
    assert mid.added.kind == "constant_zero"
    assert_equal(load_preset("fig2-bottom").input.dc_offset, 0.5)
    assert_equal(load_preset("fig4-c-offset").input.dc_offset, -0.5)
    assert load_preset("fig4-c").added.kind == "constant_one"
    assert load_preset("fig4-a").strategy == "thermometer"
    assert_equal(load_preset("fig4-b").sweep_amplitudes[-1], -1.)


@pytest.mark.fast_test
def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        load_preset("fig9")
    with pytest.raises(ConfigurationError):
        load_preset(os.path.join("..", "scenario"))


@pytest.mark.fast_test
def test_dict_roundtrip():
    scenario = Scenario.from_dict(small_config())
    config = scenario.to_dict()
    assert config["bank"] == {"preset": "measured-bank-7"}
    assert Scenario.from_dict(config).to_dict() == config

    resolved = scenario.to_dict(resolve_bank=True)
    assert resolved["bank"]["gains"] == list(MEASURED_GAINS[:7])
    assert resolved["bank"]["source"] == "measured-bank-7"
    again = Scenario.from_dict(resolved)
    assert_array_equal(again.bank.gains, scenario.bank.gains)


@pytest.mark.fast_test
def test_yaml_roundtrip(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(yaml.safe_dump(small_config()))
    scenario = Scenario.from_yaml(str(path))
    assert scenario.name == "small"
    assert_equal(scenario.analysis.n_fft, 8192)

    path.write_text("name: [unclosed\n")
    with pytest.raises(ConfigurationError):
        Scenario.from_yaml(str(path))


@pytest.mark.fast_test
def test_bank_path_is_relative_to_scenario(tmp_path):
    (tmp_path / "gains.txt").write_text("\n".join(
        str(g) for g in MEASURED_GAINS[:7]) + "\n")
    path = tmp_path / "scenario.yaml"
    path.write_text(yaml.safe_dump(small_config(bank={"path": "gains.txt"})))
    scenario = Scenario.from_yaml(str(path))
    assert_array_equal(scenario.bank.gains, MEASURED_GAINS[:7])


@pytest.mark.fast_test
def test_random_bank_defaults_to_scenario_seed():
    a = Scenario.from_dict(small_config(seed=3, bank={"sigma": 0.0116}))
    b = Scenario.from_dict(small_config(seed=3, bank={"sigma": 0.0116,
                                                      "seed": 3}))
    c = Scenario.from_dict(small_config(seed=4, bank={"sigma": 0.0116}))
    assert a.bank == b.bank
    assert a.bank != c.bank
    assert a.to_dict()["bank"]["seed"] == 3


@pytest.mark.fast_test
@pytest.mark.parametrize("overrides", [
    {"bogus": 1},
    {"input": {"amplitude": -40.}},
    {"input": [1, 2]},
    {"seed": -1},
    {"seed": "zero"},
    {"analysis": {"window": "blackman"}},
    {"analysis": {"n_fft": 1000}},
    {"selection": {"strategy": "random"}},
    {"selection": {"strategy": "sadwa"}},
    {"selection": {"strategy": "dwa", "initial_pointer": 8}},
    {"selection": {"strategy": "sadwa", "added_sequence": "noise"}},
    {"bank": {}},
    {"bank": {"preset": "measured-bank-7", "sigma": 0.01}},
    {"bank": {"preset": "measured-bank-7", "seed": 1}},
    {"bank": {"gains": [1., -1., 1., 1., 1., 1., 1.]}},
    {"bank": {"sigma": -0.01}},
    {"input": {"freq_hz": 60000.}},
    {"input": {"freq_hz": 1000.}},
    {"sweep": {"amplitudes_dbfs": [-20., -40.]}},
])
def test_invalid_scenarios(overrides):
    with pytest.raises(ConfigurationError):
        Scenario.from_dict(small_config(**overrides))


@pytest.mark.fast_test
def test_scenario_needs_a_name():
    config = small_config()
    del config["name"]
    with pytest.raises(ConfigurationError):
        Scenario.from_dict(config)
    with pytest.raises(ConfigurationError):
        Scenario.from_dict(small_config(name="a/b"))
    with pytest.raises(ConfigurationError):
        Scenario.from_dict(["name", "x"])


@pytest.mark.fast_test
def test_with_amplitude_leaves_original_alone():
    scenario = Scenario.from_dict(small_config())
    louder = scenario.with_amplitude(-10.)
    assert_equal(louder.input.amplitude_dbfs, -10.)
    assert_equal(scenario.input.amplitude_dbfs, -40.)
    assert_equal(louder.input.n_samples, scenario.input.n_samples)


@pytest.mark.fast_test
def test_default_output_dir(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, "/tmp/skdem-out")
    assert default_output_dir() == "/tmp/skdem-out"
    monkeypatch.delenv(OUTPUT_DIR_ENV)
    assert default_output_dir() == "results"


@pytest.mark.fast_test
def test_simulate_ideal_thermometer_matches_reference():
    scenario = Scenario.from_dict(small_config(
        selection={"strategy": "thermometer"}, bank={"preset": "ideal"}))
    result = simulate(scenario)
    assert_equal(result.sndr.sndr_db, result.ideal_sndr.sndr_db)
    assert_equal(result.tones.count, 0)
    assert_equal(result.pointer_period, 1)
    assert_array_equal(result.dac.e, 0.)
    report = result.to_report()
    assert_equal(report["sndr_loss_db"], 0.)
    assert "expectations" not in report


@pytest.mark.fast_test
def test_simulate_reports_unstable_modulator():
    scenario = Scenario.from_dict(small_config(
        input={"amplitude_dbfs": 0., "freq_hz": 20000., "dc_offset": 10.}))
    with pytest.raises(SimulationError) as excinfo:
        simulate(scenario)
    assert excinfo.value.stage == "modulator"


@pytest.mark.fast_test
def test_expectations():
    scenario = Scenario.from_dict(small_config(
        expect={"sndr_db_min": 1000., "sndr_db_max": 1000., "tones_max": 50}))
    result = simulate(scenario)
    checks = check_expectations(result)
    assert checks == {"sndr_db_min": False, "sndr_db_max": True,
                      "tones_max": True}
    assert result.to_report()["expectations"] == checks


@pytest.mark.fast_test
def test_run_scenario_bundle_is_reproducible(tmp_path):
    scenario = Scenario.from_dict(small_config(
        selection={"strategy": "sadwa", "added_sequence": "seeded_random",
                   "added_seed": 7},
        bank={"sigma": 0.0116, "seed": 5}))
    first = run_scenario(scenario, str(tmp_path / "first"), plot=True)
    directory = tmp_path / "first" / "small"
    for name in BUNDLE_CSVS + ("report.yaml", "manifest.yaml", "psd.svg"):
        assert (directory / name).is_file()
        assert first.files[name] == str(directory / name)

    with open(directory / "report.yaml") as f:
        report = yaml.safe_load(f)
    assert report["name"] == "small"
    assert report["sndr"]["signal_bin"] == 13
    assert report["sndr"]["sndr_db"] == pytest.approx(first.sndr.sndr_db)

    replay = Scenario.from_yaml(str(directory / "manifest.yaml"))
    assert replay.added.kind == "seeded_random"
    assert_equal(replay.added.seed, 7)
    run_scenario(replay, str(tmp_path / "second"), plot=False)
    for name in BUNDLE_CSVS:
        assert read_bytes(directory / name) == \
            read_bytes(tmp_path / "second" / "small" / name)
    assert not (tmp_path / "second" / "small" / "psd.svg").exists()


@pytest.mark.fast_test
def test_run_scenario_honours_output_env(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
    scenario = Scenario.from_dict(small_config())
    run_scenario(scenario, plot=False)
    assert (tmp_path / "env" / "small" / "dac.csv").is_file()


@pytest.mark.fast_test
@pytest.mark.parametrize("n_jobs", [1, 2])
def test_sweep_ideal_converter(tmp_path, n_jobs):
    scenario = Scenario.from_dict(small_config(
        selection={"strategy": "thermometer"}, bank={"preset": "ideal"}))
    amplitudes = [-60., -40., -20.]
    result = run_sweep(scenario, amplitudes, str(tmp_path), n_jobs=n_jobs,
                       plot=False)
    curve = result.curve
    assert_equal(curve.amplitudes_dbfs, amplitudes)
    assert np.all(np.isfinite(curve.sndr_db))
    assert curve.sndr_db[2] - curve.sndr_db[0] >= 30
    assert_equal(curve.sndr_db[1], scenario.sndr_at(-40.))
    for name in ("dr_curve.csv", "sweep.yaml", "manifest.yaml"):
        assert (tmp_path / "small" / name).is_file()
    manifest = Scenario.from_yaml(str(tmp_path / "small" / "manifest.yaml"))
    assert manifest.sweep_amplitudes == amplitudes


@pytest.mark.fast_test
def test_sweep_is_deterministic_across_jobs(tmp_path):
    scenario = Scenario.from_dict(small_config())
    amplitudes = [-50., -30.]
    serial = run_sweep(scenario, amplitudes, str(tmp_path / "a"),
                       plot=False).curve
    parallel = run_sweep(scenario, amplitudes, str(tmp_path / "b"),
                         n_jobs=2, plot=False).curve
    assert_array_equal(serial.sndr_db, parallel.sndr_db)
    assert read_bytes(tmp_path / "a" / "small" / "dr_curve.csv") == \
        read_bytes(tmp_path / "b" / "small" / "dr_curve.csv")


@pytest.mark.fast_test
def test_sweep_records_failed_points(tmp_path):
    scenario = Scenario.from_dict(small_config(
        input={"freq_hz": 20000., "dc_offset": 2.}))
    curve = run_sweep(scenario, [-60., 3.], str(tmp_path),
                      plot=True).curve
    assert np.isfinite(curve.sndr_db[0])
    assert np.isnan(curve.sndr_db[1])
    assert list(curve.failures) == [3.]
    with open(tmp_path / "small" / "sweep.yaml") as f:
        report = yaml.safe_load(f)
    assert report["failures"][0]["amplitude_dbfs"] == 3.
    assert (tmp_path / "small" / "dr_curve.svg").is_file()


@pytest.mark.fast_test
def test_run_sweep_rejects_bad_amplitudes(tmp_path):
    scenario = Scenario.from_dict(small_config())
    with pytest.raises(ConfigurationError):
        run_sweep(scenario, [-20., -40.], str(tmp_path))


@pytest.mark.fast_test
def test_input_is_generated_at_the_coherent_frequency():
    config = small_config(selection={"strategy": "thermometer"},
                          bank={"preset": "ideal"},
                          input={"amplitude_dbfs": -20., "freq_hz": 20000.})
    raw = Scenario.from_dict(config)
    f = raw.signal_freq_hz
    assert f != 20000.
    assert_equal(raw.modulator_input.freq_hz, f)
    assert_equal(raw.input.freq_hz, 20000.)

    config["input"]["freq_hz"] = f
    snapped = Scenario.from_dict(config)
    assert_equal(snapped.signal_freq_hz, f)
    a, b = simulate(raw), simulate(snapped)
    assert_array_equal(a.codes, b.codes)
    assert_equal(a.sndr.sndr_db, b.sndr.sndr_db)
    assert a.sndr.sndr_db > 75


@pytest.fixture(scope="module")
def dr_curves():
    curves = {}
    for name in ("fig4-a", "fig4-b", "fig4-d", "fig4-d-offset"):
        scenario = load_preset(name)
        curves[name] = sweep_dynamic_range(
            scenario, scenario.sweep_amplitudes, n_jobs=-1, label=name)
    return curves


@pytest.mark.slow_test
def test_ideal_dac_dynamic_range(dr_curves):
    ideal = dr_curves["fig4-a"]
    assert not ideal.failures
    assert abs(ideal.dynamic_range_db - 104) <= 3
    assert_equal(ideal.peak_amplitude_dbfs, -1.)


@pytest.mark.slow_test
def test_dwa_limit_cycles_cost_20_db(dr_curves):
    deficit, _ = sndr_deficit(dr_curves["fig4-b"], dr_curves["fig4-a"])
    assert abs(deficit - 20.2) <= 4


@pytest.mark.slow_test
def test_extra_element_deficit(dr_curves):
    deficit, amplitude = sndr_deficit(dr_curves["fig4-d"],
                                      dr_curves["fig4-a"])
    assert abs(deficit - 5.7) <= 3
    assert -30 <= amplitude <= -10
    deficit, _ = sndr_deficit(dr_curves["fig4-d-offset"],
                              dr_curves["fig4-a"])
    assert abs(deficit - 17) <= 4


@pytest.mark.slow_test
def test_negative_half_step_offset_drop():
    no_offset = simulate(load_preset("fig4-c"))
    offset = simulate(load_preset("fig4-c-offset"))
    assert abs(no_offset.sndr.sndr_db - offset.sndr.sndr_db - 15) <= 4


@pytest.mark.slow_test
def test_ideal_dac_sndr_at_minus_50_dbfs():
    result = simulate(load_preset("fig4-a"))
    assert abs(result.sndr.sndr_db - 61.7) <= 3
    assert_equal(result.tones.count, 0)


@pytest.mark.slow_test
@pytest.mark.parametrize("name, sndr_db, tolerance", [
    ("fig2-top", 41.47, 4), ("fig2-mid", 59.07, 4),
    ("fig2-bottom", 43.87, 4)])
def test_spectrum_presets(name, sndr_db, tolerance):
    result = simulate(load_preset(name))
    assert abs(result.sndr.sndr_db - sndr_db) <= tolerance
    checks = check_expectations(result)
    assert checks and all(checks.values())


@pytest.mark.slow_test
def test_dwa_limit_cycles_put_tones_in_band():
    dwa = simulate(load_preset("fig2-top"))
    assert dwa.tones.count >= 3


@pytest.mark.slow_test
def test_extra_element_removes_tones():
    assert_equal(simulate(load_preset("fig2-mid")).tones.count, 0)
    assert simulate(load_preset("fig2-bottom")).tones.count >= 1


@pytest.mark.slow_test
def test_random_added_sequence_leaves_no_tones():
    result = simulate(load_preset("fig2-mid-random"))
    assert_equal(result.tones.count, 0)
    assert result.pointer_period is None
    assert all(check_expectations(result).values())


@pytest.mark.slow_test
@pytest.mark.parametrize("dc_offset", [-0.5, -0.25, 0., 0.25, 0.5])
def test_random_added_sequence_is_tone_free_for_any_bank(dc_offset):
    config = load_preset("fig2-mid-random").to_dict()
    config["input"]["dc_offset"] = dc_offset
    config.pop("expect")
    for seed in range(10):
        config["bank"] = {"sigma": 0.0116, "seed": seed}
        result = simulate(Scenario.from_dict(config))
        assert_equal(result.tones.count, 0)
