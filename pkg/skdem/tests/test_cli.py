import pytest
import yaml

import numpy as np

from skdem.bank import load_bank
from skdem.cli import EXIT_CONFIG
from skdem.cli import EXIT_IO
from skdem.cli import EXIT_OK
from skdem.cli import EXIT_SIMULATION
from skdem.cli import main
from skdem.cli import parse_amplitudes
from skdem.utils import read_csv
from skdem.utils import write_csv


def write_scenario(path, name="small", strategy="dwa", bank="measured-bank-7",
                   **input_section):
    inp = {"amplitude_dbfs": -40., "freq_hz": 20000.}
    inp.update(input_section)
    config = {"name": name, "input": inp,
              "selection": {"strategy": strategy},
              "bank": {"preset": bank},
              "analysis": {"record_length": 8192, "n_fft": 8192,
                           "transient_discard": 512}}
    path.write_text(yaml.safe_dump(config))
    return str(path)


@pytest.mark.fast_test
def test_parse_amplitudes():
    assert parse_amplitudes("-105:0:5")[:2] == [-105., -100.]
    assert len(parse_amplitudes("-105:0:5")) == 22
    assert parse_amplitudes("-10") == [-10.]
    with pytest.raises(SystemExit):
        main(["sweep", "--preset", "fig4-a", "--amplitudes=-20:0:-5"])
    with pytest.raises(SystemExit):
        main(["sweep", "--preset", "fig4-a", "--amplitudes=loud"])


@pytest.mark.fast_test
def test_presets(capsys):
    assert main(["presets"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fig2-top" in out
    assert len(out.splitlines()) == 11


@pytest.mark.fast_test
def test_simulate(tmp_path, capsys):
    scenario = write_scenario(tmp_path / "small.yaml")
    out_dir = tmp_path / "out"
    code = main(["-q", "simulate", scenario, "-o", str(out_dir),
                 "--amplitude", "-30", "--no-plot"])
    assert code == EXIT_OK
    assert "small: SNDR" in capsys.readouterr().out
    assert (out_dir / "small" / "dac.csv").is_file()
    assert not (out_dir / "small" / "psd.svg").exists()
    with open(out_dir / "small" / "manifest.yaml") as f:
        manifest = yaml.safe_load(f)
    assert manifest["input"]["amplitude_dbfs"] == -30.


@pytest.mark.fast_test
def test_configuration_errors_exit_2(tmp_path):
    assert main(["-q", "simulate"]) == EXIT_CONFIG
    assert main(["-q", "simulate", "--preset", "fig9"]) == EXIT_CONFIG
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: bad\nbogus: 1\n")
    assert main(["-q", "simulate", str(bad)]) == EXIT_CONFIG
    assert main(["-q", "bank", "stats", "ideal"]) == EXIT_CONFIG


@pytest.mark.fast_test
def test_simulation_errors_exit_3(tmp_path):
    scenario = write_scenario(tmp_path / "unstable.yaml", name="unstable",
                              dc_offset=10.)
    code = main(["-q", "simulate", scenario, "-o", str(tmp_path),
                 "--amplitude", "0", "--no-plot"])
    assert code == EXIT_SIMULATION


@pytest.mark.fast_test
def test_io_errors_exit_4(tmp_path):
    assert main(["-q", "psd", str(tmp_path / "missing.csv")]) == EXIT_IO
    assert main(["-q", "simulate", str(tmp_path / "missing.yaml")]) == \
        EXIT_IO


@pytest.mark.fast_test
def test_sweep_with_reference(tmp_path, capsys):
    ref = write_scenario(tmp_path / "ref.yaml", name="ref",
                         strategy="thermometer", bank="ideal")
    dwa = write_scenario(tmp_path / "dwa.yaml", name="dwa")
    out_dir = tmp_path / "out"
    code = main(["-q", "sweep", ref, dwa, "-o", str(out_dir),
                 "--amplitudes=-40,-20", "--reference", "ref"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "ref: dynamic range" in out
    assert "dwa: worst SNDR deficit" in out
    assert (out_dir / "dwa" / "dr_curve.csv").is_file()
    assert (out_dir / "dynamic_range.svg").is_file()

    code = main(["-q", "sweep", ref, "-o", str(out_dir),
                 "--amplitudes=-40,-20", "--reference", "nope",
                 "--no-plot"])
    assert code == EXIT_CONFIG


@pytest.mark.fast_test
def test_psd(tmp_path, capsys):
    n = np.arange(8192)
    rng = np.random.RandomState(0)
    v = 0.5 * np.sin(2 * np.pi * 30 * n / 4096.) + 1e-4 * rng.randn(n.size)
    path = tmp_path / "dac.csv"
    write_csv(path, [n, v], ["n", "v"], ["%d", "%.17g"])
    out = tmp_path / "spectrum.csv"
    code = main(["-q", "psd", str(path), "--sample-rate", "1",
                 "--n-fft", "4096", "--osr", "16", "--freq",
                 str(30 / 4096.), "--out", str(out)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    assert "2 average(s)" in printed
    assert "SNDR" in printed
    assert read_csv(out)["freq_hz"].size == 2049

    assert main(["-q", "psd", str(path), "--column", "code"]) == EXIT_CONFIG


@pytest.mark.fast_test
def test_bank_commands(tmp_path, capsys):
    assert main(["bank", "stats", "measured-bank-8"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "elements       8" in out
    assert "1.16" in out

    path = tmp_path / "bank.txt"
    code = main(["bank", "gen", "--count", "9", "--sigma", "0.01",
                 "--seed", "3", "--out", str(path)])
    assert code == EXIT_OK
    assert load_bank(path).count == 9
    assert main(["bank", "stats", str(path)]) == EXIT_OK
    assert main(["bank", "stats", "ideal", "--count", "4"]) == EXIT_OK
