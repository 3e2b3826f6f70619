"""Scenarios: a complete, serializable description of one experiment.

A scenario fixes the test input, the modulator, the element selection
strategy, the element bank and the spectral analysis. It is stored as a
YAML mapping::

    name: fig2-top
    description: DWA with seven mismatched elements
    seed: 0
    input:
      amplitude_dbfs: -50.0
      freq_hz: 5720.0
      dc_offset: 0.0
      sample_rate_hz: 12500000.0
    modulator:
      bits: 3
    selection:
      strategy: dwa
    bank:
      preset: measured-bank-7
    analysis:
      window: hann
      osr: 128

Omitted keys take their defaults; unknown keys are rejected.
"""
import copy
import logging
import os

import numpy as np
import pyaml
import yaml

from .bank import ElementBank
from .bank import MismatchSpec
from .bank import resolve_bank
from .dac import run_dac
from .dac import write_dac_csv
from .exceptions import ConfigurationError
from .exceptions import SelectionError
from .exceptions import SimulationError
from .modulator import InputSpec
from .modulator import ModulatorConfig
from .modulator import run_modulator
from .modulator import write_codes_csv
from .selection import AddedSequenceSpec
from .selection import cook_selector
from .selection import limit_cycle_period
from .selection import selector_modulus
from .selection import write_selection_csv
from .selection import STRATEGIES
from .spectral import DC_GUARD
from .spectral import GUARD_BINS
from .spectral import WINDOWS
from .spectral import band_edge
from .spectral import compute_sndr
from .spectral import detect_tones
from .spectral import estimate_psd
from .spectral import snap_to_bin
from .spectral import sweep_dynamic_range
from .spectral import write_dr_csv
from .spectral import write_psd_csv
from .utils import atomic_write

logger = logging.getLogger(__name__)

PRESET_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                          "presets")

OUTPUT_DIR_ENV = "SKDEM_OUTPUT_DIR"

# -105 .. 0 dBFS in 5 dB steps
DEFAULT_SWEEP_AMPLITUDES = [float(a) for a in range(-105, 1, 5)]

INPUT_DEFAULTS = {
    "amplitude_dbfs": -50.,
    "freq_hz": 5720.,
    "dc_offset": 0.,
    "sample_rate_hz": 12.5e6,
}

MODULATOR_DEFAULTS = {
    "bits": 3,
    "delta": 1.,
    "a1": 1.,
    "a2": 1.,
    "instability_bound": 100.,
}

SELECTION_DEFAULTS = {
    "strategy": "dwa",
    "initial_pointer": 1,
    "added_sequence": "constant_zero",
    "added_seed": None,
}

ANALYSIS_DEFAULTS = {
    "record_length": 65536,
    "n_fft": 65536,
    "window": "hann",
    "overlap": 0.,
    "osr": 128,
    "transient_discard": 2048,
    "coherent": True,
    "tone_threshold_db": 12.,
    "reference_margin_db": 6.,
}

BANK_KEYS = ("preset", "path", "gains", "sigma", "distribution", "seed",
             "source")

SWEEP_KEYS = ("amplitudes_dbfs",)

EXPECT_KEYS = ("sndr_db_min", "sndr_db_max", "tones_min", "tones_max")

TOP_LEVEL_KEYS = ("name", "description", "seed", "input", "modulator",
                  "selection", "bank", "analysis", "sweep", "expect",
                  "skdem_version")


def default_output_dir():
    """Result directory from ``$SKDEM_OUTPUT_DIR``, ``./results`` if unset."""
    return os.environ.get(OUTPUT_DIR_ENV) or "results"


def _section(config, name, allowed, defaults=None):
    section = config.get(name)
    if section is None:
        section = {}
    if not isinstance(section, dict):
        raise ConfigurationError("Section %r should be a mapping, got %r"
                                 % (name, section))
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigurationError("Unknown key(s) %s in section %r; valid "
                                 "keys are %s" % (unknown, name,
                                                  sorted(allowed)))
    merged = dict(defaults or {})
    merged.update(section)
    return merged


class AnalysisConfig(object):
    """Spectral analysis settings of a scenario.

    Parameters
    ----------
    record_length : int, default=65536
        Samples analysed after the transient.

    n_fft : int, default=65536
        Segment length of the periodogram, a power of two.

    window : {"hann", "rectangular"}, default="hann"

    overlap : float, default=0

    osr : float, default=128
        Oversampling ratio; the band edge is ``f_S / (2 osr)``.

    transient_discard : int, default=2048
        Leading samples dropped before analysis.

    coherent : bool, default=True
        Snap the input frequency to the nearest FFT bin.

    tone_threshold_db : float, default=12

    reference_margin_db : float, default=6
    """
    def __init__(self, record_length=65536, n_fft=65536, window="hann",
                 overlap=0., osr=128, transient_discard=2048, coherent=True,
                 tone_threshold_db=12., reference_margin_db=6.):
        n_fft = int(n_fft)
        if n_fft < 2 or n_fft & (n_fft - 1):
            raise ValueError("n_fft must be a power of two, got %s" % n_fft)
        if int(record_length) < n_fft:
            raise ValueError("record_length %s is shorter than n_fft %d"
                             % (record_length, n_fft))
        if window not in WINDOWS:
            raise ValueError("window should be one of %s, got %r"
                             % (WINDOWS, window))
        if not 0 <= overlap < 1:
            raise ValueError("overlap must lie in [0, 1), got %s" % overlap)
        if not osr >= 1:
            raise ValueError("osr must be >= 1, got %s" % osr)
        if int(transient_discard) < 0:
            raise ValueError("transient_discard must be >= 0, got %s"
                             % transient_discard)
        if not tone_threshold_db > 0:
            raise ValueError("tone_threshold_db must be > 0, got %s"
                             % tone_threshold_db)
        self.record_length = int(record_length)
        self.n_fft = n_fft
        self.window = window
        self.overlap = float(overlap)
        self.osr = float(osr)
        self.transient_discard = int(transient_discard)
        self.coherent = bool(coherent)
        self.tone_threshold_db = float(tone_threshold_db)
        self.reference_margin_db = float(reference_margin_db)

    @property
    def n_samples(self):
        return self.transient_discard + self.record_length

    def to_dict(self):
        return {"record_length": self.record_length, "n_fft": self.n_fft,
                "window": self.window, "overlap": self.overlap,
                "osr": self.osr,
                "transient_discard": self.transient_discard,
                "coherent": self.coherent,
                "tone_threshold_db": self.tone_threshold_db,
                "reference_margin_db": self.reference_margin_db}


class Scenario(object):
    """One experiment, from test input to spectral analysis.

    Build scenarios with `Scenario.from_dict`, `Scenario.from_yaml` or
    `load_preset`; the constructor takes already validated parts.

    Parameters
    ----------
    name : str
        Name of the scenario and of its result directory.

    input : InputSpec
        Test input; its sample count is replaced by the one the
        analysis needs.

    modulator : ModulatorConfig

    strategy : {"thermometer", "dwa", "sadwa"}

    bank : ElementBank
        Element gains, sized for the strategy.

    analysis : AnalysisConfig

    added : AddedSequenceSpec, optional
        Added sequence of "sadwa".

    initial_pointer : int, default=1

    seed : int, default=0

    description : str, default=""

    bank_config : dict, optional
        Section the bank was built from, kept for serialization.

    sweep_amplitudes : list of float, optional
        Default amplitudes of `run_sweep`.

    expect : dict, optional
        Bounds checked by `check_expectations`.
    """
    def __init__(self, name, input, modulator, strategy, bank, analysis,
                 added=None, initial_pointer=1, seed=0, description="",
                 bank_config=None, sweep_amplitudes=None, expect=None):
        self.name = str(name)
        self.description = description or ""
        self.seed = int(seed)
        self.modulator = modulator
        self.strategy = strategy
        self.added = added if added is not None else AddedSequenceSpec()
        self.initial_pointer = int(initial_pointer)
        self.bank = bank
        self.bank_config = bank_config
        self.analysis = analysis
        self.sweep_amplitudes = sweep_amplitudes
        self.expect = dict(expect or {})
        self.input = InputSpec(input.amplitude_dbfs, input.freq_hz,
                               input.sample_rate_hz, analysis.n_samples,
                               input.dc_offset)
        self.validate()

    @property
    def modulus(self):
        return selector_modulus(self.strategy, self.modulator.max_code)

    @property
    def signal_freq_hz(self):
        """Input frequency after coherent snapping, if enabled."""
        if not self.analysis.coherent:
            return self.input.freq_hz
        return snap_to_bin(self.input.freq_hz, self.input.sample_rate_hz,
                           self.analysis.n_fft)[0]

    @property
    def modulator_input(self):
        """Test input as generated, at `signal_freq_hz`."""
        spec = self.input
        return InputSpec(spec.amplitude_dbfs, self.signal_freq_hz,
                         spec.sample_rate_hz, spec.n_samples, spec.dc_offset)

    @property
    def band_edge_hz(self):
        return band_edge(self.input.sample_rate_hz, self.analysis.osr)

    def validate(self):
        """Cross-field checks; raises `ConfigurationError`."""
        if not self.name or os.sep in self.name or self.name in (".", ".."):
            raise ConfigurationError("Invalid scenario name %r" % self.name)
        if self.strategy not in STRATEGIES:
            raise ConfigurationError("Unknown strategy %r, valid strategies "
                                     "are %s" % (self.strategy, STRATEGIES))
        if self.bank.count != self.modulus:
            raise ConfigurationError(
                "Strategy %r with %d-bit codes drives %d elements, but bank "
                "%r has %d" % (self.strategy, self.modulator.bits,
                               self.modulus, self.bank.name,
                               self.bank.count))
        if not 1 <= self.initial_pointer <= self.modulus:
            raise ConfigurationError("initial_pointer must lie in [1, %d], "
                                     "got %d" % (self.modulus,
                                                 self.initial_pointer))
        f = self.signal_freq_hz
        if not f < self.band_edge_hz:
            raise ConfigurationError("Input frequency %g Hz is outside the "
                                     "signal band (0, %g) Hz"
                                     % (f, self.band_edge_hz))
        bin_width = self.input.sample_rate_hz / self.analysis.n_fft
        if round(f / bin_width) - GUARD_BINS[self.analysis.window] \
                <= DC_GUARD:
            raise ConfigurationError("Input frequency %g Hz is too close to "
                                     "DC for n_fft=%d" % (f,
                                                          self.analysis.n_fft))
        if self.sweep_amplitudes is not None and \
                np.any(np.diff(self.sweep_amplitudes) <= 0):
            raise ConfigurationError("Sweep amplitudes must be strictly "
                                     "increasing")

    def make_selector(self):
        return cook_selector(self.strategy, self.modulus, added=self.added,
                             initial_pointer=self.initial_pointer)

    def with_amplitude(self, amplitude_dbfs):
        """Copy of the scenario with another input amplitude."""
        other = copy.copy(self)
        other.input = InputSpec(amplitude_dbfs, self.input.freq_hz,
                                self.input.sample_rate_hz,
                                self.input.n_samples, self.input.dc_offset)
        return other

    def sndr_at(self, amplitude_dbfs):
        """SNDR of the scenario at another amplitude."""
        return simulate(self.with_amplitude(amplitude_dbfs)).sndr.sndr_db

    @classmethod
    def from_dict(cls, config, base_dir=None):
        """Build and validate a scenario from a mapping.

        Parameters
        ----------
        config : dict
            Scenario mapping, see the module docstring.

        base_dir : str, optional
            Directory relative bank paths are resolved against.

        Returns
        -------
        scenario : Scenario
        """
        if not isinstance(config, dict):
            raise ConfigurationError("A scenario should be a mapping, got %r"
                                     % (config,))
        unknown = sorted(set(config) - set(TOP_LEVEL_KEYS))
        if unknown:
            raise ConfigurationError("Unknown top-level key(s) %s"
                                     % unknown)
        if "name" not in config:
            raise ConfigurationError("A scenario needs a name")
        seed = config.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigurationError("seed must be a non-negative integer, "
                                     "got %r" % (seed,))

        inp = _section(config, "input", INPUT_DEFAULTS, INPUT_DEFAULTS)
        mod = _section(config, "modulator", MODULATOR_DEFAULTS,
                       MODULATOR_DEFAULTS)
        sel = _section(config, "selection", SELECTION_DEFAULTS,
                       SELECTION_DEFAULTS)
        ana = _section(config, "analysis", ANALYSIS_DEFAULTS,
                       ANALYSIS_DEFAULTS)
        bank_section = _section(config, "bank", BANK_KEYS)
        sweep = _section(config, "sweep", SWEEP_KEYS)
        expect = _section(config, "expect", EXPECT_KEYS)

        try:
            analysis = AnalysisConfig(**ana)
            modulator = ModulatorConfig(**mod)
            input_spec = InputSpec(float(inp["amplitude_dbfs"]),
                                   float(inp["freq_hz"]),
                                   float(inp["sample_rate_hz"]),
                                   analysis.n_samples,
                                   float(inp["dc_offset"]))
            added_seed = sel["added_seed"]
            added = AddedSequenceSpec(
                sel["added_sequence"],
                seed if added_seed is None else added_seed)
            strategy = sel["strategy"]
            modulus = selector_modulus(strategy, modulator.max_code)
        except (TypeError, ValueError) as e:
            raise ConfigurationError("Invalid scenario %r: %s"
                                     % (config["name"], e))
        bank_config, bank = _resolve_bank_section(bank_section, modulus,
                                                  seed, base_dir)
        amplitudes = sweep.get("amplitudes_dbfs")
        if amplitudes is not None:
            amplitudes = [float(a) for a in amplitudes]
        return cls(config["name"], input_spec, modulator, strategy, bank,
                   analysis, added=added,
                   initial_pointer=sel["initial_pointer"], seed=seed,
                   description=config.get("description", ""),
                   bank_config=bank_config, sweep_amplitudes=amplitudes,
                   expect=expect)

    @classmethod
    def from_yaml(cls, yml_path):
        """Load a scenario or a result manifest from a YAML file."""
        try:
            with open(yml_path, 'rb') as f:
                config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError("Cannot parse %s: %s" % (yml_path, e))
        return cls.from_dict(config,
                             base_dir=os.path.dirname(
                                 os.path.abspath(yml_path)))

    def to_dict(self, resolve_bank=False):
        """Mapping accepted by `from_dict`.

        Parameters
        ----------
        resolve_bank : bool, default=False
            Store the bank as its explicit gains, so the mapping no
            longer depends on files or presets.
        """
        if resolve_bank or self.bank_config is None:
            bank = {"gains": [float(g) for g in self.bank.gains]}
            if self.bank.name:
                bank["source"] = str(self.bank.name)
        else:
            bank = dict(self.bank_config)
        config = {
            "name": self.name,
            "description": self.description,
            "seed": self.seed,
            "input": {"amplitude_dbfs": self.input.amplitude_dbfs,
                      "freq_hz": self.input.freq_hz,
                      "dc_offset": self.input.dc_offset,
                      "sample_rate_hz": self.input.sample_rate_hz},
            "modulator": {"bits": self.modulator.bits,
                          "delta": self.modulator.delta,
                          "a1": self.modulator.a1,
                          "a2": self.modulator.a2,
                          "instability_bound":
                              self.modulator.instability_bound},
            "selection": {"strategy": self.strategy,
                          "initial_pointer": self.initial_pointer,
                          "added_sequence": self.added.kind,
                          "added_seed": self.added.seed},
            "bank": bank,
            "analysis": self.analysis.to_dict(),
        }
        if self.sweep_amplitudes is not None:
            config["sweep"] = {"amplitudes_dbfs": list(self.sweep_amplitudes)}
        if self.expect:
            config["expect"] = dict(self.expect)
        return config

    def __repr__(self):
        return "Scenario(name={!r}, strategy={!r}, bank={!r})".format(
            self.name, self.strategy, self.bank.name)


def _resolve_bank_section(section, count, seed, base_dir):
    section = dict(section)
    section.pop("source", None)
    sources = [k for k in ("preset", "path", "gains", "sigma")
               if k in section]
    if len(sources) != 1:
        raise ConfigurationError("Section 'bank' needs exactly one of "
                                 "'preset', 'path', 'gains' or 'sigma', "
                                 "got %s" % (sources or "none"))
    kind = sources[0]
    extra = set(section) - {kind} - ({"distribution", "seed"}
                                     if kind == "sigma" else set())
    if extra:
        raise ConfigurationError("Key(s) %s cannot be combined with bank "
                                 "%r" % (sorted(extra), kind))
    if kind == "preset":
        return section, resolve_bank(str(section["preset"]), count)
    if kind == "path":
        path = section["path"]
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return section, resolve_bank(path, count)
    if kind == "gains":
        try:
            bank = ElementBank(section["gains"], name="inline")
        except (TypeError, ValueError) as e:
            raise ConfigurationError("Invalid bank gains: %s" % e)
        return section, resolve_bank(bank, count)
    section.setdefault("distribution", "uniform")
    section.setdefault("seed", seed)
    try:
        spec = MismatchSpec(section["sigma"], section["distribution"],
                            section["seed"])
        bank = resolve_bank(spec, count)
    except ValueError as e:
        raise ConfigurationError("Invalid bank: %s" % e)
    return section, bank


def list_presets():
    """Built-in scenarios as ``(name, description)`` pairs, by name."""
    names = sorted(os.path.splitext(f)[0] for f in os.listdir(PRESET_DIR)
                   if f.endswith(".yaml"))
    catalog = []
    for name in names:
        with open(os.path.join(PRESET_DIR, name + ".yaml"), 'rb') as f:
            config = yaml.safe_load(f)
        catalog.append((name, config.get("description", "")))
    return catalog


def load_preset(name):
    """Load the built-in scenario `name`."""
    path = os.path.join(PRESET_DIR, "%s.yaml" % name)
    if os.sep in name or not os.path.isfile(path):
        raise ConfigurationError("Unknown preset %r, valid presets are %s"
                                 % (name, [n for n, _ in list_presets()]))
    scenario = Scenario.from_yaml(path)
    if scenario.name != name:
        raise ConfigurationError("Preset file %s names itself %r"
                                 % (path, scenario.name))
    return scenario


class ScenarioResult(object):
    """Everything measured in one scenario run.

    Attributes
    ----------
    scenario : Scenario

    codes, levels : ndarray
        Modulator output over the whole run, transient included.

    dac : DacOutput

    psd, reference_psd : PsdEstimate
        Spectra of the compensated DAC output and of an ideal DAC fed
        the same codes, transient excluded.

    sndr, ideal_sndr : SndrReport

    tones : ToneReport

    pointer_period : int or None
        Period of the pointer after the transient, None if aperiodic.

    files : dict
        Written files by role, empty until `run_scenario` writes them.
    """
    def __init__(self, scenario, codes, levels, dac, psd, reference_psd,
                 sndr, ideal_sndr, tones, pointer_period):
        self.scenario = scenario
        self.codes = codes
        self.levels = levels
        self.dac = dac
        self.psd = psd
        self.reference_psd = reference_psd
        self.sndr = sndr
        self.ideal_sndr = ideal_sndr
        self.tones = tones
        self.pointer_period = pointer_period
        self.files = {}

    def to_report(self):
        report = {
            "name": self.scenario.name,
            "sndr": self.sndr.to_dict(),
            "ideal_sndr_db": float(self.ideal_sndr.sndr_db),
            "sndr_loss_db": float(self.ideal_sndr.sndr_db -
                                  self.sndr.sndr_db),
            "tones": self.tones.to_dict(),
            "pointer_period": self.pointer_period,
            "signal_freq_hz": float(self.scenario.signal_freq_hz),
        }
        if self.scenario.expect:
            report["expectations"] = check_expectations(self)
        return report


def check_expectations(result):
    """Compare a result with the ``expect`` bounds of its scenario.

    Returns
    -------
    checks : dict
        Maps every bound to True when it holds.
    """
    expect = result.scenario.expect
    sndr = result.sndr.sndr_db
    count = result.tones.count
    checks = {}
    if "sndr_db_min" in expect:
        checks["sndr_db_min"] = bool(sndr >= expect["sndr_db_min"])
    if "sndr_db_max" in expect:
        checks["sndr_db_max"] = bool(sndr <= expect["sndr_db_max"])
    if "tones_min" in expect:
        checks["tones_min"] = bool(count >= expect["tones_min"])
    if "tones_max" in expect:
        checks["tones_max"] = bool(count <= expect["tones_max"])
    return checks


def simulate(scenario):
    """Run the whole pipeline of `scenario` in memory.

    Returns
    -------
    result : ScenarioResult

    Raises
    ------
    SimulationError
        With the failing stage; `InstabilityError` for a modulator that
        blows up.
    """
    codes, levels = run_modulator(scenario.modulator_input,
                                  scenario.modulator)
    try:
        dac = run_dac(codes, scenario.make_selector(), scenario.bank,
                      delta=scenario.modulator.delta)
    except SelectionError as e:
        raise SimulationError(str(e), stage="selection") from e

    analysis = scenario.analysis
    fs = scenario.input.sample_rate_hz
    f = scenario.signal_freq_hz
    edge = scenario.band_edge_hz
    start = analysis.transient_discard
    try:
        psd = estimate_psd(dac.compensated()[start:], fs, analysis.window,
                           analysis.n_fft, analysis.overlap)
        reference = estimate_psd(dac.ideal()[start:], fs, analysis.window,
                                 analysis.n_fft, analysis.overlap)
        sndr = compute_sndr(psd, f, edge, fs)
        ideal_sndr = compute_sndr(reference, f, edge, fs)
        tones = detect_tones(psd, edge, analysis.tone_threshold_db, f,
                             reference=reference,
                             reference_margin_db=analysis.reference_margin_db)
    except ValueError as e:
        raise SimulationError(str(e), stage="spectral") from e
    period = limit_cycle_period(dac.pointer_trace[start:],
                                max_period=16 * scenario.modulus)
    logger.info("%s: SNDR %.2f dB (ideal %.2f dB), %d tone(s)",
                scenario.name, sndr.sndr_db, ideal_sndr.sndr_db,
                tones.count)
    return ScenarioResult(scenario, codes, levels, dac, psd, reference,
                          sndr, ideal_sndr, tones, period)


def _dump_yaml(path, data):
    with atomic_write(path) as f:
        f.write(pyaml.dump(data))


def write_manifest(path, scenario):
    """Write the resolved scenario with the package version."""
    from . import __version__
    manifest = scenario.to_dict(resolve_bank=True)
    manifest["skdem_version"] = __version__
    _dump_yaml(path, manifest)


def save_plot(draw, path):
    """Draw on a fresh figure and save it as SVG; skipped without
    matplotlib."""
    try:
        import matplotlib.pyplot as plt
        from .plots import save_svg
    except ImportError:
        logger.warning("matplotlib is not installed, skipping %s", path)
        return None
    fig, ax = plt.subplots(figsize=(8, 5))
    draw(ax)
    save_svg(fig, path)
    return path


def run_scenario(scenario, output_dir=None, plot=True):
    """Simulate a scenario and write its result bundle.

    The bundle is written to ``<output_dir>/<scenario.name>/``:
    ``codes.csv``, ``selection.csv``, ``dac.csv``, ``psd.csv``,
    ``report.yaml``, ``manifest.yaml`` and, with matplotlib, ``psd.svg``.

    Parameters
    ----------
    scenario : Scenario

    output_dir : str, optional
        Defaults to `default_output_dir()`.

    plot : bool, default=True
        Also draw the spectrum.

    Returns
    -------
    result : ScenarioResult
    """
    result = simulate(scenario)
    directory = os.path.join(output_dir or default_output_dir(),
                             scenario.name)
    os.makedirs(directory, exist_ok=True)
    files = {name: os.path.join(directory, name) for name in
             ("codes.csv", "selection.csv", "dac.csv", "psd.csv",
              "report.yaml", "manifest.yaml")}
    dac = result.dac
    write_codes_csv(files["codes.csv"], result.codes, result.levels)
    write_selection_csv(files["selection.csv"], dac.codes, dac.added,
                        dac.pointer_trace, dac.masks)
    write_dac_csv(files["dac.csv"], dac)
    write_psd_csv(files["psd.csv"], result.psd)
    _dump_yaml(files["report.yaml"], result.to_report())
    write_manifest(files["manifest.yaml"], scenario)
    if plot:
        def draw(ax):
            from .plots import plot_psd
            plot_psd(result.psd, scenario.band_edge_hz, result.tones, ax=ax,
                     label=scenario.name)
        svg = save_plot(draw, os.path.join(directory, "psd.svg"))
        if svg is not None:
            files["psd.svg"] = svg
    result.files = files
    logger.info("Wrote %d files to %s", len(files), directory)
    return result


class SweepResult(object):
    """Dynamic-range curve of a scenario and the files written for it."""
    def __init__(self, scenario, curve, files):
        self.scenario = scenario
        self.curve = curve
        self.files = files

    def to_report(self):
        report = self.curve.to_dict()
        report["name"] = self.scenario.name
        report["points"] = [{"amplitude_dbfs": a, "sndr_db": s}
                            for a, s in self.curve.points]
        return report


def run_sweep(scenario, amplitudes_dbfs=None, output_dir=None, n_jobs=1,
              callback=None, plot=True):
    """Sweep the input amplitude of a scenario and write the curve.

    Writes ``dr_curve.csv``, ``sweep.yaml``, ``manifest.yaml`` and, with
    matplotlib, ``dr_curve.svg`` to ``<output_dir>/<scenario.name>/``.

    Parameters
    ----------
    scenario : Scenario

    amplitudes_dbfs : list of float, optional
        Defaults to the scenario's sweep amplitudes, then to
        ``DEFAULT_SWEEP_AMPLITUDES``.

    output_dir : str, optional
        Defaults to `default_output_dir()`.

    n_jobs : int, default=1
        Points evaluated in parallel.

    callback : callable or list of callables, optional
        See `skdem.spectral.sweep_dynamic_range`.

    plot : bool, default=True

    Returns
    -------
    result : SweepResult
    """
    if amplitudes_dbfs is None:
        amplitudes_dbfs = scenario.sweep_amplitudes or \
            DEFAULT_SWEEP_AMPLITUDES
    amplitudes_dbfs = [float(a) for a in amplitudes_dbfs]
    if not amplitudes_dbfs or np.any(np.diff(amplitudes_dbfs) <= 0):
        raise ConfigurationError("Sweep amplitudes must be a non-empty, "
                                 "strictly increasing list, got %s"
                                 % amplitudes_dbfs)
    curve = sweep_dynamic_range(scenario, amplitudes_dbfs, n_jobs=n_jobs,
                                callback=callback, label=scenario.name)
    directory = os.path.join(output_dir or default_output_dir(),
                             scenario.name)
    os.makedirs(directory, exist_ok=True)
    files = {name: os.path.join(directory, name) for name in
             ("dr_curve.csv", "sweep.yaml", "manifest.yaml")}
    write_dr_csv(files["dr_curve.csv"], curve)
    result = SweepResult(scenario, curve, files)
    _dump_yaml(files["sweep.yaml"], result.to_report())
    swept = copy.copy(scenario)
    swept.sweep_amplitudes = amplitudes_dbfs
    write_manifest(files["manifest.yaml"], swept)
    if plot:
        def draw(ax):
            from .plots import plot_dynamic_range
            plot_dynamic_range(curve, ax=ax)
        svg = save_plot(draw,
                        os.path.join(directory, "dr_curve.svg"))
        if svg is not None:
            files["dr_curve.svg"] = svg
    logger.info("%s: dynamic range %.2f dB", scenario.name,
                curve.dynamic_range_db)
    return result
