"""Command-line front end.

::

    python -m skdem presets
    python -m skdem simulate --preset fig2-top
    python -m skdem sweep --preset fig4-a --preset fig4-b --reference fig4-a
    python -m skdem psd results/fig2-top/dac.csv --sample-rate 12.5e6
    python -m skdem bank stats measured-bank-8

Exit codes: 0 success, 2 configuration error, 3 simulation error,
4 I/O failure.
"""
import argparse
import logging
import os
import sys

import numpy as np

from . import __version__
from .bank import BANK_PRESETS
from .bank import MismatchSpec
from .bank import bank_statistics
from .bank import generate_element_bank
from .bank import resolve_bank
from .callbacks import VerboseCallback
from .exceptions import ConfigurationError
from .exceptions import SimulationError
from .scenario import DEFAULT_SWEEP_AMPLITUDES
from .scenario import Scenario
from .scenario import default_output_dir
from .scenario import list_presets
from .scenario import load_preset
from .scenario import run_scenario
from .scenario import run_sweep
from .scenario import save_plot
from .spectral import WINDOWS
from .spectral import band_edge
from .spectral import compute_sndr
from .spectral import detect_tones
from .spectral import estimate_psd
from .spectral import sndr_deficit
from .spectral import write_psd_csv
from .utils import read_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_IO = 4


def parse_amplitudes(text):
    """Parse ``"-60,-40,-20"`` or an inclusive range ``"-105:0:5"``.

    Examples
    --------
    >>> parse_amplitudes("-20:0:10")
    [-20.0, -10.0, 0.0]
    >>> parse_amplitudes("-3, -1")
    [-3.0, -1.0]
    """
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError("step must be > 0")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [float(start + i * step) for i in range(n)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError("invalid amplitude list %r: %s"
                                         % (text, e))


def _load_scenarios(args):
    scenarios = [Scenario.from_yaml(path) for path in args.scenario]
    scenarios += [load_preset(name) for name in args.preset or []]
    if not scenarios:
        raise ConfigurationError("Give a scenario file or --preset NAME")
    return scenarios


def cmd_presets(args):
    for name, description in list_presets():
        print("%-18s %s" % (name, description))
    return EXIT_OK


def cmd_simulate(args):
    for scenario in _load_scenarios(args):
        if args.amplitude is not None:
            scenario = scenario.with_amplitude(args.amplitude)
        result = run_scenario(scenario, args.output, plot=not args.no_plot)
        print("%s: SNDR %.2f dB (ideal DAC %.2f dB), %d in-band tone(s)"
              % (scenario.name, result.sndr.sndr_db,
                 result.ideal_sndr.sndr_db, result.tones.count))
        for check, ok in result.to_report().get("expectations",
                                                {}).items():
            if not ok:
                logger.warning("%s: expectation %s does not hold",
                               scenario.name, check)
    return EXIT_OK


def cmd_sweep(args):
    scenarios = _load_scenarios(args)
    results = []
    for scenario in scenarios:
        amplitudes = args.amplitudes or scenario.sweep_amplitudes or \
            DEFAULT_SWEEP_AMPLITUDES
        callback = VerboseCallback(len(amplitudes)) if args.verbose else None
        res = run_sweep(scenario, amplitudes, args.output, n_jobs=args.jobs,
                        callback=callback, plot=not args.no_plot)
        curve = res.curve
        print("%s: dynamic range %.2f dB, peak SNDR %.2f dB at %.2f dBFS"
              % (scenario.name, curve.dynamic_range_db, curve.peak_sndr_db,
                 curve.peak_amplitude_dbfs))
        results.append(res)

    if args.reference is not None:
        names = [r.scenario.name for r in results]
        if args.reference not in names:
            raise ConfigurationError("Reference %r is not among the swept "
                                     "scenarios %s" % (args.reference,
                                                       names))
        ref = results[names.index(args.reference)].curve
        for res in results:
            if res.curve is ref:
                continue
            deficit, amplitude = sndr_deficit(res.curve, ref)
            print("%s: worst SNDR deficit %.2f dB at %.2f dBFS"
                  % (res.scenario.name, deficit, amplitude))

    if len(results) > 1 and not args.no_plot:
        def draw(ax):
            from .plots import plot_dynamic_range
            plot_dynamic_range(*[r.curve for r in results], ax=ax)
        save_plot(draw, os.path.join(args.output or default_output_dir(),
                                     "dynamic_range.svg"))
    return EXIT_OK


def cmd_psd(args):
    columns = read_csv(args.csv)
    if args.column not in columns:
        raise ConfigurationError("Column %r not in %s; available columns "
                                 "are %s" % (args.column, args.csv,
                                             sorted(columns)))
    samples = columns[args.column][args.discard:]
    psd = estimate_psd(samples, args.sample_rate, args.window, args.n_fft,
                       args.overlap)
    out = args.out or os.path.splitext(args.csv)[0] + "_psd.csv"
    write_psd_csv(out, psd)
    print("Wrote %s (%d bins, %d average(s))"
          % (out, psd.bin_power.size, psd.n_averages))
    edge = band_edge(args.sample_rate, args.osr)
    if args.freq is not None:
        sndr = compute_sndr(psd, args.freq, edge, args.sample_rate)
        print("SNDR %.2f dB over %.1f Hz" % (sndr.sndr_db, edge))
    tones = detect_tones(psd, edge, args.threshold, args.freq)
    print("%d in-band tone(s), floor %.2f dB" % (tones.count,
                                                 tones.noise_floor_db))
    for f, above in tones.tones:
        print("  %12.2f Hz  %+6.2f dB" % (f, above))
    return EXIT_OK


def cmd_bank_gen(args):
    spec = MismatchSpec(args.sigma, args.distribution, args.seed)
    bank = generate_element_bank(args.count, spec)
    bank.save(args.out)
    print("Wrote %d gains to %s" % (bank.count, args.out))
    return EXIT_OK


def cmd_bank_stats(args):
    bank = resolve_bank(args.source, args.count)
    mean, std, worst = bank_statistics(bank)
    print("elements       %d" % bank.count)
    print("mean           %.6f" % mean)
    print("sample std     %.6f (%.3f %%)" % (std, 100 * std))
    print("max |g - 1|    %.6f" % worst)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="skdem",
        description="Behavioral simulation of multibit sigma-delta DACs "
                    "with DWA and SaDWA element selection.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging, repeat for debug output")
    parser.add_argument("-q", "--quiet", action="store_true",
                        help="only log errors")
    subs = parser.add_subparsers(dest="cmd")
    subs.required = True

    p = subs.add_parser("presets", help="list the built-in scenarios")
    p.set_defaults(func=cmd_presets)

    for name, func, helptext in (
            ("simulate", cmd_simulate, "run scenarios and write bundles"),
            ("sweep", cmd_sweep, "sweep the input amplitude")):
        p = subs.add_parser(name, help=helptext)
        p.add_argument("scenario", nargs="*",
                       help="scenario or manifest YAML file(s)")
        p.add_argument("--preset", action="append",
                       help="built-in scenario, may be repeated")
        p.add_argument("-o", "--output", default=None,
                       help="result directory (default $SKDEM_OUTPUT_DIR "
                            "or ./results)")
        p.add_argument("--no-plot", action="store_true",
                       help="skip the SVG plots")
        p.set_defaults(func=func)
        if name == "simulate":
            p.add_argument("--amplitude", type=float, default=None,
                           help="override the input amplitude [dBFS]")
        else:
            p.add_argument("--amplitudes", type=parse_amplitudes,
                           default=None,
                           help="'a,b,c' or inclusive 'start:stop:step' "
                                "in dBFS")
            p.add_argument("-j", "--jobs", type=int, default=1,
                           help="points measured in parallel")
            p.add_argument("--reference", default=None,
                           help="scenario name the others are compared to")

    p = subs.add_parser("psd", help="spectrum of a column of a CSV file")
    p.add_argument("csv", help="CSV file, e.g. a dac.csv bundle file")
    p.add_argument("--column", default="v")
    p.add_argument("--sample-rate", type=float, default=12.5e6,
                   help="[Hz]")
    p.add_argument("--n-fft", type=int, default=65536)
    p.add_argument("--window", choices=WINDOWS, default="hann")
    p.add_argument("--overlap", type=float, default=0.)
    p.add_argument("--discard", type=int, default=0,
                   help="leading samples to drop")
    p.add_argument("--osr", type=float, default=128)
    p.add_argument("--freq", type=float, default=None,
                   help="signal frequency [Hz] for the SNDR")
    p.add_argument("--threshold", type=float, default=12.,
                   help="tone threshold above the floor [dB]")
    p.add_argument("--out", default=None, help="PSD CSV to write")
    p.set_defaults(func=cmd_psd)

    p = subs.add_parser("bank", help="element banks")
    bank_subs = p.add_subparsers(dest="bank_cmd")
    bank_subs.required = True
    g = bank_subs.add_parser("gen", help="draw a random bank")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--sigma", type=float, required=True,
                   help="relative standard deviation, 0.0116 for 1.16 %%")
    g.add_argument("--distribution", choices=("uniform", "normal"),
                   default="uniform")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="bank file to write")
    g.set_defaults(func=cmd_bank_gen)
    s = bank_subs.add_parser("stats", help="statistics of a bank")
    s.add_argument("source",
                   help="bank file or preset (%s)" % ", ".join(
                       sorted(BANK_PRESETS)))
    s.add_argument("--count", type=int, default=None,
                   help="element count, needed for 'ideal'")
    s.set_defaults(func=cmd_bank_stats)
    return parser


def main(argv=None):
    """Run the command line; returns the exit code."""
    args = build_parser().parse_args(argv)
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)

    try:
        return args.func(args)
    except (ConfigurationError, ValueError) as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except SimulationError as e:
        logger.error("Simulation failed: %s", e)
        return EXIT_SIMULATION
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
