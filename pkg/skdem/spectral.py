"""Spectral measurements: PSD, in-band SNDR, tone detection and
dynamic-range sweeps.

Power spectra are kept as power per bin, so that summing bins gives
the (window-weighted) mean square of the record.
"""
import logging

import numpy as np
from joblib import Parallel
from joblib import delayed
from joblib import effective_n_jobs
from scipy import signal
from sklearn.linear_model import HuberRegressor

from .callbacks import check_callback
from .exceptions import SelectionError
from .exceptions import SimulationError
from .utils import read_csv
from .utils import write_csv

logger = logging.getLogger(__name__)

WINDOWS = ("rectangular", "hann")

# bins on each side of the signal bin that belong to the signal
GUARD_BINS = {"rectangular": 0, "hann": 3}

DC_GUARD = 2


def _scipy_window(window):
    if window not in WINDOWS:
        raise ValueError("window should be one of %s, got %r"
                         % (WINDOWS, window))
    return "boxcar" if window == "rectangular" else "hann"


def band_edge(sample_rate_hz, osr):
    """Signal band edge ``f_S / (2 OSR)``."""
    if osr < 1:
        raise ValueError("osr must be >= 1, got %s" % osr)
    return sample_rate_hz / (2. * osr)


def snap_to_bin(freq_hz, sample_rate_hz, n_fft):
    """Move a frequency onto the nearest FFT bin center.

    Returns
    -------
    freq_hz : float
        Coherent frequency ``k * f_S / n_fft``.

    k : int
        Bin index, at least 1.

    Examples
    --------
    >>> f, k = snap_to_bin(5720., 12.5e6, 65536)
    >>> k, round(f, 2)
    (30, 5722.05)
    """
    k = max(1, int(round(freq_hz * n_fft / sample_rate_hz)))
    return k * sample_rate_hz / n_fft, k


class PsdEstimate(object):
    """One-sided averaged periodogram.

    Parameters
    ----------
    bin_power : ndarray, shape (n_fft // 2 + 1,)
        Power per bin, window power gain corrected.

    bin_width_hz : float
        Frequency spacing of the bins.

    window : {"rectangular", "hann"}

    n_fft : int
        Segment length.

    n_averages : int
        Number of segments averaged.
    """
    def __init__(self, bin_power, bin_width_hz, window, n_fft, n_averages):
        bin_power = np.asarray(bin_power, dtype=float)
        if bin_power.shape != (n_fft // 2 + 1,):
            raise ValueError("bin_power should have %d values, got shape %s"
                             % (n_fft // 2 + 1, bin_power.shape))
        _scipy_window(window)
        bin_power.setflags(write=False)
        self.bin_power = bin_power
        self.bin_width_hz = float(bin_width_hz)
        self.window = window
        self.n_fft = int(n_fft)
        self.n_averages = int(n_averages)

    @property
    def sample_rate_hz(self):
        return self.bin_width_hz * self.n_fft

    @property
    def freqs(self):
        return np.arange(self.bin_power.size) * self.bin_width_hz

    @property
    def power_db(self):
        """Bin power in dB, empty bins clipped to the smallest float."""
        return 10 * np.log10(np.maximum(self.bin_power,
                                        np.finfo(float).tiny))

    @property
    def guard_bins(self):
        return GUARD_BINS[self.window]

    def total_power(self):
        return float(np.sum(self.bin_power))

    def bin_of(self, freq_hz):
        """Index of the bin nearest to `freq_hz`."""
        return int(round(freq_hz / self.bin_width_hz))

    def band_bin(self, band_edge_hz):
        """Index of the last bin inside ``(0, band_edge_hz]``."""
        return int(np.floor(band_edge_hz / self.bin_width_hz + 1e-9))

    def __repr__(self):
        return ("PsdEstimate(n_fft={}, window='{}', n_averages={}, "
                "bin_width_hz={:g})".format(self.n_fft, self.window,
                                            self.n_averages,
                                            self.bin_width_hz))


def estimate_psd(samples, sample_rate_hz=1., window="hann", n_fft=65536,
                 overlap=0.):
    """Averaged windowed periodogram of a real record.

    Each segment has its mean removed, is windowed and transformed; the
    segment periodograms are averaged and folded to one side.

    Parameters
    ----------
    samples : array-like, shape (n_samples,)
        Record, at least `n_fft` samples long.

    sample_rate_hz : float, default=1.0
        Sampling frequency.

    window : {"rectangular", "hann"}, default="hann"
        Segment window.

    n_fft : int, default=65536
        Segment length, a power of two.

    overlap : float, default=0.0
        Fraction of a segment shared by consecutive segments, in
        ``[0, 1)``.

    Returns
    -------
    psd : PsdEstimate
    """
    x = np.asarray(samples, dtype=float).ravel()
    if n_fft < 2 or n_fft & (n_fft - 1):
        raise ValueError("n_fft must be a power of two, got %s" % n_fft)
    if x.size < n_fft:
        raise ValueError("Need at least n_fft=%d samples, got %d"
                         % (n_fft, x.size))
    if not 0 <= overlap < 1:
        raise ValueError("overlap must lie in [0, 1), got %s" % overlap)
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain non-finite values")
    noverlap = int(overlap * n_fft)
    _, density = signal.welch(x, fs=sample_rate_hz,
                              window=_scipy_window(window), nperseg=n_fft,
                              noverlap=noverlap, nfft=n_fft,
                              detrend="constant", return_onesided=True,
                              scaling="density")
    bin_width = sample_rate_hz / float(n_fft)
    n_averages = 1 + (x.size - n_fft) // (n_fft - noverlap)
    return PsdEstimate(density * bin_width, bin_width, window, n_fft,
                       n_averages)


class SndrReport(object):
    """In-band signal to noise and distortion ratio.

    Attributes
    ----------
    sndr_db : float
        ``10 log10(signal_power / inband_nd_power)``.

    signal_power : float
        Power of the signal bin and its guard bins.

    inband_nd_power : float
        Power of every other bin between the DC guard and the band edge.

    signal_bin : int

    band_edge_hz : float

    excluded_bins : list of int
        DC guard and signal bins.
    """
    def __init__(self, sndr_db, signal_power, inband_nd_power, signal_bin,
                 band_edge_hz, excluded_bins):
        self.sndr_db = sndr_db
        self.signal_power = signal_power
        self.inband_nd_power = inband_nd_power
        self.signal_bin = signal_bin
        self.band_edge_hz = band_edge_hz
        self.excluded_bins = excluded_bins

    def to_dict(self):
        return {"sndr_db": float(self.sndr_db),
                "signal_power": float(self.signal_power),
                "inband_nd_power": float(self.inband_nd_power),
                "signal_bin": int(self.signal_bin),
                "band_edge_hz": float(self.band_edge_hz),
                "excluded_bins": [int(k) for k in self.excluded_bins]}

    def __repr__(self):
        return "SndrReport(sndr_db={:.3f}, signal_bin={})".format(
            self.sndr_db, self.signal_bin)


def _signal_bins(psd, signal_bin, band_bin, guard_bins, dc_guard):
    lo = max(signal_bin - guard_bins, dc_guard + 1)
    hi = min(signal_bin + guard_bins, band_bin)
    return np.arange(lo, hi + 1)


def compute_sndr(psd, signal_freq_hz, band_edge_hz, sample_rate_hz=None,
                 guard_bins=None, dc_guard=DC_GUARD):
    """Measure the SNDR over ``(0, band_edge_hz]``.

    Parameters
    ----------
    psd : PsdEstimate

    signal_freq_hz : float
        Test tone frequency, inside the band.

    band_edge_hz : float
        Signal band edge B.

    sample_rate_hz : float, optional
        When given, must match the sampling rate of `psd`.

    guard_bins : int, optional
        Bins on each side of the signal bin counted as signal; by
        default 0 for the rectangular and 3 for the Hann window.

    dc_guard : int, default=2
        Bins 0 .. `dc_guard` are ignored.

    Returns
    -------
    report : SndrReport
    """
    if sample_rate_hz is not None and \
            not np.isclose(sample_rate_hz, psd.sample_rate_hz):
        raise ValueError("PSD was estimated at %g Hz, not %g Hz"
                         % (psd.sample_rate_hz, sample_rate_hz))
    if not 0 < band_edge_hz <= psd.sample_rate_hz / 2.:
        raise ValueError("band_edge_hz must lie in (0, %g], got %g"
                         % (psd.sample_rate_hz / 2., band_edge_hz))
    if not 0 < signal_freq_hz < band_edge_hz:
        raise ValueError("Signal frequency %g Hz lies outside the band "
                         "(0, %g) Hz" % (signal_freq_hz, band_edge_hz))
    if guard_bins is None:
        guard_bins = psd.guard_bins
    signal_bin = psd.bin_of(signal_freq_hz)
    band_bin = psd.band_bin(band_edge_hz)
    if signal_bin <= dc_guard:
        raise ValueError("Signal bin %d falls into the DC guard 0 .. %d"
                         % (signal_bin, dc_guard))

    sig_bins = _signal_bins(psd, signal_bin, band_bin, guard_bins, dc_guard)
    in_band = np.zeros(psd.bin_power.size, dtype=bool)
    in_band[dc_guard + 1:band_bin + 1] = True
    in_band[sig_bins] = False

    signal_power = float(np.sum(psd.bin_power[sig_bins]))
    nd_power = max(float(np.sum(psd.bin_power[in_band])),
                   np.finfo(float).tiny)
    with np.errstate(divide="ignore"):
        sndr_db = 10 * np.log10(signal_power / nd_power)
    excluded = list(range(dc_guard + 1)) + [int(k) for k in sig_bins]
    return SndrReport(float(sndr_db), signal_power, nd_power, signal_bin,
                      band_edge_hz, excluded)


class ToneReport(object):
    """Spurious tones found in the signal band.

    Attributes
    ----------
    tones : list of (float, float)
        ``(freq_hz, power_db_above_floor)`` of each tone, by frequency.

    noise_floor_db : float
        Median in-band bin power.

    threshold_db : float
        Detection threshold used.
    """
    def __init__(self, tones, noise_floor_db, threshold_db):
        self.tones = tones
        self.noise_floor_db = noise_floor_db
        self.threshold_db = threshold_db

    @property
    def count(self):
        return len(self.tones)

    def __len__(self):
        return len(self.tones)

    def to_dict(self):
        return {"count": self.count,
                "noise_floor_db": float(self.noise_floor_db),
                "threshold_db": float(self.threshold_db),
                "tones": [{"freq_hz": float(f),
                           "power_db_above_floor": float(p)}
                          for f, p in self.tones]}

    def __repr__(self):
        return "ToneReport(count={}, noise_floor_db={:.2f})".format(
            self.count, self.noise_floor_db)


def noise_floor_trend(freqs, power_db):
    """Robust quadratic trend of `power_db` against log-frequency.

    The trend is shifted so that its residuals have zero median, which
    makes it follow the median of a noise-shaped floor.

    Returns
    -------
    trend_db : ndarray, same shape as `power_db`
    """
    power_db = np.asarray(power_db, dtype=float)
    if power_db.size < 4:
        return np.full_like(power_db, np.median(power_db))
    logf = np.log10(freqs)
    X = np.column_stack([logf - logf.mean(), (logf - logf.mean()) ** 2])
    huber = HuberRegressor(max_iter=500)
    huber.fit(X, power_db)
    trend = huber.predict(X)
    return trend + np.median(power_db - trend)


def detect_tones(psd, band_edge_hz, threshold_db=12., signal_freq_hz=None,
                 guard_bins=None, dc_guard=DC_GUARD, reference=None,
                 reference_margin_db=6.):
    """Find in-band spurious tones.

    A bin is a tone when it is a local maximum and exceeds the in-band
    noise floor trend by `threshold_db`. DC guard bins and the signal
    bins are never tones.

    Parameters
    ----------
    psd : PsdEstimate

    band_edge_hz : float
        Signal band edge B.

    threshold_db : float, default=12
        Detection threshold above the floor.

    signal_freq_hz : float, optional
        Test tone to exclude with its guard bins.

    guard_bins : int, optional
        Defaults to the guard of the PSD window.

    dc_guard : int, default=2

    reference : PsdEstimate, optional
        Spectrum of an ideal converter fed the same codes. A tone must
        also exceed it by `reference_margin_db`, so that only spurs
        added after the modulator are counted.

    reference_margin_db : float, default=6

    Returns
    -------
    report : ToneReport
    """
    if not threshold_db > 0:
        raise ValueError("threshold_db must be > 0, got %s" % threshold_db)
    if guard_bins is None:
        guard_bins = psd.guard_bins
    band_bin = psd.band_bin(band_edge_hz)
    candidates = np.zeros(psd.bin_power.size, dtype=bool)
    candidates[dc_guard + 1:band_bin + 1] = True
    if signal_freq_hz is not None:
        sig_bins = _signal_bins(psd, psd.bin_of(signal_freq_hz), band_bin,
                                guard_bins, dc_guard)
        candidates[sig_bins] = False
    idx = np.flatnonzero(candidates)
    power_db = psd.power_db
    if idx.size == 0:
        return ToneReport([], np.nan, threshold_db)

    floor_db = float(np.median(power_db[idx]))
    trend = noise_floor_trend(psd.freqs[idx], power_db[idx])
    above = power_db[idx] - trend
    last = power_db.size - 1
    left = power_db[np.maximum(idx - 1, 0)]
    right = power_db[np.minimum(idx + 1, last)]
    is_tone = (above >= threshold_db) & (power_db[idx] >= left) & \
        (power_db[idx] > right)
    if reference is not None:
        if reference.bin_power.shape != psd.bin_power.shape:
            raise ValueError("Reference PSD has %d bins, expected %d"
                             % (reference.bin_power.size,
                                psd.bin_power.size))
        excess = power_db[idx] - reference.power_db[idx]
        is_tone &= excess >= reference_margin_db

    tones = [(float(psd.freqs[k]), float(a))
             for k, a in zip(idx[is_tone], above[is_tone])]
    logger.debug("%d tone(s) above a %.1f dB floor", len(tones), floor_db)
    return ToneReport(tones, floor_db, threshold_db)


def dynamic_range(amplitudes_dbfs, sndr_db):
    """Dynamic range of an SNDR curve.

    The span from the amplitude of peak SNDR down to the amplitude where
    the SNDR crosses 0 dB, found by linear interpolation between the
    bracketing points below the peak, or extrapolated from the two
    lowest points when none is at or below 0 dB. NaN points are skipped.

    Returns
    -------
    dynamic_range_db, peak_amplitude_dbfs, zero_crossing_dbfs : float
        NaN when undefined.

    Examples
    --------
    >>> dynamic_range([-100., -60., -20.], [-10., 30., 70.])
    (70.0, -20.0, -90.0)
    """
    a = np.asarray(amplitudes_dbfs, dtype=float)
    s = np.asarray(sndr_db, dtype=float)
    finite = np.isfinite(s)
    a, s = a[finite], s[finite]
    if s.size == 0 or np.max(s) <= 0:
        return np.nan, np.nan, np.nan
    i_peak = int(np.argmax(s))
    peak = float(a[i_peak])
    below = np.flatnonzero(s[:i_peak + 1] <= 0)
    if below.size:
        j = below[-1]
    elif i_peak >= 1 and s[1] != s[0]:
        j = 0
    else:
        return np.nan, peak, np.nan
    crossing = a[j] - s[j] * (a[j + 1] - a[j]) / (s[j + 1] - s[j])
    return float(peak - crossing), peak, float(crossing)


class DrCurve(object):
    """SNDR against input amplitude.

    Parameters
    ----------
    amplitudes_dbfs : array-like, shape (n_points,)
        Strictly increasing amplitudes.

    sndr_db : array-like, shape (n_points,)
        SNDR of each point, NaN where the point failed.

    failures : dict, optional
        Maps failed amplitudes to an error message.

    label : str, optional
        Name used in plots and reports.
    """
    def __init__(self, amplitudes_dbfs, sndr_db, failures=None, label=None):
        self.amplitudes_dbfs = np.asarray(amplitudes_dbfs, dtype=float)
        self.sndr_db = np.asarray(sndr_db, dtype=float)
        if self.amplitudes_dbfs.shape != self.sndr_db.shape:
            raise ValueError("Got %d amplitudes but %d SNDR values"
                             % (self.amplitudes_dbfs.size,
                                self.sndr_db.size))
        if np.any(np.diff(self.amplitudes_dbfs) <= 0):
            raise ValueError("Amplitudes must be strictly increasing")
        self.failures = dict(failures or {})
        self.label = label

    @property
    def points(self):
        return list(zip(self.amplitudes_dbfs.tolist(),
                        self.sndr_db.tolist()))

    @property
    def dynamic_range_db(self):
        return dynamic_range(self.amplitudes_dbfs, self.sndr_db)[0]

    @property
    def peak_amplitude_dbfs(self):
        return dynamic_range(self.amplitudes_dbfs, self.sndr_db)[1]

    @property
    def peak_sndr_db(self):
        return float(np.nanmax(self.sndr_db)) if len(self) else np.nan

    def __len__(self):
        return self.amplitudes_dbfs.size

    def to_dict(self):
        return {"label": self.label,
                "dynamic_range_db": float(self.dynamic_range_db),
                "peak_amplitude_dbfs": float(self.peak_amplitude_dbfs),
                "peak_sndr_db": float(self.peak_sndr_db),
                "failures": [{"amplitude_dbfs": float(a), "error": m}
                             for a, m in sorted(self.failures.items())]}

    def __repr__(self):
        return "DrCurve(label={!r}, n_points={}, dynamic_range_db={:.2f})" \
            .format(self.label, len(self), self.dynamic_range_db)


def sndr_deficit(curve, reference):
    """Largest SNDR shortfall of `curve` below `reference`.

    Only amplitudes present in both curves with finite SNDR are compared.

    Returns
    -------
    deficit_db : float
        ``max(reference.sndr_db - curve.sndr_db)``.

    amplitude_dbfs : float
        Amplitude at which the deficit occurs.

    Examples
    --------
    >>> ref = DrCurve([-60., -40., -20.], [40., 60., 80.])
    >>> dwa = DrCurve([-60., -40., -20.], [35., 45., 78.])
    >>> sndr_deficit(dwa, ref)
    (15.0, -40.0)
    """
    common, i, j = np.intersect1d(curve.amplitudes_dbfs,
                                  reference.amplitudes_dbfs,
                                  return_indices=True)
    diff = reference.sndr_db[j] - curve.sndr_db[i]
    ok = np.isfinite(diff)
    if not ok.any():
        raise ValueError("Curves share no amplitude with finite SNDR")
    k = int(np.argmax(np.where(ok, diff, -np.inf)))
    return float(diff[k]), float(common[k])


def _sweep_point(scenario, amplitude):
    try:
        return float(scenario.sndr_at(amplitude)), None
    except (SimulationError, SelectionError) as e:
        return np.nan, "%s: %s" % (type(e).__name__, e)


def sweep_dynamic_range(scenario, amplitudes_dbfs, n_jobs=1, callback=None,
                        label=None):
    """Measure SNDR over a list of input amplitudes.

    Parameters
    ----------
    scenario : object
        Anything with a ``sndr_at(amplitude_dbfs)`` method running the
        whole pipeline at one amplitude, such as `skdem.Scenario`.

    amplitudes_dbfs : list of float
        Non-empty, strictly increasing.

    n_jobs : int, default=1
        Number of points evaluated in parallel; -1 uses every core.

    callback : callable, list of callables, optional
        Called with the partial `DrCurve` after every batch of points;
        returning True stops the sweep.

    label : str, optional
        Label of the resulting curve.

    Returns
    -------
    curve : DrCurve
        Failing points are kept with NaN SNDR and listed in
        `curve.failures`.
    """
    amplitudes = [float(a) for a in amplitudes_dbfs]
    if not amplitudes:
        raise ValueError("Need at least one amplitude")
    if np.any(np.diff(amplitudes) <= 0):
        raise ValueError("Amplitudes must be strictly increasing, got %s"
                         % amplitudes)
    callbacks = check_callback(callback)
    batch = max(1, effective_n_jobs(n_jobs))
    done, sndr, failures = [], [], {}
    for start in range(0, len(amplitudes), batch):
        chunk = amplitudes[start:start + batch]
        results = Parallel(n_jobs=n_jobs)(
            delayed(_sweep_point)(scenario, a) for a in chunk)
        for a, (value, error) in zip(chunk, results):
            done.append(a)
            sndr.append(value)
            if error is not None:
                logger.warning("Sweep point %g dBFS failed: %s", a, error)
                failures[a] = error
        curve = DrCurve(done, sndr, failures, label)
        if any(c(curve) for c in callbacks):
            logger.info("Sweep stopped by callback after %d points",
                        len(done))
            break
    return curve


def write_psd_csv(path, psd):
    """Export a PSD with columns freq_hz, power_db."""
    write_csv(path, [psd.freqs, psd.power_db], ["freq_hz", "power_db"],
              ["%.17g", "%.17g"])


def write_dr_csv(path, curve):
    """Export a dynamic-range curve with columns amplitude_dbfs, sndr_db."""
    write_csv(path, [curve.amplitudes_dbfs, curve.sndr_db],
              ["amplitude_dbfs", "sndr_db"], ["%.17g", "%.17g"])


def read_dr_csv(path, label=None):
    """Read a curve written by `write_dr_csv`."""
    columns = read_csv(path)
    return DrCurve(columns["amplitude_dbfs"], columns["sndr_db"],
                   label=label)
