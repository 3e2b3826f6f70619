# -*- encoding: UTF-8 -*-
"""Plotting functions."""
import sys

import numpy as np

from .spectral import DrCurve
from .utils import atomic_write

# For plot tests, matplotlib must be set to headless mode early
if 'pytest' in sys.modules:
    import matplotlib

    matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.pyplot import cm  # noqa: E402


def plot_psd(psd, band_edge_hz=None, tones=None, **kwargs):
    """Plot a power spectrum in dB against log-frequency.

    Parameters
    ----------
    psd : `PsdEstimate`
        The spectrum to plot. The DC bin is not drawn.

    band_edge_hz : float, optional
        Signal band edge, marked with a vertical line.

    tones : `ToneReport`, optional
        Detected tones, marked on the curve.

    ax : `Axes`, optional
        The matplotlib axes on which to draw the plot, or `None` to create
        a new one.

    label : str, optional
        Legend entry of the curve.

    Returns
    -------
    ax : `Axes`
        The matplotlib axes.
    """
    ax = kwargs.get("ax", None)
    label = kwargs.get("label", None)
    if ax is None:
        ax = plt.gca()

    ax.set_title("Power spectral density")
    ax.set_xlabel("Frequency [Hz]")
    ax.set_ylabel("Power per bin [dB]")
    ax.grid(which="both", alpha=0.3)

    freqs = psd.freqs[1:]
    power_db = psd.power_db[1:]
    ax.semilogx(freqs, power_db, lw=0.8, label=label)

    if band_edge_hz is not None:
        ax.axvline(band_edge_hz, linestyle="--", color="r", lw=1,
                   label="Band edge")
    if tones is not None and tones.count:
        f = np.array([t[0] for t in tones.tones])
        ax.plot(f, psd.power_db[np.round(f / psd.bin_width_hz).astype(int)],
                "v", color="k", markersize=5, label="Tones")
    if label or band_edge_hz is not None:
        ax.legend(loc="best")
    return ax


def plot_dynamic_range(*args, **kwargs):
    """Plot one or several SNDR curves against input amplitude.

    Parameters
    ----------
    args[i] : `DrCurve` or tuple
        The curve(s) to plot. A tuple holds a string label and a
        `DrCurve`; otherwise the curve's own label is used.

    ax : `Axes`, optional
        The matplotlib axes on which to draw the plot, or `None` to create
        a new one.

    Returns
    -------
    ax : `Axes`
        The matplotlib axes.
    """
    ax = kwargs.get("ax", None)
    if ax is None:
        ax = plt.gca()

    ax.set_title("Dynamic range")
    ax.set_xlabel("Input amplitude [dBFS]")
    ax.set_ylabel("SNDR [dB]")
    ax.grid()

    colors = cm.viridis(np.linspace(0.0, 0.9, max(len(args), 1)))
    labelled = False
    for curve, color in zip(args, colors):
        if isinstance(curve, tuple):
            name, curve = curve
        else:
            name = getattr(curve, "label", None)
        if not isinstance(curve, DrCurve):
            raise ValueError("Expected a DrCurve, got %r" % (curve,))
        ax.plot(curve.amplitudes_dbfs, curve.sndr_db, c=color, marker=".",
                markersize=8, lw=1.5, label=name)
        labelled = labelled or bool(name)

    ax.axhline(0, color="k", lw=0.5)
    if labelled:
        ax.legend(loc="best")
    return ax


def save_svg(fig, path):
    """Write `fig` as an SVG whose bytes depend only on its content."""
    with plt.rc_context({"svg.hashsalt": "skdem", "svg.fonttype": "none"}):
        with atomic_write(path, "wb") as f:
            fig.savefig(f, format="svg", metadata={"Date": None})
    plt.close(fig)
