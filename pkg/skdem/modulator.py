"""Test-signal generation and a second-order multibit sigma-delta modulator.

The loop is a cascade of two delaying integrators with distributed
feedback of the previously quantized level::

    integ1[n] = integ1[n-1] + a1 * (x[n] - q[n-1])
    integ2[n] = integ2[n-1] + a2 * (integ1[n] - q[n-1])
    q[n]      = Q(integ2[n])

With ``a1 = a2 = 1`` the signal transfer function is 1 and the noise
transfer function is ``(1 - z^-1)^2``.
"""
import logging
import math
import numbers
import warnings

import numpy as np

from .exceptions import InstabilityError
from .exceptions import QuantizerOverloadWarning
from .utils import read_csv
from .utils import write_csv

logger = logging.getLogger(__name__)


class InputSpec(object):
    """Sine test input with an optional DC offset.

    Parameters
    ----------
    amplitude_dbfs : float
        Amplitude relative to the modulator full scale, ``-np.inf`` for
        no sine at all.

    freq_hz : float
        Sine frequency, strictly between 0 and Nyquist.

    sample_rate_hz : float
        Sampling frequency of the modulator.

    n_samples : int
        Number of samples to generate.

    dc_offset : float, default=0
        DC offset in units of the quantizer step.
    """
    def __init__(self, amplitude_dbfs, freq_hz, sample_rate_hz, n_samples,
                 dc_offset=0.):
        if sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive, got %s"
                             % sample_rate_hz)
        if not 0 < freq_hz < sample_rate_hz / 2.:
            raise ValueError("freq_hz must lie in (0, %s), got %s"
                             % (sample_rate_hz / 2., freq_hz))
        if not isinstance(n_samples, (numbers.Integral, np.integer)) or \
                n_samples < 1:
            raise ValueError("n_samples must be a positive integer, got %r"
                             % (n_samples,))
        if np.isnan(amplitude_dbfs) or amplitude_dbfs == np.inf:
            raise ValueError("amplitude_dbfs must be finite or -inf, got %s"
                             % amplitude_dbfs)
        self.amplitude_dbfs = float(amplitude_dbfs)
        self.freq_hz = float(freq_hz)
        self.sample_rate_hz = float(sample_rate_hz)
        self.n_samples = int(n_samples)
        self.dc_offset = float(dc_offset)

    def __repr__(self):
        return ("InputSpec(amplitude_dbfs={}, freq_hz={}, sample_rate_hz={}, "
                "n_samples={}, dc_offset={})".format(
                    self.amplitude_dbfs, self.freq_hz, self.sample_rate_hz,
                    self.n_samples, self.dc_offset))


class ModulatorConfig(object):
    """Second-order modulator with an `bits`-bit mid-rise quantizer.

    Parameters
    ----------
    bits : int, default=3
        Quantizer resolution m; the quantizer has 2**m levels and codes
        0 .. L with ``L = 2**m - 1``.

    delta : float, default=1.0
        Quantizer step.

    a1, a2 : float, default=1.0
        Gains of the first and second integrator paths.

    instability_bound : float, default=100.0
        Largest admissible ``|integ|`` in units of `delta`.
    """
    def __init__(self, bits=3, delta=1., a1=1., a2=1.,
                 instability_bound=100.):
        if not isinstance(bits, (numbers.Integral, np.integer)) or bits < 1:
            raise ValueError("bits must be a positive integer, got %r"
                             % (bits,))
        if not delta > 0:
            raise ValueError("delta must be > 0, got %s" % delta)
        if not instability_bound > 0:
            raise ValueError("instability_bound must be > 0, got %s"
                             % instability_bound)
        self.bits = int(bits)
        self.delta = float(delta)
        self.a1 = float(a1)
        self.a2 = float(a2)
        self.instability_bound = float(instability_bound)

    @property
    def quantizer_levels(self):
        return 2 ** self.bits

    @property
    def max_code(self):
        """L, the largest code."""
        return self.quantizer_levels - 1

    @property
    def full_scale(self):
        """Peak reconstruction level ``L * delta / 2``."""
        return self.max_code * self.delta / 2.

    @property
    def no_overload_amplitude(self):
        """Largest ``|x|`` that never overloads the quantizer.

        Holds for unit loop gains, where ``q - integ2`` is bounded by
        ``1.5 * delta`` besides the input itself.
        """
        return self.quantizer_levels / 2. * self.delta - 1.5 * self.delta

    def level(self, code):
        """Reconstruction level ``(code - L/2) * delta`` of `code`."""
        return (np.asarray(code) - self.max_code / 2.) * self.delta

    def __repr__(self):
        return ("ModulatorConfig(bits={}, delta={}, a1={}, a2={})"
                .format(self.bits, self.delta, self.a1, self.a2))


class SdmState(object):
    """Integrator states and the level fed back in the next cycle."""
    __slots__ = ("integ1", "integ2", "feedback")

    def __init__(self, integ1=0., integ2=0., feedback=0.):
        self.integ1 = integ1
        self.integ2 = integ2
        self.feedback = feedback

    def __repr__(self):
        return "SdmState(integ1={}, integ2={}, feedback={})".format(
            self.integ1, self.integ2, self.feedback)


def generate_input(spec, config=None):
    """Sample ``x(n) = A sin(2 pi f_X n / f_S) + X_off delta``.

    Parameters
    ----------
    spec : InputSpec

    config : ModulatorConfig, optional
        Defines full scale ``(2**m - 1) * delta / 2`` and delta.

    Returns
    -------
    x : ndarray, shape (n_samples,)
    """
    if config is None:
        config = ModulatorConfig()
    amplitude = config.full_scale * 10. ** (spec.amplitude_dbfs / 20.)
    n = np.arange(spec.n_samples)
    x = amplitude * np.sin(2 * np.pi * spec.freq_hz / spec.sample_rate_hz * n)
    return x + spec.dc_offset * config.delta


def quantize(v, config):
    """Mid-rise uniform quantizer with saturation.

    Decision thresholds sit at integer multiples of delta, so the two
    levels around zero are ``-delta/2`` (code ``2**(m-1) - 1``) and
    ``+delta/2`` (code ``2**(m-1)``).

    Examples
    --------
    >>> config = ModulatorConfig(bits=3)
    >>> quantize(0.25, config), quantize(-0.25, config), quantize(1e6, config)
    (4, 3, 7)
    """
    code = math.floor(v / config.delta) + config.quantizer_levels // 2
    return min(max(code, 0), config.max_code)


def sdm_step(state, x, config):
    """Advance the modulator by one cycle.

    Parameters
    ----------
    state : SdmState
        Updated in place.

    x : float
        Input sample.

    config : ModulatorConfig

    Returns
    -------
    code : int
        Quantizer code y(n).

    level : float
        Reconstruction level y_sd(n) of `code`.

    state : SdmState
    """
    q = state.feedback
    state.integ1 += config.a1 * (x - q)
    state.integ2 += config.a2 * (state.integ1 - q)
    bound = config.instability_bound * config.delta
    if not (abs(state.integ1) <= bound and abs(state.integ2) <= bound):
        raise InstabilityError("integrator state exceeded %g" % bound,
                               state=state)
    code = quantize(state.integ2, config)
    level = (code - config.max_code / 2.) * config.delta
    state.feedback = level
    return code, level, state


def run_modulator(spec, config=None):
    """Run the modulator on the test input of `spec` from a zero state.

    Parameters
    ----------
    spec : InputSpec

    config : ModulatorConfig, optional

    Returns
    -------
    codes : ndarray of int, shape (n_samples,)
        Codes y(n).

    levels : ndarray of float, shape (n_samples,)
        Quantized levels y_sd(n).
    """
    if config is None:
        config = ModulatorConfig()
    x = generate_input(spec, config)
    codes = np.empty(spec.n_samples, dtype=int)
    levels = np.empty(spec.n_samples, dtype=float)
    state = SdmState()
    overload = 0
    limit = config.quantizer_levels / 2. * config.delta
    for n, xn in enumerate(x.tolist()):
        try:
            code, level, state = sdm_step(state, xn, config)
        except InstabilityError as e:
            e.cycle = n
            logger.info("Modulator unstable at cycle %d: %r", n, state)
            raise
        if not -limit <= state.integ2 < limit:
            overload += 1
        codes[n] = code
        levels[n] = level
    if overload:
        warnings.warn("Quantizer overloaded in %d of %d cycles"
                      % (overload, spec.n_samples), QuantizerOverloadWarning)
    return codes, levels


def write_codes_csv(path, codes, levels):
    """Export a code sequence as CSV with columns n, code, level."""
    write_csv(path, [np.arange(len(codes)), codes, levels],
              ["n", "code", "level"], ["%d", "%d", "%.17g"])


def read_codes_csv(path):
    """Read the codes and levels of a CSV written by `write_codes_csv`."""
    columns = read_csv(path)
    return columns["code"].astype(int), columns["level"]
