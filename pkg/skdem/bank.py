"""Unit-element banks: mismatched DAC element gains and their statistics.

Gains are dimensionless multipliers of the unit-element weight; the
absolute weight (the quantizer step) is applied by `skdem.dac`.
"""
import logging
import numbers
import os

import numpy as np

from .exceptions import ConfigurationError
from .utils import atomic_write
from .utils import check_random_state

logger = logging.getLogger(__name__)

# Measured gain set of the eight-element bank used in the reference
# experiment (sample standard deviation 1.16 %).
MEASURED_GAINS = (1.0109, 1.0141, 0.9871, 1.0143,
                  1.0046, 0.9861, 0.9923, 1.0016)

DISTRIBUTIONS = ("uniform", "normal")


class ElementBank(object):
    """Gains of the `count` unit elements of a DAC.

    Parameters
    ----------
    gains : array-like, shape (count,)
        Gain of every element, finite and strictly positive.

    nominal_gain : float, default=1.0
        Gain of an ideal element.

    name : str or None
        Preset name or file the bank was loaded from, if any.
    """
    def __init__(self, gains, nominal_gain=1.0, name=None):
        gains = np.array(gains, dtype=float).ravel()
        if gains.size < 1:
            raise ValueError("An element bank needs at least one element.")
        if not np.all(np.isfinite(gains)) or np.any(gains <= 0):
            raise ValueError("Element gains must be finite and strictly "
                             "positive, got %s" % gains)
        gains.setflags(write=False)
        self.gains = gains
        self.nominal_gain = float(nominal_gain)
        self.name = name

    @property
    def count(self):
        return self.gains.size

    def __len__(self):
        return self.count

    def __eq__(self, other):
        return (isinstance(other, ElementBank) and
                self.nominal_gain == other.nominal_gain and
                np.array_equal(self.gains, other.gains))

    def __repr__(self):
        return "ElementBank(count={}, name={!r})".format(self.count,
                                                         self.name)

    @classmethod
    def ideal(cls, count):
        """Bank of `count` perfectly matched elements."""
        return cls(np.ones(count), name="ideal")

    def truncate(self, count):
        """Bank made of the first `count` elements."""
        if not 1 <= count <= self.count:
            raise ValueError("Cannot keep %d of %d elements"
                             % (count, self.count))
        return ElementBank(self.gains[:count], self.nominal_gain,
                           name=self.name)

    def save(self, path):
        """Write the gains as one decimal number per line.

        The shortest round-tripping representation of every gain is
        written, so `load_bank(path)` reproduces the bank exactly.
        """
        with atomic_write(path) as f:
            for g in self.gains:
                f.write("%r\n" % float(g))


class MismatchSpec(object):
    """Statistics of random element mismatch.

    Parameters
    ----------
    sigma : float
        Relative standard deviation of the gains (0.0116 is 1.16 %).

    distribution : "uniform" or "normal", default="uniform"
        - "uniform" draws from ``[1 - sqrt(3) sigma, 1 + sqrt(3) sigma]``,
          whose standard deviation is `sigma`;
        - "normal" draws from ``N(1, sigma**2)``.

    seed : int, default=0
        Seed of the random source, any non-negative 64-bit integer.
    """
    def __init__(self, sigma, distribution="uniform", seed=0):
        if not isinstance(sigma, numbers.Real) or not np.isfinite(sigma):
            raise ValueError("sigma must be a finite number, got %r"
                             % (sigma,))
        if sigma < 0:
            raise ValueError("sigma must be >= 0, got %s" % sigma)
        if distribution not in DISTRIBUTIONS:
            raise ValueError("distribution should be one of %s, got %r"
                             % (DISTRIBUTIONS, distribution))
        self.sigma = float(sigma)
        self.distribution = distribution
        self.seed = int(seed)

    def __eq__(self, other):
        return (isinstance(other, MismatchSpec) and
                (self.sigma, self.distribution, self.seed) ==
                (other.sigma, other.distribution, other.seed))

    def __repr__(self):
        return "MismatchSpec(sigma={}, distribution='{}', seed={})".format(
            self.sigma, self.distribution, self.seed)


def generate_element_bank(count, spec):
    """Draw a bank of `count` i.i.d. element gains around 1.0.

    Parameters
    ----------
    count : int
        Number of unit elements, at least 1.

    spec : MismatchSpec
        Spread, distribution and seed of the gains.

    Returns
    -------
    bank : ElementBank
        The same `(count, spec)` always yields the same gains.

    Examples
    --------
    >>> bank = generate_element_bank(8, MismatchSpec(sigma=0.0))
    >>> bank.gains.tolist() == [1.0] * 8
    True
    """
    if not isinstance(count, (numbers.Integral, np.integer)) or count < 1:
        raise ValueError("count must be a positive integer, got %r"
                         % (count,))
    rng = check_random_state(spec.seed)
    if spec.distribution == "uniform":
        half_width = np.sqrt(3.) * spec.sigma
        gains = rng.uniform(1. - half_width, 1. + half_width, size=count)
    else:
        gains = rng.normal(1., spec.sigma, size=count)
    if np.any(gains <= 0):
        raise ValueError("sigma=%s produced non-positive gains; use a "
                         "smaller spread" % spec.sigma)
    logger.debug("Generated %d gains with %r", count, spec)
    return ElementBank(gains, name="%s-%g-%d" % (spec.distribution,
                                                   spec.sigma, spec.seed))


def bank_statistics(bank):
    """Mean, sample standard deviation and worst deviation of a bank.

    Parameters
    ----------
    bank : ElementBank

    Returns
    -------
    mean : float
        Mean gain.

    sample_std : float
        Standard deviation with the ``n - 1`` denominator, 0 for a
        single element.

    max_abs_error : float
        Largest ``|g_k - nominal_gain|``.
    """
    gains = bank.gains
    mean = float(np.mean(gains))
    sample_std = float(np.std(gains, ddof=1)) if gains.size > 1 else 0.
    max_abs_error = float(np.max(np.abs(gains - bank.nominal_gain)))
    return mean, sample_std, max_abs_error


def load_bank(path):
    """Read a bank written by `ElementBank.save`.

    Blank lines and lines starting with ``#`` are ignored.
    """
    gains = np.loadtxt(path, dtype=float, comments="#", ndmin=1)
    return ElementBank(gains, name=os.path.basename(os.fspath(path)))


BANK_PRESETS = {
    "measured-bank-8": ("The eight measured gains of the reference "
                        "experiment (sigma 1.16 %)", MEASURED_GAINS),
    "measured-bank-7": ("First seven measured gains, the L = 7 bank of "
                        "plain DWA", MEASURED_GAINS[:7]),
    "ideal": ("Perfectly matched elements, sized to the selector", None),
}


def bank_preset(name, count=None):
    """Build a named bank.

    Parameters
    ----------
    name : str
        One of ``BANK_PRESETS``.

    count : int or None
        Required element count. Mandatory for "ideal"; for the other
        presets it is checked against the preset size.
    """
    if name not in BANK_PRESETS:
        raise ConfigurationError("Unknown bank preset %r, valid presets "
                                 "are %s" % (name, sorted(BANK_PRESETS)))
    gains = BANK_PRESETS[name][1]
    if gains is None:
        if count is None:
            raise ConfigurationError("Bank preset 'ideal' needs a count.")
        return ElementBank.ideal(count)
    bank = ElementBank(gains, name=name)
    if count is not None and count != bank.count:
        raise ConfigurationError("Bank preset %r has %d elements but %d are "
                                 "required" % (name, bank.count, count))
    return bank


def resolve_bank(source, count=None):
    """Build a bank from a preset name, a file path or a `MismatchSpec`."""
    if isinstance(source, ElementBank):
        bank = source
    elif isinstance(source, MismatchSpec):
        if count is None:
            raise ConfigurationError("A MismatchSpec bank needs a count.")
        bank = generate_element_bank(count, source)
    elif isinstance(source, (str, os.PathLike)):
        if str(source) in BANK_PRESETS:
            return bank_preset(str(source), count)
        if not os.path.isfile(source):
            raise ConfigurationError("%r is neither a bank preset nor a "
                                     "file" % (source,))
        try:
            bank = load_bank(source)
        except ValueError as e:
            raise ConfigurationError("Cannot read bank file %r: %s"
                                     % (source, e))
    else:
        raise ConfigurationError("Cannot build a bank from %r" % (source,))
    if count is not None and bank.count != count:
        raise ConfigurationError("Bank %r has %d elements but %d are "
                                 "required" % (bank.name, bank.count, count))
    return bank
