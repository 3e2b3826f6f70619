"""Unit-element DAC: analog reconstruction from selection masks.

One unit element weighs one quantizer step, so code k of an ideal
M-element DAC produces ``(k - M/2) * delta``.
"""
import logging

import numpy as np

from .bank import ElementBank
from .exceptions import SelectionError
from .selection import AddedSequenceDWA
from .selection import SelectionMask
from .selection import cook_selector
from .utils import write_csv

logger = logging.getLogger(__name__)


class DacOutput(object):
    """Result of a DAC run.

    Attributes
    ----------
    v : ndarray, shape (n_cycles,)
        Analog output v(n).

    e : ndarray, shape (n_cycles,)
        Mismatch error e(n), zero for an ideal bank.

    pointer_trace : ndarray of int, shape (n_cycles,)
        Pointer before every cycle, tau(n).

    codes : ndarray of int, shape (n_cycles,)
        Codes y(n) presented to the selector.

    added : ndarray of int, shape (n_cycles,)
        Added sequence s(n), all zero unless the selector is SaDWA.

    masks : ndarray of bool, shape (n_cycles, modulus)
        Fired elements of every cycle.

    delta : float
        Weight of a unit element.
    """
    def __init__(self, v, e, pointer_trace, codes, added, masks, delta):
        self.v = v
        self.e = e
        self.pointer_trace = pointer_trace
        self.codes = codes
        self.added = added
        self.masks = masks
        self.delta = delta
        for a in (v, e, pointer_trace, codes, added, masks):
            a.setflags(write=False)
        if not (len(v) == len(e) == len(pointer_trace) == len(codes)):
            raise ValueError("DAC output sequences differ in length")

    @property
    def modulus(self):
        return self.masks.shape[1]

    def __len__(self):
        return len(self.v)

    def compensated(self):
        """v(n) minus the nominal weight of the added sequence, delta * s(n).

        For constant and periodic sequences this only moves energy at DC
        and at half the sampling rate.
        """
        return self.v - self.delta * self.added

    def ideal(self):
        """Output of a perfectly matched DAC for the same codes,
        compensated like `compensated`."""
        return (self.codes - self.modulus / 2.) * self.delta


def _mask_bits(mask):
    if isinstance(mask, SelectionMask):
        return mask.bits
    return np.asarray(mask, dtype=bool)


def dac_convert(mask, bank, delta=1.):
    """Analog output of one cycle.

    Parameters
    ----------
    mask : SelectionMask or array-like of bool, shape (M,)

    bank : ElementBank
        Gains of the M elements.

    delta : float, default=1.0
        Weight of a nominal unit element.

    Returns
    -------
    v : float
        ``delta * (sum of selected gains - M/2)``.
    """
    bits = _mask_bits(mask)
    if bits.size != bank.count:
        raise ValueError("Mask of %d elements does not match a bank of %d"
                         % (bits.size, bank.count))
    return delta * (float(np.sum(bank.gains[bits])) - bank.count / 2.)


def element_error(mask, bank, delta=1.):
    """Mismatch error of one cycle, ``delta * sum(g_k - 1)`` over the mask.

    Equals ``dac_convert(mask, bank) - dac_convert(mask, ideal bank)``.
    """
    bits = _mask_bits(mask)
    if bits.size != bank.count:
        raise ValueError("Mask of %d elements does not match a bank of %d"
                         % (bits.size, bank.count))
    return delta * float(np.sum(bank.gains[bits] - bank.nominal_gain))


def run_dac(codes, selector, bank, added=None, delta=1.):
    """Convert a code sequence through an element selector and a bank.

    Parameters
    ----------
    codes : array-like of int, shape (n_cycles,)
        Codes y(n).

    selector : ElementSelector or str
        Selector owning the pointer state, or a strategy name for
        `skdem.selection.cook_selector`.

    bank : ElementBank
        Element gains; its size must equal the selector modulus.

    added : AddedSequenceSpec, optional
        Added sequence of a SaDWA selector, overriding the selector's
        own.

    delta : float, default=1.0
        Weight of a nominal unit element.

    Returns
    -------
    output : DacOutput
    """
    if not isinstance(bank, ElementBank):
        raise ValueError("bank should be an ElementBank, got %r" % (bank,))
    selector = cook_selector(selector, bank.count, added=added)
    if selector.modulus != bank.count:
        raise ValueError("Selector over %d elements cannot drive a bank of "
                         "%d" % (selector.modulus, bank.count))
    codes = np.asarray(codes, dtype=int).ravel()
    if isinstance(selector, AddedSequenceDWA):
        spec = added if added is not None else selector.added
        s = spec.generate(codes.size)
    elif added is not None:
        raise ValueError("An added sequence needs the 'sadwa' strategy, "
                         "got %r" % (selector,))
    else:
        s = np.zeros(codes.size, dtype=int)

    try:
        pointers, masks = selector.run(codes, s)
    except SelectionError:
        logger.info("Selection failed for %r", selector)
        raise
    v = delta * (masks @ bank.gains - bank.count / 2.)
    e = delta * (masks @ (bank.gains - bank.nominal_gain))
    logger.debug("Converted %d cycles with %r", codes.size, selector)
    return DacOutput(v, e, np.asarray(pointers, dtype=int), codes,
                     np.asarray(s, dtype=int), masks, delta)


def write_dac_csv(path, output):
    """Export a DAC run with columns n, code, s, tau, v, e."""
    write_csv(path, [np.arange(len(output)), output.codes, output.added,
                     output.pointer_trace, output.v, output.e],
              ["n", "code", "s", "tau", "v", "e"],
              ["%d", "%d", "%d", "%d", "%.17g", "%.17g"])
