"""Data Weighted Averaging: circular, successive element selection.

Elements are numbered 1 .. M. A code y fires the y elements starting at
the pointer p(n) and the pointer then moves past them::

    p(n + 1) = R_M(p(n) + y(n)),   R_M(k) = k - M * floor((k - 1) / M)
"""
from math import gcd

import numpy as np

from .base import ElementSelector
from .base import SelectionMask
from .base import runs_to_masks
from ..exceptions import SelectionError


def wrap_rl(k, modulus):
    """Wrap a positive integer onto ``1 .. modulus``.

    Parameters
    ----------
    k : int or array of int
        Values, all ``>= 1``.

    modulus : int
        Number of elements M, ``>= 1``.

    Returns
    -------
    wrapped : int or array of int
        ``k - M * floor((k - 1) / M)``.

    Examples
    --------
    >>> wrap_rl(8, 7), wrap_rl(7, 7), wrap_rl(16, 8)
    (1, 7, 8)
    """
    if modulus < 1:
        raise ValueError("modulus must be >= 1, got %s" % modulus)
    if np.any(np.asarray(k) < 1):
        raise ValueError("k must be >= 1, got %s" % (k,))
    return k - modulus * ((k - 1) // modulus)


class DwaState(object):
    """Pointer of a DWA selector.

    Parameters
    ----------
    pointer : int
        Current pointer p, in ``[1, modulus]``.

    modulus : int
        Number of elements M.
    """
    __slots__ = ("pointer", "modulus")

    def __init__(self, pointer, modulus):
        if modulus < 1:
            raise ValueError("modulus must be >= 1, got %s" % modulus)
        if not 1 <= pointer <= modulus:
            raise ValueError("pointer must lie in [1, %d], got %s"
                             % (modulus, pointer))
        self.pointer = int(pointer)
        self.modulus = int(modulus)

    def __eq__(self, other):
        return (isinstance(other, DwaState) and
                (self.pointer, self.modulus) ==
                (other.pointer, other.modulus))

    def __repr__(self):
        return "DwaState(pointer={}, modulus={})".format(self.pointer,
                                                         self.modulus)


def dwa_select(state, y):
    """Fire `y` elements from the pointer on and advance the pointer.

    Parameters
    ----------
    state : DwaState

    y : int
        Code, ``0 <= y <= state.modulus``.

    Returns
    -------
    mask : SelectionMask
        Elements ``R_M(p + j)`` for ``j = 0 .. y - 1``.

    state : DwaState
        New state with pointer ``R_M(p + y)``.
    """
    if not 0 <= y <= state.modulus:
        raise SelectionError("code %s outside [0, %d]" % (y, state.modulus))
    mask = SelectionMask.from_run(state.pointer, y, state.modulus)
    new_pointer = wrap_rl(state.pointer + int(y), state.modulus)
    return mask, DwaState(new_pointer, state.modulus)


def pointer_trace(totals, modulus, initial_pointer=1):
    """Pointer before every cycle for a sequence of element counts.

    Equivalent to iterating ``p <- R_M(p + total)``, computed with a
    cumulative sum.
    """
    totals = np.asarray(totals, dtype=np.int64)
    advanced = np.cumsum(totals) - totals
    return (initial_pointer - 1 + advanced) % modulus + 1


def pointer_period(code, modulus):
    """Period of the pointer orbit under a constant code.

    Examples
    --------
    >>> pointer_period(4, 8), pointer_period(5, 8), pointer_period(3, 7)
    (2, 8, 7)
    """
    return modulus // gcd(int(code), int(modulus))


def limit_cycle_period(trace, max_period=None, min_repeats=2):
    """Smallest period of the tail of a pointer trace.

    Parameters
    ----------
    trace : array-like of int
        Pointer values tau(n).

    max_period : int or None
        Largest period tried, by default ``len(trace) // min_repeats``.

    min_repeats : int, default=2
        The periodic tail must span at least this many periods.

    Returns
    -------
    period : int or None
        None when no period up to `max_period` explains the second half
        of the trace.
    """
    trace = np.asarray(trace)
    tail = trace[trace.size // 2:]
    if max_period is None:
        max_period = tail.size // min_repeats
    for period in range(1, max_period + 1):
        if tail.size < min_repeats * period:
            break
        if np.array_equal(tail[period:], tail[:-period]):
            return period
    return None


class DataWeightedAveraging(ElementSelector):
    """DWA selector over `modulus` unit elements.

    Parameters
    ----------
    modulus : int
        Number of unit elements M.

    initial_pointer : int, default=1
        Pointer p(0).
    """
    def reset(self):
        self.state = DwaState(self.initial_pointer, self.modulus)

    def select(self, code, s=0):
        pointer_before = self.state.pointer
        mask, self.state = dwa_select(self.state, int(code) + int(s))
        return mask, pointer_before

    def run(self, codes, added=None):
        codes, added, totals = self._check_totals(codes, added)
        pointers = pointer_trace(totals, self.modulus, self.initial_pointer)
        masks = runs_to_masks(pointers, totals, self.modulus)
        return pointers, masks
