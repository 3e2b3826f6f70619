import numpy as np

from ..exceptions import SelectionError
from ..utils import write_csv


class SelectionMask(object):
    """Unit elements fired in one cycle.

    Parameters
    ----------
    bits : array-like of bool, shape (modulus,)
        ``bits[k - 1]`` is True when element k fires.

    run_start : int, optional
        Element the run started at. Only a full mask needs it, since
        its bits do not show where firing began; defaults to 1 there.
    """
    def __init__(self, bits, run_start=None):
        bits = np.array(bits, dtype=bool).ravel()
        bits.setflags(write=False)
        self.bits = bits
        if run_start is not None and not 1 <= run_start <= bits.size:
            raise ValueError("run_start must lie in [1, %d], got %s"
                             % (bits.size, run_start))
        self.run_start = run_start

    @classmethod
    def from_run(cls, start, length, modulus):
        """Circular run of `length` elements starting at element `start`."""
        offsets = (np.arange(modulus) - (start - 1)) % modulus
        return cls(offsets < length,
                   run_start=int(start) if length else None)

    @property
    def popcount(self):
        return int(np.count_nonzero(self.bits))

    @property
    def indices(self):
        """1-based indices of the fired elements, in firing order."""
        idx = np.flatnonzero(self.bits) + 1
        start = self.start
        if start is None:
            return idx
        return np.concatenate([idx[idx >= start], idx[idx < start]])

    @property
    def start(self):
        """First element of the circular run, None for an empty mask."""
        bits = self.bits
        if not bits.any():
            return None
        if self.run_start is not None:
            return self.run_start
        if bits.all():
            return 1
        # a run starts where a set bit follows a cleared one
        starts = np.flatnonzero(bits & ~np.roll(bits, 1))
        return int(starts[0]) + 1

    def is_contiguous(self):
        """Whether the set bits form a single circular run."""
        bits = self.bits
        if bits.all() or not bits.any():
            return True
        return np.count_nonzero(bits & ~np.roll(bits, 1)) == 1

    def to_bitstring(self):
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self):
        return self.bits.size

    def __eq__(self, other):
        return (isinstance(other, SelectionMask) and
                np.array_equal(self.bits, other.bits))

    def __repr__(self):
        return "SelectionMask('{}')".format(self.to_bitstring())


class ElementSelector(object):
    """Base class of the element selection strategies.

    A selector owns the pointer state of one simulation run. `select`
    serves a single cycle; `run` serves a whole code sequence at once
    and must give the same result as calling `select` repeatedly from
    a fresh state.

    Parameters
    ----------
    modulus : int
        Number of unit elements M.

    initial_pointer : int, default=1
        Pointer p(0), in ``[1, modulus]``.
    """
    def __init__(self, modulus, initial_pointer=1):
        if modulus < 1:
            raise ValueError("modulus must be >= 1, got %s" % modulus)
        if not 1 <= initial_pointer <= modulus:
            raise ValueError("initial_pointer must lie in [1, %d], got %s"
                             % (modulus, initial_pointer))
        self.modulus = int(modulus)
        self.initial_pointer = int(initial_pointer)
        self.reset()

    def reset(self):
        """Return the selector to its initial state."""
        raise NotImplementedError

    def select(self, code, s=0):
        """Select the elements for one cycle.

        Returns
        -------
        mask : SelectionMask

        pointer_before : int
            Pointer value before the update, tau(n).
        """
        raise NotImplementedError

    def run(self, codes, added=None):
        """Select elements for a whole code sequence from a fresh state.

        Parameters
        ----------
        codes : array-like of int, shape (n_cycles,)

        added : array-like of {0, 1}, shape (n_cycles,), optional
            Added sequence s(n); zero when omitted.

        Returns
        -------
        pointers : ndarray of int, shape (n_cycles,)
            tau(n), the pointer before each cycle.

        masks : ndarray of bool, shape (n_cycles, modulus)
        """
        raise NotImplementedError

    def _check_totals(self, codes, added):
        codes = np.asarray(codes, dtype=int).ravel()
        if added is None:
            added = np.zeros_like(codes)
        else:
            added = np.asarray(added, dtype=int).ravel()
            if added.shape != codes.shape:
                raise ValueError("codes and added sequence differ in "
                                 "length: %d != %d"
                                 % (codes.size, added.size))
            bad = np.flatnonzero((added != 0) & (added != 1))
            if bad.size:
                raise SelectionError("added sequence value %d is not a bit"
                                     % added[bad[0]], cycle=int(bad[0]))
        totals = codes + added
        bad = np.flatnonzero((codes < 0) | (totals > self.modulus))
        if bad.size:
            n = int(bad[0])
            raise SelectionError("code %d + s %d does not fit %d elements"
                                 % (codes[n], added[n], self.modulus),
                                 cycle=n)
        return codes, added, totals

    def __repr__(self):
        return "{}(modulus={}, initial_pointer={})".format(
            type(self).__name__, self.modulus, self.initial_pointer)


def runs_to_masks(starts, lengths, modulus):
    """Boolean masks of circular runs, one row per cycle."""
    starts = np.asarray(starts)
    lengths = np.asarray(lengths)
    offsets = (np.arange(modulus)[None, :] - (starts[:, None] - 1)) % modulus
    return offsets < lengths[:, None]


def write_selection_csv(path, codes, added, pointers, masks):
    """Export a selection trace.

    Columns are n, code, s, pointer_before and mask, the mask being a
    bitstring whose first character is element 1.
    """
    masks = np.asarray(masks, dtype=bool)
    bitstrings = ["".join("1" if b else "0" for b in row) for row in masks]
    write_csv(path, [np.arange(len(codes)), codes, added, pointers,
                     bitstrings],
              ["n", "code", "s", "pointer_before", "mask"],
              ["%d", "%d", "%d", "%d", "%s"])
