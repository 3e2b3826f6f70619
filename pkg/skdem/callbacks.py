"""Monitor and influence dynamic-range sweeps via callbacks.

Callbacks are callables invoked after every batch of sweep points with
the partial `DrCurve` measured so far. They can report progress or stop
the sweep early by returning `True`.
"""
import logging
from collections.abc import Callable
from time import time

import numpy as np

from .utils import dump

logger = logging.getLogger(__name__)


def check_callback(callback):
    """
    Check if callback is a callable or a list of callables.
    """
    if callback is None:
        return []
    if isinstance(callback, Callable):
        return [callback]
    if isinstance(callback, (list, tuple)) and \
            all(isinstance(c, Callable) for c in callback):
        return list(callback)
    raise ValueError("callback should be either a callable or "
                     "a list of callables.")


class VerboseCallback(object):
    """
    Log every newly measured sweep point.

    Parameters
    ----------
    n_total : int
        Number of points of the sweep.

    Attributes
    ----------
    n_seen : int
        Number of points reported so far.
    """
    def __init__(self, n_total):
        self.n_total = n_total
        self.n_seen = 0
        self._start_time = time()

    def __call__(self, curve):
        """
        Parameters
        ----------
        curve : `DrCurve`
            The points measured so far.
        """
        elapsed = time() - self._start_time
        for a, s in curve.points[self.n_seen:]:
            self.n_seen += 1
            logger.info("Point %d/%d: %.2f dBFS -> SNDR %.2f dB",
                        self.n_seen, self.n_total, a, s)
        logger.info("Time taken: %0.4f s", elapsed)
        self._start_time = time()


class TimerCallback(object):
    """
    Record the wall time of every batch of sweep points.

    Attributes
    ----------
    iter_time : list
        `iter_time[i]` is the time taken by batch `i`.
    """
    def __init__(self):
        self._time = time()
        self.iter_time = []

    def __call__(self, curve):
        self.iter_time.append(time() - self._time)
        self._time = time()


class EarlyStopper(object):
    """Decide whether to continue a sweep given the curve so far."""
    def __call__(self, curve):
        return self._criterion(curve)

    def _criterion(self, curve):
        """Return True to stop, False or None to go on."""
        raise NotImplementedError("The _criterion method should be implemented"
                                  " by subclasses of EarlyStopper.")


class DeadlineStopper(EarlyStopper):
    """
    Stop the sweep before running out of a fixed time budget.

    Parameters
    ----------
    total_time : float
        Budget in seconds.
    """
    def __init__(self, total_time):
        super(DeadlineStopper, self).__init__()
        self._time = time()
        self.iter_time = []
        self.total_time = total_time

    def _criterion(self, curve):
        self.iter_time.append(time() - self._time)
        self._time = time()
        remaining = self.total_time - np.sum(self.iter_time)
        return remaining <= np.max(self.iter_time)


class CheckpointSaver(object):
    """
    Save the partial curve after every batch with :func:`skdem.dump`.

    Parameters
    ----------
    checkpoint_path : str
        Location of the checkpoint.

    **dump_options
        Passed on to `skdem.dump`, like `compress=9`.
    """
    def __init__(self, checkpoint_path, **dump_options):
        self.checkpoint_path = checkpoint_path
        self.dump_options = dump_options

    def __call__(self, curve):
        dump(curve, self.checkpoint_path, **self.dump_options)
