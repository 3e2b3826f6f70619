import numbers
import os
import tempfile
from contextlib import contextmanager

import numpy as np
from joblib import dump as dump_
from joblib import load as load_
from sklearn.utils import check_random_state as sk_check_random_state

__all__ = (
    "load",
    "dump",
)


def dump(res, filename, **kwargs):
    """
    Store a skdem result (`DrCurve`, `DacOutput`, ...) into a file.

    Parameters
    ----------
    res : object
        Result object to be stored.

    filename : string or `pathlib.Path`
        The path of the file in which it is to be stored. The compression
        method corresponding to one of the supported filename extensions ('.z',
        '.gz', '.bz2', '.xz' or '.lzma') will be used automatically.

    **kwargs : other keyword arguments
        All other keyword arguments will be passed to `joblib.dump`.
    """
    dump_(res, filename, **kwargs)


def load(filename, **kwargs):
    """
    Reconstruct a skdem result from a file persisted with skdem.dump.

    Parameters
    ----------
    filename : string or `pathlib.Path`
        The path of the file from which to load the result.

    **kwargs : other keyword arguments
        All other keyword arguments will be passed to `joblib.load`.

    Returns
    -------
    res : object
        Reconstructed result instance.
    """
    return load_(filename, **kwargs)


def check_random_state(seed):
    """Turn `seed` into a `np.random.RandomState` instance.

    Unlike `sklearn.utils.check_random_state`, integer seeds may use the
    full 64-bit range: they are expanded through a `SeedSequence` into a
    Mersenne Twister state.

    Parameters
    ----------
    seed : None, int or RandomState instance
        Seed of the random source.

    Returns
    -------
    rng : RandomState
    """
    if isinstance(seed, (numbers.Integral, np.integer)):
        if seed < 0:
            raise ValueError("seed must be non-negative, got %d" % seed)
        return np.random.RandomState(np.random.MT19937(int(seed)))
    return sk_check_random_state(seed)


@contextmanager
def atomic_write(path, mode="w"):
    """Open a temporary file next to `path` and move it into place on exit.

    Readers never observe a partially written file; on error the
    temporary file is removed and `path` is left untouched.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-",
                               suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_csv(path, columns, header, fmt):
    """Write equally long columns as a comma separated file.

    Parameters
    ----------
    path : str or `pathlib.Path`
        Destination, written atomically.

    columns : list of array-like
        Columns of the table, all of the same length.

    header : list of str
        Column names, written as the first line.

    fmt : list of str
        One %-format per column.
    """
    lengths = {len(c) for c in columns}
    if len(lengths) > 1:
        raise ValueError("All columns must have the same length, got %s"
                         % sorted(lengths))
    table = np.empty((lengths.pop() if lengths else 0, len(columns)),
                     dtype=object)
    for j, column in enumerate(columns):
        table[:, j] = list(column)
    with atomic_write(path) as f:
        np.savetxt(f, table, fmt=fmt, delimiter=",",
                   header=",".join(header), comments="")


def read_csv(path, dtype=float):
    """Read a file written by `write_csv` into a dict of columns."""
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=dtype,
                         encoding="utf-8")
    data = np.atleast_1d(data)
    return {name: data[name] for name in data.dtype.names}
