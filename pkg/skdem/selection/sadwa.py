"""Added-sequence DWA (SaDWA).

A binary sequence s(n) is added to the code before the DWA pointer
logic, ``y(n) + s(n)``, and the DAC carries one extra element
(``M = L + 1``) to accommodate it. Breaking the arithmetic relation
between the code and the modulus breaks the pointer limit cycles that
produce in-band tones.
"""
import numpy as np

from .dwa import DataWeightedAveraging
from .dwa import dwa_select
from ..exceptions import SelectionError
from ..utils import check_random_state

SEQUENCE_KINDS = ("constant_zero", "constant_one", "periodic_01",
                  "seeded_random")


class AddedSequenceSpec(object):
    """Binary sequence s(n) added to the DWA input.

    Parameters
    ----------
    kind : str, default="constant_zero"
        - "constant_zero": s(n) = 0;
        - "constant_one": s(n) = 1;
        - "periodic_01": s(n) = n mod 2;
        - "seeded_random": fair coin flips drawn from `seed`.

    seed : int, default=0
        Seed of the random kind, ignored otherwise.
    """
    def __init__(self, kind="constant_zero", seed=0):
        if kind not in SEQUENCE_KINDS:
            raise ValueError("kind should be one of %s, got %r"
                             % (SEQUENCE_KINDS, kind))
        self.kind = kind
        self.seed = int(seed)

    def generate(self, n_samples):
        """Values s(0) .. s(n_samples - 1) as an int array."""
        if self.kind == "constant_zero":
            return np.zeros(n_samples, dtype=int)
        elif self.kind == "constant_one":
            return np.ones(n_samples, dtype=int)
        elif self.kind == "periodic_01":
            return np.arange(n_samples, dtype=int) % 2
        rng = check_random_state(self.seed)
        # one draw per cycle: shorter runs are prefixes of longer ones
        return (rng.random_sample(n_samples) < 0.5).astype(int)

    def __eq__(self, other):
        return (isinstance(other, AddedSequenceSpec) and
                (self.kind, self.seed) == (other.kind, other.seed))

    def __repr__(self):
        return "AddedSequenceSpec(kind='{}', seed={})".format(self.kind,
                                                               self.seed)


def added_sequence(n, spec):
    """Value s(n) of the added sequence at cycle `n`.

    Notes
    -----
    For "seeded_random" each call redraws s(0) .. s(n), so calling this
    once per cycle costs O(n**2) over a run. Use
    `AddedSequenceSpec.generate` for whole sequences.

    Examples
    --------
    >>> spec = AddedSequenceSpec("periodic_01")
    >>> [added_sequence(n, spec) for n in range(4)]
    [0, 1, 0, 1]
    """
    if n < 0:
        raise ValueError("n must be >= 0, got %s" % n)
    if spec.kind == "constant_zero":
        return 0
    elif spec.kind == "constant_one":
        return 1
    elif spec.kind == "periodic_01":
        return n % 2
    return int(spec.generate(n + 1)[n])


def sadwa_select(state, y, s):
    """DWA selection of ``y + s`` elements.

    Parameters
    ----------
    state : DwaState
        Pointer over ``M = L + 1`` elements (``M = L`` degenerates to
        plain DWA when s is 0).

    y : int
        Code, ``0 <= y``.

    s : {0, 1}
        Added-sequence value.

    Returns
    -------
    mask : SelectionMask

    state : DwaState
    """
    if s not in (0, 1):
        raise SelectionError("s must be 0 or 1, got %r" % (s,))
    if y < 0 or y + s > state.modulus:
        raise SelectionError("code %s + s %s does not fit %d elements"
                             % (y, s, state.modulus))
    return dwa_select(state, y + s)


class AddedSequenceDWA(DataWeightedAveraging):
    """SaDWA selector.

    Parameters
    ----------
    modulus : int
        Number of unit elements, L + 1.

    added : AddedSequenceSpec, optional
        Sequence added to the codes; constant zero by default.

    initial_pointer : int, default=1
        Pointer p(0).
    """
    def __init__(self, modulus, added=None, initial_pointer=1):
        self.added = added if added is not None else AddedSequenceSpec()
        super(AddedSequenceDWA, self).__init__(modulus, initial_pointer)

    def select(self, code, s=0):
        pointer_before = self.state.pointer
        mask, self.state = sadwa_select(self.state, int(code), int(s))
        return mask, pointer_before

    def sequence(self, n_cycles):
        """The added sequence over a run of `n_cycles`."""
        return self.added.generate(n_cycles)

    def __repr__(self):
        return "AddedSequenceDWA(modulus={}, added={!r}, " \
               "initial_pointer={})".format(self.modulus, self.added,
                                            self.initial_pointer)
