import numpy as np

from .base import ElementSelector
from .base import SelectionMask
from ..exceptions import SelectionError


class Thermometer(ElementSelector):
    """Static thermometer decoding: code y always fires elements 1 .. y.

    Element mismatch is converted into a static nonlinearity; the
    pointer stays at 1.

    Parameters
    ----------
    modulus : int
        Number of unit elements M.
    """
    def __init__(self, modulus, initial_pointer=1):
        super(Thermometer, self).__init__(modulus, initial_pointer=1)

    def reset(self):
        pass

    def select(self, code, s=0):
        total = int(code) + int(s)
        if not 0 <= total <= self.modulus:
            raise SelectionError("code %d outside [0, %d]"
                                 % (total, self.modulus))
        return SelectionMask(np.arange(self.modulus) < total), 1

    def run(self, codes, added=None):
        codes, added, totals = self._check_totals(codes, added)
        pointers = np.ones(totals.size, dtype=int)
        masks = np.arange(self.modulus)[None, :] < totals[:, None]
        return pointers, masks
