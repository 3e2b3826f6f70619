"""
Element selection strategies for unit-element DACs.
"""
from .base import ElementSelector
from .base import SelectionMask
from .base import write_selection_csv
from .dwa import DataWeightedAveraging
from .dwa import DwaState
from .dwa import dwa_select
from .dwa import limit_cycle_period
from .dwa import pointer_period
from .dwa import wrap_rl
from .sadwa import AddedSequenceDWA
from .sadwa import AddedSequenceSpec
from .sadwa import added_sequence
from .sadwa import sadwa_select
from .thermometer import Thermometer


__all__ = [
    "ElementSelector", "SelectionMask", "Thermometer",
    "DataWeightedAveraging", "AddedSequenceDWA", "AddedSequenceSpec",
    "DwaState", "wrap_rl", "dwa_select", "sadwa_select", "added_sequence",
    "pointer_period", "limit_cycle_period", "write_selection_csv",
    "cook_selector", "selector_modulus",
]

STRATEGIES = ("thermometer", "dwa", "sadwa")


def selector_modulus(strategy, max_code):
    """Number of elements a strategy needs for codes 0 .. `max_code`."""
    if strategy not in STRATEGIES:
        raise ValueError("Valid strategies are %s, not %r"
                         % (STRATEGIES, strategy))
    return max_code + 1 if strategy == "sadwa" else max_code


def cook_selector(strategy, modulus, added=None, initial_pointer=1):
    """Cook an element selector.

    Parameters
    ----------
    strategy : "thermometer", "dwa", "sadwa" or ElementSelector instance
        Selection strategy.

    modulus : int
        Number of unit elements.

    added : AddedSequenceSpec, optional
        Added sequence, only used by "sadwa".

    initial_pointer : int, default=1
        Pointer p(0) of the DWA strategies.
    """
    if isinstance(strategy, ElementSelector):
        return strategy
    if not isinstance(strategy, str) or strategy.lower() not in STRATEGIES:
        raise ValueError("Valid strings for the strategy parameter are: "
                         "'thermometer', 'dwa' or 'sadwa', not %r"
                         % (strategy,))
    strategy = strategy.lower()
    if strategy == "thermometer":
        return Thermometer(modulus)
    elif strategy == "dwa":
        return DataWeightedAveraging(modulus, initial_pointer)
    return AddedSequenceDWA(modulus, added, initial_pointer)
