"""
scikit-dem, or `skdem`, is a behavioral simulation library for multibit
sigma-delta DACs. It models the modulator, unit-element banks with
mismatch and the element selection strategies (thermometer, DWA and
added-sequence DWA), and measures the result with PSD, SNDR, tone and
dynamic-range analysis.
"""
try:
    # This variable is injected in the __builtins__ by the build
    # process. It is used to import the version without the
    # dependencies being installed.
    __SKDEM_SETUP__
except NameError:
    __SKDEM_SETUP__ = False


# PEP0440 compatible formatted version, see:
# https://www.python.org/dev/peps/pep-0440/
#
# Dev branch marker is: 'X.Y.dev' or 'X.Y.devN' where N is an integer.
#
__version__ = "0.1.0"

if __SKDEM_SETUP__:
    import sys
    sys.stderr.write('Partial import of skdem during the build process.\n')
else:
    from . import bank
    from . import callbacks
    from . import dac
    from . import modulator
    from . import selection
    from . import spectral
    from .bank import ElementBank
    from .bank import MismatchSpec
    from .bank import bank_statistics
    from .bank import generate_element_bank
    from .dac import run_dac
    from .modulator import InputSpec
    from .modulator import ModulatorConfig
    from .modulator import run_modulator
    from .scenario import Scenario
    from .scenario import list_presets
    from .scenario import load_preset
    from .scenario import run_scenario
    from .scenario import run_sweep
    from .spectral import compute_sndr
    from .spectral import detect_tones
    from .spectral import estimate_psd
    from .spectral import sweep_dynamic_range
    from .utils import dump
    from .utils import load
    __all__ = (
        "bank",
        "callbacks",
        "dac",
        "modulator",
        "selection",
        "spectral",
        "ElementBank",
        "MismatchSpec",
        "InputSpec",
        "ModulatorConfig",
        "Scenario",
        "bank_statistics",
        "generate_element_bank",
        "run_modulator",
        "run_dac",
        "estimate_psd",
        "compute_sndr",
        "detect_tones",
        "sweep_dynamic_range",
        "list_presets",
        "load_preset",
        "run_scenario",
        "run_sweep",
        "dump",
        "load",
    )
