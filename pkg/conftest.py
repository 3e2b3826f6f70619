# Even if empty this file is useful so that when running from the root folder
# ./skdem is added to sys.path by pytest.
import sys

import pytest
from _pytest.doctest import DoctestItem

from skdem.scenario import OUTPUT_DIR_ENV


def pytest_collection_modifyitems(config, items):
    # numpy array reprs differ on Windows
    if sys.platform.startswith("win32"):
        skip_marker = pytest.mark.skip(
            reason="doctests are not run for Windows because numpy arrays "
                   "repr is inconsistent across platforms.")
        for item in items:
            if isinstance(item, DoctestItem):
                item.add_marker(skip_marker)


@pytest.fixture(autouse=True)
def _isolated_output_dir(tmp_path, monkeypatch):
    # result bundles of tests never land in the working directory
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "results"))
