"""Location of the shipped data files.

EULERCALC_DATA_DIR overrides the packaged directory, so alternative
instance bundles can be dropped in without reinstalling.
"""

from __future__ import annotations

import os
from pathlib import Path


def data_dir() -> Path:
    override = os.environ.get("EULERCALC_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"
