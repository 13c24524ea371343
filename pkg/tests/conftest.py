import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from _standin import write_standin_csv  # noqa: E402


@pytest.fixture(scope="session")
def telemonitoring_csv(tmp_path_factory):
    """Path to a telemonitoring-shaped CSV.

    Uses the real file if STABLESEP_TELEMONITORING_CSV points at one,
    otherwise generates the deterministic stand-in.
    """
    env = os.environ.get("STABLESEP_TELEMONITORING_CSV")
    if env and os.path.exists(env):
        return env
    path = tmp_path_factory.mktemp("realdata") / "telemonitoring.csv"
    return write_standin_csv(str(path))
