import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from patchbpf import TM11, ResonatorSpec, fit_eps_eff  # noqa: E402


@pytest.fixture(scope="session")
def ref_spec():
    """R = 16 mm with eps_eff fitted so TM11 sits at 2.77 GHz."""
    return ResonatorSpec(16e-3, fit_eps_eff(16e-3, TM11, 2.77e9))


@pytest.fixture
def deg():
    return math.radians
