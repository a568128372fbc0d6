import json
import math
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# Exact radii where r0**2 / 2 is a zero of L_2^(0): 2 -+ sqrt(2).
R0_INNER_ZERO = math.sqrt(2 * (2 - math.sqrt(2)))
R0_OUTER_ZERO = math.sqrt(2 * (2 + math.sqrt(2)))


@pytest.fixture(scope="session")
def reference():
    with open(DATA / "reference.json") as fh:
        return json.load(fh)
