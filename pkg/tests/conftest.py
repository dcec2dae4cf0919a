import csv
from importlib import resources

import numpy as np
import pytest


def _load_column(filename, column):
    path = resources.files("mcgompertz") / "data" / filename
    with path.open("r", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([float(r[column]) for r in rows])


@pytest.fixture(scope="session")
def aarset():
    return _load_column("aarset_devices.csv", "lifetime")


@pytest.fixture(scope="session")
def glass():
    return _load_column("glass_fibers.csv", "strength")
