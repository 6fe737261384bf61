import random

import pytest

from squarepeg.poly import CurveF


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="also run the long degree-5 reproduction")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def random_curve(m: int, seed: int, lo: int = -99, hi: int = 99) -> CurveF:
    """Dense random curve of degree m with integer coefficients in [lo, hi]."""
    r = random.Random(1000 * m + seed)
    coeffs = {(i, j): r.randint(lo, hi) for i in range(m + 1) for j in range(m + 1 - i)}
    f = CurveF.from_coefficients(coeffs)
    assert f.degree == m
    return f
