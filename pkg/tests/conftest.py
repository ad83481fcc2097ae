from __future__ import annotations

import numpy as np
import pytest

from revtri import COMPLEX, Grid, HVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240416)


@pytest.fixture
def unit_grid():
    return Grid(0.0, 1.0, 512)


def random_vector(rng, field: str, d: int) -> HVector:
    v = rng.standard_normal(d)
    if field == COMPLEX:
        v = v + 1j * rng.standard_normal(d)
    return HVector(field, v)


def random_unit(rng, field: str, d: int) -> HVector:
    v = random_vector(rng, field, d)
    return HVector(field, v.coords / np.linalg.norm(v.coords))
