"""Shared fixtures: heavy geometry/design objects built once per session."""

import numpy as np
import pytest

from beltramilab import build_geometry
from beltramilab.fieldseries import (FieldConfiguration, GammaSet, OrderFlags,
                                     TruncatedFieldX)
from beltramilab.presets import resonant_coil, standard_design, torus_knot_spec


@pytest.fixture(scope="session")
def knot_geom():
    return build_geometry(torus_knot_spec(), grid_size=1024)


@pytest.fixture(scope="session")
def coil11():
    """Tuned (1,1) coil at the standard similarity scale."""
    _, geom = resonant_coil(1, 1, grid_size=1024, scale=2.0)
    return geom


@pytest.fixture(scope="session")
def coil43():
    _, geom = resonant_coil(4, 3, grid_size=1024)
    return geom


@pytest.fixture(scope="session")
def standard():
    """(geom, design, gammas, datum) of the standard (1,1) configuration."""
    return standard_design(1, 1, grid_size=1024)


def field_for(geom, eps, gammas=None, datum=None, orders=None):
    return TruncatedFieldX(FieldConfiguration(
        geom=geom, eps=eps,
        gammas=gammas if gammas is not None else GammaSet([]),
        datum=datum,
        orders=orders if orders is not None else OrderFlags()))


@pytest.fixture
def make_field():
    return field_for


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
