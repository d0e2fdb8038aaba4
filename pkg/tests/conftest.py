import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from entidades import Disco, EstadoSistema, ParametrosReservorios, Particula  # noqa: E402
from generadores import crear_flujo  # noqa: E402
from geometria import ConfigGeometria, Mitad  # noqa: E402


@pytest.fixture
def geom():
    """Geometría estándar R=1, d=1: alpha=0.5, l=sqrt(3)"""
    return ConfigGeometria(1.0, 1.0)


@pytest.fixture
def params():
    return ParametrosReservorios(1.0, 1.0)


@pytest.fixture
def rng():
    return crear_flujo(20240611)


@pytest.fixture
def estado_radial(geom, params):
    """Una partícula en (2, 0) yendo radialmente hacia el disco detenido"""
    particula = Particula((2.0, 0.0), (-1.0, 0.0), Mitad.DERECHA)
    return EstadoSistema([particula], Disco(0.0, 0.0), geom, params)
