import math

import numpy as np
import pytest

from errores import ErrorDominio, ErrorTolerancia
from geometria import ConfigGeometria
from oraculos import (
    InformeCota,
    cota_D,
    cota_D_prima,
    cota_golpe,
    cota_K,
    densidad_rapidez,
    estimar_tau_C,
    integrar,
    maxwell_cdf,
    momentos_emision,
)
from regeneracion import ParametrosC


def test_maxwell_cdf_valores():
    assert maxwell_cdf(1.0, 0.0) == 0.0
    assert maxwell_cdf(1.0, 50.0) == pytest.approx(1.0)
    assert maxwell_cdf(1.0, 1.0) == pytest.approx(0.42759, abs=1e-5)


def test_maxwell_cdf_contra_cuadratura():
    for beta, s in ((1.0, 1.0), (0.3, 2.2), (4.0, 0.4)):
        valor, _ = integrar(lambda x: densidad_rapidez(beta, x), 0.0, s)
        assert maxwell_cdf(beta, s) == pytest.approx(valor, rel=1e-10)


def test_maxwell_cdf_vectorizada():
    valores = maxwell_cdf(1.0, np.array([0.0, 1.0]))
    assert valores.shape == (2,)
    with pytest.raises(ErrorDominio):
        maxwell_cdf(1.0, -0.1)


def test_momentos_de_emision():
    media, segundo = momentos_emision(1.0)
    assert media == pytest.approx(1.1283792, abs=1e-7)
    assert segundo == pytest.approx(1.5)
    assert momentos_emision(4.0)[0] == pytest.approx(0.5641896, abs=1e-7)


def test_cuadratura_que_no_converge():
    with pytest.raises(ErrorTolerancia):
        integrar(lambda x: math.sin(1.0 / x) / x, 1e-8, 1.0, epsrel=1e-10, limite=5)


def test_cuadratura_con_tolerancia_imposible():
    with pytest.raises(ErrorDominio):
        integrar(math.cos, 0.0, 1.0, epsrel=1e-14)


def test_cota_K_forma_cerrada(geom):
    informe = cota_K(1.0, geom)
    cerrada = 2.0 / math.sqrt(math.pi) * geom.l * (2.0 - 0.5 + 0.5 * math.pi / 2.0)
    assert informe.nombre == "K"
    assert informe.valor == pytest.approx(cerrada, rel=1e-8)
    assert informe.valor == pytest.approx(4.4666, abs=1e-4)
    assert informe.tol < 1e-6
    assert informe.entradas == {"R": 1.0, "d": 1.0, "beta": 1.0}


def test_cota_K_escala_con_beta(geom):
    base = cota_K(1.0, geom).valor
    assert cota_K(4.0, geom).valor == pytest.approx(2.0 * base, rel=1e-8)
    assert cota_K(0.25, geom).valor == pytest.approx(0.5 * base, rel=1e-8)


def test_cota_golpe(geom):
    informe_K = cota_K(1.0, geom)
    assert cota_golpe(informe_K, geom).valor == pytest.approx(2.0 * informe_K.valor)


def test_cota_D(geom):
    informe = cota_D(1.0, (1.0, 1.0), geom)
    assert informe.valor == pytest.approx(19.40, abs=5e-3)
    assert informe.valor > cota_K(1.0, geom).valor


def test_cota_D_usa_el_beta_mayor(geom):
    assert cota_D(1.0, (1.0, 4.0), geom).valor > cota_D(1.0, (1.0, 1.0), geom).valor


def test_cota_D_prima(geom):
    informe_D = cota_D(1.0, (1.0, 1.0), geom)
    informe = cota_D_prima(ParametrosC(0.5, 2.0, 0.1), 1.0, geom, informe_D)
    assert informe.valor - informe_D.valor == pytest.approx(21.9089, abs=1e-4)
    assert informe.a_dict()["name"] == "D_prima"
    assert set(informe.a_dict()) == {"name", "value", "tol", "inputs"}


def test_estimacion_de_tau_C(geom):
    informe_D = cota_D(1.0, (1.0, 1.0), geom)
    informe_D_prima = cota_D_prima(ParametrosC(0.5, 2.0, 0.1), 1.0, geom, informe_D)
    assert estimar_tau_C(informe_D, informe_D_prima, 1.0).valor == pytest.approx(informe_D_prima.valor)
    assert estimar_tau_C(informe_D, informe_D_prima, 0.5).valor == pytest.approx(informe_D_prima.valor + informe_D.valor)
    with pytest.raises(ErrorDominio):
        estimar_tau_C(informe_D, informe_D_prima, 0.0)


def test_informe_rechaza_valores_no_finitos():
    with pytest.raises(ErrorTolerancia):
        InformeCota("K", math.inf, 0.0)


def test_cotas_en_otra_geometria():
    geom = ConfigGeometria(2.0, 0.5)
    informe = cota_K(1.0, geom)
    alpha, l = geom.alpha, geom.l
    assert informe.valor == pytest.approx(2.0 / math.sqrt(math.pi) * l * (2.0 - alpha + alpha * math.pi / 2.0), rel=1e-8)
