import math

import numpy as np
import pytest
from scipy import stats

from dinamica import (
    absorber_y_emitir,
    cdf_renovacion_omega,
    colisionar_con_disco,
    densidad_renovacion_omega,
    interactuar_disco,
    muestrear_emision,
    muestrear_emisiones,
    reflejar_pared,
    velocidad_emitida,
    verificar_intercambio,
)
from entidades import Particula, UltimaSuperficie
from errores import ErrorDominio, ErrorEstadoInvalido, ErrorInvarianteInterno
from geometria import Mitad
from oraculos import maxwell_cdf


def test_reflexion_en_pared():
    assert reflejar_pared((-0.8 * 2.0, 0.6 * 2.0)) == (1.6, 1.2)
    assert reflejar_pared((1.0, 0.0)) == (-1.0, 0.0)
    with pytest.raises(ErrorEstadoInvalido):
        reflejar_pared((0.0, 1.0))


def test_regla_del_disco():
    assert interactuar_disco(3.0, -4.0, 1.0) == (1.0, 4.0, 3.0)
    assert interactuar_disco(0.0, -1.0, 0.0) == (0.0, 1.0, 0.0)
    with pytest.raises(ErrorEstadoInvalido):
        interactuar_disco(1.0, 0.0, 0.0)


def test_colision_con_disco_conserva_energia():
    punto = (math.cos(0.7), math.sin(0.7))
    velocidad = (-1.3 * punto[0] + 0.4 * -punto[1], -1.3 * punto[1] + 0.4 * punto[0])
    nueva, omega = colisionar_con_disco(punto, velocidad, -0.9, 1.0)
    assert omega == pytest.approx(0.4)
    assert nueva[0] * punto[0] + nueva[1] * punto[1] == pytest.approx(1.3)
    verificar_intercambio(math.hypot(*velocidad), -0.9, math.hypot(*nueva), omega)


def test_verificar_intercambio_detecta_violaciones():
    with pytest.raises(ErrorInvarianteInterno):
        verificar_intercambio(1.0, 0.0, 1.0, 0.1)


def test_emision_rechaza_beta_no_positivo(rng):
    with pytest.raises(ErrorDominio):
        muestrear_emision(0.0, rng)


def test_emision_escalar(rng):
    s, sin_phi = muestrear_emision(1.0, rng)
    assert s > 0.0
    assert -1.0 <= sin_phi <= 1.0


def test_momentos_de_la_emision(rng):
    n = 200_000
    s, _ = muestrear_emisiones(1.0, rng, n)
    error = s.std(ddof=1) / math.sqrt(n)
    assert abs(s.mean() - 2.0 / math.sqrt(math.pi)) < 3.0 * error
    error2 = (s ** 2).std(ddof=1) / math.sqrt(n)
    assert abs((s ** 2).mean() - 1.5) < 3.0 * error2


def test_emision_sigue_la_ley_de_maxwell(rng):
    n = 50_000
    s, senos = muestrear_emisiones(2.0, rng, n)
    umbral = max(0.01, 1.63 / math.sqrt(n))
    assert stats.kstest(s, lambda x: maxwell_cdf(2.0, np.clip(x, 0.0, None))).statistic < umbral
    assert stats.kstest(senos, stats.uniform(loc=-1.0, scale=2.0).cdf).statistic < umbral


def test_fraccion_de_emisiones_hacia_el_disco(rng, geom):
    n = 100_000
    _, senos = muestrear_emisiones(1.0, rng, n)
    p = np.mean(np.abs(senos) <= geom.alpha)
    assert abs(p - geom.alpha) < 3.0 * math.sqrt(geom.alpha * (1.0 - geom.alpha) / n)


def test_velocidad_emitida_apunta_hacia_adentro():
    punto = (0.0, 2.0)
    vx, vy = velocidad_emitida(punto, 2.0, 1.5, 0.6)
    assert math.hypot(vx, vy) == pytest.approx(1.5)
    assert vx * punto[0] + vy * punto[1] < 0.0
    # tangente antihoraria en (0, 2) es (-1, 0)
    assert -vx / 1.5 == pytest.approx(0.6)


def test_absorber_y_emitir_mantiene_punto_y_mitad(geom, params, rng):
    particula = Particula((-2.0, 0.0), (-1.0, 0.0), Mitad.IZQUIERDA)
    nueva = absorber_y_emitir(particula, params, geom, rng)
    assert nueva.posicion == (-2.0, 0.0)
    assert nueva.mitad is Mitad.IZQUIERDA
    assert nueva.ultima_superficie is UltimaSuperficie.BORDE
    assert nueva.velocidad[0] > 0.0


def test_absorber_fuera_del_borde(geom, params, rng):
    with pytest.raises(ErrorEstadoInvalido):
        absorber_y_emitir(Particula((1.5, 0.0), (1.0, 0.0), Mitad.DERECHA), params, geom, rng)


def test_ley_de_renovacion_de_omega():
    assert densidad_renovacion_omega(1.0, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi))
    assert cdf_renovacion_omega(1.0, 0.0) == pytest.approx(0.5)
    assert cdf_renovacion_omega(4.0, 10.0) == pytest.approx(1.0)
