import math

import pytest

from entidades import ParametrosReservorios
from montecarlo import (
    EstimacionMC,
    auditar_trayectoria,
    contar_violaciones_invariancia,
    distancia_por_marcha,
    fraccion_golpe_disco,
    media_vuelo_emision,
    medias_post_tau,
    medias_tau_delta,
    muestras_renovacion_omega,
    punto_interior,
    tiempo_golpe,
    verificar_geometria,
)
from geometria import Mitad, trazar_rayo
from oraculos import cota_D, cota_D_prima, cota_golpe, cota_K
from regeneracion import ParametrosC
from simulador import estado_inicial


def test_estimacion_desde_muestras():
    estimacion = EstimacionMC.desde_muestras([1.0, 2.0, 3.0])
    assert estimacion.media == 2.0
    assert estimacion.error == pytest.approx(1.0 / math.sqrt(3.0))
    assert estimacion.cota_superior() == pytest.approx(2.0 + 3.0 / math.sqrt(3.0))
    assert EstimacionMC.desde_muestras([1.0]).error == math.inf


def test_marcha_coincide_con_el_trazado(geom):
    origen, direccion = (2.0, 0.0), (-0.8, 0.6)
    marcha = distancia_por_marcha(geom, (1.99, 0.0), direccion, Mitad.DERECHA)
    exacta = trazar_rayo(geom, (1.99, 0.0), direccion, Mitad.DERECHA).distancia
    assert marcha == pytest.approx(exacta, abs=1e-9)
    assert trazar_rayo(geom, origen, direccion, Mitad.DERECHA).distancia == pytest.approx(2.5)


def test_punto_interior_en_su_mitad(geom, rng):
    for mitad in Mitad:
        for _ in range(50):
            x, y = punto_interior(geom, mitad, rng)
            assert geom.R <= math.hypot(x, y) <= geom.radio_exterior
            if mitad is Mitad.DERECHA:
                assert x >= -1e-12
            else:
                assert x <= 1e-12


def test_verificar_geometria(geom, rng):
    resultado = verificar_geometria(geom, 40, rng)
    assert resultado.discrepancia_max <= 1e-5 * geom.radio_exterior
    assert resultado.discrepancia_espejo <= 1e-9 * geom.radio_exterior


def test_fraccion_golpe_disco(geom, rng):
    estimacion = fraccion_golpe_disco(geom, 40_000, rng)
    assert abs(estimacion.media - geom.alpha) < 3.0 * estimacion.error


def test_vuelo_medio_bajo_la_cota_K(geom, rng):
    estimacion = media_vuelo_emision(1.0, geom, 20_000, rng)
    assert estimacion.cota_superior() <= cota_K(1.0, geom).valor


def test_tiempo_de_golpe_y_rondas(geom, rng):
    estimacion = tiempo_golpe(1.0, geom, 5_000, rng)
    assert estimacion.tiempo.cota_superior() <= cota_golpe(cota_K(1.0, geom), geom).valor
    assert abs(estimacion.rondas.media - 1.0 / geom.alpha) < 3.0 * estimacion.rondas.error


def test_auditoria_de_trayectoria(geom, rng):
    params = ParametrosReservorios(0.5, 2.0)
    auditoria = auditar_trayectoria(estado_inicial(geom, params, 2, 2, rng), rng, 3_000)
    assert auditoria.eventos == 3_000
    assert auditoria.eventos_disco > 0
    assert auditoria.max_disco_entre_bordes == 1


def test_renovacion_de_omega(geom, params, rng):
    omegas = muestras_renovacion_omega(estado_inicial(geom, params, 1, 1, rng), rng, 500)
    assert len(omegas) == 500
    # varianza de la ley de renovación: 1/(2 beta)
    assert omegas.var() == pytest.approx(0.5, rel=0.2)


def test_C_es_invariante_hasta_el_borde(geom, params, rng):
    cparams = ParametrosC.por_defecto(params)
    violaciones, revisados = contar_violaciones_invariancia(geom, params, cparams, 2, 2, 200, rng)
    assert violaciones == 0
    assert revisados > 0


@pytest.mark.lento
def test_regeneracion_bajo_la_cota_D(geom, params, rng):
    cparams = ParametrosC.por_defecto(params)
    estimacion = medias_post_tau(estado_inicial(geom, params, 1, 1, rng), rng, cparams, 400)
    assert estimacion.tau.cota_superior() <= cota_D(1.0, (1.0, 1.0), geom).valor
    assert 0.0 <= estimacion.gamma <= 1.0


@pytest.mark.lento
def test_tau_delta_bajo_la_cota_D_prima(geom, params, rng):
    cparams = ParametrosC.por_defecto(params)
    delta = cparams.delta_por_defecto(geom)
    estimacion = medias_tau_delta(geom, params, cparams, 1, 1, delta, 300, rng)
    informe_D = cota_D(1.0, (1.0, 1.0), geom)
    assert estimacion.cota_superior() <= cota_D_prima(cparams, 1.0, geom, informe_D).valor
