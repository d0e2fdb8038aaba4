import math

import pytest

from entidades import Disco, EstadoSistema, Particula
from errores import ErrorDominio
from geometria import CoordenadasColision, Mitad, Superficie, a_coordenadas_colision
from regeneracion import (
    MonitorParada,
    ParametrosC,
    calcular_t0,
    clausula_C,
    en_C,
    muestrear_sustituto_C,
    recorrer_hasta_tau,
    tiempo_llegada_C,
)
from simulador import Simulador, estado_inicial


@pytest.fixture
def cparams():
    return ParametrosC(0.5, 2.0, 0.1)


def test_parametros_C_invalidos():
    with pytest.raises(ErrorDominio):
        ParametrosC(2.0, 0.5, 0.1)
    with pytest.raises(ErrorDominio):
        ParametrosC(0.5, 2.0, 1.0)


def test_cotas_de_C(cparams):
    assert cparams.cota_omega(0.5) == pytest.approx(2.0 * math.sqrt(0.9 / 1.25))
    assert cparams.cota_omega(0.5) == pytest.approx(1.697, abs=1e-3)
    assert cparams.cota_seno_pre_disco(0.5) == pytest.approx(0.4243, abs=1e-4)
    bajo, alto = cparams.ventana_post_disco(0.5)
    assert bajo == pytest.approx(0.5 * math.sqrt(0.35 / 1.25))
    assert alto == pytest.approx(2.0 * math.sqrt(2.15 / 1.25))


def test_t0_radial(geom, params):
    particula = Particula((2.0, 0.0), (-2.0, 0.0), Mitad.DERECHA)
    estado = EstadoSistema([particula], Disco(), geom, params)
    assert calcular_t0(estado) == pytest.approx(0.5)


def test_t0_sin_rumbo_al_disco(geom, params):
    particula = Particula((2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    estado = EstadoSistema([particula], Disco(), geom, params, reloj=3.0)
    assert calcular_t0(estado) == 3.0


def test_t0_es_el_maximo(geom, params):
    a = Particula((2.0, 0.0), (-2.0, 0.0), Mitad.DERECHA)
    b = Particula((-2.0, 0.0), (0.8, 0.0), Mitad.IZQUIERDA)
    estado = EstadoSistema([a, b], Disco(), geom, params)
    assert calcular_t0(estado) == pytest.approx(1.25)


def test_clausulas_de_C(cparams):
    alpha = 0.5
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 1.0, 0.6, 0.2), cparams, alpha) == 1
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 1.0, -0.4, 0.2), cparams, alpha) == 2
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 3.0, 0.6, 0.2), cparams, alpha) is None
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 3.0, 0.1, 0.2), cparams, alpha) is None
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 1.0, 0.45, 0.2), cparams, alpha) is None
    assert clausula_C(CoordenadasColision(0.0, Mitad.DERECHA, 1.0, 0.3, -0.2), cparams, alpha) == 3


def test_en_C_estado_completo(geom, params, cparams):
    # recién emitida con |sin| = 0.6, s = 1
    particula = Particula((2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    assert en_C(EstadoSistema([particula], Disco(0.0, 0.3), geom, params), cparams)
    assert not en_C(EstadoSistema([particula.copiar()], Disco(0.0, 1.8), geom, params), cparams)


def test_sustituto_C_cae_en_C(geom, params, cparams, rng):
    for incluir in (False, True):
        for _ in range(20):
            estado = muestrear_sustituto_C(geom, params, cparams, 1, 2, rng, incluir_pre_disco=incluir)
            assert en_C(estado, cparams)
            assert estado.contar_por_mitad() == (1, 2)


def test_sustituto_con_pre_disco_apunta_al_disco(geom, params, cparams, rng):
    hacia_disco = 0
    for _ in range(40):
        estado = muestrear_sustituto_C(geom, params, cparams, 0, 1, rng, incluir_pre_disco=True)
        p = estado.particulas[0]
        coords = a_coordenadas_colision(geom, p.posicion, p.velocidad, p.mitad)
        hacia_disco += clausula_C(coords, cparams, geom.alpha) == 2
    assert 0 < hacia_disco < 40


def test_monitor_de_parada_con_una_particula(geom, params, rng):
    estado = estado_inicial(geom, params, 0, 1, rng)
    monitor = MonitorParada(estado)
    resultado = Simulador(estado, rng).evolucionar_hasta(predicado=monitor)
    ultimo = resultado.registros[-1]
    assert ultimo.superficie.es_borde
    assert monitor.tau == ultimo.tiempo
    disco = [r for r in resultado.registros if r.superficie is Superficie.DISCO and r.tiempo > monitor.t0]
    assert disco
    # el ciclo se cierra con la absorción que sigue a un choque con el disco
    anterior = [r for r in resultado.registros[:-1] if not r.superficie.es_pared][-1]
    assert anterior.superficie is Superficie.DISCO


def test_tau_es_una_duracion_positiva(geom, params, rng):
    estado = estado_inicial(geom, params, 2, 2, rng)
    resultado = recorrer_hasta_tau(estado, rng)
    assert resultado.duracion > 0.0
    assert resultado.estado.reloj == pytest.approx(resultado.duracion)


def test_llegada_a_C_con_delta_cero(geom, params, cparams, rng):
    estado = muestrear_sustituto_C(geom, params, cparams, 1, 1, rng)
    assert tiempo_llegada_C(estado, rng, cparams, 0.0) == 0.0


def test_llegada_a_C_respeta_la_espera(geom, params, cparams, rng):
    estado = muestrear_sustituto_C(geom, params, cparams, 1, 1, rng)
    duracion = tiempo_llegada_C(estado, rng, cparams, 0.5)
    assert duracion >= 0.5
    assert en_C(estado, cparams)


def test_llegada_a_C_delta_negativo(geom, params, cparams, rng):
    estado = muestrear_sustituto_C(geom, params, cparams, 1, 1, rng)
    with pytest.raises(ErrorDominio):
        tiempo_llegada_C(estado, rng, cparams, -1.0)
