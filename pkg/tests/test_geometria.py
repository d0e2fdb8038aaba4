import math

import numpy as np
import pytest

from dinamica import velocidad_emitida
from errores import ErrorDominio, ErrorEstadoInvalido
from geometria import (
    ConfigGeometria,
    CoordenadasColision,
    Mitad,
    Superficie,
    a_coordenadas_colision,
    avanzar_desplegado,
    desde_coordenadas_colision,
    distancia_entrada_disco,
    largos_vuelo_emision,
    longitud_cuerda,
    mapa_angulo_disco,
    seno_tangencial,
    trazar_rayo,
    vuelo_hasta_colision,
)
from simulador import Simulador, estado_inicial


def test_derivados_de_la_geometria(geom):
    assert geom.radio_exterior == 2.0
    assert geom.alpha == 0.5
    assert geom.l == pytest.approx(math.sqrt(3.0))


@pytest.mark.parametrize("R, d", [(0.0, 1.0), (1.0, -1.0), (math.inf, 1.0)])
def test_geometria_invalida(R, d):
    with pytest.raises(ErrorDominio):
        ConfigGeometria(R, d)


@pytest.mark.parametrize("sin_phi, esperado", [(0.0, 4.0), (math.sqrt(3.0) / 2.0, 2.0), (0.6, 3.2)])
def test_longitud_cuerda(geom, sin_phi, esperado):
    assert longitud_cuerda(geom, sin_phi) == pytest.approx(esperado, rel=1e-12)


def test_longitud_cuerda_fuera_de_dominio(geom):
    with pytest.raises(ErrorDominio):
        longitud_cuerda(geom, 1.0)


def test_distancia_entrada_disco(geom):
    assert distancia_entrada_disco(geom, 0.0) == pytest.approx(1.0, rel=1e-12)
    assert distancia_entrada_disco(geom, 0.3) == pytest.approx(2.0 * math.sqrt(0.91) - 0.8, rel=1e-12)
    assert distancia_entrada_disco(geom, 0.3) == pytest.approx(1.1078784, abs=1e-7)
    assert distancia_entrada_disco(geom, 0.6) is None


def test_mapa_angulo_disco(geom):
    assert mapa_angulo_disco(geom, 0.3) == pytest.approx(0.6)
    assert mapa_angulo_disco(geom, 0.0) == 0.0
    assert mapa_angulo_disco(geom, 0.5) == pytest.approx(1.0)
    with pytest.raises(ErrorDominio):
        mapa_angulo_disco(geom, 0.51)


@pytest.mark.parametrize("sin_phi", [-0.49, -0.3, -0.05, 0.0, 0.2, 0.45])
@pytest.mark.parametrize("angulo", [-1.2, 0.0, 0.7])
def test_entrada_al_disco_con_el_angulo_mapeado(geom, sin_phi, angulo):
    Rg = geom.radio_exterior
    punto = (Rg * math.cos(angulo), Rg * math.sin(angulo))
    direccion = velocidad_emitida(punto, Rg, 1.0, sin_phi)
    largo = distancia_entrada_disco(geom, sin_phi)
    llegada = (punto[0] + largo * direccion[0], punto[1] + largo * direccion[1])
    assert math.hypot(*llegada) == pytest.approx(geom.R, abs=1e-12)
    assert seno_tangencial(llegada, direccion) == pytest.approx(mapa_angulo_disco(geom, sin_phi), abs=1e-12)


def test_largos_vectorizados_coinciden_con_el_trazador(geom, rng):
    senos = np.concatenate([rng.uniform(-1.0, 1.0, 300), [0.0, 0.4999, -0.5001, 0.9]])
    largos = largos_vuelo_emision(geom, senos)
    Rg = geom.radio_exterior
    for seno, largo, angulo in zip(senos, largos, rng.uniform(-0.5 * math.pi, 0.5 * math.pi, len(senos))):
        punto = (Rg * math.cos(angulo), Rg * math.sin(angulo))
        trazado = vuelo_hasta_colision(geom, punto, velocidad_emitida(punto, Rg, 1.0, seno), Mitad.DERECHA)
        assert largo == pytest.approx(trazado.distancia, abs=1e-9)
        entrada = distancia_entrada_disco(geom, seno)
        assert largo == pytest.approx(entrada if entrada is not None else longitud_cuerda(geom, seno), rel=1e-12)


def test_rayo_radial_al_disco(geom):
    impacto = trazar_rayo(geom, (2.0, 0.0), (-1.0, 0.0), Mitad.DERECHA)
    assert impacto.superficie is Superficie.DISCO
    assert impacto.distancia == pytest.approx(1.0)
    assert impacto.punto == pytest.approx((1.0, 0.0))


def test_rayo_a_la_pared_superior(geom):
    impacto = trazar_rayo(geom, (2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    assert impacto.superficie is Superficie.PARED_SUPERIOR
    assert impacto.distancia == pytest.approx(2.5)
    assert impacto.punto == pytest.approx((0.0, 1.5))


def test_rayo_desde_la_pared_al_borde(geom):
    impacto = trazar_rayo(geom, (0.0, 1.5), (0.8, 0.6), Mitad.DERECHA)
    assert impacto.superficie is Superficie.BORDE_DERECHO
    assert impacto.distancia == pytest.approx(0.7)
    assert math.hypot(*impacto.punto) == pytest.approx(2.0, abs=1e-15)


def test_vuelo_desplegado_atraviesa_la_pared(geom):
    vuelo = vuelo_hasta_colision(geom, (2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    assert vuelo.impacto.superficie is Superficie.BORDE_DERECHO
    assert vuelo.distancia == pytest.approx(3.2)
    assert vuelo.direccion == pytest.approx((0.8, 0.6))


def test_avanzar_desplegado_no_cruza_el_disco(geom):
    with pytest.raises(ErrorDominio):
        avanzar_desplegado(geom, (2.0, 0.0), (-1.0, 0.0), Mitad.DERECHA, 1.5)


def test_coordenadas_recien_emitida(geom):
    coords = a_coordenadas_colision(geom, (2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    assert coords.xi == 0.0
    assert coords.s == pytest.approx(1.0)
    assert coords.sin_phi == pytest.approx(0.6)
    assert coords.r == 0.0


def test_coordenadas_tras_el_disco(geom):
    # rebotó en (1, 0) y vuelve radialmente al borde
    coords = a_coordenadas_colision(geom, (1.5, 0.0), (2.0, 0.0), Mitad.DERECHA)
    assert coords.xi == pytest.approx(-0.5)
    assert coords.s == pytest.approx(2.0)
    assert coords.r == pytest.approx(0.0)


def test_coordenadas_velocidad_nula(geom):
    with pytest.raises(ErrorEstadoInvalido):
        a_coordenadas_colision(geom, (1.5, 0.0), (0.0, 0.0), Mitad.DERECHA)


def test_reconstruccion_de_coordenadas(geom):
    coords = CoordenadasColision(0.3, Mitad.DERECHA, 1.7, -0.2, 0.4)
    pos, vel = desde_coordenadas_colision(geom, coords)
    vuelta = a_coordenadas_colision(geom, pos, vel, Mitad.DERECHA)
    assert vuelta.r == pytest.approx(coords.r, abs=1e-9)
    assert vuelta.sin_phi == pytest.approx(coords.sin_phi, abs=1e-9)
    assert vuelta.xi == pytest.approx(coords.xi, abs=1e-9)


def test_ida_y_vuelta_sobre_una_trayectoria(geom, params, rng):
    estado = estado_inicial(geom, params, 2, 2, rng)
    simulador = Simulador(estado, rng)
    for _ in range(300):
        simulador.paso()
        for p in simulador.estado.particulas:
            coords = a_coordenadas_colision(geom, p.posicion, p.velocidad, p.mitad)
            pos, vel = desde_coordenadas_colision(geom, coords)
            assert pos == pytest.approx(p.posicion, abs=1e-9)
            assert vel == pytest.approx(p.velocidad, abs=1e-9)
