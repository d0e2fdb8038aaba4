import math

import pytest

from entidades import Disco, EstadoSistema, ParametrosReservorios, Particula
from errores import ErrorDesbordeEventos, ErrorDominio, ErrorEstadoInvalido
from generadores import crear_flujo
from geometria import Mitad, Superficie
from simulador import MotivoParada, Simulador, estado_inicial, proximo_evento


def test_particula_detenida_es_invalida():
    with pytest.raises(ErrorEstadoInvalido):
        Particula((1.5, 0.0), (0.0, 0.0), Mitad.DERECHA)


def test_reservorios_invalidos():
    with pytest.raises(ErrorDominio):
        ParametrosReservorios(1.0, -2.0)


def test_disco_avanza_modulo_dos_pi():
    disco = Disco(6.0, 1.0)
    disco.avanzar(1.0, 2.0)
    assert disco.theta == pytest.approx(6.5 - 2.0 * math.pi)


def test_proximo_evento_radial(estado_radial):
    indice, impacto, dt = proximo_evento(estado_radial)
    assert indice == 0
    assert impacto.superficie is Superficie.DISCO
    assert dt == pytest.approx(1.0)


def test_proximo_evento_elige_el_vuelo_mas_corto(geom, params):
    lejos = Particula((2.0, 0.0), (-0.8, 0.6), Mitad.DERECHA)
    cerca = Particula((0.0, 1.5), (0.8, 0.6), Mitad.DERECHA)
    estado = EstadoSistema([lejos, cerca], Disco(), geom, params)
    indice, impacto, dt = proximo_evento(estado)
    assert indice == 1
    assert dt == pytest.approx(0.7)


def test_empate_para_el_menor_indice(geom, params):
    a = Particula((1.5, 0.0), (-1.0, 0.0), Mitad.DERECHA)
    b = Particula((-1.5, 0.0), (1.0, 0.0), Mitad.IZQUIERDA)
    estado = EstadoSistema([a, b], Disco(), geom, params)
    assert Simulador(estado, crear_flujo(1)).proximo_evento()[0] == 0


def test_rebote_radial_vuelve_al_borde(estado_radial, rng):
    simulador = Simulador(estado_radial, rng)
    primero = simulador.paso()
    assert primero.superficie is Superficie.DISCO
    assert primero.omega_post == 0.0
    assert simulador.estado.particulas[0].velocidad == pytest.approx((1.0, 0.0))
    segundo = simulador.paso()
    assert segundo.superficie is Superficie.BORDE_DERECHO
    assert simulador.estado.reloj == pytest.approx(2.0)
    assert simulador.estado.particulas[0].posicion == pytest.approx((2.0, 0.0))
    assert simulador.acumuladores == {'eventos_pared': 0, 'eventos_disco': 1, 'eventos_borde': 1}


def test_el_disco_gira_entre_eventos(geom, params, rng):
    particula = Particula((2.0, 0.0), (-1.0, 0.0), Mitad.DERECHA)
    estado = EstadoSistema([particula], Disco(0.0, 0.5), geom, params)
    Simulador(estado, rng).paso()
    assert estado.disco.theta == pytest.approx(0.5)
    assert estado.disco.omega == 0.0


def test_horizonte_exacto(geom, params, rng):
    estado = estado_inicial(geom, params, 1, 1, rng)
    resultado = Simulador(estado, rng).evolucionar_hasta(horizonte=10.0)
    assert resultado.motivo is MotivoParada.HORIZONTE
    assert resultado.estado.reloj == 10.0
    assert all(r.tiempo <= 10.0 for r in resultado.registros)


def test_predicado_termina_en_el_evento(geom, params, rng):
    estado = estado_inicial(geom, params, 1, 1, rng)

    def borde_de_la_cero(_, registro):
        return registro.indice == 0 and registro.superficie.es_borde

    resultado = Simulador(estado, rng).evolucionar_hasta(predicado=borde_de_la_cero)
    assert resultado.motivo is MotivoParada.PREDICADO
    assert resultado.registros[-1].indice == 0
    assert resultado.registros[-1].superficie.es_borde
    assert resultado.estado.reloj == resultado.registros[-1].tiempo


def test_tope_de_eventos(geom, params, rng):
    estado = estado_inicial(geom, params, 1, 0, rng)
    with pytest.raises(ErrorDesbordeEventos):
        Simulador(estado, rng, max_eventos=50).evolucionar_hasta(predicado=lambda *_: False)


def test_evolucion_sin_criterio_de_parada(estado_radial, rng):
    with pytest.raises(ErrorDominio):
        Simulador(estado_radial, rng).evolucionar_hasta()


def test_determinismo(geom, params):
    lineas = []
    for _ in range(2):
        rng = crear_flujo(7, 0)
        estado = estado_inicial(geom, params, 2, 1, rng)
        resultado = Simulador(estado, rng).evolucionar_hasta(horizonte=50.0)
        lineas.append([r.a_linea_json() for r in resultado.registros])
    assert lineas[0] == lineas[1]
    assert len(lineas[0]) > 10


def test_invariantes_a_lo_largo_de_una_trayectoria(geom, rng):
    params = ParametrosReservorios(0.5, 2.0)
    estado = estado_inicial(geom, params, 2, 2, rng)
    simulador = Simulador(estado, rng, verificar_invariantes=True)
    registros = simulador.evolucionar_hasta(horizonte=100.0).registros
    assert simulador.estado.contar_por_mitad() == (2, 2)
    for r in registros:
        if r.superficie is Superficie.DISCO:
            antes = r.s_pre ** 2 + r.omega_pre ** 2
            assert r.s_post ** 2 + r.omega_post ** 2 == pytest.approx(antes, rel=1e-12)
        elif r.superficie.es_pared:
            assert r.s_post == pytest.approx(r.s_pre, rel=1e-15)
            assert r.omega_post == r.omega_pre
        if r.superficie.es_borde:
            esperada = Superficie.BORDE_DERECHO if r.mitad is Mitad.DERECHA else Superficie.BORDE_IZQUIERDO
            assert r.superficie is esperada
