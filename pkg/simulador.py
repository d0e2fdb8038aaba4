"""
Motor principal de simulación dirigida por eventos del billar abierto
"""
import logging
import math
from enum import Enum
from typing import Callable, List, NamedTuple, Optional

from dinamica import (
    absorber_y_emitir,
    colisionar_con_disco,
    muestrear_emision,
    muestrear_omega_renovado,
    reflejar_pared,
    velocidad_emitida,
    verificar_intercambio,
)
from entidades import Disco, EstadoSistema, Particula, UltimaSuperficie
from errores import ErrorDesbordeEventos, ErrorDominio
from eventos import AgendaColisiones, RegistroEvento
from geometria import Mitad, Superficie, seno_tangencial, trazar_rayo

_logger = logging.getLogger(__name__)

MAX_EVENTOS = 10 ** 9


class MotivoParada(Enum):
    """Por qué terminó una evolución"""
    PREDICADO = "predicado"
    HORIZONTE = "horizonte"


class ResultadoEvolucion(NamedTuple):
    estado: EstadoSistema
    registros: List[RegistroEvento]
    motivo: MotivoParada


def _seno_en(superficie, punto, velocidad, s):
    """Componente tangencial de la dirección en el punto de impacto"""
    if superficie.es_pared:
        return velocidad[1] / s
    return seno_tangencial(punto, (velocidad[0] / s, velocidad[1] / s))


def impacto_de(estado, indice):
    """(impacto, dt) de la próxima colisión de la partícula, sin agenda"""
    p = estado.particulas[indice]
    impacto = trazar_rayo(estado.geom, p.posicion, p.direccion(), p.mitad)
    return impacto, impacto.distancia / p.rapidez


def proximo_evento(estado):
    """
    (índice, impacto, dt) de la partícula que choca primero.
    No avanza el ángulo del disco.
    """
    mejor = None
    for i in range(estado.k):
        impacto, dt = impacto_de(estado, i)
        if mejor is None or dt < mejor[2]:
            mejor = (i, impacto, dt)
    return mejor


class Simulador:
    """
    Avanza un EstadoSistema de colisión en colisión. El estado se modifica
    en el lugar; el flujo aleatorio sólo se usa en las reemisiones.
    """

    def __init__(self, estado, rng, max_eventos=MAX_EVENTOS, verificar_invariantes=False,
                 observadores: Optional[List[Callable]] = None):
        self.estado = estado
        self.rng = rng
        self.max_eventos = int(max_eventos)
        self.verificar_invariantes = verificar_invariantes
        self.observadores = list(observadores) if observadores else []
        self.numero_eventos = 0
        self.agenda = AgendaColisiones(estado.k)

        self.acumuladores = {
            'eventos_pared': 0,
            'eventos_disco': 0,
            'eventos_borde': 0,
        }

        for i in range(estado.k):
            self._programar(i)

    def _programar(self, indice):
        impacto, dt = impacto_de(self.estado, indice)
        self.agenda.programar(indice, self.estado.reloj + dt, impacto)

    def proximo_evento(self):
        """(índice, impacto, dt) según la agenda"""
        indice, tiempo, impacto = self.agenda.proximo()
        return indice, impacto, max(tiempo - self.estado.reloj, 0.0)

    def avanzar_balistico(self, dt):
        """Mueve todas las partículas y el disco dt sin procesar colisiones"""
        if dt <= 0.0:
            return
        for p in self.estado.particulas:
            p.mover(dt)
        self.estado.disco.avanzar(dt, self.estado.geom.R)
        self.estado.reloj += dt

    def paso(self):
        """Procesa la próxima colisión y devuelve su RegistroEvento"""
        if self.numero_eventos >= self.max_eventos:
            raise ErrorDesbordeEventos(self.max_eventos, self.estado.reloj)
        estado = self.estado
        indice, tiempo, impacto = self.agenda.proximo()
        self.avanzar_balistico(tiempo - estado.reloj)
        estado.reloj = tiempo

        p = estado.particulas[indice]
        p.posicion = impacto.punto
        s_pre = p.rapidez
        omega_pre = estado.disco.omega
        sin_pre = _seno_en(impacto.superficie, impacto.punto, p.velocidad, s_pre)

        if impacto.superficie.es_pared:
            p.velocidad = reflejar_pared(p.velocidad)
            p.ultima_superficie = UltimaSuperficie.desde_superficie(impacto.superficie)
            self.acumuladores['eventos_pared'] += 1
        elif impacto.superficie is Superficie.DISCO:
            p.velocidad, estado.disco.omega = colisionar_con_disco(
                impacto.punto, p.velocidad, estado.disco.omega, estado.geom.R
            )
            p.ultima_superficie = UltimaSuperficie.desde_superficie(impacto.superficie)
            self.acumuladores['eventos_disco'] += 1
            if self.verificar_invariantes:
                verificar_intercambio(s_pre, omega_pre, p.rapidez, estado.disco.omega)
        else:
            p = absorber_y_emitir(p, estado.params, estado.geom, self.rng)
            estado.particulas[indice] = p
            self.acumuladores['eventos_borde'] += 1

        s_post = p.rapidez
        registro = RegistroEvento(
            tiempo, indice, impacto.superficie,
            s_pre, s_post,
            sin_pre, _seno_en(impacto.superficie, impacto.punto, p.velocidad, s_post),
            omega_pre, estado.disco.omega,
            p.mitad,
        )
        self._programar(indice)
        self.numero_eventos += 1

        if self.verificar_invariantes:
            estado.validar()
        for observador in self.observadores:
            observador(estado, registro)
        _logger.debug("evento %d: %r", self.numero_eventos, registro)
        return registro

    def evolucionar_hasta(self, predicado=None, horizonte=None, registrar=True):
        """
        Aplica paso() hasta que predicado(estado, registro) sea verdadero o el
        próximo evento supere el horizonte (tiempo absoluto). En ese caso el
        estado queda avanzado balísticamente justo hasta el horizonte.
        """
        if predicado is None and horizonte is None:
            raise ErrorDominio("se necesita un predicado o un horizonte")
        if horizonte is not None and horizonte < self.estado.reloj:
            raise ErrorDominio(f"horizonte {horizonte!r} anterior al reloj {self.estado.reloj!r}")
        registros = []
        while True:
            if horizonte is not None:
                _, tiempo, _ = self.agenda.proximo()
                if tiempo > horizonte:
                    self.avanzar_balistico(horizonte - self.estado.reloj)
                    self.estado.reloj = horizonte
                    return ResultadoEvolucion(self.estado, registros, MotivoParada.HORIZONTE)
            registro = self.paso()
            if registrar:
                registros.append(registro)
            if predicado is not None and predicado(self.estado, registro):
                return ResultadoEvolucion(self.estado, registros, MotivoParada.PREDICADO)


def estado_inicial(geom, params, k_izquierda, k_derecha, rng):
    """
    Estado en el reloj 0: cada partícula recién emitida desde un punto uniforme
    de su mitad del borde, omega con la ley de renovación del reservorio
    izquierdo y theta uniforme.
    """
    if k_izquierda < 0 or k_derecha < 0 or k_izquierda + k_derecha < 1:
        raise ErrorDominio(f"conteos inválidos: k_izquierda={k_izquierda}, k_derecha={k_derecha}")
    Rg = geom.radio_exterior
    particulas = []
    for mitad, cantidad in ((Mitad.IZQUIERDA, k_izquierda), (Mitad.DERECHA, k_derecha)):
        centro = math.pi if mitad is Mitad.IZQUIERDA else 0.0
        for _ in range(cantidad):
            angulo = centro + rng.uniform(-0.5 * math.pi, 0.5 * math.pi)
            punto = (Rg * math.cos(angulo), Rg * math.sin(angulo))
            s, sin_phi = muestrear_emision(params.beta(mitad), rng)
            particulas.append(Particula(punto, velocidad_emitida(punto, Rg, s, sin_phi), mitad,
                                        UltimaSuperficie.NINGUNA))
    disco = Disco(rng.uniform(0.0, 2.0 * math.pi), muestrear_omega_renovado(params.beta_izquierda, rng))
    return EstadoSistema(particulas, disco, geom, params)
