"""
Tiempos de parada: t0(z), el tiempo de regeneración tau, el conjunto C y
el tiempo de llegada a C después de una espera delta.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from entidades import Disco, EstadoSistema, Particula, UltimaSuperficie
from errores import ErrorDominio
from geometria import (
    CoordenadasColision,
    Mitad,
    Superficie,
    a_coordenadas_colision,
    desde_coordenadas_colision,
    distancia_entrada_disco,
    longitud_cuerda,
    vuelo_hasta_colision,
)
from simulador import MAX_EVENTOS, Simulador

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParametrosC:
    """Ventana de rapideces [s_min, s_max] y holgura epsilon que definen C"""
    s_min: float
    s_max: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.s_min < self.s_max:
            raise ErrorDominio(f"se requiere 0 < s_min < s_max, se recibió {self.s_min!r}, {self.s_max!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ErrorDominio(f"epsilon debe estar en (0, 1), se recibió {self.epsilon!r}")

    @classmethod
    def por_defecto(cls, params, epsilon=0.1):
        return cls(0.2 / math.sqrt(params.beta_max), 3.0 / math.sqrt(params.beta_min), epsilon)

    def cota_omega(self, alpha):
        return self.s_max * math.sqrt((1.0 - self.epsilon) / (1.0 + alpha * alpha))

    def cota_seno_pre_disco(self, alpha):
        return alpha * math.sqrt(1.0 - self.epsilon) / math.sqrt(1.0 + alpha * alpha)

    def ventana_post_disco(self, alpha):
        a2 = alpha * alpha
        return (self.s_min * math.sqrt((a2 + self.epsilon) / (a2 + 1.0)),
                self.s_max * math.sqrt((a2 - self.epsilon + 2.0) / (a2 + 1.0)))

    def cota_seno_post_disco(self, alpha):
        a2 = alpha * alpha
        numerador = alpha * self.s_max * math.sqrt(1.0 - self.epsilon)
        return numerador / math.sqrt(self.s_max ** 2 * (1.0 - self.epsilon) + self.s_min ** 2 * (a2 + self.epsilon))

    def delta_por_defecto(self, geom):
        """0.9 d / (s_max sqrt((alpha^2 - eps + 2)/(alpha^2 + 1))): menor que el vuelo más corto de C"""
        return 0.9 * geom.d / self.ventana_post_disco(geom.alpha)[1]


def calcular_t0(estado):
    """
    Tiempo absoluto de la última de las colisiones con el disco que ya están
    determinadas por el estado (partículas que van hacia el disco antes de
    volver al borde). Sin ninguna, devuelve el reloj actual.
    """
    t0 = estado.reloj
    for p in estado.particulas:
        vuelo = vuelo_hasta_colision(estado.geom, p.posicion, p.direccion(), p.mitad)
        if vuelo.impacto.superficie is Superficie.DISCO:
            t0 = max(t0, estado.reloj + vuelo.distancia / p.rapidez)
    return t0


class EstadoCiclo(Enum):
    """Progreso de una partícula hacia el ciclo borde -> disco -> borde"""
    SIN_EMITIR = "sin_emitir"
    EMITIDA = "emitida"
    EMITIDA_GOLPEO_DISCO = "emitida_golpeo_disco"


class MonitorParada:
    """
    Vigila las dos condiciones de regeneración: (1) toda partícula chocó con
    el borde al menos una vez, (2) alguna partícula emitida golpeó el disco
    después de t0 y volvió al borde. tau es el tiempo del evento que completa
    la última de las dos.
    """

    def __init__(self, estado):
        self.t0 = calcular_t0(estado)
        self.inicio = estado.reloj
        self.bordes = [False] * estado.k
        self.ciclos = [EstadoCiclo.SIN_EMITIR] * estado.k
        self.ciclo_completo = False
        self.tau = None

    def __call__(self, estado, registro):
        i = registro.indice
        if registro.superficie.es_borde:
            self.bordes[i] = True
            if self.ciclos[i] is EstadoCiclo.EMITIDA_GOLPEO_DISCO:
                self.ciclo_completo = True
            self.ciclos[i] = EstadoCiclo.EMITIDA
        elif registro.superficie is Superficie.DISCO:
            if self.ciclos[i] is EstadoCiclo.EMITIDA and registro.tiempo > self.t0:
                self.ciclos[i] = EstadoCiclo.EMITIDA_GOLPEO_DISCO
        if self.tau is None and self.ciclo_completo and all(self.bordes):
            self.tau = registro.tiempo
            return True
        return False


class ResultadoParada(NamedTuple):
    estado: EstadoSistema
    duracion: float
    eventos: int


def recorrer_hasta_tau(estado, rng, max_eventos=MAX_EVENTOS, verificar_invariantes=False):
    """Evoluciona hasta tau; devuelve el estado en tau y la duración tau - reloj inicial"""
    monitor = MonitorParada(estado)
    simulador = Simulador(estado, rng, max_eventos=max_eventos, verificar_invariantes=verificar_invariantes)
    simulador.evolucionar_hasta(predicado=monitor, registrar=False)
    return ResultadoParada(simulador.estado, monitor.tau - monitor.inicio, simulador.numero_eventos)


def clausula_C(coords: CoordenadasColision, cparams, alpha):
    """Número de la cláusula de C que cumple la partícula (1, 2 o 3), o None"""
    s, seno, xi = coords.s, abs(coords.sin_phi), coords.xi
    en_ventana = cparams.s_min <= s <= cparams.s_max
    if seno > alpha and en_ventana:
        return 1
    if xi >= 0.0 and math.copysign(1.0, xi) > 0.0:
        if en_ventana and seno < cparams.cota_seno_pre_disco(alpha):
            return 2
        return None
    s_bajo, s_alto = cparams.ventana_post_disco(alpha)
    if s_bajo <= s <= s_alto and seno < cparams.cota_seno_post_disco(alpha):
        return 3
    return None


def en_C(estado, cparams):
    """Pertenencia del estado al conjunto C"""
    alpha = estado.geom.alpha
    if abs(estado.disco.omega) > cparams.cota_omega(alpha):
        return False
    for p in estado.particulas:
        coords = a_coordenadas_colision(estado.geom, p.posicion, p.velocidad, p.mitad)
        if clausula_C(coords, cparams, alpha) is None:
            return False
    return True


def tiempo_llegada_C(estado, rng, cparams, delta, max_eventos=MAX_EVENTOS):
    """
    Duración hasta el primer evento, tras esperar delta, en el que el estado
    está en C. Con delta = 0 se revisa primero el estado inicial.
    """
    if delta < 0.0:
        raise ErrorDominio(f"delta debe ser >= 0, se recibió {delta!r}")
    inicio = estado.reloj
    if delta == 0.0 and en_C(estado, cparams):
        return 0.0

    def llego(estado_actual, registro):
        return registro.tiempo - inicio >= delta and en_C(estado_actual, cparams)

    resultado = Simulador(estado, rng, max_eventos=max_eventos).evolucionar_hasta(predicado=llego, registrar=False)
    return resultado.estado.reloj - inicio


def _arco_de(mitad, rng, radio):
    centro = math.pi if mitad is Mitad.IZQUIERDA else 0.0
    angulo = (centro + rng.uniform(-0.5 * math.pi, 0.5 * math.pi)) % (2.0 * math.pi)
    return radio * angulo


def muestrear_sustituto_C(geom, params, cparams, k_izquierda, k_derecha, rng, incluir_pre_disco=False):
    """
    Estado absolutamente continuo dentro de C: por defecto todas las partículas
    en la primera cláusula (sin rumbo al disco); con incluir_pre_disco, cada
    partícula va hacia el disco (segunda cláusula) con probabilidad 1/2.
    """
    alpha = geom.alpha
    particulas = []
    for mitad, cantidad in ((Mitad.IZQUIERDA, k_izquierda), (Mitad.DERECHA, k_derecha)):
        for _ in range(cantidad):
            r = _arco_de(mitad, rng, geom.radio_exterior)
            s = rng.uniform(cparams.s_min, cparams.s_max)
            signo = 1.0 if rng.random() < 0.5 else -1.0
            if incluir_pre_disco and rng.random() < 0.5:
                seno = signo * rng.uniform(0.0, cparams.cota_seno_pre_disco(alpha))
                xi = rng.uniform(0.0, distancia_entrada_disco(geom, seno))
            else:
                seno = signo * rng.uniform(alpha, 1.0)
                xi = rng.uniform(0.0, longitud_cuerda(geom, seno))
            posicion, velocidad = desde_coordenadas_colision(geom, CoordenadasColision(r, mitad, s, seno, xi))
            particulas.append(Particula(posicion, velocidad, mitad, UltimaSuperficie.BORDE))
    cota = cparams.cota_omega(alpha)
    disco = Disco(rng.uniform(0.0, 2.0 * math.pi), rng.uniform(-cota, cota))
    return EstadoSistema(particulas, disco, geom, params)
