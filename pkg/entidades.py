"""
Entidades del sistema: Particula, Disco, ParametrosReservorios, EstadoSistema
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from errores import ErrorDominio, ErrorEstadoInvalido
from geometria import TOL_FRONTERA, ConfigGeometria, Mitad, Superficie


class UltimaSuperficie(Enum):
    """Última superficie con la que chocó una partícula"""
    BORDE = "borde"
    DISCO = "disco"
    PARED = "pared"
    NINGUNA = "ninguna"

    @classmethod
    def desde_superficie(cls, superficie):
        if superficie.es_borde:
            return cls.BORDE
        if superficie is Superficie.DISCO:
            return cls.DISCO
        return cls.PARED


@dataclass
class Particula:
    """Una partícula confinada a una mitad del anillo"""
    posicion: Tuple[float, float]
    velocidad: Tuple[float, float]
    mitad: Mitad
    ultima_superficie: UltimaSuperficie = UltimaSuperficie.NINGUNA

    def __post_init__(self):
        if self.velocidad[0] == 0.0 and self.velocidad[1] == 0.0:
            raise ErrorEstadoInvalido("partícula detenida (v = 0)")

    @property
    def rapidez(self):
        return math.hypot(self.velocidad[0], self.velocidad[1])

    def direccion(self):
        s = self.rapidez
        return (self.velocidad[0] / s, self.velocidad[1] / s)

    def mover(self, dt):
        """Avance balístico sin colisiones"""
        self.posicion = (self.posicion[0] + dt * self.velocidad[0],
                         self.posicion[1] + dt * self.velocidad[1])

    def copiar(self):
        return Particula(self.posicion, self.velocidad, self.mitad, self.ultima_superficie)

    def __str__(self):
        return f"P[{self.mitad.value}]"


@dataclass
class Disco:
    """Disco central: ángulo de un punto marcado y velocidad tangencial omega"""
    theta: float = 0.0
    omega: float = 0.0

    def avanzar(self, dt, R):
        """theta += omega*dt/R, reducido a [0, 2*pi)"""
        self.theta = (self.theta + self.omega * dt / R) % (2.0 * math.pi)

    def copiar(self):
        return Disco(self.theta, self.omega)


@dataclass(frozen=True)
class ParametrosReservorios:
    """Temperaturas inversas de los reservorios izquierdo y derecho"""
    beta_izquierda: float
    beta_derecha: float

    def __post_init__(self):
        for nombre, valor in (("beta_izquierda", self.beta_izquierda), ("beta_derecha", self.beta_derecha)):
            if not (valor > 0.0 and math.isfinite(valor)):
                raise ErrorDominio(f"{nombre} debe ser positivo, se recibió {valor!r}")

    def beta(self, mitad):
        return self.beta_izquierda if mitad is Mitad.IZQUIERDA else self.beta_derecha

    @property
    def beta_min(self):
        return min(self.beta_izquierda, self.beta_derecha)

    @property
    def beta_max(self):
        return max(self.beta_izquierda, self.beta_derecha)


@dataclass
class EstadoSistema:
    """
    Estado completo z = (x, v, theta, omega) junto con el reloj, la geometría
    y los reservorios. El simulador lo modifica en el lugar; usar copiar()
    para conservar instantáneas.
    """
    particulas: List[Particula]
    disco: Disco
    geom: ConfigGeometria
    params: ParametrosReservorios
    reloj: float = 0.0
    conteos_por_mitad: Optional[Tuple[int, int]] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.particulas:
            raise ErrorEstadoInvalido("el sistema necesita al menos una partícula")
        if self.conteos_por_mitad is None:
            self.conteos_por_mitad = self.contar_por_mitad()

    @property
    def k(self):
        return len(self.particulas)

    def contar_por_mitad(self):
        izquierda = sum(1 for p in self.particulas if p.mitad is Mitad.IZQUIERDA)
        return izquierda, len(self.particulas) - izquierda

    def energia(self):
        """Energía cinética total: suma de s^2/2 de las partículas más omega^2/2"""
        total = 0.5 * self.disco.omega * self.disco.omega
        for p in self.particulas:
            vx, vy = p.velocidad
            total += 0.5 * (vx * vx + vy * vy)
        return total

    def copiar(self):
        return EstadoSistema(
            [p.copiar() for p in self.particulas],
            self.disco.copiar(),
            self.geom,
            self.params,
            self.reloj,
            self.conteos_por_mitad,
        )

    def validar(self, tol=TOL_FRONTERA):
        """Verifica que cada partícula esté en su semianillo cerrado y que los conteos no cambien"""
        tol_abs = tol * self.geom.radio_exterior
        for i, p in enumerate(self.particulas):
            if p.rapidez == 0.0:
                raise ErrorEstadoInvalido(f"partícula {i} detenida")
            x, y = p.posicion
            rho = math.hypot(x, y)
            if rho < self.geom.R - tol_abs or rho > self.geom.radio_exterior + tol_abs:
                raise ErrorEstadoInvalido(f"partícula {i} fuera del anillo (|x|={rho!r})")
            if (p.mitad is Mitad.DERECHA and x < -tol_abs) or (p.mitad is Mitad.IZQUIERDA and x > tol_abs):
                raise ErrorEstadoInvalido(f"partícula {i} fuera de su mitad (x={x!r})")
        if self.contar_por_mitad() != self.conteos_por_mitad:
            raise ErrorEstadoInvalido("cambió el número de partículas por mitad")

    def __repr__(self):
        return f"EstadoSistema(k={self.k}, reloj={self.reloj:.6g}, omega={self.disco.omega:.6g})"
