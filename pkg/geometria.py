"""
Geometría exacta del dominio: anillo de radios R y R+d partido en dos mitades
por las paredes verticales x=0, |y| en [R, R+d].

Todas las intersecciones se resuelven en forma cerrada (cuadráticas para las
circunferencias, lineales para las paredes) con la fórmula estable de raíces.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from errores import ErrorDominio, ErrorEstadoInvalido, ErrorInvarianteInterno

_logger = logging.getLogger(__name__)

# Distancia mínima (relativa a R+d) para aceptar una intersección
EPS_DISTANCIA = 1e-12
# Discriminantes en (0, GUARDA_TANGENCIAL*R^2) se clasifican como fallo
GUARDA_TANGENCIAL = 1e-12
# Tolerancia (relativa a R+d) para decidir si un punto está sobre una frontera
TOL_FRONTERA = 1e-9
# Una cuerda desplegada cruza x=0 a lo sumo una vez
MAX_REFLEXIONES = 4

Vector = Tuple[float, float]


class Mitad(Enum):
    """Mitad del dominio a la que está confinada una partícula"""
    IZQUIERDA = "izquierda"
    DERECHA = "derecha"


class Superficie(Enum):
    """Superficies contra las que puede chocar una partícula"""
    BORDE_IZQUIERDO = "borde_izquierdo"
    BORDE_DERECHO = "borde_derecho"
    DISCO = "disco"
    PARED_SUPERIOR = "pared_superior"
    PARED_INFERIOR = "pared_inferior"

    @property
    def es_borde(self):
        return self in (Superficie.BORDE_IZQUIERDO, Superficie.BORDE_DERECHO)

    @property
    def es_pared(self):
        return self in (Superficie.PARED_SUPERIOR, Superficie.PARED_INFERIOR)


# Prioridad de desempate: disco > pared > borde
_PRIORIDAD = {
    Superficie.DISCO: 0,
    Superficie.PARED_SUPERIOR: 1,
    Superficie.PARED_INFERIOR: 1,
    Superficie.BORDE_IZQUIERDO: 2,
    Superficie.BORDE_DERECHO: 2,
}


@dataclass(frozen=True)
class ConfigGeometria:
    """Parámetros inmutables del dominio: radio del disco R y ancho del anillo d"""
    R: float
    d: float

    def __post_init__(self):
        if not (self.R > 0.0 and math.isfinite(self.R)):
            raise ErrorDominio(f"R debe ser positivo, se recibió {self.R!r}")
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise ErrorDominio(f"d debe ser positivo, se recibió {self.d!r}")

    @property
    def radio_exterior(self):
        return self.R + self.d

    @property
    def alpha(self):
        """alpha = R/(R+d): probabilidad de golpear el disco en cada emisión"""
        return self.R / (self.R + self.d)

    @property
    def l(self):
        """Mitad de la máxima distancia de vuelo, sqrt((R+d)^2 - R^2)"""
        # (R+d)^2 - R^2 = d(2R+d) evita la cancelación
        return math.sqrt(self.d * (2.0 * self.R + self.d))


class ImpactoSuperficie(NamedTuple):
    """Primera intersección de un rayo con la frontera"""
    superficie: Superficie
    punto: Vector
    distancia: float
    normal_interior: Vector


class CoordenadasColision(NamedTuple):
    """
    Coordenadas (r, s, sin_phi, xi) referidas a una colisión con el borde.

    xi >= 0: la colisión de referencia es pasada (xi es la distancia recorrida desde ella).
    xi < 0: la colisión de referencia es futura (-xi es la distancia que falta),
    caso de una partícula que ya chocó con el disco.
    """
    r: float
    mitad: Mitad
    s: float
    sin_phi: float
    xi: float


class VueloLibre(NamedTuple):
    """Vuelo desplegado (a través de las paredes) hasta el borde o el disco"""
    distancia: float
    impacto: ImpactoSuperficie
    direccion: Vector


def _validar_seno(sin_phi):
    if not abs(sin_phi) < 1.0:
        raise ErrorDominio(f"|sin_phi| debe ser < 1, se recibió {sin_phi!r}")


def longitud_cuerda(geom, sin_phi):
    """Cuerda completa de la circunferencia exterior, 2(R+d)cos(phi)"""
    _validar_seno(sin_phi)
    return 2.0 * geom.radio_exterior * math.sqrt((1.0 - sin_phi) * (1.0 + sin_phi))


def distancia_entrada_disco(geom, sin_phi) -> Optional[float]:
    """
    Distancia desde el borde hasta el disco a lo largo de la cuerda,
    o None si el rayo no golpea el disco.
    """
    _validar_seno(sin_phi)
    if abs(sin_phi) > geom.alpha:
        return None
    Rg = geom.radio_exterior
    disc = geom.R * geom.R - Rg * Rg * sin_phi * sin_phi
    if disc < GUARDA_TANGENCIAL * geom.R * geom.R:
        return None
    cos_phi = math.sqrt((1.0 - sin_phi) * (1.0 + sin_phi))
    # (R+d)cos(phi) - sqrt(disc) reescrito como l^2 / ((R+d)cos(phi) + sqrt(disc))
    return geom.l ** 2 / (Rg * cos_phi + math.sqrt(disc))


def mapa_angulo_disco(geom, sin_phi):
    """Seno del ángulo de incidencia en el disco: sin(phi') = sin(phi)/alpha"""
    if abs(sin_phi) > geom.alpha:
        raise ErrorDominio(f"|sin_phi|={abs(sin_phi)!r} supera alpha={geom.alpha!r}")
    return sin_phi / geom.alpha


def largos_vuelo_emision(geom, senos):
    """
    Versión vectorizada del primer vuelo desde el borde: hasta el disco si
    distancia_entrada_disco lo golpea, si no la cuerda completa. Con las
    paredes desplegadas sólo depende de sin_phi.
    """
    senos = np.asarray(senos, dtype=float)
    if np.any(np.abs(senos) > 1.0):
        raise ErrorDominio("|sin_phi| debe ser <= 1")
    Rg = geom.radio_exterior
    cos_phi = np.sqrt((1.0 - senos) * (1.0 + senos))
    disc = geom.R * geom.R - Rg * Rg * senos * senos
    golpea = (np.abs(senos) <= geom.alpha) & (disc >= GUARDA_TANGENCIAL * geom.R * geom.R)
    hasta_disco = geom.l ** 2 / (Rg * cos_phi + np.sqrt(np.clip(disc, 0.0, None)))
    return np.where(golpea, hasta_disco, 2.0 * Rg * cos_phi)


def tangente_antihoraria(punto):
    """Tangente unitaria antihoraria en un punto de una circunferencia centrada"""
    rho = math.hypot(punto[0], punto[1])
    return (-punto[1] / rho, punto[0] / rho)


def seno_tangencial(punto, direccion):
    """Componente de la dirección unitaria a lo largo de la tangente antihoraria"""
    tx, ty = tangente_antihoraria(punto)
    return direccion[0] * tx + direccion[1] * ty


def trazar_rayo(geom, origen, direccion, mitad) -> ImpactoSuperficie:
    """
    Intersección más cercana (distancia estrictamente positiva) del rayo con el
    borde exterior, el disco y las paredes. La dirección debe ser unitaria.
    """
    ox, oy = origen
    ux, uy = direccion
    R = geom.R
    Rg = geom.radio_exterior
    eps = EPS_DISTANCIA * Rg
    b = ox * ux + oy * uy
    oo = ox * ox + oy * oy
    candidatos = []

    # Disco: sólo la raíz de entrada, y sólo si el rayo se acerca al centro
    if b < 0.0:
        c = oo - R * R
        disc = b * b - c
        if disc > GUARDA_TANGENCIAL * R * R:
            t = c / (-b + math.sqrt(disc))
            if t > eps:
                px, py = ox + t * ux, oy + t * uy
                k = R / math.hypot(px, py)
                px, py = px * k, py * k
                candidatos.append((t, Superficie.DISCO, (px, py), (px / R, py / R)))
        elif disc > 0.0:
            _logger.warning("colisión casi tangencial con el disco tratada como fallo (disc=%r)", disc)

    # Paredes x=0
    if ux != 0.0:
        t = -ox / ux
        if t > eps:
            y = oy + t * uy
            ay = abs(y)
            if R * (1.0 - EPS_DISTANCIA) <= ay <= Rg * (1.0 + EPS_DISTANCIA):
                normal = (1.0, 0.0) if mitad is Mitad.DERECHA else (-1.0, 0.0)
                superficie = Superficie.PARED_SUPERIOR if y > 0.0 else Superficie.PARED_INFERIOR
                candidatos.append((t, superficie, (0.0, y), normal))

    # Borde exterior: el origen está dentro, la salida es la raíz mayor
    c = min(oo - Rg * Rg, 0.0)
    raiz = math.sqrt(b * b - c)
    t = (-b + raiz) if b <= 0.0 else (-c / (b + raiz))
    if t > eps:
        px, py = ox + t * ux, oy + t * uy
        k = Rg / math.hypot(px, py)
        px, py = px * k, py * k
        superficie = Superficie.BORDE_DERECHO if mitad is Mitad.DERECHA else Superficie.BORDE_IZQUIERDO
        candidatos.append((t, superficie, (px, py), (-px / Rg, -py / Rg)))

    if not candidatos:
        raise ErrorInvarianteInterno(
            f"el rayo desde {origen!r} con dirección {direccion!r} no corta ninguna superficie"
        )
    t, superficie, punto, normal = min(candidatos, key=lambda cand: (cand[0], _PRIORIDAD[cand[1]]))
    return ImpactoSuperficie(superficie, punto, t, normal)


def vuelo_hasta_colision(geom, origen, direccion, mitad) -> VueloLibre:
    """Sigue el rayo reflejándolo en las paredes hasta chocar con el borde o el disco"""
    pos, dir_ = origen, direccion
    total = 0.0
    for _ in range(MAX_REFLEXIONES):
        impacto = trazar_rayo(geom, pos, dir_, mitad)
        total += impacto.distancia
        if not impacto.superficie.es_pared:
            return VueloLibre(total, impacto, dir_)
        pos = impacto.punto
        dir_ = (-dir_[0], dir_[1])
    raise ErrorInvarianteInterno(f"más de {MAX_REFLEXIONES} reflexiones en paredes sin colisión")


def avanzar_desplegado(geom, origen, direccion, mitad, distancia, reflejar_al_final=True):
    """
    Avanza una distancia dada reflejando en las paredes.
    Devuelve (posición, dirección) al final del recorrido. Si el recorrido
    termina justo sobre una pared, reflejar_al_final decide si la dirección
    devuelta ya está reflejada.
    """
    if distancia < 0.0:
        raise ErrorDominio(f"distancia negativa: {distancia!r}")
    tol = TOL_FRONTERA * geom.radio_exterior
    pos, dir_ = origen, direccion
    restante = distancia
    for _ in range(MAX_REFLEXIONES + 1):
        if restante == 0.0:
            return pos, dir_
        impacto = trazar_rayo(geom, pos, dir_, mitad)
        if impacto.superficie.es_pared and abs(restante - impacto.distancia) <= tol:
            return impacto.punto, ((-dir_[0], dir_[1]) if reflejar_al_final else dir_)
        if restante < impacto.distancia:
            return (pos[0] + restante * dir_[0], pos[1] + restante * dir_[1]), dir_
        if not impacto.superficie.es_pared:
            if restante - impacto.distancia <= tol:
                return impacto.punto, dir_
            raise ErrorDominio(
                f"el recorrido de {distancia!r} atraviesa {impacto.superficie.value} a {impacto.distancia!r}"
            )
        restante -= impacto.distancia
        pos = impacto.punto
        dir_ = (-dir_[0], dir_[1])
    raise ErrorInvarianteInterno("demasiadas reflexiones al avanzar")


def longitud_arco(geom, punto):
    """Posición por longitud de arco sobre el borde, en [0, 2*pi*(R+d))"""
    angulo = math.atan2(punto[1], punto[0]) % (2.0 * math.pi)
    return geom.radio_exterior * angulo


def _hacia_adentro(geom, punto, direccion, mitad):
    """Sobre una pared, refleja la dirección si apunta hacia la otra mitad"""
    if abs(punto[0]) > TOL_FRONTERA * geom.radio_exterior:
        return direccion
    afuera = direccion[0] < 0.0 if mitad is Mitad.DERECHA else direccion[0] > 0.0
    return (-direccion[0], direccion[1]) if afuera else direccion


def a_coordenadas_colision(geom, x, v, mitad) -> CoordenadasColision:
    """
    Convierte (x, v) a coordenadas de colisión. La colisión de referencia es la
    pasada con el borde si el choque previo (sin contar paredes) fue con el borde;
    si fue con el disco, es la futura colisión con el borde.
    """
    s = math.hypot(v[0], v[1])
    if s == 0.0:
        raise ErrorEstadoInvalido("partícula detenida (v = 0)")
    u = (v[0] / s, v[1] / s)
    tol = TOL_FRONTERA * geom.radio_exterior
    rho = math.hypot(x[0], x[1])
    radial = x[0] * u[0] + x[1] * u[1]

    en_borde = abs(rho - geom.radio_exterior) <= tol
    if en_borde and radial < 0.0:
        # recién emitida
        return CoordenadasColision(longitud_arco(geom, x), mitad, s, seno_tangencial(x, u), 0.0)

    if abs(rho - geom.R) <= tol and radial > 0.0:
        tras_disco = True
    else:
        atras = vuelo_hasta_colision(geom, x, _hacia_adentro(geom, x, (-u[0], -u[1]), mitad), mitad)
        if atras.impacto.superficie.es_borde:
            punto = atras.impacto.punto
            salida = (-atras.direccion[0], -atras.direccion[1])
            return CoordenadasColision(
                longitud_arco(geom, punto), mitad, s, seno_tangencial(punto, salida), atras.distancia
            )
        tras_disco = True

    if tras_disco and en_borde:
        # a punto de ser absorbida tras chocar con el disco
        return CoordenadasColision(longitud_arco(geom, x), mitad, s, seno_tangencial(x, u), -0.0)
    adelante = vuelo_hasta_colision(geom, x, _hacia_adentro(geom, x, u, mitad), mitad)
    if not adelante.impacto.superficie.es_borde:
        raise ErrorInvarianteInterno("dos colisiones con el disco sin pasar por el borde")
    punto = adelante.impacto.punto
    return CoordenadasColision(
        longitud_arco(geom, punto), mitad, s, seno_tangencial(punto, adelante.direccion), -adelante.distancia
    )


def desde_coordenadas_colision(geom, coords):
    """Reconstruye (posición, velocidad) a partir de coordenadas de colisión"""
    Rg = geom.radio_exterior
    angulo = coords.r / Rg
    ca, sa = math.cos(angulo), math.sin(angulo)
    punto = (Rg * ca, Rg * sa)
    normal = (-ca, -sa)
    tangente = (-sa, ca)
    sin_phi = coords.sin_phi
    _validar_seno(sin_phi)
    cos_phi = math.sqrt((1.0 - sin_phi) * (1.0 + sin_phi))
    if coords.xi >= 0.0 and math.copysign(1.0, coords.xi) > 0.0:
        u = (cos_phi * normal[0] + sin_phi * tangente[0], cos_phi * normal[1] + sin_phi * tangente[1])
        pos, dir_ = avanzar_desplegado(geom, punto, u, coords.mitad, coords.xi)
        return pos, (coords.s * dir_[0], coords.s * dir_[1])
    llegada = (-cos_phi * normal[0] + sin_phi * tangente[0], -cos_phi * normal[1] + sin_phi * tangente[1])
    pos, dir_ = avanzar_desplegado(geom, punto, (-llegada[0], -llegada[1]), coords.mitad, -coords.xi,
                                   reflejar_al_final=False)
    return pos, (-coords.s * dir_[0], -coords.s * dir_[1])
