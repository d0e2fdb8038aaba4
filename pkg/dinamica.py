"""
Leyes de interacción: reflexión especular en las paredes, intercambio
partícula-disco y absorción/reemisión en los reservorios de Gibbs.
"""
import logging
import math

import numpy as np
from scipy.special import erf

from entidades import Particula, UltimaSuperficie
from errores import ErrorDominio, ErrorEstadoInvalido, ErrorInvarianteInterno
from geometria import TOL_FRONTERA

_logger = logging.getLogger(__name__)

RAPIDEZ_MINIMA = 1e-300
TOL_INTERCAMBIO = 1e-12


def reflejar_pared(v):
    """Reflexión especular en una pared vertical: (vx, vy) -> (-vx, vy)"""
    if v[0] == 0.0:
        raise ErrorEstadoInvalido("velocidad horizontal nula en una pared")
    return (-v[0], v[1])


def interactuar_disco(v_t, v_perp, omega):
    """
    Regla de intercambio con el disco en el marco (tangencial, normal saliente):
    v_t' = omega, v_perp' = -v_perp, omega' = v_t.
    """
    if not v_perp < 0.0:
        raise ErrorEstadoInvalido(f"la partícula no se acerca al disco (v_perp={v_perp!r})")
    return omega, -v_perp, v_t


def colisionar_con_disco(punto, velocidad, omega, R):
    """
    Aplica interactuar_disco en el marco local del punto de impacto.
    Devuelve (nueva velocidad cartesiana, nuevo omega).
    """
    nx, ny = punto[0] / R, punto[1] / R
    tx, ty = -ny, nx
    v_perp = velocidad[0] * nx + velocidad[1] * ny
    v_t = velocidad[0] * tx + velocidad[1] * ty
    v_t_nueva, v_perp_nueva, omega_nuevo = interactuar_disco(v_t, v_perp, omega)
    nueva = (v_t_nueva * tx + v_perp_nueva * nx, v_t_nueva * ty + v_perp_nueva * ny)
    return nueva, omega_nuevo


def verificar_intercambio(s_pre, omega_pre, s_post, omega_post, tol=TOL_INTERCAMBIO):
    """s'^2 + omega'^2 = s^2 + omega^2 a tolerancia relativa"""
    antes = s_pre * s_pre + omega_pre * omega_pre
    despues = s_post * s_post + omega_post * omega_post
    if abs(despues - antes) > tol * max(antes, despues):
        raise ErrorInvarianteInterno(f"el intercambio con el disco no conserva energía: {antes!r} -> {despues!r}")


def _validar_beta(beta):
    if not (beta > 0.0 and math.isfinite(beta)):
        raise ErrorDominio(f"beta debe ser positivo, se recibió {beta!r}")


def muestrear_emision(beta, rng):
    """
    Sortea (s, sin_phi) de la ley de emisión de Gibbs: s es la norma de tres
    normales centradas de varianza 1/(2 beta) y sin_phi ~ U(-1, 1).
    """
    _validar_beta(beta)
    sigma = math.sqrt(0.5 / beta)
    while True:
        g = rng.normal(0.0, sigma, 3)
        s = math.sqrt(float(g @ g))
        if s > RAPIDEZ_MINIMA:
            break
        _logger.warning("rapidez sorteada nula, se vuelve a sortear")
    sin_phi = rng.uniform(-1.0, 1.0)
    return s, sin_phi


def muestrear_emisiones(beta, rng, n):
    """Versión vectorizada de muestrear_emision: arreglos (s, sin_phi) de largo n"""
    _validar_beta(beta)
    sigma = math.sqrt(0.5 / beta)
    s = np.linalg.norm(rng.normal(0.0, sigma, (n, 3)), axis=1)
    nulas = s <= RAPIDEZ_MINIMA
    while nulas.any():
        s[nulas] = np.linalg.norm(rng.normal(0.0, sigma, (int(nulas.sum()), 3)), axis=1)
        nulas = s <= RAPIDEZ_MINIMA
    sin_phi = rng.uniform(-1.0, 1.0, n)
    return s, sin_phi


def velocidad_emitida(punto, radio, s, sin_phi):
    """Velocidad entrante s*(cos(phi) n + sin(phi) t) en un punto del borde"""
    nx, ny = -punto[0] / radio, -punto[1] / radio
    tx, ty = -punto[1] / radio, punto[0] / radio
    cos_phi = math.sqrt((1.0 - sin_phi) * (1.0 + sin_phi))
    return (s * (cos_phi * nx + sin_phi * tx), s * (cos_phi * ny + sin_phi * ty))


def absorber_y_emitir(particula, params, geom, rng):
    """Absorbe la partícula en el borde y emite otra en el mismo punto con la ley del reservorio de su mitad"""
    x, y = particula.posicion
    Rg = geom.radio_exterior
    rho = math.hypot(x, y)
    if abs(rho - Rg) > TOL_FRONTERA * Rg:
        raise ErrorEstadoInvalido(f"absorción fuera del borde (|x|={rho!r})")
    if particula.velocidad[0] * x + particula.velocidad[1] * y < 0.0:
        raise ErrorEstadoInvalido("absorción con velocidad entrante")
    s, sin_phi = muestrear_emision(params.beta(particula.mitad), rng)
    return Particula(
        particula.posicion,
        velocidad_emitida(particula.posicion, rho, s, sin_phi),
        particula.mitad,
        UltimaSuperficie.BORDE,
    )


def densidad_renovacion_omega(beta, omega):
    """Densidad de omega tras el choque de una partícula recién emitida: sqrt(beta/pi) exp(-beta omega^2)"""
    _validar_beta(beta)
    return np.sqrt(beta / np.pi) * np.exp(-beta * np.square(omega))


def cdf_renovacion_omega(beta, omega):
    _validar_beta(beta)
    return 0.5 * (1.0 + erf(np.sqrt(beta) * np.asarray(omega)))


def muestrear_omega_renovado(beta, rng):
    return rng.normal(0.0, math.sqrt(0.5 / beta))
