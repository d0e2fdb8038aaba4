"""
Oráculos por cuadratura adaptativa: CDF de Maxwell, momentos de emisión y
las cotas de tiempos K, K/alpha, D y D'.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import erf

from errores import ErrorDominio, ErrorSimulacion, ErrorTolerancia

_logger = logging.getLogger(__name__)

TOL_RELATIVA = 1e-8
TOL_MOMENTOS = 1e-10


def integrar(f, a, b, epsrel=TOL_RELATIVA, limite=200):
    """
    quad con tolerancia puramente relativa. ErrorTolerancia si no converge,
    ErrorDominio si quad rechaza los argumentos (por ejemplo epsrel < 50 eps).
    """
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            valor, error = quad(f, a, b, epsabs=0.0, epsrel=epsrel, limit=limite)
    except ErrorSimulacion:
        raise
    except ValueError as exc:
        raise ErrorDominio(f"argumentos de cuadratura inválidos: {exc}") from exc
    if error > 10.0 * epsrel * abs(valor):
        raise ErrorTolerancia(f"la cuadratura en [{a}, {b}] no convergió: valor={valor!r}, error={error!r}")
    return valor, error


def densidad_rapidez(beta, s):
    """(4 beta^{3/2}/sqrt(pi)) s^2 exp(-beta s^2)"""
    return 4.0 * beta ** 1.5 / math.sqrt(math.pi) * np.square(s) * np.exp(-beta * np.square(s))


def maxwell_cdf(beta, s):
    """P(rapidez de emisión <= s) = erf(sqrt(beta) s) - (2 sqrt(beta) s/sqrt(pi)) exp(-beta s^2)"""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0):
        raise ErrorDominio(f"s debe ser >= 0, se recibió {s!r}")
    x = math.sqrt(beta) * s_arr
    valor = erf(x) - 2.0 * x / math.sqrt(math.pi) * np.exp(-x * x)
    return float(valor) if np.ndim(valor) == 0 else valor


@dataclass
class InformeCota:
    """Valor de una cota con la tolerancia alcanzada y las entradas que la determinan"""
    nombre: str
    valor: float
    tol: float
    entradas: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.valor) and self.valor > 0.0):
            raise ErrorTolerancia(f"{self.nombre}: valor no finito o no positivo ({self.valor!r})")

    def a_dict(self):
        return {"name": self.nombre, "value": self.valor, "tol": self.tol, "inputs": dict(self.entradas)}


def _entradas(geom, **extra):
    datos = {"R": geom.R, "d": geom.d}
    datos.update(extra)
    return datos


def _media_inversa_rapidez(beta):
    """E[1/s] bajo la ley de emisión, por cuadratura (forma cerrada 2 sqrt(beta/pi))"""
    return integrar(lambda s: densidad_rapidez(beta, s) / s if s > 0.0 else 0.0, 0.0, math.inf)


def momentos_emision(beta):
    """(E[s], E[s^2]) = (2/sqrt(pi beta), 3/(2 beta)), verificados por cuadratura"""
    if not beta > 0.0:
        raise ErrorDominio(f"beta debe ser positivo, se recibió {beta!r}")
    media = 2.0 / math.sqrt(math.pi * beta)
    segundo = 1.5 / beta
    media_q, _ = integrar(lambda s: s * densidad_rapidez(beta, s), 0.0, math.inf)
    segundo_q, _ = integrar(lambda s: s * s * densidad_rapidez(beta, s), 0.0, math.inf)
    for cerrada, cuadratura in ((media, media_q), (segundo, segundo_q)):
        if abs(cerrada - cuadratura) > TOL_MOMENTOS * cerrada:
            raise ErrorTolerancia(f"momento {cerrada!r} vs cuadratura {cuadratura!r}")
    return media, segundo


def cota_K(beta, geom):
    """
    Cota de E[tiempo de vuelo] de una emisión, uniforme en omega:
    E[1/s] * (2l P(|sin| >= alpha) + E[l + l/sqrt(1 - sin^2/alpha^2); |sin| <= alpha]).
    En el tramo con disco se usa sin(phi) = alpha sin(w).
    """
    alpha, l = geom.alpha, geom.l
    inversa, e_s = _media_inversa_rapidez(beta)
    # (1/2) du sobre u en [-1, 1]; por simetría queda du sobre [0, 1]
    # (l + l/cos(w)) * alpha cos(w) dw
    con_disco, e_d = integrar(lambda w: alpha * l * (math.cos(w) + 1.0), 0.0, 0.5 * math.pi)
    sin_disco = 2.0 * l * (1.0 - alpha)
    valor = inversa * (con_disco + sin_disco)
    tol = e_s / inversa + e_d / con_disco
    return InformeCota("K", valor, tol, _entradas(geom, beta=beta))


def cota_golpe(informe_K, geom):
    """Cota del tiempo hasta que una emisión golpea el disco y vuelve: K/alpha"""
    return InformeCota("K_alpha", informe_K.valor / geom.alpha, informe_K.tol, dict(informe_K.entradas))


def cota_D(beta_min, betas, geom):
    """
    Cota de E[tau] desde cualquier distribución inicial: el término de emisión
    4l E[1/s]/2 * (integral de 1/cos(phi') en el tramo con disco + (1 - alpha)),
    más l/sqrt(beta_min pi), más (1 + alpha) K/alpha. Se usa el beta de mayor E[1/s].
    """
    if not beta_min > 0.0:
        raise ErrorDominio(f"beta_min debe ser positivo, se recibió {beta_min!r}")
    beta = max(betas)
    alpha, l = geom.alpha, geom.l
    inversa, e_s = _media_inversa_rapidez(beta)
    # 1/cos(phi') = 1/sqrt(1 - u^2/alpha^2); con u = alpha sin(w) el integrando es alpha
    con_disco, e_d = integrar(lambda w: alpha, 0.0, 0.5 * math.pi)
    emision = 2.0 * l * inversa * (con_disco + (1.0 - alpha))
    informe_K = cota_K(beta, geom)
    valor = emision + l / math.sqrt(beta_min * math.pi) + (1.0 + alpha) * informe_K.valor / alpha
    tol = e_s / inversa + e_d / con_disco + informe_K.tol
    return InformeCota("D", valor, tol, _entradas(geom, beta_min=beta_min, beta=beta))


def cota_D_prima(cparams, beta_min, geom, informe_D):
    """D' = 2l/(sqrt(eps) s_min) + D"""
    valor = 2.0 * geom.l / (math.sqrt(cparams.epsilon) * cparams.s_min) + informe_D.valor
    entradas = dict(informe_D.entradas)
    entradas.update(beta_min=beta_min, s_min=cparams.s_min, s_max=cparams.s_max, epsilon=cparams.epsilon)
    return InformeCota("D_prima", valor, informe_D.tol, entradas)


def estimar_tau_C(informe_D, informe_D_prima, gamma):
    """
    Combinación gamma D'/gamma + (1 - gamma) gamma D/gamma^2 con un gamma
    empírico. Es informativa, no una cota certificada.
    """
    if not 0.0 < gamma <= 1.0:
        raise ErrorDominio(f"gamma debe estar en (0, 1], se recibió {gamma!r}")
    valor = informe_D_prima.valor + (1.0 - gamma) * informe_D.valor / gamma
    entradas = dict(informe_D_prima.entradas)
    entradas["gamma"] = gamma
    return InformeCota("tau_C_estimado", valor, informe_D_prima.tol, entradas)
