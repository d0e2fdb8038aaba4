"""
Observables estadísticos: ensambles estacionarios, la cola B_T, la tasa de
depósito en tiempos de vuelo largos, distancia de variación total, ajuste de
leyes de potencia, perturbación del ensamble y flujo de calor en los reservorios.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from errores import ErrorDatosInsuficientes, ErrorDominio, ErrorInvarianteInterno, ErrorPerturbacionDegenerada
from generadores import crear_flujo
from geometria import (
    Mitad,
    a_coordenadas_colision,
    distancia_entrada_disco,
    largos_vuelo_emision,
    longitud_cuerda,
    vuelo_hasta_colision,
)
from dinamica import muestrear_emisiones, velocidad_emitida
from oraculos import cota_K, densidad_rapidez, integrar, maxwell_cdf
from simulador import MAX_EVENTOS, Simulador

_logger = logging.getLogger(__name__)

Z_WILSON = 1.96
# espaciado por defecto, en tiempos medios entre absorciones
FACTOR_ESPACIADO = 5.0


# ---------------------------------------------------------------------------
# Ensamble estacionario
# ---------------------------------------------------------------------------

def tiempo_hasta_primera_colision(estado):
    """
    Por partícula, el tiempo hasta su próxima colisión con el borde o el disco
    (los rebotes en las paredes no cuentan).
    """
    tiempos = np.empty(estado.k)
    for i, p in enumerate(estado.particulas):
        vuelo = vuelo_hasta_colision(estado.geom, p.posicion, p.direccion(), p.mitad)
        tiempos[i] = vuelo.distancia / p.rapidez
    return tiempos


def coordenadas_particulas(estado):
    """Arreglo (k, 3) con (s, sin_phi, xi) de cada partícula"""
    filas = []
    for p in estado.particulas:
        c = a_coordenadas_colision(estado.geom, p.posicion, p.velocidad, p.mitad)
        filas.append((c.s, c.sin_phi, c.xi))
    return np.array(filas)


@dataclass
class ConjuntoEstacionario:
    """
    Instantáneas de una trayectoria larga tomadas en burn_in + j*espaciado.
    Siempre conserva los marginales usados por los estimadores; los estados
    completos sólo si se pidieron (hacen falta para evolucionar el ensamble).
    """
    burn_in: float
    espaciado: float
    huella: str
    tiempos: np.ndarray
    vuelo_libre_max: np.ndarray
    omegas: np.ndarray
    coordenadas: np.ndarray
    estados: Optional[List] = None
    pesos: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.espaciado > 0.0:
            raise ErrorDominio(f"el espaciado debe ser positivo, se recibió {self.espaciado!r}")

    @property
    def n(self):
        return len(self.vuelo_libre_max)

    def pesos_o_unos(self):
        return self.pesos if self.pesos is not None else np.ones(self.n)


def _espaciado_desde_burn_in(estado, eventos_borde, duracion):
    """FACTOR_ESPACIADO veces el tiempo medio entre absorciones de una partícula medido en el burn-in"""
    if eventos_borde > 0 and duracion > 0.0:
        return FACTOR_ESPACIADO * estado.k * duracion / eventos_borde
    _logger.warning("burn-in sin absorciones; el espaciado se toma de la cota K")
    return FACTOR_ESPACIADO * cota_K(estado.params.beta_max, estado.geom).valor


def construir_conjunto_estacionario(estado, rng, n_muestras, burn_in, espaciado, huella,
                                    guardar_estados=False, max_eventos=MAX_EVENTOS, observadores=None):
    """
    Una sola trayectoria; instantáneas exactamente en reloj0 + burn_in + j*espaciado.
    Con espaciado None se estima a partir de las absorciones del burn-in.
    """
    if n_muestras < 1:
        raise ErrorDominio(f"n_muestras debe ser >= 1, se recibió {n_muestras!r}")
    if burn_in < 0.0:
        raise ErrorDominio(f"burn_in debe ser >= 0, se recibió {burn_in!r}")
    if espaciado is not None and not espaciado > 0.0:
        raise ErrorDominio(f"el espaciado debe ser positivo, se recibió {espaciado!r}")

    simulador = Simulador(estado, rng, max_eventos=max_eventos, observadores=observadores)
    inicio = estado.reloj
    tiempos = np.empty(n_muestras)
    vuelos = np.empty(n_muestras)
    omegas = np.empty(n_muestras)
    coordenadas = np.empty((n_muestras, estado.k, 3))
    estados = [] if guardar_estados else None

    simulador.evolucionar_hasta(horizonte=inicio + burn_in, registrar=False)
    _logger.info("burn-in alcanzado en t=%.6g tras %d eventos", simulador.estado.reloj, simulador.numero_eventos)
    if espaciado is None:
        espaciado = _espaciado_desde_burn_in(estado, simulador.acumuladores['eventos_borde'], burn_in)
        _logger.info("espaciado estimado: %.6g", espaciado)

    for j in range(n_muestras):
        simulador.evolucionar_hasta(horizonte=inicio + burn_in + j * espaciado, registrar=False)
        actual = simulador.estado
        tiempos[j] = actual.reloj
        vuelos[j] = tiempo_hasta_primera_colision(actual).max()
        omegas[j] = actual.disco.omega
        coordenadas[j] = coordenadas_particulas(actual)
        if guardar_estados:
            estados.append(actual.copiar())

    _logger.info("ensamble de %d instantáneas, %d eventos", n_muestras, simulador.numero_eventos)
    return ConjuntoEstacionario(burn_in, espaciado, huella, tiempos, vuelos, omegas, coordenadas, estados)


# ---------------------------------------------------------------------------
# Cola B_T
# ---------------------------------------------------------------------------

def intervalo_wilson(conteos, n, z=Z_WILSON):
    """Intervalo de Wilson para proporciones binomiales; devuelve (inferior, superior)"""
    conteos = np.asarray(conteos, dtype=float)
    p = conteos / n
    z2 = z * z
    denominador = 1.0 + z2 / n
    centro = (p + z2 / (2.0 * n)) / denominador
    semiancho = z / denominador * np.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))
    return np.clip(centro - semiancho, 0.0, 1.0), np.clip(centro + semiancho, 0.0, 1.0)


@dataclass
class CurvaCola:
    """Probabilidades estimadas de B_T sobre una grilla creciente de T"""
    T_grid: np.ndarray
    p_hat: np.ndarray
    ci_inferior: np.ndarray
    ci_superior: np.ndarray
    n: int
    conteos: np.ndarray

    @property
    def semiancho(self):
        return 0.5 * (self.ci_superior - self.ci_inferior)

    @classmethod
    def desde_conteos(cls, T_grid, conteos, n):
        conteos = np.asarray(conteos)
        inferior, superior = intervalo_wilson(conteos, n)
        return cls(np.asarray(T_grid, dtype=float), conteos / n, inferior, superior, int(n), conteos)


def _validar_grilla(T_grid):
    T_grid = np.asarray(T_grid, dtype=float)
    if T_grid.ndim != 1 or len(T_grid) == 0:
        raise ErrorDominio("la grilla de T debe ser un vector no vacío")
    if np.any(T_grid <= 0.0) or np.any(np.diff(T_grid) <= 0.0):
        raise ErrorDominio("la grilla de T debe ser positiva y creciente")
    return T_grid


class AcumuladorCola:
    """Conteos de B_T fusionables entre réplicas"""

    def __init__(self, T_grid):
        self.T_grid = _validar_grilla(T_grid)
        self.conteos = np.zeros(len(self.T_grid), dtype=np.int64)
        self.n = 0

    def agregar(self, vuelo_libre_max):
        ordenados = np.sort(np.asarray(vuelo_libre_max, dtype=float))
        self.conteos += len(ordenados) - np.searchsorted(ordenados, self.T_grid, side="left")
        self.n += len(ordenados)

    def fusionar(self, otro):
        if not np.array_equal(self.T_grid, otro.T_grid):
            raise ErrorDominio("no se pueden fusionar colas con grillas distintas")
        self.conteos += otro.conteos
        self.n += otro.n
        return self

    def curva(self):
        if self.n == 0:
            raise ErrorDominio("ensamble vacío")
        return CurvaCola.desde_conteos(self.T_grid, self.conteos.copy(), self.n)


def cola_b_t(conjunto, T_grid):
    """Fracción de instantáneas en B_T para cada T, con intervalos de Wilson"""
    if conjunto.n == 0:
        raise ErrorDominio("ensamble vacío")
    acumulador = AcumuladorCola(T_grid)
    acumulador.agregar(conjunto.vuelo_libre_max)
    return acumulador.curva()


def cola_b_t_directa(estados, T_grid):
    """Mismo resultado que cola_b_t recalculando desde los estados, sin vectorizar"""
    T_grid = _validar_grilla(T_grid)
    if not estados:
        raise ErrorDominio("ensamble vacío")
    conteos = np.zeros(len(T_grid), dtype=np.int64)
    for estado in estados:
        maximo = tiempo_hasta_primera_colision(estado).max()
        for j, T in enumerate(T_grid):
            if maximo >= T:
                conteos[j] += 1
    return CurvaCola.desde_conteos(T_grid, conteos, len(estados))


class AjustePotencia(NamedTuple):
    exponente: float
    error: float
    prefactor: float
    T_min: float
    T_max: float
    puntos: int


def ajustar_ley_potencia(curva, conteo_minimo=0, puntos_minimos=5, inicio_cola=None, decadas=1.0):
    """
    Pendiente de log p_hat contra log T por mínimos cuadrados ponderados con
    p/semiancho, sólo sobre la cola. Son utilizables los puntos con p_hat > 0
    y conteo >= conteo_minimo; la ventana va desde inicio_cola (por defecto,
    `decadas` décadas antes del mayor T utilizable) hasta ese T.
    """
    utilizables = (curva.p_hat > 0.0) & (np.asarray(curva.conteos) >= conteo_minimo)
    if not utilizables.any():
        raise ErrorDatosInsuficientes("ningún punto con conteo suficiente")
    T_fin = float(curva.T_grid[utilizables].max())
    if inicio_cola is None:
        inicio_cola = T_fin / 10.0 ** decadas
    mascara = utilizables & (curva.T_grid >= inicio_cola * (1.0 - 1e-12))
    puntos = int(mascara.sum())
    if puntos < puntos_minimos:
        raise ErrorDatosInsuficientes(
            f"sólo {puntos} puntos utilizables en [{inicio_cola:.4g}, {T_fin:.4g}], se necesitan {puntos_minimos}")
    T = curva.T_grid[mascara]
    p = curva.p_hat[mascara]
    semiancho = curva.semiancho[mascara]
    pesos = p / semiancho if np.all(semiancho > 0.0) else np.ones(puntos)
    coeficientes, covarianza = np.polyfit(np.log(T), np.log(p), 1, w=pesos, cov=True)
    error = float(math.sqrt(max(covarianza[0, 0], 0.0)))
    return AjustePotencia(float(coeficientes[0]), error, float(math.exp(coeficientes[1])),
                          float(T[0]), float(T[-1]), puntos)


# ---------------------------------------------------------------------------
# Tasa de depósito P(vuelo > T)
# ---------------------------------------------------------------------------

class ResultadoDeposito(NamedTuple):
    analitico: float
    error_cuadratura: float
    montecarlo: Optional[float]
    error_montecarlo: Optional[float]
    rama_inferior: float
    rama_superior: float
    asintotico: float


def _deposito_analitico(beta, geom, tau):
    alpha = geom.alpha

    # tramo con disco: u = alpha sin(w) suaviza la raíz en u = alpha
    def con_disco(w):
        u = alpha * math.sin(w)
        largo = distancia_entrada_disco(geom, u)
        if largo is None:
            largo = geom.l
        return maxwell_cdf(beta, largo / tau) * alpha * math.cos(w)

    # tramo sin disco: u = sin(w) suaviza la raíz en u = 1
    def sin_disco(w):
        u = math.sin(w)
        if u >= 1.0:
            return 0.0
        return maxwell_cdf(beta, longitud_cuerda(geom, u) / tau) * math.cos(w)

    v1, e1 = integrar(con_disco, 0.0, 0.5 * math.pi)
    v2, e2 = integrar(sin_disco, math.asin(alpha), 0.5 * math.pi)
    return v1 + v2, e1 + e2


def _auditar_largos(geom, senos, largos, rng, tol=1e-9):
    """Compara los largos vectorizados con el trazador escalar desde puntos uniformes del borde derecho"""
    Rg = geom.radio_exterior
    angulos = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, len(senos))
    for angulo, seno, largo in zip(angulos, senos, largos):
        punto = (Rg * math.cos(angulo), Rg * math.sin(angulo))
        direccion = velocidad_emitida(punto, Rg, 1.0, seno)
        trazado = vuelo_hasta_colision(geom, punto, direccion, Mitad.DERECHA).distancia
        if abs(trazado - largo) > tol * Rg:
            raise ErrorInvarianteInterno(f"largo de vuelo {largo!r} vs trazado {trazado!r} para sin_phi={seno!r}")


def _deposito_montecarlo(beta, geom, tau, n, rng, bloque=10 ** 6, auditados=1000):
    """
    Largos de vuelo vectorizados por bloques; los primeros `auditados` se
    contrastan con el trazador. Si el rango de rapideces relevante es chico se
    muestrea s ~ U(0, 2l/tau) con peso f(s)*s_cap.
    """
    s_cap = 2.0 * geom.l / tau
    importancia = s_cap < 6.0 / math.sqrt(beta)
    suma = suma_cuadrados = 0.0
    restantes = n
    while restantes > 0:
        m = min(bloque, restantes)
        if importancia:
            rapideces = rng.uniform(0.0, s_cap, m)
            senos = rng.uniform(-1.0, 1.0, m)
        else:
            rapideces, senos = muestrear_emisiones(beta, rng, m)
        largos = largos_vuelo_emision(geom, senos)
        if restantes == n:
            _auditar_largos(geom, senos[:auditados], largos[:auditados], rng)
        aportes = (rapideces < largos / tau).astype(float)
        if importancia:
            aportes *= densidad_rapidez(beta, rapideces) * s_cap
        suma += float(aportes.sum())
        suma_cuadrados += float(aportes @ aportes)
        restantes -= m
    media = suma / n
    varianza = max(suma_cuadrados / n - media * media, 0.0) * n / max(n - 1, 1)
    return media, math.sqrt(varianza / n)


def tasa_deposito(beta, geom, T, delta=0.0, n_mc=0, rng=None):
    """
    P(vuelo de una emisión > T + delta) por cuadratura y, si n_mc > 0, por
    Monte Carlo. Agrega las dos ramas que fijan el orden T^-3 (la inferior es
    una cota, la superior sólo vale salvo constantes) y el término asintótico.
    """
    if not T > 0.0:
        raise ErrorDominio(f"T debe ser positivo, se recibió {T!r}")
    tau = T + delta
    analitico, error = _deposito_analitico(beta, geom, tau)
    montecarlo = error_mc = None
    if n_mc > 0:
        if rng is None:
            raise ErrorDominio("el modo Monte Carlo necesita un flujo aleatorio")
        montecarlo, error_mc = _deposito_montecarlo(beta, geom, tau, int(n_mc), rng)
    Rg, d = geom.radio_exterior, geom.d
    inferior = math.sqrt(1.0 - (d / (2.0 * Rg)) ** 2) * maxwell_cdf(beta, d / tau)
    superior = maxwell_cdf(beta, geom.l / T)
    asintotico = 4.0 / 3.0 * beta ** 1.5 / math.sqrt(math.pi) * d * d / tau ** 3
    return ResultadoDeposito(analitico, error, montecarlo, error_mc, inferior, superior, asintotico)


# ---------------------------------------------------------------------------
# Distancia de variación total
# ---------------------------------------------------------------------------

class MarginalTV(Enum):
    """Marginales soportados por distancia_tv_conjuntos"""
    OMEGA = "omega"
    VUELO_LIBRE = "vuelo_libre"
    PARTICULA = "particula"


def distancia_tv(a, b, bins=50, pesos_a=None, pesos_b=None):
    """
    1/2 * suma |p_a - p_b| sobre histogramas con bordes comunes. a y b son
    vectores o arreglos (n, dim); bins es la cantidad por dimensión o los bordes.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ErrorDominio("ensamble vacío")
    if np.isscalar(bins) and not bins > 0:
        raise ErrorDominio(f"la resolución debe ser positiva, se recibió {bins!r}")
    if a.ndim == 1:
        a = a[:, None]
        b = b[:, None]
        if not np.isscalar(bins):
            bins = [np.asarray(bins, dtype=float)]
    juntos = np.vstack([a, b])
    rango = [(float(lo), float(hi) if hi > lo else float(lo) + 1.0)
             for lo, hi in zip(juntos.min(axis=0), juntos.max(axis=0))]
    if not np.isscalar(bins):
        rango = None
    ha, _ = np.histogramdd(a, bins=bins, range=rango, weights=pesos_a)
    hb, _ = np.histogramdd(b, bins=bins, range=rango, weights=pesos_b)
    return float(0.5 * np.abs(ha / ha.sum() - hb / hb.sum()).sum())


def _marginal(conjunto, marginal):
    if marginal is MarginalTV.OMEGA:
        return conjunto.omegas, conjunto.pesos
    if marginal is MarginalTV.VUELO_LIBRE:
        return conjunto.vuelo_libre_max, conjunto.pesos
    k = conjunto.coordenadas.shape[1]
    pesos = None if conjunto.pesos is None else np.repeat(conjunto.pesos, k)
    return conjunto.coordenadas.reshape(-1, 3), pesos


def distancia_tv_conjuntos(conjunto_a, conjunto_b, marginal=MarginalTV.OMEGA, bins=50):
    """Cota inferior de la distancia TV entre dos ensambles sobre un marginal"""
    if conjunto_a.huella != conjunto_b.huella:
        raise ErrorDominio(f"huellas incompatibles: {conjunto_a.huella} != {conjunto_b.huella}")
    if conjunto_a.n == 0 or conjunto_b.n == 0:
        raise ErrorDominio("ensamble vacío")
    datos_a, pesos_a = _marginal(conjunto_a, marginal)
    datos_b, pesos_b = _marginal(conjunto_b, marginal)
    return distancia_tv(datos_a, datos_b, bins, pesos_a, pesos_b)


# ---------------------------------------------------------------------------
# Perturbación y mezcla
# ---------------------------------------------------------------------------

def perturbar_inicial(conjunto, c, T0):
    """Pesos 1 + c sobre B_T0 y un peso constante en el complemento, con masa total 1"""
    if not 0.0 <= c <= 1.0:
        raise ErrorDominio(f"c debe estar en [0, 1], se recibió {c!r}")
    if not T0 > 0.0:
        raise ErrorDominio(f"T0 debe ser positivo, se recibió {T0!r}")
    n = conjunto.n
    if c == 0.0:
        return dataclasses.replace(conjunto, pesos=np.ones(n))
    en_b = conjunto.vuelo_libre_max >= T0
    n_b = int(en_b.sum())
    if n_b == 0 or n_b == n:
        raise ErrorPerturbacionDegenerada(f"{n_b} de {n} instantáneas en B_T0 con T0={T0!r}")
    peso_complemento = (n - n_b * (1.0 + c)) / (n - n_b)
    if peso_complemento < 0.0:
        raise ErrorPerturbacionDegenerada(f"B_T0 tiene demasiada masa para c={c!r}")
    pesos = np.where(en_b, 1.0 + c, peso_complemento)
    return dataclasses.replace(conjunto, pesos=pesos)


class EvolucionPonderada(NamedTuple):
    tiempos: np.ndarray
    lambda_t: np.ndarray
    mu_t: np.ndarray
    vuelos: np.ndarray
    pesos: np.ndarray

    @property
    def r(self):
        return self.lambda_t - self.mu_t


def evolucionar_ponderado(conjunto, tiempos, T_estrella, semilla, replica=0, max_eventos=MAX_EVENTOS):
    """
    Evoluciona cada instantánea con su propio subflujo y mide, para cada t,
    la masa ponderada lambda_t(B_T*) y la no ponderada mu_t(B_T*) sobre las
    mismas trayectorias.
    """
    if conjunto.estados is None:
        raise ErrorDominio("el ensamble no guardó estados")
    tiempos = np.asarray(tiempos, dtype=float)
    if np.any(tiempos < 0.0) or np.any(np.diff(tiempos) < 0.0):
        raise ErrorDominio("los tiempos deben ser no negativos y crecientes")
    pesos = conjunto.pesos_o_unos()
    vuelos = np.zeros((conjunto.n, len(tiempos)))
    for i, estado in enumerate(conjunto.estados):
        simulador = Simulador(estado.copiar(), crear_flujo(semilla, replica, i), max_eventos=max_eventos)
        inicio = simulador.estado.reloj
        for j, t in enumerate(tiempos):
            simulador.evolucionar_hasta(horizonte=inicio + t, registrar=False)
            vuelos[i, j] = tiempo_hasta_primera_colision(simulador.estado).max()
    indicadores = (vuelos >= T_estrella).astype(float)
    lambda_t = pesos @ indicadores / pesos.sum()
    mu_t = indicadores.mean(axis=0)
    return EvolucionPonderada(tiempos, lambda_t, mu_t, vuelos, pesos)


class AjusteMezcla(NamedTuple):
    pendiente_loglog: float
    error_pendiente: float
    residuo_potencia: float
    residuo_exponencial: float
    convexa: bool
    puntos: int

    def aceptada(self, rango=(-3.5, -1.0)):
        return (rango[0] <= self.pendiente_loglog <= rango[1] and self.convexa
                and self.residuo_potencia < self.residuo_exponencial)


def serie_mezcla(tiempos, r):
    """Compara un ajuste de potencia con uno exponencial para r(t) > 0"""
    tiempos = np.asarray(tiempos, dtype=float)
    r = np.asarray(r, dtype=float)
    mascara = (r > 0.0) & (tiempos > 0.0)
    puntos = int(mascara.sum())
    if puntos < 4:
        raise ErrorDatosInsuficientes(f"sólo {puntos} puntos con r(t) > 0")
    t = tiempos[mascara]
    log_r = np.log(r[mascara])
    (pendiente, ordenada), cov = np.polyfit(np.log(t), log_r, 1, cov=True)
    residuo_potencia = float(np.sum((log_r - (pendiente * np.log(t) + ordenada)) ** 2))
    exponencial = np.polyfit(t, log_r, 1)
    residuo_exponencial = float(np.sum((log_r - np.polyval(exponencial, t)) ** 2))
    convexa = bool(np.polyfit(t, log_r, 2)[0] > 0.0)
    return AjusteMezcla(float(pendiente), float(math.sqrt(max(cov[0, 0], 0.0))),
                        residuo_potencia, residuo_exponencial, convexa, puntos)


# ---------------------------------------------------------------------------
# Flujo de calor
# ---------------------------------------------------------------------------

@dataclass
class TotalesReservorio:
    absorbida: float = 0.0
    emitida: float = 0.0
    eventos: int = 0
    suma_cuadrados: float = 0.0


class FlujoReservorio(NamedTuple):
    mitad: Mitad
    absorbida: float
    emitida: float
    tasa_neta: float
    error: float
    eventos: int


class AcumuladorFlujo:
    """
    Observador de eventos que suma la energía cinética absorbida (s_in^2/2) y
    emitida (s_out^2/2) por cada reservorio. También lleva el balance global
    de energía contra el estado.
    """

    def __init__(self, estado=None):
        self.totales: Dict[Mitad, TotalesReservorio] = {m: TotalesReservorio() for m in Mitad}
        self.reloj_inicial = None
        self.reloj_final = None
        self.energia_inicial = None
        if estado is not None:
            self.iniciar(estado)

    def iniciar(self, estado):
        self.reloj_inicial = estado.reloj
        self.reloj_final = estado.reloj
        self.energia_inicial = estado.energia()

    def registrar(self, registro):
        if self.reloj_inicial is None:
            self.reloj_inicial = registro.tiempo
        self.reloj_final = registro.tiempo
        if not registro.superficie.es_borde:
            return
        totales = self.totales[registro.mitad]
        absorbida = 0.5 * registro.s_pre ** 2
        emitida = 0.5 * registro.s_post ** 2
        totales.absorbida += absorbida
        totales.emitida += emitida
        totales.eventos += 1
        totales.suma_cuadrados += (absorbida - emitida) ** 2

    def __call__(self, estado, registro):
        self.registrar(registro)

    def fusionar(self, otro):
        """Suma los totales; los tiempos transcurridos se suman como trayectorias independientes"""
        for mitad in Mitad:
            a, b = self.totales[mitad], otro.totales[mitad]
            a.absorbida += b.absorbida
            a.emitida += b.emitida
            a.eventos += b.eventos
            a.suma_cuadrados += b.suma_cuadrados
        transcurrido = self.transcurrido() + otro.transcurrido()
        self.reloj_inicial = 0.0 if self.reloj_inicial is None else self.reloj_inicial
        self.reloj_final = self.reloj_inicial + transcurrido
        self.energia_inicial = None
        return self

    def transcurrido(self):
        if self.reloj_inicial is None:
            return 0.0
        return self.reloj_final - self.reloj_inicial

    def ganancia_neta(self):
        """Energía emitida menos absorbida por ambos reservorios"""
        return sum(t.emitida - t.absorbida for t in self.totales.values())

    def verificar_balance(self, estado, tol=1e-9):
        """La energía del sistema cambió exactamente lo que entregaron los reservorios"""
        if self.energia_inicial is None:
            raise ErrorDominio("el acumulador no registró la energía inicial")
        cambio = estado.energia() - self.energia_inicial
        escala = max(estado.energia(), self.energia_inicial,
                     sum(t.absorbida + t.emitida for t in self.totales.values()))
        if abs(cambio - self.ganancia_neta()) > tol * escala:
            raise ErrorInvarianteInterno(f"balance de energía: cambio {cambio!r} vs reservorios {self.ganancia_neta()!r}")

    def resumen(self):
        transcurrido = self.transcurrido()
        if not transcurrido > 0.0:
            raise ErrorDominio("el registro no abarca tiempo positivo")
        filas = []
        for mitad in Mitad:
            t = self.totales[mitad]
            neta = t.absorbida - t.emitida
            if t.eventos > 1:
                media = neta / t.eventos
                varianza = max(t.suma_cuadrados / t.eventos - media * media, 0.0)
                error = math.sqrt(varianza * t.eventos) / transcurrido
            else:
                error = math.inf
            filas.append(FlujoReservorio(mitad, t.absorbida, t.emitida, neta / transcurrido, error, t.eventos))
        return filas


def flujo_calor(registros, transcurrido=None):
    """Tasa neta de energía ganada por cada reservorio a partir de un registro de eventos"""
    acumulador = AcumuladorFlujo()
    for registro in registros:
        acumulador.registrar(registro)
    if transcurrido is not None:
        acumulador.reloj_inicial = 0.0
        acumulador.reloj_final = transcurrido
    return acumulador.resumen()
