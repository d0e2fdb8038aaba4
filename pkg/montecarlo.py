"""
Estimadores Monte Carlo emparejados con los oráculos y con los invariantes
del motor (auditorías de trayectoria, invariancia de C, ley de renovación).
"""
import logging
import math
from typing import NamedTuple

import numpy as np

from dinamica import colisionar_con_disco, muestrear_emision, muestrear_omega_renovado, velocidad_emitida
from errores import ErrorInvarianteInterno
from geometria import Mitad, Superficie, trazar_rayo, vuelo_hasta_colision
from observables import AcumuladorFlujo
from regeneracion import en_C, muestrear_sustituto_C, recorrer_hasta_tau
from simulador import MAX_EVENTOS, Simulador

_logger = logging.getLogger(__name__)


class EstimacionMC(NamedTuple):
    media: float
    error: float
    n: int

    @classmethod
    def desde_muestras(cls, muestras):
        muestras = np.asarray(muestras, dtype=float)
        n = len(muestras)
        error = float(muestras.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
        return cls(float(muestras.mean()), error, n)

    def cota_superior(self, sigmas=3.0):
        return self.media + sigmas * self.error


def _punto_borde(geom, rng):
    angulo = rng.uniform(-0.5 * math.pi, 0.5 * math.pi)
    Rg = geom.radio_exterior
    return (Rg * math.cos(angulo), Rg * math.sin(angulo))


def _ronda(geom, punto, s, sin_phi, omega):
    """
    Una emisión desde el borde hasta la siguiente absorción.
    Devuelve (duración, golpeó_disco, punto de absorción, omega final).
    """
    Rg = geom.radio_exterior
    direccion = velocidad_emitida(punto, Rg, 1.0, sin_phi)
    vuelo = vuelo_hasta_colision(geom, punto, direccion, Mitad.DERECHA)
    if vuelo.impacto.superficie.es_borde:
        return vuelo.distancia / s, False, vuelo.impacto.punto, omega
    velocidad = (s * vuelo.direccion[0], s * vuelo.direccion[1])
    nueva, omega = colisionar_con_disco(vuelo.impacto.punto, velocidad, omega, geom.R)
    s_salida = math.hypot(nueva[0], nueva[1])
    regreso = vuelo_hasta_colision(geom, vuelo.impacto.punto, (nueva[0] / s_salida, nueva[1] / s_salida), Mitad.DERECHA)
    if not regreso.impacto.superficie.es_borde:
        raise ErrorInvarianteInterno("dos colisiones con el disco sin pasar por el borde")
    return vuelo.distancia / s + regreso.distancia / s_salida, True, regreso.impacto.punto, omega


def media_vuelo_emision(beta, geom, n, rng):
    """E[tiempo de una emisión hasta su absorción], con omega de la ley de renovación (par de K)"""
    duraciones = np.empty(n)
    for j in range(n):
        s, sin_phi = muestrear_emision(beta, rng)
        duraciones[j], _, _, _ = _ronda(geom, _punto_borde(geom, rng), s, sin_phi, muestrear_omega_renovado(beta, rng))
    return EstimacionMC.desde_muestras(duraciones)


class EstimacionGolpe(NamedTuple):
    tiempo: EstimacionMC
    rondas: EstimacionMC


def tiempo_golpe(beta, geom, n, rng):
    """
    Tiempo hasta que una emisión golpea el disco y vuelve al borde, reemitiendo
    en cada absorción (par de K/alpha), y cantidad de emisiones usadas (media 1/alpha).
    """
    tiempos = np.empty(n)
    rondas = np.empty(n)
    for j in range(n):
        punto = _punto_borde(geom, rng)
        omega = muestrear_omega_renovado(beta, rng)
        total, cuenta, golpeo = 0.0, 0, False
        while not golpeo:
            s, sin_phi = muestrear_emision(beta, rng)
            duracion, golpeo, punto, omega = _ronda(geom, punto, s, sin_phi, omega)
            total += duracion
            cuenta += 1
        tiempos[j] = total
        rondas[j] = cuenta
    return EstimacionGolpe(EstimacionMC.desde_muestras(tiempos), EstimacionMC.desde_muestras(rondas))


def fraccion_golpe_disco(geom, n, rng, beta=1.0):
    """Fracción de emisiones cuyo primer vuelo termina en el disco (par de alpha)"""
    golpes = 0
    Rg = geom.radio_exterior
    for _ in range(n):
        _, sin_phi = muestrear_emision(beta, rng)
        punto = _punto_borde(geom, rng)
        vuelo = vuelo_hasta_colision(geom, punto, velocidad_emitida(punto, Rg, 1.0, sin_phi), Mitad.DERECHA)
        golpes += vuelo.impacto.superficie is Superficie.DISCO
    p = golpes / n
    return EstimacionMC(p, math.sqrt(p * (1.0 - p) / n), n)


class EstimacionRegeneracion(NamedTuple):
    tau: EstimacionMC
    gamma: float


def medias_post_tau(estado, rng, cparams, n, max_eventos=MAX_EVENTOS):
    """
    Encadena n+1 regeneraciones y descarta la primera: cada tau medido parte
    de un estado en tau (par de D). gamma es la fracción de paradas que caen en C.
    """
    estado = recorrer_hasta_tau(estado, rng, max_eventos).estado
    duraciones = np.empty(n)
    en_conjunto = 0
    for j in range(n):
        resultado = recorrer_hasta_tau(estado, rng, max_eventos)
        estado = resultado.estado
        duraciones[j] = resultado.duracion
        en_conjunto += en_C(estado, cparams)
    return EstimacionRegeneracion(EstimacionMC.desde_muestras(duraciones), en_conjunto / n)


def medias_tau_delta(geom, params, cparams, k_izquierda, k_derecha, delta, n, rng,
                     max_eventos=MAX_EVENTOS, incluir_pre_disco=False):
    """tau(delta) = delta + tau desde el estado en delta, sobre arranques en C (par de D')"""
    duraciones = np.empty(n)
    for j in range(n):
        estado = muestrear_sustituto_C(geom, params, cparams, k_izquierda, k_derecha, rng, incluir_pre_disco)
        simulador = Simulador(estado, rng, max_eventos=max_eventos)
        simulador.evolucionar_hasta(horizonte=estado.reloj + delta, registrar=False)
        duraciones[j] = delta + recorrer_hasta_tau(simulador.estado, rng, max_eventos).duracion
    return EstimacionMC.desde_muestras(duraciones)


def contar_violaciones_invariancia(geom, params, cparams, k_izquierda, k_derecha, n, rng,
                                   incluir_pre_disco=True, max_eventos=MAX_EVENTOS):
    """
    Desde n arranques en C, revisa en_C en cada evento hasta la primera
    colisión de alguna partícula con el borde. Devuelve (violaciones, eventos revisados).
    """
    violaciones = 0
    revisados = 0
    for _ in range(n):
        estado = muestrear_sustituto_C(geom, params, cparams, k_izquierda, k_derecha, rng, incluir_pre_disco)
        simulador = Simulador(estado, rng, max_eventos=max_eventos)
        while True:
            registro = simulador.paso()
            if registro.superficie.es_borde:
                break
            revisados += 1
            if not en_C(simulador.estado, cparams):
                violaciones += 1
                _logger.warning("C dejó de valer en t=%.6g tras %r", registro.tiempo, registro)
                break
    return violaciones, revisados


def muestras_renovacion_omega(estado, rng, n, max_eventos=MAX_EVENTOS):
    """omega inmediatamente después del primer choque con el disco de cada partícula recién emitida"""
    frescas = [False] * estado.k
    muestras = []

    def observar(_, registro):
        i = registro.indice
        if registro.superficie.es_borde:
            frescas[i] = True
        elif registro.superficie is Superficie.DISCO:
            if frescas[i]:
                muestras.append(registro.omega_post)
            frescas[i] = False
        return len(muestras) >= n

    Simulador(estado, rng, max_eventos=max_eventos).evolucionar_hasta(predicado=observar, registrar=False)
    return np.array(muestras)


class Auditoria(NamedTuple):
    eventos: int
    eventos_disco: int
    max_disco_entre_bordes: int


def auditar_trayectoria(estado, rng, n_eventos):
    """
    Corre n_eventos con verificación de invariantes (intercambio, posiciones,
    conteos) y cierra el balance de energía. Verifica además que ninguna
    partícula choque dos veces con el disco entre dos absorciones.
    """
    flujo = AcumuladorFlujo(estado)
    simulador = Simulador(estado, rng, max_eventos=n_eventos, verificar_invariantes=True, observadores=[flujo])
    discos_desde_borde = [0] * estado.k
    maximo = 0
    for _ in range(n_eventos):
        registro = simulador.paso()
        i = registro.indice
        if registro.superficie.es_borde:
            discos_desde_borde[i] = 0
        elif registro.superficie is Superficie.DISCO:
            discos_desde_borde[i] += 1
            maximo = max(maximo, discos_desde_borde[i])
            if discos_desde_borde[i] > 1:
                raise ErrorInvarianteInterno(f"partícula {i} chocó dos veces con el disco sin pasar por el borde")
    flujo.verificar_balance(simulador.estado)
    return Auditoria(simulador.numero_eventos, simulador.acumuladores['eventos_disco'], maximo)


class ResultadoGeometria(NamedTuple):
    discrepancia_max: float
    discrepancia_espejo: float
    n: int


def _dentro(geom, mitad, x, y):
    rho2 = x * x + y * y
    lado = x >= 0.0 if mitad is Mitad.DERECHA else x <= 0.0
    return (rho2 >= geom.R ** 2) & (rho2 <= geom.radio_exterior ** 2) & lado


def distancia_por_marcha(geom, origen, direccion, mitad, paso_relativo=1e-3, iteraciones=60):
    """Distancia hasta salir del semianillo por pasos fijos y bisección final"""
    Rg = geom.radio_exterior
    paso = paso_relativo * Rg
    t = np.arange(1, int(4.0 * Rg / paso) + 2) * paso
    fuera = ~_dentro(geom, mitad, origen[0] + t * direccion[0], origen[1] + t * direccion[1])
    j = int(np.argmax(fuera))
    bajo, alto = (t[j - 1] if j > 0 else 0.0), t[j]
    for _ in range(iteraciones):
        medio = 0.5 * (bajo + alto)
        if _dentro(geom, mitad, origen[0] + medio * direccion[0], origen[1] + medio * direccion[1]):
            bajo = medio
        else:
            alto = medio
    return 0.5 * (bajo + alto)


def punto_interior(geom, mitad, rng):
    """Punto uniforme del semianillo"""
    rho = math.sqrt(rng.uniform(geom.R ** 2, geom.radio_exterior ** 2))
    centro = math.pi if mitad is Mitad.IZQUIERDA else 0.0
    angulo = centro + rng.uniform(-0.5 * math.pi, 0.5 * math.pi)
    return (rho * math.cos(angulo), rho * math.sin(angulo))


def verificar_geometria(geom, n, rng):
    """
    Compara trazar_rayo con la marcha sobre n rayos aleatorios, y la
    distancia de cada rayo con la de su reflejo en la otra mitad.
    """
    discrepancia = 0.0
    espejo = 0.0
    for _ in range(n):
        origen = punto_interior(geom, Mitad.DERECHA, rng)
        angulo = rng.uniform(0.0, 2.0 * math.pi)
        direccion = (math.cos(angulo), math.sin(angulo))
        exacta = trazar_rayo(geom, origen, direccion, Mitad.DERECHA).distancia
        marcha = distancia_por_marcha(geom, origen, direccion, Mitad.DERECHA)
        discrepancia = max(discrepancia, abs(exacta - marcha))
        reflejada = vuelo_hasta_colision(geom, (-origen[0], origen[1]), (-direccion[0], direccion[1]), Mitad.IZQUIERDA)
        directa = vuelo_hasta_colision(geom, origen, direccion, Mitad.DERECHA)
        espejo = max(espejo, abs(reflejada.distancia - directa.distancia))
    return ResultadoGeometria(discrepancia, espejo, n)
