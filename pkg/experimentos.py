"""
Cuerpos de los subcomandos: validate, simulate, steady, tails, mixing, flux y
bounds. Cada uno recibe una ConfigSimulacion validada, escribe sus archivos en
output_dir y devuelve el código de salida (0 éxito, 1 falla de aceptación).
"""
import logging
import math
import os
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np
from scipy import stats

from dinamica import cdf_renovacion_omega, muestrear_emisiones
from errores import ErrorConfiguracion, ErrorDatosInsuficientes, ErrorSimulacion
from eventos import escribir_registro_jsonl
from exportador import ExportadorExcel, escribir_csv, escribir_json
from generadores import crear_flujo
from montecarlo import (
    auditar_trayectoria,
    contar_violaciones_invariancia,
    fraccion_golpe_disco,
    media_vuelo_emision,
    medias_post_tau,
    medias_tau_delta,
    muestras_renovacion_omega,
    tiempo_golpe,
    verificar_geometria,
)
from observables import (
    AcumuladorCola,
    AcumuladorFlujo,
    MarginalTV,
    ajustar_ley_potencia,
    construir_conjunto_estacionario,
    distancia_tv,
    evolucionar_ponderado,
    perturbar_inicial,
    serie_mezcla,
)
from oraculos import cota_D, cota_D_prima, cota_golpe, cota_K, estimar_tau_C, maxwell_cdf, momentos_emision
from simulador import Simulador, estado_inicial
from visualizador import VisualizadorResultados

_logger = logging.getLogger(__name__)

EXPONENTE_COLA = -2.0
TOLERANCIA_EXPONENTE = 0.3


@dataclass
class Verificacion:
    nombre: str
    valor: float
    criterio: str
    aprobada: bool


def _ruta(config, nombre):
    return os.path.join(config.output_dir, nombre)


def _mapear_replicas(funcion, config):
    """Ejecuta funcion((config, j)) para cada réplica; el resultado queda en orden de réplica"""
    tareas = [(config, j) for j in range(config.replicas)]
    if config.processes > 1 and config.replicas > 1:
        with Pool(processes=min(config.processes, config.replicas)) as pool:
            return pool.map(funcion, tareas)
    return [funcion(tarea) for tarea in tareas]


def _estado_de(config, rng):
    return estado_inicial(config.geometria(), config.reservorios(), config.k_left, config.k_right, rng)


def _exportar_excel(ruta_excel, huella, hojas):
    if not ruta_excel:
        return
    exportador = ExportadorExcel(huella)
    for nombre, encabezados, filas in hojas:
        exportador.agregar_hoja(nombre, encabezados, filas)
    exportador.exportar(ruta_excel)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _umbral_ks(n, minimo):
    """Umbral del estadístico KS: el pedido o el valor crítico al 1% para n muestras"""
    return max(minimo, 1.63 / math.sqrt(n))


def validar(config, ruta_excel=None, visualizador=None):
    """Pruebas de muestreadores, geometría e invariantes a escala n_mc"""
    geom, params, cparams = config.geometria(), config.reservorios(), config.parametros_C()
    n = max(config.n_mc, 100)
    rng = crear_flujo(config.seed, 0)
    beta = params.beta_izquierda
    verificaciones = []

    s, senos = muestrear_emisiones(beta, rng, n)
    ks_seno = stats.kstest(senos, stats.uniform(loc=-1.0, scale=2.0).cdf).statistic
    ks_s = stats.kstest(s, lambda x: maxwell_cdf(beta, np.clip(x, 0.0, None))).statistic
    umbral = _umbral_ks(n, 0.01)
    verificaciones.append(Verificacion("KS sin_phi vs U(-1,1)", ks_seno, f"< {umbral:.4g}", ks_seno < umbral))
    verificaciones.append(Verificacion("KS s vs Maxwell", ks_s, f"< {umbral:.4g}", ks_s < umbral))
    media, _ = momentos_emision(beta)
    error = s.std(ddof=1) / math.sqrt(n)
    verificaciones.append(Verificacion("E[s]", s.mean(), f"{media:.6f} ± 3·{error:.2g}", abs(s.mean() - media) <= 3 * error))

    golpe = fraccion_golpe_disco(geom, n, rng, beta)
    verificaciones.append(Verificacion("P(golpe disco)", golpe.media, f"{geom.alpha:.6f} ± 3·{golpe.error:.2g}",
                                       abs(golpe.media - geom.alpha) <= 3 * golpe.error))

    geometria = verificar_geometria(geom, max(n // 100, 10), rng)
    cota_marcha = 1e-5 * geom.radio_exterior
    verificaciones.append(Verificacion("trazado vs marcha", geometria.discrepancia_max, f"<= {cota_marcha:.2g}",
                                       geometria.discrepancia_max <= cota_marcha))
    cota_espejo = 1e-9 * geom.radio_exterior
    verificaciones.append(Verificacion("simetría de despliegue", geometria.discrepancia_espejo,
                                       f"<= {cota_espejo:.2g}", geometria.discrepancia_espejo <= cota_espejo))

    try:
        auditoria = auditar_trayectoria(_estado_de(config, rng), rng, n)
        verificaciones.append(Verificacion("intercambio y balance de energía", auditoria.eventos_disco,
                                           "sin violaciones", True))
    except ErrorSimulacion as exc:
        _logger.error("auditoría de trayectoria: %s", exc)
        verificaciones.append(Verificacion("intercambio y balance de energía", 0, str(exc), False))

    omegas = muestras_renovacion_omega(_estado_de(config, rng), rng, max(n // 10, 50))
    ks_omega = stats.kstest(omegas, lambda x: cdf_renovacion_omega(beta, x)).statistic if config.beta_left == config.beta_right else None
    if ks_omega is not None:
        umbral = _umbral_ks(len(omegas), 0.02)
        verificaciones.append(Verificacion("KS omega renovado", ks_omega, f"< {umbral:.4g}", ks_omega < umbral))

    violaciones, revisados = contar_violaciones_invariancia(geom, params, cparams, config.k_left, config.k_right,
                                                            max(n // 100, 10), rng)
    verificaciones.append(Verificacion(f"invariancia de C ({revisados} eventos)", violaciones, "== 0", violaciones == 0))

    (visualizador or VisualizadorResultados()).mostrar_verificaciones(verificaciones)
    filas = [(v.nombre, float(v.valor), v.criterio, "OK" if v.aprobada else "FALLA") for v in verificaciones]
    encabezados = ("check", "value", "criterion", "result")
    escribir_csv(_ruta(config, "validacion.csv"), encabezados, filas, config.huella())
    _exportar_excel(ruta_excel, config.huella(), [("Validación", encabezados, filas)])
    return 0 if all(v.aprobada for v in verificaciones) else 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def simular(config, ruta_excel=None, visualizador=None):
    """Una trayectoria hasta el horizonte; vuelca el registro de eventos"""
    rng = crear_flujo(config.seed, 0)
    simulador = Simulador(_estado_de(config, rng), rng, max_eventos=config.max_events,
                          verificar_invariantes=config.check_invariants)
    resultado = simulador.evolucionar_hasta(horizonte=config.horizon)
    escribir_registro_jsonl(resultado.registros, _ruta(config, "eventos.jsonl"), config.huella())

    visualizador = visualizador or VisualizadorResultados()
    visualizador.mostrar_eventos(resultado.registros)
    visualizador.mostrar_conteos(simulador.acumuladores, simulador.estado.reloj)
    if ruta_excel:
        filas = [(r.tiempo, r.indice, r.superficie.value, r.s_pre, r.s_post, r.sin_phi_pre, r.sin_phi_post,
                  r.omega_pre, r.omega_post, r.mitad.value) for r in resultado.registros]
        _exportar_excel(ruta_excel, config.huella(), [("Eventos", ("t", "i", "surface", "s_pre", "s_post",
                                                                   "sin_phi_pre", "sin_phi_post", "omega_pre",
                                                                   "omega_post", "half"), filas)])
    return 0


# ---------------------------------------------------------------------------
# steady / tails / flux
# ---------------------------------------------------------------------------

def _ensamble_replica(config, replica, guardar_estados=False, observadores_de=None):
    rng = crear_flujo(config.seed, replica)
    estado = _estado_de(config, rng)
    observadores = observadores_de(estado) if observadores_de else None
    conjunto = construir_conjunto_estacionario(
        estado, rng, config.n_samples, config.burn_in, config.spacing, config.huella(),
        guardar_estados=guardar_estados, max_eventos=config.max_events, observadores=observadores,
    )
    _logger.info("réplica %d terminada", replica)
    return conjunto, observadores


def _tarea_ensamble(argumentos):
    config, replica = argumentos
    conjunto, _ = _ensamble_replica(config, replica)
    return conjunto


def estacionario(config, ruta_excel=None, visualizador=None):
    """Construye los ensambles de todas las réplicas y los serializa"""
    conjuntos = _mapear_replicas(_tarea_ensamble, config)
    k = config.k_left + config.k_right
    encabezados = ["replica", "t", "omega", "vuelo_libre_max"]
    for i in range(k):
        encabezados += [f"s_{i}", f"sin_phi_{i}", f"xi_{i}"]
    filas = []
    for replica, conjunto in enumerate(conjuntos):
        for j in range(conjunto.n):
            fila = [replica, conjunto.tiempos[j], conjunto.omegas[j], conjunto.vuelo_libre_max[j]]
            fila += [float(x) for x in conjunto.coordenadas[j].ravel()]
            filas.append(fila)
    espaciados = ",".join(repr(conjunto.espaciado) for conjunto in conjuntos)
    comentarios = [f"burn_in={config.burn_in!r}", f"spacing={espaciados}"]
    escribir_csv(_ruta(config, "ensamble.csv"), encabezados, filas, config.huella(), comentarios)
    _exportar_excel(ruta_excel, config.huella(), [("Ensamble", encabezados, filas)])
    _logger.info("%d instantáneas en %d réplicas", len(filas), len(conjuntos))
    return 0


def _tarea_cola(argumentos):
    config, _ = argumentos
    conjunto = _tarea_ensamble(argumentos)
    acumulador = AcumuladorCola(config.T_grid)
    acumulador.agregar(conjunto.vuelo_libre_max)
    return acumulador


def colas(config, ruta_excel=None, visualizador=None):
    """Curva B_T fusionada en orden de réplica y ajuste del exponente"""
    acumuladores = _mapear_replicas(_tarea_cola, config)
    total = acumuladores[0]
    for otro in acumuladores[1:]:
        total.fusionar(otro)
    curva = total.curva()

    ajuste = None
    try:
        ajuste = ajustar_ley_potencia(curva, conteo_minimo=config.fit_min_count, inicio_cola=config.tail_start)
    except ErrorDatosInsuficientes as exc:
        _logger.warning("sin ajuste de exponente: %s", exc)

    (visualizador or VisualizadorResultados()).mostrar_cola(curva, ajuste)
    encabezados = ("T", "p_hat", "ci_lo", "ci_hi", "n")
    filas = [(float(T), float(p), float(lo), float(hi), curva.n)
             for T, p, lo, hi in zip(curva.T_grid, curva.p_hat, curva.ci_inferior, curva.ci_superior)]
    comentarios = []
    if ajuste is not None:
        comentarios.append(f"exponent={ajuste.exponente!r} stderr={ajuste.error!r} "
                           f"window=[{ajuste.T_min!r},{ajuste.T_max!r}] points={ajuste.puntos}")
    escribir_csv(_ruta(config, "cola.csv"), encabezados, filas, config.huella(), comentarios)
    _exportar_excel(ruta_excel, config.huella(), [("Cola B_T", encabezados, filas)])
    if ajuste is None:
        return 1
    return 0 if abs(ajuste.exponente - EXPONENTE_COLA) <= TOLERANCIA_EXPONENTE else 1


def _tarea_flujo(argumentos):
    config, replica = argumentos
    rng = crear_flujo(config.seed, replica)
    estado = _estado_de(config, rng)
    acumulador = AcumuladorFlujo(estado)
    simulador = Simulador(estado, rng, max_eventos=config.max_events,
                          verificar_invariantes=config.check_invariants, observadores=[acumulador])
    simulador.evolucionar_hasta(horizonte=estado.reloj + config.horizon, registrar=False)
    acumulador.reloj_final = simulador.estado.reloj
    acumulador.verificar_balance(simulador.estado)
    return acumulador


def flujo(config, ruta_excel=None, visualizador=None):
    """Flujo neto de energía por reservorio sumando todas las réplicas"""
    acumuladores = _mapear_replicas(_tarea_flujo, config)
    total = acumuladores[0]
    for otro in acumuladores[1:]:
        total.fusionar(otro)
    resumen = total.resumen()
    (visualizador or VisualizadorResultados()).mostrar_flujo(resumen)
    encabezados = ("reservoir", "absorbed", "emitted", "net_rate", "events")
    filas = [(f.mitad.value, f.absorbida, f.emitida, f.tasa_neta, f.eventos) for f in resumen]
    comentarios = [f"elapsed={total.transcurrido()!r}"] + [f"stderr_{f.mitad.value}={f.error!r}" for f in resumen]
    escribir_csv(_ruta(config, "flujo.csv"), encabezados, filas, config.huella(), comentarios)
    _exportar_excel(ruta_excel, config.huella(), [("Flujo", encabezados, filas)])
    return 0


# ---------------------------------------------------------------------------
# mixing
# ---------------------------------------------------------------------------

PUNTOS_MEZCLA = 8


def _grilla_mezcla(config, T_estrella):
    """
    Tiempos de observación de r(t): los de t_grid, ninguno menor que T*, o
    PUNTOS_MEZCLA puntos geométricos entre T* y 10 T*. Antes de T* las
    instantáneas de B_T0 siguen en su primer vuelo.
    """
    if config.t_grid is None:
        return tuple(float(t) for t in np.geomspace(T_estrella, 10.0 * T_estrella, PUNTOS_MEZCLA))
    if config.t_grid[0] < T_estrella:
        raise ErrorConfiguracion("t_grid", f"los tiempos deben ser >= T*={T_estrella!r}, "
                                           f"el primero es {config.t_grid[0]!r}")
    return config.t_grid


def mezcla(config, ruta_excel=None, visualizador=None):
    """
    Perturba el ensamble estacionario sobre B_T0, lo evoluciona y compara la
    forma de r(t) = lambda_t(B_T*) - mu_t(B_T*) con una ley de potencia y una exponencial.
    """
    conjunto, _ = _ensamble_replica(config, 0, guardar_estados=True)
    T0 = config.T0 if config.T0 is not None else float(np.quantile(conjunto.vuelo_libre_max, 0.99))
    T_estrella = config.T_star if config.T_star is not None else T0
    tiempos = _grilla_mezcla(config, T_estrella)
    _logger.info("T0=%.6g, T*=%.6g, t en [%.6g, %.6g]", T0, T_estrella, tiempos[0], tiempos[-1])
    perturbado = perturbar_inicial(conjunto, config.c, T0)
    evolucion = evolucionar_ponderado(perturbado, tiempos, T_estrella, config.seed, replica=1,
                                      max_eventos=config.max_events)

    ajuste = None
    try:
        ajuste = serie_mezcla(evolucion.tiempos, evolucion.r)
    except ErrorDatosInsuficientes as exc:
        _logger.warning("sin ajuste de mezcla: %s", exc)
    (visualizador or VisualizadorResultados()).mostrar_mezcla(evolucion, ajuste)

    filas_tv = []
    for j, t in enumerate(evolucion.tiempos):
        tv = distancia_tv(evolucion.vuelos[:, j], evolucion.vuelos[:, j], 50, pesos_a=evolucion.pesos)
        filas_tv.append((float(t), tv, MarginalTV.VUELO_LIBRE.value))
    filas_r = [(float(t), float(l), float(m), float(l - m))
               for t, l, m in zip(evolucion.tiempos, evolucion.lambda_t, evolucion.mu_t)]
    comentarios = [f"c={config.c!r} T0={T0!r} T_star={T_estrella!r}"]
    if ajuste is not None:
        comentarios.append(f"slope={ajuste.pendiente_loglog!r} power_residual={ajuste.residuo_potencia!r} "
                           f"exp_residual={ajuste.residuo_exponencial!r} convex={ajuste.convexa}")
    escribir_csv(_ruta(config, "mezcla.csv"), ("t", "tv", "marginal"), filas_tv, config.huella(), comentarios)
    escribir_csv(_ruta(config, "serie_mezcla.csv"), ("t", "lambda", "mu", "r"), filas_r, config.huella(), comentarios)
    _exportar_excel(ruta_excel, config.huella(), [("TV", ("t", "tv", "marginal"), filas_tv),
                                                  ("r(t)", ("t", "lambda", "mu", "r"), filas_r)])
    return 0 if ajuste is not None and ajuste.aceptada() else 1


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def cotas(config, ruta_excel=None, visualizador=None):
    """Informes K, K/alpha, D, D' en JSON y, con n_mc > 0, sus estimaciones Monte Carlo"""
    geom, params, cparams = config.geometria(), config.reservorios(), config.parametros_C()
    betas = (params.beta_izquierda, params.beta_derecha)
    informe_K = cota_K(params.beta_max, geom)
    informe_golpe = cota_golpe(informe_K, geom)
    informe_D = cota_D(params.beta_min, betas, geom)
    informe_D_prima = cota_D_prima(cparams, params.beta_min, geom, informe_D)
    informes = [informe_K, informe_golpe, informe_D, informe_D_prima]
    comparaciones = [(informe, None) for informe in informes]

    if config.n_mc > 0:
        rng = crear_flujo(config.seed, 0)
        n = config.n_mc
        n_tau = max(n // 100, 10)
        vuelo = media_vuelo_emision(params.beta_max, geom, n, rng)
        golpe = tiempo_golpe(params.beta_max, geom, n, rng)
        regeneracion = medias_post_tau(_estado_de(config, rng), rng, cparams, n_tau, config.max_events)
        tau_delta = medias_tau_delta(geom, params, cparams, config.k_left, config.k_right,
                                     config.delta_efectivo(), n_tau, rng, config.max_events)
        comparaciones = [(informe_K, vuelo), (informe_golpe, golpe.tiempo),
                         (informe_D, regeneracion.tau), (informe_D_prima, tau_delta)]
        _logger.info("rondas hasta golpear el disco: %.4f ± %.2g (1/alpha = %.4f)",
                     golpe.rondas.media, golpe.rondas.error, 1.0 / geom.alpha)
        if regeneracion.gamma > 0.0:
            informes.append(estimar_tau_C(informe_D, informe_D_prima, regeneracion.gamma))
        else:
            _logger.warning("ninguna parada cayó en C; no se estima tau_C")

    (visualizador or VisualizadorResultados()).mostrar_cotas(comparaciones)
    escribir_json(_ruta(config, "cotas.json"), informes, config.huella())
    filas = [(i.nombre, i.valor, i.tol, e.media if e else "", e.error if e else "") for i, e in comparaciones]
    _exportar_excel(ruta_excel, config.huella(), [("Cotas", ("name", "value", "tol", "mc_mean", "mc_stderr"), filas)])
    dominan = all(e is None or i.valor >= e.cota_superior() for i, e in comparaciones)
    return 0 if dominan else 1


SUBCOMANDOS = {
    "validate": validar,
    "simulate": simular,
    "steady": estacionario,
    "tails": colas,
    "mixing": mezcla,
    "flux": flujo,
    "bounds": cotas,
}
