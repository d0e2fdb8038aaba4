"""
Configuración de parámetros de la simulación del billar abierto.

Archivo plano clave=valor (líneas vacías y '#' ignoradas); las banderas de la
línea de comandos tienen prioridad sobre el archivo y éste sobre los valores
por defecto. Los parámetros en None se derivan de los demás.
"""
import hashlib
import logging
import math
import os

from entidades import ParametrosReservorios
from errores import ErrorConfiguracion, ErrorSimulacion
from eventos import formatear_real
from geometria import ConfigGeometria
from regeneracion import ParametrosC

_logger = logging.getLogger(__name__)

VARIABLE_ENTORNO = "BILLAR_CONFIG"
CLAVES_REQUERIDAS = ("R", "d", "beta_left", "beta_right", "k_left", "k_right", "seed")
# No cambian los resultados, quedan fuera de la huella
CLAVES_SIN_HUELLA = ("processes", "output_dir")


def _a_bool(texto):
    valor = str(texto).strip().lower()
    if valor in ("1", "true", "si", "sí", "yes"):
        return True
    if valor in ("0", "false", "no"):
        return False
    raise ValueError(f"no es booleano: {texto!r}")


def _a_lista(texto):
    if isinstance(texto, (list, tuple)):
        return tuple(float(x) for x in texto)
    return tuple(float(x) for x in str(texto).split(",") if x.strip())


def _a_entero(texto):
    if isinstance(texto, float) and texto.is_integer():
        return int(texto)
    texto = str(texto).strip()
    try:
        return int(texto)
    except ValueError:
        real = float(texto)
        if not real.is_integer():
            raise
        return int(real)


# clave -> conversor
ESQUEMA = {
    "R": float,
    "d": float,
    "beta_left": float,
    "beta_right": float,
    "k_left": _a_entero,
    "k_right": _a_entero,
    "seed": _a_entero,
    "s_min": float,
    "s_max": float,
    "epsilon": float,
    "delta": float,
    "n_samples": _a_entero,
    "burn_in": float,
    "spacing": float,
    "T_grid": _a_lista,
    "horizon": float,
    "replicas": _a_entero,
    "processes": _a_entero,
    "max_events": _a_entero,
    "n_mc": _a_entero,
    "c": float,
    "T0": float,
    "T_star": float,
    "t_grid": _a_lista,
    "fit_min_count": _a_entero,
    "tail_start": float,
    "check_invariants": _a_bool,
    "output_dir": str,
}


def _grilla_geometrica(inicio, fin, puntos):
    razon = (fin / inicio) ** (1.0 / (puntos - 1))
    return tuple(inicio * razon ** j for j in range(puntos))


class ConfigSimulacion:
    # Geometría
    R = 1.0
    d = 1.0

    # Reservorios y partículas
    beta_left = 1.0
    beta_right = 1.0
    k_left = 1
    k_right = 1

    # Semilla para reproducibilidad (réplica j usa el flujo (seed, j))
    seed = 42

    # Conjunto C (None: s_min = 0.2/sqrt(beta_max), s_max = 3/sqrt(beta_min))
    s_min = None
    s_max = None
    epsilon = 0.1
    delta = None  # 0.9 d / (s_max sqrt((alpha^2 - eps + 2)/(alpha^2 + 1)))

    # Ensambles estacionarios
    n_samples = 2000
    burn_in = 100.0
    spacing = None  # 5 veces el tiempo medio entre absorciones medido en el burn-in
    T_grid = _grilla_geometrica(1.0, 100.0, 21)
    fit_min_count = 50
    tail_start = None  # una década antes del mayor T con conteo >= fit_min_count

    # Trayectorias
    horizon = 100.0
    replicas = 1
    processes = 1
    max_events = 10 ** 9
    check_invariants = False

    # Monte Carlo de validación y cotas
    n_mc = 10000

    # Mezcla
    c = 0.5
    T0 = None  # cuantil 0.99 del vuelo libre máximo del ensamble
    T_star = None  # igual a T0
    t_grid = None  # 8 puntos geométricos entre T_star y 10 T_star

    output_dir = "resultados"

    def __init__(self, **valores):
        for clave, valor in valores.items():
            self.establecer(clave, valor)

    def establecer(self, clave, valor):
        """Asigna una clave convirtiendo desde texto; rechaza claves desconocidas"""
        if clave not in ESQUEMA:
            raise ErrorConfiguracion(clave, "clave desconocida")
        if valor is None or (isinstance(valor, str) and valor.strip().lower() in ("", "auto", "none")):
            setattr(self, clave, None)
            return
        try:
            setattr(self, clave, ESQUEMA[clave](valor))
        except (TypeError, ValueError) as exc:
            raise ErrorConfiguracion(clave, f"valor inválido {valor!r} ({exc})") from exc

    def validar(self):
        """Restricciones de cada parámetro; ErrorConfiguracion con la clave culpable"""
        for clave in CLAVES_REQUERIDAS:
            if getattr(self, clave) is None:
                raise ErrorConfiguracion(clave, "falta la clave requerida")
        positivos = ("R", "d", "beta_left", "beta_right", "burn_in", "horizon", "spacing", "T0", "T_star", "delta",
                     "tail_start")
        for clave in positivos:
            valor = getattr(self, clave)
            if valor is not None and not (math.isfinite(valor) and (valor > 0.0 or (clave == "burn_in" and valor == 0.0))):
                raise ErrorConfiguracion(clave, f"debe ser positivo, se recibió {valor!r}")
        for clave in ("k_left", "k_right"):
            if getattr(self, clave) < 0:
                raise ErrorConfiguracion(clave, "debe ser >= 0")
        if self.k_left + self.k_right < 1:
            raise ErrorConfiguracion("k_left", "se necesita al menos una partícula")
        for clave in ("n_samples", "replicas", "processes", "max_events"):
            if getattr(self, clave) < 1:
                raise ErrorConfiguracion(clave, "debe ser >= 1")
        if self.n_mc < 0 or self.fit_min_count < 0:
            raise ErrorConfiguracion("n_mc" if self.n_mc < 0 else "fit_min_count", "debe ser >= 0")
        if not 0.0 < self.epsilon < 1.0:
            raise ErrorConfiguracion("epsilon", "debe estar en (0, 1)")
        if not 0.0 <= self.c <= 1.0:
            raise ErrorConfiguracion("c", "debe estar en [0, 1]")
        for clave in ("T_grid", "t_grid"):
            grilla = getattr(self, clave)
            if grilla is None and clave == "t_grid":
                continue
            if not grilla or any(x <= 0.0 for x in grilla) or any(b <= a for a, b in zip(grilla, grilla[1:])):
                raise ErrorConfiguracion(clave, "debe ser una lista positiva y creciente")
        try:
            cparams = self.parametros_C()
        except ErrorSimulacion as exc:
            raise ErrorConfiguracion("s_min", str(exc)) from exc
        return cparams

    def geometria(self):
        return ConfigGeometria(self.R, self.d)

    def reservorios(self):
        return ParametrosReservorios(self.beta_left, self.beta_right)

    def parametros_C(self):
        por_defecto = ParametrosC.por_defecto(self.reservorios(), self.epsilon)
        return ParametrosC(
            self.s_min if self.s_min is not None else por_defecto.s_min,
            self.s_max if self.s_max is not None else por_defecto.s_max,
            self.epsilon,
        )

    def delta_efectivo(self):
        if self.delta is not None:
            return self.delta
        return self.parametros_C().delta_por_defecto(self.geometria())

    def como_dict(self):
        return {clave: getattr(self, clave) for clave in ESQUEMA}

    def lineas_canonicas(self):
        """Líneas clave=valor ordenadas con reales a 17 cifras"""
        lineas = []
        for clave in sorted(ESQUEMA):
            if clave in CLAVES_SIN_HUELLA:
                continue
            valor = getattr(self, clave)
            if valor is None:
                texto = "auto"
            elif isinstance(valor, bool):
                texto = "true" if valor else "false"
            elif isinstance(valor, float):
                texto = formatear_real(valor)
            elif isinstance(valor, tuple):
                texto = ",".join(formatear_real(x) for x in valor)
            else:
                texto = str(valor)
            lineas.append(f"{clave}={texto}")
        return lineas

    def huella(self):
        """Primeros 16 dígitos hexadecimales del SHA-256 de la configuración canónica"""
        contenido = "\n".join(self.lineas_canonicas()).encode("utf-8")
        return hashlib.sha256(contenido).hexdigest()[:16]


def leer_archivo(ruta):
    """Pares clave -> texto de un archivo clave=valor"""
    valores = {}
    try:
        with open(ruta, encoding="utf-8") as f:
            for numero, linea in enumerate(f, 1):
                linea = linea.strip()
                if not linea or linea.startswith("#"):
                    continue
                if "=" not in linea:
                    raise ErrorConfiguracion(linea, f"línea {numero} sin '=' en {ruta}")
                clave, valor = linea.split("=", 1)
                clave = clave.strip()
                if clave not in ESQUEMA:
                    raise ErrorConfiguracion(clave, f"clave desconocida en {ruta}:{numero}")
                valores[clave] = valor.strip()
    except OSError as exc:
        raise ErrorConfiguracion("config", f"no se pudo leer {ruta}: {exc}") from exc
    return valores


def cargar_config(ruta=None, sobrescrituras=None):
    """
    Construye y valida la configuración: valores por defecto, luego el archivo
    (ruta explícita o variable BILLAR_CONFIG), luego las sobrescrituras.
    """
    if ruta is None:
        ruta = os.environ.get(VARIABLE_ENTORNO)
    sobrescrituras = {k: v for k, v in (sobrescrituras or {}).items() if v is not None}
    config = ConfigSimulacion()
    if ruta:
        valores = leer_archivo(ruta)
        faltantes = [c for c in CLAVES_REQUERIDAS if c not in valores and c not in sobrescrituras]
        if faltantes:
            raise ErrorConfiguracion(faltantes[0], f"falta la clave requerida en {ruta}")
        for clave, valor in valores.items():
            config.establecer(clave, valor)
        _logger.info("configuración leída de %s", ruta)
    for clave, valor in sobrescrituras.items():
        config.establecer(clave, valor)
    config.validar()
    return config
