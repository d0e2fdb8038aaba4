"""
Programa principal - Simulación del billar abierto con disco rotante

Uso:
    python main.py <subcomando> [--config archivo] [--clave=valor ...]

Subcomandos: validate, simulate, steady, tails, mixing, flux, bounds.
Códigos de salida: 0 éxito, 1 falla de aceptación o de simulación, 2 error de configuración.
"""
import argparse
import logging
import sys

from config import ESQUEMA, cargar_config
from errores import ErrorConfiguracion, ErrorSimulacion
from experimentos import SUBCOMANDOS

_logger = logging.getLogger(__name__)

SALIDA_OK = 0
SALIDA_FALLA = 1
SALIDA_CONFIG = 2

AYUDAS = {
    "validate": "pruebas de muestreadores, geometría e invariantes",
    "simulate": "una trayectoria hasta el horizonte; registro de eventos en JSON-lines",
    "steady": "ensamble estacionario serializado en CSV",
    "tails": "curva B_T con intervalos de Wilson y ajuste del exponente",
    "mixing": "evolución del ensamble perturbado sobre B_T0",
    "flux": "flujo neto de energía por reservorio",
    "bounds": "cotas K, D y D' con sus estimaciones Monte Carlo",
}


def construir_parser():
    """Parser con un subcomando por experimento y una bandera --<clave> por parámetro"""
    comunes = argparse.ArgumentParser(add_help=False)
    comunes.add_argument("--config", help="archivo clave=valor (por defecto $BILLAR_CONFIG)")
    nivel = comunes.add_mutually_exclusive_group()
    nivel.add_argument("-v", "--verbose", action="store_true", help="log de cada evento (DEBUG)")
    nivel.add_argument("-q", "--quiet", action="store_true", help="sólo advertencias y errores")
    comunes.add_argument("--excel", metavar="ARCHIVO", help="exporta también un libro Excel")
    parametros = comunes.add_argument_group("parámetros (sobrescriben el archivo)")
    for clave in ESQUEMA:
        parametros.add_argument(f"--{clave}", dest=f"param_{clave}", metavar="VALOR")

    parser = argparse.ArgumentParser(
        prog="billar",
        description="Simulación exacta dirigida por eventos de un billar abierto con disco rotante",
    )
    sub = parser.add_subparsers(dest="subcomando", required=True)
    for nombre in SUBCOMANDOS:
        sub.add_parser(nombre, parents=[comunes], help=AYUDAS[nombre])
    return parser


def configurar_logging(verbose=False, quiet=False):
    nivel = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=nivel,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def ejecutar(argv=None):
    """Corre el subcomando pedido y devuelve el código de salida"""
    parser = construir_parser()
    argumentos = parser.parse_args(argv)
    configurar_logging(argumentos.verbose, argumentos.quiet)

    sobrescrituras = {clave: getattr(argumentos, f"param_{clave}") for clave in ESQUEMA}
    try:
        config = cargar_config(argumentos.config, sobrescrituras)
    except ErrorConfiguracion as exc:
        _logger.error("configuración inválida: %s", exc)
        return SALIDA_CONFIG

    _logger.info("subcomando %s, huella %s", argumentos.subcomando, config.huella())
    try:
        return SUBCOMANDOS[argumentos.subcomando](config, argumentos.excel)
    except ErrorConfiguracion as exc:
        _logger.error("configuración inválida: %s", exc)
        return SALIDA_CONFIG
    except ErrorSimulacion as exc:
        _logger.error("la simulación falló: %s", exc)
        return SALIDA_FALLA


def main():
    """Función principal"""
    sys.exit(ejecutar())


if __name__ == "__main__":
    main()
