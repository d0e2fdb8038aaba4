"""
Excepciones del simulador del billar abierto
"""


class ErrorSimulacion(Exception):
    """Base de todos los errores propios del simulador"""


class ErrorDominio(ErrorSimulacion, ValueError):
    """Argumento fuera del dominio de una función pura"""


class ErrorEstadoInvalido(ErrorSimulacion, ValueError):
    """Estado excluido del espacio de fases (partícula detenida, velocidad horizontal nula en una pared, etc.)"""


class ErrorInvarianteInterno(ErrorSimulacion, RuntimeError):
    """Se violó un invariante que no puede fallar con entradas válidas"""


class ErrorDesbordeEventos(ErrorSimulacion, RuntimeError):
    """Se superó el tope de eventos de una trayectoria"""

    def __init__(self, max_eventos, reloj):
        super().__init__(f"se superó el tope de {max_eventos} eventos (reloj={reloj!r})")
        self.max_eventos = max_eventos
        self.reloj = reloj


class ErrorTolerancia(ErrorSimulacion, ArithmeticError):
    """La cuadratura no alcanzó la tolerancia pedida"""


class ErrorPerturbacionDegenerada(ErrorDominio):
    """La perturbación no puede normalizarse sobre el ensamble"""


class ErrorDatosInsuficientes(ErrorDominio):
    """No hay suficientes puntos para el ajuste"""


class ErrorConfiguracion(ErrorSimulacion, ValueError):
    """Error en la configuración de una corrida; conserva la clave culpable"""

    def __init__(self, clave, mensaje):
        super().__init__(f"{clave}: {mensaje}")
        self.clave = clave
