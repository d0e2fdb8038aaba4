"""
Sistema de eventos de la simulación: registro de colisiones, agenda de
próximas colisiones (FEL) y formato JSON-lines del registro de eventos.
"""
import json
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from geometria import Mitad, Superficie

_logger = logging.getLogger(__name__)

CAMPOS_REGISTRO = (
    "t", "i", "surface", "s_pre", "s_post", "sin_phi_pre", "sin_phi_post",
    "omega_pre", "omega_post", "half",
)


def formatear_real(x):
    """Decimal con 17 cifras significativas"""
    return f"{x:.17g}"


@dataclass(frozen=True)
class RegistroEvento:
    """Una colisión procesada: quién, contra qué, y la cinemática antes/después"""
    tiempo: float
    indice: int
    superficie: Superficie
    s_pre: float
    s_post: float
    sin_phi_pre: float
    sin_phi_post: float
    omega_pre: float
    omega_post: float
    mitad: Mitad

    def a_linea_json(self):
        """Una línea JSON con los campos del esquema del registro"""
        valores = (
            formatear_real(self.tiempo),
            str(self.indice),
            json.dumps(self.superficie.value),
            formatear_real(self.s_pre),
            formatear_real(self.s_post),
            formatear_real(self.sin_phi_pre),
            formatear_real(self.sin_phi_post),
            formatear_real(self.omega_pre),
            formatear_real(self.omega_post),
            json.dumps(self.mitad.value),
        )
        return "{" + ", ".join(f'"{c}": {v}' for c, v in zip(CAMPOS_REGISTRO, valores)) + "}"

    @classmethod
    def desde_dict(cls, datos):
        return cls(
            float(datos["t"]), int(datos["i"]), Superficie(datos["surface"]),
            float(datos["s_pre"]), float(datos["s_post"]),
            float(datos["sin_phi_pre"]), float(datos["sin_phi_post"]),
            float(datos["omega_pre"]), float(datos["omega_post"]),
            Mitad(datos["half"]),
        )

    def __repr__(self):
        return f"RegistroEvento({self.superficie.value}, i={self.indice}, t={self.tiempo:.6g})"


class AgendaColisiones:
    """
    Lista de eventos futuros: un tiempo absoluto de próxima colisión por partícula.
    Sólo la partícula que chocó necesita reprogramarse, los vuelos de las demás
    no dependen del disco.
    """

    def __init__(self, k):
        self.tiempos: List[float] = [math.inf] * k
        self.impactos: List[Optional[object]] = [None] * k

    def programar(self, indice, tiempo, impacto):
        self.tiempos[indice] = tiempo
        self.impactos[indice] = impacto

    def proximo(self):
        """(índice, tiempo, impacto) del evento más temprano; empate para el menor índice"""
        indice = min(range(len(self.tiempos)), key=self.tiempos.__getitem__)
        return indice, self.tiempos[indice], self.impactos[indice]

    def __len__(self):
        return len(self.tiempos)

    def __repr__(self):
        return f"AgendaColisiones({len(self.tiempos)} partículas)"


def escribir_registro_jsonl(registros, ruta, huella):
    """Escribe el registro de eventos; la primera línea es el comentario con la huella"""
    with open(ruta, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"# huella={huella}\n")
        for registro in registros:
            f.write(registro.a_linea_json())
            f.write("\n")
    _logger.info("registro de %d eventos escrito en %s", len(registros), ruta)


def leer_registro_jsonl(ruta):
    """Devuelve (huella, registros)"""
    huella = None
    registros = []
    with open(ruta, encoding="utf-8") as f:
        for linea in f:
            linea = linea.strip()
            if not linea:
                continue
            if linea.startswith("#"):
                if huella is None and "huella=" in linea:
                    huella = linea.split("huella=", 1)[1].strip()
                continue
            registros.append(RegistroEvento.desde_dict(json.loads(linea)))
    return huella, registros
