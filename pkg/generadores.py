"""
Flujos de números aleatorios reproducibles.

Regla de partición: la réplica j de una corrida con semilla S usa
SeedSequence(entropy=S, spawn_key=(j,)); los subflujos de una réplica
(por ejemplo, uno por muestra de un ensamble ponderado) agregan índices
a spawn_key. El resultado no depende del orden en que se ejecuten las réplicas.
"""
import numpy as np


def secuencia_semillas(semilla, *indices):
    """SeedSequence para (semilla, índices...)"""
    return np.random.SeedSequence(entropy=semilla, spawn_key=tuple(int(i) for i in indices))


def crear_flujo(semilla, *indices):
    """Generador numpy independiente para la réplica/subflujo dados"""
    return np.random.default_rng(secuencia_semillas(semilla, *indices))

