"""
servicio_imputacion.py — Imputación hot-deck por k vecinos más cercanos.

Cada celda faltante (r, f) se llena con los k donantes más cercanos a r
que tengan f observado. Las distancias se calculan sobre los datos
originales, así que un valor imputado nunca sirve de donante en la misma
pasada. Sin donantes elegibles se usa la media/moda de la columna.
"""

import logging

import numpy as np

from modelos.configuraciones import ConfigImputacion
from modelos.dataset import ConjuntoDatos, DescriptorFactor, Escala, RegistroProyecto, Valor
from servicios.errores import ErrorValidacion
from servicios.utilidades.distancia import distancias, escalar, orden_vecinos, rangos_observados

logger = logging.getLogger(__name__)


def _generador(semilla: int, fila: int, columna: int) -> np.random.Generator:
    # Un generador por celda: el resultado no depende del orden de visita.
    return np.random.default_rng([semilla, fila, columna])


def _agregar(descriptor: DescriptorFactor, valores: np.ndarray,
             rng: np.random.Generator) -> Valor:
    """Media (numérico/ordinal) o moda (nominal, empate por sorteo)."""
    if descriptor.es_nominal:
        codigos, cuentas = np.unique(valores.astype(int), return_counts=True)
        empatados = codigos[cuentas == cuentas.max()]
        elegido = int(empatados[0]) if len(empatados) == 1 else int(rng.choice(empatados))
        return descriptor.niveles[elegido]

    media = float(np.mean(valores))
    if descriptor.escala == Escala.CONTINUA:
        return media
    if descriptor.escala == Escala.ENTERA:
        return int(round(media))
    return descriptor.niveles[int(round(media))]


def _preparar(conjunto: ConjuntoDatos) -> tuple[list[str], np.ndarray, np.ndarray]:
    if len(conjunto) < 2:
        raise ErrorValidacion("La imputación requiere al menos 2 proyectos.")
    factores = conjunto.independientes
    matriz = conjunto.matriz(factores)
    vacios = [f for j, f in enumerate(factores) if np.isnan(matriz[:, j]).all()]
    if vacios:
        raise ErrorValidacion(
            f"Factores sin ningún valor observado, imposibles de imputar: {vacios}."
        )
    return factores, matriz, conjunto.mascara_nominal(factores)


def _reconstruir(conjunto: ConjuntoDatos, rellenos: dict[int, dict[str, Valor]]) -> ConjuntoDatos:
    return conjunto.con_registros(
        RegistroProyecto(r.id, {**r.valores, **rellenos[i]}) if i in rellenos else r
        for i, r in enumerate(conjunto.registros)
    )


def imputar_knn(
    conjunto: ConjuntoDatos,
    config: ConfigImputacion = ConfigImputacion(),
    semilla: int = 0,
) -> ConjuntoDatos:
    """Devuelve un conjunto sin celdas independientes faltantes.

    La variable dependiente nunca se imputa.
    """
    factores, matriz, nominal = _preparar(conjunto)
    if not np.isnan(matriz).any():
        return conjunto

    escalada = escalar(matriz, nominal, *rangos_observados(matriz))
    ids = conjunto.ids
    descriptores = [conjunto.descriptor(f) for f in factores]

    rellenos: dict[int, dict[str, Valor]] = {}
    sin_donantes = 0
    for i in np.flatnonzero(np.isnan(matriz).any(axis=1)):
        distancia = distancias(escalada[i], escalada, nominal)
        orden = [v for v in orden_vecinos(distancia, ids) if v != i and np.isfinite(distancia[v])]
        for j in np.flatnonzero(np.isnan(matriz[i])):
            donantes = [v for v in orden if not np.isnan(matriz[v, j])][: config.k]
            if donantes:
                valores = matriz[donantes, j]
            else:
                sin_donantes += 1
                valores = matriz[:, j][~np.isnan(matriz[:, j])]
            rellenos.setdefault(int(i), {})[factores[j]] = _agregar(
                descriptores[j], valores, _generador(semilla, int(i), int(j))
            )

    if sin_donantes:
        logger.warning("%d celdas sin donantes elegibles: se usó la media/moda de la columna",
                       sin_donantes)
    logger.info("Imputación k-NN (k=%d): %d celdas completadas",
                config.k, int(np.isnan(matriz).sum()))
    return _reconstruir(conjunto, rellenos)


def imputar_media(conjunto: ConjuntoDatos, semilla: int = 0) -> ConjuntoDatos:
    """Línea base: media (numérico/ordinal) o moda (nominal) de la columna."""
    factores, matriz, _ = _preparar(conjunto)
    rellenos: dict[int, dict[str, Valor]] = {}
    for j, factor in enumerate(factores):
        columna = matriz[:, j]
        observados = columna[~np.isnan(columna)]
        descriptor = conjunto.descriptor(factor)
        for i in np.flatnonzero(np.isnan(columna)):
            rellenos.setdefault(int(i), {})[factor] = _agregar(
                descriptor, observados, _generador(semilla, int(i), j)
            )
    return _reconstruir(conjunto, rellenos)
