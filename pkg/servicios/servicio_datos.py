"""
servicio_datos.py — Perfil de faltantes, poda y normalización.

Las proporciones de faltantes cuentan solo celdas de factores
independientes; identificador, dependiente y tamaño quedan fuera del
numerador y del denominador.
"""

import logging
from dataclasses import dataclass

from modelos.dataset import (
    ConjuntoDatos, Escala, PerfilFaltantes, RegistroProyecto, es_faltante,
)
from servicios.errores import ErrorValidacion

logger = logging.getLogger(__name__)

UMBRAL_FACTOR: float = 0.90
UMBRAL_PROYECTO: float = 0.55


# ================================================================
# PERFIL DE FALTANTES
# ================================================================

def perfilar_faltantes(conjunto: ConjuntoDatos) -> PerfilFaltantes:
    factores = conjunto.independientes
    registros = conjunto.registros

    faltan_factor = {f: 0 for f in factores}
    por_registro: dict[str, float] = {}
    total = 0
    for registro in registros:
        faltan = 0
        for f in factores:
            if es_faltante(registro.valor(f)):
                faltan_factor[f] += 1
                faltan += 1
        total += faltan
        por_registro[registro.id] = faltan / len(factores) if factores else 0.0

    celdas = len(factores) * len(registros)
    return PerfilFaltantes(
        por_factor={
            f: (n / len(registros) if registros else 0.0) for f, n in faltan_factor.items()
        },
        por_registro=por_registro,
        total=total / celdas if celdas else 0.0,
    )


def elegibles(conjunto: ConjuntoDatos) -> ConjuntoDatos:
    """Proyectos con dependiente observada (positiva por validación del conjunto)."""
    nombre = conjunto.dependiente.nombre
    return conjunto.con_registros(r for r in conjunto.registros if not es_faltante(r.valor(nombre)))


# ================================================================
# PODA
# ================================================================

def _validar_umbral(nombre: str, umbral: float) -> None:
    if not 0.0 < umbral <= 1.0:
        raise ErrorValidacion(f"El umbral {nombre} debe estar en (0, 1]; se recibió {umbral}.")


def podar_faltantes(
    conjunto: ConjuntoDatos,
    umbral_factor: float = UMBRAL_FACTOR,
    umbral_proyecto: float = UMBRAL_PROYECTO,
) -> ConjuntoDatos:
    """Quita factores (faltantes ≥ umbral_factor) y luego proyectos
    (faltantes > umbral_proyecto, recalculado sobre los factores restantes).

    La pasada factor→proyecto se repite hasta que ninguna quite nada, de
    modo que aplicar la poda dos veces equivale a aplicarla una.
    """
    _validar_umbral("de factores", umbral_factor)
    _validar_umbral("de proyectos", umbral_proyecto)

    actual = conjunto
    quitados_f: list[str] = []
    quitados_p: list[str] = []
    while True:
        perfil = perfilar_faltantes(actual)
        factores_fuera = [f for f, r in perfil.por_factor.items() if r >= umbral_factor]
        if factores_fuera and len(factores_fuera) == len(actual.independientes):
            raise ErrorValidacion(
                f"La poda eliminaría todos los factores independientes; "
                f"aumente el umbral de factores (actual {umbral_factor})."
            )
        actual = actual.sin_factores(factores_fuera)

        perfil = perfilar_faltantes(actual)
        proyectos_fuera = {i for i, r in perfil.por_registro.items() if r > umbral_proyecto}
        if proyectos_fuera and len(proyectos_fuera) == len(actual):
            raise ErrorValidacion(
                f"La poda eliminaría todos los proyectos; "
                f"aumente el umbral de proyectos (actual {umbral_proyecto})."
            )
        actual = actual.con_registros(r for r in actual.registros if r.id not in proyectos_fuera)

        quitados_f += factores_fuera
        quitados_p += [r for r in perfil.por_registro if r in proyectos_fuera]
        if not factores_fuera and not proyectos_fuera:
            break

    logger.info(
        "Poda: %d factores y %d proyectos eliminados (faltantes %.1f%% → %.1f%%)",
        len(quitados_f), len(quitados_p),
        100 * perfilar_faltantes(conjunto).total, 100 * perfilar_faltantes(actual).total,
    )
    logger.debug("Factores eliminados: %s; proyectos eliminados: %s", quitados_f, quitados_p)
    return actual


# ================================================================
# NORMALIZACIÓN
# ================================================================

@dataclass(frozen=True)
class RangoFactor:
    minimo: float
    maximo: float
    escala: Escala


def normalizar_numericos(
    conjunto: ConjuntoDatos,
) -> tuple[ConjuntoDatos, dict[str, RangoFactor]]:
    """(v − min)/(max − min) en cada factor independiente numérico.

    Los factores constantes quedan en 0; los faltantes siguen faltando.
    Los enteros pasan a escala continua; el rango guarda la escala original.
    """
    rangos: dict[str, RangoFactor] = {}
    for nombre in conjunto.independientes:
        d = conjunto.descriptor(nombre)
        if not d.es_numerico:
            continue
        observados = [
            float(r.valor(nombre)) for r in conjunto.registros
            if not es_faltante(r.valor(nombre))
        ]
        if observados:
            rangos[nombre] = RangoFactor(min(observados), max(observados), d.escala)

    def transformar(nombre: str, valor):
        rango = rangos.get(nombre)
        if rango is None or es_faltante(valor):
            return valor
        amplitud = rango.maximo - rango.minimo
        return (float(valor) - rango.minimo) / amplitud if amplitud > 0 else 0.0

    descriptores = tuple(
        d.model_copy(update={"escala": Escala.CONTINUA}) if d.nombre in rangos else d
        for d in conjunto.descriptores
    )
    registros = tuple(
        RegistroProyecto(r.id, {k: transformar(k, v) for k, v in r.valores.items()})
        for r in conjunto.registros
    )
    return ConjuntoDatos(descriptores, registros), rangos


def desnormalizar(
    conjunto: ConjuntoDatos, rangos: dict[str, RangoFactor],
) -> ConjuntoDatos:
    """Inversa de normalizar_numericos."""
    def restaurar(nombre: str, valor):
        rango = rangos.get(nombre)
        if rango is None or es_faltante(valor):
            return valor
        original = rango.minimo + float(valor) * (rango.maximo - rango.minimo)
        return int(round(original)) if rango.escala == Escala.ENTERA else original

    descriptores = tuple(
        d.model_copy(update={"escala": rangos[d.nombre].escala}) if d.nombre in rangos else d
        for d in conjunto.descriptores
    )
    registros = tuple(
        RegistroProyecto(r.id, {k: restaurar(k, v) for k, v in r.valores.items()})
        for r in conjunto.registros
    )
    return ConjuntoDatos(descriptores, registros)
