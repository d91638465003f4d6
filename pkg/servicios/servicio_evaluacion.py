"""
servicio_evaluacion.py — LOOCV, métricas MRE y ANOVA entre conjuntos de factores.

Cada fold estima un proyecto con el conjunto de datos sin ese proyecto.
Los folds son independientes: con trabajos > 1 se reparten en hilos y el
resultado es idéntico al secuencial.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Sequence

import numpy as np
import pandas as pd

from modelos.dataset import ConjuntoDatos, RegistroProyecto
from modelos.estimacion import ConsultaEstimacion
from modelos.evaluacion import (
    ComparacionAnova, FilaReporte, RegistroEstimacion, ReporteEvaluacion,
    ResultadoAnova, ResumenMetricas,
)
from modelos.seleccion import ConjuntoFactores
from servicios.abstracciones.i_estimador import IEstimador
from servicios.errores import ErrorValidacion
from servicios.servicio_datos import elegibles
from servicios.utilidades.estadistica import valor_p_f

logger = logging.getLogger(__name__)

ALFA: float = 0.02
NIVEL_PRED: float = 0.25
MINIMO_ELEGIBLES: int = 3
_VARIACION_NULA: float = 1e-24


# ================================================================
# MÉTRICAS
# ================================================================

def mre(real: float, estimado: float) -> float:
    """|real − estimado| / real."""
    if not real > 0:
        raise ErrorValidacion(f"MRE indefinido para un valor real no positivo: {real}.")
    return abs(real - estimado) / real


def resumir(registros: Sequence[RegistroEstimacion], nivel: float = NIVEL_PRED) -> ResumenMetricas:
    """MMRE, MdMRE y Pred(nivel) con umbral inclusivo (MRE ≤ nivel)."""
    if not registros:
        raise ErrorValidacion("No hay estimaciones que resumir.")
    valores = np.array([r.mre for r in registros])
    return ResumenMetricas(
        mmre=float(valores.mean()),
        mdmre=float(np.median(valores)),
        pred25=float(np.mean(valores <= nivel)),
        n=len(valores),
    )


# ================================================================
# LOOCV
# ================================================================

def _fold(conjunto: ConjuntoDatos, registro: RegistroProyecto, estimador: IEstimador,
          factores: ConjuntoFactores) -> RegistroEstimacion:
    entrenamiento = conjunto.sin_registro(registro.id)
    if registro.id in entrenamiento.ids:
        raise RuntimeError(f"Fuga en LOOCV: el proyecto '{registro.id}' sigue en su entrenamiento.")
    estimado, traza = estimador.estimar(entrenamiento, ConsultaEstimacion(registro, factores))
    real = float(registro.valor(conjunto.dependiente.nombre))
    return RegistroEstimacion(
        id_proyecto=registro.id, real=real, estimado=estimado, mre=mre(real, estimado), traza=traza,
    )


def loocv(
    conjunto: ConjuntoDatos,
    estimador: IEstimador,
    factores: ConjuntoFactores,
    trabajos: int = 1,
) -> list[RegistroEstimacion]:
    """Una estimación por proyecto elegible, en el orden del conjunto."""
    factores.validar_contra(conjunto.independientes)
    datos = elegibles(conjunto)
    excluidos = len(conjunto) - len(datos)
    if excluidos:
        logger.warning("LOOCV: %d proyectos sin dependiente observada excluidos", excluidos)
    if len(datos) < MINIMO_ELEGIBLES:
        raise ErrorValidacion(
            f"LOOCV requiere al menos {MINIMO_ELEGIBLES} proyectos elegibles; hay {len(datos)}."
        )

    def ejecutar(registro: RegistroProyecto) -> RegistroEstimacion:
        return _fold(datos, registro, estimador, factores)

    if trabajos > 1:
        with ThreadPoolExecutor(max_workers=trabajos) as pool:
            registros = list(pool.map(ejecutar, datos.registros))
    else:
        registros = [ejecutar(r) for r in datos.registros]

    logger.debug("LOOCV %s/%s: %d folds", estimador.nombre, factores.etiqueta, len(registros))
    return registros


# ================================================================
# ANOVA
# ================================================================

def anova_mre(a: Sequence[float], b: Sequence[float], alfa: float = ALFA) -> ResultadoAnova:
    """ANOVA de un factor con dos grupos; F = t² del t-test con varianza combinada."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ErrorValidacion(f"ANOVA requiere al menos 2 valores por grupo; hay {a.size} y {b.size}.")

    media_a, media_b = a.mean(), b.mean()
    entre = a.size * b.size / (a.size + b.size) * (media_a - media_b) ** 2
    dentro = float(np.sum((a - media_a) ** 2) + np.sum((b - media_b) ** 2))
    gl_dentro = a.size + b.size - 2

    if dentro <= _VARIACION_NULA:
        if entre <= _VARIACION_NULA:
            return ResultadoAnova(f=0.0, p=1.0, significativo=False, gl_dentro=gl_dentro, degenerado=True)
        return ResultadoAnova(f=float("inf"), p=0.0, significativo=True, gl_dentro=gl_dentro,
                              degenerado=True)

    f = float(entre / (dentro / gl_dentro))
    p = valor_p_f(f, 1, gl_dentro)
    return ResultadoAnova(f=f, p=p, significativo=p < alfa, gl_dentro=gl_dentro)


# ================================================================
# COMPARACIÓN DE CONJUNTOS
# ================================================================

def comparar_conjuntos_factores(
    conjunto: ConjuntoDatos,
    estimadores: Sequence[IEstimador],
    conjuntos: Sequence[ConjuntoFactores],
    trabajos: int = 1,
    alfa: float = ALFA,
    nivel: float = NIVEL_PRED,
) -> ReporteEvaluacion:
    """Producto cruzado estimador × conjunto; filas ordenadas por nombre de
    estimador y luego etiqueta de conjunto, ANOVA por pares dentro de cada estimador."""
    etiquetas = [c.etiqueta for c in conjuntos]
    if len(set(etiquetas)) != len(etiquetas):
        raise ErrorValidacion(f"Etiquetas de conjuntos repetidas: {etiquetas}.")
    nombres = [e.nombre for e in estimadores]
    if len(set(nombres)) != len(nombres):
        raise ErrorValidacion(f"Estimadores repetidos: {nombres}.")
    for c in conjuntos:
        c.validar_contra(conjunto.independientes)

    filas: list[FilaReporte] = []
    comparaciones: list[ComparacionAnova] = []
    for estimador in sorted(estimadores, key=lambda e: e.nombre):
        propias = []
        for c in sorted(conjuntos, key=lambda c: c.etiqueta):
            registros = loocv(conjunto, estimador, c, trabajos)
            fila = FilaReporte(
                estimador=estimador.nombre, conjunto=c.etiqueta, factores=c.factores,
                resumen=resumir(registros, nivel), registros=tuple(registros),
            )
            logger.info("%s / %s: MMRE %.1f%%, MdMRE %.1f%%, Pred(25) %.1f%%",
                        estimador.nombre, c.etiqueta, 100 * fila.resumen.mmre,
                        100 * fila.resumen.mdmre, 100 * fila.resumen.pred25)
            propias.append(fila)
        for fa, fb in combinations(propias, 2):
            comparaciones.append(ComparacionAnova(
                estimador=estimador.nombre, conjunto_a=fa.conjunto, conjunto_b=fb.conjunto,
                resultado=anova_mre(fa.mres, fb.mres, alfa),
            ))
        filas.extend(propias)

    datos = elegibles(conjunto)
    return ReporteEvaluacion(
        filas=tuple(filas), anova=tuple(comparaciones),
        elegibles=len(datos), excluidos=len(conjunto) - len(datos), alfa=alfa,
    )


# ================================================================
# VISTAS TABULARES
# ================================================================

def tabla_reporte(reporte: ReporteEvaluacion) -> pd.DataFrame:
    """Una fila por (estimador, conjunto) con métricas en fracción."""
    return pd.DataFrame(
        [
            {
                "estimator": f.estimador, "factor_set": f.conjunto, "n_factors": len(f.factores),
                "mmre": f.resumen.mmre, "mdmre": f.resumen.mdmre, "pred25": f.resumen.pred25,
                "n": f.resumen.n,
            }
            for f in reporte.filas
        ],
        columns=["estimator", "factor_set", "n_factors", "mmre", "mdmre", "pred25", "n"],
    )


def tabla_anova(reporte: ReporteEvaluacion) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "estimator": c.estimador, "set_a": c.conjunto_a, "set_b": c.conjunto_b,
                "f": c.resultado.f, "p": c.resultado.p, "significant": c.resultado.significativo,
            }
            for c in reporte.anova
        ],
        columns=["estimator", "set_a", "set_b", "f", "p", "significant"],
    )


def texto_reporte(reporte: ReporteEvaluacion) -> str:
    """Tabla para terminal: porcentajes con un decimal, un bloque por estimador."""
    tabla = tabla_reporte(reporte)
    for columna in ("mmre", "mdmre", "pred25"):
        tabla[columna] = tabla[columna].map(lambda v: f"{100 * v:.1f}%")
    encabezado = f"Proyectos evaluados: {reporte.elegibles} (excluidos: {reporte.excluidos})"
    return encabezado + "\n" + tabla.to_string(index=False)


def comparacion_reducida(
    reporte: ReporteEvaluacion, completo: str = "FM", reducido: str = "FM_R10",
) -> pd.DataFrame:
    """Conjunto completo frente al reducido por estimador, con el p del ANOVA."""
    filas = []
    for estimador in dict.fromkeys(f.estimador for f in reporte.filas):
        a = reporte.fila(estimador, completo)
        b = reporte.fila(estimador, reducido)
        resultado = reporte.comparacion(estimador, completo, reducido).resultado
        filas.append({
            "estimator": estimador,
            f"mmre_{completo}": a.resumen.mmre, f"mmre_{reducido}": b.resumen.mmre,
            f"mdmre_{completo}": a.resumen.mdmre, f"mdmre_{reducido}": b.resumen.mdmre,
            f"pred25_{completo}": a.resumen.pred25, f"pred25_{reducido}": b.resumen.pred25,
            "p": resultado.p,
        })
    return pd.DataFrame(filas)
