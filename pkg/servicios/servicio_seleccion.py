"""
servicio_seleccion.py — Construcción de conjuntos de factores y pipeline completo.

Flujo: poda → imputación → RReliefF + puntajes expertos → integración
AvalOn → conjuntos (FM, FE, FC, FM_R, FM_R10, FI, FT, FC_*25) → evaluación.

Los factores nombrados por expertos sin datos de medición permanecen en
FE/FT para el reporte, pero nunca entran a un conjunto de estimación.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator, Mapping

from modelos.dataset import ConjuntoDatos
from modelos.evaluacion import ReporteEvaluacion
from modelos.expertos import Concordancia, ConcordanciaMetodos
from modelos.manifiesto import ManifiestoEjecucion
from modelos.mcda import RankingPreferencias
from modelos.seleccion import ConjuntoFactores, Procedencia, VectorPesos
from repositorios.abstracciones.i_repositorio_expertos import IRepositorioExpertos
from repositorios.abstracciones.i_repositorio_proyectos import IRepositorioProyectos
from repositorios.repositorio_arbol import RepositorioArbolJson
from repositorios.repositorio_artefactos import RepositorioArtefactos
from repositorios.repositorio_expertos import RepositorioExpertosCsv
from repositorios.repositorio_proyectos import RepositorioProyectosCsv
from servicios.errores import ErrorEtapa, ErrorValidacion
from servicios.fabrica_estimadores import crear_estimador
from servicios.servicio_datos import podar_faltantes
from servicios.servicio_evaluacion import comparar_conjuntos_factores
from servicios.servicio_expertos import (
    agregar_puntajes_expertos, concordancia_expertos, concordancia_metodos, w_definido,
)
from servicios.servicio_imputacion import imputar_knn
from servicios.servicio_mcda import construir_arbol_por_defecto, ordenar_alternativas
from servicios.servicio_relief import conjunto_pesos_positivos, fraccion_superior, rrelieff

logger = logging.getLogger(__name__)

TOP_CONCORDANCIA: int = 10
_SOLAPES = (Procedencia.FM_R, Procedencia.FE, Procedencia.FI)


# ================================================================
# CONJUNTOS DE FACTORES
# ================================================================

def seleccion_integrada(
    ranking: RankingPreferencias,
    umbral: float = 0.5,
    fraccion: float | None = None,
) -> ConjuntoFactores | None:
    """FI: preferencia ≥ umbral o, si se da `fraccion`, el top-p del ranking."""
    if fraccion is not None:
        return fraccion_superior(ranking.preferencias(), fraccion, Procedencia.FI.value, Procedencia.FI)
    elegidos = tuple(e.nombre for e in ranking.entradas if e.preferencia >= umbral)
    if not elegidos:
        logger.warning("Ningún factor alcanza la preferencia %.2f: FI vacío", umbral)
        return None
    return ConjuntoFactores(Procedencia.FI.value, elegidos, Procedencia.FI)


def _verificar_algebra(conjuntos: Mapping[str, ConjuntoFactores]) -> None:
    def s(etiqueta: str) -> frozenset[str]:
        return conjuntos[etiqueta].como_conjunto if etiqueta in conjuntos else frozenset()

    relaciones = [
        ("FM_R10", "FM_R"), ("FM_R", "FM"), ("FC", "FM"), ("FC", "FE"),
        ("FC_E25", "FC"), ("FC_R25", "FC"), ("FC_I25", "FC"), ("FM", "FT"), ("FE", "FT"),
    ]
    for menor, mayor in relaciones:
        if not s(menor) <= s(mayor):
            raise RuntimeError(f"Álgebra de conjuntos violada: {menor} ⊄ {mayor}.")


def construir_conjuntos_factores(
    conjunto: ConjuntoDatos,
    vector: VectorPesos,
    puntajes_expertos: Mapping[str, float],
    ranking: RankingPreferencias,
    fraccion: float = 0.25,
    fraccion_relevantes: float = 0.10,
    umbral_integrado: float = 0.5,
    fraccion_integrada: float | None = None,
) -> dict[str, ConjuntoFactores]:
    """Todos los conjuntos con su procedencia; los opcionales vacíos se omiten."""
    medidos = conjunto.independientes
    nombrados = sorted(
        (f for f, p in puntajes_expertos.items() if p > 0),
        key=lambda f: (-puntajes_expertos[f], f),
    )
    if not nombrados:
        raise ErrorValidacion("Los expertos no nombraron ningún factor.")

    fm = ConjuntoFactores(Procedencia.FM.value, tuple(medidos), Procedencia.FM)
    fe = ConjuntoFactores(Procedencia.FE.value, tuple(nombrados), Procedencia.FE)
    comunes = tuple(f for f in medidos if f in fe.como_conjunto)
    if not comunes:
        raise ErrorValidacion(
            "FC vacío: ningún factor nombrado por expertos tiene datos de medición."
        )
    fc = ConjuntoFactores(Procedencia.FC.value, comunes, Procedencia.FC)
    ft = ConjuntoFactores(
        Procedencia.FT.value,
        tuple(medidos) + tuple(sorted(fe.como_conjunto - fm.como_conjunto)),
        Procedencia.FT,
    )
    conjuntos = {c.etiqueta: c for c in (fm, fe, fc, ft)}

    if any(w > 0 for w in vector.pesos.values()):
        fm_r = conjunto_pesos_positivos(vector)
        conjuntos[fm_r.etiqueta] = fm_r
        conjuntos[Procedencia.FM_R10.value] = fraccion_superior(
            {f: vector.pesos[f] for f in fm_r.factores}, fraccion_relevantes,
            Procedencia.FM_R10.value, Procedencia.FM_R10,
        )
    else:
        logger.warning("Ningún peso RReliefF positivo: FM_R y FM_R10 vacíos")

    fi = seleccion_integrada(ranking, umbral_integrado, fraccion_integrada)
    if fi is not None:
        conjuntos[fi.etiqueta] = fi

    preferencias = ranking.preferencias()
    for procedencia, puntajes in (
        (Procedencia.FC_E25, puntajes_expertos),
        (Procedencia.FC_R25, vector.pesos),
        (Procedencia.FC_I25, preferencias),
    ):
        conjuntos[procedencia.value] = fraccion_superior(
            {f: puntajes.get(f, 0.0) for f in fc.factores}, fraccion,
            procedencia.value, procedencia,
        )

    _verificar_algebra(conjuntos)
    logger.info("Conjuntos: %s", {k: len(v) for k, v in conjuntos.items()})
    return conjuntos


def para_estimacion(conjunto: ConjuntoFactores, medidos: list[str]) -> ConjuntoFactores:
    """Restringe un conjunto a los factores con datos de medición."""
    disponibles = set(medidos)
    con_datos = tuple(f for f in conjunto.factores if f in disponibles)
    if not con_datos:
        raise ErrorValidacion(f"El conjunto '{conjunto.etiqueta}' no tiene factores medidos.")
    if len(con_datos) < len(conjunto):
        logger.warning("%s: %d factores sin datos excluidos de la estimación",
                       conjunto.etiqueta, len(conjunto) - len(con_datos))
    return ConjuntoFactores(conjunto.etiqueta, con_datos, conjunto.procedencia)


def resumen_solapamiento(conjuntos: Mapping[str, ConjuntoFactores]) -> dict[str, int]:
    """Tamaños de los conjuntos e intersecciones entre FM_R, FE y FI."""
    resumen = {etiqueta: len(c) for etiqueta, c in conjuntos.items()}
    presentes = [p.value for p in _SOLAPES if p.value in conjuntos]
    for a, b in combinations(presentes, 2):
        resumen[f"{a}&{b}"] = len(conjuntos[a].como_conjunto & conjuntos[b].como_conjunto)
    if len(presentes) == 3:
        resumen["&".join(presentes)] = len(
            frozenset.intersection(*(conjuntos[p].como_conjunto for p in presentes))
        )
    return resumen


# ================================================================
# PIPELINE
# ================================================================

@contextmanager
def etapa(nombre: str) -> Iterator[None]:
    logger.info("Etapa '%s'", nombre)
    try:
        yield
    except ErrorEtapa:
        raise
    except Exception as ex:
        raise ErrorEtapa(nombre, ex) from ex


@dataclass
class ResultadoPipeline:
    reporte: ReporteEvaluacion
    ranking: RankingPreferencias
    vector: VectorPesos
    conjuntos: dict[str, ConjuntoFactores]
    puntajes_expertos: dict[str, float]
    concordancia_expertos: Concordancia | None = None
    concordancia_metodos: ConcordanciaMetodos | None = None
    artefactos: list[Path] = field(default_factory=list)


def ejecutar_pipeline(
    manifiesto: ManifiestoEjecucion,
    dir_salida: Path,
    trabajos: int | None = None,
    proyectos: IRepositorioProyectos | None = None,
    expertos: IRepositorioExpertos | None = None,
) -> ResultadoPipeline:
    """
    Ejecuta todas las etapas y escribe sus artefactos en `dir_salida`.

    Los repositorios por defecto leen CSV; cualquier objeto que cumpla
    los contratos de `repositorios.abstracciones` puede reemplazarlos.
    """
    salida = RepositorioArtefactos(dir_salida)
    proyectos = proyectos or RepositorioProyectosCsv()
    expertos = expertos or RepositorioExpertosCsv()
    artefactos: list[Path] = []
    semilla = manifiesto.semilla

    with etapa("load"):
        datos = proyectos.cargar_dataset(manifiesto.datos, manifiesto.esquema)
        rankings = expertos.cargar_rankings(manifiesto.rankings_expertos)
        criterios = expertos.cargar_puntajes(manifiesto.puntajes_criterio)

    with etapa("prune"):
        podado = podar_faltantes(datos, manifiesto.poda.umbral_factor, manifiesto.poda.umbral_proyecto)
        artefactos.append(proyectos.guardar_dataset(podado, salida.directorio / "pruned.csv"))

    with etapa("impute"):
        completo = imputar_knn(podado, manifiesto.imputacion, semilla)
        artefactos.append(proyectos.guardar_dataset(completo, salida.directorio / "imputed.csv"))

    with etapa("weigh"):
        vector = rrelieff(completo, manifiesto.relief.m, manifiesto.relief.k,
                          manifiesto.relief.sigma, semilla)
        artefactos.append(salida.guardar_pesos(vector))

    with etapa("experts"):
        puntajes = agregar_puntajes_expertos(rankings, completo.independientes)
        artefactos.append(salida.guardar_puntajes(puntajes))
        acuerdo = None
        if w_definido(rankings):
            acuerdo = concordancia_expertos(rankings)
            logger.info("W de Kendall entre expertos: %.3f (p=%.3g)", acuerdo.w, acuerdo.p)

    with etapa("integrate"):
        arbol, alternativas = construir_arbol_por_defecto(
            vector, criterios, manifiesto.cuota_datos, puntajes,
        )
        if manifiesto.arbol is not None:
            arbol = RepositorioArbolJson().cargar_arbol(manifiesto.arbol)
        ranking = ordenar_alternativas(arbol, alternativas)
        artefactos.append(salida.guardar_ranking(ranking))

    with etapa("select"):
        conjuntos = construir_conjuntos_factores(
            completo, vector, puntajes, ranking,
            manifiesto.fraccion_superior, manifiesto.fraccion_relevantes,
            manifiesto.umbral_integrado, manifiesto.fraccion_integrada,
        )
        solapes = resumen_solapamiento(conjuntos)
        artefactos.append(salida.guardar_conjuntos(list(conjuntos.values()), {"overlap": solapes}))

    with etapa("evaluate"):
        faltan = [r.value for r in manifiesto.recetas if r.value not in conjuntos]
        if faltan:
            raise ErrorValidacion(f"Conjuntos solicitados pero vacíos: {faltan}.")
        evaluados = [para_estimacion(conjuntos[r.value], completo.independientes)
                     for r in manifiesto.recetas]
        estimadores = [crear_estimador(c) for c in manifiesto.estimadores]
        reporte = comparar_conjuntos_factores(
            completo, estimadores, evaluados, trabajos or manifiesto.trabajos,
        )

        comunes = conjuntos[Procedencia.FC.value].factores
        preferencias = ranking.preferencias()
        metodos = concordancia_metodos({
            "expert": {f: puntajes.get(f, 0.0) for f in comunes},
            "data": {f: vector.pesos.get(f, 0.0) for f in comunes},
            "integrated": {f: preferencias.get(f, 0.0) for f in comunes},
        }, TOP_CONCORDANCIA)
        extra = {
            "seed": semilla,
            "overlap": solapes,
            "expert_concordance": acuerdo._asdict() if acuerdo else None,
            "method_concordance": metodos.model_dump(mode="json") if metodos else None,
        }
        artefactos.extend(salida.guardar_reporte(reporte, extra))

    return ResultadoPipeline(
        reporte=reporte, ranking=ranking, vector=vector, conjuntos=conjuntos,
        puntajes_expertos=puntajes, concordancia_expertos=acuerdo,
        concordancia_metodos=metodos, artefactos=artefactos,
    )
