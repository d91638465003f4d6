"""
cli.py — Línea de comandos: una suborden por etapa y el pipeline completo.

Códigos de salida:
  0  éxito
  1  error de validación (incluye flags desconocidos o mal formados)
  2  error de ejecución (etapa fallida, E/S)

stdout lleva la tabla principal; stderr, el logging y los errores.

Ejemplos:
  python cli.py profile --data datos/sintetico/proyectos.csv --schema datos/sintetico/esquema.json
  python cli.py run --manifest datos/sintetico/manifiesto.json --output-dir salida
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import pandas as pd

from config import get_settings
from modelos.configuraciones import ConfigImputacion, ConfigKnn, ConfigOsr
from modelos.dataset import ConjuntoDatos
from modelos.estimacion import ConsultaEstimacion
from modelos.manifiesto import ManifiestoEjecucion
from modelos.seleccion import ConjuntoFactores, Procedencia
from repositorios.repositorio_arbol import RepositorioArbolJson
from repositorios.repositorio_artefactos import RepositorioArtefactos
from repositorios.repositorio_expertos import RepositorioExpertosCsv
from repositorios.repositorio_proyectos import RepositorioProyectosCsv
from servicios.errores import ErrorEtapa, ErrorValidacion
from servicios.fabrica_estimadores import crear_estimador, tipos_disponibles
from servicios.servicio_datos import perfilar_faltantes, podar_faltantes
from servicios.servicio_evaluacion import comparar_conjuntos_factores, texto_reporte
from servicios.servicio_expertos import (
    W_NO_DEFINIDO, agregar_puntajes_expertos, concordancia_expertos, w_definido,
)
from servicios.servicio_imputacion import imputar_knn, imputar_media
from servicios.servicio_mcda import construir_arbol_por_defecto, ordenar_alternativas
from servicios.servicio_relief import rrelieff
from servicios.servicio_seleccion import (
    construir_conjuntos_factores, ejecutar_pipeline, para_estimacion, resumen_solapamiento,
)
from servicios.utilidades.registro import configurar_registro

logger = logging.getLogger(__name__)

EXITO, ERROR_VALIDACION, ERROR_EJECUCION = 0, 1, 2


def _porcentaje(valor: float) -> str:
    return f"{100 * valor:.1f}%"


class ParserCli(argparse.ArgumentParser):
    """Los errores de uso salen con código 1 en lugar del 2 de argparse."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ERROR_VALIDACION, f"{self.prog}: error: {message}\n")


# ================================================================
# CARGA COMÚN
# ================================================================

def _dataset(args) -> ConjuntoDatos:
    return RepositorioProyectosCsv().cargar_dataset(args.data, args.schema)


def _salida(args) -> RepositorioArtefactos:
    return RepositorioArtefactos(args.output_dir)


def _pesos(args, conjunto: ConjuntoDatos):
    relief = get_settings().relief
    return rrelieff(
        conjunto,
        m=args.m if args.m is not None else relief.m,
        k=args.k if args.k is not None else relief.k,
        sigma=args.sigma if args.sigma is not None else relief.sigma,
        semilla=args.seed,
    )


def _ranking(args, conjunto: ConjuntoDatos):
    """Pesos, puntajes expertos y ranking AvalOn a partir de los flags."""
    expertos = RepositorioExpertosCsv()
    vector = _pesos(args, conjunto)
    puntajes = agregar_puntajes_expertos(expertos.cargar_rankings(args.experts), conjunto.independientes)
    criterios = expertos.cargar_puntajes(args.scores)
    cuota = args.data_share if args.data_share is not None else get_settings().seleccion.data_share
    arbol, alternativas = construir_arbol_por_defecto(vector, criterios, cuota, puntajes)
    if args.tree is not None:
        arbol = RepositorioArbolJson().cargar_arbol(args.tree)
    return vector, puntajes, ordenar_alternativas(arbol, alternativas)


def _factores(texto: str | None, conjunto: ConjuntoDatos, etiqueta: str = "custom") -> ConjuntoFactores:
    if not texto:
        return ConjuntoFactores(Procedencia.FM.value, tuple(conjunto.independientes), Procedencia.FM)
    nombres = tuple(f.strip() for f in texto.split(",") if f.strip())
    return ConjuntoFactores(etiqueta, nombres, Procedencia.CUSTOM)


def _estimador(tipo: str, args):
    ajustes = get_settings().estimacion
    if tipo == "knn":
        return crear_estimador(ConfigKnn(k=args.k if args.k is not None else ajustes.knn_k))
    return crear_estimador(ConfigOsr(
        intervalos=ajustes.osr_bins, clases=ajustes.osr_classes,
        minimo_subconjunto=ajustes.osr_min_subset,
    ))


# ================================================================
# SUBÓRDENES
# ================================================================

def cmd_profile(args) -> int:
    perfil = perfilar_faltantes(_dataset(args))
    tabla = pd.DataFrame(
        [(f, r) for f, r in perfil.por_factor.items()], columns=["factor", "missing"],
    ).sort_values(["missing", "factor"], ascending=[False, True], kind="stable")
    tabla.to_csv(Path(args.output_dir) / "profile.csv", index=False, lineterminator="\n")
    tabla["missing"] = tabla["missing"].map(_porcentaje)
    print(tabla.to_string(index=False))
    print(f"Faltantes totales: {_porcentaje(perfil.total)}")
    return EXITO


def cmd_prune(args) -> int:
    seleccion = get_settings().seleccion
    conjunto = _dataset(args)
    podado = podar_faltantes(
        conjunto,
        args.factor_thresh if args.factor_thresh is not None else seleccion.factor_threshold,
        args.project_thresh if args.project_thresh is not None else seleccion.project_threshold,
    )
    ruta = RepositorioProyectosCsv().guardar_dataset(podado, Path(args.output_dir) / "pruned.csv")
    print(f"Factores: {len(conjunto.independientes)} → {len(podado.independientes)}")
    print(f"Proyectos: {len(conjunto)} → {len(podado)}")
    print(f"Faltantes: {_porcentaje(perfilar_faltantes(conjunto).total)} → "
          f"{_porcentaje(perfilar_faltantes(podado).total)}")
    print(ruta)
    return EXITO


def cmd_impute(args) -> int:
    conjunto = _dataset(args)
    if args.method == "mean":
        completo = imputar_media(conjunto, args.seed)
    else:
        k = args.k if args.k is not None else get_settings().imputacion.k
        completo = imputar_knn(conjunto, ConfigImputacion(k=k), args.seed)
    ruta = RepositorioProyectosCsv().guardar_dataset(completo, Path(args.output_dir) / "imputed.csv")
    print(ruta)
    return EXITO


def cmd_weigh(args) -> int:
    vector = _pesos(args, _dataset(args))
    _salida(args).guardar_pesos(vector)
    tabla = pd.DataFrame(vector.ordenados(), columns=["factor", "weight", "rank"])
    print(tabla.to_string(index=False))
    return EXITO


def cmd_experts(args) -> int:
    rankings = RepositorioExpertosCsv().cargar_rankings(args.experts)
    puntajes = agregar_puntajes_expertos(rankings)
    _salida(args).guardar_puntajes(puntajes)
    orden = sorted(puntajes, key=lambda f: (-puntajes[f], f))
    print(pd.DataFrame([(f, puntajes[f]) for f in orden], columns=["factor", "score"])
          .to_string(index=False))
    if w_definido(rankings):
        acuerdo = concordancia_expertos(rankings)
        print(f"W de Kendall: {acuerdo.w:.3f} (p = {acuerdo.p:.3g})")
    else:
        print(W_NO_DEFINIDO)
    return EXITO


def cmd_integrate(args) -> int:
    _, _, ranking = _ranking(args, _dataset(args))
    _salida(args).guardar_ranking(ranking)
    print(pd.DataFrame(
        [(e.nombre, e.preferencia, e.rango) for e in ranking.entradas],
        columns=["factor", "preference", "rank"],
    ).to_string(index=False))
    return EXITO


def cmd_select(args) -> int:
    seleccion = get_settings().seleccion
    conjunto = _dataset(args)
    vector, puntajes, ranking = _ranking(args, conjunto)
    conjuntos = construir_conjuntos_factores(
        conjunto, vector, puntajes, ranking,
        args.top_fraction if args.top_fraction is not None else seleccion.top_fraction,
        seleccion.top_fraction_relevant, seleccion.integrated_threshold,
    )
    solapes = resumen_solapamiento(conjuntos)
    _salida(args).guardar_conjuntos(list(conjuntos.values()), {"overlap": solapes})
    for etiqueta, c in conjuntos.items():
        print(f"{etiqueta} ({len(c)}): {', '.join(c.factores)}")
    return EXITO


def cmd_estimate(args) -> int:
    conjunto = _dataset(args)
    consulta = ConsultaEstimacion(conjunto.registro(args.query), _factores(args.factors, conjunto))
    prediccion, traza = _estimador(args.estimator, args).estimar(conjunto, consulta)
    print(f"{args.query}: {prediccion!r}")
    if args.trace and traza is not None:
        contenido = traza.model_dump(mode="json")
        _salida(args).guardar_traza(contenido, f"{args.estimator}_{args.query}.json")
        print(json.dumps(contenido, indent=2, ensure_ascii=False))
    return EXITO


def cmd_evaluate(args) -> int:
    conjunto = _dataset(args)
    conjuntos = [_factores(None, conjunto)]
    if args.set:
        conjuntos = []
        for definicion in args.set:
            etiqueta, _, factores = definicion.partition("=")
            conjuntos.append(_factores(factores, conjunto, etiqueta.strip()))
    estimadores = [_estimador(t, args) for t in (args.estimator or tipos_disponibles())]
    evaluacion = get_settings().evaluacion
    reporte = comparar_conjuntos_factores(
        conjunto, estimadores, [para_estimacion(c, conjunto.independientes) for c in conjuntos],
        args.jobs or evaluacion.jobs, evaluacion.alpha, evaluacion.pred_level,
    )
    _salida(args).guardar_reporte(reporte, {"seed": args.seed})
    print(texto_reporte(reporte))
    return EXITO


def cmd_run(args) -> int:
    manifiesto = ManifiestoEjecucion.cargar(args.manifest)
    cambios: dict = {}
    if args.seed_explicita:
        cambios["semilla"] = args.seed
    if args.data_share is not None:
        if not 0.0 <= args.data_share <= 1.0:
            raise ErrorValidacion(f"--data-share debe estar en [0, 1]; se recibió {args.data_share}.")
        cambios["cuota_datos"] = args.data_share
    if args.top_fraction is not None:
        if not 0.0 < args.top_fraction <= 1.0:
            raise ErrorValidacion(f"--top-fraction debe estar en (0, 1]; se recibió {args.top_fraction}.")
        cambios["fraccion_superior"] = args.top_fraction
    if cambios:
        manifiesto = manifiesto.model_copy(update=cambios)
    resultado = ejecutar_pipeline(manifiesto, Path(args.output_dir), args.jobs)
    print(texto_reporte(resultado.reporte))
    return EXITO


# ================================================================
# PARSER
# ================================================================

def construir_parser() -> ParserCli:
    parser = ParserCli(prog="factores", description="Selección de factores de productividad.")
    subparsers = parser.add_subparsers(dest="orden", required=True)

    comun = ParserCli(add_help=False)
    comun.add_argument("--seed", type=int, default=None)
    comun.add_argument("--output-dir", default=".")
    comun.add_argument("--jobs", type=int, default=None)
    comun.add_argument("--log-level", default=None)

    datos = ParserCli(add_help=False)
    datos.add_argument("--data", type=Path, required=True)
    datos.add_argument("--schema", type=Path, required=True)

    relief = ParserCli(add_help=False)
    relief.add_argument("--k", type=int, default=None)
    relief.add_argument("--m", type=int, default=None)
    relief.add_argument("--sigma", type=float, default=None)

    integracion = ParserCli(add_help=False)
    integracion.add_argument("--experts", type=Path, required=True)
    integracion.add_argument("--scores", type=Path, required=True)
    integracion.add_argument("--tree", type=Path, default=None)
    integracion.add_argument("--data-share", type=float, default=None)

    p = subparsers.add_parser("profile", parents=[comun, datos], help="tabla de faltantes")
    p.set_defaults(funcion=cmd_profile)

    p = subparsers.add_parser("prune", parents=[comun, datos], help="poda por faltantes")
    p.add_argument("--factor-thresh", type=float, default=None)
    p.add_argument("--project-thresh", type=float, default=None)
    p.set_defaults(funcion=cmd_prune)

    p = subparsers.add_parser("impute", parents=[comun, datos], help="imputación k-NN")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--method", choices=["knn", "mean"], default="knn")
    p.set_defaults(funcion=cmd_impute)

    p = subparsers.add_parser("weigh", parents=[comun, datos, relief], help="pesos RReliefF")
    p.set_defaults(funcion=cmd_weigh)

    p = subparsers.add_parser("experts", parents=[comun], help="puntajes expertos y W de Kendall")
    p.add_argument("--experts", type=Path, required=True)
    p.set_defaults(funcion=cmd_experts)

    p = subparsers.add_parser("integrate", parents=[comun, datos, relief, integracion],
                              help="ranking AvalOn")
    p.set_defaults(funcion=cmd_integrate)

    p = subparsers.add_parser("select", parents=[comun, datos, relief, integracion],
                              help="conjuntos de factores")
    p.add_argument("--top-fraction", type=float, default=None)
    p.set_defaults(funcion=cmd_select)

    p = subparsers.add_parser("estimate", parents=[comun, datos], help="estimación de un proyecto")
    p.add_argument("--query", required=True)
    p.add_argument("--estimator", choices=tipos_disponibles(), default="knn")
    p.add_argument("--factors", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(funcion=cmd_estimate)

    p = subparsers.add_parser("evaluate", parents=[comun, datos], help="LOOCV y ANOVA")
    p.add_argument("--estimator", choices=tipos_disponibles(), action="append")
    p.add_argument("--set", action="append", metavar="ETIQUETA=f1,f2,...")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(funcion=cmd_evaluate)

    p = subparsers.add_parser("run", parents=[comun], help="pipeline completo")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--data-share", type=float, default=None)
    p.add_argument("--top-fraction", type=float, default=None)
    p.set_defaults(funcion=cmd_run)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = construir_parser().parse_args(argv)
    settings = get_settings()
    configurar_registro(args.log_level or settings.log_level)

    args.seed_explicita = args.seed is not None
    if args.seed is None:
        args.seed = settings.seleccion.seed
    Path(args.output_dir).mkdir(parents=True, exist_ok=True)

    try:
        return args.funcion(args)
    except ErrorEtapa as ex:
        logger.error("%s", ex)
        print(f"Error en la etapa '{ex.etapa}': {ex.causa}", file=sys.stderr)
        return ERROR_EJECUCION
    except (ValueError, LookupError) as ex:
        print(f"Error de validación: {ex}", file=sys.stderr)
        return ERROR_VALIDACION
    except (RuntimeError, OSError) as ex:
        print(f"Error de ejecución: {ex}", file=sys.stderr)
        return ERROR_EJECUCION


if __name__ == "__main__":
    sys.exit(main())
