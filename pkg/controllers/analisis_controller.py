"""
analisis_controller.py — Controlador HTTP sobre los mismos servicios que la CLI.

Las rutas de archivo del cuerpo se interpretan en el servidor.

Endpoints disponibles:
- POST /api/perfil     → Proporción de faltantes por factor y por proyecto
- POST /api/pesos      → Pesos RReliefF sobre un conjunto completo
- POST /api/expertos   → Puntajes expertos agregados y W de Kendall
- POST /api/pipeline   → Pipeline completo a partir de un manifiesto
"""

from pathlib import Path

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from config import get_settings
from modelos.manifiesto import ManifiestoEjecucion
from repositorios.repositorio_expertos import RepositorioExpertosCsv
from repositorios.repositorio_proyectos import RepositorioProyectosCsv
from servicios.errores import ErrorEtapa
from servicios.servicio_datos import perfilar_faltantes
from servicios.servicio_evaluacion import tabla_reporte
from servicios.servicio_expertos import (
    W_NO_DEFINIDO, agregar_puntajes_expertos, concordancia_expertos, w_definido,
)
from servicios.servicio_relief import rrelieff
from servicios.servicio_seleccion import ejecutar_pipeline


# Router de FastAPI (agrupa todos los endpoints bajo /api)
router = APIRouter(prefix="/api", tags=["Análisis"])


class SolicitudDatos(BaseModel):
    data: Path
    schema_: Path = Field(alias="schema")


class SolicitudPesos(SolicitudDatos):
    k: int | None = None
    m: int | None = None
    sigma: float | None = None
    seed: int | None = None


class SolicitudExpertos(BaseModel):
    experts: Path


class SolicitudPipeline(BaseModel):
    manifest: Path
    output_dir: Path
    jobs: int | None = None


def _error_http(ex: Exception) -> HTTPException:
    """Traduce excepciones del dominio al cuerpo de error {estado, mensaje, detalle}."""
    if isinstance(ex, ValueError):
        estado, mensaje = 400, "Parámetros inválidos."
    elif isinstance(ex, (LookupError, FileNotFoundError)):
        estado, mensaje = 404, "Recurso no encontrado."
    elif isinstance(ex, ErrorEtapa):
        estado, mensaje = 500, f"Falló la etapa '{ex.etapa}'."
    else:
        estado, mensaje = 500, "Error interno del servidor."
    return HTTPException(status_code=estado, detail={
        "estado": estado, "mensaje": mensaje, "detalle": str(ex)
    })


# =========================================================================
# POST /api/perfil: Perfil de faltantes
# =========================================================================

@router.post("/perfil")
def perfil(solicitud: SolicitudDatos):
    try:
        conjunto = RepositorioProyectosCsv().cargar_dataset(solicitud.data, solicitud.schema_)
        resultado = perfilar_faltantes(conjunto)
        return {
            "proyectos": len(conjunto),
            "factores": len(conjunto.independientes),
            "total": resultado.total,
            "por_factor": resultado.por_factor,
            "por_proyecto": resultado.por_registro,
        }
    except Exception as ex:
        raise _error_http(ex)


# =========================================================================
# POST /api/pesos: Pesos RReliefF
# =========================================================================

@router.post("/pesos")
def pesos(solicitud: SolicitudPesos):
    try:
        ajustes = get_settings()
        conjunto = RepositorioProyectosCsv().cargar_dataset(solicitud.data, solicitud.schema_)
        vector = rrelieff(
            conjunto,
            m=solicitud.m if solicitud.m is not None else ajustes.relief.m,
            k=solicitud.k if solicitud.k is not None else ajustes.relief.k,
            sigma=solicitud.sigma if solicitud.sigma is not None else ajustes.relief.sigma,
            semilla=solicitud.seed if solicitud.seed is not None else ajustes.seleccion.seed,
        )
        return {
            "m": vector.m, "k": vector.k, "sigma": vector.sigma, "semilla": vector.semilla,
            "objetivo_constante": vector.objetivo_constante,
            "pesos": [{"factor": f, "weight": w, "rank": r} for f, w, r in vector.ordenados()],
        }
    except Exception as ex:
        raise _error_http(ex)


# =========================================================================
# POST /api/expertos: Agregación y concordancia
# =========================================================================

@router.post("/expertos")
def expertos(solicitud: SolicitudExpertos):
    try:
        rankings = RepositorioExpertosCsv().cargar_rankings(solicitud.experts)
        puntajes = agregar_puntajes_expertos(rankings)
        acuerdo = concordancia_expertos(rankings) if w_definido(rankings) else None
        return {
            "expertos": list(rankings.expertos),
            "puntajes": puntajes,
            "kendall_w": acuerdo.w if acuerdo else None,
            "p": acuerdo.p if acuerdo else None,
            "nota": None if acuerdo else W_NO_DEFINIDO,
        }
    except Exception as ex:
        raise _error_http(ex)


# =========================================================================
# POST /api/pipeline: Corrida completa
# =========================================================================

@router.post("/pipeline")
def pipeline(solicitud: SolicitudPipeline):
    try:
        manifiesto = ManifiestoEjecucion.cargar(solicitud.manifest)
        resultado = ejecutar_pipeline(manifiesto, solicitud.output_dir, solicitud.jobs)
        return {
            "filas": tabla_reporte(resultado.reporte).to_dict(orient="records"),
            "conjuntos": {k: list(v.factores) for k, v in resultado.conjuntos.items()},
            "artefactos": [str(p) for p in resultado.artefactos],
        }
    except Exception as ex:
        raise _error_http(ex)
