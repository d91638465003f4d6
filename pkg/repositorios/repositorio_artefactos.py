"""
repositorio_artefactos.py — Escritura de resultados en el directorio de salida.

Nombres fijos: weights.csv, ranking.csv, report.csv, report.json,
sets.json, scores.csv y trace/ (una traza OSR por fold). Todas las
salidas son deterministas: mismo contenido → mismos bytes.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Mapping, Sequence

import pandas as pd

from modelos.evaluacion import ReporteEvaluacion
from modelos.mcda import RankingPreferencias
from modelos.seleccion import ConjuntoFactores, VectorPesos
from servicios.servicio_evaluacion import tabla_reporte

logger = logging.getLogger(__name__)

ARCHIVO_PESOS = "weights.csv"
ARCHIVO_RANKING = "ranking.csv"
ARCHIVO_PUNTAJES = "scores.csv"
ARCHIVO_REPORTE_CSV = "report.csv"
ARCHIVO_REPORTE_JSON = "report.json"
ARCHIVO_CONJUNTOS = "sets.json"
DIRECTORIO_TRAZAS = "trace"


def _nombre_seguro(texto: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", texto)


class RepositorioArtefactos:
    """Escribe artefactos bajo un único directorio de salida."""

    def __init__(self, directorio: Path):
        self.directorio = Path(directorio)
        self.directorio.mkdir(parents=True, exist_ok=True)

    # --- Métodos auxiliares ---

    def _csv(self, tabla: pd.DataFrame, nombre: str) -> Path:
        ruta = self.directorio / nombre
        tabla.to_csv(ruta, index=False, lineterminator="\n")
        logger.info("Escrito %s", ruta)
        return ruta

    def _json(self, contenido: Any, ruta: Path) -> Path:
        ruta.parent.mkdir(parents=True, exist_ok=True)
        ruta.write_text(json.dumps(contenido, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        logger.info("Escrito %s", ruta)
        return ruta

    # --- Operaciones ---

    def guardar_pesos(self, vector: VectorPesos) -> Path:
        """factor,weight,rank por peso descendente."""
        tabla = pd.DataFrame(vector.ordenados(), columns=["factor", "weight", "rank"])
        return self._csv(tabla, ARCHIVO_PESOS)

    def guardar_ranking(self, ranking: RankingPreferencias) -> Path:
        tabla = pd.DataFrame(
            [(e.nombre, e.preferencia, e.rango) for e in ranking.entradas],
            columns=["factor", "preference", "rank"],
        )
        return self._csv(tabla, ARCHIVO_RANKING)

    def guardar_puntajes(self, puntajes: Mapping[str, float]) -> Path:
        orden = sorted(puntajes, key=lambda f: (-puntajes[f], f))
        tabla = pd.DataFrame([(f, puntajes[f]) for f in orden], columns=["factor", "score"])
        return self._csv(tabla, ARCHIVO_PUNTAJES)

    def guardar_conjuntos(self, conjuntos: Sequence[ConjuntoFactores],
                          extra: Mapping[str, Any] | None = None) -> Path:
        contenido: dict[str, Any] = {
            "sets": [
                {"label": c.etiqueta, "provenance": c.procedencia.value, "factors": list(c.factores)}
                for c in conjuntos
            ],
        }
        contenido.update(extra or {})
        return self._json(contenido, self.directorio / ARCHIVO_CONJUNTOS)

    def guardar_reporte(self, reporte: ReporteEvaluacion,
                        extra: Mapping[str, Any] | None = None) -> list[Path]:
        """report.csv (filas), report.json (estructura completa sin trazas) y trace/."""
        rutas = [self._csv(tabla_reporte(reporte), ARCHIVO_REPORTE_CSV)]

        sin_trazas = {"filas": {"__all__": {"registros": {"__all__": {"traza"}}}}}
        contenido = json.loads(reporte.model_dump_json(exclude=sin_trazas))
        contenido.update(extra or {})
        rutas.append(self._json(contenido, self.directorio / ARCHIVO_REPORTE_JSON))

        for fila in reporte.filas:
            for registro in fila.registros:
                if registro.traza is None:
                    continue
                nombre = _nombre_seguro(f"{fila.estimador}_{fila.conjunto}_{registro.id_proyecto}.json")
                rutas.append(self._json(
                    registro.traza.model_dump(mode="json"), self.directorio / DIRECTORIO_TRAZAS / nombre,
                ))
        return rutas

    def guardar_traza(self, traza_json: Mapping[str, Any], nombre: str) -> Path:
        return self._json(dict(traza_json), self.directorio / DIRECTORIO_TRAZAS / _nombre_seguro(nombre))
