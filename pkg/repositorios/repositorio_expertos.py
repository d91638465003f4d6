"""
repositorio_expertos.py — Lectura de rankings, puntajes Likert y perfiles.

Formatos (CSV con encabezado):
- rankings:  expert_id,category,factor,rank
- puntajes:  expert_id,factor,impact,difficulty,controllability
- perfiles:  expert_id,role,years_experience,projects_performed
"""

import logging
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from modelos.dataset import Categoria
from modelos.expertos import Criterios, PerfilExperto, PuntajesCriterio, RankingsExpertos
from servicios.errores import ErrorFormato, ErrorValidacion

logger = logging.getLogger(__name__)


class RepositorioExpertosCsv:

    def _leer(self, ruta: Path, columnas: list[str]) -> pd.DataFrame:
        ruta = Path(ruta)
        try:
            tabla = pd.read_csv(ruta, dtype=str, keep_default_na=False)
        except pd.errors.ParserError as ex:
            raise ErrorFormato(f"CSV mal formado '{ruta}': {ex}") from ex
        except pd.errors.EmptyDataError as ex:
            raise ErrorFormato(f"El archivo '{ruta}' está vacío.") from ex
        if list(tabla.columns) != columnas:
            raise ErrorFormato(
                f"Encabezado de '{ruta.name}' debe ser {','.join(columnas)}; "
                f"se encontró {','.join(tabla.columns)}."
            )
        vacias = tabla.eq("").any(axis=1)
        if vacias.any():
            # +2: encabezado y numeración desde 1
            raise ErrorFormato("Celda vacía.", int(vacias.idxmax()) + 2)
        return tabla

    def _entero(self, texto: str, campo: str, fila: int) -> int:
        try:
            return int(texto)
        except ValueError:
            raise ErrorFormato(f"'{campo}' debe ser entero, se leyó '{texto}'.", fila) from None

    def cargar_rankings(self, ruta: Path) -> RankingsExpertos:
        tabla = self._leer(ruta, ["expert_id", "category", "factor", "rank"])
        rankings: dict[str, dict[str, dict[str, int]]] = {}
        categorias_validas = {c.value for c in Categoria}
        for i, fila in enumerate(tabla.itertuples(index=False), start=2):
            if fila.category not in categorias_validas:
                raise ErrorFormato(
                    f"Categoría '{fila.category}' desconocida; "
                    f"opciones: {sorted(categorias_validas)}.", i,
                )
            por_categoria = rankings.setdefault(fila.expert_id, {}).setdefault(fila.category, {})
            if fila.factor in por_categoria:
                raise ErrorFormato(
                    f"El experto '{fila.expert_id}' ordenó '{fila.factor}' dos veces "
                    f"en '{fila.category}'.", i,
                )
            por_categoria[fila.factor] = self._entero(fila.rank, "rank", i)
        logger.info("Rankings de %d expertos leídos desde '%s'", len(rankings), ruta)
        return RankingsExpertos(rankings)

    def cargar_puntajes(self, ruta: Path) -> PuntajesCriterio:
        tabla = self._leer(
            ruta, ["expert_id", "factor", "impact", "difficulty", "controllability"]
        )
        puntajes: dict[str, dict[str, Criterios]] = {}
        for i, fila in enumerate(tabla.itertuples(index=False), start=2):
            por_factor = puntajes.setdefault(fila.expert_id, {})
            if fila.factor in por_factor:
                raise ErrorFormato(
                    f"Puntaje repetido para '{fila.expert_id}'/'{fila.factor}'.", i
                )
            try:
                por_factor[fila.factor] = Criterios(
                    impacto=self._entero(fila.impact, "impact", i),
                    dificultad=self._entero(fila.difficulty, "difficulty", i),
                    controlabilidad=self._entero(fila.controllability, "controllability", i),
                )
            except ValidationError as ex:
                raise ErrorValidacion(f"Fila {i}: puntajes Likert fuera de 1..5: {ex}") from ex
        return PuntajesCriterio(puntajes)

    def cargar_perfiles(self, ruta: Path) -> list[PerfilExperto]:
        tabla = self._leer(
            ruta, ["expert_id", "role", "years_experience", "projects_performed"]
        )
        perfiles: list[PerfilExperto] = []
        for i, fila in enumerate(tabla.to_dict(orient="records"), start=2):
            try:
                perfiles.append(PerfilExperto.model_validate(fila))
            except ValidationError as ex:
                raise ErrorValidacion(f"Fila {i}: perfil de experto inválido: {ex}") from ex
        ids = [p.id for p in perfiles]
        if len(set(ids)) != len(ids):
            raise ErrorValidacion(f"Ids de experto repetidos: {ids}.")
        return perfiles
