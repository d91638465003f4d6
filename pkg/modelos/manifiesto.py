"""
manifiesto.py — Descripción completa y reproducible de una corrida.

Las rutas relativas se resuelven contra el directorio del manifiesto.
"""

import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from modelos.configuraciones import (
    ConfigEstimador, ConfigImputacion, ConfigKnn, ConfigOsr, ConfigRelief,
)
from modelos.seleccion import Procedencia
from servicios.errores import ErrorFormato, ErrorValidacion

RECETAS_POR_DEFECTO: tuple[str, ...] = (
    "FM", "FC", "FC_E25", "FC_R25", "FC_I25", "FM_R10",
)


class ConfigPoda(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    umbral_factor: float = Field(default=0.90, gt=0, le=1, alias="factor_threshold")
    umbral_proyecto: float = Field(default=0.55, gt=0, le=1, alias="project_threshold")


class ManifiestoEjecucion(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    datos: Path = Field(alias="data")
    esquema: Path = Field(alias="schema")
    rankings_expertos: Path = Field(alias="expert_rankings")
    puntajes_criterio: Path = Field(alias="criterion_scores")
    arbol: Path | None = Field(default=None, alias="tree")
    cuota_datos: float = Field(default=0.5, ge=0, le=1, alias="data_share")
    poda: ConfigPoda = Field(default_factory=ConfigPoda, alias="prune")
    imputacion: ConfigImputacion = Field(default_factory=ConfigImputacion, alias="imputation")
    relief: ConfigRelief = Field(default_factory=ConfigRelief)
    estimadores: tuple[ConfigEstimador, ...] = Field(
        default=(ConfigKnn(), ConfigOsr()), alias="estimators"
    )
    recetas: tuple[Procedencia, ...] = Field(
        default=tuple(Procedencia(r) for r in RECETAS_POR_DEFECTO), alias="factor_sets"
    )
    fraccion_superior: float = Field(default=0.25, gt=0, le=1, alias="top_fraction")
    fraccion_relevantes: float = Field(default=0.10, gt=0, le=1, alias="top_fraction_relevant")
    umbral_integrado: float = Field(default=0.5, ge=0, le=1, alias="integrated_threshold")
    fraccion_integrada: float | None = Field(
        default=None, gt=0, le=1, alias="integrated_top_fraction"
    )
    semilla: int = Field(default=0, alias="seed")
    trabajos: int = Field(default=1, ge=1, alias="jobs")

    @model_validator(mode="after")
    def _validar_recetas(self) -> "ManifiestoEjecucion":
        if not self.recetas:
            raise ValueError("El manifiesto no declara conjuntos de factores a evaluar.")
        if Procedencia.CUSTOM in self.recetas:
            raise ValueError("La receta 'custom' no se construye desde un manifiesto.")
        if len(set(self.recetas)) != len(self.recetas):
            raise ValueError("Recetas de conjuntos repetidas en el manifiesto.")
        return self

    @classmethod
    def cargar(cls, ruta: str | Path) -> "ManifiestoEjecucion":
        """Lee el JSON, resuelve rutas relativas y verifica que existan."""
        ruta = Path(ruta)
        try:
            crudo = json.loads(ruta.read_text(encoding="utf-8"))
        except json.JSONDecodeError as ex:
            raise ErrorFormato(f"Manifiesto JSON inválido '{ruta}': {ex}") from ex
        try:
            manifiesto = cls.model_validate(crudo)
        except ValidationError as ex:
            raise ErrorValidacion(f"Manifiesto inválido '{ruta}': {ex}") from ex
        return manifiesto.resuelto(ruta.parent)

    def resuelto(self, base: Path) -> "ManifiestoEjecucion":
        def absoluta(p: Path | None) -> Path | None:
            if p is None:
                return None
            return p if p.is_absolute() else (base / p)

        rutas = {
            "datos": absoluta(self.datos),
            "esquema": absoluta(self.esquema),
            "rankings_expertos": absoluta(self.rankings_expertos),
            "puntajes_criterio": absoluta(self.puntajes_criterio),
            "arbol": absoluta(self.arbol),
        }
        faltantes = [str(p) for p in rutas.values() if p is not None and not p.exists()]
        if faltantes:
            raise FileNotFoundError(f"Archivos del manifiesto inexistentes: {faltantes}")
        return self.model_copy(update=rutas)
