"""
mcda.py — Árbol de decisión jerárquico (meta-modelo AvalOn).

Tipos de nodo y transiciones permitidas:
- root      → directory | criterion
- directory → directory | criterion
- criterion → model | criterion
- model     → (hoja, con una función de valor sobre una métrica)

pref_i(a) = Σ_{j ∈ hijos(i)} w_j · pref_j(a), con Σ w_j = 1 entre hermanos.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

TOLERANCIA_PESOS: float = 1e-9


class TipoNodo(str, Enum):
    RAIZ = "root"
    DIRECTORIO = "directory"
    CRITERIO = "criterion"
    MODELO = "model"


_HIJOS_PERMITIDOS: dict[TipoNodo, set[TipoNodo]] = {
    TipoNodo.RAIZ: {TipoNodo.DIRECTORIO, TipoNodo.CRITERIO},
    TipoNodo.DIRECTORIO: {TipoNodo.DIRECTORIO, TipoNodo.CRITERIO},
    TipoNodo.CRITERIO: {TipoNodo.MODELO, TipoNodo.CRITERIO},
    TipoNodo.MODELO: set(),
}


def _clave_categoria(valor: float | int | str) -> str:
    if isinstance(valor, float) and valor.is_integer():
        return str(int(valor))
    return str(valor)


class FuncionValor(BaseModel):
    """val: lineal por tramos (extrapolación constante) o categórica."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    puntos: tuple[tuple[float, float], ...] | None = Field(default=None, alias="points")
    categorias: dict[str, float] | None = Field(default=None, alias="categories")
    defecto: float | None = Field(default=None, alias="default")

    @model_validator(mode="after")
    def _validar(self) -> "FuncionValor":
        if (self.puntos is None) == (self.categorias is None):
            raise ValueError("val debe definir 'points' o 'categories' (solo uno).")
        if self.puntos is not None:
            if not self.puntos:
                raise ValueError("val lineal sin puntos.")
            if self.defecto is not None:
                raise ValueError("'default' solo aplica a val categórica.")
            xs = [x for x, _ in self.puntos]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError(f"Los puntos de val deben ser estrictamente crecientes en x: {xs}.")
            salidas = [y for _, y in self.puntos]
        else:
            if self.defecto is None:
                raise ValueError("val categórica requiere 'default'.")
            salidas = list(self.categorias.values()) + [self.defecto]
        if any(not 0.0 <= y <= 1.0 for y in salidas):
            raise ValueError(f"Las salidas de val deben estar en [0, 1]: {salidas}.")
        return self

    @property
    def es_categorica(self) -> bool:
        return self.categorias is not None

    def __call__(self, valor: float | int | str) -> float:
        if self.categorias is not None:
            return self.categorias.get(_clave_categoria(valor), self.defecto)
        if isinstance(valor, str):
            raise ValueError(f"val lineal recibió un valor categórico: {valor!r}.")
        xs = [x for x, _ in self.puntos]
        ys = [y for _, y in self.puntos]
        return float(np.interp(float(valor), xs, ys))


class ModeloMetrica(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    metrica: str = Field(alias="metric", min_length=1)
    val: FuncionValor


class NodoMcda(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    tipo: TipoNodo = Field(alias="kind")
    nombre: str = Field(default="", alias="name")
    peso: float | None = Field(default=None, alias="weight", ge=0.0, le=1.0)
    bloqueado: bool = Field(default=False, alias="lock")
    hijos: tuple["NodoMcda", ...] = Field(default=(), alias="children")
    modelo: ModeloMetrica | None = Field(default=None, alias="model")

    @model_validator(mode="after")
    def _validar_estructura(self) -> "NodoMcda":
        etiqueta = self.nombre or self.tipo.value
        if self.tipo == TipoNodo.MODELO:
            if self.hijos or self.modelo is None:
                raise ValueError(f"El nodo modelo '{etiqueta}' debe ser hoja y definir 'model'.")
            return self

        if self.modelo is not None:
            raise ValueError(f"Solo los nodos modelo definen 'model' ('{etiqueta}').")
        if not self.hijos:
            raise ValueError(f"El nodo '{etiqueta}' ({self.tipo.value}) requiere al menos un hijo.")

        permitidos = _HIJOS_PERMITIDOS[self.tipo]
        for hijo in self.hijos:
            if hijo.tipo not in permitidos:
                raise ValueError(
                    f"Transición inválida: {self.tipo.value} → {hijo.tipo.value} "
                    f"en '{etiqueta}'."
                )
            if hijo.peso is None:
                raise ValueError(f"El hijo '{hijo.nombre or hijo.tipo.value}' de '{etiqueta}' no tiene peso.")

        suma = sum(h.peso for h in self.hijos)
        if abs(suma - 1.0) > TOLERANCIA_PESOS:
            raise ValueError(f"Los pesos bajo '{etiqueta}' suman {suma!r}, no 1.")
        return self

    @property
    def peso_efectivo(self) -> float:
        return 1.0 if self.peso is None else self.peso

    def metricas(self) -> set[str]:
        if self.modelo is not None:
            return {self.modelo.metrica}
        return set().union(*(h.metricas() for h in self.hijos))


NodoMcda.model_rebuild()


@dataclass(frozen=True)
class Alternativa:
    """Un factor candidato y los valores de sus métricas."""

    nombre: str
    metricas: dict[str, float | str]


@dataclass(frozen=True)
class EntradaPreferencia:
    nombre: str
    preferencia: float
    rango: int


@dataclass(frozen=True)
class RankingPreferencias:
    entradas: tuple[EntradaPreferencia, ...]
    regla_desempate: str = "preferencia descendente; empates por nombre"

    def orden(self) -> list[str]:
        return [e.nombre for e in self.entradas]

    def preferencias(self) -> dict[str, float]:
        return {e.nombre: e.preferencia for e in self.entradas}
