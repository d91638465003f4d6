"""
expertos.py — Juicio experto: perfiles, rankings por categoría y
puntajes Likert de impacto, dificultad y controlabilidad.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field

from servicios.errores import ErrorValidacion

RANGO_MAXIMO: int = 5


class PerfilExperto(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    id: str = Field(alias="expert_id", min_length=1)
    rol: str = Field(alias="role")
    anios_experiencia: int = Field(alias="years_experience", ge=0)
    proyectos_realizados: int = Field(alias="projects_performed", ge=0)


@dataclass(frozen=True)
class RankingsExpertos:
    """experto → categoría → factor → rango (1 = más relevante).

    `expertos` puede incluir expertos sin ningún factor ordenado.
    """

    rankings: dict[str, dict[str, dict[str, int]]]
    expertos: tuple[str, ...] = field(default=())

    def __post_init__(self):
        todos = list(self.expertos)
        for experto in self.rankings:
            if experto not in todos:
                todos.append(experto)
        object.__setattr__(self, "expertos", tuple(todos))

        for experto, categorias in self.rankings.items():
            for categoria, rangos in categorias.items():
                if len(rangos) > RANGO_MAXIMO:
                    raise ErrorValidacion(
                        f"El experto '{experto}' ordenó más de {RANGO_MAXIMO} "
                        f"factores en la categoría '{categoria}'."
                    )
                valores = list(rangos.values())
                if any(not 1 <= r <= RANGO_MAXIMO for r in valores):
                    raise ErrorValidacion(
                        f"Rangos fuera de 1..{RANGO_MAXIMO} para '{experto}'/'{categoria}'."
                    )
                if len(set(valores)) != len(valores):
                    raise ErrorValidacion(
                        f"Rangos repetidos para '{experto}'/'{categoria}'."
                    )

    @property
    def factores(self) -> set[str]:
        return {
            factor
            for categorias in self.rankings.values()
            for rangos in categorias.values()
            for factor in rangos
        }

    def mejor_rango(self, experto: str, factor: str) -> int | None:
        """Rango más favorable del factor entre las categorías del experto."""
        rangos = [
            r[factor]
            for r in self.rankings.get(experto, {}).values()
            if factor in r
        ]
        return min(rangos) if rangos else None


class Criterios(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    impacto: int = Field(alias="impact", ge=1, le=5)
    dificultad: int = Field(alias="difficulty", ge=1, le=5)
    controlabilidad: int = Field(alias="controllability", ge=1, le=5)


@dataclass(frozen=True)
class PromedioCriterios:
    impacto: float
    dificultad: float
    controlabilidad: float


@dataclass(frozen=True)
class PuntajesCriterio:
    """experto → factor → Criterios."""

    puntajes: dict[str, dict[str, Criterios]]

    @property
    def factores(self) -> set[str]:
        return {f for por_factor in self.puntajes.values() for f in por_factor}

    def promedio(self, factor: str) -> PromedioCriterios | None:
        evaluaciones = [
            por_factor[factor]
            for por_factor in self.puntajes.values()
            if factor in por_factor
        ]
        if not evaluaciones:
            return None
        n = len(evaluaciones)
        return PromedioCriterios(
            impacto=sum(c.impacto for c in evaluaciones) / n,
            dificultad=sum(c.dificultad for c in evaluaciones) / n,
            controlabilidad=sum(c.controlabilidad for c in evaluaciones) / n,
        )


class Concordancia(NamedTuple):
    w: float
    p: float


class ConcordanciaPar(BaseModel):
    model_config = ConfigDict(frozen=True)

    metodo_a: str
    metodo_b: str
    w: float
    p_w: float
    tau: float
    p_tau: float


class ConcordanciaMetodos(BaseModel):
    """Acuerdo entre métodos sobre los factores compartidos de sus top-N."""

    model_config = ConfigDict(frozen=True)

    metodos: tuple[str, ...]
    factores: tuple[str, ...]
    w: float
    p: float
    pares: tuple[ConcordanciaPar, ...]
