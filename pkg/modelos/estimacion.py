"""Consultas de estimación y traza de la reducción OSR."""

from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from modelos.dataset import RegistroProyecto
from modelos.seleccion import ConjuntoFactores


@dataclass(frozen=True)
class ConsultaEstimacion:
    """Proyecto a estimar (la dependiente se ignora) y factores activos."""

    registro: RegistroProyecto
    conjunto: ConjuntoFactores


class PredicadoOsr(BaseModel):
    model_config = ConfigDict(frozen=True)

    factor: str
    nivel: str | None = None
    # (límite inferior, límite superior] del intervalo de cuantiles
    intervalo: tuple[float, float] | None = None
    tamano_subconjunto: int = Field(ge=1)
    dispersion: float = Field(ge=0.0)


class TrazaOsr(BaseModel):
    model_config = ConfigDict(frozen=True)

    id_consulta: str
    tamano_inicial: int
    dispersion_inicial: float
    predicados: tuple[PredicadoOsr, ...] = ()
    ids_terminales: tuple[str, ...] = ()
    prediccion: float
