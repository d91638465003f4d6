"""Parámetros de imputación, RReliefF y estimadores."""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field


class _Config(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class ConfigImputacion(_Config):
    """k donantes; la distancia es siempre la heterogénea Euclídea/solapamiento."""

    k: int = Field(default=5, ge=1)


class ConfigRelief(_Config):
    # m=None → barrido completo (m = n) en orden determinista
    m: int | None = Field(default=None, ge=1)
    k: int = Field(default=10, ge=1)
    sigma: float = Field(default=20.0, gt=0)


class ConfigKnn(_Config):
    tipo: Literal["knn"] = Field(default="knn", alias="type")
    k: int = Field(default=3, ge=1)

    @property
    def nombre(self) -> str:
        return "k-NN"


class ConfigOsr(_Config):
    """Optimized Set Reduction: discretización, clases y tamaño mínimo."""

    tipo: Literal["osr"] = Field(default="osr", alias="type")
    intervalos: int = Field(default=4, ge=2, alias="bins")
    clases: int = Field(default=3, ge=2, alias="classes")
    minimo_subconjunto: int = Field(default=5, ge=2, alias="min_subset")

    @property
    def nombre(self) -> str:
        return "OSR"


ConfigEstimador = Annotated[Union[ConfigKnn, ConfigOsr], Field(discriminator="tipo")]
