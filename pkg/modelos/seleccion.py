"""Pesos de relevancia y conjuntos de factores con su procedencia."""

from dataclasses import dataclass
from enum import Enum

from servicios.errores import ErrorValidacion


class Procedencia(str, Enum):
    FM = "FM"            # factores con datos de medición
    FM_R = "FM_R"        # peso RReliefF > 0
    FM_R10 = "FM_R10"    # 10% más relevante de FM_R
    FE = "FE"            # nombrados por expertos
    FI = "FI"            # selección integrada (AvalOn)
    FT = "FT"            # FM ∪ FE
    FC = "FC"            # FM ∩ FE
    FC_E25 = "FC_E25"
    FC_R25 = "FC_R25"
    FC_I25 = "FC_I25"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ConjuntoFactores:
    etiqueta: str
    factores: tuple[str, ...]
    procedencia: Procedencia = Procedencia.CUSTOM

    def __post_init__(self):
        object.__setattr__(self, "factores", tuple(self.factores))
        if not self.factores:
            raise ErrorValidacion(f"El conjunto de factores '{self.etiqueta}' está vacío.")
        if len(set(self.factores)) != len(self.factores):
            raise ErrorValidacion(f"Factores repetidos en '{self.etiqueta}'.")

    @property
    def como_conjunto(self) -> frozenset[str]:
        return frozenset(self.factores)

    def __len__(self) -> int:
        return len(self.factores)

    def validar_contra(self, disponibles: list[str]) -> None:
        ajenos = sorted(self.como_conjunto - set(disponibles))
        if ajenos:
            raise ErrorValidacion(
                f"El conjunto '{self.etiqueta}' contiene factores sin datos: {ajenos}."
            )


@dataclass(frozen=True)
class VectorPesos:
    """Pesos RReliefF en [-1, 1] por factor independiente, con metadatos de la corrida."""

    pesos: dict[str, float]
    m: int
    k: int
    sigma: float
    semilla: int
    objetivo_constante: bool = False

    def ordenados(self) -> list[tuple[str, float, int]]:
        """(factor, peso, rango) por peso descendente; empates por nombre."""
        orden = sorted(self.pesos.items(), key=lambda par: (-par[1], par[0]))
        return [(f, w, i + 1) for i, (f, w) in enumerate(orden)]
