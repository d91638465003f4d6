"""Contrato para los estimadores por analogía."""

from typing import Protocol

from modelos.dataset import ConjuntoDatos
from modelos.estimacion import ConsultaEstimacion, TrazaOsr


class IEstimador(Protocol):
    """Estima la variable dependiente de una consulta a partir de un conjunto completo."""

    @property
    def nombre(self) -> str:
        ...

    def estimar(self, conjunto: ConjuntoDatos,
                consulta: ConsultaEstimacion) -> tuple[float, TrazaOsr | None]:
        ...
