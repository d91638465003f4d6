"""
i_repositorio_proyectos.py — Contrato (interfaz) para acceso a datos de proyectos.

Define QUÉ operaciones ofrece un repositorio de proyectos, sin importar
el formato de almacenamiento. Cualquier clase que implemente estos
métodos puede usarse, sin necesidad de heredar.
"""

from pathlib import Path
from typing import Protocol

from modelos.dataset import ConjuntoDatos, DescriptorFactor


class IRepositorioProyectos(Protocol):

    def cargar_esquema(self, ruta_esquema: Path) -> dict[str, DescriptorFactor]:
        """Lee el esquema: columna → descriptor."""
        ...

    def cargar_dataset(self, ruta_datos: Path, ruta_esquema: Path) -> ConjuntoDatos:
        """Lee y valida datos + esquema. Las celdas faltantes quedan explícitas."""
        ...

    def guardar_dataset(self, conjunto: ConjuntoDatos, ruta_datos: Path) -> Path:
        """Escribe el conjunto con el mismo formato que lee cargar_dataset."""
        ...
