"""
dataset.py — Modelo tipado del repositorio de proyectos.

Un ConjuntoDatos agrupa los descriptores de factores (esquema) y los
registros de proyectos. Es inmutable: toda operación devuelve uno nuevo.

Escalas soportadas:
- continuous: número real
- integer:    número entero
- ordinal:    nivel de una lista ordenada (se codifica 0..L-1)
- nominal:    nivel de una lista sin orden
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from servicios.errores import ErrorValidacion


# ================================================================
# VALOR FALTANTE
# ================================================================

class _Faltante:
    """Marcador único de celda faltante ("?" en los archivos)."""

    _instancia = None

    def __new__(cls):
        if cls._instancia is None:
            cls._instancia = super().__new__(cls)
        return cls._instancia

    def __repr__(self) -> str:
        return "?"

    def __bool__(self) -> bool:
        return False


FALTANTE = _Faltante()

Valor = float | int | str | _Faltante


def es_faltante(valor: object) -> bool:
    return valor is FALTANTE


# ================================================================
# DESCRIPTORES
# ================================================================

class Escala(str, Enum):
    CONTINUA = "continuous"
    ENTERA = "integer"
    ORDINAL = "ordinal"
    NOMINAL = "nominal"


class Rol(str, Enum):
    INDEPENDIENTE = "independent"
    DEPENDIENTE = "dependent"
    IDENTIFICADOR = "identifier"
    TAMANO = "size"


class Categoria(str, Enum):
    PROYECTO = "project"
    PROCESO = "process"
    PERSONAL = "personnel"
    PRODUCTO = "product"
    CONTEXTO = "context"


class DescriptorFactor(BaseModel):
    """Describe una columna del repositorio: escala, rol y categoría."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    nombre: str = Field(min_length=1)
    escala: Escala = Field(alias="scale")
    rol: Rol = Field(alias="role")
    categoria: Categoria | None = Field(default=None, alias="category")
    niveles: tuple[str, ...] = Field(default=(), alias="levels")

    @model_validator(mode="after")
    def _validar_niveles(self) -> "DescriptorFactor":
        # El identificador vive en RegistroProyecto.id, no en los valores.
        if self.rol == Rol.IDENTIFICADOR:
            return self
        if self.escala in (Escala.ORDINAL, Escala.NOMINAL):
            if len(self.niveles) < 2:
                raise ValueError(
                    f"El factor '{self.nombre}' ({self.escala.value}) "
                    f"debe declarar al menos 2 niveles."
                )
            if len(set(self.niveles)) != len(self.niveles):
                raise ValueError(f"Niveles repetidos en '{self.nombre}'.")
        elif self.niveles:
            raise ValueError(
                f"El factor numérico '{self.nombre}' no admite niveles."
            )
        return self

    @property
    def es_numerico(self) -> bool:
        return self.escala in (Escala.CONTINUA, Escala.ENTERA)

    @property
    def es_nominal(self) -> bool:
        return self.escala == Escala.NOMINAL

    def codificar(self, valor: Valor) -> float:
        """Valor → número (ordinal/nominal → índice del nivel, faltante → NaN)."""
        if es_faltante(valor):
            return float("nan")
        if self.es_numerico:
            return float(valor)
        return float(self.niveles.index(valor))

    def conforma(self, valor: Valor) -> bool:
        if es_faltante(valor):
            return True
        if self.escala == Escala.CONTINUA:
            return (isinstance(valor, (int, float)) and not isinstance(valor, bool)
                    and math.isfinite(valor))
        if self.escala == Escala.ENTERA:
            return isinstance(valor, int) and not isinstance(valor, bool)
        return isinstance(valor, str) and valor in self.niveles


# ================================================================
# REGISTROS Y CONJUNTO DE DATOS
# ================================================================

@dataclass(frozen=True)
class RegistroProyecto:
    id: str
    valores: Mapping[str, Valor]

    def valor(self, factor: str) -> Valor:
        return self.valores.get(factor, FALTANTE)


@dataclass(frozen=True)
class PerfilFaltantes:
    """Proporciones de celdas faltantes sobre factores independientes."""

    por_factor: dict[str, float]
    por_registro: dict[str, float]
    total: float


@dataclass(frozen=True)
class ConjuntoDatos:
    descriptores: tuple[DescriptorFactor, ...]
    registros: tuple[RegistroProyecto, ...]
    _indice: dict[str, DescriptorFactor] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "descriptores", tuple(self.descriptores))
        object.__setattr__(self, "registros", tuple(self.registros))

        indice: dict[str, DescriptorFactor] = {}
        for d in self.descriptores:
            if d.nombre in indice:
                raise ErrorValidacion(f"Factor duplicado en el esquema: '{d.nombre}'.")
            indice[d.nombre] = d
        object.__setattr__(self, "_indice", indice)

        dependientes = [d for d in self.descriptores if d.rol == Rol.DEPENDIENTE]
        if len(dependientes) > 1:
            raise ErrorValidacion(
                "El esquema declara más de una variable dependiente: "
                f"{[d.nombre for d in dependientes]}."
            )

        vistos: set[str] = set()
        for registro in self.registros:
            if registro.id in vistos:
                raise ErrorValidacion(f"Id de proyecto duplicado: '{registro.id}'.")
            vistos.add(registro.id)
            self._validar_registro(registro)

    def _validar_registro(self, registro: RegistroProyecto) -> None:
        for nombre, valor in registro.valores.items():
            descriptor = self._indice.get(nombre)
            if descriptor is None:
                raise ErrorValidacion(
                    f"El registro '{registro.id}' contiene el factor "
                    f"desconocido '{nombre}'."
                )
            if not descriptor.conforma(valor):
                raise ErrorValidacion(
                    f"Valor {valor!r} del factor '{nombre}' en el registro "
                    f"'{registro.id}' no conforma la escala "
                    f"{descriptor.escala.value}."
                )
            if (descriptor.rol == Rol.DEPENDIENTE and not es_faltante(valor)
                    and float(valor) <= 0):
                raise ErrorValidacion(
                    f"La variable dependiente '{nombre}' debe ser positiva "
                    f"(registro '{registro.id}', valor {valor!r})."
                )

    # --- Consultas ---

    def descriptor(self, nombre: str) -> DescriptorFactor:
        try:
            return self._indice[nombre]
        except KeyError:
            raise ErrorValidacion(f"Factor inexistente: '{nombre}'.") from None

    @property
    def independientes(self) -> list[str]:
        return [d.nombre for d in self.descriptores if d.rol == Rol.INDEPENDIENTE]

    @property
    def dependiente(self) -> DescriptorFactor:
        for d in self.descriptores:
            if d.rol == Rol.DEPENDIENTE:
                return d
        raise ErrorValidacion("El conjunto de datos no declara variable dependiente.")

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.registros]

    def __len__(self) -> int:
        return len(self.registros)

    def matriz(self, factores: Iterable[str] | None = None) -> np.ndarray:
        """Matriz registros × factores codificada; NaN en celdas faltantes."""
        nombres = list(self.independientes if factores is None else factores)
        descriptores = [self.descriptor(n) for n in nombres]
        matriz = np.empty((len(self.registros), len(nombres)), dtype=float)
        for i, registro in enumerate(self.registros):
            for j, d in enumerate(descriptores):
                matriz[i, j] = d.codificar(registro.valor(d.nombre))
        return matriz

    def mascara_nominal(self, factores: Iterable[str] | None = None) -> np.ndarray:
        nombres = list(self.independientes if factores is None else factores)
        return np.array([self.descriptor(n).es_nominal for n in nombres], dtype=bool)

    def objetivo(self) -> np.ndarray:
        """Valores de la variable dependiente (NaN si faltan)."""
        d = self.dependiente
        return np.array([d.codificar(r.valor(d.nombre)) for r in self.registros])

    # --- Derivaciones (siempre devuelven un conjunto nuevo) ---

    def con_registros(self, registros: Iterable[RegistroProyecto]) -> "ConjuntoDatos":
        return ConjuntoDatos(self.descriptores, tuple(registros))

    def sin_registro(self, id_registro: str) -> "ConjuntoDatos":
        return self.con_registros(r for r in self.registros if r.id != id_registro)

    def sin_factores(self, factores: Iterable[str]) -> "ConjuntoDatos":
        quitar = set(factores)
        descriptores = tuple(d for d in self.descriptores if d.nombre not in quitar)
        registros = tuple(
            RegistroProyecto(
                r.id, {k: v for k, v in r.valores.items() if k not in quitar}
            )
            for r in self.registros
        )
        return ConjuntoDatos(descriptores, registros)

    def registro(self, id_registro: str) -> RegistroProyecto:
        for r in self.registros:
            if r.id == id_registro:
                return r
        raise LookupError(f"No existe el proyecto '{id_registro}'.")
