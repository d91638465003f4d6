"""Fixtures compartidas: rutas de datos empaquetados y construcción de conjuntos."""

from pathlib import Path
from typing import Mapping, Sequence

import pytest

from modelos.dataset import (
    FALTANTE, ConjuntoDatos, DescriptorFactor, Escala, RegistroProyecto, Rol,
)

RAIZ = Path(__file__).resolve().parents[1]
DATOS = RAIZ / "datos"
SINTETICO = DATOS / "sintetico"


def conjunto_desde(
    factores: Mapping[str, Sequence],
    objetivo: Sequence[float] | None,
    escalas: Mapping[str, str] | None = None,
    niveles: Mapping[str, Sequence[str]] | None = None,
    ids: Sequence[str] | None = None,
) -> ConjuntoDatos:
    """Columnas → ConjuntoDatos; "?" marca faltantes, la escala por defecto es continua."""
    escalas = dict(escalas or {})
    niveles = dict(niveles or {})
    n = len(next(iter(factores.values())))
    ids = list(ids) if ids is not None else [f"R{i:02d}" for i in range(n)]

    descriptores = [
        DescriptorFactor(
            nombre=nombre, escala=Escala(escalas.get(nombre, "continuous")),
            rol=Rol.INDEPENDIENTE, niveles=tuple(niveles.get(nombre, ())),
        )
        for nombre in factores
    ]
    if objetivo is not None:
        descriptores.append(DescriptorFactor(nombre="y", escala=Escala.CONTINUA, rol=Rol.DEPENDIENTE))

    def convertir(d: DescriptorFactor, valor):
        if isinstance(valor, str) and valor == "?":
            return FALTANTE
        if d.escala == Escala.CONTINUA:
            return float(valor)
        if d.escala == Escala.ENTERA:
            return int(valor)
        return valor

    registros = []
    for i in range(n):
        valores = {d.nombre: convertir(d, factores[d.nombre][i]) for d in descriptores if d.nombre in factores}
        if objetivo is not None:
            valores["y"] = convertir(descriptores[-1], objetivo[i])
        registros.append(RegistroProyecto(ids[i], valores))
    return ConjuntoDatos(tuple(descriptores), tuple(registros))


@pytest.fixture
def fabrica_conjunto():
    return conjunto_desde


@pytest.fixture
def manifiesto_sintetico() -> Path:
    return SINTETICO / "manifiesto.json"


@pytest.fixture
def rutas_sinteticas() -> dict[str, Path]:
    return {
        "datos": SINTETICO / "proyectos.csv",
        "esquema": SINTETICO / "esquema.json",
        "rankings": SINTETICO / "rankings_expertos.csv",
        "puntajes": SINTETICO / "puntajes_criterio.csv",
        "completo": SINTETICO / "completo.csv",
        "esquema_completo": SINTETICO / "esquema_completo.json",
        "perfiles": DATOS / "expertos_perfiles.csv",
        "rangos_compartidos": DATOS / "rangos_factores_compartidos.csv",
    }


@pytest.fixture
def directorio_sintetico() -> Path:
    return SINTETICO
