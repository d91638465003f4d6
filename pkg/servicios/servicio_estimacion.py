"""
servicio_estimacion.py — Estimación por analogía: k-NN y OSR.

Ambos estimadores entrenan sobre los registros con dependiente observada,
excluido el propio registro de la consulta, y escalan con los rangos de
ese conjunto de entrenamiento. Son funciones puras: LOOCV las invoca en
paralelo.
"""

import logging
from dataclasses import dataclass

import numpy as np

from modelos.configuraciones import ConfigKnn, ConfigOsr
from modelos.dataset import ConjuntoDatos, es_faltante
from modelos.estimacion import ConsultaEstimacion, PredicadoOsr, TrazaOsr
from servicios.errores import ErrorValidacion
from servicios.utilidades.distancia import distancias, escalar, orden_vecinos, rangos_observados

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Entrenamiento:
    factores: list[str]
    ids: list[str]
    matriz: np.ndarray
    objetivo: np.ndarray
    consulta: np.ndarray
    nominal: np.ndarray


def _preparar(conjunto: ConjuntoDatos, consulta: ConsultaEstimacion) -> _Entrenamiento:
    factores = list(consulta.conjunto.factores)
    consulta.conjunto.validar_contra(conjunto.independientes)

    faltan = [f for f in factores if es_faltante(consulta.registro.valor(f))]
    if faltan:
        raise ErrorValidacion(
            f"La consulta '{consulta.registro.id}' no tiene valor en factores activos: {faltan}."
        )

    entrenamiento = conjunto.con_registros(
        r for r in conjunto.registros
        if r.id != consulta.registro.id and not es_faltante(r.valor(conjunto.dependiente.nombre))
    )
    matriz = entrenamiento.matriz(factores)
    if np.isnan(matriz).any():
        raise ErrorValidacion("La estimación requiere factores activos completos (impute primero).")

    vector = np.array([
        conjunto.descriptor(f).codificar(consulta.registro.valor(f)) for f in factores
    ])
    return _Entrenamiento(
        factores=factores,
        ids=entrenamiento.ids,
        matriz=matriz,
        objetivo=entrenamiento.objetivo(),
        consulta=vector,
        nominal=entrenamiento.mascara_nominal(factores),
    )


# ================================================================
# k-NN
# ================================================================

def estimar_knn(conjunto: ConjuntoDatos, consulta: ConsultaEstimacion, k: int = 3) -> float:
    """Media simple de la dependiente de los k vecinos más cercanos.

    Empates en la k-ésima distancia: se prefieren ids menores.
    """
    if k < 1:
        raise ErrorValidacion(f"k debe ser positivo; se recibió {k}.")
    datos = _preparar(conjunto, consulta)
    n = len(datos.ids)
    if k > n:
        raise ErrorValidacion(f"k={k} excede los {n} proyectos con dependiente observada.")

    minimos, maximos = rangos_observados(datos.matriz)
    escalada = escalar(datos.matriz, datos.nominal, minimos, maximos)
    punto = escalar(datos.consulta[None, :], datos.nominal, minimos, maximos)[0]
    vecinos = orden_vecinos(distancias(punto, escalada, datos.nominal), datos.ids)[:k]
    logger.debug("k-NN %s: vecinos %s", consulta.registro.id, [datos.ids[v] for v in vecinos])
    return float(np.mean(datos.objetivo[vecinos]))


# ================================================================
# OSR (Optimized Set Reduction)
# ================================================================

def _entropia(clases: np.ndarray) -> float:
    if clases.size == 0:
        return 0.0
    _, cuentas = np.unique(clases, return_counts=True)
    p = cuentas / cuentas.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


def clases_equifrecuentes(valores: np.ndarray, n_clases: int) -> np.ndarray:
    """Clase de cada valor según cortes en los cuantiles j/n_clases."""
    cortes = np.unique(np.quantile(valores, np.linspace(0.0, 1.0, n_clases + 1)[1:-1]))
    return np.searchsorted(cortes, valores, side="left")


def _intervalos(columna: np.ndarray, n_intervalos: int) -> np.ndarray:
    """Cortes interiores de los cuantiles; el intervalo b es (corte[b-1], corte[b]]."""
    return np.unique(np.quantile(columna, np.linspace(0.0, 1.0, n_intervalos + 1)[1:-1]))


def estimar_osr(
    conjunto: ConjuntoDatos,
    consulta: ConsultaEstimacion,
    config: ConfigOsr = ConfigOsr(),
) -> tuple[float, TrazaOsr]:
    """Reduce el conjunto con predicados que cumple la consulta mientras la
    entropía de las clases de la dependiente baje estrictamente; predice la
    mediana del subconjunto terminal.
    """
    datos = _preparar(conjunto, consulta)
    n = len(datos.ids)
    if n == 0:
        raise ErrorValidacion("No hay proyectos con dependiente observada para OSR.")

    clases = clases_equifrecuentes(datos.objetivo, config.clases)
    descriptores = [conjunto.descriptor(f) for f in datos.factores]

    # Por factor: pertenencia de cada registro al predicado que cumple la consulta.
    candidatos: dict[str, tuple[np.ndarray, str | None, tuple[float, float] | None]] = {}
    for j, (factor, d) in enumerate(zip(datos.factores, descriptores)):
        columna = datos.matriz[:, j]
        if d.es_numerico:
            cortes = _intervalos(columna, config.intervalos)
            bandas = np.searchsorted(cortes, columna, side="left")
            banda = int(np.searchsorted(cortes, datos.consulta[j], side="left"))
            inferior = float(cortes[banda - 1]) if banda > 0 else float(min(columna.min(), datos.consulta[j]))
            superior = float(cortes[banda]) if banda < len(cortes) else float(max(columna.max(), datos.consulta[j]))
            candidatos[factor] = (bandas == banda, None, (inferior, superior))
        else:
            nivel = consulta.registro.valor(factor)
            candidatos[factor] = (columna == datos.consulta[j], str(nivel), None)

    subconjunto = np.ones(n, dtype=bool)
    dispersion = _entropia(clases)
    dispersion_inicial = dispersion
    predicados: list[PredicadoOsr] = []
    usados: set[str] = set()
    while dispersion > 0:
        mejor: tuple[float, str] | None = None
        for factor in sorted(set(candidatos) - usados):
            retenidos = subconjunto & candidatos[factor][0]
            tamano = int(retenidos.sum())
            if tamano < config.minimo_subconjunto or tamano >= int(subconjunto.sum()):
                continue
            clave = (_entropia(clases[retenidos]), factor)
            if mejor is None or clave < mejor:
                mejor = clave
        if mejor is None or mejor[0] >= dispersion:
            break

        dispersion, factor = mejor
        mascara, nivel, intervalo = candidatos[factor]
        subconjunto &= mascara
        usados.add(factor)
        predicados.append(PredicadoOsr(
            factor=factor, nivel=nivel, intervalo=intervalo,
            tamano_subconjunto=int(subconjunto.sum()), dispersion=dispersion,
        ))

    prediccion = float(np.median(datos.objetivo[subconjunto]))
    traza = TrazaOsr(
        id_consulta=consulta.registro.id,
        tamano_inicial=n,
        dispersion_inicial=dispersion_inicial,
        predicados=tuple(predicados),
        ids_terminales=tuple(i for i, dentro in zip(datos.ids, subconjunto) if dentro),
        prediccion=prediccion,
    )
    logger.debug("OSR %s: %d predicados, %d terminales",
                 consulta.registro.id, len(predicados), len(traza.ids_terminales))
    return prediccion, traza


# ================================================================
# ADAPTADORES (IEstimador)
# ================================================================

class EstimadorKnn:
    def __init__(self, config: ConfigKnn = ConfigKnn()):
        self.config = config

    @property
    def nombre(self) -> str:
        return self.config.nombre

    def estimar(self, conjunto: ConjuntoDatos,
                consulta: ConsultaEstimacion) -> tuple[float, TrazaOsr | None]:
        return estimar_knn(conjunto, consulta, self.config.k), None


class EstimadorOsr:
    def __init__(self, config: ConfigOsr = ConfigOsr()):
        self.config = config

    @property
    def nombre(self) -> str:
        return self.config.nombre

    def estimar(self, conjunto: ConjuntoDatos,
                consulta: ConsultaEstimacion) -> tuple[float, TrazaOsr | None]:
        return estimar_osr(conjunto, consulta, self.config)
