"""
servicio_relief.py — Pesos de relevancia RReliefF para objetivo continuo.

Para cada instancia R_i y sus k vecinos I_j (influencia d(i,j) ∝
exp(−(rango_j/σ)²), normalizada por instancia) se acumulan:

    N_dC       += diff(τ, R_i, I_j) · d(i,j)
    N_dA[f]    += diff(f, R_i, I_j) · d(i,j)
    N_dCdA[f]  += diff(τ, R_i, I_j) · diff(f, R_i, I_j) · d(i,j)

    W[f] = N_dCdA[f]/N_dC − (N_dA[f] − N_dCdA[f])/(m' − N_dC)

con m' la influencia total acumulada. Las diferencias numéricas se
normalizan por el rango observado; las nominales valen 0/1.
"""

import logging
import math
from typing import Mapping

import numpy as np

from modelos.dataset import ConjuntoDatos
from modelos.seleccion import ConjuntoFactores, Procedencia, VectorPesos
from servicios.errores import ErrorValidacion
from servicios.servicio_datos import elegibles
from servicios.utilidades.distancia import diferencias, escalar, orden_vecinos, rangos_observados

logger = logging.getLogger(__name__)

K_POR_DEFECTO: int = 10
SIGMA_POR_DEFECTO: float = 20.0


def _cociente(numerador: np.ndarray | float, denominador: np.ndarray | float) -> np.ndarray:
    """a/b con 0/0 (y x/0) → 0."""
    numerador = np.asarray(numerador, dtype=float)
    denominador = np.broadcast_to(np.asarray(denominador, dtype=float), numerador.shape)
    return np.divide(numerador, denominador, out=np.zeros_like(numerador),
                     where=denominador != 0)


def influencias(k: int, sigma: float) -> np.ndarray:
    rangos = np.arange(1, k + 1, dtype=float)
    crudas = np.exp(-((rangos / sigma) ** 2))
    return crudas / crudas.sum()


def rrelieff(
    conjunto: ConjuntoDatos,
    m: int | None = None,
    k: int = K_POR_DEFECTO,
    sigma: float = SIGMA_POR_DEFECTO,
    semilla: int = 0,
) -> VectorPesos:
    """Pesos en [-1, 1] por factor independiente.

    m=None (o m = n) recorre todas las instancias en orden de id;
    en otro caso se sortean m instancias con la semilla. Los proyectos
    sin dependiente observada no participan.
    """
    factores = conjunto.independientes
    if not factores:
        raise ErrorValidacion("El conjunto no tiene factores independientes.")
    if k < 1 or (m is not None and m < 1) or sigma <= 0:
        raise ErrorValidacion(f"Parámetros inválidos: m={m}, k={k}, sigma={sigma}.")
    observados = elegibles(conjunto)
    if len(observados) < len(conjunto):
        excluidos = sorted(set(conjunto.ids) - set(observados.ids))
        logger.warning("RReliefF: proyectos sin dependiente observada excluidos: %s", excluidos)
        conjunto = observados
    n = len(conjunto)
    if n < k + 1:
        raise ErrorValidacion(f"RReliefF con k={k} requiere al menos {k + 1} proyectos; hay {n}.")

    matriz = conjunto.matriz(factores)
    objetivo = conjunto.objetivo()
    if np.isnan(matriz).any() or np.isnan(objetivo).any():
        raise ErrorValidacion("RReliefF requiere un conjunto completo (impute primero).")

    m_efectivo = n if m is None else m
    amplitud_objetivo = float(objetivo.max() - objetivo.min())
    if amplitud_objetivo == 0:
        logger.warning("Variable dependiente constante: todos los pesos valen 0")
        return VectorPesos({f: 0.0 for f in factores}, m_efectivo, k, sigma, semilla,
                           objetivo_constante=True)

    nominal = conjunto.mascara_nominal(factores)
    escalada = escalar(matriz, nominal, *rangos_observados(matriz))
    objetivo_escalado = (objetivo - objetivo.min()) / amplitud_objetivo
    ids = conjunto.ids

    if m_efectivo == n:
        instancias = sorted(range(n), key=lambda i: ids[i])
    else:
        instancias = np.random.default_rng(semilla).integers(0, n, size=m_efectivo).tolist()

    d = influencias(k, sigma)
    n_dc = 0.0
    n_da = np.zeros(len(factores))
    n_dcda = np.zeros(len(factores))
    m_prima = 0.0
    for i in instancias:
        dif = diferencias(escalada[i], escalada, nominal)
        distancia = dif.sum(axis=1)
        distancia[i] = np.inf
        vecinos = orden_vecinos(distancia, ids)[:k]

        dif_objetivo = np.abs(objetivo_escalado[vecinos] - objetivo_escalado[i]) * d
        n_dc += float(dif_objetivo.sum())
        n_da += (dif[vecinos] * d[:, None]).sum(axis=0)
        n_dcda += (dif[vecinos] * dif_objetivo[:, None]).sum(axis=0)
        m_prima += float(d.sum())

    pesos = _cociente(n_dcda, n_dc) - _cociente(n_da - n_dcda, m_prima - n_dc)
    assert np.all(np.abs(pesos) <= 1.0 + 1e-9), f"Pesos fuera de [-1, 1]: {pesos}"
    pesos = np.clip(pesos, -1.0, 1.0)

    logger.info("RReliefF: m=%d, k=%d, sigma=%g sobre %d factores", m_efectivo, k, sigma, len(factores))
    return VectorPesos(
        {f: float(w) for f, w in zip(factores, pesos)}, m_efectivo, k, sigma, semilla,
    )


# ================================================================
# CONJUNTOS A PARTIR DE PESOS
# ================================================================

def conjunto_pesos_positivos(vector: VectorPesos) -> ConjuntoFactores:
    """FM_R: factores con peso estrictamente positivo."""
    positivos = [f for f, w, _ in vector.ordenados() if w > 0]
    if not positivos:
        raise ErrorValidacion("Ningún factor con peso positivo: no se hallaron factores relevantes.")
    return ConjuntoFactores(Procedencia.FM_R.value, tuple(positivos), Procedencia.FM_R)


def cantidad_superior(p: float, n: int) -> int:
    """ceil(p·n), tolerante al error de redondeo de p·n."""
    return math.ceil(round(p * n, 9))


def fraccion_superior(
    puntajes: Mapping[str, float],
    p: float,
    etiqueta: str = Procedencia.CUSTOM.value,
    procedencia: Procedencia = Procedencia.CUSTOM,
) -> ConjuntoFactores:
    """Los ceil(p·N) factores de mayor puntaje; empates por nombre."""
    if not 0.0 < p <= 1.0:
        raise ErrorValidacion(f"La fracción debe estar en (0, 1]; se recibió {p}.")
    if not puntajes:
        raise ErrorValidacion(f"No hay factores para el corte '{etiqueta}'.")
    orden = sorted(puntajes, key=lambda f: (-puntajes[f], f))
    return ConjuntoFactores(etiqueta, tuple(orden[: cantidad_superior(p, len(orden))]), procedencia)
