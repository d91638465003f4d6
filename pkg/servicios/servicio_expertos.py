"""
servicio_expertos.py — Agregación de rankings expertos y concordancia.

Puntaje por experto: rango r → (6 − r)/5; factor no ordenado → 0.
Puntaje del factor: media sobre todos los expertos.
"""

import logging
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from modelos.expertos import (
    Concordancia, ConcordanciaMetodos, ConcordanciaPar, RANGO_MAXIMO, RankingsExpertos,
)
from servicios.errores import ErrorValidacion
from servicios.utilidades.estadistica import valor_p_chi2

logger = logging.getLogger(__name__)

W_NO_DEFINIDO: str = "W de Kendall: no definido (m<2 o n<3)"


def puntaje_rango(rango: int | None) -> float:
    if rango is None:
        return 0.0
    return (RANGO_MAXIMO + 1 - rango) / RANGO_MAXIMO


def puntajes_por_experto(rankings: RankingsExpertos) -> dict[str, dict[str, float]]:
    factores = sorted(rankings.factores)
    return {
        experto: {f: puntaje_rango(rankings.mejor_rango(experto, f)) for f in factores}
        for experto in rankings.expertos
    }


def agregar_puntajes_expertos(
    rankings: RankingsExpertos,
    factores: Iterable[str] = (),
) -> dict[str, float]:
    """factor → puntaje en [0, 1]: media sobre expertos del puntaje por rango.

    Los `factores` que ningún experto ordenó aparecen con 0.0.
    """
    if not rankings.expertos:
        raise ErrorValidacion("Se requiere al menos un experto.")
    por_experto = puntajes_por_experto(rankings)
    m = len(rankings.expertos)
    puntajes = {f: 0.0 for f in factores}
    puntajes.update({
        f: sum(por_experto[e][f] for e in rankings.expertos) / m
        for f in rankings.factores
    })
    return dict(sorted(puntajes.items()))


def w_definido(rankings: RankingsExpertos) -> bool:
    """W requiere al menos 2 jueces y 3 objetos."""
    return len(rankings.expertos) >= 2 and len(rankings.factores) >= 3


# ================================================================
# CONCORDANCIA
# ================================================================

def kendall_w(rangos: Sequence[Sequence[float]]) -> Concordancia:
    """W de Kendall para m jueces × n objetos, con corrección por empates.

    Cada fila se re-ordena a 1..n (rangos medios en empates), así que se
    aceptan rangos tomados de un universo mayor.
    W = 12S / (m²(n³ − n) − m·T);  p desde χ² = m(n − 1)W con n − 1 gl.
    """
    matriz = np.asarray(rangos, dtype=float)
    if matriz.ndim != 2:
        raise ErrorValidacion("Se esperaba una matriz jueces × objetos.")
    m, n = matriz.shape
    if m < 2:
        raise ErrorValidacion(f"W de Kendall requiere al menos 2 jueces; hay {m}.")
    if n < 3:
        raise ErrorValidacion(f"W de Kendall requiere al menos 3 objetos; hay {n}.")

    rerangos = np.vstack([stats.rankdata(fila) for fila in matriz])
    empates = 0.0
    for fila in rerangos:
        _, cuentas = np.unique(fila, return_counts=True)
        empates += float(np.sum(cuentas ** 3 - cuentas))

    totales = rerangos.sum(axis=0)
    s = float(np.sum((totales - totales.mean()) ** 2))
    denominador = m ** 2 * (n ** 3 - n) - m * empates
    if denominador <= 0:
        raise ErrorValidacion("Todos los jueces empatan todos los objetos: W indefinido.")
    w = min(1.0, max(0.0, 12.0 * s / denominador))
    return Concordancia(w, valor_p_chi2(m * (n - 1) * w, n - 1))


def tau_kendall(a: Sequence[float], b: Sequence[float]) -> Concordancia:
    """τ-b de Kendall entre dos rankings (estadístico por pares)."""
    resultado = stats.kendalltau(a, b)
    return Concordancia(float(resultado.statistic), float(resultado.pvalue))


def rho_spearman(a: Sequence[float], b: Sequence[float]) -> Concordancia:
    resultado = stats.spearmanr(a, b)
    return Concordancia(float(resultado.statistic), float(resultado.pvalue))


def concordancia_expertos(rankings: RankingsExpertos) -> Concordancia:
    """W entre expertos sobre la unión de factores ordenados."""
    por_experto = puntajes_por_experto(rankings)
    factores = sorted(rankings.factores)
    # Puntaje mayor = rango menor; los no ordenados empatan al final.
    matriz = [[-por_experto[e][f] for f in factores] for e in rankings.expertos]
    return kendall_w(matriz)


def superiores(puntajes: Mapping[str, float], n: int) -> list[str]:
    return sorted(puntajes, key=lambda f: (-puntajes[f], f))[:n]


def concordancia_metodos(
    puntajes: Mapping[str, Mapping[str, float]], top: int = 10,
) -> ConcordanciaMetodos | None:
    """Acuerdo entre métodos sobre los factores presentes en el top-N de todos."""
    metodos = list(puntajes)
    if len(metodos) < 2:
        raise ErrorValidacion("Se requieren al menos 2 métodos para comparar rankings.")
    compartidos = set(superiores(puntajes[metodos[0]], top))
    for metodo in metodos[1:]:
        compartidos &= set(superiores(puntajes[metodo], top))
    factores = sorted(compartidos)
    if len(factores) < 3:
        logger.warning("Solo %d factores compartidos en el top-%d: sin concordancia",
                       len(factores), top)
        return None

    rangos = {
        metodo: stats.rankdata([-puntajes[metodo][f] for f in factores])
        for metodo in metodos
    }
    total = kendall_w([rangos[m] for m in metodos])
    pares = []
    for a, b in combinations(metodos, 2):
        par_w = kendall_w([rangos[a], rangos[b]])
        par_tau = tau_kendall(rangos[a], rangos[b])
        pares.append(ConcordanciaPar(
            metodo_a=a, metodo_b=b, w=par_w.w, p_w=par_w.p, tau=par_tau.w, p_tau=par_tau.p,
        ))
    return ConcordanciaMetodos(
        metodos=tuple(metodos), factores=tuple(factores), w=total.w, p=total.p, pares=tuple(pares),
    )
