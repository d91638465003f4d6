"""
distancia.py — Métrica heterogénea Euclídea/solapamiento.

Por factor: |a−b| sobre valores numéricos/ordinales escalados a [0,1]
por el rango observado; 0/1 (igual/distinto) en nominales.
Total = sqrt(media de las diferencias al cuadrado sobre los factores
presentes en ambos registros). Sin factores compartidos → +∞.
"""

import numpy as np


def rangos_observados(matriz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(mínimo, máximo) por columna ignorando NaN; columnas vacías → (0, 0)."""
    minimos = np.zeros(matriz.shape[1])
    maximos = np.zeros(matriz.shape[1])
    for j in range(matriz.shape[1]):
        observados = matriz[:, j][~np.isnan(matriz[:, j])]
        if observados.size:
            minimos[j], maximos[j] = observados.min(), observados.max()
    return minimos, maximos


def escalar(matriz: np.ndarray, nominal: np.ndarray,
            minimos: np.ndarray, maximos: np.ndarray) -> np.ndarray:
    """Escala columnas no nominales a [0,1]; columnas constantes → 0."""
    escalada = matriz.astype(float, copy=True)
    amplitud = maximos - minimos
    for j in np.flatnonzero(~nominal):
        if amplitud[j] > 0:
            escalada[:, j] = (matriz[:, j] - minimos[j]) / amplitud[j]
        else:
            escalada[:, j] = np.where(np.isnan(matriz[:, j]), np.nan, 0.0)
    return escalada


def diferencias(fila: np.ndarray, matriz: np.ndarray, nominal: np.ndarray) -> np.ndarray:
    """Diferencias por factor entre `fila` y cada fila de `matriz` (NaN si falta alguno)."""
    dif = np.abs(matriz - fila)
    if nominal.any():
        presentes = ~np.isnan(dif[:, nominal])
        dif[:, nominal] = np.where(presentes, (dif[:, nominal] > 0).astype(float), np.nan)
    return dif


def distancias(fila: np.ndarray, matriz: np.ndarray, nominal: np.ndarray) -> np.ndarray:
    """Distancia heterogénea de `fila` a cada fila de `matriz` (ya escaladas)."""
    dif = diferencias(fila, matriz, nominal)
    presentes = ~np.isnan(dif)
    cuenta = presentes.sum(axis=1)
    suma = np.where(presentes, dif ** 2, 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        resultado = np.sqrt(suma / cuenta)
    resultado[cuenta == 0] = np.inf
    return resultado


def orden_vecinos(distancia: np.ndarray, claves: list[str]) -> list[int]:
    """Índices por distancia ascendente; empates por clave (id de registro)."""
    return sorted(range(len(distancia)), key=lambda i: (distancia[i], claves[i]))
