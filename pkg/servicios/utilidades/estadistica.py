"""Colas de las distribuciones F y chi-cuadrado."""

import math

from scipy import special, stats


def valor_p_f(f: float, gl_entre: int, gl_dentro: int) -> float:
    """P(F > f) vía la beta incompleta regularizada:

    1 - CDF_F(f) = I_x(gl_dentro/2, gl_entre/2), x = gl_dentro / (gl_dentro + gl_entre·f)
    """
    if gl_entre < 1 or gl_dentro < 1:
        raise ValueError(f"Grados de libertad inválidos: ({gl_entre}, {gl_dentro}).")
    if math.isinf(f):
        return 0.0
    if f <= 0:
        return 1.0
    x = gl_dentro / (gl_dentro + gl_entre * f)
    return float(min(1.0, max(0.0, special.betainc(gl_dentro / 2.0, gl_entre / 2.0, x))))


def valor_p_chi2(estadistico: float, gl: int) -> float:
    return float(stats.chi2.sf(estadistico, gl))
