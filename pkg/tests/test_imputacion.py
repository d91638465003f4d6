import numpy as np
import pytest

from modelos.configuraciones import ConfigImputacion
from modelos.dataset import es_faltante
from servicios.errores import ErrorValidacion
from servicios.servicio_imputacion import imputar_knn, imputar_media


def test_celda_llena_con_media_de_k_donantes(fabrica_conjunto):
    conjunto = fabrica_conjunto(
        {"a": ["?", 5.0, 5.0, 5.0, 9.0], "b": [0.0, 0.0, 0.1, 0.2, 1.0]},
        [1, 2, 3, 4, 5],
    )
    completo = imputar_knn(conjunto, ConfigImputacion(k=3))
    assert completo.registros[0].valor("a") == pytest.approx(5.0)
    assert [r.valor("a") for r in completo.registros[1:]] == [5.0, 5.0, 5.0, 9.0]


def test_nominal_usa_moda_y_entero_redondea(fabrica_conjunto):
    conjunto = fabrica_conjunto(
        {
            "color": ["?", "red", "red", "blue", "blue"],
            "n": ["?", 2, 3, 3, 40],
            "b": [0.0, 0.05, 0.1, 0.2, 1.0],
        },
        [1, 2, 3, 4, 5],
        escalas={"color": "nominal", "n": "integer"},
        niveles={"color": ["red", "blue"]},
    )
    completo = imputar_knn(conjunto, ConfigImputacion(k=3))
    assert completo.registros[0].valor("color") == "red"
    assert completo.registros[0].valor("n") == 3


def test_ordinal_redondea_al_nivel(fabrica_conjunto):
    conjunto = fabrica_conjunto(
        {"nivel": ["?", "low", "high", "high"], "b": [0.0, 0.1, 0.2, 1.0]},
        [1, 2, 3, 4],
        escalas={"nivel": "ordinal"},
        niveles={"nivel": ["low", "mid", "high"]},
    )
    completo = imputar_knn(conjunto, ConfigImputacion(k=2))
    # media de índices (0 + 2) / 2 = 1 → "mid"
    assert completo.registros[0].valor("nivel") == "mid"


def test_no_imputa_la_dependiente(fabrica_conjunto):
    conjunto = fabrica_conjunto({"a": [1.0, "?", 3.0]}, [1, "?", 3])
    completo = imputar_knn(conjunto, ConfigImputacion(k=1))
    assert not es_faltante(completo.registros[1].valor("a"))
    assert es_faltante(completo.registros[1].valor("y"))


def test_determinista_con_semilla(fabrica_conjunto):
    conjunto = fabrica_conjunto(
        {"c": ["?", "x", "z", "x", "z"], "b": [0.5, 0.4, 0.6, 0.0, 1.0]},
        [1, 2, 3, 4, 5],
        escalas={"c": "nominal"},
        niveles={"c": ["x", "z"]},
    )
    primero = imputar_knn(conjunto, ConfigImputacion(k=2), semilla=7)
    segundo = imputar_knn(conjunto, ConfigImputacion(k=2), semilla=7)
    assert primero.registros == segundo.registros


def test_factor_sin_observaciones_es_error(fabrica_conjunto):
    conjunto = fabrica_conjunto({"a": ["?", "?", "?"], "b": [1.0, 2.0, 3.0]}, [1, 2, 3])
    with pytest.raises(ErrorValidacion, match="imposibles de imputar"):
        imputar_knn(conjunto)


def test_conjunto_completo_no_cambia(fabrica_conjunto):
    conjunto = fabrica_conjunto({"a": [1.0, 2.0, 3.0]}, [1, 2, 3])
    assert imputar_knn(conjunto) is conjunto


def test_media_de_columna(fabrica_conjunto):
    conjunto = fabrica_conjunto({"a": ["?", 2.0, 4.0, 6.0]}, [1, 2, 3, 4])
    assert imputar_media(conjunto).registros[0].valor("a") == pytest.approx(4.0)


def test_donante_unico_mas_cercano(fabrica_conjunto):
    conjunto = fabrica_conjunto(
        {"a": [1.0, 1.0, 9.0], "b": [5.0, "?", 100.0]}, [1, 2, 3], ids=["p1", "p2", "p3"],
    )
    completo = imputar_knn(conjunto, ConfigImputacion(k=1))
    assert completo.registro("p2").valor("b") == pytest.approx(5.0)


def _correlacionadas(rng: np.random.Generator, n: int = 40) -> dict[str, np.ndarray]:
    base = rng.uniform(0, 1, n)
    return {
        "x1": base,
        "x2": base + rng.normal(0, 0.02, n),
        "x3": 2 * base + rng.normal(0, 0.02, n),
    }


def _enmascarar(rng: np.random.Generator, columnas: dict[str, np.ndarray], cuota: float):
    """Marca con "?" una fracción uniforme de celdas; cada fila conserva algún factor observado."""
    nombres = list(columnas)
    n = len(columnas[nombres[0]])
    celdas = [(i, c) for i in range(n) for c in range(len(nombres))]
    while True:
        elegidas = rng.choice(len(celdas), size=round(cuota * len(celdas)), replace=False)
        mascara = {celdas[e] for e in elegidas}
        if all(sum((i, c) in mascara for c in range(len(nombres))) < len(nombres) for i in range(n)):
            break
    faltantes = {
        nombre: [("?" if (i, c) in mascara else float(columnas[nombre][i])) for i in range(n)]
        for c, nombre in enumerate(nombres)
    }
    return faltantes, sorted(mascara)


def _rmse_normalizado(imputado, columnas, mascara) -> float:
    nombres = list(columnas)
    errores = [
        (imputado.registros[i].valor(nombres[c]) - columnas[nombres[c]][i]) / np.ptp(columnas[nombres[c]])
        for i, c in mascara
    ]
    return float(np.sqrt(np.mean(np.square(errores))))


def test_knn_supera_a_la_media_en_datos_correlacionados(fabrica_conjunto):
    """Enmascarando el 10% de las celdas al azar, el RMSE normalizado de k-NN
    no supera al de la media de columna en al menos 25 de 30 semillas."""
    victorias = 0
    for semilla in range(30):
        rng = np.random.default_rng(semilla)
        columnas = _correlacionadas(rng)
        faltantes, mascara = _enmascarar(rng, columnas, 0.10)
        conjunto = fabrica_conjunto(faltantes, list(range(1, 41)))
        knn = imputar_knn(conjunto, ConfigImputacion(k=3), semilla)
        media = imputar_media(conjunto, semilla)
        victorias += _rmse_normalizado(knn, columnas, mascara) <= _rmse_normalizado(media, columnas, mascara)
    assert victorias >= 25


@pytest.mark.parametrize("semilla", [0, 1, 2])
def test_imputados_dentro_del_rango_observado(fabrica_conjunto, semilla):
    rng = np.random.default_rng(semilla)
    columnas = _correlacionadas(rng)
    faltantes, mascara = _enmascarar(rng, columnas, 0.10)
    completo = imputar_knn(fabrica_conjunto(faltantes, list(range(1, 41))), ConfigImputacion(k=5), semilla)
    nombres = list(columnas)
    for i, c in mascara:
        observados = [v for v in faltantes[nombres[c]] if v != "?"]
        assert min(observados) <= completo.registros[i].valor(nombres[c]) <= max(observados)
