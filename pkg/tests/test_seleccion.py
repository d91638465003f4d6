import json
import logging
import shutil

import pytest

from modelos.configuraciones import ConfigImputacion
from modelos.manifiesto import ManifiestoEjecucion
from modelos.mcda import EntradaPreferencia, RankingPreferencias
from modelos.seleccion import ConjuntoFactores, Procedencia, VectorPesos
from repositorios.repositorio_expertos import RepositorioExpertosCsv
from repositorios.repositorio_proyectos import RepositorioProyectosCsv
from servicios.errores import ErrorEtapa, ErrorValidacion
from servicios.fabrica_estimadores import crear_estimador
from servicios.servicio_datos import podar_faltantes
from servicios.servicio_evaluacion import comparar_conjuntos_factores, tabla_reporte
from servicios.servicio_expertos import agregar_puntajes_expertos
from servicios.servicio_imputacion import imputar_knn
from servicios.servicio_mcda import construir_arbol_por_defecto, ordenar_alternativas
from servicios.servicio_relief import rrelieff
from servicios.servicio_seleccion import (
    construir_conjuntos_factores, ejecutar_pipeline, etapa, para_estimacion,
    resumen_solapamiento, seleccion_integrada,
)


def _ranking(preferencias: dict[str, float]) -> RankingPreferencias:
    orden = sorted(preferencias, key=lambda f: (-preferencias[f], f))
    return RankingPreferencias(tuple(
        EntradaPreferencia(f, preferencias[f], i + 1) for i, f in enumerate(orden)
    ))


@pytest.fixture
def conjunto_medido(fabrica_conjunto):
    factores = {f: [1.0, 2.0, 3.0, 4.0] for f in ("a", "b", "c", "d", "e", "f", "g", "h")}
    return fabrica_conjunto(factores, [1.0, 2.0, 3.0, 4.0])


@pytest.fixture
def vector_medido():
    pesos = {"a": 0.5, "b": 0.4, "c": 0.3, "d": 0.2, "e": 0.1, "f": -0.1, "g": 0.0, "h": 0.05}
    return VectorPesos(pesos, m=4, k=1, sigma=20.0, semilla=0)


# ================================================================
# CONSTRUCCIÓN DE CONJUNTOS
# ================================================================

def test_conjuntos_con_procedencia(conjunto_medido, vector_medido):
    expertos = {"b": 1.0, "d": 0.6, "f": 0.4, "x": 0.8, "y": 0.0}
    ranking = _ranking({"a": 0.9, "b": 0.7, "c": 0.4, "d": 0.55, "f": 0.3, "x": 0.6})
    conjuntos = construir_conjuntos_factores(conjunto_medido, vector_medido, expertos, ranking)

    assert conjuntos["FM"].factores == ("a", "b", "c", "d", "e", "f", "g", "h")
    assert conjuntos["FE"].factores == ("b", "x", "d", "f")
    assert conjuntos["FC"].factores == ("b", "d", "f")
    assert conjuntos["FT"].factores == ("a", "b", "c", "d", "e", "f", "g", "h", "x")
    assert conjuntos["FM_R"].factores == ("a", "b", "c", "d", "e", "h")
    assert conjuntos["FM_R10"].factores == ("a",)
    assert conjuntos["FI"].factores == ("a", "b", "x", "d")
    assert conjuntos["FC_E25"].factores == ("b",)
    assert conjuntos["FC_R25"].factores == ("b",)
    assert conjuntos["FC_I25"].factores == ("b",)
    assert all(c.procedencia.value == etiqueta for etiqueta, c in conjuntos.items())


def test_expertos_dentro_de_medidos_dan_fc_igual_a_fe(conjunto_medido, vector_medido):
    expertos = {"a": 1.0, "c": 0.6}
    conjuntos = construir_conjuntos_factores(
        conjunto_medido, vector_medido, expertos, _ranking({"a": 0.9, "c": 0.2}),
    )
    assert conjuntos["FC"].como_conjunto == conjuntos["FE"].como_conjunto
    assert conjuntos["FT"].como_conjunto == conjuntos["FM"].como_conjunto


def test_algebra_de_conjuntos(conjunto_medido, vector_medido):
    expertos = {"a": 0.2, "b": 1.0, "c": 0.8, "d": 0.6, "q": 0.4}
    conjuntos = construir_conjuntos_factores(
        conjunto_medido, vector_medido, expertos, _ranking({"a": 0.8, "q": 0.7}),
    )
    s = {k: v.como_conjunto for k, v in conjuntos.items()}
    assert s["FM_R10"] <= s["FM_R"] <= s["FM"]
    for etiqueta in ("FC_E25", "FC_R25", "FC_I25"):
        assert s[etiqueta] <= s["FC"] <= s["FM"]
        assert len(s[etiqueta]) == 1
    assert s["FM"] <= s["FT"] and s["FE"] <= s["FT"]


def test_fc_vacio_es_error(conjunto_medido, vector_medido):
    with pytest.raises(ErrorValidacion, match="FC vacío"):
        construir_conjuntos_factores(
            conjunto_medido, vector_medido, {"x": 1.0, "y": 0.5}, _ranking({"x": 0.9}),
        )


def test_sin_pesos_positivos_omite_fm_r(conjunto_medido):
    vector = VectorPesos({f: 0.0 for f in "abcdefgh"}, m=4, k=1, sigma=20.0, semilla=0)
    conjuntos = construir_conjuntos_factores(conjunto_medido, vector, {"a": 1.0}, _ranking({"a": 0.2}))
    assert "FM_R" not in conjuntos
    assert "FM_R10" not in conjuntos
    assert "FI" not in conjuntos


def test_seleccion_integrada_por_umbral_o_fraccion():
    ranking = _ranking({"a": 0.9, "b": 0.5, "c": 0.49, "d": 0.1})
    assert seleccion_integrada(ranking, 0.5).factores == ("a", "b")
    assert seleccion_integrada(ranking, fraccion=0.75).factores == ("a", "b", "c")
    assert seleccion_integrada(ranking, 0.95) is None


def test_para_estimacion_restringe_a_medidos():
    conjunto = ConjuntoFactores("FE", ("x", "a", "b"), Procedencia.FE)
    restringido = para_estimacion(conjunto, ["a", "b", "c"])
    assert restringido.factores == ("a", "b")
    assert restringido.procedencia == Procedencia.FE
    with pytest.raises(ErrorValidacion):
        para_estimacion(ConjuntoFactores("FE", ("x",)), ["a"])


def test_resumen_de_solapamiento():
    conjuntos = {
        "FM_R": ConjuntoFactores("FM_R", ("a", "b", "c"), Procedencia.FM_R),
        "FE": ConjuntoFactores("FE", ("b", "c", "d"), Procedencia.FE),
        "FI": ConjuntoFactores("FI", ("c", "d"), Procedencia.FI),
    }
    resumen = resumen_solapamiento(conjuntos)
    assert resumen["FM_R&FE"] == 2
    assert resumen["FE&FI"] == 2
    assert resumen["FM_R&FE&FI"] == 1
    assert resumen["FM_R"] == 3


def test_etapa_envuelve_el_error():
    with pytest.raises(ErrorEtapa) as error:
        with etapa("weigh"):
            raise ValueError("sin datos")
    assert error.value.etapa == "weigh"
    assert isinstance(error.value.causa, ValueError)


# ================================================================
# PIPELINE
# ================================================================

def _archivos(directorio) -> dict[str, bytes]:
    return {
        str(p.relative_to(directorio)): p.read_bytes()
        for p in sorted(directorio.rglob("*")) if p.is_file()
    }


def test_pipeline_es_determinista(tmp_path, manifiesto_sintetico):
    manifiesto = ManifiestoEjecucion.cargar(manifiesto_sintetico)
    ejecutar_pipeline(manifiesto, tmp_path / "a")
    resultado = ejecutar_pipeline(manifiesto, tmp_path / "b", trabajos=3)

    primera, segunda = _archivos(tmp_path / "a"), _archivos(tmp_path / "b")
    assert primera == segunda
    for nombre in ("weights.csv", "ranking.csv", "scores.csv", "sets.json", "report.csv",
                   "report.json", "pruned.csv", "imputed.csv"):
        assert nombre in primera
    assert any(nombre.startswith("trace") for nombre in primera)

    reporte = json.loads(primera["report.json"])
    assert reporte["seed"] == 0
    assert "traza" not in reporte["filas"][0]["registros"][0]
    assert {f.conjunto for f in resultado.reporte.filas} == {
        "FM", "FC", "FC_E25", "FC_R25", "FC_I25", "FM_R10",
    }


def test_pipeline_coincide_con_las_etapas_encadenadas(tmp_path, manifiesto_sintetico, rutas_sinteticas):
    manifiesto = ManifiestoEjecucion.cargar(manifiesto_sintetico)
    resultado = ejecutar_pipeline(manifiesto, tmp_path)

    expertos = RepositorioExpertosCsv()
    datos = RepositorioProyectosCsv().cargar_dataset(rutas_sinteticas["datos"], rutas_sinteticas["esquema"])
    completo = imputar_knn(podar_faltantes(datos, 0.9, 0.55), ConfigImputacion(k=5), 0)
    vector = rrelieff(completo, None, 5, 20.0, 0)
    puntajes = agregar_puntajes_expertos(
        expertos.cargar_rankings(rutas_sinteticas["rankings"]), completo.independientes,
    )
    arbol, alternativas = construir_arbol_por_defecto(
        vector, expertos.cargar_puntajes(rutas_sinteticas["puntajes"]), 0.5, puntajes,
    )
    ranking = ordenar_alternativas(arbol, alternativas)
    conjuntos = construir_conjuntos_factores(completo, vector, puntajes, ranking)
    recetas = ["FM", "FC", "FC_E25", "FC_R25", "FC_I25", "FM_R10"]
    reporte = comparar_conjuntos_factores(
        completo, [crear_estimador(c) for c in manifiesto.estimadores],
        [para_estimacion(conjuntos[r], completo.independientes) for r in recetas],
    )

    assert resultado.vector == vector
    assert resultado.ranking == ranking
    assert tabla_reporte(resultado.reporte).equals(tabla_reporte(reporte))
    assert len(conjuntos["FC"]) == 6
    assert len(conjuntos["FC_E25"]) == 2


def test_pipeline_falla_con_nombre_de_etapa(tmp_path, rutas_sinteticas):
    malo = tmp_path / "puntajes.csv"
    malo.write_text("expert_id,factor,impact\nE1,team_experience,5\n", encoding="utf-8")
    manifiesto = ManifiestoEjecucion(
        datos=rutas_sinteticas["datos"], esquema=rutas_sinteticas["esquema"],
        rankings_expertos=rutas_sinteticas["rankings"], puntajes_criterio=malo,
    )
    with pytest.raises(ErrorEtapa) as error:
        ejecutar_pipeline(manifiesto, tmp_path / "salida")
    assert error.value.etapa == "load"


def test_receta_sin_conjunto_falla_en_evaluacion(tmp_path, rutas_sinteticas):
    manifiesto = ManifiestoEjecucion.model_validate({
        "data": rutas_sinteticas["datos"], "schema": rutas_sinteticas["esquema"],
        "expert_rankings": rutas_sinteticas["rankings"],
        "criterion_scores": rutas_sinteticas["puntajes"],
        "relief": {"k": 5}, "integrated_threshold": 1.0, "factor_sets": ["FC", "FI"],
    })
    with pytest.raises(ErrorEtapa) as error:
        ejecutar_pipeline(manifiesto, tmp_path)
    assert error.value.etapa == "evaluate"


def test_manifiesto_con_ruta_inexistente(tmp_path):
    ruta = tmp_path / "m.json"
    ruta.write_text(json.dumps({
        "data": "no.csv", "schema": "s.json", "expert_rankings": "r.csv", "criterion_scores": "c.csv",
    }), encoding="utf-8")
    with pytest.raises(FileNotFoundError):
        ManifiestoEjecucion.cargar(ruta)


def test_manifiesto_con_recetas_repetidas(rutas_sinteticas):
    with pytest.raises(ValueError, match="repetidas"):
        ManifiestoEjecucion.model_validate({
            "data": rutas_sinteticas["datos"], "schema": rutas_sinteticas["esquema"],
            "expert_rankings": rutas_sinteticas["rankings"],
            "criterion_scores": rutas_sinteticas["puntajes"], "factor_sets": ["FC", "FC"],
        })


class RepositorioProyectosMemoria:
    """Cumple IRepositorioProyectos sin tocar el disco para los datos."""

    def __init__(self, conjunto):
        self.conjunto = conjunto
        self.guardados: dict[str, int] = {}

    def cargar_esquema(self, ruta_esquema):
        return {d.nombre: d for d in self.conjunto.descriptores}

    def cargar_dataset(self, ruta_datos, ruta_esquema):
        return self.conjunto

    def guardar_dataset(self, conjunto, ruta_datos):
        self.guardados[ruta_datos.name] = len(conjunto)
        return ruta_datos


def test_pipeline_acepta_otro_repositorio(tmp_path, manifiesto_sintetico, rutas_sinteticas):
    manifiesto = ManifiestoEjecucion.cargar(manifiesto_sintetico)
    datos = RepositorioProyectosCsv().cargar_dataset(rutas_sinteticas["datos"], rutas_sinteticas["esquema"])
    memoria = RepositorioProyectosMemoria(datos)

    resultado = ejecutar_pipeline(manifiesto, tmp_path / "mem", proyectos=memoria)
    referencia = ejecutar_pipeline(manifiesto, tmp_path / "csv")

    assert memoria.guardados == {"pruned.csv": 19, "imputed.csv": 19}
    assert not (tmp_path / "mem" / "pruned.csv").exists()
    assert resultado.vector == referencia.vector


def test_pipeline_con_dependiente_faltante(tmp_path, directorio_sintetico, caplog):
    copia = tmp_path / "sintetico"
    shutil.copytree(directorio_sintetico, copia)
    ruta = copia / "proyectos.csv"
    lineas = ruta.read_text(encoding="utf-8").splitlines()
    campos = lineas[1].split(",")
    assert campos[0] == "P01"
    campos[2] = "?"
    lineas[1] = ",".join(campos)
    ruta.write_text("\n".join(lineas) + "\n", encoding="utf-8")

    with caplog.at_level(logging.WARNING):
        resultado = ejecutar_pipeline(ManifiestoEjecucion.cargar(copia / "manifiesto.json"), tmp_path / "salida")

    assert "P01" in caplog.text
    assert resultado.reporte.excluidos == 1
    for fila in resultado.reporte.filas:
        assert "P01" not in {r.id_proyecto for r in fila.registros}
