import json
import re

import pandas as pd
import pytest

from cli import main
from repositorios.repositorio_artefactos import RepositorioArtefactos
from repositorios.repositorio_proyectos import RepositorioProyectosCsv
from servicios.servicio_relief import rrelieff

ESQUEMA_PODA = {
    "id": {"scale": "nominal", "role": "identifier"},
    "a": {"scale": "continuous", "role": "independent"},
    "b": {"scale": "continuous", "role": "independent"},
    "c": {"scale": "continuous", "role": "independent"},
    "d": {"scale": "continuous", "role": "independent"},
    "y": {"scale": "continuous", "role": "dependent"},
}

DATOS_PODA = """id,a,b,c,d,y
R00,?,1,1,1,10
R01,?,?,?,1,20
R02,?,2,2,2,30
R03,?,3,3,?,40
R04,1,4,4,4,50
"""


@pytest.fixture
def fixture_poda(tmp_path):
    datos = tmp_path / "d.csv"
    datos.write_text(DATOS_PODA, encoding="utf-8")
    esquema = tmp_path / "s.json"
    esquema.write_text(json.dumps(ESQUEMA_PODA), encoding="utf-8")
    return datos, esquema


def _completo(rutas) -> list[str]:
    return ["--data", str(rutas["completo"]), "--schema", str(rutas["esquema_completo"])]


def test_prune_sobre_el_fixture(fixture_poda, tmp_path, capsys):
    datos, esquema = fixture_poda
    codigo = main([
        "prune", "--data", str(datos), "--schema", str(esquema),
        "--factor-thresh", "0.8", "--project-thresh", "0.55", "--output-dir", str(tmp_path / "out"),
    ])
    assert codigo == 0
    assert (tmp_path / "out" / "pruned.csv").read_text(encoding="utf-8") == (
        "id,b,c,d,y\n"
        "R00,1.0,1.0,1.0,10.0\n"
        "R02,2.0,2.0,2.0,30.0\n"
        "R03,3.0,3.0,?,40.0\n"
        "R04,4.0,4.0,4.0,50.0\n"
    )
    salida = capsys.readouterr().out
    assert "Factores: 4 → 3" in salida
    assert "Proyectos: 5 → 4" in salida


def test_profile_imprime_porcentajes_de_un_decimal(rutas_sinteticas, tmp_path, capsys):
    codigo = main([
        "profile", "--data", str(rutas_sinteticas["datos"]), "--schema", str(rutas_sinteticas["esquema"]),
        "--output-dir", str(tmp_path),
    ])
    assert codigo == 0
    salida = capsys.readouterr().out
    assert "Faltantes totales: 17.5%" in salida
    assert re.search(r"tool_usage\s+95\.0%", salida)
    assert (tmp_path / "profile.csv").exists()


def test_weigh_coincide_con_la_biblioteca(rutas_sinteticas, tmp_path):
    codigo = main(["weigh", *_completo(rutas_sinteticas), "--k", "5", "--sigma", "20",
                   "--seed", "0", "--output-dir", str(tmp_path / "cli")])
    assert codigo == 0

    conjunto = RepositorioProyectosCsv().cargar_dataset(
        rutas_sinteticas["completo"], rutas_sinteticas["esquema_completo"]
    )
    esperado = RepositorioArtefactos(tmp_path / "lib").guardar_pesos(rrelieff(conjunto, None, 5, 20.0, 0))
    assert (tmp_path / "cli" / "weights.csv").read_bytes() == esperado.read_bytes()


def test_evaluate_sobre_duplicados_da_mmre_cero(tmp_path, capsys):
    datos = tmp_path / "dup.csv"
    datos.write_text(
        "id,x,y\nA,1.0,10\nB,1.0,10\nC,5.0,30\nD,5.0,30\nE,9.0,70\nF,9.0,70\n", encoding="utf-8"
    )
    esquema = tmp_path / "dup.json"
    esquema.write_text(json.dumps({
        "id": {"scale": "nominal", "role": "identifier"},
        "x": {"scale": "continuous", "role": "independent"},
        "y": {"scale": "continuous", "role": "dependent"},
    }), encoding="utf-8")

    codigo = main(["evaluate", "--data", str(datos), "--schema", str(esquema),
                   "--estimator", "knn", "--k", "1", "--output-dir", str(tmp_path / "out")])
    assert codigo == 0
    reporte = pd.read_csv(tmp_path / "out" / "report.csv")
    assert reporte.loc[0, "mmre"] == 0.0
    assert reporte.loc[0, "factor_set"] == "FM"
    assert "0.0%" in capsys.readouterr().out


def test_evaluate_con_conjuntos_explicitos(rutas_sinteticas, tmp_path):
    codigo = main([
        "evaluate", *_completo(rutas_sinteticas), "--estimator", "knn", "--estimator", "osr",
        "--set", "A=experience_index,complexity", "--set", "B=region,reuse_ratio,tool_maturity",
        "--output-dir", str(tmp_path),
    ])
    assert codigo == 0
    reporte = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert [(f["estimador"], f["conjunto"]) for f in reporte["filas"]] == [
        ("OSR", "A"), ("OSR", "B"), ("k-NN", "A"), ("k-NN", "B"),
    ]
    assert len(reporte["anova"]) == 2


def test_estimate_con_traza(rutas_sinteticas, tmp_path, capsys):
    codigo = main(["estimate", *_completo(rutas_sinteticas), "--query", "C05",
                   "--estimator", "osr", "--trace", "--output-dir", str(tmp_path)])
    assert codigo == 0
    assert capsys.readouterr().out.startswith("C05: ")
    traza = json.loads((tmp_path / "trace" / "osr_C05.json").read_text(encoding="utf-8"))
    assert traza["id_consulta"] == "C05"
    assert traza["tamano_inicial"] == 11


def test_estimate_consulta_inexistente(rutas_sinteticas, tmp_path):
    assert main(["estimate", *_completo(rutas_sinteticas), "--query", "C99",
                 "--output-dir", str(tmp_path)]) == 1


def test_experts_imprime_puntajes_y_w(rutas_sinteticas, tmp_path, capsys):
    codigo = main(["experts", "--experts", str(rutas_sinteticas["rankings"]), "--output-dir", str(tmp_path)])
    assert codigo == 0
    salida = capsys.readouterr().out
    assert "customer_participation" in salida
    assert "W de Kendall:" in salida
    puntajes = pd.read_csv(tmp_path / "scores.csv")
    assert puntajes.loc[0, "factor"] == "customer_participation"
    assert puntajes.loc[0, "score"] == pytest.approx((1.0 + 0.8 + 1.0) / 3)


def test_cadena_prune_impute_select(rutas_sinteticas, tmp_path, capsys):
    esquema = str(rutas_sinteticas["esquema"])
    salida = str(tmp_path)
    assert main(["prune", "--data", str(rutas_sinteticas["datos"]), "--schema", esquema,
                 "--output-dir", salida]) == 0
    assert main(["impute", "--data", str(tmp_path / "pruned.csv"), "--schema", esquema,
                 "--output-dir", salida]) == 0
    capsys.readouterr()
    assert main([
        "select", "--data", str(tmp_path / "imputed.csv"), "--schema", esquema, "--k", "5",
        "--experts", str(rutas_sinteticas["rankings"]), "--scores", str(rutas_sinteticas["puntajes"]),
        "--output-dir", salida,
    ]) == 0
    assert "FC (6):" in capsys.readouterr().out
    conjuntos = json.loads((tmp_path / "sets.json").read_text(encoding="utf-8"))
    assert {c["label"] for c in conjuntos["sets"]} >= {"FM", "FE", "FC", "FT"}


def test_run_dos_veces_es_identico(manifiesto_sintetico, tmp_path):
    for nombre in ("a", "b"):
        assert main(["run", "--manifest", str(manifiesto_sintetico), "--output-dir", str(tmp_path / nombre)]) == 0
    for archivo in ("weights.csv", "ranking.csv", "report.csv", "report.json", "sets.json"):
        assert (tmp_path / "a" / archivo).read_bytes() == (tmp_path / "b" / archivo).read_bytes()


def test_flag_desconocido_sale_con_uno(capsys):
    with pytest.raises(SystemExit) as salida:
        main(["profile", "--bogus"])
    assert salida.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_archivo_inexistente_sale_con_dos(rutas_sinteticas, tmp_path):
    codigo = main(["profile", "--data", str(tmp_path / "no.csv"), "--schema",
                   str(rutas_sinteticas["esquema"]), "--output-dir", str(tmp_path)])
    assert codigo == 2


def test_datos_invalidos_salen_con_uno(rutas_sinteticas, tmp_path):
    # RReliefF exige un conjunto completo: los datos crudos tienen faltantes.
    codigo = main(["weigh", "--data", str(rutas_sinteticas["datos"]), "--schema",
                   str(rutas_sinteticas["esquema"]), "--output-dir", str(tmp_path)])
    assert codigo == 1


def test_experts_con_un_solo_experto(tmp_path, capsys):
    rankings = tmp_path / "uno.csv"
    rankings.write_text(
        "expert_id,category,factor,rank\nE1,personnel,a,1\nE1,personnel,b,2\nE1,personnel,c,3\n",
        encoding="utf-8",
    )
    assert main(["experts", "--experts", str(rankings), "--output-dir", str(tmp_path)]) == 0
    assert "no definido (m<2 o n<3)" in capsys.readouterr().out
    assert pd.read_csv(tmp_path / "scores.csv")["factor"].tolist() == ["a", "b", "c"]


def test_run_con_cuota_de_datos_total_ordena_por_peso(manifiesto_sintetico, tmp_path):
    assert main(["run", "--manifest", str(manifiesto_sintetico), "--data-share", "1",
                 "--output-dir", str(tmp_path)]) == 0
    pesos = pd.read_csv(tmp_path / "weights.csv")["factor"].tolist()
    ranking = pd.read_csv(tmp_path / "ranking.csv")["factor"].tolist()
    assert [f for f in ranking if f in pesos] == pesos


def test_run_con_cuota_fuera_de_rango(manifiesto_sintetico, tmp_path):
    assert main(["run", "--manifest", str(manifiesto_sintetico), "--data-share", "1.5",
                 "--output-dir", str(tmp_path)]) == 1
