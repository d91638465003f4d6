"""
servicio_mcda.py — Evaluación, ranking y rebalanceo sobre árboles AvalOn.

Los árboles son inmutables: `rebalancear_pesos` devuelve un árbol nuevo
validado contra todas las invariantes de `NodoMcda`.
"""

import logging
from typing import Iterable, Mapping, Sequence

from modelos.expertos import PuntajesCriterio
from modelos.mcda import (
    Alternativa, EntradaPreferencia, FuncionValor, ModeloMetrica, NodoMcda,
    RankingPreferencias, TipoNodo, TOLERANCIA_PESOS,
)
from modelos.seleccion import VectorPesos
from servicios.errores import ErrorValidacion

logger = logging.getLogger(__name__)

CUOTA_DATOS_POR_DEFECTO: float = 0.5
LIKERT_NEUTRO: float = 3.0

METRICA_PESO = "rrf_weight"
METRICA_IMPACTO = "expert_impact"
METRICA_CONTROLABILIDAD = "expert_controllability"
METRICA_DIFICULTAD = "expert_difficulty"
METRICA_RANGO_EXPERTO = "expert_rank_score"

RutaNodo = str | Sequence[int]


# ================================================================
# EVALUACIÓN
# ================================================================

def _evaluar_nodo(nodo: NodoMcda, alternativa: Alternativa) -> float:
    if nodo.tipo == TipoNodo.MODELO:
        metrica = nodo.modelo.metrica
        if metrica not in alternativa.metricas:
            raise ErrorValidacion(
                f"La alternativa '{alternativa.nombre}' no define la métrica '{metrica}' "
                f"requerida por el nodo '{nodo.nombre or metrica}'."
            )
        valor = nodo.modelo.val(alternativa.metricas[metrica])
        if not 0.0 <= valor <= 1.0:
            raise RuntimeError(f"val del nodo '{nodo.nombre}' devolvió {valor}, fuera de [0, 1].")
        return valor
    return sum(hijo.peso * _evaluar_nodo(hijo, alternativa) for hijo in nodo.hijos)


def evaluar(arbol: NodoMcda, alternativa: Alternativa) -> float:
    """pref_i(a) = Σ w_j · pref_j(a); en un nodo modelo, val(métrica)."""
    preferencia = _evaluar_nodo(arbol, alternativa)
    if not -TOLERANCIA_PESOS <= preferencia <= 1.0 + TOLERANCIA_PESOS:
        raise RuntimeError(f"Preferencia fuera de [0, 1]: {preferencia}.")
    return min(1.0, max(0.0, preferencia))


def ordenar_alternativas(arbol: NodoMcda, alternativas: Iterable[Alternativa]) -> RankingPreferencias:
    """Cada alternativa se evalúa por separado; no hay normalización relativa."""
    alternativas = list(alternativas)
    nombres = [a.nombre for a in alternativas]
    repetidos = sorted({n for n in nombres if nombres.count(n) > 1})
    if repetidos:
        raise ErrorValidacion(f"Alternativas repetidas: {repetidos}.")

    preferencias = {a.nombre: evaluar(arbol, a) for a in alternativas}
    orden = sorted(preferencias, key=lambda n: (-preferencias[n], n))
    return RankingPreferencias(tuple(
        EntradaPreferencia(nombre, preferencias[nombre], i + 1) for i, nombre in enumerate(orden)
    ))


# ================================================================
# REBALANCEO
# ================================================================

def _rutas(nodo: NodoMcda, prefijo: tuple[int, ...] = ()) -> Iterable[tuple[tuple[int, ...], NodoMcda]]:
    yield prefijo, nodo
    for i, hijo in enumerate(nodo.hijos):
        yield from _rutas(hijo, prefijo + (i,))


def resolver_ruta(arbol: NodoMcda, objetivo: RutaNodo) -> tuple[int, ...]:
    """Nombre único del nodo o ruta de índices desde la raíz."""
    if isinstance(objetivo, str):
        coincidencias = [ruta for ruta, nodo in _rutas(arbol) if nodo.nombre == objetivo]
        if not coincidencias:
            raise LookupError(f"No existe un nodo llamado '{objetivo}'.")
        if len(coincidencias) > 1:
            raise ErrorValidacion(
                f"El nombre '{objetivo}' es ambiguo ({len(coincidencias)} nodos); use una ruta de índices."
            )
        return coincidencias[0]

    ruta = tuple(objetivo)
    nodo = arbol
    for i in ruta:
        if not 0 <= i < len(nodo.hijos):
            raise LookupError(f"Ruta de nodo inválida: {list(ruta)}.")
        nodo = nodo.hijos[i]
    return ruta


def _reemplazar_hijos(nodo: NodoMcda, ruta: tuple[int, ...], hijos: tuple[NodoMcda, ...]) -> NodoMcda:
    if not ruta:
        return nodo.model_copy(update={"hijos": hijos})
    cabeza, *resto = ruta
    nuevos = list(nodo.hijos)
    nuevos[cabeza] = _reemplazar_hijos(nodo.hijos[cabeza], tuple(resto), hijos)
    return nodo.model_copy(update={"hijos": tuple(nuevos)})


def rebalancear_pesos(arbol: NodoMcda, objetivo: RutaNodo, nuevo_peso: float) -> NodoMcda:
    """Fija el peso de un nodo y reparte el resto entre sus hermanos no
    bloqueados, en proporción a sus pesos previos (uniforme si todos son 0).

    Solo cambia el grupo de hermanos del nodo editado.
    """
    if not 0.0 <= nuevo_peso <= 1.0:
        raise ErrorValidacion(f"El peso debe estar en [0, 1]; se recibió {nuevo_peso}.")
    ruta = resolver_ruta(arbol, objetivo)
    if not ruta:
        raise ErrorValidacion("La raíz no tiene peso que rebalancear.")

    *ruta_padre, indice = ruta
    padre = arbol
    for i in ruta_padre:
        padre = padre.hijos[i]
    hermanos = padre.hijos
    if hermanos[indice].peso == nuevo_peso:
        return arbol

    bloqueados = sum(h.peso for i, h in enumerate(hermanos) if i != indice and h.bloqueado)
    libres = [i for i, h in enumerate(hermanos) if i != indice and not h.bloqueado]
    if not libres:
        raise ErrorValidacion(
            f"El nodo '{hermanos[indice].nombre}' no tiene hermanos libres para absorber el cambio."
        )
    resto = 1.0 - bloqueados - nuevo_peso
    if resto < -TOLERANCIA_PESOS:
        raise ErrorValidacion(
            f"Los hermanos bloqueados suman {bloqueados:g}; no admiten un peso de {nuevo_peso:g}."
        )
    resto = max(0.0, resto)

    previos = sum(hermanos[i].peso for i in libres)
    pesos = [h.peso for h in hermanos]
    pesos[indice] = nuevo_peso
    for i in libres:
        pesos[i] = resto * (hermanos[i].peso / previos if previos > 0 else 1.0 / len(libres))
    # El último libre absorbe el error de redondeo.
    pesos[libres[-1]] = max(0.0, 1.0 - sum(p for i, p in enumerate(pesos) if i != libres[-1]))

    nuevos = tuple(h.model_copy(update={"peso": p}) for h, p in zip(hermanos, pesos))
    editado = _reemplazar_hijos(arbol, tuple(ruta_padre), nuevos)
    logger.debug("Rebalanceo en %s: %s", list(ruta), pesos)
    return NodoMcda.model_validate(editado.model_dump(by_alias=True, mode="json"))


# ================================================================
# ÁRBOL POR DEFECTO
# ================================================================

def _val_peso(minimo: float, maximo: float) -> FuncionValor:
    """val(min W)=0, val(0)=0.5, val(max W)=1, omitiendo anclas degeneradas."""
    puntos = []
    if minimo < 0:
        puntos.append((minimo, 0.0))
    puntos.append((0.0, 0.5))
    if maximo > 0:
        puntos.append((maximo, 1.0))
    return FuncionValor(puntos=tuple(puntos))


def _val_likert(creciente: bool) -> FuncionValor:
    return FuncionValor(puntos=((1.0, 0.0), (5.0, 1.0)) if creciente else ((1.0, 1.0), (5.0, 0.0)))


def _criterio(nombre: str, peso: float, metrica: str, val: FuncionValor) -> NodoMcda:
    return NodoMcda(
        tipo=TipoNodo.CRITERIO, nombre=nombre, peso=peso,
        hijos=(NodoMcda(tipo=TipoNodo.MODELO, nombre=metrica, peso=1.0,
                        modelo=ModeloMetrica(metrica=metrica, val=val)),),
    )


def construir_arbol_por_defecto(
    vector: VectorPesos,
    puntajes: PuntajesCriterio,
    cuota_datos: float = CUOTA_DATOS_POR_DEFECTO,
    puntajes_ranking: Mapping[str, float] | None = None,
) -> tuple[NodoMcda, list[Alternativa]]:
    """Raíz → "data-evidence" (peso = cuota_datos) y "expert-judgment"
    (1 − cuota_datos, con impacto, controlabilidad y dificultad a 1/3).

    El universo de factores es la unión de los factores con peso, con
    puntajes de criterio y con puntaje de ranking experto.
    """
    if not 0.0 <= cuota_datos <= 1.0:
        raise ErrorValidacion(f"La cuota de datos debe estar en [0, 1]; se recibió {cuota_datos}.")
    puntajes_ranking = dict(puntajes_ranking or {})
    universo = sorted(set(vector.pesos) | puntajes.factores | set(puntajes_ranking))
    if not universo:
        raise ErrorValidacion("Universo de factores vacío: no hay alternativas que ordenar.")

    pesos = [vector.pesos.get(f, 0.0) for f in universo]
    tercio = 1.0 / 3.0
    arbol = NodoMcda(
        tipo=TipoNodo.RAIZ, nombre="avalon",
        hijos=(
            NodoMcda(
                tipo=TipoNodo.DIRECTORIO, nombre="data-evidence", peso=cuota_datos,
                hijos=(_criterio("relevance", 1.0, METRICA_PESO, _val_peso(min(pesos), max(pesos))),),
            ),
            NodoMcda(
                tipo=TipoNodo.DIRECTORIO, nombre="expert-judgment", peso=1.0 - cuota_datos,
                hijos=(
                    _criterio("impact", tercio, METRICA_IMPACTO, _val_likert(True)),
                    _criterio("controllability", tercio, METRICA_CONTROLABILIDAD, _val_likert(True)),
                    _criterio("difficulty", 1.0 - 2 * tercio, METRICA_DIFICULTAD, _val_likert(False)),
                ),
            ),
        ),
    )

    alternativas = []
    for factor in universo:
        promedio = puntajes.promedio(factor)
        metricas: dict[str, float | str] = {
            METRICA_PESO: vector.pesos.get(factor, 0.0),
            METRICA_IMPACTO: promedio.impacto if promedio else LIKERT_NEUTRO,
            METRICA_CONTROLABILIDAD: promedio.controlabilidad if promedio else LIKERT_NEUTRO,
            METRICA_DIFICULTAD: promedio.dificultad if promedio else LIKERT_NEUTRO,
            METRICA_RANGO_EXPERTO: puntajes_ranking.get(factor, 0.0),
        }
        alternativas.append(Alternativa(factor, metricas))

    logger.info("Árbol AvalOn por defecto: %d alternativas, cuota de datos %.2f",
                len(alternativas), cuota_datos)
    return arbol, alternativas
