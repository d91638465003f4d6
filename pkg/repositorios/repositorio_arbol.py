"""
repositorio_arbol.py — Especificación JSON del árbol AvalOn.

Formato: nodos {kind, name?, weight, lock?, children? | model: {metric, val}}.
La raíz no lleva peso y debe ser de tipo "root".
"""

import json
import logging
from pathlib import Path

from pydantic import ValidationError

from modelos.mcda import NodoMcda, TipoNodo
from servicios.errores import ErrorFormato, ErrorValidacion

logger = logging.getLogger(__name__)


class RepositorioArbolJson:

    def cargar_arbol(self, ruta: Path) -> NodoMcda:
        """Lee y valida el árbol completo contra las invariantes de NodoMcda."""
        ruta = Path(ruta)
        try:
            crudo = json.loads(ruta.read_text(encoding="utf-8"))
        except json.JSONDecodeError as ex:
            raise ErrorFormato(f"Árbol JSON inválido '{ruta}': {ex}") from ex
        try:
            arbol = NodoMcda.model_validate(crudo)
        except ValidationError as ex:
            raise ErrorValidacion(f"Árbol inválido '{ruta}': {ex}") from ex
        if arbol.tipo != TipoNodo.RAIZ:
            raise ErrorValidacion(f"El nodo superior de '{ruta.name}' debe ser 'root', no '{arbol.tipo.value}'.")
        logger.info("Árbol cargado desde %s (%d métricas)", ruta, len(arbol.metricas()))
        return arbol

    def guardar_arbol(self, arbol: NodoMcda, ruta: Path) -> Path:
        ruta = Path(ruta)
        ruta.parent.mkdir(parents=True, exist_ok=True)
        ruta.write_text(
            arbol.model_dump_json(by_alias=True, exclude_none=True, indent=2) + "\n",
            encoding="utf-8",
        )
        return ruta
