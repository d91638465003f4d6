"""
repositorio_proyectos.py — Repositorio de proyectos en CSV + esquema JSON.

Características del formato:
- CSV UTF-8, separador coma, primera fila = encabezado
- "?" (sin comillas) = celda faltante; la celda vacía es un error
- Esquema JSON: columna → {scale, role, category?, levels?}
"""

import csv
import json
import logging
import math
from pathlib import Path

from pydantic import ValidationError

from modelos.dataset import (
    FALTANTE, ConjuntoDatos, DescriptorFactor, Escala, RegistroProyecto, Rol, Valor,
    es_faltante,
)
from servicios.errores import ErrorFormato, ErrorValidacion

logger = logging.getLogger(__name__)

MARCA_FALTANTE: str = "?"
CLAVES_ESQUEMA: frozenset[str] = frozenset({"scale", "role", "category", "levels"})


class RepositorioProyectosCsv:
    """Lee y escribe el repositorio de proyectos con validación estricta."""

    # --- Métodos auxiliares para interpretar celdas ---

    def _interpretar(self, token: str, descriptor: DescriptorFactor,
                     id_registro: str, fila: int) -> Valor:
        """Convierte el texto de una celda al tipo de su escala."""
        if token == "":
            raise ErrorFormato(
                f"Celda vacía en el factor '{descriptor.nombre}' (use '?' para faltantes).",
                fila,
            )
        if token == MARCA_FALTANTE:
            return FALTANTE
        try:
            if descriptor.escala == Escala.ENTERA:
                return int(token)
            if descriptor.escala == Escala.CONTINUA:
                numero = float(token)
        except ValueError:
            raise ErrorValidacion(
                f"Valor '{token}' del factor '{descriptor.nombre}' en el registro "
                f"'{id_registro}' no es {descriptor.escala.value}."
            ) from None
        if descriptor.escala == Escala.CONTINUA:
            if not math.isfinite(numero):
                raise ErrorFormato(
                    f"Valor no finito '{token}' en el factor '{descriptor.nombre}' "
                    f"(use '?' para faltantes).",
                    fila,
                )
            return numero
        if token not in descriptor.niveles:
            raise ErrorValidacion(
                f"Nivel '{token}' del factor '{descriptor.nombre}' en el registro "
                f"'{id_registro}' no está declarado {list(descriptor.niveles)}."
            )
        return token

    def _formatear(self, valor: Valor) -> str:
        if es_faltante(valor):
            return MARCA_FALTANTE
        if isinstance(valor, float):
            return repr(valor)
        return str(valor)

    # --- Operaciones ---

    def cargar_esquema(self, ruta_esquema: Path) -> dict[str, DescriptorFactor]:
        """Lee el esquema JSON; claves desconocidas se rechazan."""
        ruta_esquema = Path(ruta_esquema)
        try:
            crudo = json.loads(ruta_esquema.read_text(encoding="utf-8"))
        except json.JSONDecodeError as ex:
            raise ErrorFormato(f"Esquema JSON inválido '{ruta_esquema}': {ex}") from ex
        if not isinstance(crudo, dict) or not crudo:
            raise ErrorFormato(f"El esquema '{ruta_esquema}' debe ser un objeto no vacío.")

        esquema: dict[str, DescriptorFactor] = {}
        for columna, definicion in crudo.items():
            if not isinstance(definicion, dict):
                raise ErrorFormato(f"Definición inválida para la columna '{columna}'.")
            desconocidas = sorted(set(definicion) - CLAVES_ESQUEMA)
            if desconocidas:
                raise ErrorValidacion(
                    f"Claves desconocidas en la columna '{columna}': {desconocidas}."
                )
            try:
                esquema[columna] = DescriptorFactor.model_validate(
                    {**definicion, "nombre": columna}
                )
            except ValidationError as ex:
                raise ErrorValidacion(
                    f"Esquema inválido para la columna '{columna}': {ex}"
                ) from ex
        return esquema

    def cargar_dataset(self, ruta_datos: Path, ruta_esquema: Path) -> ConjuntoDatos:
        """Lee el CSV de proyectos y lo valida contra el esquema."""
        ruta_datos = Path(ruta_datos)
        esquema = self.cargar_esquema(ruta_esquema)

        with ruta_datos.open(encoding="utf-8", newline="") as archivo:
            lector = csv.reader(archivo)
            try:
                encabezado = next(lector)
            except StopIteration:
                raise ErrorFormato(f"El archivo '{ruta_datos}' está vacío.") from None

            if len(set(encabezado)) != len(encabezado):
                raise ErrorFormato("Columnas repetidas en el encabezado.", 1)
            no_declaradas = [c for c in encabezado if c not in esquema]
            if no_declaradas:
                raise ErrorValidacion(
                    f"Columnas sin declarar en el esquema: {no_declaradas}."
                )
            ignoradas = [c for c in esquema if c not in encabezado]
            if ignoradas:
                logger.debug("Columnas del esquema ausentes en los datos: %s", ignoradas)

            descriptores = [esquema[c] for c in encabezado]
            columna_id = next(
                (i for i, d in enumerate(descriptores) if d.rol == Rol.IDENTIFICADOR),
                None,
            )

            registros: list[RegistroProyecto] = []
            for fila in lector:
                numero = lector.line_num
                if not fila:
                    continue
                if len(fila) != len(encabezado):
                    raise ErrorFormato(
                        f"Se esperaban {len(encabezado)} columnas y hay {len(fila)}.",
                        numero,
                    )
                if columna_id is None:
                    id_registro = str(len(registros) + 1)
                else:
                    id_registro = fila[columna_id].strip()
                    if id_registro in ("", MARCA_FALTANTE):
                        raise ErrorFormato("Identificador de proyecto vacío o faltante.", numero)

                valores = {
                    d.nombre: self._interpretar(token.strip(), d, id_registro, numero)
                    for i, (d, token) in enumerate(zip(descriptores, fila))
                    if i != columna_id
                }
                registros.append(RegistroProyecto(id_registro, valores))

        conjunto = ConjuntoDatos(tuple(descriptores), tuple(registros))
        logger.info(
            "Cargados %d proyectos y %d factores independientes desde '%s'",
            len(conjunto), len(conjunto.independientes), ruta_datos,
        )
        return conjunto

    def guardar_dataset(self, conjunto: ConjuntoDatos, ruta_datos: Path) -> Path:
        ruta_datos = Path(ruta_datos)
        ruta_datos.parent.mkdir(parents=True, exist_ok=True)
        nombres = [d.nombre for d in conjunto.descriptores]
        with ruta_datos.open("w", encoding="utf-8", newline="") as archivo:
            escritor = csv.writer(archivo, lineterminator="\n")
            escritor.writerow(nombres)
            for registro in conjunto.registros:
                escritor.writerow([
                    registro.id if d.rol == Rol.IDENTIFICADOR
                    else self._formatear(registro.valor(d.nombre))
                    for d in conjunto.descriptores
                ])
        return ruta_datos
