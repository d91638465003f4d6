"""
errores.py — Excepciones del dominio.

Extienden las excepciones nativas que la capa de presentación ya sabe
traducir: ValueError → datos inválidos (HTTP 400 / salida 1),
RuntimeError → fallo de ejecución (HTTP 500 / salida 2).
"""


class ErrorValidacion(ValueError):
    """Datos de entrada que no cumplen el esquema o un invariante."""


class ErrorFormato(ErrorValidacion):
    """Archivo mal formado (aridad, token vacío, JSON inválido)."""

    def __init__(self, mensaje: str, fila: int | None = None):
        self.fila = fila
        if fila is not None:
            mensaje = f"Fila {fila}: {mensaje}"
        super().__init__(mensaje)


class ErrorEtapa(RuntimeError):
    """Falla de una etapa del pipeline; conserva el nombre de la etapa."""

    def __init__(self, etapa: str, causa: Exception):
        self.etapa = etapa
        self.causa = causa
        super().__init__(f"Etapa '{etapa}' falló: {causa}")
