"""Configuración única del logging de la aplicación."""

import logging
import sys

FORMATO: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configurar_registro(nivel: str = "INFO") -> logging.Logger:
    """Mensajes a stderr; stdout queda libre para las tablas de resultados."""
    logging.basicConfig(format=FORMATO, stream=sys.stderr)
    raiz = logging.getLogger()
    raiz.setLevel(nivel.upper())
    return raiz
