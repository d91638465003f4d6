"""Paquete de repositorios — Lectura y escritura de archivos del análisis."""

from .repositorio_artefactos import RepositorioArtefactos
from .repositorio_expertos import RepositorioExpertosCsv
from .repositorio_proyectos import RepositorioProyectosCsv

__all__ = [
    "RepositorioArtefactos",
    "RepositorioExpertosCsv",
    "RepositorioProyectosCsv",
]
