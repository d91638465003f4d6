"""Paquete de controladores."""

from .analisis_controller import router as analisis_controller

__all__ = ["analisis_controller"]
