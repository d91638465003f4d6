"""Paquete de modelos — Tipos del dominio."""
