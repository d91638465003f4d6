"""Contrato para leer las entradas de los expertos."""

from pathlib import Path
from typing import Protocol

from modelos.expertos import PerfilExperto, PuntajesCriterio, RankingsExpertos


class IRepositorioExpertos(Protocol):

    def cargar_rankings(self, ruta: Path) -> RankingsExpertos:
        """expert_id,category,factor,rank"""
        ...

    def cargar_puntajes(self, ruta: Path) -> PuntajesCriterio:
        """expert_id,factor,impact,difficulty,controllability"""
        ...

    def cargar_perfiles(self, ruta: Path) -> list[PerfilExperto]:
        """expert_id,role,years_experience,projects_performed"""
        ...
