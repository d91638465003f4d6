"""
config.py — Configuración centralizada usando pydantic-settings.

Lee variables desde archivos .env según el entorno:
- Production:  solo .env
- Development: .env + .env.development (sobrescribe valores)

Prioridad: flags de la CLI y campos del manifiesto > variables de entorno
> valores por defecto de cada sección.
"""

import os
from functools import lru_cache
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# ================================================================
# DETECCIÓN DE ENTORNO
# ================================================================

def get_environment() -> str:
    """Detecta el entorno actual desde la variable ENVIRONMENT."""
    return os.getenv("ENVIRONMENT", "production").lower()


def get_env_file() -> str | tuple[str, str]:
    """
    Retorna qué archivo(s) .env cargar.
    En development carga ambos; en production solo .env.
    """
    env = get_environment()
    if env == "development":
        env_dev = ".env.development"
        if os.path.exists(env_dev):
            return (".env", env_dev)
    return ".env"


def _config_seccion(prefijo: str) -> SettingsConfigDict:
    return SettingsConfigDict(
        env_file=get_env_file(),
        env_file_encoding='utf-8',
        env_prefix=prefijo,
        extra='ignore'
    )


# ================================================================
# SECCIONES
# ================================================================

class ImputacionSettings(BaseSettings):
    """Imputación hot-deck k-NN."""

    model_config = _config_seccion('IMPUTE_')

    k: int = Field(default=5, ge=1)


class ReliefSettings(BaseSettings):
    """RReliefF: vecinos, decaimiento de influencia e instancias muestreadas."""

    model_config = _config_seccion('RELIEF_')

    k: int = Field(default=10, ge=1)
    sigma: float = Field(default=20.0, gt=0)
    m: int | None = Field(default=None, ge=1)   # None → barrido completo


class EstimacionSettings(BaseSettings):
    model_config = _config_seccion('ESTIMATOR_')

    knn_k: int = Field(default=3, ge=1)
    osr_bins: int = Field(default=4, ge=2)
    osr_classes: int = Field(default=3, ge=2)
    osr_min_subset: int = Field(default=5, ge=2)


class EvaluacionSettings(BaseSettings):
    model_config = _config_seccion('EVAL_')

    alpha: float = Field(default=0.02, gt=0, lt=1)
    pred_level: float = Field(default=0.25, gt=0)
    jobs: int = Field(default=1, ge=1)


class SeleccionSettings(BaseSettings):
    """Umbrales de poda, cuota de datos en AvalOn y cortes de conjuntos."""

    model_config = _config_seccion('SELECT_')

    factor_threshold: float = Field(default=0.90, gt=0, le=1)
    project_threshold: float = Field(default=0.55, gt=0, le=1)
    data_share: float = Field(default=0.5, ge=0, le=1)
    top_fraction: float = Field(default=0.25, gt=0, le=1)
    top_fraction_relevant: float = Field(default=0.10, gt=0, le=1)
    integrated_threshold: float = Field(default=0.5, ge=0, le=1)
    seed: int = Field(default=0)


# ================================================================
# CONFIGURACIÓN PRINCIPAL
# ================================================================

class Settings(BaseSettings):
    """Agrupa toda la configuración de la aplicación."""

    model_config = SettingsConfigDict(
        env_file=get_env_file(),
        env_file_encoding='utf-8',
        extra='ignore'
    )

    debug: bool = Field(default=False, alias='DEBUG')
    environment: str = Field(default_factory=get_environment)
    log_level: str = Field(default='INFO', alias='LOG_LEVEL')
    imputacion: ImputacionSettings = Field(default_factory=ImputacionSettings)
    relief: ReliefSettings = Field(default_factory=ReliefSettings)
    estimacion: EstimacionSettings = Field(default_factory=EstimacionSettings)
    evaluacion: EvaluacionSettings = Field(default_factory=EvaluacionSettings)
    seleccion: SeleccionSettings = Field(default_factory=SeleccionSettings)


# ================================================================
# SINGLETON (se crea una sola vez y se reutiliza)
# ================================================================

@lru_cache()
def get_settings() -> Settings:
    """Obtiene la configuración cacheada (singleton)."""
    return Settings()
