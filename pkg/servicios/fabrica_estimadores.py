"""
fabrica_estimadores.py — Factory centralizada de estimadores.

Crea el estimador que corresponde al campo `type` de su configuración.
Agregar un nuevo estimador = agregar 1 línea al diccionario.
"""

from modelos.configuraciones import ConfigEstimador, ConfigKnn, ConfigOsr
from servicios.abstracciones.i_estimador import IEstimador
from servicios.errores import ErrorValidacion
from servicios.servicio_estimacion import EstimadorKnn, EstimadorOsr

# Diccionario: tipo → (clase de configuración, clase del estimador)
_ESTIMADORES = {
    "knn": (ConfigKnn, EstimadorKnn),
    "osr": (ConfigOsr, EstimadorOsr),
}


def tipos_disponibles() -> list[str]:
    return list(_ESTIMADORES)


def crear_estimador(config: ConfigEstimador | str, **parametros) -> IEstimador:
    """Crea el estimador a partir de su configuración o de su tipo."""
    tipo = config if isinstance(config, str) else config.tipo
    registrado = _ESTIMADORES.get(tipo)
    if registrado is None:
        raise ErrorValidacion(
            f"Estimador '{tipo}' no registrado. Opciones: {tipos_disponibles()}"
        )
    clase_config, clase_estimador = registrado
    if isinstance(config, str):
        config = clase_config(**parametros)
    return clase_estimador(config)
