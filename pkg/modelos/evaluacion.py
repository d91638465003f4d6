"""Registros de validación cruzada, métricas, ANOVA y reporte comparativo."""

from pydantic import BaseModel, ConfigDict, Field

from modelos.estimacion import TrazaOsr


class _Modelo(BaseModel):
    model_config = ConfigDict(frozen=True)


class RegistroEstimacion(_Modelo):
    id_proyecto: str
    real: float = Field(gt=0)
    estimado: float
    mre: float = Field(ge=0)
    traza: TrazaOsr | None = None


class ResumenMetricas(_Modelo):
    mmre: float
    mdmre: float
    pred25: float = Field(ge=0, le=1)
    n: int


class ResultadoAnova(_Modelo):
    f: float = Field(ge=0)
    p: float = Field(ge=0, le=1)
    significativo: bool
    gl_entre: int = 1
    gl_dentro: int
    degenerado: bool = False


class FilaReporte(_Modelo):
    estimador: str
    conjunto: str
    factores: tuple[str, ...]
    resumen: ResumenMetricas
    registros: tuple[RegistroEstimacion, ...]

    @property
    def mres(self) -> list[float]:
        return [r.mre for r in self.registros]


class ComparacionAnova(_Modelo):
    estimador: str
    conjunto_a: str
    conjunto_b: str
    resultado: ResultadoAnova


class ReporteEvaluacion(_Modelo):
    filas: tuple[FilaReporte, ...]
    anova: tuple[ComparacionAnova, ...] = ()
    elegibles: int
    excluidos: int = 0
    alfa: float = 0.02

    def fila(self, estimador: str, conjunto: str) -> FilaReporte:
        for f in self.filas:
            if f.estimador == estimador and f.conjunto == conjunto:
                return f
        raise LookupError(f"No hay fila ({estimador}, {conjunto}) en el reporte.")

    def comparacion(self, estimador: str, a: str, b: str) -> ComparacionAnova:
        for c in self.anova:
            if c.estimador == estimador and {c.conjunto_a, c.conjunto_b} == {a, b}:
                return c
        raise LookupError(f"No hay ANOVA ({estimador}: {a} vs {b}) en el reporte.")
