from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, model_validator

from app.core.config import get_settings
from app.models.interval import SplitRule


class AlgorithmName(str, Enum):
    unit = "unit"
    cp = "cp"
    smooth = "smooth"
    improved = "improved"
    oracle = "oracle"


class OutputFormat(str, Enum):
    csv = "csv"
    jsonl = "jsonl"


class StreamKind(str, Enum):
    unit_index = "unit_index"
    chain3 = "chain3"
    appendix_hard = "appendix_hard"
    random_unit = "random_unit"
    random_arbitrary = "random_arbitrary"


class StreamSpec(BaseModel):
    """Generator selection parsed from strings like ``random_unit:n=1000,range=0..100,seed=7``."""

    kind: StreamKind
    params: dict[str, str] = Field(default_factory=dict)

    def __str__(self) -> str:
        if not self.params:
            return self.kind.value
        joined = ",".join(f"{key}={value}" for key, value in self.params.items())
        return f"{self.kind.value}:{joined}"


class HarnessConfig(BaseModel):
    algorithm: AlgorithmName
    window: int = Field(..., ge=2)
    beta: float = Field(default_factory=lambda: get_settings().default_beta, gt=0)
    delta: float = Field(default_factory=lambda: get_settings().default_delta, gt=0)
    stream: str = Field(..., min_length=1)
    # None lets the harness decide from the window length.
    oracle_enabled: bool | None = None
    sample_every: int = Field(default=1, ge=1)
    output_path: Path | None = None
    output_format: OutputFormat = OutputFormat.csv
    split_rule: SplitRule = Field(default_factory=lambda: SplitRule(get_settings().cp_split_rule))
    check_invariants: bool = Field(default_factory=lambda: get_settings().check_invariants)

    @property
    def effective_beta(self) -> float:
        if self.algorithm == AlgorithmName.improved:
            return self.delta / 2
        return self.beta

    @property
    def beta_overridden(self) -> bool:
        return (
            self.algorithm == AlgorithmName.improved
            and "beta" in self.model_fields_set
            and self.beta != self.effective_beta
        )


class MetricsRecord(BaseModel):
    step: int = Field(..., ge=0)
    alg_size: int = Field(..., ge=0)
    opt_size: int | None = Field(default=None, ge=0)
    ratio: float | None = None
    stored_intervals: int = Field(..., ge=0)
    run_count: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_ratio_presence(self) -> "MetricsRecord":
        expected = self.opt_size is not None and self.alg_size > 0
        if (self.ratio is not None) != expected:
            raise ValueError("ratio is present exactly when opt_size is known and alg_size > 0")
        return self


class MetricsSummary(BaseModel):
    step: int = 0
    max_ratio: float | None = None
    max_stored_intervals: int = 0
    max_run_count: int = 0
    final_alg_size: int = 0
    final_opt_size: int | None = None
    final_ratio: float | None = None
    oracle_enabled: bool = False

    def absorb(self, record: MetricsRecord) -> None:
        self.step = record.step
        self.max_stored_intervals = max(self.max_stored_intervals, record.stored_intervals)
        self.max_run_count = max(self.max_run_count, record.run_count)
        self.final_alg_size = record.alg_size
        self.final_opt_size = record.opt_size
        self.final_ratio = record.ratio
        if record.ratio is not None and (self.max_ratio is None or record.ratio > self.max_ratio):
            self.max_ratio = record.ratio


class RunResult(BaseModel):
    config: HarnessConfig
    summary: MetricsSummary
    records: list[MetricsRecord] = Field(default_factory=list)
