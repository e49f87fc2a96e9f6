from datetime import datetime

from pydantic import BaseModel, Field, field_validator

from app.models.harness import AlgorithmName, MetricsRecord, MetricsSummary
from app.models.interval import SplitRule
from app.services.stream_source import looks_like_spec


class RunRequest(BaseModel):
    algorithm: AlgorithmName
    window: int = Field(..., ge=2, le=100_000)
    beta: float | None = Field(default=None, gt=0)
    delta: float | None = Field(default=None, gt=0)
    stream: str = Field(..., min_length=1, max_length=2_000)
    oracle_enabled: bool | None = None
    sample_every: int = Field(default=1, ge=1)
    split_rule: SplitRule | None = None
    include_records: bool = True

    @field_validator("stream")
    @classmethod
    def validate_generator_spec(cls, value: str) -> str:
        cleaned = value.strip()
        if not looks_like_spec(cleaned):
            raise ValueError("stream must be a generator spec such as random_unit:n=1000,seed=7")
        return cleaned


class RunListItem(BaseModel):
    run_id: str
    created_at: datetime
    algorithm: AlgorithmName
    window: int
    beta: float
    delta: float
    split_rule: SplitRule
    stream: str
    steps: int
    max_ratio: float | None = None
    final_ratio: float | None = None


class RunDetailResponse(RunListItem):
    summary: MetricsSummary
    records: list[MetricsRecord] = Field(default_factory=list)
