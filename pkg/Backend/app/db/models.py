from datetime import datetime
from typing import Any

from sqlalchemy import Boolean, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import Mapped, mapped_column
from sqlalchemy.types import JSON

from app.db.base import Base


class BenchmarkRunRecord(Base):
    __tablename__ = "benchmark_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[str] = mapped_column(String(64), unique=True, index=True)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), index=True)

    algorithm: Mapped[str] = mapped_column(String(20), index=True)
    window: Mapped[int] = mapped_column(Integer)
    beta: Mapped[float] = mapped_column(Float)
    delta: Mapped[float] = mapped_column(Float)
    split_rule: Mapped[str] = mapped_column(String(20))
    stream: Mapped[str] = mapped_column(Text)
    oracle_enabled: Mapped[bool] = mapped_column(Boolean, default=False)

    steps: Mapped[int] = mapped_column(Integer, default=0)
    max_ratio: Mapped[float | None] = mapped_column(Float, nullable=True)
    final_ratio: Mapped[float | None] = mapped_column(Float, nullable=True)
    max_stored_intervals: Mapped[int] = mapped_column(Integer, default=0)
    max_run_count: Mapped[int] = mapped_column(Integer, default=0)

    config: Mapped[dict[str, Any]] = mapped_column(JSON)
    summary: Mapped[dict[str, Any]] = mapped_column(JSON)
    records: Mapped[list[dict[str, Any]]] = mapped_column(JSON, default=list)
