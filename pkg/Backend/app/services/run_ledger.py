import logging
from datetime import datetime, timezone
from functools import lru_cache
from uuid import uuid4

from sqlalchemy import select
from sqlalchemy.orm import Session

from app.db.models import BenchmarkRunRecord
from app.models.harness import MetricsRecord, RunResult

UTC = timezone.utc

logger = logging.getLogger(__name__)


class RunLedgerService:
    """Persists harness run summaries so runs can be compared later."""

    def __init__(self, max_stored_records: int = 5_000) -> None:
        self._max_stored_records = max_stored_records

    def record(self, session: Session, result: RunResult) -> BenchmarkRunRecord:
        config = result.config
        summary = result.summary
        records = result.records
        if len(records) > self._max_stored_records:
            logger.warning(
                "storing the last %s of %s sampled records", self._max_stored_records, len(records)
            )
            records = records[-self._max_stored_records:]

        entry = BenchmarkRunRecord(
            run_id=str(uuid4()),
            created_at=datetime.now(UTC),
            algorithm=config.algorithm.value,
            window=config.window,
            beta=config.effective_beta,
            delta=config.delta,
            split_rule=config.split_rule.value,
            stream=config.stream,
            oracle_enabled=summary.oracle_enabled,
            steps=summary.step,
            max_ratio=summary.max_ratio,
            final_ratio=summary.final_ratio,
            max_stored_intervals=summary.max_stored_intervals,
            max_run_count=summary.max_run_count,
            config=config.model_dump(mode="json"),
            summary=summary.model_dump(mode="json"),
            records=[record.model_dump(mode="json") for record in records],
        )
        session.add(entry)
        session.commit()
        session.refresh(entry)
        return entry

    def list_recent(self, session: Session, limit: int = 20, algorithm: str | None = None) -> list[BenchmarkRunRecord]:
        statement = select(BenchmarkRunRecord).order_by(BenchmarkRunRecord.id.desc()).limit(limit)
        if algorithm is not None:
            statement = statement.where(BenchmarkRunRecord.algorithm == algorithm)
        return list(session.execute(statement).scalars().all())

    def get(self, session: Session, run_id: str) -> BenchmarkRunRecord | None:
        statement = select(BenchmarkRunRecord).where(BenchmarkRunRecord.run_id == run_id)
        return session.execute(statement).scalar_one_or_none()

    @staticmethod
    def stored_records(entry: BenchmarkRunRecord) -> list[MetricsRecord]:
        return [MetricsRecord.model_validate(item) for item in entry.records or []]


@lru_cache
def get_run_ledger_service() -> RunLedgerService:
    return RunLedgerService()
