import logging

from fastapi import APIRouter, Depends, HTTPException, Query, status
from pydantic import ValidationError
from sqlalchemy.orm import Session

from app.core.config import Settings, get_settings
from app.core.errors import InvariantViolationError, StreamError
from app.core.security import rate_limit_runs
from app.db.models import BenchmarkRunRecord
from app.db.session import get_db_session
from app.models.harness import HarnessConfig
from app.models.runs import RunDetailResponse, RunListItem, RunRequest
from app.services.bench_harness import run_harness
from app.services.run_ledger import RunLedgerService, get_run_ledger_service
from app.services.stream_source import build_stream, expected_length, parse_stream_spec

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/runs", tags=["runs"])


def _list_item(entry: BenchmarkRunRecord) -> RunListItem:
    return RunListItem(
        run_id=entry.run_id,
        created_at=entry.created_at,
        algorithm=entry.algorithm,
        window=entry.window,
        beta=entry.beta,
        delta=entry.delta,
        split_rule=entry.split_rule,
        stream=entry.stream,
        steps=entry.steps,
        max_ratio=entry.max_ratio,
        final_ratio=entry.final_ratio,
    )


def _detail(entry: BenchmarkRunRecord, include_records: bool = True) -> RunDetailResponse:
    return RunDetailResponse(
        **_list_item(entry).model_dump(),
        summary=entry.summary,
        records=RunLedgerService.stored_records(entry) if include_records else [],
    )


@router.post("", response_model=RunDetailResponse, status_code=status.HTTP_201_CREATED)
def create_run(
    payload: RunRequest,
    db: Session = Depends(get_db_session),
    ledger: RunLedgerService = Depends(get_run_ledger_service),
    settings: Settings = Depends(get_settings),
    _: None = Depends(rate_limit_runs),
) -> RunDetailResponse:
    values = payload.model_dump(exclude={"include_records"}, exclude_none=True)
    try:
        config = HarnessConfig(**values)
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=exc.errors(include_url=False)) from exc

    try:
        spec = parse_stream_spec(config.stream)
        length = expected_length(spec)
        if length > settings.max_api_stream_length:
            raise HTTPException(
                status_code=422,
                detail=f"stream has {length} intervals; the API accepts at most {settings.max_api_stream_length}",
            )
        intervals = build_stream(spec)
        logger.info("generated %s intervals from %s", len(intervals), spec)
        result = run_harness(config, intervals)
    except StreamError as exc:
        raise HTTPException(status_code=422, detail=exc.message) from exc
    except InvariantViolationError as exc:
        logger.error("invariant violation during API run: %s", exc.message)
        raise HTTPException(status_code=500, detail=exc.message) from exc

    entry = ledger.record(db, result)
    return _detail(entry, include_records=payload.include_records)


@router.get("", response_model=list[RunListItem])
def list_runs(
    limit: int = Query(default=20, ge=1, le=200),
    algorithm: str | None = Query(default=None, max_length=20),
    db: Session = Depends(get_db_session),
    ledger: RunLedgerService = Depends(get_run_ledger_service),
) -> list[RunListItem]:
    return [_list_item(entry) for entry in ledger.list_recent(db, limit=limit, algorithm=algorithm)]


@router.get("/{run_id}", response_model=RunDetailResponse)
def get_run(
    run_id: str,
    db: Session = Depends(get_db_session),
    ledger: RunLedgerService = Depends(get_run_ledger_service),
) -> RunDetailResponse:
    entry = ledger.get(db, run_id)
    if entry is None:
        raise HTTPException(status_code=404, detail="Run not found")
    return _detail(entry)
