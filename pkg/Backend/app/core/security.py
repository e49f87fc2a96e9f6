from collections import defaultdict, deque
from datetime import datetime, timedelta, timezone
from threading import Lock

from fastapi import Depends, HTTPException, Request, status
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.config import Settings, get_settings

UTC = timezone.utc


class SecurityHeadersMiddleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Content-Type-Options"] = "nosniff"
        response.headers["X-Frame-Options"] = "DENY"
        response.headers["Referrer-Policy"] = "no-referrer"
        response.headers["Cache-Control"] = "no-store"
        return response


class SlidingRateLimiter:
    """Per-client request counter over a trailing time window."""

    def __init__(self, window_seconds: int = 60) -> None:
        self.window_seconds = window_seconds
        self._hits: dict[str, deque[datetime]] = defaultdict(deque)
        self._lock = Lock()

    def hit(self, key: str, max_requests: int) -> bool:
        if max_requests <= 0:
            return True
        now = datetime.now(UTC)
        cutoff = now - timedelta(seconds=self.window_seconds)
        with self._lock:
            hits = self._hits[key]
            while hits and hits[0] < cutoff:
                hits.popleft()
            if len(hits) >= max_requests:
                return False
            hits.append(now)
            return True

    def reset(self) -> None:
        with self._lock:
            self._hits.clear()


runs_rate_limiter = SlidingRateLimiter()


def client_key(request: Request) -> str:
    forwarded = request.headers.get("x-forwarded-for", "")
    if forwarded:
        return forwarded.split(",")[0].strip()
    return request.client.host if request.client else "unknown"


def rate_limit_runs(request: Request, settings: Settings = Depends(get_settings)) -> None:
    if not runs_rate_limiter.hit(f"runs:{client_key(request)}", settings.runs_rate_limit_per_min):
        raise HTTPException(
            status_code=status.HTTP_429_TOO_MANY_REQUESTS,
            detail="Too many benchmark runs. Please wait and try again.",
        )
