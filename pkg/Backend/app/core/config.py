from functools import lru_cache
from pathlib import Path
from typing import Annotated

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict


BACKEND_ROOT = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    app_name: str = "Interval Window Bench"
    debug: bool = False
    log_level: str = "INFO"
    database_url: str = "sqlite:///./interval_bench.db"

    default_window: int = Field(default=200, ge=2)
    default_beta: float = Field(default=0.1, gt=0)
    default_delta: float = Field(default=0.2, gt=0)
    default_sample_every: int = Field(default=1, ge=1)
    oracle_max_window: int = Field(default=10_000, ge=2)
    cp_split_rule: str = "witness"
    check_invariants: bool = True

    max_api_stream_length: int = Field(default=20_000, ge=1)
    runs_rate_limit_per_min: int = 30

    cors_origins: Annotated[list[str], NoDecode] = Field(default_factory=lambda: [
        "http://localhost:3000",
        "http://127.0.0.1:5500",
    ])
    trusted_hosts: Annotated[list[str], NoDecode] = Field(default_factory=lambda: [
        "localhost",
        "127.0.0.1",
        "testserver",
    ])

    model_config = SettingsConfigDict(
        env_file=str(BACKEND_ROOT / ".env"),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("cp_split_rule")
    @classmethod
    def normalize_split_rule(cls, value: str) -> str:
        normalized = value.strip().lower()
        if normalized not in {"witness", "arriving"}:
            raise ValueError("cp_split_rule must be 'witness' or 'arriving'")
        return normalized

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, value: str) -> str:
        return value.strip().upper()

    @field_validator("cors_origins", "trusted_hosts", mode="before")
    @classmethod
    def parse_comma_list(cls, value: str | list[str]) -> list[str]:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value


@lru_cache
def get_settings() -> Settings:
    return Settings()
