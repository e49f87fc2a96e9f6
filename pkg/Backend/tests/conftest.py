import os
from collections.abc import Iterator

os.environ.setdefault("DATABASE_URL", "sqlite:///:memory:")

import pytest
from sqlalchemy.orm import Session, sessionmaker


@pytest.fixture
def api_client(tmp_path) -> Iterator:
    from fastapi.testclient import TestClient

    from app.core.security import runs_rate_limiter
    from app.db.session import build_engine, get_db_session, init_db
    from app.main import app

    engine = build_engine(f"sqlite:///{tmp_path / 'runs.db'}")
    init_db(bind=engine)
    TestingSession = sessionmaker(bind=engine, autocommit=False, autoflush=False, class_=Session)

    def override_session():
        session = TestingSession()
        try:
            yield session
        finally:
            session.close()

    app.dependency_overrides[get_db_session] = override_session
    runs_rate_limiter.reset()
    with TestClient(app) as client:
        yield client
    app.dependency_overrides.clear()
    engine.dispose()
