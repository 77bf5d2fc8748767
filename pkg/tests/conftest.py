import numpy as np
import pytest

from sea_dyn.modules.operator_algebra import random_density_matrix, random_hermitian


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def random_state(rng):
    """Full-rank Ginibre density matrix of the requested dimension."""
    return lambda dim: random_density_matrix(rng, dim)


@pytest.fixture
def random_herm(rng):
    return lambda dim: random_hermitian(rng, dim)


@pytest.fixture
def app(tmp_path, monkeypatch):
    monkeypatch.delenv("SENTRY_DSN", raising=False)
    from sea_dyn.app import create_app

    app = create_app({
        "TESTING": True,
        "SQLALCHEMY_DATABASE_URI": "sqlite://",
        "OUTPUT_DIR": str(tmp_path / "runs"),
    })
    yield app


@pytest.fixture
def client(app):
    return app.test_client()
