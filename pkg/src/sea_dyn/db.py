"""Database wiring for the run registry: Flask-SQLAlchemy.

DATABASE_URL selects the database; without it runs are recorded in a local
SQLite file. The ORM model lives in `sea_dyn/models.py`.
"""
from __future__ import annotations

import os

from flask import Flask
from flask_sqlalchemy import SQLAlchemy

db = SQLAlchemy()

DEFAULT_DATABASE_URL = "sqlite:///sea_dyn_runs.db"


def get_database_url() -> str:
    return os.environ.get("DATABASE_URL") or DEFAULT_DATABASE_URL


def init_db(app: Flask) -> None:
    app.config.setdefault("SQLALCHEMY_DATABASE_URI", get_database_url())
    app.config["SQLALCHEMY_TRACK_MODIFICATIONS"] = False
    app.config.setdefault("SQLALCHEMY_ENGINE_OPTIONS", {"pool_pre_ping": True})
    db.init_app(app)

    from sea_dyn import models  # noqa: F401  Register RunRecord with `db`

    # single table, created in place
    with app.app_context():
        db.create_all()
