"""SQLAlchemy model for the run registry."""
from __future__ import annotations

from datetime import datetime

from sea_dyn.db import db


class RunRecord(db.Model):
    __tablename__ = "runs"
    id = db.Column(db.String, primary_key=True)
    preset = db.Column(db.String)
    status = db.Column(db.String, nullable=False, default="completed")
    model_kind = db.Column(db.String)
    gamma = db.Column(db.Float)
    lam = db.Column("lambda", db.Float)
    t_final = db.Column(db.Float)
    beta_eff = db.Column(db.Float)
    final_fidelity = db.Column(db.Float)
    final_abs_rho01 = db.Column(db.Float)
    max_fidelity_deviation = db.Column(db.Float)
    monitor = db.Column(db.Text)
    config = db.Column(db.Text)
    csv_path = db.Column(db.String)
    wall_time = db.Column(db.Float)
    error = db.Column(db.String)
    created_at = db.Column(db.DateTime, default=datetime.utcnow)
