"""
HTTP run service
Scenario runs over a small JSON API, with every run recorded in a
Flask-SQLAlchemy registry
"""
from __future__ import annotations

import json
import logging
import os
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any

from flask import Flask, jsonify, request
from sentry_sdk.integrations.flask import FlaskIntegration
from sqlalchemy import text

from sea_dyn import __version__
from sea_dyn.db import db, init_db
from sea_dyn.error_reporting import configure_logging, init_error_reporting
from sea_dyn.errors import ConfigError, IntegrationAbort
from sea_dyn.models import RunRecord
from sea_dyn.modules.scenario_cli import parse_document, preset_config, preset_ids, run_scenario

logger = logging.getLogger(__name__)

MODULES = [
    {"name": "operator-algebra", "description": "Hermitian eigensystems, rho ln rho, commutators and the real scalar product"},
    {"name": "sea-dissipator", "description": "SEA coefficients, dissipator, master-equation right-hand side and Gram oracle"},
    {"name": "hamiltonian-models", "description": "Static, rotating-field, Landau-Zener and tabulated Hamiltonians with adiabatic diagnostics"},
    {"name": "evolution-engine", "description": "Runge-Kutta integration with structure restoration and conservation monitors"},
    {"name": "observables-thermo", "description": "Trajectory observables, canonical states and effective temperature"},
    {"name": "scenario-cli", "description": "Scenario documents, presets, runs, sweeps and the verify suite"},
]


def _now() -> str:
    return datetime.utcnow().isoformat() + "Z"


def serialize_run(r: RunRecord) -> dict[str, Any]:
    return {
        "id": r.id,
        "preset": r.preset,
        "status": r.status,
        "modelKind": r.model_kind,
        "gamma": r.gamma,
        "lambda": r.lam,
        "tFinal": r.t_final,
        "betaEff": r.beta_eff,
        "finalFidelity": r.final_fidelity,
        "finalAbsRho01": r.final_abs_rho01,
        "maxFidelityDeviation": r.max_fidelity_deviation,
        "monitor": json.loads(r.monitor) if r.monitor else None,
        "config": json.loads(r.config) if r.config else None,
        "csvPath": r.csv_path,
        "wallTime": r.wall_time,
        "error": r.error,
        "createdAt": r.created_at.isoformat() + "Z" if r.created_at else None,
    }


def _preset_name(data: Any) -> str | None:
    if isinstance(data, str):
        return data
    if isinstance(data, dict):
        return data.get("preset")
    return None


def request_logger_middleware():
    logger.info(f"{request.method} {request.path} - {request.remote_addr}")


def create_app(config: dict[str, Any] | None = None) -> Flask:
    """Create and configure the Flask application.

    ``config`` entries are applied before the database is bound, so tests can
    point SQLALCHEMY_DATABASE_URI and OUTPUT_DIR somewhere disposable.
    """
    configure_logging()
    init_error_reporting([FlaskIntegration()])

    app = Flask(__name__)
    app.config["OUTPUT_DIR"] = os.environ.get("SEA_DYN_OUTPUT_DIR", "runs")
    app.config.update(config or {})
    init_db(app)

    @app.before_request
    def before_request():
        request_logger_middleware()

    @app.route('/health', methods=['GET'])
    def health_check():
        return jsonify({
            'status': 'healthy',
            'service': 'sea-dyn',
            'timestamp': _now()
        })

    @app.route('/health/db', methods=['GET'])
    def health_check_db():
        try:
            db.session.execute(text('SELECT 1'))
            return jsonify({'status': 'healthy', 'database': 'connected'})
        except Exception as e:
            return jsonify({'status': 'unhealthy', 'database': 'disconnected', 'error': str(e)}), 503

    @app.route('/api', methods=['GET'])
    def api_info():
        return jsonify({
            'name': 'sea-dyn run service',
            'version': __version__,
            'modules': MODULES,
            'endpoints': ['/api/presets', '/api/presets/<id>', '/api/runs', '/api/runs/<id>'],
        })

    @app.route('/api/presets', methods=['GET'])
    def list_presets():
        presets = [{'id': pid, 'config': preset_config(pid).to_dict()} for pid in preset_ids()]
        return jsonify({
            "success": True,
            "data": presets,
            "total": len(presets),
            "timestamp": _now(),
        })

    @app.route('/api/presets/<preset_id>', methods=['GET'])
    def get_preset(preset_id):
        if preset_id not in preset_ids():
            return jsonify({'error': f'Preset {preset_id} not found'}), 404
        return jsonify({'id': preset_id, 'config': preset_config(preset_id).to_dict()})

    @app.route('/api/runs', methods=['POST'])
    def create_run():
        data = request.get_json(silent=True)
        if data is None:
            return jsonify({'error': 'Request body must be a JSON scenario document or preset id'}), 400
        cfg = parse_document(data)

        run_id = f"run-{int(datetime.utcnow().timestamp() * 1000)}-{uuid.uuid4().hex[:6]}"
        out_dir = Path(app.config['OUTPUT_DIR']) / run_id
        cfg = cfg.with_output(str(out_dir / Path(cfg.output.path).name))
        record = RunRecord(
            id=run_id,
            preset=_preset_name(data),
            model_kind=cfg.model.kind,
            gamma=cfg.gamma,
            lam=cfg.lam,
            config=json.dumps(cfg.to_dict()),
            csv_path=cfg.output.path,
        )
        try:
            result = run_scenario(cfg)
        except IntegrationAbort as exc:
            record.status = 'aborted'
            record.t_final = exc.t
            record.error = exc.reason
            record.monitor = json.dumps(exc.monitor or {})
            db.session.add(record)
            db.session.commit()
            return jsonify({
                'error': 'Integration aborted',
                'reason': exc.reason,
                'monitor': exc.monitor,
                'run': serialize_run(record),
            }), 422

        final = result.final_row
        record.status = 'completed'
        record.t_final = result.record.final_time
        record.beta_eff = result.beta_eff
        record.final_fidelity = final.fidelity
        record.final_abs_rho01 = final.abs_rho01
        record.max_fidelity_deviation = result.max_fidelity_deviation
        record.monitor = json.dumps(result.monitor.to_dict())
        record.wall_time = result.wall_time
        db.session.add(record)
        db.session.commit()
        return jsonify(serialize_run(record)), 201

    @app.route('/api/runs', methods=['GET'])
    def list_runs():
        status_filter = request.args.get('status')
        query = RunRecord.query
        if status_filter:
            query = query.filter_by(status=status_filter)
        runs = [serialize_run(r) for r in query.order_by(RunRecord.created_at).all()]
        return jsonify({
            "success": True,
            "data": runs,
            "total": len(runs),
            "timestamp": _now(),
        })

    @app.route('/api/runs/<run_id>', methods=['GET'])
    def get_run(run_id):
        r = db.session.get(RunRecord, run_id)
        if r is None:
            return jsonify({'error': 'Run not found'}), 404
        return jsonify(serialize_run(r))

    @app.errorhandler(ConfigError)
    def config_error(error):
        return jsonify({
            'error': 'Invalid scenario config',
            'diagnostics': error.diagnostics
        }), 400

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({
            'error': 'Endpoint not found',
            'path': request.path,
            'method': request.method
        }), 404

    @app.errorhandler(Exception)
    def handle_error(error):
        """Global error handler for all unhandled exceptions"""
        logger.error(f"Unhandled error: {str(error)}", exc_info=True)

        if hasattr(error, 'code'):
            return jsonify({
                'error': str(error),
                'message': getattr(error, 'description', 'An error occurred')
            }), error.code

        return jsonify({
            'error': 'Internal Server Error',
            'message': str(error)
        }), 500

    return app


if __name__ == '__main__':
    app = create_app()
    app.run(
        host='0.0.0.0',
        port=int(os.environ.get('PORT', 3020)),
        debug=os.environ.get('SEA_DYN_ENV', 'development') == 'development'
    )
