"""sentry-sdk wiring shared by the CLI and the HTTP service.

Nothing is sent unless SENTRY_DSN is set in the environment.
"""
from __future__ import annotations

import logging
import os

import sentry_sdk

logger = logging.getLogger(__name__)


def configure_logging() -> None:
    level = os.environ.get("LOG_LEVEL", "info").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def init_error_reporting(integrations: list | None = None) -> bool:
    """Initialise sentry-sdk; returns True when a DSN is configured."""
    dsn = os.environ.get("SENTRY_DSN") or None
    sentry_sdk.init(
        dsn=dsn,
        integrations=integrations or [],
        traces_sample_rate=float(os.environ.get("SENTRY_TRACES_SAMPLE_RATE", "0.0")),
        send_default_pii=False,
        environment=os.environ.get("SEA_DYN_ENV", "development"),
    )
    if dsn is None:
        logger.debug("SENTRY_DSN not set; error reporting disabled")
    return dsn is not None
