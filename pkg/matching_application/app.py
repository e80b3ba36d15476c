"""
Dynamic Matching Service
HTTP front end for generating, replaying and verifying update sequences
"""

from flask import Flask, jsonify
from flask_cors import CORS
import os
import sys
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

# Import configuration
from matching_application.config import Config, config

# Import blueprints
from matching_application.api import matching_bp

_HANDLER_TAG = '_matching_app_handler'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


def setup_logging(log_dir: Optional[Path] = None, console_level: int = logging.INFO,
                  console_stream=None):
    """
    Setup application logging: rotating file handler (when log_dir is given)
    plus a console handler. Calling it again replaces the handlers it added.
    """
    log_formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)
    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root_logger.removeHandler(handler)
            handler.close()

    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        # File handler with rotation
        file_handler = RotatingFileHandler(
            log_dir / 'matching_app.log',
            maxBytes=Config.LOG_MAX_BYTES,
            backupCount=Config.LOG_BACKUP_COUNT
        )
        file_handler.setFormatter(log_formatter)
        file_handler.setLevel(logging.DEBUG)
        setattr(file_handler, _HANDLER_TAG, True)
        root_logger.addHandler(file_handler)

    # Console handler
    console_handler = logging.StreamHandler(console_stream or sys.stderr)
    console_handler.setFormatter(log_formatter)
    console_handler.setLevel(console_level)
    setattr(console_handler, _HANDLER_TAG, True)
    root_logger.addHandler(console_handler)

    root_logger.setLevel(logging.DEBUG if log_dir is not None else console_level)
    return root_logger


def create_app(config_name=None):
    """Application factory pattern"""
    app = Flask(__name__)

    # Load configuration
    config_name = config_name or os.environ.get('FLASK_ENV', 'default')
    app.config.from_object(config[config_name])

    # Setup logging
    level = logging.getLevelName(app.config.get('LOG_LEVEL', 'INFO'))
    logger = setup_logging(Path(app.config['LOG_DIR']),
                           console_level=level if isinstance(level, int) else logging.INFO)
    logger.info("🚀 Initializing Dynamic Matching Service...")

    # Initialize CORS
    cors_origins = app.config.get('CORS_ORIGINS', ['*'])
    if isinstance(cors_origins, str):
        cors_origins = cors_origins.split(',')

    CORS(app,
         resources={r"/api/*": {"origins": cors_origins, "methods": ["GET", "POST", "OPTIONS"], "allow_headers": ["Content-Type"]}})

    # Register blueprints
    app.register_blueprint(matching_bp)
    logger.info("✅ Blueprints registered")

    @app.route('/')
    def index():
        return jsonify({
            'service': 'dynamic-matching',
            'endpoints': ['/api/health', '/api/generate', '/api/run', '/api/verify'],
        })

    logger.info("✅ Application created successfully")
    return app


if __name__ == '__main__':
    app = create_app()
    logger = logging.getLogger(__name__)

    logger.info("══════════════════════════════════════════════════════════════")
    logger.info("   🔗 Dynamic Matching Service - Starting Server")
    logger.info("══════════════════════════════════════════════════════════════")
    logger.info(f"📍 API Endpoint: http://{Config.API_HOST}:{Config.API_PORT}/api/")
    logger.info("   - /api/generate - Generate an update sequence")
    logger.info("   - /api/run - Replay a sequence")
    logger.info("   - /api/verify - Replay with per-update verification")
    logger.info(f"📝 Logs: {Config.LOG_DIR}/matching_app.log")
    logger.info("══════════════════════════════════════════════════════════════")

    app.run(
        debug=Config.DEBUG,
        host=Config.API_HOST,
        port=Config.API_PORT
    )
