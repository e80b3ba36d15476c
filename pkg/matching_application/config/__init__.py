"""
Configuration Management
Settings come from environment variables with development defaults
"""

import os
import tempfile
from pathlib import Path

# Base directory
BASE_DIR = Path(__file__).resolve().parent.parent


def _optional_int(name):
    raw = os.environ.get(name, '').strip()
    return int(raw) if raw else None


class Config:
    """Base configuration"""
    LOG_DIR = Path(os.environ.get('LOG_DIR', BASE_DIR / 'logs'))
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO').upper()

    # Flask settings
    FLASK_ENV = os.environ.get('FLASK_ENV', 'development')
    DEBUG = FLASK_ENV == 'development'
    TESTING = False

    # API settings
    API_HOST = os.environ.get('API_HOST', 'localhost')
    API_PORT = int(os.environ.get('API_PORT', 5001))
    API_MAX_UPDATES = int(os.environ.get('API_MAX_UPDATES', 200000))

    # CORS settings
    CORS_ORIGINS = os.environ.get('CORS_ORIGINS', '*').split(',')

    # Logging
    LOG_MAX_BYTES = int(os.environ.get('LOG_MAX_BYTES', 10 * 1024 * 1024))  # 10MB
    LOG_BACKUP_COUNT = int(os.environ.get('LOG_BACKUP_COUNT', 5))

    # Engine defaults
    MATCHING_SEED = int(os.environ.get('MATCHING_SEED', 0))
    MATCHING_THRESHOLD = _optional_int('MATCHING_THRESHOLD')  # None -> ceil(sqrt(n))
    VERIFY_EVERY = int(os.environ.get('VERIFY_EVERY', 0))

    # Brute-force oracle guard
    ORACLE_MAX_VERTICES = int(os.environ.get('ORACLE_MAX_VERTICES', 20))
    ORACLE_MAX_EDGES = int(os.environ.get('ORACLE_MAX_EDGES', 28))


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class TestingConfig(Config):
    """Test configuration: verify after every update, logs in the temp dir"""
    TESTING = True
    DEBUG = False
    VERIFY_EVERY = 1
    LOG_DIR = Path(tempfile.gettempdir()) / 'matching_app_test_logs'


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


# Get configuration based on environment
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}
