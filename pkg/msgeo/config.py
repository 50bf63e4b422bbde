"""
Configuration module for msgeo.

This module handles configuration loading from environment variables and/or a .env file.
"""
import os
from dotenv import load_dotenv
import logging
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

# Load environment variables from .env file if present
load_dotenv()


def _int_from_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


class Config:
    """Configuration class for the application"""

    def __init__(self):
        # Sampling settings
        self.default_seed = _int_from_env('MSGEO_SEED', 0)
        self.default_samples = _int_from_env('MSGEO_SAMPLES', 20)
        self.workers = max(1, _int_from_env('MSGEO_WORKERS', 4))

        # Run store
        self.db_uri = os.environ.get('MSGEO_DB_URI', 'sqlite:///msgeo_runs.db')

        # Set up logging
        self.setup_logging()

    @property
    def database_uri(self):
        """Get the database URI from configuration"""
        return self.db_uri

    def setup_logging(self):
        """Configure logging for the application (diagnostics go to stderr)"""
        log_level = os.environ.get('LOG_LEVEL', 'WARNING')
        numeric_level = getattr(logging, log_level.upper(), None)
        if not isinstance(numeric_level, int):
            numeric_level = logging.WARNING

        logging.basicConfig(
            level=numeric_level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )


class DatabaseManager:
    """Database connection manager for the run store"""

    def __init__(self, config=None):
        self.config = config or Config()
        self._engine = None
        self._session_factory = None

    def _initialize_engine(self):
        """Initialize database engine and session factory"""
        self._engine = create_engine(self.config.database_uri)
        self._session_factory = sessionmaker(bind=self._engine)

    @property
    def engine(self):
        """Engine, created on first use so commands without --store never touch the database"""
        if self._engine is None:
            self._initialize_engine()
        return self._engine

    def get_session(self):
        """Get a new database session"""
        if self._session_factory is None:
            self._initialize_engine()
        return self._session_factory()


# Create a default instance of the configuration
config = Config()
db_manager = DatabaseManager(config)
