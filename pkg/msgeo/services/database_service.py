"""
Database service for creating and resetting the run store.
"""
import logging
from ..config import db_manager
from ..models.models import Base

logger = logging.getLogger(__name__)


class DatabaseService:
    """Service for initializing and managing the run store"""

    def __init__(self, manager=None):
        self.manager = manager or db_manager

    def initialize_database(self):
        """Create the tables if they do not exist"""
        try:
            self._create_tables()
            logger.info("Database initialization complete")
            return True
        except Exception as e:
            logger.error(f"Error initializing database: {e}")
            return False

    def _create_tables(self):
        """Create all tables in the database"""
        Base.metadata.create_all(self.manager.engine)
        logger.info("Database tables created or verified")

    def reset_database(self):
        """Drop all tables and recreate them"""
        try:
            Base.metadata.drop_all(self.manager.engine)
            logger.info("All tables dropped")
            self._create_tables()
            logger.info("Database reset complete")
            return True
        except Exception as e:
            logger.error(f"Error resetting database: {e}")
            return False
