"""
Repository for run record database operations.
"""
import logging
from sqlalchemy.exc import SQLAlchemyError
from ..models.models import RunRecord
from ..config import db_manager

logger = logging.getLogger(__name__)


class RunRepository:
    """Repository for run record database operations"""

    def __init__(self, session=None):
        """
        Initialize repository with session.

        Args:
            session: SQLAlchemy session. If None, a new session is created.
        """
        self.session = session or db_manager.get_session()

    def count(self):
        """Count the number of stored runs"""
        return self.session.query(RunRecord).count()

    def get_all(self, limit=None, offset=None):
        """
        Get all runs with optional pagination, oldest first.

        Args:
            limit: Maximum number of runs to return
            offset: Number of runs to skip

        Returns:
            List of RunRecord objects
        """
        query = self.session.query(RunRecord).order_by(RunRecord.id)

        if offset is not None:
            query = query.offset(offset)

        if limit is not None:
            query = query.limit(limit)

        return query.all()

    def get_by_command(self, command, limit=None):
        """Get runs of one subcommand"""
        query = self.session.query(RunRecord).filter_by(command=command).order_by(RunRecord.id)
        if limit is not None:
            query = query.limit(limit)
        return query.all()

    def get_latest(self):
        """Most recently stored run, or None"""
        return self.session.query(RunRecord).order_by(RunRecord.id.desc()).first()

    def add(self, record):
        """
        Add a run record to the database.

        Args:
            record: RunRecord object to add

        Returns:
            The added RunRecord object
        """
        try:
            self.session.add(record)
            self.session.commit()
            logger.debug(f"Stored run: {record.command} {record.problem_name}")
            return record
        except SQLAlchemyError as e:
            self.session.rollback()
            logger.error(f"Error storing run: {e}")
            raise

    def close(self):
        """Close the session"""
        self.session.close()
        logger.debug("RunRepository session closed")
