"""
Database models for the msgeo run store.
"""
from datetime import datetime, timezone

from sqlalchemy import Boolean, Column, DateTime, Integer, JSON, String
from sqlalchemy.orm import declarative_base

Base = declarative_base()


def _utcnow():
    return datetime.now(timezone.utc)


class RunRecord(Base):
    """Model for one CLI invocation persisted with --store"""
    __tablename__ = 'runs'

    id = Column(Integer, primary_key=True)
    command = Column(String(30), index=True)
    problem_name = Column(String(100))
    problem_digest = Column(String(64))  # sha256 hex of the problem file bytes
    seed = Column(Integer, nullable=True)
    exit_code = Column(Integer)
    passed = Column(Boolean, nullable=True)
    summary = Column(JSON)
    created_at = Column(DateTime(timezone=True), default=_utcnow)

    def __repr__(self):
        return f"<RunRecord(command='{self.command}', problem='{self.problem_name}', exit_code={self.exit_code})>"
