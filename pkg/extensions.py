"""
SQLAlchemy extensions for nmcode

Centralized engine and session holder used by the models and the CLI's
run persistence.
"""

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

Base = declarative_base()


class Database:
    """Lazily bound engine + session factory."""

    def __init__(self):
        self.engine = None
        self.Session = None
        self.url = None

    def init_engine(self, url: str, echo: bool = False):
        if self.engine is not None and self.url == url:
            return self.engine
        self.engine = create_engine(url, echo=echo, future=True)
        self.Session = sessionmaker(bind=self.engine, expire_on_commit=False, future=True)
        self.url = url
        return self.engine

    def create_all(self):
        # Import ALL models so the metadata knows about them
        import models  # noqa: F401
        Base.metadata.create_all(self.engine)

    def session(self):
        if self.Session is None:
            raise RuntimeError("database engine not initialised; call db.init_engine(url) first")
        return self.Session()


# Initialize the shared holder
db = Database()
