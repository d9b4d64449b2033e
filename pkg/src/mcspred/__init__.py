from . import exceptions
from .exceptions import *  # noqa: F401,F403

__all__ = (
    *exceptions.__all__,
)

__version__ = '0.1.0'
