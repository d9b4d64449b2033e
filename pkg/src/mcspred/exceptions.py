from pathlib import Path
from typing import Optional, Union

__all__ = (
    'MCSPredError',
    'DomainError',
    'TraceFormatError',
    'ConfigError',
    'UnknownUserError',
)


class MCSPredError(Exception):
    '''Exception type to catch all mcspred-related errors.'''

    def __str__(self):
        return repr(self)


class DomainError(MCSPredError, ValueError):
    """
    A value lies outside the domain of an operation, such as a symbol beyond
    the alphabet, a non-stochastic transition matrix, or an empty sample set.
    """


class TraceFormatError(MCSPredError):
    '''Malformed CSV input (traces or rate tables).'''

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        lineno: Optional[int] = None,
    ) -> None:
        super().__init__(message, str(path) if path is not None else None, lineno)

    @property
    def message(self) -> str:
        return self.args[0]

    @property
    def path(self) -> Optional[str]:
        return self.args[1]

    @property
    def lineno(self) -> Optional[int]:
        return self.args[2]


class ConfigError(MCSPredError):
    """
    Invalid run configuration, either from flags, environment variables
    or the configuration file.
    """


class UnknownUserError(MCSPredError, KeyError):
    '''The requested user id does not appear in the trace set.'''
