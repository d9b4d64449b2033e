from __future__ import annotations

import enum
from pathlib import Path
from typing import Optional, TYPE_CHECKING

import attr

if TYPE_CHECKING:
    from ..output.types import BaseOutputHandler


class OutputMode(enum.Enum):
    CONSOLE = 'console'
    JSON = 'json'


class ExitCode(enum.IntEnum):
    OK = 0
    FAILURE = 1
    CONFIG_ERROR = 2
    DATA_ERROR = 3


@attr.define(slots=True)
class CLIContext:
    output_mode: OutputMode = attr.field()
    output: BaseOutputHandler = attr.field(default=None)
    config_file: Optional[Path] = attr.field(default=None)
    debug: bool = attr.field(default=False)
