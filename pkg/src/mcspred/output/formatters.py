from __future__ import annotations

import math
from datetime import timedelta
from typing import Any

import humanize
import numpy as np

from .types import AbstractOutputFormatter, FieldSpec


class OutputFormatter(AbstractOutputFormatter):
    """
    The base implementation of output formats.
    """

    def format_console(self, value: Any, field: FieldSpec) -> str:
        if value is None:
            return "(null)"
        if isinstance(value, (dict, list, set)) and not value:
            return "(empty)"
        elif isinstance(value, dict):
            return "{" \
                + ", ".join(f"{k}: {self.format_console(v, field)}" for k, v in value.items()) \
                + "}"
        elif isinstance(value, (list, tuple, set)):
            return "[" \
                + ", ".join(self.format_console(v, field) for v in value) \
                + "]"
        return str(value)

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        if isinstance(value, np.generic):
            return value.item()
        elif isinstance(value, dict):
            return {k: self.format_json(v, field) for k, v in value.items()}
        elif isinstance(value, (list, tuple)):
            return [self.format_json(v, field) for v in value]
        return value


class FloatOutputFormatter(OutputFormatter):

    def __init__(self, digits: int = 4) -> None:
        self._digits = digits

    def format_console(self, value: Any, field: FieldSpec) -> str:
        if value is None:
            return "(null)"
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{self._digits}f}"

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        value = float(value)
        if math.isinf(value) or math.isnan(value):
            # JSON has no infinity literal
            return str(value)
        return value


class PercentOutputFormatter(OutputFormatter):

    def format_console(self, value: Any, field: FieldSpec) -> str:
        return f"{float(value) * 100:.1f} %"

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return float(value)


class ElapsedOutputFormatter(OutputFormatter):

    def format_console(self, value: Any, field: FieldSpec) -> str:
        return humanize.precisedelta(timedelta(seconds=float(value)), minimum_unit="milliseconds")

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return round(float(value), 3)


default_output_formatter = OutputFormatter()
float_output_formatter = FloatOutputFormatter()
percent_output_formatter = PercentOutputFormatter()
elapsed_output_formatter = ElapsedOutputFormatter()
