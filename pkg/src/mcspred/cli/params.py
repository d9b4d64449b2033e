from typing import (
    Any,
    Optional,
    Tuple,
)

import click

from ..predict import PredictorKind


class PredictorListParamType(click.ParamType):
    """A comma-separated list of predictor names, or ``all``."""

    name = "predictor-list"

    def convert(
        self,
        value: Any,
        param: Optional[click.Parameter],
        ctx: Optional[click.Context],
    ) -> Tuple[PredictorKind, ...]:
        if isinstance(value, tuple):
            return value
        if not isinstance(value, str):
            self.fail(
                f"expected string, got {value!r} of type {type(value).__name__}",
                param, ctx,
            )
        names = [item.strip().lower() for item in value.split(',') if item.strip()]
        if names == ['all']:
            return tuple(PredictorKind)
        kinds = []
        for name in names:
            try:
                kind = PredictorKind(name)
            except ValueError:
                choices = ', '.join(k.value for k in PredictorKind)
                self.fail(f"{name!r} is not a predictor (choose from {choices})", param, ctx)
            if kind not in kinds:
                kinds.append(kind)
        if not kinds:
            self.fail("at least one predictor is required", param, ctx)
        return tuple(kinds)


class EnumChoice(click.Choice):
    """A choice among the values of an enum, converted to the enum member."""

    def __init__(self, enum_type) -> None:
        self._enum_type = enum_type
        super().__init__([e.value for e in enum_type], case_sensitive=False)

    def convert(self, value, param, ctx):
        if isinstance(value, self._enum_type):
            return value
        return self._enum_type(super().convert(value, param, ctx).lower())
