from __future__ import annotations

from abc import ABCMeta, abstractmethod
from collections import UserDict
from typing import (
    Any,
    Mapping,
    Sequence,
    TYPE_CHECKING,
)

import attr

if TYPE_CHECKING:
    from mcspred.cli.types import CLIContext


_predefined_humanized_field_names = {
    "user_id": "User ID",
    "n": "N",
    "i": "Order",
    "k": "k",
    "p_loss": "P_loss",
    "r_eff": "r_eff",
    "p_loss_p50": "P_loss p50",
    "p_loss_p90": "P_loss p90",
    "r_eff_ge_target": "r_eff >= 0.9",
    "mdl": "MDL",
    "aic": "AIC",
    "aicc": "AICc",
    "ipred": "Ipred (bits)",
    "gain": "L(k) (bits)",
}


def _make_camel_case(name: str) -> str:
    return " ".join(
        map(lambda s: s[0].upper() + s[1:], name.split("_"))
    )


class AbstractOutputFormatter(metaclass=ABCMeta):
    """
    The base implementation of output formats.
    """

    @abstractmethod
    def format_console(self, value: Any, field: FieldSpec) -> str:
        raise NotImplementedError

    @abstractmethod
    def format_json(self, value: Any, field: FieldSpec) -> Any:
        raise NotImplementedError


@attr.define(slots=True, frozen=True)
class FieldSpec:
    """
    Describes how to represent a report column
    in the CLI output handlers.

    Attributes:
        field_name: The key of the column inside the report rows.
        humanized_name: The string to be shown as the column name by the console formatter.
            If not set, it's auto-generated from field_name by camel-casing it and checking
            a predefined humanization mapping.
        alt_name: The key used for the column in JSON output and inside a FieldSet.
        formatter: The formatter instance which provide per-output-type format methods.
            (console and json)
    """

    field_name: str = attr.field()
    humanized_name: str = attr.field()
    alt_name: str = attr.field()
    formatter: AbstractOutputFormatter = attr.field()

    @humanized_name.default
    def _autogen_humanized_name(self) -> str:
        if h := _predefined_humanized_field_names.get(self.field_name):
            return h
        if self.field_name.startswith("is_"):
            return _make_camel_case(self.field_name[3:]) + "?"
        return _make_camel_case(self.field_name)

    @alt_name.default
    def _default_alt_name(self) -> str:
        return self.field_name

    @formatter.default
    def _default_formatter(self) -> AbstractOutputFormatter:
        from .formatters import default_output_formatter  # avoid circular import
        return default_output_formatter


class FieldSet(UserDict, Mapping[str, FieldSpec]):

    def __init__(self, fields: Sequence[FieldSpec]) -> None:
        super().__init__({
            f.alt_name: f for f in fields
        })


@attr.define(slots=True, frozen=True)
class Section:
    title: str
    items: Sequence[Mapping[str, Any]]
    fields: Sequence[FieldSpec]


class BaseOutputHandler(metaclass=ABCMeta):

    def __init__(self, cli_context: CLIContext) -> None:
        self.ctx = cli_context

    @abstractmethod
    def print_item(
        self,
        item: Mapping[str, Any] | None,
        fields: Sequence[FieldSpec],
    ) -> None:
        raise NotImplementedError

    @abstractmethod
    def print_list(
        self,
        items: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
        *,
        title: str | None = None,
    ) -> None:
        raise NotImplementedError

    @abstractmethod
    def print_sections(
        self,
        sections: Sequence[Section],
    ) -> None:
        """Prints several titled tables as one document."""
        raise NotImplementedError

    @abstractmethod
    def print_error(
        self,
        error: Exception,
    ) -> None:
        raise NotImplementedError
