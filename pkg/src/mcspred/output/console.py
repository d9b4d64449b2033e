from __future__ import annotations

from typing import (
    Any,
    Mapping,
    Sequence,
)

import click
from tabulate import tabulate

from mcspred.cli.pretty import bold, print_error, print_fail
from .types import BaseOutputHandler, FieldSpec, Section


class ConsoleOutputHandler(BaseOutputHandler):

    def _print_title(self, title: str | None) -> None:
        if title:
            click.echo(bold(title))

    def print_item(
        self,
        item: Mapping[str, Any] | None,
        fields: Sequence[FieldSpec],
    ) -> None:
        if item is None:
            print_fail("No matching entry found.")
            return
        field_map = {f.field_name: f for f in fields}
        click.echo(tabulate(
            [
                (
                    field_map[k].humanized_name,
                    field_map[k].formatter.format_console(v, field_map[k]),
                )
                for k, v in item.items()
                if k in field_map
            ],
            headers=('Field', 'Value'),
        ))

    def print_list(
        self,
        items: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
        *,
        title: str | None = None,
    ) -> None:
        self._print_title(title)
        if not items:
            click.echo("No matching items.")
            return
        click.echo(tabulate(
            [
                [f.formatter.format_console(item.get(f.field_name), f) for f in fields]
                for item in items
            ],
            headers=[f.humanized_name for f in fields],
        ))

    def print_sections(
        self,
        sections: Sequence[Section],
    ) -> None:
        for idx, section in enumerate(sections):
            if idx > 0:
                click.echo("")
            self.print_list(section.items, section.fields, title=section.title)

    def print_error(
        self,
        error: Exception,
    ) -> None:
        print_error(error)
