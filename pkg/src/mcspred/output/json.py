from __future__ import annotations

import json
from typing import (
    Any,
    Mapping,
    Sequence,
)

import click

from .types import BaseOutputHandler, FieldSpec, Section

_json_opts: Mapping[str, Any] = {"indent": 2}


def _format_items(
    items: Sequence[Mapping[str, Any]],
    fields: Sequence[FieldSpec],
) -> list:
    return [
        {
            f.alt_name: f.formatter.format_json(item.get(f.field_name), f)
            for f in fields
        }
        for item in items
    ]


class JsonOutputHandler(BaseOutputHandler):

    def print_item(
        self,
        item: Mapping[str, Any] | None,
        fields: Sequence[FieldSpec],
    ) -> None:
        if item is None:
            click.echo(json.dumps({
                "count": 0,
                "items": [],
            }))
            return
        field_map = {f.field_name: f for f in fields}
        click.echo(json.dumps(
            {
                "count": 1,
                "items": [
                    {
                        field_map[k].alt_name: field_map[k].formatter.format_json(v, field_map[k])
                        for k, v in item.items()
                        if k in field_map
                    }
                ],
            },
            **_json_opts,
        ))

    def print_list(
        self,
        items: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
        *,
        title: str | None = None,
    ) -> None:
        body: dict = {
            "count": len(items),
            "items": _format_items(items, fields),
        }
        if title:
            body = {"title": title, **body}
        click.echo(json.dumps(body, **_json_opts))

    def print_sections(
        self,
        sections: Sequence[Section],
    ) -> None:
        click.echo(json.dumps(
            {
                "sections": [
                    {
                        "title": section.title,
                        "count": len(section.items),
                        "items": _format_items(section.items, section.fields),
                    }
                    for section in sections
                ],
            },
            **_json_opts,
        ))

    def print_error(
        self,
        error: Exception,
    ) -> None:
        click.echo(json.dumps(
            {
                "error": str(error),
            },
            **_json_opts,
        ))
