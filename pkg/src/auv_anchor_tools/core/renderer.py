"""Rich console summaries for the CLI commands."""

import json
from typing import Any, Optional, Sequence

import yaml
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

STATUS_STYLES = {
    "feasible": "green",
    "best": "bold green",
    "infeasible": "red",
    "unbounded": "yellow",
}


def format_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class DisplayRenderer:
    """Console summaries for every command; artifacts never pass through here."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def render(self, data: Any, fmt: str = "table") -> bool:
        """Print ``data`` as JSON or YAML.

        Returns False for ``table`` so the caller draws its own view.
        """
        if fmt == "json":
            self.console.print_json(json.dumps(data, default=str, sort_keys=True))
        elif fmt == "yaml":
            self.console.print(yaml.safe_dump(data, sort_keys=False), end="")
        else:
            return False
        return True

    def table(
        self,
        rows: Sequence[dict],
        title: str,
        columns: Sequence[dict],
        hint: Optional[str] = None,
    ) -> None:
        """One row per dict; ``columns`` holds ``{name, key, justify?}`` specs.
        A ``status`` column is colored by value."""
        if not rows:
            self.console.print(f"[yellow]No {title.lower()} found[/]")
            return

        table = Table(title=title, header_style="bold")
        for col in columns:
            table.add_column(col["name"], justify=col.get("justify", "right"))
        for row in rows:
            cells = []
            for col in columns:
                text = format_value(row.get(col["key"]))
                if col["key"] == "status":
                    text = f"[{STATUS_STYLES.get(text, 'white')}]{text}[/]"
                cells.append(text)
            table.add_row(*cells)

        self.console.print(table)
        if hint:
            self.console.print(f"[dim]{hint}[/]")

    def detail(self, data: dict, title: str, fields: Sequence[tuple]) -> None:
        lines = [f"[bold]{label}:[/] {format_value(data.get(key))}" for label, key in fields]
        self.console.print(Panel("\n".join(lines), title=title))

    def info(self, message: str) -> None:
        self.console.print(f"[dim]{message}[/]")
