"""
Command results and their two renderings: sorted JSON for scripts and a rich
panel for people. Nothing here depends on wall-clock time or hash order, so a
repeated invocation prints the same bytes.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TextIO

from rich import box
from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from utils.errors import FrobModError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

REPORT_WIDTH = 100


@dataclass
class CommandResult:
    """Outcome of one verb on one input."""

    verb: str
    source: Optional[str] = None
    payload: Dict[str, Any] = field(default_factory=dict)
    summary: List[tuple] = field(default_factory=list)
    table: Optional[Dict[str, Any]] = None  # {"columns": [...], "rows": [[...], ...]}
    exit_code: int = EXIT_OK

    @property
    def ok(self) -> bool:
        return self.exit_code != EXIT_ERROR

    def to_dict(self) -> Dict[str, Any]:
        out = {"verb": self.verb, "exit_code": self.exit_code, "result": self.payload}
        if self.source:
            out["input"] = self.source
        return out


def error_result(verb: str, source: Optional[str], exc: Exception) -> CommandResult:
    if isinstance(exc, FrobModError):
        record = exc.to_dict()
    else:
        record = {"error": "E_INTERNAL", "message": str(exc)}
    return CommandResult(
        verb=verb,
        source=source,
        payload=record,
        summary=[("error", record["error"]), ("message", record["message"])],
        exit_code=EXIT_ERROR,
    )


def combined_exit_code(results: List[CommandResult]) -> int:
    """Errors dominate negative findings, which dominate success."""
    codes = {r.exit_code for r in results}
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    if EXIT_NEGATIVE in codes:
        return EXIT_NEGATIVE
    return EXIT_OK


def render_json(results: List[CommandResult], batch: bool = False) -> str:
    data: Any = [r.to_dict() for r in results] if batch else results[0].to_dict()
    return json.dumps(data, indent=2, sort_keys=True)


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _result_panel(result: CommandResult) -> Panel:
    lines = Text()
    for i, (key, value) in enumerate(result.summary):
        if i:
            lines.append("\n")
        lines.append(f"{key}: {_format_value(value)}")
    parts = [lines]
    if result.table:
        table = Table(box=box.SIMPLE, show_edge=False)
        for column in result.table["columns"]:
            table.add_column(str(column))
        for row in result.table["rows"]:
            table.add_row(*[_format_value(c) for c in row])
        parts.append(table)
    title = result.verb if not result.source else f"{result.verb}  {result.source}"
    style = "red" if result.exit_code == EXIT_ERROR else ("yellow" if result.exit_code == EXIT_NEGATIVE else "green")
    return Panel(Group(*parts), title=title, title_align="left", border_style=style, expand=False)


def render_human(results: List[CommandResult], stream: TextIO):
    console = Console(file=stream, width=REPORT_WIDTH, color_system=None, highlight=False, emoji=False)
    for result in results:
        console.print(_result_panel(result))
