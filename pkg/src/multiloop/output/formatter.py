"""Output formatting for run reports."""

import json
from abc import ABC, abstractmethod
from typing import Any, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from multiloop.models import CaseResult, OutputFormat, RunReport


def report_to_json(report: RunReport) -> dict[str, Any]:
  """Plain-data form of a report; every value is already exact."""
  return {
    "command": report.command,
    "version": report.version,
    "config_hash": report.config_hash,
    "passed": report.passed,
    "summary": report.summary,
    "cases": [
      {"name": case.name, "passed": case.passed, "details": case.details}
      for case in report.cases
    ],
    "data": report.data,
  }


class OutputFormatter(ABC):
  """Renders a run report; the terminal formatter prints and returns an empty string."""

  @abstractmethod
  def format(self, report: RunReport) -> str: ...


class TerminalFormatter(OutputFormatter):
  """Verdict panel plus one table row per case."""

  def __init__(self, console: Console | None = None):
    self.console = console or Console()

  def format(self, report: RunReport) -> str:
    verdict = "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]"
    header = Panel(
      f"{verdict}  {report.summary}",
      title=f"[bold]{report.command}[/bold] (multiloop {report.version})",
      subtitle=f"config {report.config_hash[:12]}",
      border_style="blue",
    )
    self.console.print()
    self.console.print(header)
    self.console.print()
    if report.cases:
      self.console.print(_case_table(report.cases))
      failed = len(report.failures)
      self.console.print(f"\n[dim]{failed} of {len(report.cases)} case(s) failed[/dim]")
    else:
      self.console.print("[dim]No cases.[/dim]")
    return ""


def _case_table(cases: Sequence[CaseResult]) -> Table:
  table = Table(header_style="bold")
  table.add_column("Case", min_width=24)
  table.add_column("Verdict", width=8)
  table.add_column("Details", min_width=40)
  for case in cases:
    mark = Text("pass", style="green") if case.passed else Text("FAIL", style="bold red")
    table.add_row(case.name, mark, _short_details(case))
  return table


def _short_details(case: CaseResult, limit: int = 4) -> str:
  items = [
    f"{key}={value}"
    for key, value in case.details.items()
    if isinstance(value, str | int | bool)
  ]
  text = ", ".join(items[:limit])
  return text + (", …" if len(items) > limit else "")


class JsonFormatter(OutputFormatter):
  """Sorted keys, two-space indent; byte-identical across runs."""

  def format(self, report: RunReport) -> str:
    return json.dumps(report_to_json(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class MarkdownFormatter(OutputFormatter):
  def format(self, report: RunReport) -> str:
    verdict = "PASS" if report.passed else "FAIL"
    lines = [
      f"# {report.command}",
      "",
      f"**Version:** {report.version}",
      f"**Config hash:** `{report.config_hash}`",
      f"**Verdict:** {verdict}",
      "",
      "## Summary",
      "",
      report.summary,
      "",
    ]

    if report.cases:
      lines.extend(["## Cases", "", "| Case | Verdict |", "| --- | --- |"])
      for case in report.cases:
        lines.append(f"| {case.name} | {'pass' if case.passed else 'FAIL'} |")
      lines.append("")
      for case in report.failures:
        lines.extend([f"### {case.name}", "", "```json"])
        lines.append(json.dumps(case.details, indent=2, sort_keys=True, ensure_ascii=False))
        lines.extend(["```", ""])
    else:
      lines.extend(["## Cases", "", "No cases.", ""])

    return "\n".join(lines)


_FORMATTERS: dict[OutputFormat, type[OutputFormatter]] = {
  OutputFormat.JSON: JsonFormatter,
  OutputFormat.TERMINAL: TerminalFormatter,
  OutputFormat.MARKDOWN: MarkdownFormatter,
}


def get_formatter(format_type: str | OutputFormat) -> OutputFormatter:
  """Formatter for an ``OutputFormat`` or its string value."""
  try:
    return _FORMATTERS[OutputFormat(format_type)]()
  except ValueError:
    raise ValueError(f"Unknown format: {format_type}") from None
