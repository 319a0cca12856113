"""Tests for output formatters."""

import io
import json

import pytest
from multiloop.models import RunReport
from multiloop.output.formatter import (
  JsonFormatter,
  MarkdownFormatter,
  TerminalFormatter,
  get_formatter,
  report_to_json,
)
from rich.console import Console


class TestJsonFormatter:
  def test_format_empty_report(self) -> None:
    report = RunReport(command="ek", version="0.1.0", config_hash="f" * 64, cases=[])
    data = json.loads(JsonFormatter().format(report))

    assert data["command"] == "ek"
    assert data["passed"] is True
    assert data["cases"] == []
    assert data["data"] == {}

  def test_format_with_cases(self, sample_report: RunReport) -> None:
    output = JsonFormatter().format(sample_report)
    data = json.loads(output)

    assert output.endswith("}\n")
    assert data["passed"] is False
    assert [case["name"] for case in data["cases"]] == ["structure", "casimir"]
    assert data["cases"][1]["details"]["expected"] == "3/4"
    assert data["summary"] == "A1: dim 3, h∨ = 2"

  def test_canonical(self, sample_report: RunReport) -> None:
    output = JsonFormatter().format(sample_report)
    assert output == JsonFormatter().format(sample_report)
    assert list(json.loads(output)) == sorted(report_to_json(sample_report))


class TestMarkdownFormatter:
  def test_format_empty_report(self) -> None:
    report = RunReport(command="ek", version="0.1.0", config_hash="f" * 64, cases=[])
    output = MarkdownFormatter().format(report)

    assert "# ek" in output
    assert "**Verdict:** PASS" in output
    assert "No cases." in output

  def test_format_with_cases(self, sample_report: RunReport) -> None:
    output = MarkdownFormatter().format(sample_report)

    assert "**Verdict:** FAIL" in output
    assert "| structure | pass |" in output
    assert "| casimir | FAIL |" in output
    assert "### casimir" in output
    assert "### structure" not in output
    assert '"expected": "3/4"' in output


class TestTerminalFormatter:
  def test_prints_to_console(self, sample_report: RunReport) -> None:
    buffer = io.StringIO()
    formatter = TerminalFormatter(Console(file=buffer, width=120))

    assert formatter.format(sample_report) == ""
    text = buffer.getvalue()
    assert "root-system" in text
    assert "FAIL" in text
    assert "1 of 2 case(s) failed" in text


class TestGetFormatter:
  def test_get_terminal_formatter(self) -> None:
    assert isinstance(get_formatter("terminal"), TerminalFormatter)

  def test_get_json_formatter(self) -> None:
    assert isinstance(get_formatter("json"), JsonFormatter)

  def test_get_markdown_formatter(self) -> None:
    assert isinstance(get_formatter("markdown"), MarkdownFormatter)

  def test_invalid_formatter_raises(self) -> None:
    with pytest.raises(ValueError, match="Unknown format"):
      get_formatter("invalid")
