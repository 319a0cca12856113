"""CLI interface using Typer."""

import json
import os
import traceback
from collections.abc import Callable
from pathlib import Path
from typing import Any

import typer
from rich.console import Console

from multiloop import __version__
from multiloop.commutator import (
  CorpusEntry,
  corpus_from_json,
  corpus_to_json,
  random_corpus,
)
from multiloop.errors import DataError, VerificationError
from multiloop.models import RunReport
from multiloop.modules import ModuleDescription
from multiloop.output import TerminalFormatter, get_formatter
from multiloop.runner import Runner, load_json, make_runner

app = typer.Typer(
  name="multiloop",
  help="Exact computations in multi-loop affine Lie algebras",
  no_args_is_help=True,
)

console = Console()
_err = Console(stderr=True)

EXIT_FAILED = 1
EXIT_USAGE = 2


def _is_debug() -> bool:
  return os.environ.get("MULTILOOP_DEBUG", "").lower() in ("1", "true", "yes")


def version_callback(value: bool) -> None:
  if value:
    console.print(f"multiloop {__version__}")
    raise typer.Exit()


_CONFIG = typer.Option(None, "--config", "-c", help="Config file path")
_FORMAT = typer.Option(None, "--format", help="Output format: json, terminal, markdown")
_OUT = typer.Option(None, "--out", "-o", help="Write the report to this file")
_SEED = typer.Option(None, "--seed", help="Seed for every random choice")
_JOBS = typer.Option(None, "--jobs", "-j", help="Worker processes for corpus checks")
_DEBUG = typer.Option(False, "--debug", "-d", help="Show full traceback on errors")
_VERSION = typer.Option(None, "--version", "-v", callback=version_callback, is_eager=True)
_ALG = typer.Option("A1", "--alg", help="Simple Lie algebra type, e.g. A1, A2, D4")
_K = typer.Option(2, "--k", help="Number of loop variables")
_LAMBDA = typer.Option("0", "--lambda", help="Dominant weight, comma-separated coordinates")
_P = typer.Option(None, "--p", help="Level parameter: c_i acts by -p^i - h∨")
_DEPTH = typer.Option(None, "--depth", help="Truncation depth N along t_k")
_LATERAL = typer.Option(None, "--lateral", help="Lateral exponent bound B")


def _parse_weight(text: str) -> tuple[int, ...]:
  try:
    return tuple(int(part) for part in text.split(",") if part.strip())
  except ValueError:
    raise DataError(f"Invalid weight '{text}'. Expected comma-separated integers") from None


def _read_json(value: str) -> Any:
  """Inline JSON when the text starts with ``{`` or ``[``, otherwise a file path."""
  if value.lstrip().startswith(("{", "[")):
    try:
      return json.loads(value)
    except json.JSONDecodeError as e:
      raise DataError(f"Invalid inline JSON: {e}") from None
  path = Path(value)
  if not path.exists():
    raise FileNotFoundError(f"File not found: {path}")
  return load_json(path)


def _emit(report: RunReport, format_type: str, out: Path | None) -> None:
  formatter = get_formatter(format_type)
  if isinstance(formatter, TerminalFormatter) and out is not None:
    with open(out, "w") as f:
      TerminalFormatter(Console(file=f, width=100)).format(report)
    return
  output = formatter.format(report)
  if out is not None:
    out.write_text(output)
  elif output:
    typer.echo(output, nl=False)


def _execute(
  action: Callable[[Runner], RunReport],
  *,
  config: Path | None,
  format_type: str | None,
  out: Path | None,
  debug: bool,
  **overrides: Any,
) -> None:
  """Run one subcommand and map its outcome to an exit code."""
  show_traceback = debug or _is_debug()
  try:
    runner = make_runner(config, **overrides)
    report = action(runner)
    _emit(report, format_type or runner.settings.format.value, out)
  except VerificationError as e:
    _err.print(f"[red]Error:[/red] {e}")
    raise typer.Exit(EXIT_FAILED) from None
  except (DataError, FileNotFoundError, ValueError) as e:
    _err.print(f"[red]Error:[/red] {e}")
    if show_traceback:
      _err.print("\n[dim]Traceback:[/dim]")
      _err.print(traceback.format_exc())
    raise typer.Exit(EXIT_USAGE) from None
  except Exception as e:
    _err.print(f"[red]Error:[/red] {e}")
    if show_traceback:
      _err.print("\n[dim]Traceback:[/dim]")
      _err.print(traceback.format_exc())
    raise typer.Exit(EXIT_FAILED) from None

  if not report.passed:
    raise typer.Exit(EXIT_FAILED)


@app.command("root-system")
def root_system(
  alg: str = _ALG,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Root system data, structure constants and structure checks."""
  _execute(
    lambda runner: runner.root_system(alg),
    config=config, format_type=format_type, out=out, debug=debug, seed=seed, jobs=jobs,
  )


@app.command()
def bracket(
  a: str = typer.Option(..., "--a", help="Element JSON file (or inline JSON)"),
  b: str = typer.Option(..., "--b", help="Element JSON file (or inline JSON)"),
  alg: str = _ALG,
  k: int = _K,
  p: int = _P,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Exact bracket [a, b] in ĝ_k."""
  _execute(
    lambda runner: runner.bracket(alg, k, _read_json(a), _read_json(b)),
    config=config, format_type=format_type, out=out, debug=debug, seed=seed, jobs=jobs, p=p,
  )


@app.command("check-commutator")
def check_commutator(
  z: str = typer.Option(None, "--z", help="PBW element JSON of U(ĝ_k⁻)"),
  corpus: Path = typer.Option(None, "--corpus", help="Corpus JSON of elements to verify"),
  generate: int = typer.Option(
    None, "--generate", help="Write a seeded corpus of N elements instead of verifying"
  ),
  alg: str = _ALG,
  k: int = _K,
  window: int = typer.Option(None, "--window", help="Verify shifts p0 .. p0 + window"),
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Certificates for [g ⊗ t_{k-1}^r, Z] ≠ 0 over a window of shifts."""
  if sum(option is not None for option in (z, corpus, generate)) != 1:
    _err.print("[red]Error:[/red] give exactly one of --z, --corpus or --generate")
    raise typer.Exit(EXIT_USAGE)

  if generate is not None:
    _write_corpus(generate, config, seed, out, debug)
    return

  def action(runner: Runner) -> RunReport:
    if corpus is not None:
      entries = corpus_from_json(load_json(corpus))
    else:
      entries = [CorpusEntry(alg=alg, k=k, z=_read_json(z), label="z")]
    return runner.check_commutator(entries)

  _execute(
    action,
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, window=window,
  )


def _write_corpus(
  size: int, config: Path | None, seed: int | None, out: Path | None, debug: bool
) -> None:
  try:
    settings = make_runner(config, seed=seed).settings
    entries = random_corpus(settings.seed, size)
  except (DataError, FileNotFoundError, ValueError) as e:
    _err.print(f"[red]Error:[/red] {e}")
    if debug or _is_debug():
      _err.print(traceback.format_exc())
    raise typer.Exit(EXIT_USAGE) from None
  text = json.dumps(corpus_to_json(entries, settings.seed), indent=2, ensure_ascii=False) + "\n"
  if out is not None:
    out.write_text(text)
  else:
    typer.echo(text, nl=False)


@app.command("build-module")
def build_module(
  alg: str = _ALG,
  k: int = _K,
  weight: str = _LAMBDA,
  p: int = _P,
  depth: int = _DEPTH,
  lateral: int = _LATERAL,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Truncated irreducible quotient Ê^k_λ with its block table and checks."""
  _execute(
    lambda runner: runner.build_module(runner.description(alg, k, _parse_weight(weight))),
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, p=p, depth=depth, lateral=lateral,
  )


@app.command()
def commutant(
  alg: str = _ALG,
  k: int = _K,
  weight: str = _LAMBDA,
  double: bool = typer.Option(False, "--double", help="Use V ⊕ V as a negative control"),
  p: int = _P,
  depth: int = _DEPTH,
  lateral: int = _LATERAL,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Dimension of the grading-preserving commutant of the truncated module."""
  _execute(
    lambda runner: runner.commutant(runner.description(alg, k, _parse_weight(weight)), double),
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, p=p, depth=depth, lateral=lateral,
  )


@app.command()
def distinguish(
  alg: str = _ALG,
  k: int = _K,
  weight: str = _LAMBDA,
  targets: str = typer.Option(
    "0;1;2", "--targets", help="Target weights μ, separated by ';'"
  ),
  shifts: str = typer.Option(
    "-2,-1,0,1,2", "--shifts", help="Grading shifts m and n, comma-separated"
  ),
  window: int = typer.Option(None, "--window", help="Number of shifts r beyond the threshold"),
  p: int = _P,
  depth: int = _DEPTH,
  lateral: int = _LATERAL,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Separate Ind^k(Ê^{k-1}_λ) from shifted irreducible quotients Ê^k_μ(m, n)."""

  def action(runner: Runner) -> RunReport:
    description = runner.description(alg, k, _parse_weight(weight))
    mus = [_parse_weight(part) for part in targets.split(";") if part.strip()]
    return runner.distinguish(description, mus, _parse_weight(shifts))

  _execute(
    action,
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, p=p, depth=depth, lateral=lateral, window=window,
  )


@app.command("sugawara-verify")
def sugawara_verify(
  module: str = typer.Option(
    None, "--module", help="Module description JSON (or a build-module report)"
  ),
  grid: str = typer.Option(None, "--grid", help="Grid JSON: x, n, max_depth, max_vectors"),
  alg: str = _ALG,
  k: int = _K,
  weight: str = _LAMBDA,
  p: int = _P,
  depth: int = _DEPTH,
  lateral: int = _LATERAL,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """Check [x(n), L₀] against its closed forms on Ind^k(Ê^{k-1}_λ)."""

  def action(runner: Runner) -> RunReport:
    if module is not None:
      value = _read_json(module)
      if isinstance(value, dict) and isinstance(value.get("data"), dict):
        value = value["data"].get("description", value)
      elif isinstance(value, dict) and "description" in value:
        value = value["description"]
      description = ModuleDescription.from_json(value)
    else:
      description = runner.description(alg, k, _parse_weight(weight))
    return runner.sugawara_verify(description, _read_json(grid) if grid else None)

  _execute(
    action,
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, p=p, depth=depth, lateral=lateral,
  )


@app.command()
def ek(
  alg: str = _ALG,
  weight: str = _LAMBDA,
  pmatrix: Path = typer.Option(
    None, "--pmatrix", help="P matrix JSON; the identity matrix when omitted"
  ),
  kmax: int = typer.Option(None, "--kmax", help="Largest k to compute"),
  p: int = _P,
  config: Path = _CONFIG,
  format_type: str = _FORMAT,
  out: Path = _OUT,
  seed: int = _SEED,
  jobs: int = _JOBS,
  debug: bool = _DEBUG,
  version: bool = _VERSION,
) -> None:
  """The E^k_λ recursion in the Grothendieck group and its stabilization."""
  if pmatrix is not None and not pmatrix.exists():
    _err.print(f"[red]Error:[/red] P matrix not found: {pmatrix}")
    raise typer.Exit(EXIT_USAGE)
  _execute(
    lambda runner: runner.ek(alg, _parse_weight(weight), pmatrix),
    config=config, format_type=format_type, out=out, debug=debug,
    seed=seed, jobs=jobs, p=p, kmax=kmax,
  )


if __name__ == "__main__":
  app()
