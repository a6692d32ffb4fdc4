"""Command-line entry point for the whole pipeline.

Every subcommand is a thin composition of library calls.  Exit codes:
0 ok, 1 diagnostics/violations, 2 usage error, 3 I/O error.  Diagnostics
print one per line as ``CODE<TAB>element<TAB>message`` (machine
parsable); ``--json`` switches to a JSON array.  ``-`` means stdin or
stdout for any file argument.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .frame_model import Diagnostic, FrameDiagram, ValidationError
from .frame_store import (
    FrameParseError,
    parse_frame_xml,
    serialize_frame_xml,
    validate_against_schema,
)
from .layout import CyclicHierarchyError, auto_layout
from .translate import (
    StaleTraceError,
    TranslationError,
    check_round_trip,
    frame_to_uml,
    trace_from_bytes,
    trace_to_bytes,
    uml_to_frame,
)
from .uml_emit import StaleRefError, XmiParseError, from_xmi, render_frame_svg, to_plantuml, to_xmi

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_IO = 3

FRAME_SUFFIX = ".frame.xml"
XMI_SUFFIX = ".uml.xmi"


def _read_input(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        return Path(path).read_bytes()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _write_output(path: str, data: bytes) -> None:
    try:
        if path == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _stem(path: str, suffix: str) -> str:
    """Derive an output stem: x.frame.xml -> x, x.xml -> x, - -> out."""
    if path == "-":
        return "out"
    name = Path(path).name
    parent = Path(path).parent
    if name.endswith(suffix):
        return str(parent / name[: -len(suffix)])
    return str(parent / Path(name).stem)


def _print_diagnostics(diagnostics: list[Diagnostic], as_json: bool, stream=None) -> None:
    if not diagnostics:
        return
    if as_json:
        click.echo(json.dumps([d.to_json() for d in diagnostics], indent=2), file=stream)
    else:
        for d in diagnostics:
            element = "" if d.element_id is None else str(d.element_id)
            click.echo(f"{d.code}\t{element}\t{d.message}", file=stream)


def _parse_or_exit(data: bytes, as_json: bool) -> FrameDiagram:
    try:
        return parse_frame_xml(data)
    except FrameParseError as exc:
        diagnostics = list(exc.diagnostics) or [Diagnostic("PARSE_ERROR", str(exc))]
        _print_diagnostics(diagnostics, as_json)
        sys.exit(EXIT_DIAGNOSTICS)


@click.group()
@click.version_option(version=__version__, prog_name="frameforge")
def main() -> None:
    """Frame-diagram toolchain: validate, format, translate, render, serve."""


@main.command()
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def validate(file: str, as_json: bool) -> None:
    """Schema and semantic checks; exit 0 iff no errors."""
    data = _read_input(file)
    diagnostics = list(validate_against_schema(data))
    if not any(d.severity == "error" for d in diagnostics):
        try:
            parse_frame_xml(data)
        except FrameParseError as exc:
            diagnostics += list(exc.diagnostics) or [Diagnostic("PARSE_ERROR", str(exc))]
    _print_diagnostics(diagnostics, as_json)
    sys.exit(EXIT_DIAGNOSTICS if any(d.severity == "error" for d in diagnostics) else EXIT_OK)


@main.command()
@click.argument("file")
@click.option("--check", is_flag=True, help="Only report whether the file is canonical.")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def fmt(file: str, check: bool, as_json: bool) -> None:
    """Rewrite a frame file in canonical form (idempotent)."""
    data = _read_input(file)
    diagram = _parse_or_exit(data, as_json)
    canonical = serialize_frame_xml(diagram)
    if check:
        if canonical != data:
            _print_diagnostics([Diagnostic("DIFF", f"{file} is not in canonical form")], as_json)
            sys.exit(EXIT_DIAGNOSTICS)
        sys.exit(EXIT_OK)
    _write_output("-" if file == "-" else file, canonical)


@main.command()
@click.argument("file")
@click.option("--out-plantuml", default=None, help="PlantUML output path ('-' for stdout).")
@click.option("--out-xmi", default=None, help="XMI output path ('-' for stdout).")
@click.option("--out-trace", default=None, help="Trace sidecar output path ('-' for stdout).")
@click.option("--strict", is_flag=True, help="Fail on extension kinds instead of skipping them.")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def translate(
    file: str,
    out_plantuml: str | None,
    out_xmi: str | None,
    out_trace: str | None,
    strict: bool,
    as_json: bool,
) -> None:
    """Translate a frame file to UML artifacts (PlantUML, XMI, trace).

    Without --out-* options all three artifacts are written next to the
    input (x.frame.xml -> x.puml, x.uml.xmi, x.trace.json).
    """
    data = _read_input(file)
    diagram = _parse_or_exit(data, as_json)
    stem = _stem(file, FRAME_SUFFIX)
    try:
        result = frame_to_uml(diagram, strict=strict, name=Path(stem).name)
    except TranslationError as exc:
        _print_diagnostics(list(exc.diagnostics), as_json)
        sys.exit(EXIT_DIAGNOSTICS)
    _print_diagnostics(list(result.warnings), as_json, stream=sys.stderr)

    if out_plantuml is None and out_xmi is None and out_trace is None:
        out_plantuml, out_xmi, out_trace = f"{stem}.puml", f"{stem}{XMI_SUFFIX}", f"{stem}.trace.json"
    if out_plantuml is not None:
        _write_output(out_plantuml, to_plantuml(result.model).encode("utf-8"))
    if out_xmi is not None:
        _write_output(out_xmi, to_xmi(result.model))
    if out_trace is not None:
        _write_output(out_trace, trace_to_bytes(result.trace))


@main.command()
@click.argument("file")
@click.option("--trace", "trace_path", default=None, help="Trace sidecar restoring ids and geometry.")
@click.option("--out", "out_path", default=None, help="Frame XML output path ('-' for stdout).")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def reverse(file: str, trace_path: str | None, out_path: str | None, as_json: bool) -> None:
    """Translate an XMI file back into frame XML."""
    data = _read_input(file)
    trace = None
    if trace_path is not None:
        try:
            trace = trace_from_bytes(_read_input(trace_path))
        except Exception as exc:
            _print_diagnostics([Diagnostic("BAD_TRACE", str(exc))], as_json)
            sys.exit(EXIT_DIAGNOSTICS)
    try:
        imported = from_xmi(data)
        result = uml_to_frame(imported.model, trace)
    except (XmiParseError, StaleRefError, StaleTraceError, ValidationError) as exc:
        code = "STALE_TRACE" if isinstance(exc, StaleTraceError) else "PARSE_ERROR"
        _print_diagnostics([Diagnostic(code, str(exc))], as_json)
        sys.exit(EXIT_DIAGNOSTICS)
    _print_diagnostics(list(imported.warnings) + list(result.warnings), as_json, stream=sys.stderr)
    if out_path is None:
        out_path = f"{_stem(file, XMI_SUFFIX)}{FRAME_SUFFIX}"
    _write_output(out_path, serialize_frame_xml(result.diagram))


@main.command()
@click.argument("file")
@click.option("--out", "out_path", default=None, help="SVG output path ('-' for stdout).")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def render(file: str, out_path: str | None, as_json: bool) -> None:
    """Render a frame file to SVG, laying out missing geometry first."""
    data = _read_input(file)
    diagram = _parse_or_exit(data, as_json)
    try:
        if any(el.bbox is None for el in diagram.elements):
            diagram = auto_layout(diagram)
    except CyclicHierarchyError as exc:
        _print_diagnostics([Diagnostic("CYCLIC_HIERARCHY", str(exc))], as_json)
        sys.exit(EXIT_DIAGNOSTICS)
    if out_path is None:
        out_path = f"{_stem(file, FRAME_SUFFIX)}.svg"
    _write_output(out_path, render_frame_svg(diagram).encode("utf-8"))


@main.command()
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="Emit diagnostics as JSON.")
def roundtrip(file: str, as_json: bool) -> None:
    """Check frame -> UML -> frame losslessness; exit 0 iff lossless."""
    data = _read_input(file)
    diagram = _parse_or_exit(data, as_json)
    diffs = check_round_trip(diagram)
    _print_diagnostics(diffs, as_json)
    sys.exit(EXIT_DIAGNOSTICS if diffs else EXIT_OK)


@main.command()
@click.option("--port", default=7341, show_default=True, help="TCP port to listen on.")
@click.option(
    "--data-dir",
    envvar="FRAMEFORGE_DATA_DIR",
    required=True,
    help="Document directory (falls back to $FRAMEFORGE_DATA_DIR).",
)
@click.option("--max-body-kb", default=1024, show_default=True, help="Request body size limit.")
@click.option("--host", default="127.0.0.1", show_default=True, help="Bind address.")
@click.option("--ui-dir", default=None, help="Directory with the editor UI build to serve at /.")
def serve(port: int, data_dir: str, max_body_kb: int, host: str, ui_dir: str | None) -> None:
    """Run the local HTTP service."""
    import uvicorn

    from .service import create_app

    if ui_dir is None:
        bundled = Path.cwd() / "frontend" / "dist"
        if bundled.is_dir():
            ui_dir = str(bundled)
    app = create_app(data_dir, max_body_kb=max_body_kb, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
