"""Command-line front end mirroring the service endpoints."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import pattern_io
from .interaction import interaction_map
from .magnet import SheetModel, hysteresis_csv
from .pairs import generate_pair_set
from .patterns import PixelGrid, complement, sylvester_hadamard
from .plotter import HallSensorModel, PlotterSession, VirtualSheet, run_program
from .service import classify_reading
from .toolpath import compile_plot, compile_scan, emit_program, estimate_job


@click.group()
def main():
    """Design, predict, compile, and virtually plot magnetic pixel patterns."""


def _write(out: str, data: bytes):
    if out == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}")


def _load_grid(path: str) -> PixelGrid:
    grid, _ = pattern_io.load_pattern(Path(path).read_bytes())
    return grid


def _session_from_state(state_path, rows, cols, sigma, seed) -> PlotterSession:
    sheet = VirtualSheet(rows, cols)
    if state_path and Path(state_path).exists():
        grid, _ = pattern_io.load_pattern(Path(state_path).read_bytes())
        sheet = VirtualSheet(grid.rows, grid.cols)
        sheet.states = grid.values.copy()
    return PlotterSession(sheet=sheet, sensor=HallSensorModel(noise_sigma=sigma), seed=seed)


def _save_state(session: PlotterSession, state_path):
    if state_path:
        grid = PixelGrid(session.sheet.states.copy())
        Path(state_path).write_bytes(pattern_io.save_pattern(grid, {"source": "cli-state"}))


@main.command()
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--out", default="-", help="output pattern file ('-' for stdout)")
def hadamard(order, out):
    """Generate a Hadamard pattern of the given power-of-two order."""
    grid = sylvester_hadamard(order)
    _write(out, pattern_io.save_pattern(grid, {"name": f"hadamard-{order}"}))


@main.command()
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--candidates", type=int, default=64, show_default=True)
@click.option("--mode", type=click.Choice(["attract", "repel"]), default="attract", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default="pairs", show_default=True)
def pairs(k, order, candidates, mode, seed, out_dir):
    """Generate k mutually agnostic key/lock pattern pairs."""
    result = generate_pair_set(k, order, candidates, mode, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, (key, lock) in enumerate(result.pairs):
        (out / f"pair{i}_key{pattern_io.FILE_EXTENSION}").write_bytes(
            pattern_io.save_pattern(key, {"pair": str(i), "role": "key", "seed": str(seed)})
        )
        (out / f"pair{i}_lock{pattern_io.FILE_EXTENSION}").write_bytes(
            pattern_io.save_pattern(lock, {"pair": str(i), "role": "lock", "seed": str(seed)})
        )
    report = {
        "score": result.score,
        "seed": result.seed,
        "mode": result.mode,
        "permutations": [list(p) for p in result.permutations],
        "stats": result.stats,
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    click.echo(f"wrote {2 * k} patterns to {out}/ (score {result.score:.4f})")


@main.command()
@click.option("--a", "a_path", required=True, help="first pattern file")
@click.option("--b", "b_path", help="second pattern file (default: complement of A)")
@click.option("--normalization", type=click.Choice(["overlap", "full"]), default="overlap", show_default=True)
@click.option("--out", default="-", help="output interaction map JSON")
def predict(a_path, b_path, normalization, out):
    """Cross-correlate two patterns over every translation offset."""
    a = _load_grid(a_path)
    b = _load_grid(b_path) if b_path else complement(a)
    imap = interaction_map(a, b, normalization)
    doc = json.dumps(imap.to_doc(), indent=2, sort_keys=True) + "\n"
    _write(out, doc.encode())


@main.command("compile")
@click.option("--pattern", "pattern_path", required=True)
@click.option("--feed", type=float, default=1200.0, show_default=True)
@click.option("--out", default="-", help="output program text")
def compile_cmd(pattern_path, feed, out):
    """Compile a pattern to plotter program text."""
    grid = _load_grid(pattern_path)
    path = compile_plot(grid, feed=feed)
    est = estimate_job(path)
    _write(out, emit_program(path).encode())
    click.echo(
        f"{est.pixels_written} pixels, {est.pixels_skipped} skipped, "
        f"{est.duration_s:.1f} s, {est.energy_j:.0f} J",
        err=True,
    )


@main.command()
@click.option("--pattern", "pattern_path", required=True)
@click.option("--state", "state_path", help="sheet state file to load/update")
@click.option("--sigma", type=float, default=0.18, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--feed", type=float, default=1200.0, show_default=True)
def plot(pattern_path, state_path, sigma, seed, feed):
    """Plot a pattern onto the virtual device."""
    grid = _load_grid(pattern_path)
    session = _session_from_state(state_path, grid.rows, grid.cols, sigma, seed)
    path = compile_plot(grid, feed=feed, sheet=session.sheet.model)
    responses = run_program(session, emit_program(path))
    errors = [r for r in responses if r.startswith("err")]
    _save_state(session, state_path)
    est = estimate_job(path)
    click.echo(
        f"plotted {est.pixels_written} pixels ({est.pixels_skipped} skipped), "
        f"est {est.duration_s:.1f} s / {est.energy_j:.0f} J, {len(errors)} errors"
    )


@main.command()
@click.option("--rows", type=int, default=8, show_default=True)
@click.option("--cols", type=int, default=8, show_default=True)
@click.option("--state", "state_path", help="sheet state file to read")
@click.option("--sigma", type=float, default=0.18, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="-", help="output pattern file of classified readings")
def scan(rows, cols, state_path, sigma, seed, out):
    """Scan the virtual device and classify pixel polarities."""
    session = _session_from_state(state_path, rows, cols, sigma, seed)
    program = emit_program(compile_scan(rows, cols))
    readings = np.zeros((rows, cols))
    lines = [ln for ln in program.splitlines() if ln.strip()]
    from .plotter import handle_command

    for line in lines:
        resp = handle_command(session, line)
        if line.startswith("HALL?"):
            r, c = (int(v) for v in line.split()[1].split(","))
            readings[r, c] = float(resp.split()[1])
    values = np.vectorize(classify_reading)(readings)
    metadata = {"raw_readings": json.dumps([[round(float(v), 6) for v in row] for row in readings])}
    _write(out, pattern_io.save_pattern(PixelGrid(values), metadata))


@main.command("bh-curve")
@click.option("--i-max", "i_maxes", type=float, multiple=True, default=(3.3, 6.6, 10.0), show_default=True)
@click.option("--steps", type=int, default=50, show_default=True)
@click.option("--out", default="-", help="output CSV")
def bh_curve(i_maxes, steps, out):
    """Export sheet hysteresis loops as CSV."""
    _write(out, hysteresis_csv(SheetModel(), i_maxes, steps).encode())


@main.command()
@click.option("--order", type=int, default=8, show_default=True)
@click.option("--sigma", type=float, default=0.18, show_default=True)
@click.option("--seed", type=int, default=5, show_default=True)
def roundtrip(order, sigma, seed):
    """Plot a Hadamard pattern, scan it back, and verify recovery."""
    grid = sylvester_hadamard(order)
    session = PlotterSession(
        sheet=VirtualSheet(order, order), sensor=HallSensorModel(noise_sigma=sigma), seed=seed
    )
    run_program(session, emit_program(compile_plot(grid)))
    program = emit_program(compile_scan(order, order))
    recovered = np.zeros((order, order))
    from .plotter import handle_command

    for line in program.splitlines():
        if not line.strip():
            continue
        resp = handle_command(session, line)
        if line.startswith("HALL?"):
            r, c = (int(v) for v in line.split()[1].split(","))
            recovered[r, c] = classify_reading(float(resp.split()[1]))
    matches = int(np.sum(recovered == grid.values))
    total = order * order
    status = "PASS" if matches == total else "FAIL"
    click.echo(f"{status}: recovered {matches}/{total} pixels (sigma={sigma}, seed={seed})")
    if matches != total:
        raise SystemExit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--rows", type=int, default=16, show_default=True)
@click.option("--cols", type=int, default=16, show_default=True)
@click.option("--sigma", type=float, default=0.18, show_default=True)
@click.option("--seed", type=int, default=5, show_default=True)
def serve(host, port, rows, cols, sigma, seed):
    """Run the control service (backend for the design studio)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(rows=rows, cols=cols, sigma=sigma, seed=seed), host=host, port=port)


if __name__ == "__main__":
    main()
