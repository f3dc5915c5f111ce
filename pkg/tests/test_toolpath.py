import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magpix.patterns import PixelGrid, sylvester_hadamard
from magpix.toolpath import (
    Energize,
    HallRead,
    Home,
    MagnetOff,
    MoveTo,
    Toolpath,
    check_toolpath,
    compile_plot,
    compile_scan,
    emit_program,
    emit_program_streams,
    estimate_job,
    parse_program,
)


def ternary_grid(seed, rows=6, cols=6):
    rng = np.random.default_rng(seed)
    return PixelGrid(rng.choice([-1.0, 0.0, 1.0], size=(rows, cols)))


# --- compile_plot ------------------------------------------------------------

def test_full_grid_emits_one_pulse_per_cell():
    path = compile_plot(sylvester_hadamard(8))
    assert path.pixels_written == 64
    assert path.pixels_skipped == 0
    assert isinstance(path.commands[-1], Home)


def test_delta_grid_skips_unmasked_zeros():
    vals = np.zeros((8, 8))
    for r, c in [(0, 0), (1, 5), (4, 4), (7, 2)]:
        vals[r, c] = 1.0
    path = compile_plot(PixelGrid(vals))
    assert path.pixels_written == 4
    assert path.pixels_skipped == 60


def test_all_zero_grid_is_home_only():
    path = compile_plot(PixelGrid(np.zeros((3, 3))))
    assert path.commands == [Home()]


def test_masked_zero_emits_demagnetizing_pulse():
    grid = PixelGrid([[0.0, 1.0]], write_mask=[[True, False]])
    path = compile_plot(grid)
    pulses = [c for c in path.commands if isinstance(c, Energize)]
    assert len(pulses) == 1
    assert pulses[0].current == 1.2   # coercive stroke


def test_polarity_and_current_follow_cell_value():
    grid = PixelGrid([[1.0, -1.0]])
    pulses = [c for c in compile_plot(grid).commands if isinstance(c, Energize)]
    assert [(p.polarity, p.current) for p in pulses] == [("N", 10.0), ("S", 10.0)]


def test_boustrophedon_consecutive_cells_one_pitch_apart():
    path = compile_plot(sylvester_hadamard(8))
    cells = []
    for i, cmd in enumerate(path.commands):
        if isinstance(cmd, Energize):
            move = path.commands[i - 1]
            cells.append((move.x, move.y))
    for (x1, y1), (x2, y2) in zip(cells, cells[1:]):
        dx, dy = abs(x2 - x1), abs(y2 - y1)
        assert sorted([dx, dy]) == [0.0, 3.0]


@given(st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_plot_structure_is_safe(seed):
    grid = ternary_grid(seed)
    path = compile_plot(grid)
    check_toolpath(path)
    assert path.pixels_written == int(grid.mask.sum())


# --- compile_scan --------------------------------------------------------------

def test_scan_counts():
    assert sum(isinstance(c, HallRead) for c in compile_scan(8, 8).commands) == 64
    assert sum(isinstance(c, HallRead) for c in compile_scan(1, 1).commands) == 1


def test_scan_rejects_empty():
    with pytest.raises(ValueError):
        compile_scan(0, 4)


@given(st.integers(1, 7), st.integers(1, 7))
@settings(max_examples=20, deadline=None)
def test_scan_reads_preceded_by_contact_move(rows, cols):
    path = compile_scan(rows, cols)
    check_toolpath(path)
    for i, cmd in enumerate(path.commands):
        if isinstance(cmd, HallRead):
            move = path.commands[i - 1]
            assert isinstance(move, MoveTo) and move.z == 0.0
            assert (move.x, move.y) == (cmd.col * 3.0, cmd.row * 3.0)


# --- estimate_job ----------------------------------------------------------------

def test_estimate_full_plot_energize_time():
    est = estimate_job(compile_plot(sylvester_hadamard(8)))
    assert est.dwell_s == pytest.approx(64 * 0.7)
    assert est.pulse_energy_j == pytest.approx(64 * 91.0)
    assert est.duration_s >= est.pixels_written * 0.7


def test_estimate_per_pixel_pulse_energy():
    est = estimate_job(compile_plot(PixelGrid([[1.0]])))
    assert est.pulse_energy_j == pytest.approx(91.0)


def test_estimate_empty_path():
    est = estimate_job(Toolpath())
    assert est.duration_s == 0.0
    assert est.energy_j == 0.0


def test_estimate_rejects_zero_feed():
    path = Toolpath(commands=[MoveTo(1.0, 0.0, 0.0, feed=0.0)])
    with pytest.raises(ValueError, match="feed"):
        estimate_job(path)


@given(st.integers(0, 500), st.integers(0, 500))
@settings(max_examples=20, deadline=None)
def test_estimate_additive_over_concatenation(seed_a, seed_b):
    pa = compile_plot(ternary_grid(seed_a, 3, 4))
    pb = compile_plot(ternary_grid(seed_b, 4, 3))
    combined = Toolpath(
        commands=pa.commands + pb.commands,
        pixels_skipped=pa.pixels_skipped + pb.pixels_skipped,
    )
    ea, eb, ec = estimate_job(pa), estimate_job(pb), estimate_job(combined)
    assert ec.duration_s == pytest.approx(ea.duration_s + eb.duration_s, abs=1e-9)
    assert ec.energy_j == pytest.approx(ea.energy_j + eb.energy_j, abs=1e-9)
    assert ec.pixels_written == ea.pixels_written + eb.pixels_written


# --- emit / parse ------------------------------------------------------------------

def test_emit_formats():
    line = emit_program(Toolpath(commands=[MoveTo(3.0, 0.0, 3.0, 1200.0)]))
    assert line == "G0 X3.00 Y0.00 Z3.00 F1200\n"
    text = emit_program(Toolpath(commands=[Energize("N", 10.0, 0.7)]))
    assert text == "MAG N 10.00\nDWELL 0.70\n"
    assert emit_program(Toolpath(commands=[MagnetOff()])) == "MAG OFF\n"
    assert emit_program(Toolpath(commands=[HallRead(2, 5)])) == "HALL? 2,5\n"
    assert emit_program(Toolpath(commands=[Home()])) == "HOME\n"


def test_emit_is_deterministic():
    h2 = sylvester_hadamard(2)
    assert emit_program(compile_plot(h2)) == emit_program(compile_plot(h2))


def test_h2_golden_program():
    from pathlib import Path

    golden = Path(__file__).parent / "fixtures" / "h2_plot_program.txt"
    assert emit_program(compile_plot(sylvester_hadamard(2))) == golden.read_text()


def test_split_streams_partition_program():
    path = compile_plot(sylvester_hadamard(2))
    motion, device = emit_program_streams(path)
    merged_lines = set(emit_program(path).splitlines())
    assert set(motion.splitlines()) | set(device.splitlines()) == merged_lines
    assert all(ln.startswith(("G0", "HOME")) for ln in motion.splitlines())
    assert all(ln.startswith(("MAG", "DWELL", "HALL?")) for ln in device.splitlines())


@given(st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_parse_round_trip(seed):
    path = compile_plot(ternary_grid(seed, 4, 5))
    parsed = parse_program(emit_program(path))
    assert parsed.commands == path.commands
    check_toolpath(parsed)


def test_parse_round_trip_scan():
    path = compile_scan(3, 4)
    parsed = parse_program(emit_program(path))
    assert parsed.commands == path.commands


def test_parse_rejects_garbage():
    with pytest.raises(ValueError, match="cannot parse"):
        parse_program("WOBBLE 3\n")
    with pytest.raises(ValueError, match="DWELL"):
        parse_program("MAG N 10.00\nMAG OFF\n")


# --- command validation ---------------------------------------------------------

def test_energize_validation():
    with pytest.raises(ValueError, match="polarity"):
        Energize("X", 5.0)
    with pytest.raises(ValueError, match="current"):
        Energize("N", 0.0)
    with pytest.raises(ValueError, match="current"):
        Energize("N", 10.5)
    with pytest.raises(ValueError, match="dwell"):
        Energize("N", 5.0, 0.0)
