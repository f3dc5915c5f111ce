"""Line-protocol emulator for the magnetic plotter device.

A session owns a simulated sheet and a head position, consumes one
program line at a time, and answers exactly one response line per
command ("ok", "H <value>", or "err <code> <msg>").  Writes go through
the sheet magnetization model; hall reads add seeded gaussian noise.
Energizing while the head is raised or off-cell is legal but programs
nothing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .magnet import PixelState, SheetModel, program_pixel
from .patterns import PixelGrid
from .toolpath import PIXEL_PITCH_MM, Z_CONTACT_MM

log = logging.getLogger(__name__)

CELL_SNAP_TOLERANCE_MM = 0.5
DEFAULT_HALL_SIGMA = 0.18


@dataclass
class VirtualSheet:
    rows: int
    cols: int
    model: SheetModel = field(default_factory=SheetModel)
    origin: tuple = (0.0, 0.0)
    pitch: float = PIXEL_PITCH_MM
    states: np.ndarray = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"sheet must be >= 1x1 cells, got {self.rows}x{self.cols}")
        if self.states is None:
            self.states = np.zeros((self.rows, self.cols))

    def cell_under(self, x: float, y: float) -> Optional[tuple]:
        """Snap head coordinates to a cell center, or None if off-cell."""
        col = round((x - self.origin[0]) / self.pitch)
        row = round((y - self.origin[1]) / self.pitch)
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            return None
        cx = self.origin[0] + col * self.pitch
        cy = self.origin[1] + row * self.pitch
        if abs(x - cx) > CELL_SNAP_TOLERANCE_MM or abs(y - cy) > CELL_SNAP_TOLERANCE_MM:
            return None
        return row, col


@dataclass
class HallSensorModel:
    noise_sigma: float = DEFAULT_HALL_SIGMA
    gain: float = 1.0


@dataclass
class PlotterSession:
    sheet: VirtualSheet
    sensor: HallSensorModel = field(default_factory=HallSensorModel)
    seed: int = 0
    head: tuple = (0.0, 0.0, 0.0)
    magnet: Optional[tuple] = None  # (polarity, current) while energized
    rng: np.random.Generator = None

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.seed)


def new_session(
    rows: int,
    cols: int,
    sigma: float = DEFAULT_HALL_SIGMA,
    seed: int = 0,
    sheet_model: Optional[SheetModel] = None,
) -> PlotterSession:
    sheet = VirtualSheet(rows, cols, model=sheet_model or SheetModel())
    return PlotterSession(sheet=sheet, sensor=HallSensorModel(noise_sigma=sigma), seed=seed)


def read_hall(session: PlotterSession, row: int, col: int) -> float:
    """Noisy normalized reading of one cell; does not mutate the sheet."""
    sheet = session.sheet
    if not (0 <= row < sheet.rows and 0 <= col < sheet.cols):
        raise ValueError(f"cell ({row}, {col}) outside {sheet.rows}x{sheet.cols} sheet")
    noise = session.rng.normal(0.0, session.sensor.noise_sigma) if session.sensor.noise_sigma > 0 else 0.0
    return session.sensor.gain * float(sheet.states[row, col]) + noise


def snapshot_sheet(session: PlotterSession) -> PixelGrid:
    """True (noise-free) sheet state as a pattern grid."""
    return PixelGrid(session.sheet.states.copy())


def _apply_magnet(session: PlotterSession, polarity: str, current: float):
    session.magnet = (polarity, current)
    x, y, z = session.head
    if z != Z_CONTACT_MM:
        return
    cell = session.sheet.cell_under(x, y)
    if cell is None:
        log.debug("energize at (%.2f, %.2f) is off-cell; no pixel written", x, y)
        return
    signed = current if polarity == "N" else -current
    row, col = cell
    state = program_pixel(session.sheet.model, PixelState(float(session.sheet.states[row, col])), signed)
    session.sheet.states[row, col] = state.m


def handle_command(session: PlotterSession, line: str) -> str:
    """Process one program line; always returns exactly one response line."""
    parts = line.strip().split()
    if not parts:
        return "err 1 unknown_command"
    op = parts[0]
    try:
        if op == "G0":
            coords = dict(zip("XYZ", session.head))
            for p in parts[1:]:
                if p[0] not in "XYZF":
                    return "err 2 bad_argument"
                coords[p[0]] = float(p[1:])
            session.head = (coords["X"], coords["Y"], coords["Z"])
            return "ok"
        if op == "MAG":
            if len(parts) == 2 and parts[1] == "OFF":
                session.magnet = None
                return "ok"
            if len(parts) == 3 and parts[1] in ("N", "S"):
                current = float(parts[2])
                if not 0.0 < current <= session.sheet.model.i_program_full:
                    return "err 2 bad_argument"
                _apply_magnet(session, parts[1], current)
                return "ok"
            return "err 2 bad_argument"
        if op == "DWELL":
            if len(parts) != 2 or float(parts[1]) < 0:
                return "err 2 bad_argument"
            return "ok"
        if op == "HALL?":
            if len(parts) != 2 or "," not in parts[1]:
                return "err 2 bad_argument"
            r_str, c_str = parts[1].split(",", 1)
            row, col = int(r_str), int(c_str)
            if not (0 <= row < session.sheet.rows and 0 <= col < session.sheet.cols):
                return "err 3 out_of_range"
            return f"H {read_hall(session, row, col):.3f}"
        if op == "HOME":
            session.head = (0.0, 0.0, 0.0)
            return "ok"
    except ValueError:
        return "err 2 bad_argument"
    return "err 1 unknown_command"


def handle_motion_line(session: PlotterSession, line: str) -> str:
    """Dual-channel mode: the CNC port only accepts motion commands."""
    if not line.strip().startswith(("G0", "HOME")):
        return "err 1 unknown_command"
    return handle_command(session, line)


def handle_device_line(session: PlotterSession, line: str) -> str:
    """Dual-channel mode: the add-on port only accepts device commands."""
    if not line.strip().startswith(("MAG", "DWELL", "HALL?")):
        return "err 1 unknown_command"
    return handle_command(session, line)


def run_program(session: PlotterSession, text: str) -> list[str]:
    """Replay a whole program; one response per line."""
    return [handle_command(session, line) for line in text.splitlines() if line.strip()]
