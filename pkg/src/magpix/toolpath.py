"""Compile pixel grids into machine command sequences.

Plot and scan jobs visit cells in serpentine row order, hopping 3 mm up
between cells so the head clears the sheet.  Only masked cells of a
pattern produce write commands; a masked zero emits a demagnetizing
pulse at the coercive current.  Programs serialize to a line-oriented
text format (G-code-like motion plus MAG/HALL device lines) that is
byte-stable for identical input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .magnet import SheetModel, current_for_target
from .patterns import PixelGrid

PIXEL_PITCH_MM = 3.0
Z_CLEARANCE_MM = 3.0
Z_CONTACT_MM = 0.0
PULSE_DWELL_S = 0.7
DEFAULT_FEED_MM_MIN = 1200.0
PULSE_POWER_W = 130.0
IDLE_POWER_W = 0.2


@dataclass(frozen=True)
class MoveTo:
    x: float
    y: float
    z: float
    feed: float = DEFAULT_FEED_MM_MIN


@dataclass(frozen=True)
class Energize:
    polarity: str           # "N" or "S"
    current: float          # amperes
    dwell: float = PULSE_DWELL_S

    def __post_init__(self):
        if self.polarity not in ("N", "S"):
            raise ValueError(f"polarity must be N or S, got {self.polarity!r}")
        if not 0.0 < self.current <= 10.0:
            raise ValueError(f"current must be in (0, 10] A, got {self.current}")
        if self.dwell <= 0.0:
            raise ValueError(f"dwell must be positive, got {self.dwell}")


@dataclass(frozen=True)
class MagnetOff:
    pass


@dataclass(frozen=True)
class HallRead:
    row: int
    col: int


@dataclass(frozen=True)
class Home:
    pass


MachineCommand = Union[MoveTo, Energize, MagnetOff, HallRead, Home]


@dataclass
class Toolpath:
    commands: list = field(default_factory=list)
    pixel_pitch: float = PIXEL_PITCH_MM
    z_clearance: float = Z_CLEARANCE_MM
    z_contact: float = Z_CONTACT_MM
    origin: tuple = (0.0, 0.0)
    pixels_skipped: int = 0

    @property
    def pixels_written(self) -> int:
        return sum(1 for c in self.commands if isinstance(c, Energize))


@dataclass(frozen=True)
class JobEstimate:
    duration_s: float
    energy_j: float
    pixels_written: int
    pixels_skipped: int
    dwell_s: float = 0.0          # time spent energized
    pulse_energy_j: float = 0.0   # energy drawn during dwells


def _serpentine(rows: int, cols: int):
    for r in range(rows):
        cs = range(cols) if r % 2 == 0 else range(cols - 1, -1, -1)
        for c in cs:
            yield r, c


def cell_xy(origin: tuple, row: int, col: int, pitch: float = PIXEL_PITCH_MM) -> tuple:
    return origin[0] + col * pitch, origin[1] + row * pitch


def compile_plot(
    grid: PixelGrid,
    origin: tuple = (0.0, 0.0),
    feed: float = DEFAULT_FEED_MM_MIN,
    sheet: Optional[SheetModel] = None,
) -> Toolpath:
    """Write commands for every masked cell, serpentine order, Z-hop per cell."""
    sheet = sheet or SheetModel()
    path = Toolpath(origin=origin)
    mask = grid.mask
    for r, c in _serpentine(grid.rows, grid.cols):
        if not mask[r, c]:
            path.pixels_skipped += 1
            continue
        x, y = cell_xy(origin, r, c)
        value = float(grid.values[r, c])
        if value == 0.0:
            pulse = Energize("N", sheet.i_coercive)
        else:
            current = current_for_target(sheet, value)
            pulse = Energize("N" if value > 0 else "S", abs(current))
        path.commands += [
            MoveTo(x, y, path.z_clearance, feed),
            MoveTo(x, y, path.z_contact, feed),
            pulse,
            MagnetOff(),
            MoveTo(x, y, path.z_clearance, feed),
        ]
    path.commands.append(Home())
    return path


def compile_scan(
    rows: int,
    cols: int,
    origin: tuple = (0.0, 0.0),
    feed: float = DEFAULT_FEED_MM_MIN,
) -> Toolpath:
    """One hall read per cell, same motion discipline as plotting."""
    if rows < 1 or cols < 1:
        raise ValueError(f"scan size must be >= 1x1, got {rows}x{cols}")
    path = Toolpath(origin=origin)
    for r, c in _serpentine(rows, cols):
        x, y = cell_xy(origin, r, c)
        path.commands += [
            MoveTo(x, y, path.z_clearance, feed),
            MoveTo(x, y, path.z_contact, feed),
            HallRead(r, c),
            MoveTo(x, y, path.z_clearance, feed),
        ]
    path.commands.append(Home())
    return path


def estimate_job(
    path: Toolpath,
    idle_power_w: float = IDLE_POWER_W,
    pulse_power_w: float = PULSE_POWER_W,
) -> JobEstimate:
    """Duration and energy: dwells at pulse power, everything else idle."""
    pos = (0.0, 0.0, 0.0)
    last_feed = DEFAULT_FEED_MM_MIN
    travel_s = 0.0
    dwell_s = 0.0
    written = 0
    for cmd in path.commands:
        if isinstance(cmd, MoveTo):
            if cmd.feed <= 0:
                raise ValueError(f"feed must be positive, got {cmd.feed}")
            dist = math.dist(pos, (cmd.x, cmd.y, cmd.z))
            travel_s += dist / cmd.feed * 60.0
            pos = (cmd.x, cmd.y, cmd.z)
            last_feed = cmd.feed
        elif isinstance(cmd, Energize):
            dwell_s += cmd.dwell
            written += 1
        elif isinstance(cmd, Home):
            dist = math.dist(pos, (0.0, 0.0, 0.0))
            travel_s += dist / last_feed * 60.0
            pos = (0.0, 0.0, 0.0)
    duration = travel_s + dwell_s
    pulse_energy = dwell_s * pulse_power_w
    return JobEstimate(
        duration_s=duration,
        energy_j=pulse_energy + travel_s * idle_power_w,
        pixels_written=written,
        pixels_skipped=path.pixels_skipped,
        dwell_s=dwell_s,
        pulse_energy_j=pulse_energy,
    )


def emit_program(path: Toolpath) -> str:
    """Serialize to the merged motion+device line protocol."""
    lines = []
    for cmd in path.commands:
        if isinstance(cmd, MoveTo):
            lines.append(f"G0 X{cmd.x:.2f} Y{cmd.y:.2f} Z{cmd.z:.2f} F{cmd.feed:g}")
        elif isinstance(cmd, Energize):
            lines.append(f"MAG {cmd.polarity} {cmd.current:.2f}")
            lines.append(f"DWELL {cmd.dwell:.2f}")
        elif isinstance(cmd, MagnetOff):
            lines.append("MAG OFF")
        elif isinstance(cmd, HallRead):
            lines.append(f"HALL? {cmd.row},{cmd.col}")
        elif isinstance(cmd, Home):
            lines.append("HOME")
        else:
            raise ValueError(f"unknown command {cmd!r}")
    return "\n".join(lines) + "\n"


def emit_program_streams(path: Toolpath) -> tuple[str, str]:
    """Split serialization: (motion lines, device lines) as separate channels."""
    motion, device = [], []
    for line in emit_program(path).splitlines():
        (motion if line.startswith(("G0", "HOME")) else device).append(line)
    return "\n".join(motion) + "\n", "\n".join(device) + "\n"


def parse_program(text: str) -> Toolpath:
    """Rebuild a Toolpath from emitted program text."""
    path = Toolpath()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    i = 0
    while i < len(lines):
        line = lines[i]
        parts = line.split()
        if parts[0] == "G0":
            coords = {}
            for p in parts[1:]:
                coords[p[0]] = float(p[1:])
            path.commands.append(
                MoveTo(coords["X"], coords["Y"], coords["Z"], coords.get("F", DEFAULT_FEED_MM_MIN))
            )
        elif parts[0] == "MAG" and parts[1] == "OFF":
            path.commands.append(MagnetOff())
        elif parts[0] == "MAG":
            if i + 1 >= len(lines) or not lines[i + 1].startswith("DWELL"):
                raise ValueError(f"line {i + 1}: MAG pulse without a DWELL directive")
            dwell = float(lines[i + 1].split()[1])
            path.commands.append(Energize(parts[1], float(parts[2]), dwell))
            i += 1
        elif parts[0] == "HALL?":
            r, c = parts[1].split(",")
            path.commands.append(HallRead(int(r), int(c)))
        elif parts[0] == "HOME":
            path.commands.append(Home())
        else:
            raise ValueError(f"line {i + 1}: cannot parse {line!r}")
        i += 1
    return path


def check_toolpath(path: Toolpath) -> None:
    """Assert motion-safety structure; raises ValueError on violation.

    Every write/read must be immediately preceded by a contact-height
    move at its cell, and any two actions at different cells must have a
    clearance-height move between them.
    """
    last_action_xy = None
    clearance_since_action = True
    for idx, cmd in enumerate(path.commands):
        if isinstance(cmd, MoveTo):
            if cmd.z >= path.z_clearance:
                clearance_since_action = True
            continue
        if isinstance(cmd, (Energize, HallRead)):
            prev = path.commands[idx - 1] if idx > 0 else None
            if not isinstance(prev, MoveTo) or prev.z != path.z_contact:
                raise ValueError(f"command {idx}: action not preceded by a contact-height move")
            xy = (prev.x, prev.y)
            if last_action_xy is not None and xy != last_action_xy and not clearance_since_action:
                raise ValueError(f"command {idx}: no clearance move between cells")
            last_action_xy = xy
            clearance_since_action = False
