"""Electromagnet and sheet magnetization models.

The write head is an anhysteretic electromagnet: an odd saturating
curve through the origin, parameterized directly by coil current.  The
sheet is hysteretic but modeled with overwrite semantics: the remanence
left in a pixel depends only on the last programming pulse, not on the
full field history.  That matches the programming workflow (any pulse
replaces whatever was there) at the cost of true minor-loop memory.

``reach`` maps pulse current to the normalized remanence it leaves
behind; ``trace_hysteresis_loop`` produces the closed flux-vs-current
loops used for plotting and calibration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class ElectromagnetModel:
    b_sat_tip: float = 0.302     # tesla at the conic tip
    i_sat: float = 10.0          # amperes at effective saturation
    shape: float = 3.0           # steepness: tanh(shape) = fraction of b_sat at i_sat
    turns: int = 250
    core_mu_r: float = 90000.0
    noise_sigma: float = 1.01e-3  # tesla, repeatability of repeated energizations


def emag_field(model: ElectromagnetModel, i: float) -> float:
    """Tip flux density for a coil current; odd, saturating, no remanence."""
    if abs(i) > 1.5 * model.i_sat:
        raise ValueError(f"current {i} A outside modeled range +/-{1.5 * model.i_sat} A")
    return model.b_sat_tip * math.tanh(model.shape * i / model.i_sat)


def sample_field(model: ElectromagnetModel, i: float, rng: np.random.Generator) -> float:
    """One noisy field measurement (repeatability noise on top of the curve)."""
    return emag_field(model, i) + rng.normal(0.0, model.noise_sigma)


@dataclass(frozen=True)
class SheetModel:
    b_sat: float = 0.0344          # tesla retained at full saturation
    i_program_full: float = 10.0   # amperes for full saturation
    reach_shape: float = 1.75      # tanh steepness of the pulse -> remanence map
    i_coercive: float = 1.2        # amperes of the demagnetizing pulse
    remanence_fraction: float = 0.995  # flux kept at 0 A after a saturating sweep

    def reach(self, i: float) -> float:
        """Normalized remanence a pulse of |current| i leaves behind.

        Strictly increasing from reach(0) = 0 to reach(i_program_full) = 1.
        """
        if i < 0 or i > self.i_program_full:
            raise ValueError(f"pulse current {i} A outside [0, {self.i_program_full}] A")
        return math.tanh(self.reach_shape * i / self.i_program_full) / math.tanh(self.reach_shape)


@dataclass(frozen=True)
class PixelState:
    m: float = 0.0  # normalized remanent magnetization; flux = m * b_sat

    def __post_init__(self):
        if abs(self.m) > 1.0:
            raise ValueError(f"magnetization {self.m} outside [-1, 1]")

    def flux(self, sheet: SheetModel) -> float:
        return self.m * sheet.b_sat


def program_pixel(sheet: SheetModel, state: PixelState, pulse_current: float) -> PixelState:
    """Apply one programming pulse; the new remanence overwrites the old.

    A pulse at exactly the coercive magnitude acts as the demagnetizing
    stroke and zeroes the pixel regardless of its prior value, so a
    compiled pattern can reset cells without knowing their history.
    """
    if abs(pulse_current) > sheet.i_program_full:
        raise ValueError(
            f"pulse {pulse_current} A exceeds programming range +/-{sheet.i_program_full} A"
        )
    if pulse_current == 0.0:
        return state
    if abs(pulse_current) == sheet.i_coercive:
        return PixelState(0.0)
    return PixelState(math.copysign(sheet.reach(abs(pulse_current)), pulse_current))


def current_for_target(sheet: SheetModel, target_m: float) -> float:
    """Invert ``reach``: the signed pulse current that programs target_m.

    Unreachable only at |target| = reach(i_coercive), where the exact
    inverse current doubles as the demagnetizing pulse.
    """
    if abs(target_m) > 1.0:
        raise ValueError(f"target magnetization {target_m} outside [-1, 1]")
    if target_m == 0.0:
        return 0.0
    mag = abs(target_m)
    if mag == 1.0:
        i = sheet.i_program_full
    else:
        i = brentq(lambda x: sheet.reach(x) - mag, 0.0, sheet.i_program_full, xtol=1e-9)
    return math.copysign(i, target_m)


@dataclass(frozen=True)
class LoopPoint:
    current_a: float
    flux_t: float
    branch: str  # "initial" | "descending" | "ascending"


def _loop_params(sheet: SheetModel, i_max: float):
    tip = sheet.b_sat * sheet.reach(i_max)
    c_m = sheet.i_coercive * sheet.reach(i_max)
    r = sheet.remanence_fraction

    def mismatch(k):
        return math.tanh(k * c_m) - r * math.tanh(k * (i_max + c_m))

    k = brentq(mismatch, 1e-9, 60.0 / c_m)
    return tip, c_m, k


def _descending_flux(sheet: SheetModel, i_max: float, currents: np.ndarray) -> np.ndarray:
    """Upper branch: +tip at +i_max, remanence at 0, zero at -c_m, -tip at -i_max."""
    tip, c_m, k = _loop_params(sheet, i_max)
    currents = np.asarray(currents, dtype=float)
    out = np.empty_like(currents)
    upper = currents >= -c_m
    out[upper] = tip * np.tanh(k * (currents[upper] + c_m)) / math.tanh(k * (i_max + c_m))
    lower = ~upper
    if np.any(lower):
        # tail approaches -tip slower than the initial curve, keeping
        # smaller loops' tips inside this one
        stretched = i_max * (-currents[lower] - c_m) / (i_max - c_m)
        vals = np.array([sheet.reach(min(s, i_max)) for s in stretched])
        out[lower] = -tip * vals / sheet.reach(i_max)
    return out


def _ascending_flux(sheet: SheetModel, i_max: float, currents: np.ndarray) -> np.ndarray:
    return -_descending_flux(sheet, i_max, -np.asarray(currents, dtype=float))


def trace_loop_points(sheet: SheetModel, i_max: float, steps: int) -> list[LoopPoint]:
    if i_max <= 0 or i_max > sheet.i_program_full:
        raise ValueError(f"i_max must be in (0, {sheet.i_program_full}] A, got {i_max}")
    if steps < 8:
        raise ValueError(f"steps must be >= 8, got {steps}")
    points = []
    virgin = np.linspace(0.0, i_max, steps + 1)
    for i in virgin:
        points.append(LoopPoint(float(i), sheet.b_sat * sheet.reach(i), "initial"))
    down = np.linspace(i_max, -i_max, 2 * steps + 1)
    for i, b in zip(down, _descending_flux(sheet, i_max, down)):
        points.append(LoopPoint(float(i), float(b), "descending"))
    up = np.linspace(-i_max, i_max, 2 * steps + 1)
    for i, b in zip(up, _ascending_flux(sheet, i_max, up)):
        points.append(LoopPoint(float(i), float(b), "ascending"))
    return points


def trace_hysteresis_loop(sheet: SheetModel, i_max: float, steps: int = 50) -> list[tuple[float, float]]:
    """Closed anti-clockwise loop: initial rise, then down-sweep, then back up."""
    return [(p.current_a, p.flux_t) for p in trace_loop_points(sheet, i_max, steps)]


def hysteresis_csv(sheet: SheetModel, i_maxes=(3.3, 6.6, 10.0), steps: int = 50) -> str:
    lines = ["current_amps,flux_tesla,branch_label"]
    for i_max in i_maxes:
        label = f"imax_{i_max:g}"
        for p in trace_loop_points(sheet, i_max, steps):
            lines.append(f"{p.current_a:.6f},{p.flux_t:.8f},{label}_{p.branch}")
    return "\n".join(lines) + "\n"
