"""magpix: design and fabrication toolchain for programmable magnetic pixel sheets."""

from .interaction import (
    DEFAULT_EPSILON,
    PIXEL_FORCE_N,
    ForceEstimate,
    Interaction,
    InteractionMap,
    agnosticism_peak,
    classify,
    force_estimate,
    interaction_map,
    ncc_at,
)
from .magnet import (
    ElectromagnetModel,
    PixelState,
    SheetModel,
    current_for_target,
    emag_field,
    program_pixel,
    trace_hysteresis_loop,
)
from .pairs import CanvasLayout, PairSet, canvas_compile, generate_pair_set
from .pattern_io import diff_delta, load_pattern, save_pattern
from .patterns import (
    HadamardSpec,
    PixelGrid,
    checkerboard,
    complement,
    orthogonality_defect,
    permute_rows,
    sylvester_hadamard,
)
from .plotter import (
    HallSensorModel,
    PlotterSession,
    VirtualSheet,
    handle_command,
    new_session,
    read_hall,
    snapshot_sheet,
)
from .toolpath import (
    Energize,
    HallRead,
    Home,
    JobEstimate,
    MagnetOff,
    MoveTo,
    Toolpath,
    compile_plot,
    compile_scan,
    emit_program,
    estimate_job,
    parse_program,
)

__version__ = "0.1.0"
