"""Comparison architectures built on the same scheduling and timing core.

The monolithic baseline is the slab array with its partitions erased: one
full-height, full-width unit, so every tile drains across the whole array.
The reshapeable baseline picks, per GEMM, one rectangle from a fixed shape
set and then behaves like a monolithic array of that rectangle. Both reuse
plan_with_modes/simulate, so any difference in results comes from geometry
and energy constants, never from divergent modeling code.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .energymodel import EnergyBreakdown, EnergyConfig, edp
from .errors import ConfigError
from .geometry import (
    ArrayGeometry,
    DataFormat,
    MemoryConfig,
    ModeKind,
    units_for_mode,
)
from .perfmodel import SimResult, simulate
from .scheduler import GemmShape, Schedule, plan_gemm, plan_with_modes

DEFAULT_REDAS_SHAPES = ((128, 128), (64, 256), (32, 384), (16, 448))

VARIANTS = ("sisa", "tpu", "redas")


@dataclass(frozen=True)
class ArchModel:
    """One architecture under comparison."""

    variant: str
    energy: EnergyConfig = field(default_factory=EnergyConfig)
    shape_set: tuple[tuple[int, int], ...] = DEFAULT_REDAS_SHAPES
    """Candidate (height, width) rectangles; redas only."""

    redas_power_factor: float = 2.49
    """Per-PE power multiplier of the reshapeable fabric; redas only."""

    power_gating: bool = True
    """Whether unused slabs are powered off; sisa only."""

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown architecture variant {self.variant!r}")
        if self.variant == "redas" and not self.shape_set:
            raise ConfigError("redas needs a non-empty shape_set")


def _mono_geometry(rows: int, cols: int) -> ArrayGeometry:
    """A rectangle with no internal partition: one slab, full height."""
    return ArrayGeometry(rows=rows, cols=cols, slab_height=rows, num_slabs=1)


def monolithic_plan(
    shape: GemmShape,
    g: ArrayGeometry,
    mem: MemoryConfig = MemoryConfig(),
    fmt: DataFormat = DataFormat(),
) -> Schedule:
    """Plan for a single unit of g's full extent: M chunks of at most
    g.rows rows, N strips of at most g.cols, sequential rounds, every
    phase draining the full height."""
    g1 = _mono_geometry(g.rows, g.cols)
    mode = units_for_mode(g1, ModeKind.MONOLITHIC)
    phase_modes = []
    m_off = 0
    while m_off < shape.m:
        m_len = min(g1.rows, shape.m - m_off)
        phase_modes.append((m_off, m_len, mode))
        m_off += m_len
    return plan_with_modes(shape, g1, mem, fmt, phase_modes, power_gating=False)


def redas_select_shape(
    shape: GemmShape,
    model: ArchModel,
    g: ArrayGeometry,
    mem: MemoryConfig = MemoryConfig(),
    fmt: DataFormat = DataFormat(),
) -> tuple[int, int]:
    """Pick the latency-minimizing rectangle for one GEMM.

    Candidates taller than m are set aside when any shorter one exists:
    the fabric reshapes to match the output's row extent, then minimizes
    simulated latency among the remaining rectangles. Ties go to the
    taller shape. The returned choice is exhaustively optimal within the
    considered candidates by construction.
    """
    budget = g.rows * g.cols
    for h, w in model.shape_set:
        if h * w > budget:
            raise ConfigError(
                f"shape {h}x{w} exceeds the {g.rows}x{g.cols} PE budget"
            )
    fitting = [(h, w) for h, w in model.shape_set if h <= shape.m]
    candidates = fitting if fitting else list(model.shape_set)
    scored = []
    for h, w in candidates:
        cycles = simulate(
            monolithic_plan(shape, _mono_geometry(h, w), mem, fmt)
        ).cycles
        scored.append((cycles, -h, (h, w)))
    return min(scored)[2]


@dataclass(frozen=True)
class ArchRun:
    """simulate_arch output: timing result plus its energy accounting."""

    arch: str
    result: SimResult
    energy: EnergyBreakdown
    chosen_shape: tuple[int, int] | None = None


def _redas_energy(model: ArchModel, g: ArrayGeometry, h: int, w: int) -> EnergyConfig:
    # per-PE power scaled by the reshapeable-fabric factor, pro-rated to
    # the active rectangle's PE count
    scale = model.redas_power_factor * (h * w) / (g.rows * g.cols)
    return dataclasses.replace(
        model.energy,
        pe_array_total_nj=model.energy.pe_array_total_nj * scale,
        e_mac_nj=model.energy.e_mac_nj * model.redas_power_factor,
    )


def simulate_arch(
    model: ArchModel,
    shape: GemmShape,
    g: ArrayGeometry = ArrayGeometry(),
    mem: MemoryConfig = MemoryConfig(),
    fmt: DataFormat = DataFormat(),
    drain_overlap: bool = False,
) -> ArchRun:
    """Plan, simulate, and attach energy for one GEMM on one architecture."""
    if model.variant == "sisa":
        schedule = plan_gemm(shape, g, mem, fmt, power_gating=model.power_gating)
        result = simulate(schedule, drain_overlap)
        return ArchRun("sisa", result, edp(result, model.energy))
    if model.variant == "tpu":
        result = simulate(monolithic_plan(shape, g, mem, fmt), drain_overlap)
        return ArchRun("tpu", result, edp(result, model.energy))
    h, w = redas_select_shape(shape, model, g, mem, fmt)
    result = simulate(monolithic_plan(shape, _mono_geometry(h, w), mem, fmt), drain_overlap)
    return ArchRun(
        "redas", result, edp(result, _redas_energy(model, g, h, w)), chosen_shape=(h, w)
    )
