"""Geometry of a slab-partitioned output-stationary systolic array.

The PE array is cut along its rows into equal-height slabs. Each slab can
run as an independent unit, or consecutive slabs can be fused into a taller
logical unit by forwarding weights down the chain and bypassing the skipped
slab-local weight buffers. Because the bypass chain runs top to bottom, a
fused group may only power-gate a trailing suffix of its member slabs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import GeometryError


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class ArrayGeometry:
    """Physical dimensions of the PE array and its slab partition."""

    rows: int = 128
    """PE rows of the full array."""

    cols: int = 128
    """PE columns. Every slab spans the full width."""

    slab_height: int = 16
    """PE rows per slab."""

    num_slabs: int = 8
    """Number of slabs; must satisfy rows == slab_height * num_slabs."""

    @property
    def fusion_heights(self) -> tuple[int, ...]:
        """Legal logical-unit heights: slab_height * 2**j up to the full array."""
        out = []
        h = self.slab_height
        while h <= self.rows:
            out.append(h)
            h *= 2
        return tuple(out)


def validate_geometry(g: ArrayGeometry) -> ArrayGeometry:
    """Check all geometry invariants, raising GeometryError naming the first
    violated one. Returns the geometry unchanged so calls can be chained."""
    for name in ("rows", "cols", "slab_height", "num_slabs"):
        v = getattr(g, name)
        if not isinstance(v, int) or v < 1:
            raise GeometryError(f"{name} must be a positive integer, got {v!r}")
    if g.rows != g.slab_height * g.num_slabs:
        raise GeometryError(
            f"rows != slab_height * num_slabs ({g.rows} != {g.slab_height} * {g.num_slabs})"
        )
    if not _is_pow2(g.num_slabs):
        raise GeometryError(f"num_slabs must be a power of two, got {g.num_slabs}")
    return g


DEFAULT_GEOMETRY = ArrayGeometry()


@dataclass(frozen=True)
class DataFormat:
    """Element encoding of streamed operands."""

    bytes_per_element: int = 2
    """Operand width in bytes (2 covers 16-bit floating point)."""


@dataclass(frozen=True)
class MemoryConfig:
    """On-chip buffer capacities and off-chip streaming bandwidth.

    Capacities are per structure; the slab buffers are per slab. Double
    buffering is modeled by requiring two copies of any staged operand set
    to fit, so half of each staging capacity is usable per round.
    """

    global_buffer_bytes: int = 8 * 1024 * 1024
    """Shared activation and weight buffer feeding all slabs."""

    output_buffer_bytes: int = 2 * 1024 * 1024
    """Buffer absorbing drained output tiles before write-back."""

    slab_act_buffer_bytes: int = 8 * 1024
    """Per-slab activation staging buffer at the array boundary."""

    slab_wgt_buffer_bytes: int = 64 * 1024
    """Per-slab weight staging buffer; bypassed by fused followers."""

    dram_bytes_per_cycle: int = 2300
    """Off-chip bandwidth; 2300 B/cycle is 2.3 TB/s at a 1 GHz clock, the
    rate needed to stream operands for eight 16x128 slabs concurrently."""

    global_bank_port_elems: int = 512
    """Elements one global-buffer bank can deliver per cycle. Bounds the
    per-unit steady-state feed rate (slab_height + tile cols elements per
    cycle); affects feasibility checks only, never cycle counts. The
    default leaves headroom for wide single-unit rectangles (up to
    64 + 448); a 512-wide unit would be rejected."""


DEFAULT_MEMORY = MemoryConfig()


class ModeKind(enum.Enum):
    """Slab operating regime for one schedule phase."""

    INDEPENDENT = "independent"
    FUSED = "fused"
    MONOLITHIC = "monolithic"


@dataclass(frozen=True)
class LogicalUnit:
    """A contiguous run of slabs acting as one systolic array.

    member_slabs always covers the unit's full physical extent, including
    any trailing gated slabs, so height and drain depth never shrink when
    gating is applied. Gating is tracked on the ExecutionMode.
    """

    unit_id: int
    member_slabs: tuple[int, ...]
    height: int
    width: int
    drain_depth: int
    """Rows an output crosses to leave the unit; equals height."""


@dataclass(frozen=True)
class ExecutionMode:
    """A validated assignment of slabs to logical units plus a gated set."""

    kind: ModeKind
    group_height: int
    units: tuple[LogicalUnit, ...]
    gated_slabs: frozenset[int] = field(default_factory=frozenset)

    @property
    def active_slabs(self) -> frozenset[int]:
        members = {s for u in self.units for s in u.member_slabs}
        return frozenset(members - self.gated_slabs)

    def label(self) -> str:
        """Short mode tag used in sweep output, e.g. 'fused64×2'."""
        if self.kind is ModeKind.MONOLITHIC:
            return "monolithic"
        if self.kind is ModeKind.INDEPENDENT:
            return f"independent×{len(self.units)}"
        return f"fused{self.group_height}×{len(self.units)}"


def units_for_mode(
    g: ArrayGeometry,
    kind: ModeKind,
    group_height: int | None = None,
    gated: frozenset[int] | set[int] = frozenset(),
) -> ExecutionMode:
    """Build the logical units for a regime over geometry g.

    Slabs are grouped bottom-up into runs of group_height / slab_height.
    A fully gated group yields no unit; a partially gated group keeps its
    full height but its gated slabs must form a trailing suffix of the
    group's chain, since the weight bypass path only skips downstream.

    Args:
        g: validated array geometry.
        kind: independent, fused, or monolithic.
        group_height: required for FUSED; must be slab_height * 2**j with
            j >= 1 and less than the full array height.
        gated: slab indices to power off.

    Returns:
        ExecutionMode with densely numbered units.
    """
    validate_geometry(g)
    gated = frozenset(gated)
    for s in gated:
        if not (0 <= s < g.num_slabs):
            raise GeometryError(f"gated slab {s} out of range 0..{g.num_slabs - 1}")

    if kind is ModeKind.INDEPENDENT:
        group_height = g.slab_height
    elif kind is ModeKind.MONOLITHIC:
        group_height = g.rows
    else:
        if group_height is None:
            raise GeometryError("fused mode requires a group_height")
        ratio = group_height / g.slab_height
        if group_height % g.slab_height != 0 or not _is_pow2(int(ratio)):
            raise GeometryError(
                f"fusion height {group_height} is not a power-of-two multiple of "
                f"slab_height {g.slab_height}"
            )
        if not (g.slab_height < group_height < g.rows):
            raise GeometryError(
                f"fusion height {group_height} must lie strictly between "
                f"slab_height {g.slab_height} and rows {g.rows}"
            )

    group_size = group_height // g.slab_height
    units = []
    for lo in range(0, g.num_slabs, group_size):
        members = tuple(range(lo, lo + group_size))
        gated_in = [s for s in members if s in gated]
        if len(gated_in) == group_size:
            continue  # whole group powered off, no unit
        # gated members must be exactly the tail of the chain
        if gated_in != list(members[group_size - len(gated_in):]):
            bad = next(s for s in gated_in if s not in members[group_size - len(gated_in):])
            raise GeometryError(
                f"gated slab {bad} is not in a trailing position of its group {members}"
            )
        units.append(
            LogicalUnit(
                unit_id=len(units),
                member_slabs=members,
                height=group_height,
                width=g.cols,
                drain_depth=group_height,
            )
        )
    return ExecutionMode(kind=kind, group_height=group_height, units=tuple(units), gated_slabs=gated)


def validate_mode(g: ArrayGeometry, mode: ExecutionMode) -> ExecutionMode:
    """Re-check the structural invariants of an ExecutionMode against g."""
    if mode.kind is ModeKind.MONOLITHIC:
        if len(mode.units) != 1 or mode.units[0].height != g.rows:
            raise GeometryError("monolithic mode requires exactly one unit of full height")
    for u in mode.units:
        if u.height != g.slab_height * len(u.member_slabs):
            raise GeometryError(f"unit {u.unit_id} height does not match its slab count")
        if u.width != g.cols or u.drain_depth != u.height:
            raise GeometryError(f"unit {u.unit_id} width/drain inconsistent with geometry")
        if list(u.member_slabs) != list(range(u.member_slabs[0], u.member_slabs[-1] + 1)):
            raise GeometryError(f"unit {u.unit_id} member slabs are not contiguous ascending")
        if mode.kind is ModeKind.INDEPENDENT and u.height != g.slab_height:
            raise GeometryError("independent mode units must be single slabs")
        if mode.kind is ModeKind.FUSED and u.height != mode.group_height:
            raise GeometryError("fused mode units must all have the group height")
    seen: set[int] = set()
    for u in mode.units:
        for s in u.member_slabs:
            if s in seen:
                raise GeometryError(f"slab {s} appears in two units")
            seen.add(s)
    # every slab is accounted for exactly once across units and the gated
    # set; trailing gated members inside a unit are counted through the unit
    if seen | mode.gated_slabs != set(range(g.num_slabs)):
        raise GeometryError("units and gated slabs do not cover the slab set")
    covered = len(seen | mode.gated_slabs)
    if covered * g.slab_height * g.cols > g.rows * g.cols:
        raise GeometryError("slab coverage exceeds the physical array")
    return mode


def select_mode(m: int, g: ArrayGeometry) -> ExecutionMode:
    """Pick the slab regime for an output-row extent of m.

    m at or below one slab keeps every slab independent; m up to the full
    array fuses to the smallest power-of-two height that covers it (the
    full height degenerates to monolithic); larger m runs monolithic main
    phases and leaves the residue to the caller. Within the chosen regime,
    slabs that cannot hold any output row are gated, always a trailing
    suffix of their group.
    """
    if m < 1:
        raise GeometryError(f"m must be >= 1, got {m}")
    validate_geometry(g)
    if m <= g.slab_height:
        kind, h = ModeKind.INDEPENDENT, g.slab_height
    elif m <= g.rows:
        h = g.slab_height
        while h < m:
            h *= 2
        kind = ModeKind.MONOLITHIC if h == g.rows else ModeKind.FUSED
    else:
        kind, h = ModeKind.MONOLITHIC, g.rows

    group_size = h // g.slab_height
    needed = math.ceil(min(m, g.rows) / g.slab_height)  # slabs holding rows, per group
    needed = min(needed, group_size)
    gated = set()
    for lo in range(0, g.num_slabs, group_size):
        gated.update(range(lo + needed, lo + group_size))
    return units_for_mode(g, kind, h, frozenset(gated))
