"""Static GEMM tiling and round scheduling over logical units.

A GEMM is cut into phases along M (one phase per row strip), each phase
into column strips of at most one unit width, and, when the staged A slice
would overflow the global buffer, into K chunks that are accumulated in
place. Within a phase, column strips are dealt round-robin across the
phase's units; all K chunks of one output tile run consecutively on the
same unit so partial sums never leave the PEs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import CapacityError, ConfigError
from .geometry import (
    ArrayGeometry,
    DataFormat,
    ExecutionMode,
    LogicalUnit,
    MemoryConfig,
    ModeKind,
    select_mode,
    units_for_mode,
    validate_geometry,
)


@dataclass(frozen=True)
class GemmShape:
    """C[m, n] = A[m, k] @ B[k, n], all extents in elements."""

    m: int
    n: int
    k: int

    def __post_init__(self) -> None:
        for name in ("m", "n", "k"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"GemmShape.{name} must be a positive integer, got {v!r}")

    @property
    def macs(self) -> int:
        return self.m * self.n * self.k


class Tile(NamedTuple):
    """One unit's work item: an (M, N, K) box of the iteration space."""

    unit_id: int
    row_off: int
    row_len: int
    col_off: int
    col_len: int
    k_off: int
    k_len: int
    accumulate: bool


@dataclass(frozen=True)
class Phase:
    """One M strip executed under a fixed slab regime.

    rounds holds the lockstep execution order: round r's tiles run
    concurrently, at most one per unit. K chunks of an output strip occupy
    consecutive rounds, so rounds are grouped (output round, k chunk).
    """

    mode: ExecutionMode
    m_off: int
    m_len: int
    rounds: tuple[tuple[Tile, ...], ...]
    k_chunks: tuple[tuple[int, int], ...]
    a_resident: bool
    output_rounds: int


@dataclass(frozen=True)
class Schedule:
    shape: GemmShape
    geometry: ArrayGeometry
    memory: MemoryConfig
    fmt: DataFormat
    phases: tuple[Phase, ...]
    power_gating: bool = True

    @property
    def tiles(self):
        for phase in self.phases:
            for rnd in phase.rounds:
                yield from rnd


def split_balanced(total: int, parts: int) -> list[tuple[int, int]]:
    """(offset, length) pairs cutting total into parts nearly equal pieces,
    larger pieces first, none empty. parts must not exceed total."""
    if not (1 <= parts <= total):
        raise ConfigError(f"cannot split {total} into {parts} non-empty parts")
    base, extra = divmod(total, parts)
    out = []
    off = 0
    for i in range(parts):
        length = base + (1 if i < extra else 0)
        out.append((off, length))
        off += length
    return out


def check_capacity(
    row_len: int,
    k: int,
    col_len: int,
    concurrent_tiles: int,
    g: ArrayGeometry,
    mem: MemoryConfig,
    fmt: DataFormat,
) -> int:
    """Smallest K-split factor under which one round's working set fits.

    The staged A slice (row_len x k_chunk, double buffered) must fit the
    global buffer; B streams through the slab buffers, so they only need
    one skewed injection front (double buffered) per cycle, not a whole
    tile; concurrently drained C tiles must fit the output buffer. A bank
    port must source one activation column plus one weight row per cycle.

    Returns s >= 1. Raises CapacityError when no K split can help: the
    constraint being violated does not shrink with k.
    """
    bpe = fmt.bytes_per_element
    if 2 * g.slab_height * bpe > mem.slab_act_buffer_bytes:
        raise CapacityError(
            f"activation stream front {2 * g.slab_height * bpe} B exceeds the "
            f"{mem.slab_act_buffer_bytes} B slab activation buffer"
        )
    if 2 * col_len * bpe > mem.slab_wgt_buffer_bytes:
        raise CapacityError(
            f"weight stream front {2 * col_len * bpe} B exceeds the "
            f"{mem.slab_wgt_buffer_bytes} B slab weight buffer"
        )
    if g.slab_height + col_len > mem.global_bank_port_elems:
        raise CapacityError(
            f"per-cycle feed of {g.slab_height + col_len} elements exceeds the "
            f"{mem.global_bank_port_elems}-element bank port"
        )
    c_bytes = concurrent_tiles * row_len * col_len * bpe
    if c_bytes > mem.output_buffer_bytes:
        raise CapacityError(
            f"concurrent output tiles need {c_bytes} B, exceeding the "
            f"{mem.output_buffer_bytes} B output buffer"
        )
    k_cap = mem.global_buffer_bytes // (row_len * bpe * 2)
    if k_cap < 1:
        raise CapacityError(
            f"a double-buffered A slice of {row_len} rows does not fit the "
            f"{mem.global_buffer_bytes} B global buffer even at k_len=1"
        )
    return math.ceil(k / k_cap)


def _strip_phase_modes(shape: GemmShape, g: ArrayGeometry) -> list[tuple[int, int, ExecutionMode]]:
    """Full-height main strips, then one residual strip under its own regime."""
    out = []
    m_off = 0
    if shape.m > g.rows:
        mono = units_for_mode(g, ModeKind.MONOLITHIC)
        while shape.m - m_off > g.rows:
            out.append((m_off, g.rows, mono))
            m_off += g.rows
    out.append((m_off, shape.m - m_off, select_mode(shape.m - m_off, g)))
    return out


def _build_phase(
    shape: GemmShape,
    g: ArrayGeometry,
    mem: MemoryConfig,
    fmt: DataFormat,
    m_off: int,
    m_len: int,
    mode: ExecutionMode,
    power_gating: bool,
) -> Phase:
    num_units = len(mode.units)
    col_strips = [
        (off, min(g.cols, shape.n - off)) for off in range(0, shape.n, g.cols)
    ]
    concurrent = min(num_units, len(col_strips))
    s = check_capacity(m_len, shape.k, col_strips[0][1], concurrent, g, mem, fmt)
    k_chunks = tuple(split_balanced(shape.k, s))
    a_resident = s == 1

    output_rounds = math.ceil(len(col_strips) / num_units)
    indexed = [(j % num_units, col_off, col_len) for j, (col_off, col_len) in enumerate(col_strips)]
    rounds: list[tuple[Tile, ...]] = []
    for rho in range(output_rounds):
        strips = indexed[rho * num_units:(rho + 1) * num_units]
        for k_off, k_len in k_chunks:
            acc = k_off > 0
            rounds.append(
                tuple([
                    Tile(u, m_off, m_len, col_off, col_len, k_off, k_len, acc)
                    for u, col_off, col_len in strips
                ])
            )

    if power_gating:
        # round-robin assignment: strip j lands on unit j mod num_units, so
        # units beyond the strip count never draw a tile and power off whole
        used = set(range(min(num_units, len(col_strips))))
        idle_slabs = {
            s_ for u in mode.units if u.unit_id not in used for s_ in u.member_slabs
        }
        if idle_slabs:
            kept = tuple(u for u in mode.units if u.unit_id in used)
            remap = {u.unit_id: i for i, u in enumerate(kept)}
            mode = ExecutionMode(
                kind=mode.kind,
                group_height=mode.group_height,
                units=tuple(
                    LogicalUnit(
                        unit_id=remap[u.unit_id],
                        member_slabs=u.member_slabs,
                        height=u.height,
                        width=u.width,
                        drain_depth=u.drain_depth,
                    )
                    for u in kept
                ),
                gated_slabs=mode.gated_slabs | idle_slabs,
            )
            rounds = [
                tuple(t._replace(unit_id=remap[t.unit_id]) for t in rnd) for rnd in rounds
            ]
    else:
        mode = ExecutionMode(
            kind=mode.kind,
            group_height=mode.group_height,
            units=mode.units,
            gated_slabs=frozenset(),
        )

    return Phase(
        mode=mode,
        m_off=m_off,
        m_len=m_len,
        rounds=tuple(rounds),
        k_chunks=k_chunks,
        a_resident=a_resident,
        output_rounds=output_rounds,
    )


def plan_with_modes(
    shape: GemmShape,
    g: ArrayGeometry,
    mem: MemoryConfig,
    fmt: DataFormat,
    phase_modes: list[tuple[int, int, ExecutionMode]],
    power_gating: bool,
) -> Schedule:
    """Shared planner core: tile every (m_off, m_len, mode) strip."""
    phases = tuple(
        _build_phase(shape, g, mem, fmt, m_off, m_len, mode, power_gating)
        for m_off, m_len, mode in phase_modes
    )
    return Schedule(
        shape=shape, geometry=g, memory=mem, fmt=fmt, phases=phases, power_gating=power_gating
    )


def plan_gemm(
    shape: GemmShape,
    g: ArrayGeometry = ArrayGeometry(),
    mem: MemoryConfig = MemoryConfig(),
    fmt: DataFormat = DataFormat(),
    power_gating: bool = True,
) -> Schedule:
    """Plan a GEMM under the slab regime rules.

    M strips above the array height run monolithic; the residual strip runs
    under select_mode, so a 129-row GEMM becomes a monolithic phase plus an
    independent-mode phase. Deterministic in all arguments.
    """
    validate_geometry(g)
    return plan_with_modes(shape, g, mem, fmt, _strip_phase_modes(shape, g), power_gating)


def dump_schedule(schedule: Schedule) -> str:
    """One line per tile: phase round unit row_off:row_len col_off:col_len k_off:k_len acc."""
    lines = []
    for p_i, phase in enumerate(schedule.phases):
        for r_i, rnd in enumerate(phase.rounds):
            for t in rnd:
                lines.append(
                    f"{p_i} {r_i} {t.unit_id} {t.row_off}:{t.row_len} "
                    f"{t.col_off}:{t.col_len} {t.k_off}:{t.k_len} {int(t.accumulate)}"
                )
    return "\n".join(lines)
