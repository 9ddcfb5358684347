"""Analytical cycle and traffic model for scheduled GEMMs.

Timing follows the output-stationary pipeline measured by the microsim: a
tile fills and computes in k + r + c - 2 cycles, then drains through its
unit's full physical height. Accumulating tiles (non-final K chunks) keep
their partial sums in the PEs and do not drain. Loads are double buffered:
a round's operands stream in while the previous round computes, under a
DRAM bandwidth budget shared equally by all concurrently loading units.
The first round of each phase has nothing to hide behind and pays its
load latency in full, as does the staged A slice when it is resident.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import DataFormat, LogicalUnit, MemoryConfig
from .scheduler import Phase, Schedule, Tile


def compute_cycles(r: int, c: int, k: int) -> int:
    """Fill-plus-compute cycles for an r x c output tile of depth k.

    The last PE (r-1, c-1) sees its first operand pair at cycle r + c - 2
    and needs k MAC cycles after that.
    """
    if r < 1 or c < 1 or k < 1:
        raise ValueError(f"tile dims must be >= 1, got r={r} c={c} k={k}")
    return k + r + c - 2


def drain_cycles(unit: LogicalUnit) -> int:
    """Cycles to shift finished outputs out through the unit's height."""
    return unit.drain_depth


def load_cycles(
    tile: Tile,
    sharing: int,
    fmt: DataFormat,
    mem: MemoryConfig,
    a_resident: bool = False,
) -> int:
    """Cycles to stream one tile's DRAM-sourced operands.

    sharing units load concurrently, so each sees 1/sharing of the DRAM
    bandwidth. The A slice is skipped when the scheduler staged it in the
    global buffer.
    """
    if sharing < 1:
        raise ValueError(f"sharing must be >= 1, got {sharing}")
    elems = tile.k_len * tile.col_len
    if not a_resident:
        elems += tile.row_len * tile.k_len
    numer = elems * fmt.bytes_per_element * sharing
    return -(-numer // mem.dram_bytes_per_cycle)


def _tile_time(tile: Tile, unit: LogicalUnit, k_total: int, drain_overlap: bool) -> int:
    t = compute_cycles(tile.row_len, tile.col_len, tile.k_len)
    if not drain_overlap and tile.k_off + tile.k_len == k_total:
        t += drain_cycles(unit)
    return t


def _round_load(tiles: tuple[Tile, ...], fmt, mem, a_resident: bool) -> int:
    sharing = len(tiles)
    return max(load_cycles(t, sharing, fmt, mem, a_resident) for t in tiles)


def round_latency(
    tiles: tuple[Tile, ...],
    next_tiles: tuple[Tile, ...] | None,
    units: dict[int, LogicalUnit],
    k_total: int,
    fmt: DataFormat,
    mem: MemoryConfig,
    a_resident: bool,
    drain_overlap: bool = False,
) -> int:
    """Latency of one lockstep round.

    The round ends when every unit has finished its tile and the next
    round's operands have landed; whichever is slower sets the pace.
    """
    busy = max(_tile_time(t, units[t.unit_id], k_total, drain_overlap) for t in tiles)
    if next_tiles:
        busy = max(busy, _round_load(next_tiles, fmt, mem, a_resident))
    return busy


@dataclass
class TrafficCounters:
    """Event counts accumulated over a simulation (elements unless noted)."""

    dram_read_bytes: int = 0
    dram_write_bytes: int = 0
    global_sram_reads: int = 0
    global_sram_writes: int = 0
    slab_sram_reads: int = 0
    slab_sram_writes: int = 0
    output_sram_writes: int = 0
    mac_count: int = 0

    def merge_scaled(self, other: "TrafficCounters", weight: int) -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + weight * getattr(other, name))


@dataclass
class SimResult:
    """Cycle totals, per-slab activity, and traffic for one simulated GEMM."""

    cycles: int
    per_phase_cycles: tuple[int, ...]
    counters: TrafficCounters
    active_slab_cycles: tuple[int, ...]
    num_slabs: int
    mode_label: str
    energy_j: float | None = None
    edp_js: float | None = None

    @property
    def total_active_slab_cycles(self) -> int:
        return sum(self.active_slab_cycles)

    @property
    def total_gated_slab_cycles(self) -> int:
        return self.num_slabs * self.cycles - self.total_active_slab_cycles


def _phase_cycles(phase: Phase, schedule: Schedule, drain_overlap: bool) -> int:
    fmt, mem = schedule.fmt, schedule.memory
    k_total = schedule.shape.k
    units = {u.unit_id: u for u in phase.mode.units}
    cycles = 0
    if phase.a_resident:
        a_bytes = phase.m_len * k_total * fmt.bytes_per_element
        cycles += -(-a_bytes // mem.dram_bytes_per_cycle)
    rounds = phase.rounds
    cycles += _round_load(rounds[0], fmt, mem, phase.a_resident)
    for i, rnd in enumerate(rounds):
        nxt = rounds[i + 1] if i + 1 < len(rounds) else None
        cycles += round_latency(
            rnd, nxt, units, k_total, fmt, mem, phase.a_resident, drain_overlap
        )
    if drain_overlap:
        cycles += max(units[t.unit_id].drain_depth for t in rounds[-1])
    return cycles


def _phase_traffic(phase: Phase, schedule: Schedule, counters: TrafficCounters) -> None:
    bpe = schedule.fmt.bytes_per_element
    n, k = schedule.shape.n, schedule.shape.k
    a_elems = phase.m_len * k
    if phase.a_resident:
        a_dram = a_elems
    else:
        a_dram = phase.output_rounds * a_elems  # re-fetched per output round
    b_dram = k * n  # every column strip streamed once per phase
    counters.dram_read_bytes += (a_dram + b_dram) * bpe
    counters.dram_write_bytes += phase.m_len * n * bpe
    counters.global_sram_writes += a_dram + b_dram
    streamed = sum(
        t.row_len * t.k_len + t.k_len * t.col_len for rnd in phase.rounds for t in rnd
    )
    counters.global_sram_reads += streamed
    counters.slab_sram_writes += streamed
    counters.slab_sram_reads += streamed
    counters.output_sram_writes += phase.m_len * n
    counters.mac_count += sum(
        t.row_len * t.col_len * t.k_len for rnd in phase.rounds for t in rnd
    )


def _mode_label(schedule: Schedule) -> str:
    labels = [p.mode.label() for p in schedule.phases]
    if len(set(labels)) == 1:
        return labels[0]
    return f"{labels[0]}+res({labels[-1]})"


def simulate(schedule: Schedule, drain_overlap: bool = False) -> SimResult:
    """Run the analytical model over a schedule.

    Pure function: equal schedules give equal results. Power gating only
    moves slabs between the active and gated columns of the report; the
    cycle count is identical either way because gated slabs never held
    work and fused groups keep their full drain depth.
    """
    g = schedule.geometry
    per_phase = []
    counters = TrafficCounters()
    active = [0] * g.num_slabs
    for phase in schedule.phases:
        pc = _phase_cycles(phase, schedule, drain_overlap)
        per_phase.append(pc)
        _phase_traffic(phase, schedule, counters)
        for u in phase.mode.units:
            for s in u.member_slabs:
                if s not in phase.mode.gated_slabs:
                    active[s] += pc
        if not schedule.power_gating:
            # ungated idle slabs still burn their cycles
            covered = {s for u in phase.mode.units for s in u.member_slabs}
            for s in range(g.num_slabs):
                if s not in covered:
                    active[s] += pc
    return SimResult(
        cycles=sum(per_phase),
        per_phase_cycles=tuple(per_phase),
        counters=counters,
        active_slab_cycles=tuple(active),
        num_slabs=g.num_slabs,
        mode_label=_mode_label(schedule),
    )


def dram_traffic_lower_bound(shape, fmt: DataFormat = DataFormat()) -> int:
    """Unique bytes any execution must move: A and B in, C out, once each."""
    return (shape.m * shape.k + shape.k * shape.n + shape.m * shape.n) * fmt.bytes_per_element


def result_to_json_dict(result: SimResult) -> dict:
    """Stable external field names for reports."""
    c = result.counters
    return {
        "cycles": result.cycles,
        "per_phase_cycles": list(result.per_phase_cycles),
        "mode": result.mode_label,
        "dram_read_bytes": c.dram_read_bytes,
        "dram_write_bytes": c.dram_write_bytes,
        "sram_reads": c.global_sram_reads + c.slab_sram_reads,
        "sram_writes": c.global_sram_writes + c.slab_sram_writes + c.output_sram_writes,
        "macs": c.mac_count,
        "active_slab_cycles": result.total_active_slab_cycles,
        "gated_slab_cycles": result.total_gated_slab_cycles,
        "energy_j": result.energy_j,
        "edp": result.edp_js,
    }
