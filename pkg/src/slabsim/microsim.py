"""Register-accurate simulator for one output-stationary logical unit.

Small grids only. Operands flow through explicit edge-register planes one
hop per cycle, so skew, fill, and drain behavior are measured rather than
assumed. The measured cycle counts are the ground truth against which the
closed-form timing model is checked.

Dataflow: A rows enter at the left edge, row i delayed by i cycles; B
columns enter at the top edge, column j delayed by j cycles. PE(i, j)
multiplies a[i, tau] by b[tau, j] at cycle tau + i + j and accumulates
in place. After the last multiply the accumulators shift down through the
unit's full physical height, one row per cycle, exiting at the bottom.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

MAX_GRID = 64
MAX_DEPTH = 2048


@dataclass(frozen=True)
class UnitRun:
    """Outcome of one simulated GEMM on one unit."""

    rows: int
    depth: int
    cols: int
    unit_height: int
    result: np.ndarray
    compute_cycles: int
    drain_cycles: int
    measured_cycles: int
    macs: int

    @property
    def fill_skew(self) -> int:
        """Cycles beyond the depth spent filling and flushing the wavefront."""
        return self.compute_cycles - self.depth


def run_unit(a: np.ndarray, b: np.ndarray, unit_height: int | None = None) -> UnitRun:
    """Simulate C = A @ B on one output-stationary unit, cycle by cycle.

    Args:
        a: (rows, depth) left operand.
        b: (depth, cols) right operand.
        unit_height: physical height of the unit; defaults to rows. The
            output drain crosses this many rows regardless of how many
            carry data, which is what makes tall units slow to drain.

    Returns:
        UnitRun with the exact product and measured cycle counts.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ConfigError(f"operand shapes do not chain: {a.shape} @ {b.shape}")
    rows, depth = a.shape
    cols = b.shape[1]
    if unit_height is None:
        unit_height = rows
    if rows < 1 or cols < 1 or depth < 1:
        raise ConfigError("all operand dimensions must be >= 1")
    if rows > MAX_GRID or cols > MAX_GRID:
        raise ConfigError(f"grid {rows}x{cols} exceeds the {MAX_GRID}x{MAX_GRID} limit")
    if depth > MAX_DEPTH:
        raise ConfigError(f"depth {depth} exceeds the {MAX_DEPTH} limit")
    if unit_height < rows:
        raise ConfigError(f"unit_height {unit_height} cannot be less than rows {rows}")

    a = a.astype(np.int64)
    b = b.astype(np.int64)
    acc = np.zeros((rows, cols), dtype=np.int64)
    a_plane = np.zeros((rows, cols), dtype=np.int64)
    b_plane = np.zeros((rows, cols), dtype=np.int64)
    a_valid = np.zeros((rows, cols), dtype=bool)
    b_valid = np.zeros((rows, cols), dtype=bool)
    row_idx = np.arange(rows)
    col_idx = np.arange(cols)

    compute_cycles = depth + rows + cols - 2
    macs = 0
    for t in range(compute_cycles):
        # advance both register planes one hop
        a_plane[:, 1:] = a_plane[:, :-1]
        a_valid[:, 1:] = a_valid[:, :-1]
        b_plane[1:, :] = b_plane[:-1, :]
        b_valid[1:, :] = b_valid[:-1, :]
        # edge injection with per-lane skew
        tau_a = t - row_idx
        live_a = (tau_a >= 0) & (tau_a < depth)
        a_plane[:, 0] = np.where(live_a, a[row_idx, np.clip(tau_a, 0, depth - 1)], 0)
        a_valid[:, 0] = live_a
        tau_b = t - col_idx
        live_b = (tau_b >= 0) & (tau_b < depth)
        b_plane[0, :] = np.where(live_b, b[np.clip(tau_b, 0, depth - 1), col_idx], 0)
        b_valid[0, :] = live_b
        fire = a_valid & b_valid
        acc += np.where(fire, a_plane * b_plane, 0)
        macs += int(fire.sum())

    # drain: accumulators ride a shift chain down the unit's full height
    drain_plane = np.zeros((unit_height, cols), dtype=np.int64)
    drain_plane[:rows] = acc
    captured = []
    for _ in range(unit_height):
        captured.append(drain_plane[-1].copy())
        drain_plane[1:] = drain_plane[:-1]
        drain_plane[0] = 0
    result = np.stack([captured[unit_height - 1 - i] for i in range(rows)])

    return UnitRun(
        rows=rows,
        depth=depth,
        cols=cols,
        unit_height=unit_height,
        result=result,
        compute_cycles=compute_cycles,
        drain_cycles=unit_height,
        measured_cycles=compute_cycles + unit_height,
        macs=macs,
    )


def predicted_cycles(rows: int, depth: int, cols: int, unit_height: int) -> int:
    """Closed-form cycle count the timing model uses for one tile."""
    return depth + rows + cols - 2 + unit_height


def oracle_sweep(cases, seed: int = 0, expected_cycles_fn=None) -> list[dict]:
    """Run a batch of randomized cases and compare against expectations.

    Each case is (rows, depth, cols, unit_height). Operands are integers in
    [-127, 127], so products are exact and the result check is equality, not
    closeness. expected_cycles_fn defaults to predicted_cycles; passing a
    deliberately wrong one is how tests confirm the sweep detects mismatches.

    Returns one record per case with exact_match and correct_result flags.
    """
    if expected_cycles_fn is None:
        expected_cycles_fn = predicted_cycles
    rng = np.random.default_rng(seed)
    records = []
    for rows, depth, cols, unit_height in cases:
        a = rng.integers(-127, 128, size=(rows, depth), dtype=np.int64)
        b = rng.integers(-127, 128, size=(depth, cols), dtype=np.int64)
        run = run_unit(a, b, unit_height)
        expected = expected_cycles_fn(rows, depth, cols, unit_height)
        records.append(
            {
                "rows": rows,
                "depth": depth,
                "cols": cols,
                "unit_height": unit_height,
                "measured_cycles": run.measured_cycles,
                "expected_cycles": expected,
                "exact_match": run.measured_cycles == expected,
                "correct_result": bool(np.array_equal(run.result, a @ b)),
                "macs": run.macs,
                "macs_expected": rows * depth * cols,
            }
        )
    return records


def default_cases(limit: int = 40, seed: int = 1) -> list[tuple[int, int, int, int]]:
    """A mixed bag of tile shapes, heights, and depths for the oracle sweep."""
    rng = np.random.default_rng(seed)
    cases = [
        (1, 1, 1, 1),
        (1, 1, 1, 8),
        (16, 64, 32, 16),
        (16, 64, 32, 64),
        (7, 5, 3, 32),
        (64, 16, 64, 64),
    ]
    while len(cases) < limit:
        rows = int(rng.integers(1, MAX_GRID + 1))
        cols = int(rng.integers(1, MAX_GRID + 1))
        depth = int(rng.integers(1, 257))
        height = int(rng.integers(rows, MAX_GRID + 1))
        cases.append((rows, depth, cols, height))
    return cases
