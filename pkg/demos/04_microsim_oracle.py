"""
Checking the cycle formula against a register-level simulation
==============================================================

The analytical model asserts that an r x c output tile of depth k finishes
in k + r + c - 2 compute cycles plus one drain pass. That claim is cheap
to state and easy to get subtly wrong, so the package carries a small
cycle-by-cycle simulator of the output-stationary array: operands skew in
along the edges, every PE multiplies what passes through it, and results
shift down and out. This script runs both and diffs them.
"""
import numpy as np

from slabsim import compute_cycles
from slabsim.microsim import default_cases, oracle_sweep, predicted_cycles, run_unit

###############################################################################
# One tile, cycle by cycle
# ------------------------

rng = np.random.default_rng(3)
a = rng.integers(-4, 5, size=(4, 8))
b = rng.integers(-4, 5, size=(8, 4))
run = run_unit(a, b)
print(f"4x4 tile, depth 8: compute {run.compute_cycles}, drain {run.drain_cycles}, "
      f"total {run.measured_cycles}")
print(f"formula says {predicted_cycles(4, 8, 4, 4)}")
print("matmul exact:", bool((run.result == a @ b).all()))
print("MACs fired:", run.macs)

###############################################################################
# A short tile in a tall unit
# ---------------------------
# Fused units are taller than most tiles. Compute time depends only on the
# tile, but the drain pass walks the unit's full height: rows that hold no
# data still sit in the shift path.

run = run_unit(a[:2], b, unit_height=16)
print(f"\n2-row tile in a 16-row unit: {run.measured_cycles} cycles "
      f"({run.compute_cycles} compute + {run.drain_cycles} drain)")

###############################################################################
# The sweep
# ---------
# Random tiles across grid sizes, each checked for exact cycle agreement
# and an exact matmul. A model that is off anywhere in this family would
# surface here as a counterexample row.

records = oracle_sweep(default_cases(limit=40, seed=1))
exact = sum(r["exact_match"] for r in records)
print(f"\nsweep: {exact}/{len(records)} cycle-exact, "
      f"{sum(r['correct_result'] for r in records)}/{len(records)} result-exact")

###############################################################################
# Proving the sweep can fail
# --------------------------
# A check that cannot reject anything is worthless. Feed the sweep a
# deliberately broken formula (off by one cycle) and watch it object.

broken = lambda r, d, c, h: compute_cycles(r, c, d) + h + 1
records = oracle_sweep(default_cases(limit=10, seed=2), expected_cycles_fn=broken)
caught = sum(not r["exact_match"] for r in records)
print(f"mutated formula: {caught}/{len(records)} cases flagged")
assert caught == len(records)
