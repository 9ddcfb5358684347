"""
Execution regimes across the batch dimension
============================================

The array changes personality as the output-row count grows: eight
independent slabs, fused pairs and quads, then the full monolithic stack.
This script sweeps m and shows which regime the planner picks, what gets
power gated, and what that does to cycles on a fixed workload.
"""
from slabsim import ArrayGeometry, GemmShape, plan_gemm, select_mode, simulate

g = ArrayGeometry()

###############################################################################
# Regime selection
# ----------------
# Each slab is 16 rows tall. Fusing bypasses a slab's weight buffer so its
# neighbor's operands flow through, building logical units of 32, 64, or
# 128 rows. The planner picks the shortest unit that covers m, and inside
# each unit gates the trailing slabs that m does not reach.

print(f"{'m':>4}  {'mode':<15} {'units':>5}  {'gated slabs'}")
for m in (1, 8, 16, 17, 32, 33, 48, 64, 65, 81, 100, 128):
    mode = select_mode(m, g)
    print(f"{m:>4}  {mode.label():<15} {len(mode.units):>5}  {sorted(mode.gated_slabs)}")

###############################################################################
# m = 33 in detail
# ----------------
# 33 rows need a 64-row unit (two of them fit the array). Each unit holds
# slabs for 64 rows but only ceil(33/16) = 3 slabs see live rows, so the
# fourth slab of each group is gated: slabs 3 and 7.

mode = select_mode(33, g)
for u in mode.units:
    active = [s for s in u.member_slabs if s not in mode.gated_slabs]
    print(f"unit {u.unit_id}: slabs {u.member_slabs}, active {active}")

###############################################################################
# Above one array height
# ----------------------
# m = 200 runs a full 128-row monolithic phase, then a 72-row residual
# phase that re-enters regime selection on its own: 5 slabs live, 3 gated.

schedule = plan_gemm(GemmShape(200, 128, 64))
for i, phase in enumerate(schedule.phases):
    print(f"phase {i}: rows {phase.m_off}..{phase.m_off + phase.m_len - 1}, "
          f"{phase.mode.label()}, gated {sorted(phase.mode.gated_slabs)}")

###############################################################################
# Cycles against regime
# ---------------------
# Same N and K, growing m. Cycle counts step up with unit height (taller
# units drain longer and fill slower), not smoothly with m. Within one
# regime, adding rows is nearly free until the next height is needed.

print(f"\n{'m':>4}  {'mode':<32} {'cycles':>8}")
for m in (1, 16, 17, 32, 33, 64, 65, 128, 129, 160, 200):
    r = simulate(plan_gemm(GemmShape(m, 4864, 896)))
    print(f"{m:>4}  {r.mode_label:<32} {r.cycles:>8}")
