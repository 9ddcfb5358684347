"""
Anatomy of a single GEMM
========================

Plan one matrix multiply on the slab-partitioned array, walk through the
schedule it produces, and reconcile the reported cycle count against the
pipeline timing by hand.
"""
from slabsim import GemmShape, plan_gemm, simulate, dump_schedule
from slabsim.energymodel import EnergyConfig, edp

###############################################################################
# The workload
# ------------
# A skinny GEMM: 16 output rows, one 128-wide column strip, depth 896.
# This is the attention projection of a small decoder running batch 16.

shape = GemmShape(m=16, n=128, k=896)
schedule = plan_gemm(shape)
print(f"shape: {shape.m} x {shape.n} x {shape.k}  ({shape.macs:,} MACs)")

###############################################################################
# The plan
# --------
# With m <= 16 every slab could work alone, but a single column strip only
# feeds one of them. The planner hands the strip to unit 0 and powers the
# other seven slabs off for the whole phase.

phase = schedule.phases[0]
print("mode:", phase.mode.label())
print("gated slabs:", sorted(phase.mode.gated_slabs))
print("schedule:")
print(dump_schedule(schedule))

###############################################################################
# Where the cycles go
# -------------------
# The result tile needs k + r + c - 2 = 1038 cycles from first operand to
# last MAC, then 16 drain cycles to shift outputs out: 1054 total.
# Before that, the A slice (16 x 896 fp16, 28,672 bytes) streams in at
# 2,300 bytes per cycle (13 cycles), and the B strip (896 x 128, 229,376
# bytes) takes another 100. Loads for later rounds would hide under
# compute, but there is no later round here.

result = simulate(schedule)
print(f"\ncycles: {result.cycles}  (13 fill + 100 load + 1038 compute + 16 drain)")
assert result.cycles == 13 + 100 + 1038 + 16

###############################################################################
# Energy
# ------
# Static power burns in every structure each cycle; the seven gated slabs
# drop their share of the array and slab-buffer leakage. Dynamic energy
# counts DRAM bytes, SRAM touches, and MACs.

breakdown = edp(result, EnergyConfig())
print(f"energy: {result.energy_j * 1e6:.3f} uJ "
      f"(static {breakdown.static_j * 1e6:.3f}, dynamic {breakdown.dynamic_j * 1e6:.3f})")
print(f"EDP: {result.edp_js:.3e} J*s")
print(f"active slab-cycles: {result.total_active_slab_cycles}, "
      f"gated: {result.total_gated_slab_cycles}")
