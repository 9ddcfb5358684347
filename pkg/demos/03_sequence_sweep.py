"""
Sweeping a decoder's GEMMs over batch size
==========================================

Aggregate a whole model's projection layers at each batch size and race
three machines: the slab array, a monolithic baseline of the same PE
count, and a reconfigurable baseline that picks one array shape per run.
"""
import dataclasses

from slabsim import GemmShape, simulate_arch
from slabsim.config import load_config
from slabsim.workloads import aggregate, expand, load_bundled_model

setup = load_config()
model_desc = load_bundled_model("qwen2.5-0.5b")

###############################################################################
# The workload mix
# ----------------
# Five GEMM templates cover the decoder: four per-block projections
# weighted by how often they run, plus one huge vocabulary projection.

print(f"{model_desc.name}: {model_desc.num_blocks} blocks")
for t in model_desc.gemm_templates:
    print(f"  {t.id:<12} n={t.n:<7} k={t.k:<6} x{t.occurrences_per_model}")


def sweep_point(arch_name, m):
    model = setup.arch(arch_name)
    items = []
    for shape, weight in expand(model_desc, m):
        run = simulate_arch(model, shape, setup.geometry, setup.memory, setup.fmt)
        items.append((run.result, run.energy, weight))
    return aggregate(items, m=m)

###############################################################################
# Small batches: the drain effect
# -------------------------------
# A monolithic 128-row array drains 128 cycles per tile even when only a
# few rows hold data. Eight 16-row slabs working independent column strips
# drain 16 and run eight strips at once.

print(f"\n{'m':>4} {'sisa cycles':>12} {'tpu cycles':>12} {'speedup':>8} {'EDP cut':>8}")
for m in (1, 4, 8, 16):
    a, t = sweep_point("sisa", m), sweep_point("tpu", m)
    print(f"{m:>4} {a.cycles:>12,} {t.cycles:>12,} "
          f"{t.cycles / a.cycles:>8.3f} {(1 - a.edp_js / t.edp_js) * 100:>7.1f}%")

###############################################################################
# Full batches: parity, small energy tax
# --------------------------------------
# At m = 128 both machines run the same monolithic dataflow, so cycles
# match exactly; the slab machine pays for its gating circuitry and the
# multi-banked buffer in leakage, visible as a single-digit EDP overhead.

a, t = sweep_point("sisa", 128), sweep_point("tpu", 128)
print(f"\nm=128: cycle ratio {a.cycles / t.cycles:.4f}, "
      f"EDP overhead {(a.edp_js / t.edp_js - 1) * 100:.2f}%")

###############################################################################
# Past the array height: residual phases
# --------------------------------------
# m = 160 leaves a 32-row remainder. The monolithic baseline runs it as a
# second full-height pass; the slab machine drops into fused-32 mode and
# finishes it in a fraction of the time.

a, t = sweep_point("sisa", 160), sweep_point("tpu", 160)
print(f"m=160: speedup {t.cycles / a.cycles:.3f}")

###############################################################################
# The reconfigurable baseline
# ---------------------------
# Given shapes 128x128 / 64x256 / 32x384 / 16x448 it picks well per run,
# but pays a 2.49x static-power factor for its switching fabric.

print(f"\n{'m':>4} {'redas cycles':>12} {'vs sisa EDP':>12}")
for m in (16, 64, 128):
    a, r = sweep_point("sisa", m), sweep_point("redas", m)
    print(f"{m:>4} {r.cycles:>12,} {r.edp_js / a.edp_js:>11.2f}x")
