"""
What the reconfigurable baseline chooses, and what it costs
===========================================================

The reconfigurable baseline re-forms its PE budget into one rectangular
array per run: tall and square for big batches, short and wide for small
ones. This script shows the choices it makes across batch sizes, verifies
it degrades gracefully to the plain monolithic machine, and compares the
static-power bill.
"""
import dataclasses

from slabsim import GemmShape, simulate_arch
from slabsim.baselines import redas_select_shape
from slabsim.config import load_config

setup = load_config()
g, mem, fmt = setup.geometry, setup.memory, setup.fmt
redas = setup.arch("redas")

###############################################################################
# Shape selection across m
# ------------------------
# Candidates: 128x128, 64x256, 32x384, 16x448. Shapes taller than m waste
# rows outright, so only heights <= m compete; among those, fewest cycles
# wins. Watch the choice climb as m grows.

print(f"{'m':>4}  chosen shape")
for m in (1, 8, 16, 24, 33, 48, 64, 100, 128):
    h, w = redas_select_shape(GemmShape(m, 4864, 896), redas, g, mem, fmt)
    print(f"{m:>4}  {h}x{w}")

###############################################################################
# The short-wide win at small m
# -----------------------------
# At m=16, 16x448 turns 38 column strips of 128 into 11 strips of 448 and
# drains 16 deep instead of 128. Against the square array:

shape = GemmShape(16, 4864, 896)
square = dataclasses.replace(redas, shape_set=((128, 128),))
wide_run = simulate_arch(redas, shape, g, mem, fmt)
square_run = simulate_arch(square, shape, g, mem, fmt)
print(f"\nm=16: 16x448 {wide_run.result.cycles:,} cycles, "
      f"128x128 {square_run.result.cycles:,} cycles "
      f"({square_run.result.cycles / wide_run.result.cycles:.2f}x)")

###############################################################################
# Degenerate set = monolithic machine
# -----------------------------------
# Pin the shape set to the square and the baseline must reproduce the
# monolithic model exactly, cycle for cycle and byte for byte. Energy
# differs by design: the switching fabric carries a 2.49x static factor.

tpu_run = simulate_arch(setup.arch("tpu"), shape, g, mem, fmt)
strip = lambda r: dataclasses.replace(r, energy_j=None, edp_js=None)
print("\nsquare-locked run equals monolithic run:",
      strip(square_run.result) == strip(tpu_run.result))
pe_ratio = (square_run.energy.static_components_j["pe_array"]
            / tpu_run.energy.static_components_j["pe_array"])
print(f"array leakage factor: {pe_ratio:.2f}x "
      f"(total energy {square_run.result.energy_j / tpu_run.result.energy_j:.2f}x)")

###############################################################################
# Where the factor bites
# ----------------------
# Reconfigurability buys cycles at small m but the 2.49x leakage tax never
# sleeps. The slab machine gets similar cycle wins without the tax, which
# is the whole argument for partitioning instead of reshaping.

sisa_run = simulate_arch(setup.arch("sisa"), shape, g, mem, fmt)
print(f"\nm=16 energy: sisa {sisa_run.result.energy_j * 1e6:.1f} uJ, "
      f"redas {wide_run.result.energy_j * 1e6:.1f} uJ, "
      f"tpu {tpu_run.result.energy_j * 1e6:.1f} uJ")
print(f"m=16 EDP: sisa {sisa_run.result.edp_js:.3e}, "
      f"redas {wide_run.result.edp_js:.3e}, tpu {tpu_run.result.edp_js:.3e}")
