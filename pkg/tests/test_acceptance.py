"""Acceptance gate: the eleven commitments the model is built to honor.

One test per criterion, in order, each printing a PASS/FAIL line with the
measured values so a verbose pytest run doubles as the acceptance report.
Criteria marked exact admit no tolerance; quantitative ones state theirs.
"""

import dataclasses
import random
import time

import pytest

from slabsim import (
    ArrayGeometry,
    DataFormat,
    GemmShape,
    ModeKind,
    compute_cycles,
    dram_traffic_lower_bound,
    plan_gemm,
    select_mode,
    simulate_arch,
)
from slabsim.baselines import redas_select_shape
from slabsim.energymodel import EnergyConfig, edp
from slabsim.microsim import oracle_sweep
from slabsim.perfmodel import SimResult, TrafficCounters
from slabsim.workloads import aggregate, bundled_model_names, expand, load_bundled_model


def _line(num, ok, detail):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}", flush=True)


@pytest.fixture(scope="module")
def points(setup):
    """Memoized Qwen2.5-0.5B aggregates keyed (arch, m, gating)."""
    model_desc = load_bundled_model("qwen2.5-0.5b")
    cache = {}

    def get(arch, m, gating=True):
        key = (arch, m, gating)
        if key not in cache:
            model = setup.arch(arch)
            if not gating:
                model = dataclasses.replace(model, power_gating=False)
            items = []
            for shape, w in expand(model_desc, m):
                run = simulate_arch(model, shape, setup.geometry, setup.memory, setup.fmt)
                items.append((run.result, run.energy, w))
            cache[key] = aggregate(items, m=m)
        return cache[key]

    return get


def test_criterion_01_oracle_equivalence():
    t0 = time.time()
    cases = [
        (r, k, c, grid_h)
        for grid_h in (2, 4, 8, 16)
        for grid_w in (2, 4, 8, 16)
        for r in range(1, grid_h + 1)
        for c in range(1, grid_w + 1)
        for k in (1, 3, 17)
    ]
    records = oracle_sweep(
        cases, expected_cycles_fn=lambda r, d, c, h: compute_cycles(r, c, d) + h
    )
    elapsed = time.time() - t0
    bad = [x for x in records if not (x["exact_match"] and x["correct_result"])]
    ok = len(records) == 2700 and not bad and elapsed < 60
    _line(1, ok, f"{len(records)} microsim cases, {len(bad)} mismatches, {elapsed:.1f}s")
    assert len(records) == 2700
    assert not bad, f"first mismatch: {bad[0] if bad else None}"
    assert elapsed < 60


def test_criterion_02_schedule_soundness(setup):
    t0 = time.time()
    rng = random.Random(20260815)
    shapes = [
        GemmShape(*(int(2 ** rng.uniform(0, 12)) for _ in range(3))) for _ in range(1000)
    ]
    desk = ArrayGeometry(rows=4, cols=4, slab_height=2, num_slabs=2)
    checked = 0
    for g in (setup.geometry, desk):
        for shape in shapes:
            sched = plan_gemm(shape, g, setup.memory, setup.fmt)
            volume = 0
            m_edge = 0
            for phase in sched.phases:
                assert phase.m_off == m_edge
                m_edge += phase.m_len
                chunk_offs = {off for off, _ in phase.k_chunks}
                col_edges = dict.fromkeys(chunk_offs, 0)
                for rnd in phase.rounds:
                    for t in rnd:
                        if t.row_off != phase.m_off or t.row_len != phase.m_len:
                            raise AssertionError(f"row extent broken: {t}")
                        if t.col_off != col_edges[t.k_off]:
                            raise AssertionError(f"column overlap or gap: {t}")
                        col_edges[t.k_off] = t.col_off + t.col_len
                        volume += t.row_len * t.col_len * t.k_len
                assert set(col_edges.values()) == {shape.n}, "uncovered columns"
            assert m_edge == shape.m
            assert volume == shape.macs, f"{shape}: volume {volume} != {shape.macs}"
            checked += 1
    elapsed = time.time() - t0
    ok = checked == 2000 and elapsed < 60
    _line(2, ok, f"{checked} plans covered exactly, {elapsed:.1f}s")
    assert checked == 2000
    assert elapsed < 60


def test_criterion_03_regime_boundaries(setup):
    g = setup.geometry
    expect = [
        (1, ModeKind.INDEPENDENT, 16), (16, ModeKind.INDEPENDENT, 16),
        (17, ModeKind.FUSED, 32), (32, ModeKind.FUSED, 32),
        (33, ModeKind.FUSED, 64), (64, ModeKind.FUSED, 64),
        (65, ModeKind.MONOLITHIC, 128), (128, ModeKind.MONOLITHIC, 128),
    ]
    got = [(m, select_mode(m, g).kind, select_mode(m, g).group_height) for m, _, _ in expect]
    two_phase = plan_gemm(GemmShape(129, 128, 64), g, setup.memory, setup.fmt)
    ok = got == expect and len(two_phase.phases) == 2
    _line(3, ok, f"regimes {[(m, k.name, h) for m, k, h in got]}, m=129 phases={len(two_phase.phases)}")
    assert got == expect
    assert len(two_phase.phases) == 2
    assert two_phase.phases[1].m_len == 1


def test_criterion_04_drain_effect_speedup(points):
    speedups = {m: points("tpu", m).cycles / points("sisa", m).cycles for m in range(1, 17)}
    peak_m = max(speedups, key=speedups.get)
    peak = speedups[peak_m]
    ok = peak > 8.0 and 8.0 <= peak <= 9.0
    _line(4, ok, f"peak aggregate speedup {peak:.3f} at m={peak_m} (target (8.0, 9.0])")
    assert peak > 8.0 and 8.0 <= peak <= 9.0, (
        f"aggregate speedup peaks at {peak:.3f} (m={peak_m}), short of the (8.0, 9.0] window. "
        f"Full sweep: { {m: round(s, 3) for m, s in speedups.items()} }. The model keeps every unit in "
        f"lockstep rounds and pays the full cold-start load serially, which caps the "
        f"small-m advantage near 6x on this workload mix; see the repository notes."
    )


def test_criterion_05_edp_reduction_small_m(points):
    speedups = {m: points("tpu", m).cycles / points("sisa", m).cycles for m in range(1, 17)}
    peak_m = max(speedups, key=speedups.get)
    reduction = 1.0 - points("sisa", peak_m).edp_js / points("tpu", peak_m).edp_js
    ok = reduction >= 0.85
    _line(5, ok, f"EDP reduction {reduction * 100:.1f}% at m={peak_m} (target >= 85%)")
    assert reduction >= 0.85


def test_criterion_06_parity_at_full_m(points):
    sisa, tpu = points("sisa", 128), points("tpu", 128)
    ratio = sisa.cycles / tpu.cycles
    overhead = sisa.edp_js / tpu.edp_js - 1.0
    ok = 0.95 <= ratio <= 1.05 and 0.05 <= overhead <= 0.12
    _line(6, ok, f"m=128 cycle ratio {ratio:.4f}, EDP overhead {overhead * 100:.2f}%")
    assert 0.95 <= ratio <= 1.05
    assert 0.05 <= overhead <= 0.12


def test_criterion_07_power_gating(points):
    for m in (1, 16, 17, 33, 65, 128, 129, 160):
        assert points("sisa", m, True).cycles == points("sisa", m, False).cycles, (
            f"gating changed cycles at m={m}"
        )
    reductions = []
    for m in (65, 81, 97, 113, 128):
        on, off = points("sisa", m, True), points("sisa", m, False)
        reductions.append(1.0 - on.edp_js / off.edp_js)
    at65 = reductions[0]
    monotone = all(a >= b - 1e-12 for a, b in zip(reductions, reductions[1:]))
    ok = 0.0 < at65 <= 0.25 and monotone
    _line(7, ok, "cycles invariant; EDP cut at m=65..128: "
          + ", ".join(f"{r * 100:.2f}%" for r in reductions))
    assert 0.0 < at65 <= 0.25
    assert monotone


def test_criterion_08_residual_tile_gain(points):
    speedup = points("tpu", 160).cycles / points("sisa", 160).cycles
    ok = 1.2 <= speedup <= 2.0
    _line(8, ok, f"m=160 aggregate speedup {speedup:.3f} (target [1.2, 2.0])")
    assert 1.2 <= speedup <= 2.0


def test_criterion_09_redas_shape_selection(setup):
    g, mem, fmt = setup.geometry, setup.memory, setup.fmt
    model = setup.arch("redas")
    templates = [
        (t.n, t.k)
        for name in bundled_model_names()
        for t in load_bundled_model(name).gemm_templates
    ]
    assert len(templates) == 20
    misses = []
    for m, expect in [(16, (16, 448)), (33, (32, 384)), (64, (64, 256))]:
        for n, k in templates:
            got = redas_select_shape(GemmShape(m, n, k), model, g, mem, fmt)
            if got != expect:
                misses.append((m, n, k, got))

    degenerate = dataclasses.replace(model, shape_set=((128, 128),))
    tpu = setup.arch("tpu")
    mismatch = []
    for n, k in templates[:5]:
        for m in (16, 160):
            shape = GemmShape(m, n, k)
            r = simulate_arch(degenerate, shape, g, mem, fmt).result
            t = simulate_arch(tpu, shape, g, mem, fmt).result
            if dataclasses.replace(r, energy_j=None, edp_js=None) != dataclasses.replace(
                t, energy_j=None, edp_js=None
            ):
                mismatch.append((m, n, k))
    ok = not misses and not mismatch
    _line(9, ok, f"60 shape selections exact, degenerate-set parity on "
          f"{10 - len(mismatch)}/10 runs")
    assert not misses, f"wrong selections: {misses[:3]}"
    assert not mismatch, f"degenerate mismatch at: {mismatch[:3]}"


def test_criterion_10_traffic_bound_and_macs(setup):
    g, mem, fmt = setup.geometry, setup.memory, setup.fmt
    rng = random.Random(7)
    shapes = [GemmShape(16, 151936, 896), GemmShape(12, 8192, 3072), GemmShape(200, 128, 64)]
    shapes += [GemmShape(*(rng.randint(1, 4096) for _ in range(3))) for _ in range(25)]
    checked = 0
    for shape in shapes:
        bound = dram_traffic_lower_bound(shape, fmt)
        for arch in ("sisa", "tpu", "redas"):
            r = simulate_arch(setup.arch(arch), shape, g, mem, fmt).result
            assert r.counters.dram_read_bytes + r.counters.dram_write_bytes >= bound, (
                f"{arch} {shape} under the traffic floor"
            )
            assert r.counters.mac_count == shape.macs, f"{arch} {shape} MAC count off"
            checked += 1
    _line(10, True, f"{checked} runs at or above the DRAM floor with exact MAC counts")


def test_criterion_11_static_energy_anchor(setup):
    cfg = setup.arch("sisa").energy
    r = SimResult(
        cycles=1, per_phase_cycles=(1,), counters=TrafficCounters(),
        active_slab_cycles=(1,) * 8, num_slabs=8, mode_label="monolithic",
    )
    bd = edp(r, cfg)
    comp = {k: round(v * 1e9, 2) for k, v in bd.static_components_j.items()}
    total = round(bd.static_j * 1e9, 2)
    expect = {"pe_array": 21.60, "global_buffer": 5.22,
              "slab_buffers": 0.12, "output_buffer": 1.25}
    ok = comp == expect and total == 28.19
    _line(11, ok, f"all-active cycle {total} nJ, components {comp}")
    assert comp == expect
    assert total == 28.19
