"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s`` or
``-rA``) before asserting.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy.constants import c, hbar

from casimir_modes.lifshitz import QuadratureSpec, energy_per_area, force_p_form, force_per_area
from casimir_modes.scattering import LayerConfig, Pol
from casimir_modes.spectral_sum import equivalence_report
from casimir_modes.spectrum import (
    SYMMETRIC,
    find_modes,
    single_interface_plasmon_closed_form,
    waveguide_mode_estimate,
)
from casimir_modes.verify import (
    GOLD_OMEGA_P,
    drude_plasma_difference,
    energy_force_mismatch,
    hybrid_crossing,
    matched_gap_config,
    positivity_margin,
    suite_unitarity,
)

WP = GOLD_OMEGA_P


def report(n: int, title: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title}: {detail}")
    assert ok, detail


def surface_pair(cfg, q):
    modes = [m for m in find_modes(cfg, Pol.TM, q * cfg.k_ref) if m.kind == "surface"]
    s = next(m.Omega for m in modes if m.symmetry == SYMMETRIC)
    a = next(m.Omega for m in modes if m.symmetry != SYMMETRIC)
    return s, a


def test_01_plasmon_closed_form():
    t0 = time.perf_counter()
    cfg = LayerConfig.single_interface(WP)
    worst = 0.0
    for q in (0.1, 0.5, 1.0, 2.0, 10.0):
        (mode,) = find_modes(cfg, Pol.TM, q * cfg.k_ref)
        worst = max(worst, abs(mode.Omega - float(single_interface_plasmon_closed_form(q))))
    dt = time.perf_counter() - t0
    report(1, "plasmon root vs closed form", worst <= 1e-10 and dt < 1.0,
           f"max abs error {worst:.2e} (<= 1e-10), {dt:.3f} s (< 1 s)")


def test_02_plasmon_asymptotics():
    cfg = LayerConfig.single_interface(WP)
    lo = find_modes(cfg, Pol.TM, 0.01 * cfg.k_ref)[0].Omega
    hi = find_modes(cfg, Pol.TM, 50.0 * cfg.k_ref)[0].Omega
    e_lo = abs(lo - 0.01 * (1 - 0.01**2 / 2)) / 0.01
    e_hi = abs(hi - (1 - 1 / (8 * 50.0**2)) / math.sqrt(2))
    report(2, "plasmon asymptotes", e_lo <= 1e-6 and e_hi <= 1e-6,
           f"small q rel {e_lo:.2e}, large q abs {e_hi:.2e} (each <= 1e-6)")


def test_03_slab_ordering_and_convergence():
    margin = math.inf
    cfg = LayerConfig.preset_III(WP, L=0.63)
    for q in np.linspace(0.01, 5.0, 50):
        s, a = surface_pair(cfg, q)
        margin = min(margin, a - s)
    s, a = surface_pair(LayerConfig.preset_III(WP, L=20.0), 1.0)
    ref = float(single_interface_plasmon_closed_form(1.0))
    ok = margin > 0 and 0 < ref - s <= 1e-3 and 0 < a - ref <= 1e-3
    report(3, "slab branch ordering and large-L limit", ok,
           f"min(Omega_a - Omega_s) {margin:.3e} (> 0); L=20 q=1: "
           f"Omega_sp - Omega_s {ref - s:.2e}, Omega_a - Omega_sp {a - ref:.2e} (in (0, 1e-3])")


def test_04_hybrid_crossing():
    L = 0.63
    qc = hybrid_crossing(L)
    expected = 1 / math.sqrt(1 + L / 2)
    err = abs(qc - expected)
    report(4, "hybrid branch crosses the light line", err <= 1e-6,
           f"q_cr {qc:.10f} vs 1/sqrt(1+L/2) = {expected:.10f}, error {err:.2e} (<= 1e-6)")


def test_05_waveguide_mode_counts():
    t0 = time.perf_counter()
    q = 0.05
    found = {}
    ok = True
    for L, stated in ((0.63, 0), (6.3, 2)):
        cfg = LayerConfig.preset_IV(WP, L=L)
        k = q * cfg.k_ref
        est = waveguide_mode_estimate(cfg, k)[1]
        scans = {pol.value: sum(1 for m in find_modes(cfg, pol, k) if m.kind == "waveguide") for pol in Pol}
        found[L] = (est, scans)
        ok &= est == stated and all(n == stated for n in scans.values())
    dt = time.perf_counter() - t0
    ok &= dt < 10.0
    detail = "; ".join(
        f"L={L}: stated {s}, estimate {found[L][0]}, scan TM {found[L][1]['TM']} TE {found[L][1]['TE']}"
        for L, s in ((0.63, 0), (6.3, 2))
    )
    report(5, "waveguide mode counts", ok, f"{detail}; {dt:.2f} s (< 10 s)")


def test_06_unitarity():
    norm, cross = suite_unitarity()
    ok = norm.value <= 1e-12 and cross.value <= 1e-12
    report(6, "S-matrix unitarity on 10^3 continuum points per polarization", ok,
           f"max ||t|^2+|r|^2-1| {norm.value:.2e}, max |r t* + r* t| {cross.value:.2e} (<= 1e-12)")


def test_07_ideal_mirror():
    d = 1e-6
    cfg = LayerConfig.ideal_mirror(d / 2)
    spec = QuadratureSpec(rtol=1e-10)
    t0 = time.perf_counter()
    f = force_per_area(cfg, spec).value
    tf = time.perf_counter() - t0
    t0 = time.perf_counter()
    e = energy_per_area(cfg, spec).value
    te = time.perf_counter() - t0
    f_ref = -math.pi**2 * hbar * c / (240 * d**4)
    e_ref = -math.pi**2 * hbar * c / (720 * d**3)
    ef, ee = abs(f / f_ref - 1), abs(e / e_ref - 1)
    ok = ef <= 1e-6 and ee <= 1e-6 and tf < 10 and te < 10 and f_ref == pytest.approx(-1.3001e-3, rel=1e-4)
    report(7, "ideal-mirror force and energy at 1 um", ok,
           f"F {f:.6e} Pa rel {ef:.1e}, E {e:.6e} J/m^2 rel {ee:.1e} (<= 1e-6); {tf:.2f} s, {te:.2f} s")


def test_08_route_equivalence():
    cfg = LayerConfig.preset_IV(WP, half_gap=50e-9)
    spec = QuadratureSpec(rtol=1e-11)
    fk = force_per_area(cfg, spec).value
    fp = force_p_form(cfg, spec).value
    rel = abs(fp - fk) / abs(fk)
    report(8, "k-form vs p-form force, gold plasma, d=100 nm", rel <= 1e-8,
           f"F_k {fk:.12e} Pa, F_p {fp:.12e} Pa, rel {rel:.1e} (<= 1e-8)")


def test_09_energy_force_consistency():
    rel = energy_force_mismatch(100e-9)
    report(9, "F vs -dE/dd, gold plasma, d=100 nm", rel <= 1e-4, f"rel {rel:.2e} (<= 1e-4)")


def test_10_drude_vs_plasma():
    t0 = time.perf_counter()
    worst = drude_plasma_difference(np.logspace(-8, -6, 10))
    dt = time.perf_counter() - t0
    report(10, "Drude (gamma = 0.004 omega_p) vs plasma force, 10 nm..1 um", worst <= 0.02 and dt < 120,
           f"max rel difference {worst:.4%} (<= 2%), {dt:.1f} s (< 120 s)")


def test_11_spectral_sum_identity():
    t0 = time.perf_counter()
    qs = (0.2, 0.5, 1.0, 2.0)
    parts = []
    ok = True
    for label, cfg in (("plasma walls", LayerConfig.preset_IV(WP, L=6.3)), ("matched walls", matched_gap_config())):
        rep = equivalence_report(cfg, Pol.TM, [q * cfg.k_ref for q in qs], 1e-3)
        worst = max(r.relative_difference for r in rep.rows)
        ok &= rep.passed and worst <= 1e-3
        if label == "matched walls":
            ok &= all(r.discrete == 0.0 for r in rep.rows)
        parts.append(f"{label} max rel {worst:.2e}")
    dt = time.perf_counter() - t0
    ok &= dt < 600
    report(11, "mode sum vs Lifshitz per k, TM, L=6.3", ok, f"{', '.join(parts)} (<= 1e-3); {dt:.1f} s")


def test_12_positivity():
    worst_log, min_d = -math.inf, math.inf
    for cfg in (LayerConfig.preset_III(WP, L=0.63), LayerConfig.preset_IV(WP, L=0.63)):
        lg, md = positivity_margin(cfg, n=100)
        worst_log, min_d = max(worst_log, lg), min(min_d, md)
    ok = worst_log <= 0 and 0 < min_d <= 1
    report(12, "0 < D <= 1 on 10^4-point imaginary-axis grids", ok,
           f"max ln D {worst_log:.3e} (<= 0), min D {min_d:.3e} (> 0)")
