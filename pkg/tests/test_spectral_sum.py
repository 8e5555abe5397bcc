from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.constants import c, hbar
from scipy.integrate import quad

from casimir_modes.dielectric import Constant, Medium
from casimir_modes.errors import DomainError, TailError
from casimir_modes.lifshitz import QuadratureSpec, force_per_area
from casimir_modes.scattering import LayerConfig, Pol
from casimir_modes.spectral_sum import (
    continuum_integrand,
    continuum_segments,
    equivalence_report,
    per_k_force_lifshitz,
    per_k_force_mode_sum,
    per_k_ideal_mirror_series,
    spectral_shift_density,
    wynn_epsilon,
)
from casimir_modes.spectrum import spectrum_bounds

WP = 1.38e16
# mpmath oracle: -(1/pi) int kappa2 X/(1-X) dzeta, TM, L = 6.3, q = 0.5, units hbar wp^2/c
PER_K_TM_63_05 = -6.2219421996577645649e-5


def gap(L=6.3):
    return LayerConfig.preset_IV(WP, L=L)


def matched(eps=1.5, mu=1.5, L=6.3):
    return LayerConfig.preset_II(eps, mu, L * c / (2 * WP), omega_ref=WP)


# -- acceleration ------------------------------------------------------------------------

def test_wynn_accelerates_alternating_harmonic_series():
    terms = [(-1) ** (n + 1) / n for n in range(1, 25)]
    est, spread = wynn_epsilon(np.cumsum(terms))
    assert est == pytest.approx(math.log(2), abs=1e-12)
    assert spread < 1e-9


def test_wynn_is_exact_on_geometric_series():
    est, _ = wynn_epsilon(np.cumsum([0.5**n for n in range(12)]))
    assert est == pytest.approx(2.0, rel=1e-13)


def test_wynn_short_sequences():
    assert wynn_epsilon([1.0, 1.5])[0] == 1.5


# -- phase and density ---------------------------------------------------------------------

def test_shift_vanishes_for_wide_gap_in_tunnelling_band():
    # plasma slab in vacuum between the light line and the plasma edge: the slab is opaque
    q = 0.5
    peaks = []
    for L in (2.0, 200.0):
        cfg = LayerConfig.preset_III(WP, L=L)
        k = q * cfg.k_ref
        edge = spectrum_bounds(cfg, k).continuum_start
        ws = np.linspace(1.01, 1.0 + 0.9 * (WP / edge - 1), 5) * edge
        peaks.append(max(abs(s.delta) for s in spectral_shift_density(cfg, Pol.TM, ws, k)))
    assert peaks[0] > 1e-3
    assert peaks[1] < 1e-12


def test_shift_jumps_by_pi_across_cavity_resonance():
    # near-ideal walls: the first cavity resonance is narrow
    a, k = 1e-6, 1e6
    cfg = LayerConfig.vacuum_gap(Medium(Constant(1e12)), a)
    w1 = c * math.hypot(k, math.pi / (2 * a))
    for pol in Pol:
        lo, hi = spectral_shift_density(cfg, pol, [w1 * (1 - 1e-3), w1 * (1 + 1e-3)], k)
        assert hi.delta - lo.delta == pytest.approx(math.pi, abs=0.02)
        lo, hi = spectral_shift_density(cfg, pol, [w1 * (1 - 1e-9), w1 * (1 + 1e-9)], k)
        assert abs(hi.delta - lo.delta) < 0.01


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(1.001, 3.0), st.sampled_from(list(Pol)))
def test_density_is_derivative_of_phase(q, ratio, pol):
    cfg = gap(L=2.0)
    k = q * cfg.k_ref
    w = ratio * spectrum_bounds(cfg, k).continuum_start
    h = 1e-4 * (w - spectrum_bounds(cfg, k).continuum_start)
    lo, mid, hi = spectral_shift_density(cfg, pol, [w - h, w, w + h], k)
    fd = (hi.delta - lo.delta) / (2 * h) / math.pi
    assert mid.density == pytest.approx(fd, rel=1e-6, abs=1e-9 / w)


def test_shift_density_domain():
    cfg = gap()
    k = cfg.k_ref
    with pytest.raises(DomainError):
        spectral_shift_density(cfg, Pol.TM, 0.5 * spectrum_bounds(cfg, k).continuum_start, k)


def test_continuum_integrand_vanishes_without_walls():
    cfg = LayerConfig(Medium(Constant(1.0)), Medium(Constant(1.0)), 1e-7)
    assert continuum_integrand(cfg, Pol.TM, 3e15, 1e6) == 0.0


def test_segments_alternate_in_sign():
    _, segs, nodes = continuum_segments(gap(), Pol.TM, 0.5 * gap().k_ref, 32)
    assert np.all(np.diff(nodes) > 0)
    assert np.all(np.sign(segs[1:]) == -np.sign(segs[:-1]))


# -- per-k routes -------------------------------------------------------------------------------

def test_lifshitz_route_matches_oracle():
    cfg = gap()
    val = per_k_force_lifshitz(cfg, Pol.TM, 0.5 * cfg.k_ref)
    assert val / (hbar * WP**2 / c) == pytest.approx(PER_K_TM_63_05, rel=1e-10)


def test_lifshitz_route_matches_ideal_mirror_series():
    a = 1e-7
    cfg = LayerConfig.ideal_mirror(a)
    for k in (1e5, 1e6, 5e6):
        assert per_k_force_lifshitz(cfg, Pol.TM, k) == pytest.approx(per_k_ideal_mirror_series(a, k), rel=1e-8)


def test_lifshitz_route_vanishes_without_reflection():
    cfg = LayerConfig(Medium(Constant(2.0)), Medium(Constant(2.0)), 1e-7)
    assert per_k_force_lifshitz(cfg, Pol.TE, 1e6) == 0.0


def test_lifshitz_route_integrates_to_force():
    cfg = LayerConfig.preset_IV(WP, half_gap=50e-9)
    s = 1.0 / (2 * cfg.half_gap)

    def f(v):
        k = s * v / (1 - v)
        tot = sum(per_k_force_lifshitz(cfg, pol, k, rtol=1e-10) for pol in Pol)
        return k * tot / (2 * math.pi) * s / (1 - v) ** 2

    total = quad(f, 0, 1, epsrel=1e-9, limit=200)[0]
    ref = force_per_area(cfg, QuadratureSpec(rtol=1e-10)).value
    assert total == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("q", [0.2, 0.5, 1.0])
@pytest.mark.parametrize("pol", list(Pol))
def test_mode_sum_equals_lifshitz_route(q, pol):
    cfg = gap()
    row = per_k_force_mode_sum(cfg, pol, q * cfg.k_ref)
    row.lifshitz = per_k_force_lifshitz(cfg, pol, q * cfg.k_ref)
    assert row.relative_difference <= 1e-6
    assert row.modes
    assert row.mode_sum == pytest.approx(row.discrete + row.band + row.continuum, rel=1e-15)


def test_continuum_only_for_right_handed_walls():
    cfg = matched()
    row = per_k_force_mode_sum(cfg, Pol.TM, 0.5 * cfg.k_ref)
    assert row.discrete == 0.0
    assert row.modes == []
    assert row.mode_sum == row.band + row.continuum
    assert row.mode_sum == pytest.approx(per_k_force_lifshitz(cfg, Pol.TM, 0.5 * cfg.k_ref), rel=1e-8)


def test_mode_sum_cancels_for_wide_gap():
    # the parts stay finite while their sum follows the exponentially small force
    for L in (20.0, 60.0):
        cfg = gap(L)
        row = per_k_force_mode_sum(cfg, Pol.TM, cfg.k_ref)
        assert abs(row.discrete) > 1e-12
        assert abs(row.mode_sum) < 1e-12 * abs(row.discrete)


def test_unmatched_walls_raise_tail_error():
    cfg = matched(1.5, 1.0)
    with pytest.raises(TailError):
        per_k_force_mode_sum(cfg, Pol.TE, cfg.k_ref)


def test_mode_sum_domain():
    with pytest.raises(DomainError):
        per_k_force_mode_sum(gap(), Pol.TM, 0.0)
    with pytest.raises(DomainError):
        per_k_force_mode_sum(LayerConfig.ideal_mirror(1e-7), Pol.TM, 1e6)


def test_equivalence_report_passes_and_degenerate_tolerance_fails():
    cfg = matched()
    rep = equivalence_report(cfg, Pol.TE, [0.3 * cfg.k_ref, 0.8 * cfg.k_ref], 1e-3)
    assert rep.passed
    assert all(r.discrete == 0.0 for r in rep.rows)
    bad = equivalence_report(cfg, Pol.TE, [cfg.k_ref], 0.0)
    assert not bad.passed
    assert bad.message
