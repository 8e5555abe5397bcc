"""Self-checks of the library against closed forms and cross-route identities.

Each suite returns a list of :class:`Check` rows.  A check either bounds a
non-negative deviation (``value <= tol``) or requires a strictly positive
margin (``value > 0``); informational rows never fail.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dielectric import Constant, Drude, Medium, Plasma
from .lifshitz import (
    QuadratureSpec,
    energy_per_area,
    force_p_form,
    force_per_area,
    ideal_mirror_energy,
    ideal_mirror_force,
    log_dispersion_integrand,
)
from .scattering import C_LIGHT, LayerConfig, Pol, s_matrix
from .spectral_sum import equivalence_report
from .spectrum import (
    SYMMETRIC,
    find_modes,
    single_interface_plasmon_closed_form,
    spectrum_bounds,
    trace_dispersion,
    waveguide_mode_estimate,
)

__all__ = ["Check", "SUITES", "GOLD_OMEGA_P", "DRUDE_GAMMA_RATIO", "run_suite"]

GOLD_OMEGA_P = 1.38e16
DRUDE_GAMMA_RATIO = 0.004


@dataclass
class Check:
    suite: str
    name: str
    value: float
    tol: float
    rule: str = "<="  # "<=", ">0" or "info"
    detail: str = ""

    @property
    def passed(self) -> bool:
        if self.rule == "info":
            return True
        if not math.isfinite(self.value):
            return False
        if self.rule == ">0":
            return bool(self.value > 0)
        return bool(self.value <= self.tol)

    @property
    def status(self) -> str:
        if self.rule == "info":
            return "INFO"
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["value"] = float(self.value)
        d["tol"] = float(self.tol)
        d["passed"] = self.passed
        return d


def _rel(a, b):
    return abs(a - b) / abs(b)


# -- suites -------------------------------------------------------------------------

def suite_unitarity(tol=1e-12) -> list[Check]:
    """|t|^2 + |r|^2 - 1 and r conj(t) + conj(r) t on 10^3 continuum points per polarization."""
    cfg = LayerConfig.preset_III(GOLD_OMEGA_P, L=0.63)
    kref = cfg.k_ref
    norm = cross = 0.0
    for pol in (Pol.TM, Pol.TE):
        for q in np.logspace(-1, math.log10(5.0), 10):
            edge = spectrum_bounds(cfg, q * kref).continuum_start
            for w in edge * (1.0 + np.logspace(-6, 1, 100)):
                p = s_matrix(pol, cfg, float(w), q * kref)
                norm = max(norm, abs(abs(p.t) ** 2 + abs(p.r) ** 2 - 1.0))
                cross = max(cross, abs(p.r * p.t.conjugate() + p.r.conjugate() * p.t))
    return [
        Check("unitarity", "max | |t|^2+|r|^2-1 |", norm, tol),
        Check("unitarity", "max |r t* + r* t|", cross, tol),
    ]


def suite_plasmon(tol=1e-10) -> list[Check]:
    cfg = LayerConfig.single_interface(GOLD_OMEGA_P)
    worst = 0.0
    for q in (0.1, 0.5, 1.0, 2.0, 10.0):
        (mode,) = find_modes(cfg, Pol.TM, q * cfg.k_ref)
        worst = max(worst, abs(mode.Omega - single_interface_plasmon_closed_form(q)))
    lo = find_modes(cfg, Pol.TM, 0.01 * cfg.k_ref)[0].Omega
    hi = find_modes(cfg, Pol.TM, 50.0 * cfg.k_ref)[0].Omega
    return [
        Check("plasmon", "max |Omega_root - Omega_closed|", worst, tol),
        Check("plasmon", "small-q asymptote, rel", abs(lo - 0.01 * (1 - 0.01**2 / 2)) / 0.01, 1e-6),
        Check("plasmon", "large-q asymptote, abs", abs(hi - (1 - 1 / (8 * 50.0**2)) / math.sqrt(2)), 1e-6),
    ]


def _surface_pair(cfg, q):
    modes = [m for m in find_modes(cfg, Pol.TM, q * cfg.k_ref) if m.kind == "surface"]
    s = [m.Omega for m in modes if m.symmetry == SYMMETRIC]
    a = [m.Omega for m in modes if m.symmetry != SYMMETRIC]
    return (s[0] if s else math.nan), (a[0] if a else math.nan)


def hybrid_crossing(L: float) -> float:
    """Light-line crossing ``q`` of the symmetric TM hybrid branch, vacuum gap in plasma."""
    cfg = LayerConfig.preset_IV(GOLD_OMEGA_P, L=L)
    q_cross = 1.0 / math.sqrt(1.0 + L / 2.0)
    q0 = 0.5 * q_cross
    seed = next(m for m in find_modes(cfg, Pol.TM, q0 * cfg.k_ref) if m.kind == "hybrid")
    curve = trace_dispersion(cfg, Pol.TM, seed, np.linspace(q0, 1.5 * q_cross, 21))
    return math.nan if curve.light_line_crossing is None else curve.light_line_crossing


def waveguide_counts(L: float, q: float = 0.05) -> dict:
    """Scanned non-hybrid waveguide roots per polarization next to the estimate."""
    cfg = LayerConfig.preset_IV(GOLD_OMEGA_P, L=L)
    k = q * cfg.k_ref
    out = {"estimate": waveguide_mode_estimate(cfg, k)[1]}
    for pol in (Pol.TM, Pol.TE):
        out[pol.value] = sum(1 for m in find_modes(cfg, pol, k) if m.kind == "waveguide")
    return out


def suite_modes(tol=1e-6) -> list[Check]:
    checks = []
    cfg = LayerConfig.preset_III(GOLD_OMEGA_P, L=0.63)
    margin = math.inf
    for q in np.linspace(0.01, 5.0, 50):
        ws, wa = _surface_pair(cfg, q)
        margin = min(margin, wa - ws)
    checks.append(Check("modes", "min (Omega_a - Omega_s), slab, L=0.63", margin, 0.0, ">0"))

    cfg20 = LayerConfig.preset_III(GOLD_OMEGA_P, L=20.0)
    ws, wa = _surface_pair(cfg20, 1.0)
    ref = single_interface_plasmon_closed_form(1.0)
    checks.append(Check("modes", "|Omega_s - Omega_sp|, slab, L=20, q=1", abs(ws - ref), 1e-3))
    checks.append(Check("modes", "|Omega_a - Omega_sp|, slab, L=20, q=1", abs(wa - ref), 1e-3))
    checks.append(Check("modes", "Omega_sp - Omega_s (below)", ref - ws, 0.0, ">0"))
    checks.append(Check("modes", "Omega_a - Omega_sp (above)", wa - ref, 0.0, ">0"))

    qc = hybrid_crossing(0.63)
    checks.append(Check("modes", "|q_cr - 1/sqrt(1+L/2)|, L=0.63", abs(qc - 1 / math.sqrt(1.315)), tol))

    for L in (0.63, 6.3):
        c = waveguide_counts(L)
        checks.append(Check(
            "modes", f"waveguide roots at L={L}", float(c["TM"]), float(c["estimate"]), "info",
            f"TM {c['TM']}, TE {c['TE']}, estimate {c['estimate']}",
        ))
    return checks


def positivity_margin(cfg: LayerConfig, n: int = 100) -> tuple[float, float]:
    """Largest ``ln D`` and smallest ``D`` over a log-log ``(zeta, k)`` grid."""
    zetas = cfg.reference_frequency * np.logspace(-3, 3, n)
    ks = cfg.k_ref * np.logspace(-3, 3, n)
    worst_log, min_d = -math.inf, math.inf
    for pol in (Pol.TM, Pol.TE):
        for z in zetas:
            for k in ks:
                ln_d = log_dispersion_integrand(cfg, pol, float(z), float(k))
                worst_log = max(worst_log, ln_d)
                min_d = min(min_d, math.exp(ln_d))
    return worst_log, min_d


def drude_plasma_difference(separations=None, rtol=1e-8) -> float:
    if separations is None:
        separations = np.logspace(-8, -6, 10)
    worst = 0.0
    plasma = Medium(Plasma(GOLD_OMEGA_P))
    drude = Medium(Drude(GOLD_OMEGA_P, DRUDE_GAMMA_RATIO * GOLD_OMEGA_P))
    spec = QuadratureSpec(rtol=rtol)
    for d in separations:
        fp = force_per_area(LayerConfig.vacuum_gap(plasma, d / 2), spec).value
        fd = force_per_area(LayerConfig.vacuum_gap(drude, d / 2), spec).value
        worst = max(worst, _rel(fd, fp))
    return worst


def energy_force_mismatch(d=100e-9, rtol=1e-9) -> float:
    spec = QuadratureSpec(rtol=rtol)
    cfg = LayerConfig.preset_IV(GOLD_OMEGA_P, half_gap=d / 2)
    h = 1e-3 * d
    e_hi = energy_per_area(cfg.with_half_gap((d + h) / 2), spec).value
    e_lo = energy_per_area(cfg.with_half_gap((d - h) / 2), spec).value
    f = force_per_area(cfg, spec).value
    return abs(f + (e_hi - e_lo) / (2 * h)) / abs(f)


def suite_lifshitz(tol=1e-6) -> list[Check]:
    d = 1e-6
    mirror = LayerConfig.ideal_mirror(d / 2)
    spec = QuadratureSpec(rtol=1e-10)
    f = force_per_area(mirror, spec).value
    e = energy_per_area(mirror, spec).value
    gold = LayerConfig.preset_IV(GOLD_OMEGA_P, half_gap=50e-9)
    tight = QuadratureSpec(rtol=1e-11)
    fk = force_per_area(gold, tight).value
    fp = force_p_form(gold, tight).value
    log_iii, d_iii = positivity_margin(LayerConfig.preset_III(GOLD_OMEGA_P, L=0.63))
    log_iv, d_iv = positivity_margin(LayerConfig.preset_IV(GOLD_OMEGA_P, L=0.63))
    return [
        Check("lifshitz", "ideal mirror force, rel, d=1um", _rel(f, ideal_mirror_force(d)), tol),
        Check("lifshitz", "ideal mirror energy, rel, d=1um", _rel(e, ideal_mirror_energy(d)), tol),
        Check("lifshitz", "p-form vs k-form, gold, d=100nm", _rel(fp, fk), 1e-8),
        Check("lifshitz", "|F + dE/dd|/|F|, gold, d=100nm", energy_force_mismatch(), 1e-4),
        Check("lifshitz", "Drude vs plasma, max rel, 10nm..1um", drude_plasma_difference(), 0.02),
        Check("lifshitz", "min D, slab and gap", min(d_iii, d_iv), 0.0, ">0"),
        Check("lifshitz", "max ln D, slab and gap", max(log_iii, log_iv), 0.0),
    ]


def matched_gap_config(L: float = 6.3, eps: float = 1.5, mu: float = 1.5) -> LayerConfig:
    """Vacuum gap between impedance-matched constant half-spaces, sized like the plasma case."""
    a = L * C_LIGHT / (2.0 * GOLD_OMEGA_P)
    return LayerConfig.preset_II(eps, mu, a, omega_ref=GOLD_OMEGA_P)


def suite_spectral_sum(tol=1e-3) -> list[Check]:
    qs = (0.2, 0.5, 1.0, 2.0)
    checks = []
    for label, cfg in (
        ("plasma bulk, TM, L=6.3", LayerConfig.preset_IV(GOLD_OMEGA_P, L=6.3)),
        ("matched eps=mu=1.5, TM, L=6.3", matched_gap_config()),
    ):
        rep = equivalence_report(cfg, Pol.TM, [q * cfg.k_ref for q in qs], tol)
        for q, row in zip(qs, rep.rows):
            checks.append(Check("spectral-sum", f"{label}, q={q:g}", row.relative_difference, tol))
    return checks


SUITES = {
    "unitarity": suite_unitarity,
    "plasmon": suite_plasmon,
    "modes": suite_modes,
    "lifshitz": suite_lifshitz,
    "spectral-sum": suite_spectral_sum,
}


def run_suite(name: str, tol: float | None = None) -> list[Check]:
    """Run one suite (or ``"all"``); ``tol`` overrides every ``<=`` tolerance."""
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
        rows = SUITES[n]()
        if tol is not None:
            for c in rows:
                if c.rule == "<=":
                    c.tol = tol
        checks.extend(rows)
    return checks
