"""Discrete spectrum of the symmetric three-layer stack.

The slab frequency equations are

    L_a = i k1 w2 + w1 k2 tan(a k2) = 0      (antisymmetric modes)
    L_s = i k1 w2 - w1 k2 cot(a k2) = 0      (symmetric modes)

with ``w = eps`` for TM and ``w = mu`` for TE.  Outside the slab the field
decays, ``k1 = i kappa1``.  Both equations are solved in a pole-free form:
``L_a`` is multiplied by ``a cos(a k2)`` and ``L_s`` by ``sin(a k2)/k2``.
The results are entire functions of ``s = a^2 k2^2``, so the light line
(``s = 0``) is an ordinary point and a sign change can only come from a root.

"Symmetric" follows the convention where the tangential E field is even,
i.e. the Hertz potential Phi is odd (``sin`` inside the slab).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.optimize import brentq

from .dielectric import Constant, Oscillator, Plasma
from .errors import (
    DegenerateProfileError,
    DomainError,
    ScanFailureError,
    UnsupportedConfigError,
)
from .scattering import LayerConfig, Pol, kz

__all__ = [
    "SYMMETRIC",
    "ANTISYMMETRIC",
    "SpectrumBounds",
    "Mode",
    "DispersionCurve",
    "FieldProfile",
    "spectrum_bounds",
    "single_interface_plasmon",
    "single_interface_plasmon_closed_form",
    "frequency_function",
    "find_modes",
    "trace_dispersion",
    "waveguide_mode_estimate",
    "field_profile",
    "left_handed_existence",
    "gap_derivative",
]

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
ROOT_TOL = 1e-12
_SERIES_CUTOFF = 1e-8  # |s| below which sin(x)/x and tanh(x)/x use series


@dataclass(frozen=True)
class SpectrumBounds:
    omega_minus: float
    omega_plus: float
    continuum_start: float


@dataclass(frozen=True)
class Mode:
    pol: Pol
    symmetry: str
    kind: str  # "surface" | "waveguide" | "hybrid"
    k: float
    omega: float
    residual: float
    q: float
    Omega: float
    edge_offset: float | None = None  # continuum edge minus omega, rad/s


@dataclass
class DispersionCurve:
    pol: Pol
    symmetry: str
    q: np.ndarray
    Omega: np.ndarray
    light_line_crossing: float | None = None
    terminated_at: float | None = None
    notes: list = field(default_factory=list)


@dataclass
class FieldProfile:
    z: np.ndarray
    values: np.ndarray
    A: float
    B: float
    decay_rate: float
    matching_residual: float


# -- continuum boundaries -----------------------------------------------------

def _zero_frequency(medium, k: float) -> float:
    """Frequency where ``eps mu omega^2/c^2 - k^2`` changes sign (inf if never)."""
    model, mu = medium.permittivity, medium.mu
    if isinstance(model, Constant):
        n2 = model.eps * mu
        if n2 <= 0:
            return math.inf
        return C_LIGHT * k / math.sqrt(n2)
    if isinstance(model, Plasma):
        if mu <= 0:
            raise UnsupportedConfigError("plasma medium with negative permeability")
        return math.sqrt(model.omega_p**2 + (C_LIGHT * k) ** 2 / mu)
    if isinstance(model, Oscillator) and not any(g > 0 for _, _, g in model.terms):
        return _numeric_zero_frequency(medium, k)
    raise UnsupportedConfigError(
        f"real-frequency spectrum needs a lossless model, got {type(model).__name__}"
    )


def _numeric_zero_frequency(medium, k: float) -> float:
    res = [w for _, w, _ in medium.permittivity.terms]
    top = max(res + [C_LIGHT * k]) * 100.0 + 1.0
    grid = np.geomspace(top * 1e-8, top, 4001)
    rad = medium.eps(grid).real * medium.mu * grid**2 / C_LIGHT**2 - k**2
    sign = np.sign(rad)
    changes = np.nonzero(np.diff(sign) != 0)[0]
    if len(changes) != 1 or sign[changes[0]] > 0:
        raise UnsupportedConfigError("radicand sign is not monotone in omega")
    i = changes[0]

    def f(w):
        return medium.eps(w).real * medium.mu * w**2 / C_LIGHT**2 - k**2

    return brentq(f, grid[i], grid[i + 1], xtol=1e-14 * grid[i])


def spectrum_bounds(config: LayerConfig, k: float) -> SpectrumBounds:
    """Branch points ``omega_-(k) < omega_+(k)`` and the continuum edge.

    The continuum starts where the outer medium starts to propagate.
    """
    if k < 0:
        raise DomainError("in-plane wavenumber must be non-negative")
    w_out = _zero_frequency(config.outer, k)
    w_in = _zero_frequency(config.inner, k)
    lo, hi = sorted((w_out, w_in))
    return SpectrumBounds(lo, hi, w_out)


# -- single interface ---------------------------------------------------------

def single_interface_plasmon_closed_form(q):
    """``sqrt(1/2 + q^2 - sqrt(1/4 + q^4))``, rationalised to avoid cancellation at large q."""
    q = np.asarray(q, dtype=float)
    return (q / np.sqrt(0.5 + q**2 + np.sqrt(0.25 + q**4)))[()]


def single_interface_plasmon(q: float) -> float:
    """Dimensionless surface-plasmon frequency of a plasma|vacuum interface.

    Solves ``eps1 k2 + eps2 k1 = 0`` directly (both waves evanescent),
    independent of the closed form.
    """
    if not q > 0:
        raise DomainError("q must be positive")

    def f(W):
        eps1 = 1.0 - 1.0 / W**2
        return eps1 * math.sqrt(q * q - W * W) + math.sqrt(q * q - eps1 * W * W)

    hi = min(q, 1.0 / math.sqrt(2.0))
    lo = hi * 1e-6
    return brentq(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)


# -- frequency functions ------------------------------------------------------

def _sinc_s(s):
    """sin(sqrt s)/sqrt s for s > 0, sinh(x)/x/cosh(x) = tanh(x)/x for s < 0."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = np.abs(s) < _SERIES_CUTOFF
    pos = (s > 0) & ~small
    neg = (s < 0) & ~small
    x = np.sqrt(np.abs(s))
    out[pos] = np.sin(x[pos]) / x[pos]
    out[neg] = np.tanh(x[neg]) / x[neg]
    # series: sin(x)/x = 1 - s/6, tanh(x)/x = 1 + s/3 with s = -x^2
    out[small & (s >= 0)] = 1.0 - s[small & (s >= 0)] / 6.0
    out[small & (s < 0)] = 1.0 + s[small & (s < 0)] / 3.0
    return out


def _edge_form(config: LayerConfig, k: float):
    """``(edge, coef)`` with ``k^2 - eps1 mu1 omega^2/c^2 = coef (edge^2 - omega^2)``.

    Lets the outer decay constant be computed without cancellation right
    below the continuum edge.  ``None`` for models without this form.
    """
    model, mu = config.outer.permittivity, config.outer.mu
    if isinstance(model, Constant) and model.eps * mu > 0:
        return C_LIGHT * k / math.sqrt(model.eps * mu), model.eps * mu / C_LIGHT**2
    if isinstance(model, Plasma) and mu > 0:
        return math.sqrt(model.omega_p**2 + (C_LIGHT * k) ** 2 / mu), mu / C_LIGHT**2
    return None


def _terms(config: LayerConfig, pol: Pol, symmetry: str, omega, k, a=None, gap=None):
    """The two terms of the pole-free frequency function (their sum vanishes at a mode).

    ``gap`` optionally gives ``edge - omega`` exactly, for use right below
    the continuum edge.
    """
    a = config.half_gap if a is None else a
    omega = np.asarray(omega, dtype=float)
    e1 = np.real(config.outer.eps(omega))
    e2 = np.real(config.inner.eps(omega))
    mu1, mu2 = config.outer.mu, config.inner.mu
    w1, w2 = (e1, e2) if pol is Pol.TM else (mu1 + 0 * e1, mu2 + 0 * e2)
    form = _edge_form(config, k) if gap is not None else None
    if form is not None:
        edge, coef = form
        rad1 = coef * gap * (2.0 * edge - gap)
    else:
        rad1 = k**2 - e1 * mu1 * (omega / C_LIGHT) ** 2
    akap1 = a * np.sqrt(np.maximum(rad1, 0.0))
    s = a**2 * (e2 * mu2 * (omega / C_LIGHT) ** 2 - k**2)
    s = np.asarray(s, dtype=float)
    x = np.sqrt(np.abs(s))
    pos = s > 0
    if symmetry == ANTISYMMETRIC:
        cos_part = np.where(pos, np.cos(x), 1.0)
        sin_part = np.where(pos, x * np.sin(x), -x * np.tanh(x))
        return -akap1 * w2 * cos_part, w1 * sin_part, s
    if symmetry == SYMMETRIC:
        cos_part = np.where(pos, np.cos(x), 1.0)
        return -akap1 * w2 * _sinc_s(s), -w1 * cos_part, s
    raise DomainError(f"unknown symmetry {symmetry!r}")


def frequency_function(config: LayerConfig, pol, symmetry: str, omega, k, normalized=True, gap=None):
    """Pole-free slab frequency function; zero exactly at the eigenfrequencies.

    With ``normalized=True`` the value is divided by the sum of the moduli of
    its two terms, which makes it a scale-free residual in [-1, 1].
    """
    pol = Pol.coerce(pol)
    t1, t2, _ = _terms(config, pol, symmetry, omega, k, gap=gap)
    val = t1 + t2
    if normalized:
        scale = np.abs(t1) + np.abs(t2)
        val = np.where(scale > 0, val / np.where(scale > 0, scale, 1.0), 0.0)
    return np.asarray(val)[()]


def _raw(config, pol, symmetry, omega, k, a=None, gap=None):
    t1, t2, _ = _terms(config, pol, symmetry, omega, k, a, gap)
    return float(t1 + t2)


# -- root finding -------------------------------------------------------------

def _scan_step(config: LayerConfig) -> float:
    L = config.L
    n_in = 1.0
    if isinstance(config.inner.permittivity, Constant):
        n_in = math.sqrt(max(abs(config.inner.permittivity.eps * config.inner.mu), 1.0))
    return min(0.25 * math.pi / (L * n_in), 0.01)


def _classify(config, pol, symmetry, omega, k, s, lowest_symmetric):
    if s < 0:
        return "surface"
    if (
        pol is Pol.TM
        and symmetry == SYMMETRIC
        and lowest_symmetric
        and float(np.real(config.outer.eps(omega))) < 0
    ):
        return "hybrid"
    return "waveguide"


def _max_roots(config, k):
    """Generous upper bound on the number of roots per symmetry."""
    b = spectrum_bounds(config, k)
    top = min(b.continuum_start, b.omega_plus) if math.isfinite(b.omega_plus) else b.continuum_start
    e2 = np.real(config.inner.eps(top)) if top > 0 else 1.0
    kmax = math.sqrt(max(e2 * config.inner.mu * (top / C_LIGHT) ** 2 - k**2, 0.0))
    return int(2 * config.half_gap * kmax / math.pi) + 4


def find_modes(config: LayerConfig, pol, k: float, tol: float = ROOT_TOL) -> list[Mode]:
    """All real eigenfrequencies below the continuum edge at in-plane wavenumber ``k``.

    The dimensionless frequency axis is scanned on a uniform grid fine enough
    to separate neighbouring waveguide roots, sign changes are bracketed, and
    each root is polished with Brent's method.  Modes are sorted by frequency.
    """
    pol = Pol.coerce(pol)
    if k < 0:
        raise DomainError("in-plane wavenumber must be non-negative")
    wref = config.reference_frequency
    if not math.isfinite(config.half_gap):
        if config.preset != "single-interface" or pol is Pol.TE or k == 0:
            return []
        q = k / config.k_ref
        W = single_interface_plasmon(q)
        return [Mode(pol, SYMMETRIC, "surface", k, W * wref, 0.0, q, W)]

    edge = spectrum_bounds(config, k).continuum_start
    if not math.isfinite(edge):
        raise UnsupportedConfigError("outer medium never propagates; continuum edge undefined")
    if edge == 0:
        return []
    W_edge = edge / wref
    step = min(_scan_step(config), W_edge / 200.0)
    n = int(math.ceil(W_edge / step))
    grid = np.linspace(0.0, W_edge, n + 1)
    grid[0] = W_edge * 1e-9
    omegas = grid * wref
    limit = _max_roots(config, k)

    found: list[tuple[float, float, str, float, float]] = []
    for symmetry in (SYMMETRIC, ANTISYMMETRIC):
        vals = frequency_function(config, pol, symmetry, omegas, k)
        sg = np.sign(vals)
        idx = np.nonzero(sg[:-1] * sg[1:] < 0)[0]
        exact = np.nonzero(sg[1:-1] == 0)[0] + 1
        if len(idx) + len(exact) > limit:
            raise ScanFailureError(
                f"{len(idx) + len(exact)} {symmetry} roots exceed the bound {limit}"
            )
        brackets = [(omegas[i], omegas[i + 1]) for i in idx]
        brackets += [(omegas[i], omegas[i]) for i in exact]
        for lo, hi in brackets:
            root, gap = _bracketed_root(config, pol, symmetry, k, lo, hi, edge)
            res = abs(float(frequency_function(config, pol, symmetry, root, k, gap=gap)))
            if res >= tol and not _sign_change_at(config, pol, symmetry, k, root):
                raise ScanFailureError(f"root at {root:g} rad/s has residual {res:.2e}")
            s = float(_terms(config, pol, symmetry, root, k)[2])
            found.append((root, gap, symmetry, res, s))

    found.sort(key=lambda t: t[0])
    sym_roots = [w for w, _, sym, _, _ in found if sym == SYMMETRIC]
    lowest_sym = sym_roots[0] if sym_roots else None
    q = k / config.k_ref
    modes = []
    for w, gap, sym, res, s in found:
        kind = _classify(config, pol, sym, w, k, s, w == lowest_sym)
        modes.append(Mode(pol, sym, kind, k, w, res, q, w / wref, gap))
    return modes


def _sign_change_at(config, pol, symmetry, k, root, ulps=4):
    """True if the frequency function flips sign within a few ulps of ``root``.

    Steep functions (large gaps, near-zero permittivity) can leave a residual
    above ``tol`` even when the root is resolved to machine precision.
    """
    h = ulps * np.finfo(float).eps * root
    lo, hi = frequency_function(config, pol, symmetry, np.array([root - h, root + h]), k)
    return bool(lo * hi <= 0)


def _bracketed_root(config, pol, symmetry, k, lo, hi, edge):
    """Brent root in ``t = sqrt(edge - omega)``; returns ``(omega, edge - omega)``.

    ``kappa1`` vanishes like ``t`` at the continuum edge, so the frequency
    function is smooth in ``t`` but has a square-root cusp in ``omega``.
    """
    f = lambda t: _raw(config, pol, symmetry, edge - t * t, k, gap=t * t)
    t_lo, t_hi = math.sqrt(max(edge - hi, 0.0)), math.sqrt(edge - lo)
    if t_lo == t_hi or f(t_lo) == 0:
        t = t_lo
    elif f(t_hi) == 0:
        t = t_hi
    else:
        t = brentq(f, t_lo, t_hi, xtol=1e-17 * math.sqrt(edge), rtol=4 * np.finfo(float).eps, maxiter=300)
    return edge - t * t, t * t


def gap_derivative(config: LayerConfig, mode: Mode) -> float:
    """``d omega_n / d(2a)`` by implicit differentiation of the slab equation.

    Uses the symmetry-resolved equation (``L_a`` or ``L_s``) rather than the
    full ``D``: near-degenerate symmetric/antisymmetric pairs make ``D'``
    tiny at each root, while each ``L`` stays well conditioned at its own
    root.
    """
    k, w = mode.k, mode.omega
    a = config.half_gap
    e1 = complex(config.outer.eps(w))
    e2 = complex(config.inner.eps(w))
    mu1, mu2 = config.outer.mu, config.inner.mu
    form = _edge_form(config, k)
    if form is not None and mode.edge_offset is not None:
        edge, coef = form
        gap = mode.edge_offset
        k1 = 1j * math.sqrt(coef * gap * (2.0 * edge - gap))
    else:
        k1 = complex(kz(e1, mu1, w, k))
    k2 = complex(kz(e2, mu2, w, k))
    de1 = complex(config.outer.permittivity.real_axis_derivative(w))
    de2 = complex(config.inner.permittivity.real_axis_derivative(w))
    dk1 = (de1 * w**2 + 2 * e1 * w) * mu1 / (2 * C_LIGHT**2 * k1)
    dk2 = (de2 * w**2 + 2 * e2 * w) * mu2 / (2 * C_LIGHT**2 * k2)
    if mode.pol is Pol.TM:
        w1, w2, dw1, dw2 = e1, e2, de1, de2
    else:
        w1, w2, dw1, dw2 = mu1, mu2, 0.0, 0.0
    x = a * k2
    if mode.symmetry == ANTISYMMETRIC:
        # L_a = i k1 w2 + w1 k2 tan(a k2)
        tn = cmath.tan(x)
        sec2 = 1 + tn * tn
        dL_dw = 1j * (dk1 * w2 + k1 * dw2) + (dw1 * k2 + w1 * dk2) * tn + w1 * k2 * sec2 * a * dk2
        dL_da = w1 * k2 * k2 * sec2
    else:
        # L_s = i k1 w2 - w1 k2 cot(a k2)
        ct = 1 / cmath.tan(x)
        csc2 = 1 + ct * ct
        dL_dw = 1j * (dk1 * w2 + k1 * dw2) - (dw1 * k2 + w1 * dk2) * ct + w1 * k2 * csc2 * a * dk2
        dL_da = w1 * k2 * k2 * csc2
    return (-0.5 * dL_da / dL_dw).real


# -- continuation -------------------------------------------------------------

def _local_root(config, pol, symmetry, k, W_guess, W_edge, wref, width):
    """Root nearest to ``W_guess`` within ``width`` (dimensionless), or None."""
    f = lambda W: _raw(config, pol, symmetry, W * wref, k)
    lo_lim, hi_lim = W_edge * 1e-9, W_edge
    g = min(max(W_guess, lo_lim), hi_lim)
    fg = f(g)
    if fg == 0:
        return g
    d = max(width * 1e-3, 1e-12)
    while d <= width:
        for b in (g - d, g + d):
            if lo_lim <= b <= hi_lim:
                fb = f(b)
                if fb == 0 or fb * fg < 0:
                    x0, x1 = sorted((g, b))
                    return brentq(f, x0, x1, xtol=1e-15 * x1, rtol=4 * np.finfo(float).eps)
        d *= 2.0
    return None


def _inner_s(config, W, k):
    w = W * config.reference_frequency
    e2 = float(np.real(config.inner.eps(w)))
    return config.half_gap**2 * (e2 * config.inner.mu * (w / C_LIGHT) ** 2 - k**2)


def trace_dispersion(config: LayerConfig, pol, seed: Mode, q_grid, max_halvings: int = 30) -> DispersionCurve:
    """Follow one dispersion branch across an increasing ``q`` grid.

    Each step brackets the root next to a linear prediction; when that
    fails, or the root jumps too far, the ``q`` step is halved.  If the
    branch crosses the inner light line (``k2 = 0``) the crossing point is
    refined and stored; if the root leaves the discrete interval the curve
    ends and ``terminated_at`` records the last ``q`` reached.
    """
    pol = Pol.coerce(pol)
    q_grid = np.asarray(q_grid, dtype=float)
    if np.any(np.diff(q_grid) <= 0):
        raise DomainError("q grid must be strictly increasing")
    kref, wref = config.k_ref, config.reference_frequency
    if not math.isclose(seed.q, q_grid[0], rel_tol=1e-12, abs_tol=1e-15):
        raise DomainError("seed mode must sit at the first grid point")
    sym = seed.symmetry
    qs, Ws = [q_grid[0]], [seed.Omega]
    curve = DispersionCurve(pol, sym, np.array([]), np.array([]))

    def solve_at(q, guess, width):
        W_edge = spectrum_bounds(config, q * kref).continuum_start / wref
        return _local_root(config, pol, sym, q * kref, guess, W_edge, wref, width)

    for q_target in q_grid[1:]:
        q_prev = qs[-1]
        halvings = 0
        while q_prev < q_target:
            dq = q_target - q_prev
            while True:
                q_try = q_prev + dq
                if len(qs) >= 2:
                    slope = (Ws[-1] - Ws[-2]) / (qs[-1] - qs[-2])
                else:
                    slope = 1.0
                guess = Ws[-1] + slope * dq
                width = max(abs(slope * dq), 1e-6) * 2.0
                W = solve_at(q_try, guess, width)
                if W is not None:
                    break
                dq *= 0.5
                halvings += 1
                if halvings > max_halvings:
                    curve.terminated_at = q_prev
                    curve.notes.append(f"branch left the discrete interval after q = {q_prev:.6g}")
                    break
            if curve.terminated_at is not None:
                break
            qs.append(q_try)
            Ws.append(W)
            q_prev = q_try
        if curve.terminated_at is not None:
            break

    curve.q = np.array(qs)
    curve.Omega = np.array(Ws)
    s_vals = np.array([_inner_s(config, W, q * kref) for q, W in zip(qs, Ws)])
    flips = np.nonzero(np.sign(s_vals[:-1]) * np.sign(s_vals[1:]) < 0)[0]
    if len(flips):
        i = flips[0]

        def s_on_branch(q):
            guess = np.interp(q, curve.q[i:i + 2], curve.Omega[i:i + 2])
            W = solve_at(q, guess, abs(curve.Omega[i + 1] - curve.Omega[i]) + 1e-6)
            return _inner_s(config, W, q * kref)

        curve.light_line_crossing = brentq(s_on_branch, curve.q[i], curve.q[i + 1], xtol=1e-15, rtol=1e-15)
    # keep only the requested grid points (intermediate steps were internal)
    keep = np.isin(curve.q, q_grid)
    curve.q, curve.Omega = curve.q[keep], curve.Omega[keep]
    return curve


# -- estimates and existence ---------------------------------------------------

def waveguide_mode_estimate(config: LayerConfig, k: float):
    """Approximate waveguide frequencies ``Omega_n^2 = q^2 + n^2 pi^2 / L^2``.

    Valid for a vacuum gap in a plasma bulk; ``n = 1, 2, ...`` with
    ``n < L/pi`` (``n = 0`` sits on the light line and is not counted).
    """
    if config.preset != "IV":
        raise UnsupportedConfigError("waveguide estimate applies to the vacuum-gap-in-plasma preset")
    L = config.L
    q = k / config.k_ref
    n_max = math.ceil(L / math.pi) - 1
    Ws = [math.sqrt(q * q + (n * math.pi / L) ** 2) for n in range(1, n_max + 1)]
    return Ws, len(Ws)


def left_handed_existence(eps: float, mu: float, preset: str = "I", a=None, omega=None, k=None) -> dict:
    """Existence flags for constant-media stacks.

    Preset ``"I"``: plate ``(eps, mu)`` in vacuum.  Waveguide modes need both
    signs equal with ``eps*mu > 1``; surface modes need a left-handed plate,
    and antisymmetric surface modes additionally need
    ``0 < (a omega/c)(eps mu - 1) < 1/|w|``.  Without ``a`` and ``omega`` the
    antisymmetric flags are ``None``.

    Preset ``"II"``: vacuum gap between ``(eps, mu)`` half-spaces, no
    waveguide modes.  With left-handed walls (``w = eps`` for TM, ``mu`` for
    TE) the surface conditions are ``kappa1 = |w| kappa2 coth(a kappa2)``
    (symmetric) and ``kappa1 = |w| kappa2 tanh(a kappa2)`` (antisymmetric).
    Since ``kappa1 < kappa2`` the symmetric branch needs ``|w| < 1`` and
    ``a k > atanh|w|``; the antisymmetric one needs ``a k < atanh(1/|w|)``
    when ``|w| > 1``.  Without ``a`` and ``k`` a flag says whether the
    branch exists for some ``k``.
    """
    out: dict = {}
    lh = eps < 0 and mu < 0 and eps * mu > 1
    rh = eps > 0 and mu > 0 and eps * mu > 1
    if preset == "I":
        out["waveguide"] = rh or lh
        out["surface_symmetric_TM"] = lh
        out["surface_symmetric_TE"] = lh
        if a is None or omega is None:
            out["surface_antisymmetric_TM"] = None
            out["surface_antisymmetric_TE"] = None
        else:
            g = a * omega / C_LIGHT * (eps * mu - 1)
            out["surface_antisymmetric_TM"] = lh and 0 < g < 1 / abs(eps)
            out["surface_antisymmetric_TE"] = lh and 0 < g < 1 / abs(mu)
    elif preset == "II":
        out["waveguide"] = False
        ak = None if a is None or k is None else a * k
        for pol, w in (("TM", abs(eps)), ("TE", abs(mu))):
            sym = lh and w < 1
            anti = lh
            if ak is not None:
                sym = sym and ak > math.atanh(w)
                anti = anti and (w <= 1 or ak < math.atanh(1 / w))
            out[f"surface_symmetric_{pol}"] = sym
            out[f"surface_antisymmetric_{pol}"] = anti
    else:
        raise DomainError("preset must be 'I' or 'II'")
    return out


# -- field profiles -------------------------------------------------------------

def field_profile(mode: Mode, config: LayerConfig, z_grid) -> FieldProfile:
    """Scalar potential (Phi for TM, Psi for TE) of a discrete mode.

    Inside the slab the profile is ``B sin``/``B cos`` (hyperbolic for
    surface modes), outside ``A exp(-kappa1 (|z| - a))`` with the parity of
    the mode.  ``A`` follows from continuity of ``w Phi``; the mismatch of
    ``Phi'`` then measures how well the mode satisfies the equations.
    """
    if mode.residual >= 1e-9:
        raise DomainError("mode residual too large for a profile")
    a, k, w = config.half_gap, mode.k, mode.omega
    e1 = float(np.real(config.outer.eps(w)))
    e2 = float(np.real(config.inner.eps(w)))
    w1, w2 = (e1, e2) if mode.pol is Pol.TM else (config.outer.mu, config.inner.mu)
    kap1 = math.sqrt(k * k - e1 * config.outer.mu * (w / C_LIGHT) ** 2)
    k2sq = e2 * config.inner.mu * (w / C_LIGHT) ** 2 - k * k
    if abs(k2sq) * a * a < 1e-14:
        raise DegenerateProfileError("mode sits on the inner light line; profile is degenerate")
    k2 = math.sqrt(abs(k2sq))
    odd = mode.symmetry == SYMMETRIC
    if k2sq > 0:
        u = (lambda z: np.sin(k2 * z)) if odd else (lambda z: np.cos(k2 * z))
        du = (lambda z: k2 * np.cos(k2 * z)) if odd else (lambda z: -k2 * np.sin(k2 * z))
    else:
        u = (lambda z: np.sinh(k2 * z)) if odd else (lambda z: np.cosh(k2 * z))
        du = (lambda z: k2 * np.cosh(k2 * z)) if odd else (lambda z: k2 * np.sinh(k2 * z))
    B = 1.0
    A = w2 * B * float(u(a)) / w1
    # derivative continuity at z = +a; z = -a follows by parity
    lhs, rhs = -kap1 * A, B * float(du(a))
    resid = abs(lhs - rhs) / (abs(lhs) + abs(rhs))

    z = np.asarray(z_grid, dtype=float)
    sgn = np.sign(z) if odd else np.ones_like(z)
    out = np.where(np.abs(z) <= a, B * u(z), sgn * A * np.exp(-kap1 * (np.abs(z) - a)))
    peak = np.max(np.abs(out)) if out.size else 1.0
    if peak > 0:
        out, A, B = out / peak, A / peak, B / peak
    return FieldProfile(z, out, A, B, kap1, resid)
