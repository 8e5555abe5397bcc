"""Force per in-plane wavenumber from the real-frequency spectrum.

For one polarization and one ``k`` the Casimir force can be computed in two
independent ways:

* on the imaginary axis, ``F_k = -(hbar/pi) int dzeta kappa2 X/(1 - X)``;
* on the real axis, by summing over the spectrum::

      F_k = -(hbar/2) sum_n d omega_n/d(2a)            discrete modes
            -(hbar/2pi) int_band  k2 d omega             guided band
            -(hbar/2pi) int_edge^inf Im d ln D/d(2a) d omega   continuum

  The band term covers frequencies where the inner layer propagates but the
  outer one does not (``|r12| = 1`` there, so ``d arg D/d(2a) = k2``
  between the modes).  Below the inner light line ``D`` is real and does
  not contribute.  In the continuum ``d ln D/d(2a) = -2 i k2 X/(1 - X)`` with
  ``X = r12^2 exp(4 i a k2)``.

Both normalizations satisfy ``F = int k dk/(2pi) sum_sigma F_k``.  The two
routes are linked by rotating ``int ln D`` from the imaginary to the real
frequency axis; their agreement is a check on the completeness of the mode
list and on the continuum quadrature.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT, hbar as HBAR
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .dielectric import Constant, Plasma
from .errors import DomainError, QuadratureError, ResolutionError, TailError
from .lifshitz import _Layers
from .scattering import LayerConfig, Pol, RealAxis, dispersion_derivative, dispersion_function, kz
from .spectrum import _zero_frequency, find_modes, gap_derivative, spectrum_bounds

__all__ = [
    "SpectralShiftSample",
    "PerKForce",
    "EquivalenceReport",
    "spectral_shift_density",
    "continuum_integrand",
    "continuum_segments",
    "wynn_epsilon",
    "per_k_force_mode_sum",
    "per_k_force_lifshitz",
    "per_k_ideal_mirror_series",
    "equivalence_report",
]

N_SEGMENTS = 64
_QUAD_RTOL = 5e-14


@dataclass(frozen=True)
class SpectralShiftSample:
    """Phase ``delta = -arg D`` (rad) and density ``(1/pi) d delta/d omega`` (s)."""

    omega: float
    delta: float
    density: float


@dataclass
class PerKForce:
    """Force per unit ``k dk/(2 pi)`` measure (N), split by spectral region."""

    k: float
    pol: Pol
    discrete: float = math.nan
    band: float = math.nan
    continuum: float = math.nan
    mode_sum: float = math.nan
    lifshitz: float = math.nan
    modes: list = field(default_factory=list)

    @property
    def relative_difference(self) -> float:
        if self.lifshitz == 0:
            return 0.0 if self.mode_sum == 0 else math.inf
        return abs(self.mode_sum - self.lifshitz) / abs(self.lifshitz)


@dataclass
class EquivalenceReport:
    rows: list
    tol: float
    passed: bool
    max_relative_difference: float
    message: str = ""


# -- pointwise quantities on the real axis -----------------------------------------

def _media(config: LayerConfig, pol: Pol, omega: float, k: float):
    e1 = complex(config.outer.eps(omega))
    e2 = complex(config.inner.eps(omega))
    k1 = complex(kz(e1, config.outer.mu, omega, k))
    k2 = complex(kz(e2, config.inner.mu, omega, k))
    w1 = e1 if pol is Pol.TM else config.outer.mu
    w2 = e2 if pol is Pol.TM else config.inner.mu
    return e1, e2, k1, k2, w1, w2


def continuum_integrand(config: LayerConfig, pol, omega: float, k: float) -> float:
    """``Im d ln D/d(2a)`` at real ``omega`` (1/m)."""
    pol = Pol.coerce(pol)
    _, _, k1, k2, w1, w2 = _media(config, pol, omega, k)
    r12 = (w2 * k1 - w1 * k2) / (w2 * k1 + w1 * k2)
    X = r12 * r12 * cmath.exp(4j * config.half_gap * k2)
    return (-2j * k2 * X / (1.0 - X)).imag


def spectral_shift_density(config: LayerConfig, pol, omega, k: float, max_depth: int = 40):
    """Scattering phase ``delta = -arg D`` and its density above the continuum edge.

    The phase is unwound along increasing frequency, starting from its
    principal value at the continuum edge.  Steps are bisected until the
    phase increment stays below pi/2; failing that a ResolutionError is
    raised.  Accepts a scalar or an array of frequencies.
    """
    pol = Pol.coerce(pol)
    omegas = np.atleast_1d(np.asarray(omega, dtype=float))
    edge = spectrum_bounds(config, k).continuum_start
    if np.any(omegas <= edge):
        raise DomainError("frequencies must lie above the continuum edge")
    D = lambda w: dispersion_function(pol, config, RealAxis(w), k)
    # coarse step: a sixteenth of the e^{4 i a k2} period at the top frequency
    top = float(omegas.max())
    k2_top = abs(complex(kz(complex(config.inner.eps(top)), config.inner.mu, top, k)))
    dk2_dw = (k2_top + 1.0 / config.half_gap) / max(top - edge, 1e-300)
    step = (math.pi / (8.0 * config.half_gap)) / dk2_dw

    w_prev = edge * (1 + 1e-12) if edge > 0 else 1e-9 * top
    D_prev = D(w_prev)
    phase = -cmath.phase(D_prev)
    order = np.argsort(omegas)
    out = [None] * len(omegas)

    def advance(w0, D0, w1, depth):
        D1 = D(w1)
        inc = cmath.phase(D1 / D0)
        if abs(inc) <= math.pi / 2:
            return -inc, D1
        if depth >= max_depth:
            raise ResolutionError(
                f"phase of D not resolved between {w0:.6g} and {w1:.6g} rad/s"
            )
        wm = 0.5 * (w0 + w1)
        d1, Dm = advance(w0, D0, wm, depth + 1)
        d2, D1 = advance(wm, Dm, w1, depth + 1)
        return d1 + d2, D1

    for idx in order:
        target = float(omegas[idx])
        while w_prev < target:
            w_next = min(w_prev + step, target)
            inc, D_prev = advance(w_prev, D_prev, w_next, 0)
            phase += inc
            w_prev = w_next
        Dv, dD = dispersion_derivative(pol, config, target, k)
        density = -(dD / Dv).imag / math.pi
        out[idx] = SpectralShiftSample(target, phase, density)
    return out[0] if np.ndim(omega) == 0 else out


# -- continuum quadrature --------------------------------------------------------------

def _node_frequency(config: LayerConfig, k: float, k2_target: float) -> float:
    """Frequency where the inner normal wavenumber equals ``k2_target``."""
    inner = config.inner
    model = inner.permittivity
    if isinstance(model, Constant):
        return C_LIGHT * math.hypot(k, k2_target) / math.sqrt(model.eps * inner.mu)
    if isinstance(model, Plasma):
        return math.sqrt(model.omega_p**2 + C_LIGHT**2 * (k * k + k2_target**2) / inner.mu)
    f = lambda w: float(np.real(inner.eps(w))) * inner.mu * (w / C_LIGHT) ** 2 - k * k - k2_target**2
    lo = _zero_frequency(inner, k)
    hi = 2.0 * lo + C_LIGHT * k2_target
    while f(hi) < 0:
        hi *= 2.0
    return brentq(f, lo, hi, xtol=1e-15 * hi)


def _quad_sqrt_left(func, lo, hi):
    """``int_lo^hi func`` with ``omega = lo + t^2`` (square-root branch point at ``lo``)."""
    g = lambda t: 2.0 * t * func(lo + t * t)
    return _q(g, 0.0, math.sqrt(hi - lo))


def _quad_sqrt_right(func, lo, hi):
    g = lambda t: 2.0 * t * func(hi - t * t)
    return _q(g, 0.0, math.sqrt(hi - lo))


def _q(g, lo, hi):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(g, lo, hi, epsabs=0.0, epsrel=_QUAD_RTOL, limit=500)
        except IntegrationWarning:
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(g, lo, hi, epsabs=0.0, epsrel=1e-9, limit=1000)
            if err > 1e-7 * abs(val) and err > 1e-300:
                raise QuadratureError(f"segment [{lo:.6g}, {hi:.6g}] did not converge", partial=val)
    return val


def _branch_segments(func, a, b):
    """Integral over ``(a, b)`` with square-root branch points at both ends."""
    mid = 0.5 * (a + b)
    return _quad_sqrt_left(func, a, mid) + _quad_sqrt_right(func, mid, b)


def continuum_segments(config: LayerConfig, pol, k: float, n_segments: int = N_SEGMENTS, skip: int = 0):
    """Head integral and between-zeros segment integrals of the continuum integrand.

    The head covers the continuum edge up to the first zero of
    ``cos(4 a k2)`` above every branch point; the segments then run between
    consecutive zeros, where the integrand (to leading order
    ``-2 k2 r12^2 cos(4 a k2)``) keeps one sign.  With ``skip > 0`` the
    first ``skip`` segments are omitted and the head is returned as 0.
    """
    pol = Pol.coerce(pol)
    a = config.half_gap
    edge = spectrum_bounds(config, k).continuum_start
    w_in = _zero_frequency(config.inner, k)
    g = lambda w: continuum_integrand(config, pol, w, k)
    start = max(edge, w_in)
    k2_start = abs(complex(kz(complex(config.inner.eps(start)), config.inner.mu, start, k)))
    m0 = math.floor(4.0 * a * k2_start / math.pi - 0.5) + 1 + skip
    nodes = [
        _node_frequency(config, k, (m + 0.5) * math.pi / (4.0 * a))
        for m in range(m0, m0 + n_segments + 1)
    ]
    head = 0.0
    if skip == 0:
        if w_in > edge:
            head += _branch_segments(g, edge, w_in)
        head += _quad_sqrt_left(g, start, nodes[0])
    segs = np.array([_q(g, nodes[i], nodes[i + 1]) for i in range(n_segments)])
    return head, segs, np.array(nodes)


def wynn_epsilon(partial_sums) -> tuple[float, float]:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the limit estimate and the difference between the last two
    even-column estimates as an error proxy.
    """
    s = [float(x) for x in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], math.inf
    prev = [0.0] * (n + 1)
    cur = s[:]
    estimates = [s[-1]]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0:
                nxt.append(math.inf)
            else:
                nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur and math.isfinite(cur[-1]):
            estimates.append(cur[-1])
    if len(estimates) < 2:
        return estimates[-1], math.inf
    # the deepest columns use few terms and get noisy; pick the most stable pair
    diffs = [abs(estimates[i + 1] - estimates[i]) for i in range(len(estimates) - 1)]
    j = int(np.argmin(diffs))
    return estimates[j + 1], diffs[j]


def _continuum_part(config: LayerConfig, pol: Pol, k: float, tol: float, max_segments: int = 1024):
    """Accelerated continuum integral; the partition doubles until it settles.

    Convergence means two successive accelerated estimates agree to ``tol``
    relative, or to a roundoff floor set by the largest partial sum (the
    segments can cancel to many digits).
    """
    head, segs, _ = continuum_segments(config, pol, k, N_SEGMENTS)
    previous = None
    while True:
        partial = head + np.cumsum(segs)
        limit, _ = wynn_epsilon(partial)
        floor = 1e-13 * float(np.max(np.abs(partial)))
        if previous is not None and math.isfinite(limit):
            if abs(limit - previous) <= tol * abs(limit) + floor:
                return limit
        if len(segs) >= max_segments:
            seen = "" if previous is None else f" (estimates {previous:.6g} and {limit:.6g})"
            raise TailError(
                f"continuum tail did not settle after {len(segs)} intervals{seen}",
                partial=partial,
            )
        previous = limit
        _, more, _ = continuum_segments(config, pol, k, len(segs), skip=len(segs))
        segs = np.concatenate([segs, more])


# -- the two routes -------------------------------------------------------------------------

def _band_part(config: LayerConfig, k: float) -> float:
    """``int k2 d omega`` over the guided band (inner propagating, outer evanescent)."""
    edge = spectrum_bounds(config, k).continuum_start
    w_in = _zero_frequency(config.inner, k)
    if not w_in < edge:
        return 0.0
    model = config.inner.permittivity
    if isinstance(model, Constant):
        # int sqrt(n^2 w^2/c^2 - k^2) dw in closed form, from the light line up
        n = math.sqrt(model.eps * config.inner.mu)
        x1 = n * edge / C_LIGHT
        s1 = math.sqrt(x1 * x1 - k * k)
        return C_LIGHT / (2.0 * n) * (x1 * s1 - k * k * math.acosh(x1 / k))
    f = lambda w: complex(kz(complex(config.inner.eps(w)), config.inner.mu, w, k)).real
    return _branch_segments(f, w_in, edge)


def per_k_force_mode_sum(config: LayerConfig, pol, k: float, tail_tol: float = 1e-6) -> PerKForce:
    """Real-frequency route: discrete modes, guided band and continuum."""
    pol = Pol.coerce(pol)
    if k <= 0:
        raise DomainError("k must be positive")
    if config.outer.is_perfect:
        raise DomainError("use a finite-permittivity surrogate for the ideal mirror")
    if not math.isfinite(config.half_gap):
        return PerKForce(k, pol, 0.0, 0.0, 0.0, 0.0)
    modes = find_modes(config, pol, k)
    discrete = -0.5 * HBAR * sum(gap_derivative(config, m) for m in modes)
    band = -HBAR / (2 * math.pi) * _band_part(config, k)
    cont = -HBAR / (2 * math.pi) * _continuum_part(config, pol, k, tail_tol)
    return PerKForce(k, pol, discrete, band, cont, discrete + band + cont, modes=modes)


def per_k_force_lifshitz(config: LayerConfig, pol, k: float, rtol: float = 1e-12) -> float:
    """``-(hbar/pi) int_0^inf dzeta kappa2 X/(1 - X)`` (N per unit ``k dk/2pi``)."""
    pol = Pol.coerce(pol)
    if k < 0:
        raise DomainError("k must be non-negative")
    if not math.isfinite(config.half_gap):
        return 0.0
    a = config.half_gap
    four_a = 4.0 * a
    scale = C_LIGHT / (2.0 * a)

    def f(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        w = 1.0 - u
        zeta = scale * u / w
        X, one_minus_x, kap2 = _Layers(config, zeta).x_terms(pol, k, four_a)
        return kap2 * X / one_minus_x * scale / (w * w)

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(f, 0.0, 1.0, epsabs=0.0, epsrel=rtol, limit=500)
        except IntegrationWarning as exc:
            raise QuadratureError(f"per-k Lifshitz integral did not converge: {exc}", partial=None) from None
    return -HBAR / math.pi * val


def per_k_ideal_mirror_series(half_gap: float, k: float, terms: int = 200) -> float:
    """Ideal-mirror per-k force from the geometric series of ``1/(e^y - 1)``.

    ``int_0^inf kappa e^{-m y} d zeta`` with ``kappa = sqrt(zeta^2/c^2 + k^2)``
    and ``y = 4 a kappa`` equals ``c k^2 [K0(x) + K2(x)]/2`` at ``x = 4 m a k``.
    """
    from scipy.special import kv

    total = 0.0
    for m in range(1, terms + 1):
        x = 4.0 * m * half_gap * k
        term = C_LIGHT * k * k * 0.5 * (kv(0, x) + kv(2, x))
        total += term
        if term < 1e-17 * abs(total):
            break
    return -HBAR / math.pi * total


def equivalence_report(config: LayerConfig, pol, k_grid, tol: float) -> EquivalenceReport:
    """Compare both routes on a grid of in-plane wavenumbers."""
    pol = Pol.coerce(pol)
    if not tol > 0:
        return EquivalenceReport([], tol, False, math.inf, "tolerance must be positive")
    rows = []
    for k in k_grid:
        row = per_k_force_mode_sum(config, pol, float(k))
        row.lifshitz = per_k_force_lifshitz(config, pol, float(k))
        rows.append(row)
    worst = max((r.relative_difference for r in rows), default=0.0)
    return EquivalenceReport(rows, tol, worst <= tol, worst)
