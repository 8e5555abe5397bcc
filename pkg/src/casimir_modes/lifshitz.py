"""Casimir energy and force per unit area from imaginary-frequency integrals.

Energy::

    E = (hbar/2pi) sum_sigma int k dk/(2pi) int_0^inf dzeta ln D_sigma(i zeta, k)

Force (attraction negative)::

    F = -(hbar/2pi^2) sum_sigma int k dk int_0^inf dzeta kappa2 X/(1 - X)

with ``D = 1 - X`` and ``X = r_sigma^2 exp(-4 a kappa2)``.  The force is also
available in the ``p = c kappa2/zeta`` variable for a vacuum gap, which is
an independent code path used as a cross-check.

Both semi-infinite axes are mapped to (0, 1) by ``x = s u/(1-u)`` with the
scale ``s`` set by the gap, and integrated with nested adaptive QUADPACK.
The inner (wavenumber) integral runs at fixed ``zeta``, so the permittivity
is evaluated once per outer node.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from scipy.constants import c as C_LIGHT, hbar as HBAR
from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError
from .scattering import ImagAxis, LayerConfig, Pol, dispersion_function

__all__ = [
    "QuadratureSpec",
    "ForceResult",
    "log_dispersion_integrand",
    "energy_per_area",
    "force_per_area",
    "force_p_form",
    "ideal_mirror_energy",
    "ideal_mirror_force",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for the nested quadrature.

    ``transform`` names the map of the semi-infinite axes onto (0, 1);
    only ``"rational"`` (``x = s u/(1 - u)``) is implemented.
    """

    rtol: float = 1e-8
    atol: float = 1e-30
    max_evaluations: int = 5_000_000
    transform: str = "rational"
    limit: int = 200

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_evaluations < 1000:
            raise DomainError("max_evaluations must be at least 1000")
        if self.transform != "rational":
            raise DomainError(f"unknown transform {self.transform!r}")


@dataclass
class ForceResult:
    """Energy (J/m^2) or force (Pa) per unit area; negative means attraction."""

    value: float
    error: float
    evaluations: int
    by_polarization: dict = field(default_factory=dict)
    quantity: str = "force"

    @property
    def units(self) -> str:
        return "Pa" if self.quantity == "force" else "J/m^2"


def ideal_mirror_energy(d: float) -> float:
    return -math.pi**2 * HBAR * C_LIGHT / (720.0 * d**3)


def ideal_mirror_force(d: float) -> float:
    return -math.pi**2 * HBAR * C_LIGHT / (240.0 * d**4)


# -- pointwise integrands -------------------------------------------------------

def log_dispersion_integrand(config: LayerConfig, pol, zeta: float, k: float) -> float:
    """``ln D_sigma(i zeta, k) = ln(1 - r^2 exp(-4 a kappa2))``."""
    if not zeta > 0 or k < 0:
        raise DomainError("need zeta > 0 and k >= 0")
    return math.log(float(dispersion_function(pol, config, ImagAxis(zeta), k)))


class _Layers:
    """Scalar imaginary-axis quantities at one ``zeta`` (fast path for quadrature)."""

    __slots__ = ("e1", "e2", "mu1", "mu2", "ideal", "z2")

    def __init__(self, config: LayerConfig, zeta: float):
        self.ideal = config.outer.is_perfect
        self.mu1, self.mu2 = config.outer.mu, config.inner.mu
        self.e2 = float(config.inner.eps_imag(zeta))
        self.e1 = math.inf if self.ideal else float(config.outer.eps_imag(zeta))
        self.z2 = (zeta / C_LIGHT) ** 2

    def x_terms(self, pol: Pol, k: float, four_a: float):
        """``(X, 1 - X, kappa2)``, with ``1 - X`` free of cancellation."""
        kap2 = math.sqrt(self.e2 * self.mu2 * self.z2 + k * k)
        decay = math.exp(-four_a * kap2)
        if self.ideal:
            return decay, -math.expm1(-four_a * kap2), kap2
        kap1 = math.sqrt(self.e1 * self.mu1 * self.z2 + k * k)
        if pol is Pol.TM:
            A, B = self.e1 * kap2, self.e2 * kap1
        else:
            A, B = self.mu1 * kap2, self.mu2 * kap1
        s = A + B
        r2 = ((A - B) / s) ** 2
        one_minus_r2 = 4.0 * A * B / (s * s)
        X = r2 * decay
        return X, one_minus_r2 - r2 * math.expm1(-four_a * kap2), kap2


# -- nested quadrature driver ----------------------------------------------------

class _Budget:
    def __init__(self, spec: QuadratureSpec):
        self.spec = spec
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.spec.max_evaluations:
            raise _BudgetExceeded


class _BudgetExceeded(Exception):
    pass


def _rational(scale: float):
    """Map ``u in (0,1)`` to ``x in (0, inf)``; returns ``(x, dx/du)``."""

    def f(u):
        w = 1.0 - u
        return scale * u / w, scale / (w * w)

    return f


def _quad(func, rtol: float, limit: int, strict: bool = True):
    """QUADPACK on (0, 1).  Non-strict calls tolerate the roundoff warning."""
    with warnings.catch_warnings():
        warnings.simplefilter("error" if strict else "ignore", IntegrationWarning)
        val, err = quad(func, 0.0, 1.0, epsabs=0.0, epsrel=rtol, limit=limit)
    return val, err


def _inner_rtol(spec: QuadratureSpec) -> float:
    # the inner integral must be much smoother than the outer tolerance,
    # otherwise its adaptive noise stalls the outer subdivision
    return max(spec.rtol * 1e-3, 1.2e-14)


def _nested(config: LayerConfig, pol: Pol, inner_integrand, spec: QuadratureSpec, prefactor: float):
    """``prefactor * int dzeta int dk inner_integrand(layers, k)`` over (0, inf)^2."""
    a = config.half_gap
    zmap = _rational(C_LIGHT / (2.0 * a))
    kmap = _rational(1.0 / (2.0 * a))
    budget = _Budget(spec)
    inner_err = [0.0]

    def outer(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        zeta, jz = zmap(u)
        layers = _Layers(config, zeta)

        def inner(v):
            if v <= 0.0 or v >= 1.0:
                return 0.0
            budget.tick()
            k, jk = kmap(v)
            return inner_integrand(layers, k) * jk

        val, err = _quad(inner, _inner_rtol(spec), spec.limit, strict=False)
        # the u-interval has unit length, so the largest weighted inner error bounds its total
        inner_err[0] = max(inner_err[0], err * jz)
        return val * jz

    try:
        val, err = _quad(outer, spec.rtol, spec.limit)
    except _BudgetExceeded:
        raise QuadratureError(
            f"evaluation budget of {spec.max_evaluations} exhausted", partial=None
        ) from None
    except IntegrationWarning as exc:
        raise QuadratureError(f"quadrature did not converge: {exc}", partial=None) from None
    value = prefactor * val
    error = abs(prefactor) * (err + inner_err[0])
    return value, error, budget.count


def _combine(parts: dict, quantity: str, spec: QuadratureSpec) -> ForceResult:
    total = sum(v for v, _, _ in parts.values())
    error = sum(e for _, e, _ in parts.values())
    evals = sum(n for _, _, n in parts.values())
    res = ForceResult(total, error, evals, {p: v for p, (v, _, _) in parts.items()}, quantity)
    if error > max(spec.atol, 10 * spec.rtol * abs(total)):
        raise QuadratureError(
            f"error estimate {error:.3g} exceeds tolerance", partial=res
        )
    return res


def _trivial(config: LayerConfig, quantity: str):
    """Zero result for an infinitely wide gap or an index-matched stack."""
    same = (
        config.outer == config.inner
        or not math.isfinite(config.half_gap)
    )
    if same:
        return ForceResult(0.0, 0.0, 0, {"TE": 0.0, "TM": 0.0}, quantity)
    return None


def energy_per_area(config: LayerConfig, quad_spec: QuadratureSpec | None = None) -> ForceResult:
    """Casimir energy per unit area (J/m^2) of the gap ``2a``.

    Example
    -------
    >>> r = energy_per_area(LayerConfig.ideal_mirror(0.5e-6))
    >>> round(r.value / ideal_mirror_energy(1e-6), 8)
    1.0
    """
    spec = quad_spec or QuadratureSpec()
    trivial = _trivial(config, "energy")
    if trivial is not None:
        return trivial
    four_a = 4.0 * config.half_gap
    parts = {}
    for pol in (Pol.TE, Pol.TM):

        def integrand(layers, k, pol=pol):
            X, one_minus_x, _ = layers.x_terms(pol, k, four_a)
            # log1p keeps ln(1 - X) accurate once X is tiny
            return k * (math.log1p(-X) if X < 0.5 else math.log(one_minus_x))

        parts[pol.value] = _nested(config, pol, integrand, spec, HBAR / (4.0 * math.pi**2))
    return _combine(parts, "energy", spec)


def force_per_area(config: LayerConfig, quad_spec: QuadratureSpec | None = None) -> ForceResult:
    """Casimir pressure (Pa), ``F = -dE/d(2a)``."""
    spec = quad_spec or QuadratureSpec()
    trivial = _trivial(config, "force")
    if trivial is not None:
        return trivial
    four_a = 4.0 * config.half_gap
    parts = {}
    for pol in (Pol.TE, Pol.TM):

        def integrand(layers, k, pol=pol):
            X, one_minus_x, kap2 = layers.x_terms(pol, k, four_a)
            return k * kap2 * X / one_minus_x

        parts[pol.value] = _nested(config, pol, integrand, spec, -HBAR / (2.0 * math.pi**2))
    return _combine(parts, "force", spec)


def force_p_form(config: LayerConfig, quad_spec: QuadratureSpec | None = None) -> ForceResult:
    """Casimir pressure for a vacuum gap using ``p = c kappa2/zeta``.

    ``F = -(hbar/(2 pi^2 c^3)) int zeta^3 dzeta int_1^inf p^2 dp
    sum_sigma [r_sigma^-2 exp(4 a p zeta/c) - 1]^-1`` with
    ``s = sqrt(eps mu - 1 + p^2)``, ``r_TE^-2 = ((s + mu p)/(s - mu p))^2`` and
    ``r_TM^-2 = ((s + eps p)/(s - eps p))^2``.
    """
    inner = config.inner
    if not (inner.mu == 1.0 and float(inner.eps_imag(1.0)) == 1.0 and float(inner.eps_imag(1e16)) == 1.0):
        raise DomainError("the p-form needs a vacuum gap")
    spec = quad_spec or QuadratureSpec()
    trivial = _trivial(config, "force")
    if trivial is not None:
        return trivial
    a = config.half_gap
    zmap = _rational(C_LIGHT / (2.0 * a))
    ideal = config.outer.is_perfect
    mu = config.outer.mu
    parts = {}
    for pol in (Pol.TE, Pol.TM):
        budget = _Budget(spec)
        inner_err = [0.0]

        def outer(u, pol=pol, budget=budget, inner_err=inner_err):
            if u <= 0.0 or u >= 1.0:
                return 0.0
            zeta, jz = zmap(u)
            y_per_p = 4.0 * a * zeta / C_LIGHT
            eps = math.inf if ideal else float(config.outer.eps_imag(zeta))
            w = eps if pol is Pol.TM else mu
            pmap = _rational(1.0 / y_per_p)

            def inner_fn(v):
                if v <= 0.0 or v >= 1.0:
                    return 0.0
                budget.tick()
                dp, jp = pmap(v)
                p = 1.0 + dp
                y = y_per_p * p
                if ideal:
                    bracket = -1.0 / math.expm1(-y) - 1.0  # 1/(e^y - 1)
                else:
                    s = math.sqrt(eps * mu - 1.0 + p * p)
                    A, B = w * p, s
                    # r^-2 e^y - 1 = ((A+B)^2 e^y - (A-B)^2)/(A-B)^2
                    num = (A - B) ** 2
                    den = 4.0 * A * B - (A - B) ** 2 * math.expm1(-y)
                    bracket = num * math.exp(-y) / den
                return p * p * bracket * jp

            val, err = _quad(inner_fn, _inner_rtol(spec), spec.limit, strict=False)
            inner_err[0] = max(inner_err[0], zeta**3 * err * jz)
            return zeta**3 * val * jz

        try:
            val, err = _quad(outer, spec.rtol, spec.limit)
        except _BudgetExceeded:
            raise QuadratureError("evaluation budget exhausted", partial=None) from None
        except IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}", partial=None) from None
        pref = -HBAR / (2.0 * math.pi**2 * C_LIGHT**3)
        value = pref * val
        parts[pol.value] = (value, abs(pref) * (err + inner_err[0]), budget.count)
    return _combine(parts, "force", spec)
