"""Normal wavenumbers, Fresnel amplitudes and the 1-D scattering matrix.

Geometry: a symmetric stack ``outer | inner | outer`` with interfaces at
``z = -a`` and ``z = +a``.  ``k`` is the in-plane wavenumber (rad/m) and the
time dependence is ``exp(-i omega t)``.

On the real axis the normal wavenumber follows the outgoing-wave branch:
real and non-negative when propagating, ``+i|k_z|`` when evanescent.  On the
imaginary axis ``omega = i zeta`` the decay constant
``kappa = sqrt(eps(i zeta) mu zeta^2 / c^2 + k^2)`` is used instead.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT

from .dielectric import (
    VACUUM,
    Constant,
    Drude,
    Medium,
    PerfectConductor,
    Plasma,
)
from .errors import DomainError, PoleError

__all__ = [
    "Pol",
    "RealAxis",
    "ImagAxis",
    "LayerWavenumber",
    "InterfaceAmplitudes",
    "SMatrixPoint",
    "LayerConfig",
    "POLE_WINDOW",
    "layer_wavenumber",
    "fresnel_single",
    "two_interface_amplitudes",
    "dispersion_function",
    "s_matrix",
    "kz",
    "kappa",
    "reflection_real",
    "reflection_imag",
]

POLE_WINDOW = 1e-9


class Pol(str, enum.Enum):
    TE = "TE"
    TM = "TM"

    @classmethod
    def coerce(cls, value) -> "Pol":
        return value if isinstance(value, cls) else cls(str(value).upper())


@dataclass(frozen=True)
class RealAxis:
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("real frequency must be positive")


@dataclass(frozen=True)
class ImagAxis:
    zeta: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise DomainError("imaginary frequency must be positive")


@dataclass(frozen=True)
class LayerWavenumber:
    value: complex
    branch: str  # "propagating" | "evanescent" | "imaginary-axis"


@dataclass(frozen=True)
class InterfaceAmplitudes:
    r_l: complex
    t_l: complex
    r_r: complex
    t_r: complex
    pol: Pol


@dataclass(frozen=True)
class SMatrixPoint:
    t: complex
    r: complex
    delta: float
    theta: float
    unitarity_defect: float

    @property
    def det(self) -> complex:
        return self.t**2 - self.r**2


@dataclass(frozen=True)
class LayerConfig:
    """Symmetric three-layer stack ``outer | inner | outer``.

    ``half_gap`` is ``a`` in metres (``math.inf`` for a single interface).
    ``omega_ref`` sets the dimensionless units ``Omega = omega/omega_ref``,
    ``q = k c/omega_ref``, ``L = 2 a omega_ref/c``; it defaults to the plasma
    frequency of whichever layer has one, otherwise ``c/(2a)``.
    """

    outer: Medium
    inner: Medium
    half_gap: float
    preset: str = "custom"
    omega_ref: float | None = None

    def __post_init__(self):
        if not self.half_gap > 0:
            raise DomainError("half gap must be positive")

    # -- presets ----------------------------------------------------------
    @staticmethod
    def _gap(omega_p, half_gap, L):
        if (half_gap is None) == (L is None):
            raise DomainError("give exactly one of half_gap or L")
        return half_gap if L is None else L * C_LIGHT / (2.0 * omega_p)

    @classmethod
    def preset_I(cls, eps2: float, mu2: float, half_gap: float, omega_ref=None):
        """Non-dispersive plate in vacuum."""
        return cls(VACUUM, Medium(Constant(eps2), mu2), half_gap, "I", omega_ref)

    @classmethod
    def preset_II(cls, eps1: float, mu1: float, half_gap: float, omega_ref=None):
        """Vacuum gap between two non-dispersive half-spaces."""
        return cls(Medium(Constant(eps1), mu1), VACUUM, half_gap, "II", omega_ref)

    @classmethod
    def preset_III(cls, omega_p: float, half_gap=None, L=None):
        """Plasma-model slab in vacuum."""
        a = cls._gap(omega_p, half_gap, L)
        return cls(VACUUM, Medium(Plasma(omega_p)), a, "III", omega_p)

    @classmethod
    def preset_IV(cls, omega_p: float, half_gap=None, L=None):
        """Vacuum gap in a plasma-model bulk."""
        a = cls._gap(omega_p, half_gap, L)
        return cls(Medium(Plasma(omega_p)), VACUUM, a, "IV", omega_p)

    @classmethod
    def single_interface(cls, omega_p: float):
        """Plasma half-space against vacuum (the gap is pushed to infinity)."""
        return cls(Medium(Plasma(omega_p)), VACUUM, math.inf, "single-interface", omega_p)

    @classmethod
    def ideal_mirror(cls, half_gap: float):
        """Two perfect mirrors separated by a vacuum gap ``2 a``."""
        return cls(Medium(PerfectConductor()), VACUUM, half_gap, "ideal-mirror")

    @classmethod
    def vacuum_gap(cls, outer: Medium, half_gap: float, omega_ref=None):
        return cls(outer, VACUUM, half_gap, "custom", omega_ref)

    # -- derived ----------------------------------------------------------
    @property
    def reference_frequency(self) -> float:
        if self.omega_ref is not None:
            return self.omega_ref
        for m in (self.outer, self.inner):
            if isinstance(m.permittivity, (Plasma, Drude)):
                return m.permittivity.omega_p
        return C_LIGHT / (2.0 * self.half_gap)

    @property
    def k_ref(self) -> float:
        return self.reference_frequency / C_LIGHT

    @property
    def L(self) -> float:
        return 2.0 * self.half_gap * self.k_ref

    @property
    def separation(self) -> float:
        return 2.0 * self.half_gap

    def with_half_gap(self, half_gap: float) -> "LayerConfig":
        return LayerConfig(self.outer, self.inner, half_gap, self.preset, self.omega_ref)


# -- wavenumbers ------------------------------------------------------------

def kz(eps, mu, omega, k):
    """Normal wavenumber on the real axis with the outgoing-wave branch.

    Works on scalars and numpy arrays; the result has ``Im >= 0`` and is
    real non-negative when the radicand is positive.
    """
    rad = np.asarray(eps * mu * (np.asarray(omega) / C_LIGHT) ** 2 - np.asarray(k) ** 2, dtype=complex)
    w = np.sqrt(rad)
    w = np.where(w.imag < 0, -w, w)
    # purely negative real radicand: force +i|.| (sign of zero imag is arbitrary)
    w = np.where((rad.imag == 0) & (rad.real < 0), 1j * np.sqrt(np.abs(rad.real)), w)
    return w[()]


def kappa(eps_i, mu, zeta, k):
    """Decay constant ``sqrt(eps(i zeta) mu zeta^2/c^2 + k^2)`` on the imaginary axis."""
    return np.sqrt(eps_i * mu * (np.asarray(zeta) / C_LIGHT) ** 2 + np.asarray(k) ** 2)[()]


def layer_wavenumber(medium: Medium, f, k: float) -> LayerWavenumber:
    """Normal wavenumber of one layer at ``f`` (RealAxis or ImagAxis)."""
    if k < 0:
        raise DomainError("in-plane wavenumber must be non-negative")
    if isinstance(f, ImagAxis):
        value = float(kappa(medium.eps_imag(f.zeta), medium.mu, f.zeta, k))
        return LayerWavenumber(value, "imaginary-axis")
    eps = complex(medium.eps(f.omega))
    value = complex(kz(eps, medium.mu, f.omega, k))
    rad = eps * medium.mu * (f.omega / C_LIGHT) ** 2 - k**2
    branch = "evanescent" if rad.real < 0 else "propagating"
    return LayerWavenumber(value, branch)


def _weight(medium: Medium, pol: Pol, eps):
    return eps if pol is Pol.TM else medium.mu


def _single(pol, m1, eps1, k1, m2, eps2, k2, check=True):
    w1 = _weight(m1, pol, eps1)
    w2 = _weight(m2, pol, eps2)
    den = w1 * k2 + w2 * k1
    scale = abs(w1 * k2) + abs(w2 * k1)
    if check and abs(den) <= POLE_WINDOW * scale:
        raise PoleError("interface amplitude evaluated at a surface-mode pole", abs(den))
    r12 = (w2 * k1 - w1 * k2) / den
    t12 = 2 * w1 * k1 / den
    t21 = 2 * w2 * k2 / den
    return r12, t12, t21


def _layer_k(medium: Medium, f, k):
    """(eps, normal wavenumber) with k -> i kappa on the imaginary axis."""
    if isinstance(f, ImagAxis):
        e = medium.eps_imag(f.zeta)
        return e, 1j * kappa(e, medium.mu, f.zeta, k)
    e = complex(medium.eps(f.omega))
    return e, complex(kz(e, medium.mu, f.omega, k))


def fresnel_single(pol, medium1: Medium, medium2: Medium, f, k: float) -> InterfaceAmplitudes:
    """Reflection/transmission amplitudes of a single interface 1|2.

    Left incidence is from medium 1.  ``r_r = -r_l`` always.  For TE the
    permittivities in the formulas are replaced by permeabilities.
    """
    pol = Pol.coerce(pol)
    if k < 0:
        raise DomainError("in-plane wavenumber must be non-negative")
    e1, k1 = _layer_k(medium1, f, k)
    e2, k2 = _layer_k(medium2, f, k)
    r12, t12, t21 = _single(pol, medium1, e1, k1, medium2, e2, k2)
    if isinstance(f, ImagAxis):
        r12, t12, t21 = r12.real, t12.real, t21.real
    return InterfaceAmplitudes(r12, t12, -r12, t21, pol)


def _three_layer(pol, m1, m2, m3, a, f, k):
    """Amplitudes for 1|2|3 with interfaces at -a and +a (general, not public)."""
    e1, k1 = _layer_k(m1, f, k)
    e2, k2 = _layer_k(m2, f, k)
    e3, k3 = _layer_k(m3, f, k)
    r12, t12, t21 = _single(pol, m1, e1, k1, m2, e2, k2)
    r23, t23, t32 = _single(pol, m2, e2, k2, m3, e3, k3)
    r21, r32 = -r12, -r23
    e4 = cmath.exp(4j * k2 * a)
    e2a = cmath.exp(2j * k2 * a)
    den_l = 1 + r12 * r23 * e4
    den_r = 1 + r32 * r21 * e4
    if abs(den_l) <= POLE_WINDOW:
        raise PoleError("three-layer amplitude evaluated at a mode pole", abs(den_l))
    r_l = (r12 + r23 * e4) / den_l
    t_l = t12 * t23 * e2a / den_l
    r_r = (r32 + r21 * e4) / den_r
    t_r = t32 * t21 * e2a / den_r
    return InterfaceAmplitudes(r_l, t_l, r_r, t_r, pol)


def two_interface_amplitudes(pol, config: LayerConfig, f, k: float) -> InterfaceAmplitudes:
    """Amplitudes of the symmetric stack; ``r_l = r_r`` and ``t_l = t_r``."""
    pol = Pol.coerce(pol)
    if config.outer.is_perfect:
        raise DomainError("amplitudes of the ideal mirror are not defined on the real axis")
    a = config.half_gap
    e1, k1 = _layer_k(config.outer, f, k)
    e2, k2 = _layer_k(config.inner, f, k)
    r12, t12, t21 = _single(pol, config.outer, e1, k1, config.inner, e2, k2)
    e4 = cmath.exp(4j * k2 * a) if math.isfinite(a) else 0.0
    e2a = cmath.exp(2j * k2 * a) if math.isfinite(a) else 0.0
    D = 1 - r12**2 * e4
    if abs(D) <= POLE_WINDOW:
        raise PoleError("symmetric-stack amplitude evaluated at a discrete eigenfrequency", abs(D))
    r = r12 * (1 - e4) / D
    t = t12 * t21 * e2a / D
    return InterfaceAmplitudes(r, t, r, t, pol)


def reflection_real(pol, config: LayerConfig, omega, k):
    """``(r12, k2)`` on the real axis, vectorised and without pole checks."""
    pol = Pol.coerce(pol)
    e1 = config.outer.eps(omega)
    e2 = config.inner.eps(omega)
    k1 = kz(e1, config.outer.mu, omega, k)
    k2 = kz(e2, config.inner.mu, omega, k)
    w1 = e1 if pol is Pol.TM else config.outer.mu
    w2 = e2 if pol is Pol.TM else config.inner.mu
    return (w2 * k1 - w1 * k2) / (w2 * k1 + w1 * k2), k2


def reflection_imag(pol, config: LayerConfig, zeta, k):
    """``(r, kappa2)`` on the imaginary axis, vectorised.

    For the ideal mirror ``r = -1`` (TM) and ``r = +1`` (TE), the limits of
    the finite formulas as ``eps -> infinity``.
    """
    pol = Pol.coerce(pol)
    e2 = config.inner.eps_imag(zeta)
    k2 = kappa(e2, config.inner.mu, zeta, k)
    if config.outer.is_perfect:
        sign = -1.0 if pol is Pol.TM else 1.0
        return sign * np.ones_like(np.asarray(k2, dtype=float))[()], k2
    e1 = config.outer.eps_imag(zeta)
    k1 = kappa(e1, config.outer.mu, zeta, k)
    w1 = e1 if pol is Pol.TM else config.outer.mu
    w2 = e2 if pol is Pol.TM else config.inner.mu
    return (w2 * k1 - w1 * k2) / (w2 * k1 + w1 * k2), k2


def dispersion_function(pol, config: LayerConfig, f, k: float):
    """``D = 1 - r12^2 exp(4 i a k2)``; on the imaginary axis ``1 - r^2 exp(-4 a kappa2)``.

    The imaginary-axis value is real and tends to one as ``a -> infinity``.
    """
    pol = Pol.coerce(pol)
    if k < 0:
        raise DomainError("in-plane wavenumber must be non-negative")
    a = config.half_gap
    if isinstance(f, ImagAxis):
        r, k2 = reflection_imag(pol, config, f.zeta, k)
        if not math.isfinite(a):
            return 1.0
        return float(1.0 - r**2 * math.exp(-4.0 * a * k2))
    r12, k2 = reflection_real(pol, config, f.omega, k)
    if not math.isfinite(a):
        return 1.0 + 0j
    return complex(1 - r12**2 * cmath.exp(4j * a * k2))


def dispersion_derivative(pol, config: LayerConfig, omega: float, k: float, k1=None):
    """``(D, dD/d omega)`` on the real axis with analytic derivatives.

    ``k1`` may be supplied when it is known more accurately than
    ``kz`` can compute it (right below the continuum edge).
    """
    pol = Pol.coerce(pol)
    a = config.half_gap
    e1 = complex(config.outer.eps(omega))
    e2 = complex(config.inner.eps(omega))
    mu1, mu2 = config.outer.mu, config.inner.mu
    if k1 is None:
        k1 = complex(kz(e1, mu1, omega, k))
    k2 = complex(kz(e2, mu2, omega, k))
    de1 = complex(config.outer.permittivity.real_axis_derivative(omega))
    de2 = complex(config.inner.permittivity.real_axis_derivative(omega))
    dk1 = (de1 * omega**2 + 2 * e1 * omega) * mu1 / (2 * C_LIGHT**2 * k1)
    dk2 = (de2 * omega**2 + 2 * e2 * omega) * mu2 / (2 * C_LIGHT**2 * k2)
    if pol is Pol.TM:
        w1, w2, dw1, dw2 = e1, e2, de1, de2
    else:
        w1, w2, dw1, dw2 = mu1, mu2, 0.0, 0.0
    N = w2 * k1 - w1 * k2
    M = w2 * k1 + w1 * k2
    dN = dw2 * k1 + w2 * dk1 - dw1 * k2 - w1 * dk2
    dM = dw2 * k1 + w2 * dk1 + dw1 * k2 + w1 * dk2
    r = N / M
    dr = (dN * M - N * dM) / (M * M)
    E = cmath.exp(4j * a * k2)
    D = 1 - r * r * E
    dD = -2 * r * dr * E - r * r * E * 4j * a * dk2
    return D, dD


def _continuum_edge(config: LayerConfig, k: float) -> float:
    from .spectrum import spectrum_bounds

    return spectrum_bounds(config, k).continuum_start


def s_matrix(pol, config: LayerConfig, omega, k: float) -> SMatrixPoint:
    """Scattering matrix ``[[t, r], [r, t]]`` at a continuum point.

    ``t = cos(theta) e^{i delta}`` and ``r = i sin(theta) e^{i delta}``;
    ``unitarity_defect`` is the largest violation among ``|t|^2+|r|^2 = 1``,
    ``r conj(t) + conj(r) t = 0`` and ``|t^2 - r^2| = 1``.
    """
    w = omega.omega if isinstance(omega, RealAxis) else float(omega)
    edge = _continuum_edge(config, k)
    if not w > edge:
        raise DomainError(f"omega = {w:g} rad/s is below the continuum edge {edge:g} rad/s")
    amp = two_interface_amplitudes(pol, config, RealAxis(w), k)
    t, r = amp.t_l, amp.r_l
    defect = max(
        abs(abs(t) ** 2 + abs(r) ** 2 - 1.0),
        abs(r * t.conjugate() + r.conjugate() * t),
        abs(abs(t * t - r * r) - 1.0),
    )
    delta = cmath.phase(t)
    theta = math.atan2(abs(r), abs(t))
    return SMatrixPoint(t, r, delta, theta, defect)
