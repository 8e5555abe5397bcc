"""Permittivity models evaluated on the real and imaginary frequency axes.

All frequencies are angular frequencies in rad/s.  Models are immutable, so
they can be shared freely between threads or worker processes.

Example
-------
>>> gold = Plasma(1.38e16)
>>> eval_imag_axis(gold, 1.38e16)
2.0
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO, Union

import numpy as np
from scipy import constants
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ExtrapolationError, IngestionError, PoleError

__all__ = [
    "Constant",
    "Plasma",
    "Drude",
    "Oscillator",
    "Tabulated",
    "PerfectConductor",
    "PermittivityModel",
    "Medium",
    "VACUUM",
    "plasma_frequency_from_density",
    "eval_real_axis",
    "eval_imag_axis",
    "ingest_tabulated",
]

# Gaussian-unit CODATA values (statcoulomb, gram)
E_CHARGE_GAUSSIAN = constants.e * constants.c * 10.0
M_ELECTRON_GAUSSIAN = constants.m_e * 1e3


def _check_real_omega(omega):
    if np.any(np.asarray(omega) <= 0):
        raise DomainError("real-axis frequency must be positive")


def _check_zeta(zeta):
    if np.any(np.asarray(zeta) <= 0):
        raise DomainError("imaginary-axis frequency must be positive")


@dataclass(frozen=True)
class Constant:
    """Frequency-independent permittivity (may be negative)."""

    eps: float

    def real_axis(self, omega):
        _check_real_omega(omega)
        return np.asarray(self.eps + 0j * np.asarray(omega, dtype=float))[()]

    def real_axis_derivative(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=complex))[()]

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        return np.asarray(self.eps + 0.0 * np.asarray(zeta, dtype=float))[()]


@dataclass(frozen=True)
class Plasma:
    """Lossless free-electron gas, ``eps = 1 - omega_p**2 / omega**2``."""

    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("plasma frequency must be positive")

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        if np.any(omega == 0):
            raise PoleError("plasma permittivity has a pole at omega = 0")
        _check_real_omega(omega)
        return (1.0 - self.omega_p**2 / omega**2 + 0j)[()]

    def real_axis_derivative(self, omega):
        omega = np.asarray(omega, dtype=float)
        return (2.0 * self.omega_p**2 / omega**3 + 0j)[()]

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        zeta = np.asarray(zeta, dtype=float)
        return (1.0 + self.omega_p**2 / zeta**2)[()]


@dataclass(frozen=True)
class Drude:
    """Free-electron gas with relaxation rate ``gamma``."""

    omega_p: float
    gamma: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("plasma frequency must be positive")
        if self.gamma < 0:
            raise DomainError("relaxation rate must be non-negative")

    def real_axis(self, omega):
        omega = np.asarray(omega, dtype=float)
        if np.any(omega == 0):
            raise PoleError("Drude permittivity has a pole at omega = 0")
        _check_real_omega(omega)
        return (1.0 - self.omega_p**2 / (omega * (omega + 1j * self.gamma)))[()]

    def real_axis_derivative(self, omega):
        omega = np.asarray(omega, dtype=float)
        w = omega * (omega + 1j * self.gamma)
        return (self.omega_p**2 * (2.0 * omega + 1j * self.gamma) / w**2)[()]

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        zeta = np.asarray(zeta, dtype=float)
        return (1.0 + self.omega_p**2 / (zeta * (zeta + self.gamma)))[()]


@dataclass(frozen=True)
class Oscillator:
    """Sum of Lorentz oscillators on top of a background ``eps_inf``.

    ``terms`` holds ``(strength, resonance, damping)`` triples.  On the
    imaginary axis the damping is ignored unless ``damped`` is set.
    """

    eps_inf: float
    terms: tuple = ()
    damped: bool = False

    def __post_init__(self):
        if self.eps_inf < 1:
            raise DomainError("eps_inf must be >= 1")
        terms = tuple(tuple(float(v) for v in t) for t in self.terms)
        for s, w, g in terms:
            if s <= 0 or w <= 0 or g < 0:
                raise DomainError("oscillator terms need S > 0, omega_j > 0, Gamma >= 0")
        object.__setattr__(self, "terms", terms)

    def real_axis(self, omega):
        _check_real_omega(omega)
        omega = np.asarray(omega, dtype=float)
        eps = np.full(omega.shape, self.eps_inf, dtype=complex)
        for s, w, g in self.terms:
            den = w**2 - omega**2 - 1j * g * omega
            if np.any(den == 0):
                raise PoleError("undamped oscillator evaluated at its resonance")
            eps = eps + s * w**2 / den
        return eps[()]

    def real_axis_derivative(self, omega):
        omega = np.asarray(omega, dtype=float)
        d = np.zeros(omega.shape, dtype=complex)
        for s, w, g in self.terms:
            den = w**2 - omega**2 - 1j * g * omega
            d = d + s * w**2 * (2.0 * omega + 1j * g) / den**2
        return d[()]

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        zeta = np.asarray(zeta, dtype=float)
        eps = np.full(zeta.shape, self.eps_inf, dtype=float)
        for s, w, g in self.terms:
            gz = g * zeta if self.damped else 0.0
            eps = eps + s * w**2 / (w**2 + zeta**2 + gz)
        return eps[()]


@dataclass(frozen=True)
class Tabulated:
    """Sampled ``eps(i zeta)`` with monotone cubic (PCHIP) interpolation.

    Only the imaginary axis is available.  With ``tail=True`` queries above
    the last sample follow ``1 + C / zeta**2``, matched to the last point.
    """

    zeta: tuple
    eps: tuple
    tail: bool = False
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=float)
        e = np.asarray(self.eps, dtype=float)
        if z.ndim != 1 or z.shape != e.shape or z.size < 2:
            raise DomainError("need at least two (zeta, eps) samples of equal length")
        if np.any(np.diff(z) <= 0):
            raise DomainError("sample abscissas must be strictly increasing")
        if np.any(e <= 0):
            raise DomainError("sample permittivities must be positive")
        object.__setattr__(self, "zeta", tuple(z))
        object.__setattr__(self, "eps", tuple(e))
        object.__setattr__(self, "_interp", PchipInterpolator(z, e, extrapolate=False))

    def real_axis(self, omega):
        raise DomainError("tabulated models only cover the imaginary axis")

    real_axis_derivative = real_axis

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        z = np.asarray(zeta, dtype=float)
        lo, hi = self.zeta[0], self.zeta[-1]
        if np.any(z < lo) or (not self.tail and np.any(z > hi)):
            raise ExtrapolationError(
                f"zeta outside tabulated range [{lo:g}, {hi:g}] rad/s"
            )
        out = np.asarray(self._interp(np.clip(z, lo, hi)), dtype=float)
        if self.tail:
            coeff = (self.eps[-1] - 1.0) * hi**2
            out = np.where(z > hi, 1.0 + coeff / z**2, out)
        return out[()]


@dataclass(frozen=True)
class PerfectConductor:
    """Ideal mirror marker: reflection coefficients squared are exactly one."""

    def real_axis(self, omega):
        raise DomainError("perfect conductor has no finite permittivity")

    real_axis_derivative = real_axis

    def imag_axis(self, zeta):
        _check_zeta(zeta)
        return np.inf


PermittivityModel = Union[Constant, Plasma, Drude, Oscillator, Tabulated, PerfectConductor]


@dataclass(frozen=True)
class Medium:
    """A permittivity model plus a constant permeability."""

    permittivity: PermittivityModel
    mu: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.mu) or self.mu == 0:
            raise DomainError("permeability must be finite and nonzero")

    def eps(self, omega):
        return self.permittivity.real_axis(omega)

    def eps_imag(self, zeta):
        return self.permittivity.imag_axis(zeta)

    @property
    def is_perfect(self) -> bool:
        return isinstance(self.permittivity, PerfectConductor)


VACUUM = Medium(Constant(1.0))


def plasma_frequency_from_density(n, e=None, m=None, convention="SI"):
    """Plasma frequency of an electron gas with density ``n``.

    Parameters
    ----------
    n : float
        Electron density, m^-3 for ``convention="SI"``, cm^-3 for
        ``"gaussian"``.
    e, m : float, optional
        Elementary charge and electron mass in the units of the chosen
        convention (C and kg, or statC and g).  CODATA values by default.
    convention : {"SI", "gaussian"}
        ``sqrt(n e^2 / (eps0 m))`` or ``sqrt(4 pi n e^2 / m)``.

    Returns
    -------
    float
        omega_p in rad/s.
    """
    if n < 0:
        raise DomainError("electron density must be non-negative")
    conv = convention.lower()
    if conv == "si":
        e = constants.e if e is None else e
        m = constants.m_e if m is None else m
        return math.sqrt(n * e**2 / (constants.epsilon_0 * m))
    if conv == "gaussian":
        e = E_CHARGE_GAUSSIAN if e is None else e
        m = M_ELECTRON_GAUSSIAN if m is None else m
        return math.sqrt(4.0 * math.pi * n * e**2 / m)
    raise DomainError(f"unknown unit convention {convention!r}")


def eval_real_axis(model: PermittivityModel, omega):
    """Complex ``eps(omega)`` for real ``omega > 0``."""
    return model.real_axis(omega)


def eval_imag_axis(model: PermittivityModel, zeta):
    """Real ``eps(i zeta)`` for ``zeta > 0``."""
    return model.imag_axis(zeta)


_SPLIT = re.compile(r"[,\s]+")


def ingest_tabulated(stream: TextIO | str | Iterable[str], tail: bool = False) -> Tabulated:
    """Parse a two-column ``zeta_rad_per_s, eps_izeta`` table.

    ``#`` starts a comment; columns are separated by commas and/or
    whitespace.  Errors name the offending (1-based) line.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    zetas: list[float] = []
    epss: list[float] = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        cols = [c for c in _SPLIT.split(text) if c]
        if len(cols) != 2:
            raise IngestionError(f"expected 2 columns, got {len(cols)}", lineno)
        try:
            z, e = float(cols[0]), float(cols[1])
        except ValueError:
            raise IngestionError("could not parse number", lineno) from None
        if not (math.isfinite(z) and math.isfinite(e)):
            raise IngestionError("non-finite value", lineno)
        if zetas and z <= zetas[-1]:
            raise IngestionError("non-monotone abscissa", lineno)
        if z <= 0:
            raise IngestionError("non-positive frequency", lineno)
        if e <= 0:
            raise IngestionError("non-positive permittivity", lineno)
        zetas.append(z)
        epss.append(e)
    if len(zetas) < 2:
        raise IngestionError("need at least two samples")
    return Tabulated(tuple(zetas), tuple(epss), tail=tail)
