"""Command-line front end.

Usage::

    casimir-modes dispersion --preset III --L 0.63 --q-grid 0.01:5:100
    casimir-modes modes --preset IV --L 6.3 --q-grid 0.05:0.05:1 --pol both
    casimir-modes scatter --preset III --L 0.63 --q 1 --omega-grid 1.5:4:50
    casimir-modes force --preset IV --gap-nm 100 --gap-nm 200 --gamma 5.52e13 --compare
    casimir-modes energy --preset ideal-mirror --gap-nm 1000
    casimir-modes verify all --out report.json

Configuration files use INI syntax (no interpolation); command-line flags
override file values::

    [stack]
    preset = IV          ; single-interface, I, II, III, IV, ideal-mirror
    omega_p = 1.38e16    ; rad/s
    gamma = 0            ; rad/s, > 0 turns the plasma into a Drude metal
    eps = 1.5            ; presets I and II
    mu = 1.5

    [geometry]
    L = 6.3              ; or gap_nm = 100, 200, 400 (separations d = 2a)

    [grid]
    q = 0.01:5:100       ; start:stop:count, linear
    omega = 1.5:4:50     ; scatter only, in units of omega_ref
    pol = TM             ; TM, TE or both

    [output]
    format = csv
    tol = 1e-8

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import click
import numpy as np
from scipy.constants import hbar as HBAR

from . import __version__
from .dielectric import Constant, Drude, Medium, Plasma
from .errors import CasimirError, DomainError, QuadratureError, UnsupportedConfigError
from .lifshitz import QuadratureSpec, energy_per_area, force_per_area
from .scattering import C_LIGHT, LayerConfig, Pol, s_matrix
from .spectral_sum import spectral_shift_density
from .spectrum import (
    SYMMETRIC,
    find_modes,
    gap_derivative,
    single_interface_plasmon_closed_form,
    spectrum_bounds,
    waveguide_mode_estimate,
)
from .verify import GOLD_OMEGA_P, SUITES, run_suite

__all__ = ["main", "RunConfig", "OutputTable", "parse_grid", "load_config"]

SCHEMA_VERSION = 1
PRESETS = ("single-interface", "I", "II", "III", "IV", "ideal-mirror")
UNITS_NOTE = "Omega = omega/omega_ref, q = k c/omega_ref, L = 2 a omega_ref/c"

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Invalid configuration file or flag combination."""


# -- configuration ---------------------------------------------------------------

def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:count`` to a linear grid; a bare number is a one-point grid."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return (float(parts[0]),)
        if len(parts) != 3:
            raise ValueError
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid {text!r} is not start:stop:count") from None
    if n < 1:
        raise ConfigError(f"grid {text!r} is empty")
    if n > 1 and not b > a:
        raise ConfigError(f"grid {text!r} must increase")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ConfigError(f"grid {text!r} is not finite")
    return tuple(float(x) for x in np.linspace(a, b, n))


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


@dataclass
class RunConfig:
    preset: str = "IV"
    omega_p: float = GOLD_OMEGA_P
    gamma: float = 0.0
    eps: float | None = None
    mu: float | None = None
    L: float | None = None
    gap_nm: tuple = ()
    q_grid: tuple = ()
    omega_grid: tuple = ()
    pol: str = "TM"
    fmt: str = "csv"
    tol: float | None = None
    out: str | None = field(default=None, compare=False)

    def digest(self) -> str:
        d = asdict(self)
        d.pop("out")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    @property
    def pols(self) -> list[Pol]:
        return [Pol.TM, Pol.TE] if self.pol.lower() == "both" else [Pol.coerce(self.pol.upper())]

    def validate(self, separations: bool = False):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; choose from {', '.join(PRESETS)}")
        if not self.omega_p > 0:
            raise ConfigError("omega_p must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be non-negative")
        if self.pol.lower() not in ("tm", "te", "both"):
            raise ConfigError("pol must be TM, TE or both")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.preset in ("I", "II") and (self.eps is None or self.mu is None):
            raise ConfigError(f"preset {self.preset} needs eps and mu")
        n_geom = (self.L is not None) + bool(self.gap_nm)
        if self.preset == "single-interface":
            if n_geom:
                raise ConfigError("the single-interface preset has no gap")
        elif n_geom != 1:
            raise ConfigError("give exactly one of L or gap_nm")
        if self.gap_nm:
            if any(not g > 0 for g in self.gap_nm):
                raise ConfigError("separations must be positive")
            if any(b <= a for a, b in zip(self.gap_nm, self.gap_nm[1:])):
                raise ConfigError("separations must be sorted and distinct")
            if len(self.gap_nm) > 1 and not separations:
                raise ConfigError("this command takes a single separation")
        if self.L is not None and not self.L > 0:
            raise ConfigError("L must be positive")

    def half_gaps(self) -> list[float]:
        if self.L is not None:
            return [self.L * C_LIGHT / (2.0 * self.omega_p)]
        return [g * 1e-9 / 2.0 for g in self.gap_nm]

    def stack(self, half_gap: float | None = None, gamma: float | None = None) -> LayerConfig:
        """Layer configuration at ``half_gap`` (defaults to the first separation)."""
        gamma = self.gamma if gamma is None else gamma
        wp = self.omega_p
        if self.preset == "single-interface":
            return LayerConfig.single_interface(wp)
        a = self.half_gaps()[0] if half_gap is None else half_gap
        if self.preset == "ideal-mirror":
            return LayerConfig.ideal_mirror(a)
        if self.preset == "I":
            return LayerConfig(Medium(Constant(1.0)), Medium(Constant(self.eps), self.mu), a, "I", wp)
        if self.preset == "II":
            return LayerConfig.preset_II(self.eps, self.mu, a, omega_ref=wp)
        metal = Medium(Drude(wp, gamma) if gamma > 0 else Plasma(wp))
        vac = Medium(Constant(1.0))
        if self.preset == "III":
            return LayerConfig(vac, metal, a, "III", wp)
        return LayerConfig(metal, vac, a, "IV", wp)


_FILE_KEYS = {
    "stack": {"preset": str, "omega_p": float, "gamma": float, "eps": float, "mu": float},
    "geometry": {"l": float, "gap_nm": _float_list},
    "grid": {"q": parse_grid, "omega": parse_grid, "pol": str},
    "output": {"format": str, "tol": float},
}
_FIELD = {"l": "L", "q": "q_grid", "omega": "omega_grid", "format": "fmt"}


def load_config(path: str) -> dict:
    """Read an INI file into ``RunConfig`` keyword arguments."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for section in parser.sections():
        if section not in _FILE_KEYS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        for key, raw in parser.items(section):
            conv = _FILE_KEYS[section].get(key)
            if conv is None:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                out[_FIELD.get(key, key)] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    return out


# -- output ---------------------------------------------------------------------------

@dataclass
class OutputTable:
    columns: list
    rows: list
    meta: dict

    def _check(self):
        for row in self.rows:
            for v in row:
                if isinstance(v, float) and not math.isfinite(v):
                    raise CasimirError(f"non-finite value in row {row}")

    def to_csv(self) -> str:
        self._check()
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}: {value}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow(["%.9g" % v if isinstance(v, float) else ("" if v is None else v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        self._check()

        def cell(v):
            if isinstance(v, float):
                return "%.17g" % v
            return json.dumps(v)

        rows = ",\n    ".join("[" + ", ".join(cell(v) for v in row) + "]" for row in self.rows)
        head = json.dumps(
            {"schema_version": SCHEMA_VERSION, "meta": self.meta, "columns": self.columns},
            indent=2,
        )
        return head[:-2] + ',\n  "rows": [\n    ' + rows + "\n  ]\n}\n"


def _meta(cfg: RunConfig, stack: LayerConfig | None, command: str) -> dict:
    meta = {
        "tool": f"casimir-modes {__version__}",
        "command": command,
        "config_hash": cfg.digest(),
        "preset": cfg.preset,
        "c_m_per_s": "%.17g" % C_LIGHT,
        "hbar_J_s": "%.17g" % HBAR,
    }
    if stack is not None:
        meta["omega_ref_rad_per_s"] = "%.17g" % stack.reference_frequency
        if math.isfinite(stack.half_gap):
            meta["L"] = "%.17g" % stack.L
    meta["units"] = UNITS_NOTE
    return meta


def _emit(table: OutputTable, cfg: RunConfig):
    text = table.to_json() if cfg.fmt == "json" else table.to_csv()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _map(func, items, jobs: int):
    """Ordered map, optionally over worker processes."""
    if jobs <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items))


# -- shared options -------------------------------------------------------------------

def _common(f):
    opts = [
        click.option("--preset", type=click.Choice(PRESETS), default=None, help="Layer preset."),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="INI configuration file."),
        click.option("--L", "L", type=float, default=None, help="Dimensionless separation 2 a omega_p/c."),
        click.option("--gap-nm", type=float, multiple=True, help="Separation d = 2a in nm (repeatable)."),
        click.option("--omega-p", type=float, default=None, help="Plasma frequency, rad/s."),
        click.option("--gamma", type=float, default=None, help="Drude relaxation rate, rad/s."),
        click.option("--eps", type=float, default=None, help="Permittivity (presets I, II)."),
        click.option("--mu", type=float, default=None, help="Permeability (presets I, II)."),
        click.option("--q-grid", default=None, help="start:stop:count in units of omega_p/c."),
        click.option("--pol", default=None, help="TM, TE or both."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None),
        click.option("--tol", type=float, default=None, help="Numerical tolerance override."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _build(opts: dict, separations: bool = False, **extra) -> RunConfig:
    base = load_config(opts["config_path"]) if opts.get("config_path") else {}
    flags = {
        "preset": opts.get("preset"),
        "omega_p": opts.get("omega_p"),
        "gamma": opts.get("gamma"),
        "eps": opts.get("eps"),
        "mu": opts.get("mu"),
        "L": opts.get("L"),
        "gap_nm": tuple(opts.get("gap_nm") or ()),
        "q_grid": parse_grid(opts["q_grid"]) if opts.get("q_grid") else None,
        "pol": opts.get("pol"),
        "fmt": opts.get("fmt"),
        "tol": opts.get("tol"),
        "out": opts.get("out"),
    }
    flags.update(extra)
    for key, value in flags.items():
        if value is not None and value != ():
            base[key] = value
    # a geometry flag replaces the file's geometry rather than adding to it
    if flags["L"] is not None:
        base.pop("gap_nm", None)
    if flags["gap_nm"]:
        base.pop("L", None)
    cfg = RunConfig(**base)
    cfg.validate(separations=separations)
    return cfg


def _guard(func):
    """Map library failures onto exit codes."""

    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ConfigError, DomainError, UnsupportedConfigError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except CasimirError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def _need_q(cfg: RunConfig):
    if not cfg.q_grid:
        raise ConfigError("a q grid is required (--q-grid start:stop:count)")
    if any(not q > 0 for q in cfg.q_grid):
        raise ConfigError("q values must be positive")


# -- commands ---------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="casimir-modes")
def main():
    """Electromagnetic modes and Casimir forces of symmetric three-layer media."""


def _branch_rows(stack: LayerConfig, pol: Pol, q: float):
    modes = find_modes(stack, pol, q * stack.k_ref)
    counters: dict = {}
    out = []
    for m in sorted(modes, key=lambda m: (m.symmetry != SYMMETRIC, m.Omega)):
        tag = "s" if m.symmetry == SYMMETRIC else "a"
        idx = counters.get(tag, 0)
        counters[tag] = idx + 1
        out.append((f"{pol.value}-{tag}{idx}", m))
    return out


@main.command()
@_common
@_guard
def dispersion(**opts):
    """Discrete-mode dispersion Omega(q) with the continuum boundaries.

    One row per (q, branch).  Branches are labelled by polarization,
    symmetry (s or a) and order above the lowest root of that symmetry.
    A q with no discrete root gets a single row with an empty Omega.
    """
    cfg = _build(opts)
    _need_q(cfg)
    stack = cfg.stack()
    closed = cfg.preset == "single-interface"
    cols = ["q [1]", "branch", "kind", "Omega [1]", "Omega_minus [1]", "Omega_plus [1]"]
    if closed:
        cols.append("Omega_closed_form [1]")
    rows = []
    wref = stack.reference_frequency
    for q in cfg.q_grid:
        b = spectrum_bounds(stack, q * stack.k_ref)
        bounds = [b.omega_minus / wref, b.omega_plus / wref]
        branches = [br for pol in cfg.pols for br in _branch_rows(stack, pol, q)]
        if not branches:
            rows.append([q, "none", "none", None] + bounds + ([float(single_interface_plasmon_closed_form(q))] if closed else []))
        for label, m in branches:
            row = [q, label, m.kind, m.Omega] + bounds
            if closed:
                row.append(float(single_interface_plasmon_closed_form(q)))
            rows.append(row)
    _emit(OutputTable(cols, rows, _meta(cfg, stack, "dispersion")), cfg)


@main.command()
@_common
@_guard
def modes(**opts):
    """Discrete modes with residuals and their separation derivatives."""
    cfg = _build(opts)
    _need_q(cfg)
    stack = cfg.stack()
    cols = [
        "q [1]", "pol", "branch", "kind", "Omega [1]", "omega [rad/s]", "k [1/m]",
        "residual [1]", "domega_dd [rad/(s m)]",
    ]
    rows = []
    meta = _meta(cfg, stack, "modes")
    for q in cfg.q_grid:
        for pol in cfg.pols:
            for label, m in _branch_rows(stack, pol, q):
                deriv = gap_derivative(stack, m) if math.isfinite(stack.half_gap) else 0.0
                rows.append([q, pol.value, label, m.kind, m.Omega, m.omega, m.k, m.residual, deriv])
    if stack.preset == "IV":
        counts = [waveguide_mode_estimate(stack, q * stack.k_ref)[1] for q in cfg.q_grid]
        meta["waveguide_estimate_counts"] = " ".join(str(c) for c in counts)
    _emit(OutputTable(cols, rows, meta), cfg)


@main.command()
@_common
@click.option("--q", "q_single", type=float, default=None, help="In-plane wavenumber, units of omega_ref/c.")
@click.option("--omega-grid", default=None, help="start:stop:count in units of omega_ref (above the continuum).")
@_guard
def scatter(q_single, omega_grid, **opts):
    """Continuum scattering data: S-matrix, phase shift and its density."""
    cfg = _build(opts, omega_grid=parse_grid(omega_grid) if omega_grid else None)
    if q_single is None:
        _need_q(cfg)
        q_single = cfg.q_grid[0]
    if not q_single > 0:
        raise ConfigError("q must be positive")
    stack = cfg.stack()
    if not math.isfinite(stack.half_gap) or stack.outer.is_perfect:
        raise ConfigError("scattering needs a finite gap between penetrable media")
    k = q_single * stack.k_ref
    wref = stack.reference_frequency
    edge = spectrum_bounds(stack, k).continuum_start / wref
    grid = cfg.omega_grid or tuple(float(x) for x in edge * (1.0 + np.linspace(1e-3, 2.0, 101)))
    if grid[0] <= edge:
        raise ConfigError(f"omega grid must start above the continuum edge Omega = {edge:.9g}")
    cols = [
        "Omega [1]", "pol", "abs_t [1]", "abs_r [1]", "delta [rad]", "theta [rad]",
        "unitarity_defect [1]", "delta_D [rad]", "shift_density [s]",
    ]
    rows = []
    for pol in cfg.pols:
        samples = spectral_shift_density(stack, pol, np.array(grid) * wref, k)
        for W, smp in zip(grid, samples):
            p = s_matrix(pol, stack, W * wref, k)
            rows.append([W, pol.value, abs(p.t), abs(p.r), p.delta, p.theta, p.unitarity_defect,
                         smp.delta, smp.density])
    meta = _meta(cfg, stack, "scatter")
    meta["q"] = "%.17g" % q_single
    _emit(OutputTable(cols, rows, meta), cfg)


def _lifshitz_row(job):
    kind, stack, rtol = job
    fn = force_per_area if kind == "force" else energy_per_area
    try:
        r = fn(stack, QuadratureSpec(rtol=rtol))
        return r.value, r.error, r.by_polarization.get("TM", 0.0), r.by_polarization.get("TE", 0.0), 1
    except QuadratureError as exc:
        part = exc.partial
        if part is not None and hasattr(part, "value"):
            return part.value, part.error, part.by_polarization["TM"], part.by_polarization["TE"], 0
        return 0.0, 0.0, 0.0, 0.0, 0


def _separation_scan(cfg: RunConfig, quantity: str, compare: bool, jobs: int):
    rtol = cfg.tol or 1e-8
    stacks = [cfg.stack(a) for a in cfg.half_gaps()]
    jobs_list = [(quantity, s, rtol) for s in stacks]
    unit = "Pa" if quantity == "force" else "J/m^2"
    sym = "F" if quantity == "force" else "E"
    cols = ["d [m]", f"{sym} [{unit}]", f"{sym}_error [{unit}]", f"{sym}_TM [{unit}]", f"{sym}_TE [{unit}]", "ok"]
    results = _map(_lifshitz_row, jobs_list, jobs)
    if quantity == "force":
        cols += ["E [J/m^2]", "E_error [J/m^2]"]
        energies = _map(_lifshitz_row, [("energy", s, rtol) for s in stacks], jobs)
    if compare:
        cols += [f"{sym}_plasma [{unit}]", "relative_difference [1]"]
        plasma = _map(_lifshitz_row, [(quantity, cfg.stack(s.half_gap, gamma=0.0), rtol) for s in stacks], jobs)
    rows = []
    failed = False
    worst = 0.0
    for i, s in enumerate(stacks):
        v, e, tm, te, ok = results[i]
        row = [s.separation, v, e, tm, te, ok]
        if quantity == "force":
            ev, ee, _, _, eok = energies[i]
            row += [ev, ee]
            ok = ok and eok
            row[5] = ok
        if compare:
            pv, _, _, _, pok = plasma[i]
            rel = abs(v - pv) / abs(pv) if pv else 0.0
            worst = max(worst, rel)
            row += [pv, rel]
            ok = ok and pok
            row[5] = ok
        failed |= not ok
        rows.append(row)
    meta = _meta(cfg, stacks[0], quantity)
    meta["rtol"] = "%.3g" % rtol
    if compare:
        meta["max_relative_difference"] = "%.9g" % worst
        click.echo(f"max relative difference vs plasma model: {worst:.4%}", err=True)
    _emit(OutputTable(cols, rows, meta), cfg)
    if failed:
        click.echo("numerical failure: quadrature did not converge for rows with ok = 0", err=True)
        sys.exit(EXIT_NUMERICAL)


_compare_opt = click.option("--compare", is_flag=True, help="Add a plasma-model (gamma = 0) column.")
_jobs_opt = click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")


@main.command()
@_common
@_compare_opt
@_jobs_opt
@_guard
def force(compare, jobs, **opts):
    """Casimir pressure and energy per unit area over a list of separations."""
    cfg = _build(opts, separations=True)
    if compare and not (cfg.preset in ("III", "IV") and cfg.gamma > 0):
        raise ConfigError("--compare needs a plasma preset with --gamma > 0")
    _separation_scan(cfg, "force", compare, jobs)


@main.command()
@_common
@_compare_opt
@_jobs_opt
@_guard
def energy(compare, jobs, **opts):
    """Casimir energy per unit area over a list of separations."""
    cfg = _build(opts, separations=True)
    if compare and not (cfg.preset in ("III", "IV") and cfg.gamma > 0):
        raise ConfigError("--compare needs a plasma preset with --gamma > 0")
    _separation_scan(cfg, "energy", compare, jobs)


@main.command()
@click.argument("suite", type=click.Choice(list(SUITES) + ["all"]), metavar="SUITE")
@click.option("--tol", type=float, default=None, help="Override every bound-type tolerance.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON report path.")
@_guard
def verify(suite, tol, out):
    """Run a verification suite; exit 0 iff every check passes."""
    if tol is not None and not tol > 0:
        raise ConfigError("tol must be positive")
    checks = run_suite(suite, tol)
    width = max(len(c.name) for c in checks)
    for c in checks:
        bound = "> 0" if c.rule == ">0" else ("" if c.rule == "info" else "<= %.3g" % c.tol)
        extra = f"  ({c.detail})" if c.detail else ""
        click.echo(f"{c.status:4}  {c.suite:12}  {c.name:{width}}  {c.value:.6e}  {bound}{extra}")
    passed = all(c.passed for c in checks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": f"casimir-modes {__version__}",
        "suite": suite,
        "passed": passed,
        "checks": [c.as_dict() for c in checks],
    }
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    click.echo("all checks passed" if passed else "some checks failed")
    sys.exit(0 if passed else EXIT_NUMERICAL)


if __name__ == "__main__":
    main()
