"""Morse oscillator: parameters, spectrum and bound eigenfunctions.

Atomic units throughout (hbar = 1).  Positions use the dimensionless scaled
coordinate ``x = r/r0 - 1``.  Wavefunctions are normalised with respect to
``dx``, i.e. ``int |psi|^2 dx = 1``; the ``1/r0`` carried by the physical
(``dr``) normalisation constant is absorbed into this convention.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
import math

import numpy as np

from .exceptions import (
    ContractError,
    DomainError,
    LevelError,
    NoBoundStateError,
    TruncationError,
)
from .specfun import QuadratureRule, assoc_laguerre, integrate, log_gamma, simpson_weights

__all__ = [
    "DEFAULT_GRID",
    "EDGE_DECAY",
    "HI",
    "MoleculeParams",
    "SpatialGrid",
    "WaveFunction",
    "bound_level_max",
    "eigenbasis",
    "eigenfunction",
    "energy",
    "inner_product",
    "lambda_param",
    "level_count",
    "overlap",
    "potential",
    "s_param",
    "support_grid",
]

#: Relative edge magnitude below which a state counts as decayed.
EDGE_DECAY = 1e-8


@dataclass(frozen=True)
class MoleculeParams:
    """Physical constants of a Morse oscillator (atomic units).

    ``D`` dissociation energy (hartree), ``beta`` dimensionless range
    parameter, ``mu`` reduced mass (electron masses), ``r0`` equilibrium
    bond length (bohr).
    """

    D: float
    beta: float
    mu: float
    r0: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("D", "beta", "mu", "r0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")
        if self.hbar != 1.0:
            raise DomainError("only atomic units (hbar = 1) are supported")
        if lambda_param(self) <= 0.5:
            raise NoBoundStateError(
                f"lambda = {lambda_param(self):.6g} <= 1/2: no bound state"
            )


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid in the scaled coordinate x."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ContractError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ContractError(f"n_points must be an integer >= 2, got {self.n_points!r}")

    @property
    def spacing(self):
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @cached_property
    def points(self):
        pts = np.linspace(self.x_min, self.x_max, self.n_points)
        pts.flags.writeable = False
        return pts

    @cached_property
    def rule(self):
        return QuadratureRule(self.points, simpson_weights(self.n_points, self.spacing))


DEFAULT_GRID = SpatialGrid(-0.8, 4.0, 4096)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples of a state on a SpatialGrid."""

    grid: SpatialGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.n_points,):
            raise ContractError(
                f"expected {self.grid.n_points} samples, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.points

    def density(self):
        return np.abs(self.values) ** 2

    def norm(self):
        """``sqrt(int |psi|^2 dx)`` under the grid's Simpson rule."""
        return math.sqrt(float(integrate(self.density(), self.grid.rule)))

    def edge_ratios(self):
        """Boundary magnitudes relative to the peak magnitude (left, right)."""
        mag = np.abs(self.values)
        peak = mag.max()
        if peak == 0:
            return 0.0, 0.0
        return float(mag[0] / peak), float(mag[-1] / peak)

    def check_decay(self, tol=EDGE_DECAY):
        left, right = self.edge_ratios()
        if left >= tol or right >= tol:
            raise TruncationError(
                f"{self.label or 'state'} not decayed at grid edges: "
                f"|psi(x_min)|/max = {left:.3e}, |psi(x_max)|/max = {right:.3e} (tol {tol:g})",
                left,
                right,
            )
        return self

    def __add__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        if other.grid != self.grid:
            raise ContractError("cannot add wavefunctions on different grids")
        return WaveFunction(self.grid, self.values + other.values,
                            f"{self.label} + {other.label}")

    def scaled(self, factor, label=None):
        return WaveFunction(self.grid, factor * self.values,
                            self.label if label is None else label)


def inner_product(a, b):
    """``<a|b> = int conj(a) b dx`` on the shared grid."""
    if a.grid != b.grid:
        raise ContractError("states live on different grids")
    return complex(integrate(np.conj(a.values) * b.values, a.grid.rule))


def overlap(a, b):
    """Normalised overlap magnitude ``|<a|b>| / (|a| |b|)``."""
    return abs(inner_product(a, b)) / (a.norm() * b.norm())


def potential(x, params):
    """Morse potential energy (hartree) at scaled coordinate ``x``."""
    e = np.exp(-params.beta * np.asarray(x, dtype=float))
    return params.D * (e * e - 2.0 * e)


def lambda_param(params):
    """Dimensionless well-depth parameter ``sqrt(2 mu D r0^2) / (beta hbar)``."""
    return math.sqrt(2.0 * params.mu * params.D * params.r0 ** 2) / (params.beta * params.hbar)


#: Hydrogen iodide.
HI = MoleculeParams(D=0.1125, beta=2.07932, mu=1819.99, r0=3.04159)


def bound_level_max(params):
    """Highest bound level index ``floor(lambda - 1/2)``.

    When ``lambda - 1/2`` is an integer the top candidate sits at s = 0 (the
    dissociation threshold, not normalisable) and is excluded.
    """
    lam = lambda_param(params)
    if lam <= 0.5:
        raise NoBoundStateError(f"lambda = {lam:.6g} <= 1/2: no bound state")
    return int(math.ceil(lam - 0.5)) - 1


def level_count(params):
    return bound_level_max(params) + 1


def _check_level(n, params):
    n_max = bound_level_max(params)
    if int(n) != n or not 0 <= n <= n_max:
        raise LevelError(f"level {n!r} outside 0..{n_max}")
    return int(n)


def s_param(n, params):
    """Laguerre order ``s = 2 lambda - 1 - 2n`` of level ``n``."""
    n = _check_level(n, params)
    return 2.0 * lambda_param(params) - 1.0 - 2.0 * n


def energy(n, params):
    """Bound-state energy ``-(D/lambda^2)(lambda - n - 1/2)^2`` in hartree."""
    n = _check_level(n, params)
    lam = lambda_param(params)
    return -(params.D / lam ** 2) * (lam - n - 0.5) ** 2


def energies(params):
    lam = lambda_param(params)
    m = np.arange(level_count(params))
    return -(params.D / lam ** 2) * (lam - m - 0.5) ** 2


def _eigen_values(n, x, params):
    lam = lambda_param(params)
    s = 2.0 * lam - 1.0 - 2.0 * n
    # N^2 = beta s Gamma(n+1) / Gamma(2 lambda - n) for unit norm in dx
    log_norm = 0.5 * (math.log(params.beta) + math.log(s)
                      + log_gamma(n + 1.0) - log_gamma(2.0 * lam - n))
    xi = 2.0 * lam * np.exp(-params.beta * x)
    envelope = np.exp(log_norm + 0.5 * (s * np.log(xi) - xi))
    return envelope * assoc_laguerre(n, s, xi)


def eigenfunction(n, grid, params, *, check=True):
    """Normalised Morse eigenfunction of level ``n`` sampled on ``grid``.

    The samples are real: ``N exp(-xi/2) xi^(s/2) L_n^s(xi)`` with
    ``xi = 2 lambda exp(-beta x)``, evaluated in log space.

    Raises
    ------
    LevelError
        ``n`` outside ``0..n_max``.
    TruncationError
        ``check`` is true and the function has not decayed to ``EDGE_DECAY``
        of its peak at either grid boundary.
    """
    n = _check_level(n, params)
    psi = WaveFunction(grid, _eigen_values(n, grid.points, params), f"psi_{n}")
    if check:
        psi.check_decay()
    return psi


@lru_cache(maxsize=16)
def eigenbasis(grid, params):
    """All bound eigenfunctions on ``grid`` as a read-only (levels, points) array.

    No decay check is applied per level; callers validate the states they
    synthesise from it.
    """
    basis = np.array([_eigen_values(n, grid.points, params)
                      for n in range(level_count(params))])
    basis.flags.writeable = False
    return basis


def support_grid(params, spacing=1e-3, x_min=-0.8):
    """A grid wide enough for every bound level to decay to ``EDGE_DECAY``.

    The least-bound level decays like ``exp(-beta s x / 2)`` on the outer
    side, so x_max scales like ``1/(beta s_min)``.
    """
    s_min = s_param(bound_level_max(params), params)
    lam = lambda_param(params)
    # tail ~ (2 lambda)^(s/2) exp(-beta s x / 2); margin of 1e-12 on the tail
    x_max = 2.0 * (math.log(1e12) + 0.5 * s_min * math.log(2.0 * lam)) / (params.beta * s_min)
    x_max = max(x_max, 4.0)
    n_points = int(math.ceil((x_max - x_min) / spacing)) + 1
    return SpatialGrid(x_min, x_max, n_points)
