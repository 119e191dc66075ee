"""Wigner functions, marginals, moments and sub-Planck areas.

Conventions: scaled coordinate x with its dimensionless conjugate momentum p
(hbar = 1), and

    W(x, p) = (1/pi) int conj(psi(x - y)) psi(x + y) exp(-2 i p y) dy,

so that ``int int W dx dp = 1`` for ``int |psi|^2 dx = 1``.  The y-integral is
composite Simpson on the native grid spacing over the widest symmetric window
the grid allows; samples of psi falling off the grid are zero.
"""

from dataclasses import dataclass
from functools import cached_property
import math
from typing import NamedTuple
import warnings

import numpy as np
from scipy import ndimage

from .exceptions import ContractError, DomainError, ToleranceError, TruncationWarning
from .morse import EDGE_DECAY, SpatialGrid, WaveFunction, lambda_param
from .revival import even_odd_split
from .specfun import QuadratureRule, integrate, simpson_weights

__all__ = [
    "DEFAULT_P_AXIS",
    "MomentumGrid",
    "Moments",
    "PhaseSpaceField",
    "WignerParts",
    "cross_wigner",
    "marginals",
    "moments",
    "husimi",
    "packet_width",
    "principal_lobes",
    "sub_planck_area",
    "wavefunction_moments",
    "wigner",
    "wigner_parts_eighth",
]

_ROW_CHUNK = 128
_NORM_TOL = 1e-6


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform momentum axis (units of hbar per unit scaled length)."""

    p_min: float
    p_max: float
    n_points: int

    def __post_init__(self):
        if not self.p_min < self.p_max:
            raise ContractError(f"need p_min < p_max, got [{self.p_min}, {self.p_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ContractError(f"n_points must be an integer >= 2, got {self.n_points!r}")

    @classmethod
    def symmetric(cls, p_max, n_points):
        return cls(-float(p_max), float(p_max), int(n_points))

    @property
    def spacing(self):
        return (self.p_max - self.p_min) / (self.n_points - 1)

    @cached_property
    def points(self):
        pts = np.linspace(self.p_min, self.p_max, self.n_points)
        pts.flags.writeable = False
        return pts

    @cached_property
    def rule(self):
        return QuadratureRule(self.points, simpson_weights(self.n_points, self.spacing))


DEFAULT_P_AXIS = MomentumGrid.symmetric(80.0, 512)


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Real samples ``values[i, j] = W(x_i, p_j)``.

    ``imag_residue`` is the largest imaginary part left by the quadrature,
    which vanishes for an exact Wigner function.
    """

    x_axis: SpatialGrid
    p_axis: MomentumGrid
    values: np.ndarray
    imag_residue: float = 0.0
    label: str = ""

    def total(self):
        return float(self.x_axis.rule.weights @ self.values @ self.p_axis.rule.weights)

    def __sub__(self, other):
        return PhaseSpaceField(self.x_axis, self.p_axis, self.values - other.values,
                               max(self.imag_residue, other.imag_residue))


class Moments(NamedTuple):
    mean_x: float
    mean_p: float
    sigma_x: float
    sigma_p: float
    uncertainty_product: float


class WignerParts(NamedTuple):
    even: PhaseSpaceField
    odd: PhaseSpaceField
    interference: PhaseSpaceField
    total: PhaseSpaceField


def cross_wigner(a, b, p_axis=DEFAULT_P_AXIS):
    """Complex cross-Wigner matrix ``(1/pi) int conj(a(x-y)) b(x+y) exp(-2ipy) dy``.

    Rows follow ``a.grid``; columns follow ``p_axis``.  Rows are processed in
    fixed-size chunks so the summation order never depends on threading.
    """
    if a.grid != b.grid:
        raise ContractError("cross_wigner needs both states on one grid")
    grid = a.grid
    n = grid.n_points
    half = (n - 1) // 2
    if half < 1:
        raise ContractError("grid too small for a Wigner transform")
    h = grid.spacing
    k = np.arange(-half, half + 1)
    weights = simpson_weights(2 * half + 1, h)
    kernel = weights[:, None] * np.exp(-2j * np.outer(k * h, p_axis.points))

    pad = np.zeros(half, dtype=complex)
    a_pad = np.conj(np.concatenate([pad, np.asarray(a.values, dtype=complex), pad]))
    b_pad = np.concatenate([pad, np.asarray(b.values, dtype=complex), pad])

    out = np.empty((n, p_axis.n_points), dtype=complex)
    for start in range(0, n, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, n))[:, None] + half
        corr = a_pad[rows - k] * b_pad[rows + k]
        out[start:start + rows.shape[0]] = corr @ kernel
    return out / math.pi


def _warn_if_truncated(psi):
    left, right = psi.edge_ratios()
    if left >= EDGE_DECAY or right >= EDGE_DECAY:
        warnings.warn(
            f"{psi.label or 'state'} not decayed at grid edges "
            f"(left {left:.2e}, right {right:.2e}); Wigner transform is truncated",
            TruncationWarning,
            stacklevel=3,
        )


def wigner(psi, p_axis=DEFAULT_P_AXIS, *, check_norm=True):
    """Wigner function of the pure state ``psi``.

    ``check_norm=False`` admits sub-normalised pieces of a state (the
    even/odd parts of a superposition).
    """
    if check_norm:
        norm = psi.norm()
        if abs(norm - 1.0) > _NORM_TOL:
            raise ContractError(f"wigner expects a normalised state, got norm {norm:.9f}")
    _warn_if_truncated(psi)
    full = cross_wigner(psi, psi, p_axis)
    return PhaseSpaceField(psi.grid, p_axis, full.real.copy(),
                           float(np.abs(full.imag).max()), f"W[{psi.label}]")


def wigner_parts_eighth(cv, grid, params, p_axis=DEFAULT_P_AXIS):
    """Even, odd, interference and total Wigner functions at ``T_rev/8``.

    The interference term is taken as ``W_total - W_even - W_odd``.
    """
    even, odd = even_odd_split(cv, grid, params)
    total = even + odd
    total = WaveFunction(grid, total.values, f"chi(alpha={cv.alpha:g}, T_rev/8)")
    w_even = wigner(even, p_axis, check_norm=False)
    w_odd = wigner(odd, p_axis, check_norm=False)
    w_total = wigner(total, p_axis)
    w_int = PhaseSpaceField(grid, p_axis, w_total.values - w_even.values - w_odd.values,
                            max(w_total.imag_residue, w_even.imag_residue, w_odd.imag_residue),
                            "W_int")
    return WignerParts(w_even, w_odd, w_int, w_total)


def marginals(field):
    """Position density ``int W dp`` and momentum density ``int W dx``."""
    rho_x = integrate(field.values, field.p_axis.rule)
    rho_p = integrate(field.values.T, field.x_axis.rule)
    return rho_x, rho_p


def _mean_and_sigma(values, density, rule, name):
    total = integrate(density, rule)
    mean = integrate(values * density, rule) / total
    var = integrate(values ** 2 * density, rule) / total - mean ** 2
    if var <= 0:
        raise ToleranceError(f"non-positive {name} variance {var:.3e}")
    return float(mean), math.sqrt(var)


def moments(field):
    """Means and standard deviations of the two marginals of ``field``."""
    rho_x, rho_p = marginals(field)
    mx, sx = _mean_and_sigma(field.x_axis.points, rho_x, field.x_axis.rule, "position")
    mp, sp = _mean_and_sigma(field.p_axis.points, rho_p, field.p_axis.rule, "momentum")
    return Moments(mx, mp, sx, sp, sx * sp)


def wavefunction_moments(psi):
    """Moments from the wavefunction itself, with a spectral derivative.

    Cross-check for :func:`moments`; assumes psi vanishes at both edges.
    """
    grid = psi.grid
    values = np.asarray(psi.values, dtype=complex)
    k = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.spacing)
    deriv = np.fft.ifft(1j * k * np.fft.fft(values))
    rule = grid.rule
    norm = integrate(np.abs(values) ** 2, rule).real
    mx, sx = _mean_and_sigma(grid.points, np.abs(values) ** 2, rule, "position")
    mp = float(integrate(np.conj(values) * (-1j) * deriv, rule).real / norm)
    p2 = float(integrate(np.abs(deriv) ** 2, rule).real / norm)
    var_p = p2 - mp ** 2
    if var_p <= 0:
        raise ToleranceError(f"non-positive momentum variance {var_p:.3e}")
    sp = math.sqrt(var_p)
    return Moments(mx, mp, sx, sp, sx * sp)


def sub_planck_area(m, hbar=1.0):
    """Sub-Planck cell area ``hbar^2 / A`` with action ``A = dx dp``.

    Accepts a :class:`Moments` or the uncertainty product itself.
    """
    product = m.uncertainty_product if isinstance(m, Moments) else float(m)
    if not product > 0:
        raise DomainError(f"uncertainty product must be positive, got {product!r}")
    return hbar ** 2 / product


def husimi(field, sigma_x):
    """Husimi Q-function: ``field`` smoothed by a minimum-uncertainty Gaussian.

    The kernel has widths ``sigma_x`` and ``1/(2 sigma_x)``; it wipes out
    interference fringes finer than a Planck cell and leaves a nonnegative
    density of the packets themselves.
    """
    sigma_p = 0.5 / sigma_x
    smoothed = ndimage.gaussian_filter(
        field.values,
        (sigma_x / field.x_axis.spacing, sigma_p / field.p_axis.spacing),
        mode="constant",
    )
    return PhaseSpaceField(field.x_axis, field.p_axis, smoothed, field.imag_residue,
                           f"Q[{field.label}]")


def principal_lobes(field, sigma_x, count=2):
    """Phase-space centres ``(x, p)`` of the ``count`` strongest packets in ``field``.

    Centres are the highest local maxima of the Husimi-smoothed field, so
    fringes between packets never register as lobes.  ``sigma_x`` sets the
    smoothing (a coherent-packet width, see :func:`packet_width`).
    """
    q = husimi(field, sigma_x).values
    peaks = (q == ndimage.maximum_filter(q, size=3)) & (q > 0)
    idx = np.argwhere(peaks)
    if len(idx) < count:
        raise ContractError(f"found {len(idx)} lobes, need {count}")
    order = np.argsort(q[peaks])[::-1][:count]
    x = field.x_axis.points
    p = field.p_axis.points
    return [(float(x[i]), float(p[j])) for i, j in idx[order]]


def packet_width(params):
    """Position width ``1/(beta sqrt(2 lambda))`` of the harmonic ground state."""
    return 1.0 / (params.beta * math.sqrt(2.0 * lambda_param(params)))
