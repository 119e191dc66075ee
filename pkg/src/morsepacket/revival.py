"""Revival timescales, Gauss-sum amplitudes and fractional-revival decompositions.

With ``E_m = -(D/lam^2)(lam - m - 1/2)^2`` the phase ``exp(-i E_m t)`` equals,
up to an m-independent factor, ``exp(2 pi i m^2 t/T_rev) exp(-2 pi i m t/T_cl)``.
At ``t = (r/q) T_rev`` the quadratic factor is periodic in m with period ``l``
and expands as ``sum_p a_p exp(2 pi i m p / l)``, which turns the packet into a
sum of classically shifted copies ``chi_cl(t - (p/l) T_cl)``.  That fixes the
sign convention of the amplitudes below.
"""

from dataclasses import dataclass
import math

import numpy as np

from .coherent import combine, evolve, synthesize
from .exceptions import ContractError
from .morse import WaveFunction, lambda_param

__all__ = [
    "FractionalDecomposition",
    "Timescales",
    "classical_wavepacket",
    "even_odd_split",
    "exact_state",
    "gauss_amplitudes",
    "period_l",
    "reconstruct_fractional",
    "timescales",
]


@dataclass(frozen=True)
class Timescales:
    t_classical: float
    t_revival: float


def timescales(params):
    """``T_rev = 2 pi lam^2 / D`` and ``T_cl = T_rev / (2 lam - 1)``."""
    lam = lambda_param(params)
    t_rev = 2.0 * math.pi * lam ** 2 / params.D
    return Timescales(t_rev / (2.0 * lam - 1.0), t_rev)


@dataclass(frozen=True, eq=False)
class FractionalDecomposition:
    """Gauss-sum amplitudes at ``t = (r/q) T_rev``.

    ``amplitudes[p]`` multiplies the classical packet at time
    ``(r/q) T_rev - (p/l) T_cl``.
    """

    r: int
    q: int
    l: int
    amplitudes: np.ndarray

    def shifts(self, ts):
        """Classical-packet times for each p, given Timescales ``ts``."""
        p = np.arange(self.l)
        return self.r / self.q * ts.t_revival - p / self.l * ts.t_classical


def period_l(q):
    """Number of classical copies: q/2 when 4 divides q, q otherwise."""
    return q // 2 if q % 4 == 0 else q


def gauss_amplitudes(r, q):
    """``a_p = (1/l) sum_{m=0}^{l-1} exp[2 pi i (m^2 r/q - m p/l)]``, p = 0..l-1."""
    if int(r) != r or int(q) != q:
        raise ContractError(f"r and q must be integers, got {r!r}, {q!r}")
    r, q = int(r), int(q)
    if q < 2 or r < 1:
        raise ContractError(f"need r >= 1 and q >= 2, got r={r}, q={q}")
    if math.gcd(r, q) != 1:
        raise ContractError(f"r={r} and q={q} are not coprime")
    l = period_l(q)
    m = np.arange(l)
    # m^2 r mod q keeps the phase argument small and exact in integers
    quad = np.exp(2j * np.pi * ((m * m * r) % q) / q)
    kernel = np.exp(-2j * np.pi * (np.outer(m, m) % l) / l)
    amplitudes = (kernel @ quad) / l
    return FractionalDecomposition(r, q, l, amplitudes)


def _linear_phases(t, ts, n_levels):
    m = np.arange(n_levels)
    return np.exp(-2j * np.pi * m * (t / ts.t_classical))


def classical_wavepacket(cv, t, grid, params, *, levels=None):
    """``chi_cl(x, t) = sum_m d_m psi_m(x) exp(-2 pi i m t / T_cl)``.

    ``levels`` optionally selects "even" or "odd" m only.
    """
    ts = timescales(params)
    coeffs = cv.coeffs * _linear_phases(t, ts, cv.n_prime + 1)
    if levels is not None:
        parity = {"even": 0, "odd": 1}[levels]
        coeffs = np.where(np.arange(coeffs.size) % 2 == parity, coeffs, 0.0)
    tag = "" if levels is None else f"^{levels}"
    return combine(coeffs, grid, params, f"chi_cl{tag}(alpha={cv.alpha:g}, t={t:.10g})")


def reconstruct_fractional(cv, r, q, grid, params):
    """Packet at ``(r/q) T_rev`` rebuilt as ``sum_p a_p chi_cl(x, shift_p)``.

    Agrees with the exactly evolved state up to a global phase.
    """
    dec = gauss_amplitudes(r, q)
    ts = timescales(params)
    total = np.zeros(grid.n_points, dtype=complex)
    for a_p, shift in zip(dec.amplitudes, dec.shifts(ts)):
        total += a_p * classical_wavepacket(cv, shift, grid, params).values
    return WaveFunction(grid, total, f"reconstruction r/q={r}/{q}")


def exact_state(cv, fraction, grid, params):
    """Exactly evolved packet at ``fraction * T_rev``."""
    ts = timescales(params)
    return synthesize(evolve(cv, fraction * ts.t_revival, params), grid, params)


def even_odd_split(cv, grid, params):
    """Split of the one-eighth-revival packet into two cat-like parts.

    Returns ``(even, odd)`` with ``even = chi_cl^even(T_rev/8 - T_cl/4)`` and
    ``odd = exp(i pi/4) chi_cl^odd(T_rev/8)``; their sum is the packet at
    ``T_rev/8`` up to a global phase.
    """
    ts = timescales(params)
    t8 = ts.t_revival / 8.0
    even = classical_wavepacket(cv, t8 - ts.t_classical / 4.0, grid, params, levels="even")
    odd = classical_wavepacket(cv, t8, grid, params, levels="odd")
    odd = odd.scaled(np.exp(1j * np.pi / 4.0), f"exp(i pi/4) {odd.label}")
    return even, odd
