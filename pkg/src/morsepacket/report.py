"""Reproduction checks with pass/fail verdicts at fixed tolerances.

Each ``check_*`` function returns a list of :class:`Check`.  Anything that
raises inside a check is recorded as a failure rather than aborting the run.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.signal import find_peaks

from . import coherent, morse, phasespace, revival
from .exceptions import MorsePacketError

__all__ = [
    "Check",
    "REFERENCE_PRODUCTS",
    "REFERENCE_AREAS",
    "count_density_peaks",
    "lobe_axis",
    "run_all",
    "wigner_validity",
]

#: Uncertainty products and sub-Planck areas at T_rev/8 (hbar = 1).
REFERENCE_PRODUCTS = {1.4: 5.5914, 2.5: 2.56404}
REFERENCE_AREAS = {1.4: 0.179, 2.5: 0.39}
REL_TOL_REFERENCE = 0.02
GAUSS_TOL = 1e-12
OVERLAP_MIN = 0.999
GRAM_TOL = 1e-6
ENERGY_REL_TOL = 1e-12
REALITY_TOL = 1e-10
TOTAL_TOL = 1e-3
MARGINAL_RMS_TOL = 1e-3
BILINEAR_TOL = 1e-10
PEAK_FLOOR = 0.1

FRACTIONS = ((1, 2), (1, 4), (1, 8), (3, 8))
VALIDITY_LEVELS = (0, 5, 15)


@dataclass(frozen=True)
class Check:
    criterion: str
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion} {self.name}: {self.detail}"


def _guard(criterion, name, fn):
    try:
        return fn()
    except (MorsePacketError, ArithmeticError, ValueError) as exc:
        return [Check(criterion, name, False, f"error: {exc}")]


def check_uncertainty(moments_by_alpha):
    out = []
    for alpha, target in REFERENCE_PRODUCTS.items():
        if alpha not in moments_by_alpha:
            out.append(Check("1", f"dx*dp alpha={alpha:g}", False, "not computed"))
            continue
        got = moments_by_alpha[alpha].uncertainty_product
        rel = got / target - 1.0
        out.append(Check("1", f"dx*dp alpha={alpha:g}", abs(rel) <= REL_TOL_REFERENCE,
                         f"{got:.6f} vs {target} (rel {rel:+.4%}, tol {REL_TOL_REFERENCE:.0%})"))
    for alpha, target in REFERENCE_AREAS.items():
        if alpha not in moments_by_alpha:
            out.append(Check("2", f"area alpha={alpha:g}", False, "not computed"))
            continue
        got = phasespace.sub_planck_area(moments_by_alpha[alpha])
        rel = got / target - 1.0
        out.append(Check("2", f"sub-Planck area alpha={alpha:g}", abs(rel) <= REL_TOL_REFERENCE,
                         f"{got:.5f} vs {target} (rel {rel:+.4%}, tol {REL_TOL_REFERENCE:.0%})"))
    return out


def check_gauss():
    expected = 0.5 * np.array([np.exp(1j * np.pi / 4), 1.0, -np.exp(1j * np.pi / 4), 1.0])
    dec = revival.gauss_amplitudes(1, 8)
    err = float(np.abs(dec.amplitudes - expected).max())
    worst = 0.0
    for q in range(2, 33):
        for r in range(1, q):
            if math.gcd(r, q) == 1:
                amps = revival.gauss_amplitudes(r, q).amplitudes
                worst = max(worst, abs(float(np.sum(np.abs(amps) ** 2)) - 1.0))
    return [
        Check("3", "Gauss amplitudes (1,8)", err <= GAUSS_TOL, f"max deviation {err:.2e}"),
        Check("3", "Gauss unitarity q<=32", worst <= GAUSS_TOL, f"max |sum|a|^2 - 1| {worst:.2e}"),
    ]


def check_decomposition(grid, params, alphas=(1.4, 2.5)):
    out = []
    for alpha in alphas:
        cv = coherent.cs_coefficients(alpha, params)
        worst = 1.0
        for r, q in FRACTIONS:
            exact = revival.exact_state(cv, r / q, grid, params)
            recon = revival.reconstruct_fractional(cv, r, q, grid, params)
            worst = min(worst, morse.overlap(exact, recon))
        out.append(Check("4", f"fractional reconstruction alpha={alpha:g}", worst >= OVERLAP_MIN,
                         f"min overlap {worst:.12f} over (r,q) in {list(FRACTIONS)}"))
        even, odd = revival.even_odd_split(cv, grid, params)
        ov = morse.overlap(even + odd, revival.exact_state(cv, 1 / 8, grid, params))
        out.append(Check("4", f"even/odd split alpha={alpha:g}", ov >= OVERLAP_MIN,
                         f"overlap {ov:.12f}"))
    return out


def check_eigensystem(params):
    grid = morse.support_grid(params)
    basis = morse.eigenbasis(grid, params)
    gram = (basis * grid.rule.weights) @ basis.T
    dev = float(np.abs(gram - np.eye(len(basis))).max())
    lam = morse.lambda_param(params)
    worst = 0.0
    for n in range(morse.level_count(params)):
        s = 2 * lam - 1 - 2 * n
        s_form = -(params.beta ** 2 * params.hbar ** 2 * s ** 2) / (8 * params.mu * params.r0 ** 2)
        e = morse.energy(n, params)
        worst = max(worst, abs(e - s_form) / abs(s_form))
    n = len(basis)
    return [
        Check("5", f"Gram matrix {n}x{n}", dev < GRAM_TOL,
              f"max |G - I| {dev:.2e} on [{grid.x_min:g}, {grid.x_max:.4g}] x {grid.n_points}"),
        Check("5", "energy vs s-form", worst < ENERGY_REL_TOL, f"max rel diff {worst:.2e}"),
    ]


def bilinearity_residual(a, b, p_axis):
    """``max |W(a+b) - W(a) - W(b) - 2 Re X(a, b)|`` with the cross term computed directly."""
    w_ab = phasespace.cross_wigner(a + b, a + b, p_axis).real
    w_a = phasespace.cross_wigner(a, a, p_axis).real
    w_b = phasespace.cross_wigner(b, b, p_axis).real
    cross = 2.0 * phasespace.cross_wigner(a, b, p_axis).real
    return float(np.abs(w_ab - w_a - w_b - cross).max())


def wigner_validity(psi, parts, p_axis, field=None):
    """Reality, normalisation, marginal and bilinearity figures for one state.

    ``parts`` is a pair of states summing to ``psi``.
    """
    field = field if field is not None else phasespace.wigner(psi, p_axis)
    rho_x, _ = phasespace.marginals(field)
    rms = float(np.sqrt(np.mean((rho_x - psi.density()) ** 2)))
    return {
        "imag": field.imag_residue,
        "total": field.total(),
        "rms": rms,
        "bilinear": bilinearity_residual(parts[0], parts[1], p_axis),
    }


def _validity_checks(tag, stats):
    return [
        Check("6", f"{tag} reality", stats["imag"] < REALITY_TOL, f"max |Im W| {stats['imag']:.2e}"),
        Check("6", f"{tag} normalisation", abs(stats["total"] - 1) <= TOTAL_TOL,
              f"int W = {stats['total']:.8f}"),
        Check("6", f"{tag} marginal", stats["rms"] < MARGINAL_RMS_TOL,
              f"RMS(int W dp - |psi|^2) {stats['rms']:.2e}"),
        Check("6", f"{tag} bilinearity", stats["bilinear"] < BILINEAR_TOL,
              f"max residual {stats['bilinear']:.2e}"),
    ]


def _parity_parts(cv, t, grid, params):
    phased = coherent.evolve(cv, t, params).phased_coeffs
    even = np.where(np.arange(phased.size) % 2 == 0, phased, 0)
    return (coherent.combine(even, grid, params, "even m", check=False),
            coherent.combine(phased - even, grid, params, "odd m", check=False))


def _coherent_validity(cv, frac, grid, params, p_axis, known_parts, tag):
    if frac == 0.125:
        parts = revival.even_odd_split(cv, grid, params)
        psi = parts[0] + parts[1]
    else:
        t = frac * revival.timescales(params).t_revival
        parts = _parity_parts(cv, t, grid, params)
        psi = revival.exact_state(cv, frac, grid, params)
    field = known_parts.total if known_parts is not None else None
    checks = _validity_checks(tag, wigner_validity(psi, parts, p_axis, field))
    if known_parts is not None:
        w = known_parts
        resid = float(np.abs(w.total.values - w.even.values - w.odd.values
                             - w.interference.values).max())
        checks.append(Check("6", f"{tag} W_total = W_even + W_odd + W_int",
                            resid < BILINEAR_TOL, f"max residual {resid:.2e}"))
    return checks


def check_wigner_validity(grid, params, p_axis, parts_by_alpha):
    out = []
    for n in VALIDITY_LEVELS:
        def run(n=n):
            psi = morse.eigenfunction(n, grid, params)
            cut = grid.points < grid.points[np.argmax(np.abs(psi.values))]
            left = morse.WaveFunction(grid, np.where(cut, psi.values, 0.0), "left")
            right = morse.WaveFunction(grid, np.where(cut, 0.0, psi.values), "right")
            return _validity_checks(f"psi_{n}", wigner_validity(psi, (left, right), p_axis))

        out += _guard("6", f"psi_{n}", run)
    for alpha in (1.4, 2.5):
        cv = coherent.cs_coefficients(alpha, params)
        for label, frac in (("t=0", 0.0), ("t=T_rev/8", 0.125)):
            tag = f"chi(alpha={alpha:g}, {label})"
            known = parts_by_alpha.get(alpha) if frac == 0.125 else None
            out += _guard("6", tag, lambda cv=cv, frac=frac, tag=tag, known=known:
                          _coherent_validity(cv, frac, grid, params, p_axis, known, tag))
    return out


def count_density_peaks(density, floor=PEAK_FLOOR):
    """Maxima above ``floor`` of the peak that also rise ``floor`` above their surroundings."""
    top = float(np.max(density))
    peaks, _ = find_peaks(density, height=floor * top, prominence=floor * top)
    return peaks


def lobe_axis(field, params):
    """``"x"`` or ``"p"``: dominant component of the displacement between the two main lobes.

    Components are measured in units of a coherent packet's widths
    (``sigma_x`` and ``1/(2 sigma_x)``) so that x and p are comparable.
    """
    sigma_x = phasespace.packet_width(params)
    (x1, p1), (x2, p2) = phasespace.principal_lobes(field, sigma_x)
    dx = abs(x1 - x2) / sigma_x
    dp = abs(p1 - p2) * 2.0 * sigma_x
    return ("x" if dx > dp else "p"), dx, dp


def check_qualitative(grid, params, parts_by_alpha):
    out = []
    cv14 = coherent.cs_coefficients(1.4, params)
    cv25 = coherent.cs_coefficients(2.5, params)
    m14 = int(np.argmax(cv14.populations))
    m25 = int(np.argmax(cv25.populations))
    out.append(Check("7", "argmax |d_m|^2 decreases 1.4 -> 2.5", m25 < m14,
                     f"argmax {m14} (alpha=1.4) -> {m25} (alpha=2.5)"))
    for alpha, cv in ((1.4, cv14), (2.5, cv25)):
        for frac, want in ((0.25, 2), (0.5, 1)):
            rho = revival.exact_state(cv, frac, grid, params).density()
            peaks = count_density_peaks(rho)
            where = ", ".join(f"{grid.points[i]:.3f}" for i in peaks)
            out.append(Check("7", f"density maxima alpha={alpha:g} t={frac:g} T_rev",
                             len(peaks) == want, f"{len(peaks)} maxima (want {want}) at x = [{where}]"))
    for alpha, parts in parts_by_alpha.items():
        for name, field, want in (("W_even", parts.even, "x"), ("W_odd", parts.odd, "p")):
            def run(field=field, want=want, name=name, alpha=alpha):
                axis, dx, dp = lobe_axis(field, params)
                return [Check("7", f"{name} lobes along {want} alpha={alpha:g}", axis == want,
                              f"lobe separation {dx:.2f} widths in x, {dp:.2f} widths in p")]
            out += _guard("7", f"{name} lobes alpha={alpha:g}", run)
    return out


def run_all(grid, params, p_axis, parts_by_alpha, moments_by_alpha):
    """All acceptance checks; the Wigner parts at T_rev/8 are passed in precomputed."""
    checks = []
    checks += _guard("1", "uncertainty", lambda: check_uncertainty(moments_by_alpha))
    checks += _guard("3", "gauss", check_gauss)
    checks += _guard("4", "decomposition", lambda: check_decomposition(grid, params))
    checks += _guard("5", "eigensystem", lambda: check_eigensystem(params))
    checks += check_wigner_validity(grid, params, p_axis, parts_by_alpha)
    checks += _guard("7", "qualitative", lambda: check_qualitative(grid, params, parts_by_alpha))
    return checks
