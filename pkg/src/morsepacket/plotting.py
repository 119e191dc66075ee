"""Figure rendering for the reproduction outputs.

Uses the object-oriented matplotlib API (no pyplot state), so figures can be
produced from worker threads and never open windows.
"""

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = ["plot_coefficients", "plot_densities", "plot_wigner_parts"]

_PART_TITLES = ("$W^{(even)}$", "$W^{(odd)}$", "$W^{(int)}$", "$W$")


def _save(fig, path):
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata={"Software": None})
    return path


def plot_coefficients(coefficient_vectors, path):
    """|d_m|^2 against m, one curve per coherent state."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    for cv in coefficient_vectors:
        m = np.arange(cv.n_prime + 1)
        ax.plot(m, cv.populations, marker="o", ms=3, label=fr"$\alpha = {cv.alpha:g}$")
    ax.set_xlabel("$m$")
    ax.set_ylabel("$|d_m|^2$")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_densities(x, panels, path, x_range=(-0.6, 1.6)):
    """Coordinate-space densities; ``panels`` maps a title to |chi|^2 samples."""
    n = len(panels)
    cols = min(n, 2)
    rows = -(-n // cols)
    fig = Figure(figsize=(5 * cols, 3.2 * rows))
    sel = (x >= x_range[0]) & (x <= x_range[1])
    for i, (title, rho) in enumerate(panels.items()):
        ax = fig.add_subplot(rows, cols, i + 1)
        ax.plot(x[sel], np.asarray(rho)[sel], lw=1.2)
        ax.set_title(title)
        ax.set_xlabel("$x$")
        ax.set_ylabel(r"$|\chi|^2$")
    fig.tight_layout()
    return _save(fig, path)


def _window(field, frac=1e-3):
    mag = np.abs(field.values)
    rows = np.flatnonzero(mag.max(axis=1) > frac * mag.max())
    x = field.x_axis.points
    lo, hi = rows[0], rows[-1] + 1
    return slice(max(lo - 4, 0), min(hi + 4, x.size))


def plot_wigner_parts(parts_by_alpha, path, levels=41):
    """Contour grid: one row per alpha, columns even / odd / interference / total."""
    rows = len(parts_by_alpha)
    fig = Figure(figsize=(16, 3.8 * rows))
    for r, (alpha, parts) in enumerate(parts_by_alpha.items()):
        xs = _window(parts.total)
        for c, (field, title) in enumerate(zip(parts, _PART_TITLES)):
            ax = fig.add_subplot(rows, 4, 4 * r + c + 1)
            vals = field.values[xs]
            lim = np.abs(vals).max() or 1.0
            ax.contourf(field.x_axis.points[xs], field.p_axis.points, vals.T, levels=levels,
                        cmap="RdBu_r", vmin=-lim, vmax=lim)
            ax.set_title(fr"{title}, $\alpha={alpha:g}$")
            ax.set_xlabel("$x$")
            if c == 0:
                ax.set_ylabel("$p$")
    fig.tight_layout()
    return _save(fig, path)
