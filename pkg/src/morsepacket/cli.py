"""Command-line interface: ``morsepacket {spectrum,coefficients,evolve,wigner,report}``.

Exit codes: 0 success, 1 validation error, 2 numerical-tolerance failure,
3 I/O error.
"""

import argparse
from dataclasses import replace
import logging
from pathlib import Path
import sys
import time

import numpy as np

from . import coherent, morse, phasespace, report, revival
from .config import ConfigError, build_config, read_config_file
from .csvio import write_matrix, write_table
from .exceptions import ContractError, DomainError, MorsePacketError, ToleranceError, TruncationError

log = logging.getLogger("morsepacket")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _common(parser):
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument("--alpha", action="append", help="coherence parameter (repeatable)")
    parser.add_argument("--time", action="append",
                        help="time as r/q of T_rev or absolute a.u. (repeatable)")
    parser.add_argument("--grid-points", dest="grid_points")
    parser.add_argument("--x-min", dest="x_min")
    parser.add_argument("--x-max", dest="x_max")
    parser.add_argument("--p-points", dest="p_points")
    parser.add_argument("--p-max", dest="p_max")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--precision", help="significant decimals in CSV output")
    parser.add_argument("-v", "--verbose", action="store_true")


def make_parser():
    parser = _Parser(prog="morsepacket",
                     description="Morse-oscillator coherent wave packets, revivals and Wigner functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="bound levels, lambda and timescales")
    _common(p)
    p.add_argument("--eigenfunctions", action="store_true", help="also write eigenfunction samples")

    p = sub.add_parser("coefficients", help="coherent-state coefficients d_m")
    _common(p)
    p.add_argument("--plot", action="store_true", help="also render a PNG")

    p = sub.add_parser("evolve", help="coordinate-space densities |chi(x,t)|^2")
    _common(p)
    p.add_argument("--plot", action="store_true", help="also render a PNG")

    p = sub.add_parser("wigner", help="Wigner function parts and moments at T_rev/8")
    _common(p)
    p.add_argument("--plot", action="store_true", help="also render a PNG")
    p.add_argument("--stride", type=int, default=1, help="keep every n-th x row in matrix CSVs")

    p = sub.add_parser("report", help="full reproduction run with pass/fail report")
    _common(p)
    p.add_argument("--no-figures", dest="figures", action="store_false", help="skip PNG rendering")
    return parser


def config_from_args(args):
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {
        "alpha": args.alpha,
        "time": args.time,
        "grid_points": args.grid_points,
        "x_min": args.x_min,
        "x_max": args.x_max,
        "p_points": args.p_points,
        "p_max": args.p_max,
        "out": args.out,
        "precision": args.precision,
    }
    return build_config(file_values, overrides)


def _outdir(cfg):
    cfg.out.mkdir(parents=True, exist_ok=True)
    return cfg.out


def _alpha_tag(alpha):
    return f"alpha{alpha:g}"


def cmd_spectrum(cfg, eigenfunctions=False):
    params = cfg.params
    out = _outdir(cfg)
    lam = morse.lambda_param(params)
    n_max = morse.bound_level_max(params)
    ts = revival.timescales(params)
    levels = np.arange(n_max + 1)
    write_table(out / "levels.csv", ["n", "E_n", "s_n"],
                [levels, morse.energies(params), 2 * lam - 1 - 2 * levels], cfg.precision)
    print(f"lambda = {lam:.10g}")
    print(f"n_max = {n_max} ({n_max + 1} bound levels)")
    print(f"T_cl = {ts.t_classical:.10g} a.u.")
    print(f"T_rev = {ts.t_revival:.10g} a.u.")
    if eigenfunctions:
        grid = cfg.grid
        basis = morse.eigenbasis(grid, params)
        write_table(out / "eigenfunctions.csv", ["x"] + [f"psi_{n}" for n in levels],
                    [grid.points, *basis], cfg.precision)
        truncated = [n for n in levels
                     if max(morse.WaveFunction(grid, basis[n]).edge_ratios()) >= morse.EDGE_DECAY]
        if truncated:
            print(f"note: levels {truncated} are not contained in the grid")
    return {"lambda": lam, "n_max": n_max, "timescales": ts}


def cmd_coefficients(cfg, plot=False):
    out = _outdir(cfg)
    cvs = [coherent.cs_coefficients(a, cfg.params) for a in cfg.alphas]
    rows = [(cv.alpha, m, d.real, d.imag, abs(d) ** 2) for cv in cvs for m, d in enumerate(cv.coeffs)]
    write_table(out / "dm.csv", ["alpha", "m", "re_d", "im_d", "abs_d_sq"],
                list(zip(*rows)), cfg.precision)
    if plot:
        from .plotting import plot_coefficients
        plot_coefficients(cvs, out / "dm.png")
    return cvs


def cmd_evolve(cfg, plot=False):
    out = _outdir(cfg)
    grid = cfg.grid
    ts = revival.timescales(cfg.params)
    densities = {}
    for alpha in cfg.alphas:
        cv = coherent.cs_coefficients(alpha, cfg.params)
        for tp in cfg.effective_times:
            t = tp.resolve(ts.t_revival)
            psi = coherent.synthesize(coherent.evolve(cv, t, cfg.params), grid, cfg.params)
            rho = psi.density()
            write_table(out / f"density_{_alpha_tag(alpha)}_{tp.label}.csv", ["x", "density"],
                        [grid.points, rho], cfg.precision)
            densities[(alpha, tp)] = rho
    if plot:
        from .plotting import plot_densities
        for alpha in cfg.alphas:
            panels = {f"t = {tp}": densities[(alpha, tp)] for tp in cfg.effective_times}
            plot_densities(grid.points, panels, out / f"density_{_alpha_tag(alpha)}.png")
    return densities


def compute_wigner(cfg, alphas):
    parts_by_alpha, moments_by_alpha = {}, {}
    for alpha in alphas:
        cv = coherent.cs_coefficients(alpha, cfg.params)
        start = time.perf_counter()
        parts = phasespace.wigner_parts_eighth(cv, cfg.grid, cfg.params, cfg.p_axis)
        parts_by_alpha[alpha] = parts
        moments_by_alpha[alpha] = phasespace.moments(parts.total)
        log.info("Wigner parts for alpha=%g in %.1f s", alpha, time.perf_counter() - start)
    return parts_by_alpha, moments_by_alpha


def write_moments(path, moments_by_alpha, precision):
    alphas = list(moments_by_alpha)
    m = [moments_by_alpha[a] for a in alphas]
    write_table(path, ["alpha", "mean_x", "mean_p", "sigma_x", "sigma_p", "dx_dp", "sub_planck_area"],
                [alphas, [v.mean_x for v in m], [v.mean_p for v in m], [v.sigma_x for v in m],
                 [v.sigma_p for v in m], [v.uncertainty_product for v in m],
                 [phasespace.sub_planck_area(v) for v in m]], precision)


def cmd_wigner(cfg, plot=False, stride=1):
    if stride < 1:
        raise ConfigError("--stride must be >= 1")
    out = _outdir(cfg)
    parts_by_alpha, moments_by_alpha = compute_wigner(cfg, cfg.alphas)
    for alpha, parts in parts_by_alpha.items():
        for name, field in zip(("even", "odd", "int", "total"), parts):
            write_matrix(out / f"W_{name}_{_alpha_tag(alpha)}.csv", field.x_axis.points,
                         field.p_axis.points, field.values, cfg.precision, stride=stride)
        m = moments_by_alpha[alpha]
        print(f"alpha = {alpha:g}: dx dp = {m.uncertainty_product:.6f}, "
              f"a = {phasespace.sub_planck_area(m):.6f}")
    write_moments(out / "moments.csv", moments_by_alpha, cfg.precision)
    if plot:
        from .plotting import plot_wigner_parts
        plot_wigner_parts(parts_by_alpha, out / "wigner_parts.png")
    return parts_by_alpha, moments_by_alpha


def _report_text(cfg, checks, elapsed):
    params = cfg.params
    ts = revival.timescales(params)
    grid, p_axis = cfg.grid, cfg.p_axis
    passed = sum(c.passed for c in checks)
    lines = [
        "morsepacket reproduction report",
        f"molecule: D={params.D:g} beta={params.beta:g} mu={params.mu:g} r0={params.r0:g}",
        f"lambda = {morse.lambda_param(params):.10g}, n_max = {morse.bound_level_max(params)}",
        f"T_cl = {ts.t_classical:.10g} a.u., T_rev = {ts.t_revival:.10g} a.u.",
        f"x grid: [{grid.x_min:g}, {grid.x_max:g}] x {grid.n_points}",
        f"p grid: [{p_axis.p_min:g}, {p_axis.p_max:g}] x {p_axis.n_points}",
        f"times: {', '.join(str(t) for t in cfg.effective_times)}",
        "",
    ]
    lines += [c.line() for c in checks]
    lines += ["", f"summary: {passed}/{len(checks)} checks passed "
                  f"({'ALL PASS' if passed == len(checks) else 'FAILURES'}) in {elapsed:.1f} s"]
    return "\n".join(lines) + "\n"


def cmd_report(cfg, figures=True):
    start = time.perf_counter()
    out = _outdir(cfg)
    reference_alphas = tuple(report.REFERENCE_PRODUCTS)
    alphas = tuple(dict.fromkeys(reference_alphas + tuple(cfg.alphas)))
    cfg_all = replace(cfg, alphas=alphas)

    cmd_spectrum(cfg_all)
    cmd_coefficients(cfg_all, plot=figures)
    densities = {}
    try:
        densities = cmd_evolve(cfg_all, plot=False)
    except MorsePacketError as exc:
        log.warning("density snapshots failed: %s", exc)
    try:
        parts_by_alpha, moments_by_alpha = compute_wigner(cfg_all, reference_alphas)
        write_moments(out / "moments.csv", moments_by_alpha, cfg.precision)
    except MorsePacketError as exc:
        log.warning("Wigner parts failed: %s", exc)
        parts_by_alpha, moments_by_alpha = {}, {}

    checks = report.run_all(cfg.grid, cfg.params, cfg.p_axis, parts_by_alpha, moments_by_alpha)
    text = _report_text(cfg_all, checks, time.perf_counter() - start)
    (out / "report.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)

    if figures:
        from .plotting import plot_densities, plot_wigner_parts
        for alpha in alphas:
            panels = {f"t = {tp}": densities[(alpha, tp)]
                      for tp in cfg_all.effective_times if (alpha, tp) in densities}
            if panels:
                plot_densities(cfg.grid.points, panels, out / f"density_{_alpha_tag(alpha)}.png")
        if parts_by_alpha:
            plot_wigner_parts(parts_by_alpha, out / "wigner_parts.png")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERICAL


def main(argv=None):
    logging.basicConfig(format="%(levelname)s: %(message)s")
    try:
        args = make_parser().parse_args(argv)
        if args.verbose:
            log.setLevel(logging.INFO)
        cfg = config_from_args(args)
        if args.command == "spectrum":
            cmd_spectrum(cfg, args.eigenfunctions)
        elif args.command == "coefficients":
            cmd_coefficients(cfg, args.plot)
        elif args.command == "evolve":
            cmd_evolve(cfg, args.plot)
        elif args.command == "wigner":
            cmd_wigner(cfg, args.plot, args.stride)
        else:
            return cmd_report(cfg, args.figures)
    except (ConfigError, ContractError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ToleranceError, TruncationError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
