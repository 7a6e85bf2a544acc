"""Batch front-end: spectrum / packet / evolve / revival / gauss / sweep."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .direct import discretize, window_spectrum
from .dynamics import (
    AutocorrelationSeries,
    autocorrelation,
    check_time_scale,
    default_alpha,
    default_beta,
    detect_peaks,
    exact_series,
    fractional_prediction,
    order1_closed_form,
    order1_series,
    order2_series,
)
from .errors import ConfigError, NumericalFailure, RevivalKitError
from .gausssum import coefficients, modulus_law, periodicity_set
from .model import SpectralModel, interleaving_violations, select_alpha_near
from .output import write_csv, write_json, write_plot_script
from .packet import PROFILES, PacketSpec, build_coefficients, select_centers, split_sets
from .potential import canonical_double_well, flow_period
from .util import linear_fit

HYPERBOLIC_SAMPLES = 64
REVIVAL_SAMPLES = 16
MAX_SAMPLES = 2_000_000

POTENTIALS = {"quartic": canonical_double_well}


def _out_dir(args, command: str) -> Path:
    if args.out:
        return Path(args.out)
    env = os.environ.get("REVIVALKIT_OUT")
    if env:
        return Path(env) / command
    return Path("runs") / command


def _potential(args):
    try:
        return POTENTIALS[args.potential]()
    except KeyError:
        raise ConfigError(
            f"unknown potential {args.potential!r}; choices: {sorted(POTENTIALS)}"
        ) from None


def _profile(name: str):
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigError(
            f"unknown profile {name!r}; choices: {sorted(PROFILES)}"
        ) from None


def _parse_h_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad h list {text!r}: {exc}") from None
    if not values or any(not 0.0 < v < 1.0 for v in values):
        raise ConfigError("every h must lie in (0, 1)")
    return values


def _packet_spec(args, gamma_default: float, gamma_prime_default: float) -> PacketSpec:
    gamma = gamma_default if args.gamma is None else args.gamma
    gamma_prime = (
        gamma_prime_default if args.gamma_prime is None else args.gamma_prime
    )
    return PacketSpec(
        energy=args.E,
        gamma=gamma,
        gamma_prime=gamma_prime,
        h=args.h,
        chi=_profile(args.chi),
    )


def _model_pipeline(args, spec: PacketSpec):
    """Window, packet on the extended ladder, and phase data at the center."""
    model = SpectralModel(_potential(args), args.h)
    window = model.solve_families()
    n0, m0 = select_centers(window, spec.energy)
    radius = int(math.ceil(10.0 * spec.width))
    ladder = model.solve_ladder(window.alpha_lambdas[n0], n_side=radius + 3)
    packet = build_coefficients(spec, n0, index_set=ladder.keys())
    phase = model.phase_data(ladder, n0)
    return model, window, ladder, packet, phase, m0


def _spectrum_outputs(args, outdir: Path) -> dict:
    manifest: dict = {"h": args.h, "backend": args.backend}
    potential = _potential(args)
    if args.backend in ("model", "both"):
        window = SpectralModel(potential, args.h).solve_families()
        write_csv(
            outdir / "model_spectrum.csv",
            ["family", "index", "lambda", "eigenvalue", "gap_to_next"],
            window.csv_rows(),
        )
        pooled = [v for _, _, v in window.all_sorted()]
        manifest["model"] = {
            "count_alpha": len(window.alphas),
            "count_beta": len(window.betas),
            "interleaving_violations": interleaving_violations(window),
            "mean_gap_pooled": float(np.mean(np.diff(pooled))) if len(pooled) > 1 else None,
        }
    if args.backend in ("direct", "both"):
        op = discretize(potential, args.h, order=args.fd_order)
        spectrum = window_spectrum(op)
        write_csv(
            outdir / "direct_spectrum.csv",
            ["family", "index", "lambda", "eigenvalue", "gap_to_next", "parity"],
            spectrum.csv_rows(),
        )
        manifest["direct"] = {
            "count": len(spectrum.eigenvalues),
            "grid_points": len(op.grid),
            "dx": op.dx,
            "mean_gap_pooled": float(np.mean(spectrum.gaps()))
            if len(spectrum.eigenvalues) > 1
            else None,
        }
    return manifest


def cmd_spectrum(args) -> int:
    outdir = _out_dir(args, "spectrum")
    manifest = _spectrum_outputs(args, outdir)
    write_json(outdir / "manifest.json", manifest)
    write_plot_script(
        outdir / "plot.gp",
        f"spectral window at h={args.h:g}",
        [("model_spectrum.csv", "4:3", "model")]
        if args.backend in ("model", "both")
        else [("direct_spectrum.csv", "3:2", "direct")],
    )
    print(f"wrote {outdir}")
    return 0


def cmd_packet(args) -> int:
    outdir = _out_dir(args, "packet")
    spec = _packet_spec(args, gamma_default=0.3, gamma_prime_default=0.8)
    model = SpectralModel(_potential(args), args.h)
    window = model.solve_families()
    n0, m0 = select_centers(window, spec.energy)
    packet = build_coefficients(spec, n0)
    sets = split_sets(spec, packet)
    write_csv(
        outdir / "coefficients.csv",
        ["index", "offset", "a_n", "weight"],
        packet.csv_rows(),
    )
    manifest = {
        "h": args.h,
        "energy": spec.energy,
        "gamma": spec.gamma,
        "gamma_prime": spec.gamma_prime,
        "profile": getattr(spec.chi, "label", "custom"),
        "center_alpha": n0,
        "center_beta": m0,
        "width": spec.width,
        "truncation_radius": packet.truncation_radius,
        "k_exact": packet.k_exact,
        "k_closed_form": packet.k_closed_form,
        "k_relative_error": (
            abs(packet.k_exact - packet.k_closed_form) / packet.k_closed_form
            if packet.k_closed_form
            else None
        ),
        "delta_cardinality": sets.delta_cardinality,
        "gamma_mass": sets.gamma_mass,
    }
    write_json(outdir / "manifest.json", manifest)
    write_plot_script(
        outdir / "plot.gp",
        f"packet coefficients at h={args.h:g}",
        [("coefficients.csv", "2:4", "|a_n|^2")],
    )
    print(f"wrote {outdir}")
    return 0


def cmd_evolve(args) -> int:
    outdir = _out_dir(args, "evolve")
    spec = _packet_spec(args, gamma_default=0.9, gamma_prime_default=0.2)
    alpha = default_alpha(spec.gamma) if args.alpha is None else args.alpha
    model, window, ladder, packet, phase, m0 = _model_pipeline(args, spec)
    t_hyp = abs(phase.t_hyp)
    t_end = args.periods * t_hyp
    n_samples = min(MAX_SAMPLES, max(256, int(HYPERBOLIC_SAMPLES * args.periods)))
    t = np.linspace(0.0, t_end, n_samples)
    check_time_scale(t, args.h, alpha)
    r_exact = exact_series(ladder, packet, t)
    a1 = order1_series(packet, phase, t)
    a2 = order2_series(packet, phase, t)
    # the initial state is alpha-family localized, so r(t) equals the
    # partial autocorrelation a(t); both columns are emitted
    columns = {
        "t_over_thyp": t / t_hyp,
        "c_exact": np.abs(r_exact),
        "a_abs": np.abs(r_exact),
        "a1_abs": np.abs(a1),
        "a2_abs": np.abs(a2),
    }
    closed = None
    if getattr(spec.chi, "chi2_fourier", None) is not None:
        closed = order1_closed_form(packet, phase, t)
        columns["closed_form"] = closed
    if args.backend in ("direct", "both"):
        columns["c_direct"] = _direct_autocorrelation(args, spec, t)
    series = AutocorrelationSeries(t=t, columns=columns)
    write_csv(
        outdir / "timeseries.csv",
        ["t"] + list(columns),
        series.rows(),
    )
    peak_period = None
    try:
        peaks = detect_peaks(t, np.abs(a1), threshold=0.5)
        peak_period = peaks.period_estimate
        if peak_period is None and len(peaks.times):
            peak_period = float(peaks.times[0])  # single recurrence seen
    except NumericalFailure:
        pass
    manifest = {
        "h": args.h,
        "energy": spec.energy,
        "gamma": spec.gamma,
        "gamma_prime": spec.gamma_prime,
        "alpha": alpha,
        "center_alpha": packet.center,
        "center_beta": m0,
        "t_hyp": phase.t_hyp,
        "t_rev": phase.t_rev,
        "n_h": phase.n_h,
        "theta_frac": phase.theta_frac,
        "curvature_at_root": phase.curvature_at_root,
        "a3_bound": phase.a3_bound,
        "samples": n_samples,
        "sup_exact_minus_order1": float(
            np.max(np.abs(r_exact - np.exp(-1j * t * phase.a0) * a1))
        ),
        "order1_peak_period": peak_period,
        "window_counts": [len(window.alphas), len(window.betas)],
    }
    write_json(outdir / "manifest.json", manifest)
    write_plot_script(
        outdir / "plot.gp",
        f"autocorrelation at h={args.h:g}",
        [("timeseries.csv", "2:3", "exact"), ("timeseries.csv", "2:4", "order 1")],
    )
    print(f"wrote {outdir}")
    return 0


def _direct_autocorrelation(args, spec: PacketSpec, t: np.ndarray) -> np.ndarray:
    potential = _potential(args)
    op = discretize(potential, args.h, order=args.fd_order)
    spectrum = window_spectrum(op)
    parity = args.parity
    vals = spectrum.parity_family(parity) if potential.even else spectrum.eigenvalues
    if len(vals) == 0:
        raise NumericalFailure(f"no direct states with parity {parity!r}")
    scaled = np.sort(vals) / args.h
    center = int(np.argmin(np.abs(scaled - spec.energy)))
    ladder = {i: v for i, v in enumerate(scaled)}
    packet = build_coefficients(spec, center, index_set=ladder.keys())
    return autocorrelation(ladder, packet, t)


def cmd_revival(args) -> int:
    outdir = _out_dir(args, "revival")
    spec = _packet_spec(args, gamma_default=0.3, gamma_prime_default=0.8)
    beta = default_beta(spec.gamma) if args.beta is None else args.beta
    model, window, ladder, packet, phase, _ = _model_pipeline(args, spec)
    t_hyp, t_rev = abs(phase.t_hyp), abs(phase.t_rev)
    t_end = 1.2 * t_rev
    n_samples = min(MAX_SAMPLES, max(512, int(REVIVAL_SAMPLES * t_end / t_hyp)))
    t = np.linspace(0.0, t_end, n_samples)
    check_time_scale(t, args.h, beta)
    a2 = order2_series(packet, phase, t)
    write_csv(
        outdir / "revival.csv",
        ["t", "t_over_thyp", "t_over_trev", "a2_abs"],
        zip(t, t / t_hyp, t / t_rev, np.abs(a2)),
    )
    fractional = {}
    t_clone = np.linspace(0.0, 2.0 * t_hyp, 512)
    for p, q in args.pq:
        cmp = fractional_prediction(packet, phase, p, q, t_clone)
        fractional[f"{p}/{q}"] = {
            "ell": cmp.ell,
            "sup_difference": cmp.sup_difference,
        }
    manifest = {
        "h": args.h,
        "energy": spec.energy,
        "gamma": spec.gamma,
        "gamma_prime": spec.gamma_prime,
        "beta": beta,
        "t_hyp": phase.t_hyp,
        "t_rev": phase.t_rev,
        "n_h": phase.n_h,
        "theta_frac": phase.theta_frac,
        "curvature_at_root": phase.curvature_at_root,
        "samples": n_samples,
        "fractional": fractional,
        "window_counts": [len(window.alphas), len(window.betas)],
    }
    write_json(outdir / "manifest.json", manifest)
    write_plot_script(
        outdir / "plot.gp",
        f"revival-scale dynamics at h={args.h:g}",
        [("revival.csv", "3:4", "|order-2|")],
    )
    print(f"wrote {outdir}")
    return 0


def cmd_gauss(args) -> int:
    outdir = _out_dir(args, "gauss")
    n0 = args.n0 if args.n0 is not None else 0
    pset = periodicity_set(args.p, args.q)
    coeffs = coefficients(args.p, args.q, n0)
    ell, expected = modulus_law(args.p, args.q)
    rows = []
    for k in range(coeffs.ell):
        got = float(np.abs(coeffs.values[k]) ** 2)
        want = float(expected[k]) if coeffs.ell == ell else float("nan")
        ok = abs(got - want) <= 1e-12 if not math.isnan(want) else True
        rows.append(
            (
                k,
                coeffs.values[k].real,
                coeffs.values[k].imag,
                got,
                want,
                "pass" if ok else "FAIL",
            )
        )
        print(
            f"k={k} b=({coeffs.values[k].real:+.6f},{coeffs.values[k].imag:+.6f}) "
            f"|b|^2={got:.12f} expected={want:.12f} {'pass' if ok else 'FAIL'}"
        )
    write_csv(
        outdir / "gauss_table.csv",
        ["k", "re_b", "im_b", "modulus_sq", "expected_modulus_sq", "status"],
        rows,
    )
    manifest = {
        "p": args.p,
        "q": args.q,
        "n0": n0,
        "ell": coeffs.ell,
        "lattice": pset.description,
        "parseval": float(np.sum(coeffs.moduli_squared)),
        "all_match": all(r[-1] == "pass" for r in rows),
    }
    write_json(outdir / "manifest.json", manifest)
    print(f"wrote {outdir}")
    return 0 if manifest["all_match"] else 3


def _sweep_point(args, h: float, outdir: Path) -> dict:
    potential = _potential(args)
    model = SpectralModel(potential, h)
    window = model.solve_families()
    pooled = [v for _, _, v in window.all_sorted()]
    lnh = abs(math.log(h))
    record: dict = {
        "h": h,
        "log_scale": lnh,
        "count_alpha": len(window.alphas),
        "count_beta": len(window.betas),
        "interleaving_violations": interleaving_violations(window),
        "scaled_gaps": [
            float(g * lnh / h)
            for name in ("alpha", "beta")
            for g in window.gaps(name)
        ],
    }
    write_csv(
        outdir / "model_spectrum.csv",
        ["family", "index", "lambda", "eigenvalue", "gap_to_next"],
        window.csv_rows(),
    )
    roots = model.solve_ladder(lam_center=args.E, n_side=4)
    n0 = select_alpha_near(roots, args.E)
    phase = model.phase_data(roots, n0)
    record.update(
        t_hyp=phase.t_hyp,
        t_rev=phase.t_rev,
        n_h=phase.n_h,
        theta_frac=phase.theta_frac,
        curvature_at_root=phase.curvature_at_root,
    )
    if args.classical:
        orbit = flow_period(potential, h)
        record["tau_classical"] = orbit.period
        record["energy_drift"] = orbit.energy_drift
    if args.backend in ("direct", "both"):
        op = discretize(potential, h, order=args.fd_order)
        spectrum = window_spectrum(op)
        record["direct_count"] = len(spectrum.eigenvalues)
        record["direct_mean_gap"] = (
            float(np.mean(spectrum.gaps())) if len(spectrum.eigenvalues) > 1 else None
        )
    return record


def cmd_sweep(args) -> int:
    outdir = _out_dir(args, "sweep")
    hs = args.h_list
    records: list[dict] = [None] * len(hs)

    def run(i: int) -> None:
        h = hs[i]
        sub = outdir / f"h={h:.3e}"
        records[i] = _sweep_point(args, h, sub)

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        list(pool.map(run, range(len(hs))))

    lnhs = [r["log_scale"] for r in records]
    manifest: dict = {"h_list": hs, "points": records}
    t_fit = linear_fit(lnhs, [abs(r["t_hyp"]) for r in records])
    manifest["t_hyp_fit"] = {
        "slope": t_fit.slope,
        "intercept": t_fit.intercept,
        "max_residual_over_slope": t_fit.max_abs_residual / abs(t_fit.slope),
    }
    if args.classical:
        tau_fit = linear_fit(lnhs, [r["tau_classical"] for r in records])
        manifest["tau_fit"] = {
            "slope": tau_fit.slope,
            "intercept": tau_fit.intercept,
            "max_residual_over_slope": tau_fit.max_abs_residual / abs(tau_fit.slope),
        }
    counts = [r["count_alpha"] + r["count_beta"] for r in records]
    c_fit = linear_fit(lnhs, counts)
    manifest["count_fit"] = {
        "slope": c_fit.slope,
        "intercept": c_fit.intercept,
        "rms_residual_over_mean": c_fit.rms_residual / float(np.mean(counts)),
    }
    scaled = [g for r in records for g in r["scaled_gaps"]]
    if scaled:
        manifest["scaled_gap_band"] = {
            "min": min(scaled),
            "max": max(scaled),
            "median": float(np.median(scaled)),
        }
    write_json(outdir / "manifest.json", manifest)
    write_csv(
        outdir / "sweep_summary.csv",
        ["h", "log_scale", "count_total", "t_hyp", "t_rev", "theta_frac"],
        [
            (
                r["h"],
                r["log_scale"],
                r["count_alpha"] + r["count_beta"],
                r["t_hyp"],
                r["t_rev"],
                r["theta_frac"],
            )
            for r in records
        ],
    )
    write_plot_script(
        outdir / "plot.gp",
        "sweep summary",
        [("sweep_summary.csv", "2:4", "T_hyp vs |ln h|")],
    )
    print(f"wrote {outdir}")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--potential", default="quartic")
    sub.add_argument("--out", default=None)
    sub.add_argument("--config", default=None, help="JSON file with defaults")


def _add_physics(sub: argparse.ArgumentParser, h_as_text: bool = False) -> None:
    if h_as_text:
        sub.add_argument("--h", default="1e-3,1e-4", help="comma-separated list")
    else:
        sub.add_argument("--h", type=float, default=1e-4)
    sub.add_argument("--E", type=float, default=-0.45)
    sub.add_argument("--gamma", type=float, default=None)
    sub.add_argument("--gamma-prime", dest="gamma_prime", type=float, default=None)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--chi", default="gaussian")
    sub.add_argument("--backend", choices=("model", "direct", "both"), default="model")
    sub.add_argument("--fd-order", dest="fd_order", type=int, choices=(2, 4), default=2)
    sub.add_argument("--parity", choices=("even", "odd"), default="even")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="revivalkit",
        description="barrier-top spectral model, wave packets and revival dynamics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    sub_map: dict[str, argparse.ArgumentParser] = {}

    s = subs.add_parser("spectrum", help="eigenvalue families in [-h, h]")
    _add_common(s)
    _add_physics(s)
    s.set_defaults(func=cmd_spectrum)
    sub_map["spectrum"] = s

    s = subs.add_parser("packet", help="coefficient sequence and normalization")
    _add_common(s)
    _add_physics(s)
    s.set_defaults(func=cmd_packet)
    sub_map["packet"] = s

    s = subs.add_parser("evolve", help="hyperbolic-scale autocorrelation run")
    _add_common(s)
    _add_physics(s)
    s.add_argument("--periods", type=float, default=1.0)
    s.set_defaults(func=cmd_evolve)
    sub_map["evolve"] = s

    s = subs.add_parser("revival", help="revival-scale order-2 run")
    _add_common(s)
    _add_physics(s)
    s.add_argument("--p", type=int, action="append", default=None)
    s.add_argument("--q", type=int, action="append", default=None)
    s.set_defaults(func=cmd_revival)
    sub_map["revival"] = s

    s = subs.add_parser("gauss", help="clone-coefficient table for one p/q")
    _add_common(s)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--n0", type=int, default=None)
    s.set_defaults(func=cmd_gauss)
    sub_map["gauss"] = s

    s = subs.add_parser("sweep", help="run the pipeline across an h list")
    _add_common(s)
    _add_physics(s, h_as_text=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--classical", action="store_true")
    s.set_defaults(func=cmd_sweep)
    sub_map["sweep"] = s
    return parser, sub_map


_CONFIG_KEYS = {
    "potential", "out", "h", "E", "gamma", "gamma_prime", "alpha", "beta",
    "chi", "backend", "fd_order", "parity", "periods", "p", "q", "n0",
    "jobs", "classical",
}


def _config_defaults(argv: list[str]) -> dict:
    """Config-file values become subcommand defaults; flags override them."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(payload, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    for key, value in payload.items():
        dest = key.replace("-", "_")
        if dest not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        out[dest] = value
    return out


def _normalize(args: argparse.Namespace) -> argparse.Namespace:
    if args.command == "sweep":
        if isinstance(args.h, str):
            args.h_list = _parse_h_list(args.h)
        elif isinstance(args.h, (int, float)):
            args.h_list = [float(args.h)]
        else:
            args.h_list = [float(v) for v in args.h]
    if args.command == "revival":
        ps = args.p if args.p else [1]
        qs = args.q if args.q else [2]
        ps = ps if isinstance(ps, list) else [ps]
        qs = qs if isinstance(qs, list) else [qs]
        if len(ps) != len(qs):
            raise ConfigError("--p and --q must be given the same number of times")
        args.pq = [(int(p), int(q)) for p, q in zip(ps, qs)]
    if args.command == "gauss":
        if args.p is None or args.q is None:
            raise ConfigError("gauss requires --p and --q (flags or config file)")
    return args


def main(argv: list[str] | None = None) -> int:
    parser, sub_map = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        defaults = _config_defaults(argv)
        if defaults:
            command = next((tok for tok in argv if tok in sub_map), None)
            if command is not None:
                sub_map[command].set_defaults(**defaults)
        args = parser.parse_args(argv)
        args = _normalize(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    except RevivalKitError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
