#!/usr/bin/env python3
"""Scaling sweep: classical period, hyperbolic period, window counts vs |ln h|."""
from __future__ import annotations

import argparse
import math
import sys


from revivalkit.model import SpectralModel, select_alpha_near
from revivalkit.output import write_csv, write_json
from revivalkit.potential import canonical_double_well, flow_period
from revivalkit.util import linear_fit


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--h", default="1e-2,1e-3,1e-4,1e-5,1e-6")
    ap.add_argument("--E", type=float, default=-0.45)
    ap.add_argument("--out", default="runs/sweep_scaling")
    args = ap.parse_args()
    hs = [float(tok) for tok in args.h.split(",")]

    quartic = canonical_double_well()
    rows, lnhs, taus, t_hyps, counts = [], [], [], [], []
    for h in hs:
        lnh = abs(math.log(h))
        tau = flow_period(quartic, h).period
        model = SpectralModel(quartic, h)
        window = model.solve_families()
        roots = model.solve_ladder(lam_center=args.E, n_side=5)
        n0 = select_alpha_near(roots, args.E)
        phase = model.phase_data(roots, n0)
        total = len(window.alphas) + len(window.betas)
        rows.append((h, lnh, tau, abs(phase.t_hyp), abs(phase.t_rev), total))
        lnhs.append(lnh)
        taus.append(tau)
        t_hyps.append(abs(phase.t_hyp))
        counts.append(total)
        print(
            f"h={h:g}: tau={tau:.4f} |T_hyp|={abs(phase.t_hyp):.4f} "
            f"|T_rev|={abs(phase.t_rev):.2f} count={total}"
        )

    tau_fit = linear_fit(lnhs, taus)
    hyp_fit = linear_fit(lnhs, t_hyps)
    count_fit = linear_fit(lnhs, counts)
    write_csv(
        f"{args.out}/sweep.csv",
        ["h", "log_scale", "tau_classical", "t_hyp_abs", "t_rev_abs", "count"],
        rows,
    )
    write_json(
        f"{args.out}/manifest.json",
        {
            "tau_fit": {"slope": tau_fit.slope, "intercept": tau_fit.intercept,
                        "max_residual_over_slope":
                            tau_fit.max_abs_residual / abs(tau_fit.slope)},
            "t_hyp_fit": {"slope": hyp_fit.slope, "intercept": hyp_fit.intercept},
            "count_fit": {"slope": count_fit.slope, "intercept": count_fit.intercept},
        },
    )
    print(
        f"tau slope {tau_fit.slope:.4f} (1/sqrt(-V''(0)) = "
        f"{1 / math.sqrt(2):.4f}); wrote {args.out}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
