"""Data for the integrand figure: u(x, 0), the score difference and their
product with g_v, at alpha=1.5, v=1.2, s=1 by default.

Writes a CSV; plotting is left to whatever tool reads it.

    python scripts/figure_integrand.py --out integrand.csv
"""

import argparse
from dataclasses import dataclass

import numpy as np

from stableinfo.report import integrand_curve


@dataclass(frozen=True)
class FigureConfig:
    alpha: float = 1.5
    v: float = 1.2
    s: float = 1.0
    x_min: float = -10.0
    x_max: float = 10.0
    n_points: int = 401


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="integrand.csv")
    ap.add_argument("--alpha", type=float, default=FigureConfig.alpha)
    args = ap.parse_args()
    cfg = FigureConfig(alpha=args.alpha)

    curve = integrand_curve(cfg.alpha, cfg.v, cfg.s, cfg.x_min, cfg.x_max, cfg.n_points)
    with open(args.out, "w") as fh:
        fh.write(curve.to_csv())
    peak = int(np.argmax(curve.integrand))
    # trapezoid over the window only; the full-line value comes from adaptive quadrature
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    window = trapezoid(curve.integrand, curve.x_grid)
    print(f"wrote {len(curve.x_grid)} rows to {args.out}")
    print(f"integrand peak {curve.integrand[peak]:.6f} at |x| = {abs(curve.x_grid[peak]):.3f}")
    print(f"window integral on [{cfg.x_min:g}, {cfg.x_max:g}]: {window:.8f}")


if __name__ == "__main__":
    main()
