"""Mixed fractional information along the stable interpolation path.

Two routes to the same number are provided.  The chain route multiplies the
scale derivative of the relative entropy, ``D'(v)``, by ``alpha (v - s)/s``.
The integral route integrates ``x g_v(x)`` against the score difference and
multiplies by ``(v - s)/(s v)``.  Their agreement is the consistency
identity

    D'(v) = 1/(alpha v) * int x g_v(x) (score_v(x) - score_s(x)) dx,

which :func:`check_consistency` tests numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .info import (
    EntropyDerivativeConfig,
    ScoreMethod,
    ScorePair,
    StencilEstimate,
    d_prime_cauchy_closed,
    d_prime_gaussian_closed,
    d_prime_numeric,
    default_tolerance,
    relative_entropy_cauchy_closed,
    score_difference,
)
from .quadrature import Interval, QuadratureError, QuadratureResult, Tolerance, integrate
from .stable import check_alpha, check_scale, pdf

__all__ = [
    "ConsistencyRecord",
    "DegenerateRatio",
    "InterpolationPath",
    "MfiResult",
    "SweepRow",
    "best_h",
    "check_consistency",
    "closed_form_d_prime",
    "consistency_integral",
    "consistency_rhs",
    "lsi_ratio_cauchy",
    "mfi_cauchy_closed",
    "mfi_chain",
    "mfi_integral",
    "mfi_both",
    "positivity_sweep",
    "score_u",
]


class DegenerateRatio(ZeroDivisionError):
    """The entropy/information ratio is 0/0 at v == s."""


@dataclass(frozen=True)
class InterpolationPath:
    """Scales ``v(t) = (1 - t) v0 + t target`` of ``(1-t)^(1/alpha) X0 + t^(1/alpha) Z``."""

    v0: float
    target: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "v0", check_scale(self.v0))
        object.__setattr__(self, "target", check_scale(self.target))
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    def scale_at(self, t: float) -> float:
        if not 0.0 <= t < 1.0:
            raise ValueError(f"path time must lie in [0, 1), got {t!r}")
        return (1.0 - t) * self.v0 + t * self.target


def score_u(path: InterpolationPath, x, t: float = 0.0):
    """Transport score ``x (1/s - 1/v(t))`` of a stable initial law."""
    vt = path.scale_at(t)
    x = np.asarray(x, dtype=float)
    out = x * (1.0 / path.target - 1.0 / vt)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MfiResult:
    chain_value: float
    integral_value: float
    abs_discrepancy: float
    rel_discrepancy: float

    @classmethod
    def compare(cls, chain: float, integral: float) -> "MfiResult":
        diff = abs(chain - integral)
        rel = diff / abs(integral) if integral != 0.0 else diff
        return cls(chain, integral, diff, rel)


def mfi_chain(alpha: float, v: float, s: float, d_prime: float) -> float:
    """``alpha * D'(v) * (v - s) / s``."""
    alpha, v, s = check_alpha(alpha), check_scale(v), check_scale(s)
    if v == s:
        return 0.0
    return alpha * d_prime * (v - s) / s


def consistency_integral(alpha: float, v: float, s: float,
                         method: ScoreMethod = ScoreMethod(),
                         tol: Tolerance | None = None) -> QuadratureResult:
    """``int x g_v(x) (score_v(x) - score_s(x)) dx`` over the real line."""
    pair = ScorePair.of(alpha, v, s)
    if v == s:
        return QuadratureResult(0.0, 0.0, 0)
    tol = default_tolerance(pair.alpha) if tol is None else tol

    def integrand(x):
        return x * pdf(pair.v_spec, x) * score_difference(pair, x, method)

    return integrate(integrand, Interval.real_line(), tol)


def consistency_rhs(alpha: float, v: float, s: float,
                    method: ScoreMethod = ScoreMethod(), tol: Tolerance | None = None) -> float:
    return consistency_integral(alpha, v, s, method, tol).value / (alpha * v)


def mfi_integral(alpha: float, v: float, s: float,
                 method: ScoreMethod = ScoreMethod(), tol: Tolerance | None = None) -> float:
    """``(v - s)/(s v) * int x g_v (score_v - score_s) dx``."""
    if v == s:
        return 0.0
    return (v - s) / (s * v) * consistency_integral(alpha, v, s, method, tol).value


def mfi_cauchy_closed(v: float, s: float) -> float:
    """``(v - s)^2 / (s v (v + s))``."""
    v, s = check_scale(v), check_scale(s)
    return (v - s) ** 2 / (s * v * (v + s))


def closed_form_d_prime(alpha: float, v: float, s: float) -> float | None:
    """Exact ``D'(v)`` for the Cauchy and Gaussian families, else None."""
    if alpha == 1.0:
        return d_prime_cauchy_closed(v, s)
    if alpha == 2.0:
        return d_prime_gaussian_closed(v, s)
    return None


def best_h(estimates: list[StencilEstimate]) -> StencilEstimate:
    """Pick the step on the flattest stretch of the ladder.

    Among consecutive successful pairs (ladder order as given) the pair
    with the smallest difference wins and its larger step is returned.
    A single usable estimate is returned as is.
    """
    good = [e for e in estimates if e.ok]
    if not good:
        raise ValueError("no successful stencil estimates")
    if len(good) == 1:
        return good[0]
    ladder = sorted(good, key=lambda e: -e.h)
    pairs = zip(ladder[:-1], ladder[1:])
    return min(pairs, key=lambda p: abs(p[0].value - p[1].value))[0]


def _numeric_d_prime(alpha, v, s, cfg, tol) -> float:
    return best_h(d_prime_numeric(ScorePair.of(alpha, v, s), cfg, tol)).value


def mfi_both(alpha: float, v: float, s: float, method: ScoreMethod = ScoreMethod(),
             tol: Tolerance | None = None,
             cfg: EntropyDerivativeConfig = EntropyDerivativeConfig()) -> MfiResult:
    """Both formulations side by side.

    The chain route uses the exact ``D'`` for alpha in {1, 2} and the
    best-h stencil estimate otherwise.
    """
    if v == s:
        return MfiResult(0.0, 0.0, 0.0, 0.0)
    dp = closed_form_d_prime(alpha, v, s)
    if dp is None:
        dp = _numeric_d_prime(alpha, v, s, cfg, tol)
    return MfiResult.compare(mfi_chain(alpha, v, s, dp), mfi_integral(alpha, v, s, method, tol))


@dataclass(frozen=True)
class ConsistencyRecord:
    h: float | None
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    error: str | None = None

    @classmethod
    def build(cls, h, lhs, rhs, error=None) -> "ConsistencyRecord":
        if error is not None or not math.isfinite(lhs):
            return cls(h, lhs, rhs, math.nan, math.nan, error)
        diff = abs(lhs - rhs)
        # the identity is 0 = 0 at v == s
        rel = diff / abs(rhs) if rhs != 0.0 else diff
        return cls(h, lhs, rhs, diff, rel, None)


def check_consistency(alpha: float, v: float, s: float,
                      cfg: EntropyDerivativeConfig = EntropyDerivativeConfig(),
                      method: ScoreMethod = ScoreMethod(), tol: Tolerance | None = None,
                      tier: int | None = None) -> list[ConsistencyRecord]:
    """Compare ``D'(v)`` with the score integral.

    Tier 1 (default for alpha in {1, 2}) uses the exact ``D'`` and yields a
    single record with ``h=None``.  Tier 2 yields one record per step size
    of ``cfg``; a failed step is recorded with its error message.
    """
    alpha, v, s = check_alpha(alpha), check_scale(v), check_scale(s)
    exact = closed_form_d_prime(alpha, v, s)
    if tier is None:
        tier = 1 if exact is not None else 2
    if tier == 1 and exact is None:
        raise ValueError("tier 1 needs alpha = 1 or alpha = 2")
    if tier not in (1, 2):
        raise ValueError(f"tier must be 1 or 2, got {tier!r}")

    if v == s:
        if tier == 1:
            return [ConsistencyRecord.build(None, 0.0, 0.0)]
        return [ConsistencyRecord.build(h, 0.0, 0.0) for h in cfg.h_values]

    rhs = consistency_rhs(alpha, v, s, method, tol)
    if tier == 1:
        return [ConsistencyRecord.build(None, exact, rhs)]
    return [ConsistencyRecord.build(e.h, e.value, rhs, e.error)
            for e in d_prime_numeric(ScorePair.of(alpha, v, s), cfg, tol)]


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    v: float
    s: float
    mfi: float
    error: str | None = None


def positivity_sweep(alpha_grid, ratio_grid, s: float = 1.0,
                     cfg: EntropyDerivativeConfig = EntropyDerivativeConfig(),
                     tol: Tolerance | None = None) -> list[SweepRow]:
    """Chain-route MFI over a grid of stability indices and ratios ``v/s``.

    ``D'`` is exact for alpha in {1, 2} and the best-h stencil estimate
    otherwise.  Failed points carry their error message and a NaN value.
    """
    alphas = [check_alpha(a) for a in alpha_grid]
    ratios = [float(r) for r in ratio_grid]
    if not alphas or not ratios:
        raise ValueError("sweep grids must be non-empty")
    if any(not (r > 0 and math.isfinite(r)) for r in ratios):
        raise ValueError("ratios v/s must be positive")
    s = check_scale(s)
    rows = []
    for a in alphas:
        for r in ratios:
            v = r * s
            try:
                dp = closed_form_d_prime(a, v, s)
                if dp is None and v != s:
                    dp = _numeric_d_prime(a, v, s, cfg, tol)
                rows.append(SweepRow(a, v, s, mfi_chain(a, v, s, dp or 0.0)))
            except (QuadratureError, ArithmeticError, ValueError) as exc:
                rows.append(SweepRow(a, v, s, math.nan, f"{type(exc).__name__}: {exc}"))
    return rows


def lsi_ratio_cauchy(v: float, s: float) -> float:
    """``D / M_1`` for the Cauchy family; grows without bound in ``v/s``."""
    v, s = check_scale(v), check_scale(s)
    if v == s:
        raise DegenerateRatio("D/M_1 is 0/0 at v == s")
    return relative_entropy_cauchy_closed(v, s) / mfi_cauchy_closed(v, s)
