"""Scores, relative entropy between two scales of one stable family, and its
derivative in the first scale.

Everything here compares ``g_v`` and ``g_s``: two members of the same
alpha-family that differ only in scale.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import (
    QuadratureError,
    TIER1_TOLERANCE,
    TIER2_TOLERANCE,
    Interval,
    Tolerance,
    integrate,
)
from .stable import DensitySpec, check_scale, log_pdf, log_pdf_dx

__all__ = [
    "DEFAULT_H_VALUES",
    "EntropyDerivativeConfig",
    "EntropyResult",
    "ScoreKind",
    "ScoreMethod",
    "ScorePair",
    "StencilEstimate",
    "d_prime_cauchy_closed",
    "d_prime_gaussian_closed",
    "d_prime_numeric",
    "default_tolerance",
    "fisher_score",
    "five_point",
    "relative_entropy",
    "relative_entropy_cauchy_closed",
    "relative_entropy_gaussian_closed",
    "relative_entropy_result",
    "score_difference",
]

# default stencil ladder, coarse to fine
DEFAULT_H_VALUES = (1e-2, 5e-3, 1e-3, 5e-4, 1e-4)


class ScoreKind(str, enum.Enum):
    ANALYTIC = "analytic"
    LOG_DERIVATIVE_FD = "fd"


@dataclass(frozen=True)
class ScoreMethod:
    """How scores are computed.

    ``ANALYTIC`` uses ``g'/g`` from the density engine (closed forms for
    Cauchy and Gauss).  ``LOG_DERIVATIVE_FD`` differentiates ``log g`` with
    a five-point stencil of step ``fd_step``.
    """

    kind: ScoreKind = ScoreKind.ANALYTIC
    fd_step: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "kind", ScoreKind(self.kind))
        if not (1e-8 <= self.fd_step <= 1e-3):
            raise ValueError(f"fd_step must lie in [1e-8, 1e-3], got {self.fd_step!r}")

    @classmethod
    def finite_difference(cls, step: float = 1e-6) -> "ScoreMethod":
        return cls(ScoreKind.LOG_DERIVATIVE_FD, step)


@dataclass(frozen=True)
class ScorePair:
    v_spec: DensitySpec
    s_spec: DensitySpec

    def __post_init__(self):
        if self.v_spec.alpha != self.s_spec.alpha:
            raise ValueError(
                f"score pairs need one stability index, got {self.v_spec.alpha} "
                f"and {self.s_spec.alpha}")

    @classmethod
    def of(cls, alpha: float, v: float, s: float) -> "ScorePair":
        return cls(DensitySpec(alpha, v), DensitySpec(alpha, s))

    @property
    def alpha(self) -> float:
        return self.v_spec.alpha

    @property
    def v(self) -> float:
        return self.v_spec.scale

    @property
    def s(self) -> float:
        return self.s_spec.scale

    def with_v(self, v: float) -> "ScorePair":
        return ScorePair(self.v_spec.with_scale(v), self.s_spec)


def default_tolerance(alpha: float) -> Tolerance:
    """Tight settings where closed forms exist, looser for general alpha."""
    return TIER1_TOLERANCE if alpha in (1.0, 2.0) else TIER2_TOLERANCE


def five_point(f, x, h):
    """O(h^4) central difference ``(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h))/(12h)``."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def fisher_score(spec: DensitySpec, x, method: ScoreMethod = ScoreMethod()):
    """Fisher score ``g'(x)/g(x)``; odd in ``x``."""
    if method.kind is ScoreKind.ANALYTIC:
        return log_pdf_dx(spec, x)
    x = np.asarray(x, dtype=float)
    h = method.fd_step
    # one engine call for all four stencil nodes
    shifts = np.array([2 * h, h, -h, -2 * h]).reshape((4,) + (1,) * x.ndim)
    logs = log_pdf(spec, x[None, ...] + shifts)
    out = (-logs[0] + 8 * logs[1] - 8 * logs[2] + logs[3]) / (12 * h)
    return float(out) if x.ndim == 0 else out


def score_difference(pair: ScorePair, x, method: ScoreMethod = ScoreMethod()):
    """``score_v(x) - score_s(x)``."""
    return fisher_score(pair.v_spec, x, method) - fisher_score(pair.s_spec, x, method)


@dataclass(frozen=True)
class EntropyResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    # nodes where a log-density came back as -inf and contributed nothing
    log_zero_nodes: int = 0


def relative_entropy_result(pair: ScorePair, tol: Tolerance | None = None) -> EntropyResult:
    """``D(g_v || g_s) = int g_v (log g_v - log g_s)`` over the whole line."""
    if pair.v == pair.s:
        return EntropyResult(0.0, 0.0, 0)
    tol = default_tolerance(pair.alpha) if tol is None else tol
    zero_nodes = [0]

    def integrand(x):
        lv = log_pdf(pair.v_spec, x)
        ls = log_pdf(pair.s_spec, x)
        bad = ~(np.isfinite(lv) & np.isfinite(ls))
        if bad.any():
            zero_nodes[0] += int(bad.sum())
            lv = np.where(bad, -np.inf, lv)
            out = np.exp(lv) * np.where(bad, 0.0, lv - np.where(bad, 0.0, ls))
            return np.where(bad, 0.0, out)
        return np.exp(lv) * (lv - ls)

    res = integrate(integrand, Interval.real_line(), tol)
    return EntropyResult(res.value, res.abs_error_estimate, res.evaluations, zero_nodes[0])


def relative_entropy(pair: ScorePair, tol: Tolerance | None = None) -> float:
    return relative_entropy_result(pair, tol).value


def relative_entropy_cauchy_closed(v: float, s: float) -> float:
    """``log((v+s)^2 / (4 v s))``."""
    v, s = check_scale(v), check_scale(s)
    return math.log((v + s) ** 2 / (4.0 * v * s))


def relative_entropy_gaussian_closed(v: float, s: float) -> float:
    """KL divergence of N(0, 2v) from N(0, 2s): ``(v/s - 1 - log(v/s)) / 2``."""
    v, s = check_scale(v), check_scale(s)
    r = v / s
    return 0.5 * (r - 1.0 - math.log(r))


def d_prime_cauchy_closed(v: float, s: float) -> float:
    """``d/dv log((v+s)^2/(4vs)) = (v - s) / (v (v + s))``."""
    v, s = check_scale(v), check_scale(s)
    return (v - s) / (v * (v + s))


def d_prime_gaussian_closed(v: float, s: float) -> float:
    """``d/dv (v/s - 1 - log(v/s))/2 = (v - s) / (2 v s)``."""
    v, s = check_scale(v), check_scale(s)
    return (v - s) / (2.0 * v * s)


@dataclass(frozen=True)
class EntropyDerivativeConfig:
    h_values: tuple = DEFAULT_H_VALUES
    stencil: str = "five-point"

    def __post_init__(self):
        hs = tuple(float(h) for h in self.h_values)
        if not hs:
            raise ValueError("need at least one step size")
        if any(not (math.isfinite(h) and h > 0) for h in hs):
            raise ValueError(f"step sizes must be positive, got {hs}")
        if self.stencil != "five-point":
            raise ValueError(f"unsupported stencil {self.stencil!r}")
        object.__setattr__(self, "h_values", hs)

    def check(self, v: float, s: float) -> None:
        limit = min(v, s) / 4.0
        too_big = [h for h in self.h_values if not h < limit]
        if too_big:
            raise ValueError(f"step sizes {too_big} not below min(v, s)/4 = {limit:g}")


@dataclass(frozen=True)
class StencilEstimate:
    h: float
    value: float
    error: str | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.error is None


def d_prime_numeric(pair: ScorePair, cfg: EntropyDerivativeConfig = EntropyDerivativeConfig(),
                    tol: Tolerance | None = None) -> list[StencilEstimate]:
    """Five-point estimates of ``dD/dv`` at ``pair.v``, one per step size.

    A failed entropy integral marks only its own step size.  At ``v == s``
    every estimate is exactly 0, the minimum of ``D``.
    """
    cfg.check(pair.v, pair.s)
    if pair.v == pair.s:
        return [StencilEstimate(h, 0.0) for h in cfg.h_values]
    out = []
    for h in cfg.h_values:
        try:
            d = {k: relative_entropy(pair.with_v(pair.v + k * h), tol) for k in (2, 1, -1, -2)}
        except QuadratureError as exc:
            out.append(StencilEstimate(h, math.nan, f"{type(exc).__name__}: {exc}"))
            continue
        out.append(StencilEstimate(h, (-d[2] + 8 * d[1] - 8 * d[-1] + d[-2]) / (12 * h)))
    return out
