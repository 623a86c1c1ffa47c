"""Symmetric alpha-stable densities in the ``exp(-s |k|^alpha)`` convention.

A law is a :class:`DensitySpec` ``(alpha, scale)`` whose characteristic
function is ``exp(-scale * |k|**alpha)``.  Under this convention the scales
of independent summands add, ``alpha = 1`` is the Cauchy law with density
``s / (pi (s^2 + x^2))`` and ``alpha = 2`` is the centred normal law with
variance ``2 s``.  Location-scale users (scipy's ``levy_stable`` with
``beta = 0``) should go through :meth:`DensitySpec.from_location_scale`.

Every evaluation is reduced to the unit-scale density through
``g_s(x) = s^(-1/alpha) g_1(s^(-1/alpha) x)``.  The unit density is obtained
by Fourier inversion,

    g_1(z) = (1/pi) int_0^inf exp(-k^alpha) cos(k z) dk,

for ``|z|`` up to a per-alpha crossover, and from the power-law asymptotic
series of the density beyond it.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import QuadratureError, Tolerance, oscillatory_transform

__all__ = [
    "DensitySpec",
    "EvaluationFailure",
    "NotApplicable",
    "TailAsymptote",
    "ZeroScalar",
    "crossover",
    "inversion_pdf",
    "log_pdf",
    "log_pdf_dx",
    "pdf",
    "pdf_dx",
    "rescale",
    "tail_asymptote",
    "tail_series",
]


class EvaluationFailure(ArithmeticError):
    """The inversion integral failed below the crossover point."""


class ZeroScalar(ValueError):
    pass


class NotApplicable(ValueError):
    pass


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha <= 2.0):
        raise ValueError(f"stability index must lie in (0, 2], got {alpha!r}")
    return alpha


def check_scale(s) -> float:
    s = float(s)
    if not (math.isfinite(s) and s > 0.0):
        raise ValueError(f"scale must be positive and finite, got {s!r}")
    return s


@dataclass(frozen=True)
class DensitySpec:
    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "scale", check_scale(self.scale))

    @classmethod
    def from_location_scale(cls, alpha: float, c: float) -> "DensitySpec":
        """Build from a location-scale parameter ``c`` (CF ``exp(-|c k|^alpha)``)."""
        alpha = check_alpha(alpha)
        return cls(alpha, check_scale(c) ** alpha)

    @property
    def location_scale(self) -> float:
        """The scale ``c = s^(1/alpha)`` used by location-scale parametrizations."""
        return self.scale ** (1.0 / self.alpha)

    def with_scale(self, s: float) -> "DensitySpec":
        return DensitySpec(self.alpha, s)


@dataclass(frozen=True)
class TailAsymptote:
    coefficient: float
    crossover_x: float


def rescale(spec: DensitySpec, a: float) -> DensitySpec:
    """Law of ``a * X`` for ``X ~ spec``: the scale becomes ``|a|^alpha * s``."""
    a = float(a)
    if a == 0.0:
        raise ZeroScalar("cannot rescale by zero")
    if not math.isfinite(a):
        raise ValueError(f"rescaling factor must be finite, got {a!r}")
    return DensitySpec(spec.alpha, abs(a) ** spec.alpha * spec.scale)


# ---------------------------------------------------------------------------
# unit-scale density

_LOG_CUTOFF = math.log(1e18)
# inversion integrals are O(1) in the core; absolute accuracy is what counts
_INVERSION_TOL = Tolerance(eps_abs=1e-15, eps_rel=1e-14, max_subdivisions=400)
# crossover search: geometric grid and required agreement between branches
_GRID = 1.15 ** np.arange(0, 40)
_CROSSOVER_RTOL = 1e-11
_SERIES_TERMS = 400


def _k_max(alpha: float, weight_power: int = 0) -> float:
    # smallest k with k^p exp(-k^alpha) below 1e-18 of the envelope scale
    k = _LOG_CUTOFF ** (1.0 / alpha)
    for _ in range(4):
        k = (_LOG_CUTOFF + weight_power * math.log(max(k, 1.0))) ** (1.0 / alpha)
    return k


def _inversion(alpha: float, z: np.ndarray, derivative: bool = False) -> np.ndarray:
    if derivative:
        envelope = lambda k: k * np.exp(-k ** alpha)  # noqa: E731
        kind, k_max, sign = "sin", _k_max(alpha, 1), -1.0
    else:
        envelope = lambda k: np.exp(-k ** alpha)  # noqa: E731
        kind, k_max, sign = "cos", _k_max(alpha), 1.0
    try:
        vals, _, _ = oscillatory_transform(envelope, np.abs(z), kind, _INVERSION_TOL, k_max)
    except QuadratureError as exc:
        raise EvaluationFailure(f"inversion failed for alpha={alpha}: {exc}") from exc
    if derivative:
        vals = vals * np.sign(z)
    return sign * vals / math.pi


def tail_series(alpha: float, z, derivative: bool = False):
    """Asymptotic power series of the unit density for large ``|z|``.

    Uses ``g_1(z) ~ (1/pi) sum_n (-1)^(n+1) Gamma(n alpha + 1)/n!
    sin(n pi alpha/2) |z|^(-n alpha - 1)``, convergent for ``alpha < 1`` and
    asymptotic for ``alpha > 1``; the sum stops at the smallest term.

    Returns ``(log_leading, correction, err)`` with the density equal to
    ``exp(log_leading) * (1 + correction)`` and ``err`` the size of the first
    omitted term relative to the leading one.  With ``derivative=True`` the
    same decomposition describes ``-d g_1/d|z|``.
    """
    z = np.abs(np.asarray(z, dtype=float))
    lz = np.log(z)
    lead_coef = math.lgamma(alpha + 1.0) + math.log(math.sin(math.pi * alpha / 2.0) / math.pi)
    if derivative:
        lead_coef += math.log(alpha + 1.0)
    log_leading = lead_coef - (alpha + 1.0) * lz - (lz if derivative else 0.0)

    base1 = math.lgamma(alpha + 1.0)
    sin1 = math.sin(math.pi * alpha / 2.0)
    corr = np.zeros_like(z)
    err = np.zeros_like(z)
    active = np.ones(z.shape, dtype=bool)
    prev = np.full(z.shape, np.inf)
    for n in range(2, _SERIES_TERMS):
        # magnitude of term n relative to term 1, without the sine factor
        log_ratio = (math.lgamma(n * alpha + 1.0) - math.lgamma(n + 1.0) - base1
                     - (n - 1) * alpha * lz)
        if derivative:
            log_ratio += math.log((n * alpha + 1.0) / (alpha + 1.0))
        mag = np.exp(log_ratio)
        stop = active & ((mag > prev) | (mag < 1e-17 * (1.0 + np.abs(corr))))
        err = np.where(stop, mag, err)
        active &= ~stop
        if not active.any():
            break
        sign = (-1.0) ** (n + 1) * math.sin(n * math.pi * alpha / 2.0) / sin1
        corr = np.where(active, corr + sign * mag, corr)
        prev = mag
    err = np.where(active, prev, err)
    return log_leading, corr, err


@lru_cache(maxsize=None)
def _crossover_z(alpha: float) -> float:
    inv = _inversion(alpha, _GRID)
    log_lead, corr, err = tail_series(alpha, _GRID)
    ser = np.exp(log_lead) * (1.0 + corr)
    good = (np.abs(inv - ser) <= _CROSSOVER_RTOL * ser) & (err <= 0.1 * _CROSSOVER_RTOL)
    # require agreement to persist on the next grid point as well
    stable = good[:-1] & good[1:]
    idx = np.nonzero(stable)[0]
    if idx.size == 0:
        raise EvaluationFailure(f"no crossover to tail series found for alpha={alpha}")
    return float(_GRID[idx[0]])


_crossover_lock = threading.Lock()


def crossover(alpha: float) -> float:
    """Unit-scale point beyond which the tail series replaces inversion."""
    alpha = check_alpha(alpha)
    if alpha == 2.0:
        raise NotApplicable("the Gaussian law has no power-law tail")
    with _crossover_lock:
        return _crossover_z(alpha)


def _unit_pdf(alpha: float, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    zc = crossover(alpha)
    core = np.abs(z) <= zc
    if core.any():
        out[core] = _inversion(alpha, z[core])
    if (~core).any():
        ll, corr, _ = tail_series(alpha, z[~core])
        out[~core] = np.exp(ll) * (1.0 + corr)
    return out


def _unit_log_pdf(alpha: float, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    zc = crossover(alpha)
    core = np.abs(z) <= zc
    if core.any():
        out[core] = np.log(_inversion(alpha, z[core]))
    if (~core).any():
        ll, corr, _ = tail_series(alpha, z[~core])
        out[~core] = ll + np.log1p(corr)
    return out


def _unit_pdf_dz(alpha: float, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    zc = crossover(alpha)
    core = np.abs(z) <= zc
    if core.any():
        out[core] = _inversion(alpha, z[core], derivative=True)
    if (~core).any():
        zt = z[~core]
        ll, corr, _ = tail_series(alpha, zt, derivative=True)
        out[~core] = -np.sign(zt) * np.exp(ll) * (1.0 + corr)
    return out


# ---------------------------------------------------------------------------
# public evaluators


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("density arguments must be finite")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def pdf(spec: DensitySpec, x):
    """Density ``g_s(x)``; scalar in, float out; arrays map elementwise."""
    x = _as_array(x)
    a, s = spec.alpha, spec.scale
    if a == 1.0:
        out = s / (math.pi * (s * s + x * x))
    elif a == 2.0:
        out = np.exp(-x * x / (4.0 * s)) / math.sqrt(4.0 * math.pi * s)
    else:
        c = s ** (-1.0 / a)
        out = c * _unit_pdf(a, np.atleast_1d(c * x)).reshape(x.shape)
    return _ret(out, x)


def pdf_dx(spec: DensitySpec, x):
    """Spatial derivative ``d g_s / dx``; odd in ``x``."""
    x = _as_array(x)
    a, s = spec.alpha, spec.scale
    if a == 1.0:
        out = -2.0 * s * x / (math.pi * (s * s + x * x) ** 2)
    elif a == 2.0:
        out = -x / (2.0 * s) * np.exp(-x * x / (4.0 * s)) / math.sqrt(4.0 * math.pi * s)
    else:
        c = s ** (-1.0 / a)
        out = c * c * _unit_pdf_dz(a, np.atleast_1d(c * x)).reshape(x.shape)
    return _ret(out, x)


def inversion_pdf(spec: DensitySpec, x):
    """Density by Fourier inversion alone, for any alpha and any ``x``.

    Bypasses the closed forms and the tail series; useful for cross-checks.
    Relative accuracy degrades where the density is tiny.
    """
    x = _as_array(x)
    c = spec.scale ** (-1.0 / spec.alpha)
    out = c * _inversion(spec.alpha, np.atleast_1d(c * x)).reshape(x.shape)
    return _ret(out, x)


def log_pdf(spec: DensitySpec, x):
    """``log g_s(x)``, evaluated without forming tiny densities in the tails."""
    x = _as_array(x)
    a, s = spec.alpha, spec.scale
    if a == 1.0:
        ax = np.abs(x)
        big = np.maximum(ax, s)
        small = np.minimum(ax, s)
        out = math.log(s / math.pi) - 2.0 * np.log(big) - np.log1p((small / big) ** 2)
    elif a == 2.0:
        out = -x * x / (4.0 * s) - 0.5 * math.log(4.0 * math.pi * s)
    else:
        c = s ** (-1.0 / a)
        out = math.log(c) + _unit_log_pdf(a, np.atleast_1d(c * x)).reshape(x.shape)
    return _ret(out, x)


def _unit_score(alpha: float, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    zc = crossover(alpha)
    core = np.abs(z) <= zc
    if core.any():
        zz = z[core]
        out[core] = _inversion(alpha, zz, derivative=True) / _inversion(alpha, zz)
    if (~core).any():
        zt = z[~core]
        ll, corr, _ = tail_series(alpha, zt)
        lld, corrd, _ = tail_series(alpha, zt, derivative=True)
        out[~core] = -np.sign(zt) * np.exp(lld - ll) * (1.0 + corrd) / (1.0 + corr)
    return out


def log_pdf_dx(spec: DensitySpec, x):
    """Score ``g_s'(x) / g_s(x)`` from the density engine.

    Closed forms for ``alpha`` in {1, 2}; otherwise the ratio of the two
    inversion integrals, or of the two tail series, so nothing underflows.
    """
    x = _as_array(x)
    a, s = spec.alpha, spec.scale
    if a == 1.0:
        out = -2.0 * x / (s * s + x * x)
    elif a == 2.0:
        out = -x / (2.0 * s)
    else:
        c = s ** (-1.0 / a)
        out = c * _unit_score(a, np.atleast_1d(c * x)).reshape(x.shape)
    return _ret(out, x)


def tail_asymptote(spec: DensitySpec) -> TailAsymptote:
    """Leading power law ``g_s(x) ~ coefficient * |x|^(-1-alpha)``.

    ``coefficient = s * Gamma(alpha+1) sin(pi alpha/2) / pi``;
    ``crossover_x`` is where :func:`pdf` hands over to the tail series.
    """
    a, s = spec.alpha, spec.scale
    if a == 2.0:
        raise NotApplicable("the Gaussian law has no power-law tail")
    coef = s * math.exp(math.lgamma(a + 1.0)) * math.sin(math.pi * a / 2.0) / math.pi
    if a == 1.0:
        # closed form is used everywhere; report where the leading term is
        # within 1e-5 relative of it: s^2/(s^2+x^2) >= 1 - 1e-5
        return TailAsymptote(coef, s * math.sqrt(1e5 - 1.0))
    return TailAsymptote(coef, crossover(a) * s ** (1.0 / a))
