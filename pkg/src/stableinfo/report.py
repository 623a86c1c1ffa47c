"""Validation reports and integrand curves: building, formatting, file I/O."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .info import EntropyDerivativeConfig, ScoreKind, ScoreMethod, ScorePair, score_difference
from .mfi import ConsistencyRecord, InterpolationPath, check_consistency, closed_form_d_prime, score_u
from .quadrature import Tolerance
from .stable import DensitySpec, pdf

SCHEMA_VERSION = 1

# default pass gates on relative error
TIER1_GATE = 1e-10
TIER2_GATE = 1e-5


@dataclass
class ValidationReport:
    alpha: float
    v: float
    s: float
    tier: int
    tolerances: dict
    score_method: dict
    records: list
    rhs: float
    closed_form_lhs: float | None
    gate: float
    wall_time_seconds: float = 0.0
    engine_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.tier == 1 and (self.closed_form_lhs is None or len(self.records) != 1):
            raise ValueError("tier 1 reports need the exact LHS and exactly one record")

    @property
    def passed(self) -> bool:
        return all(r.error is None and r.rel_err <= self.gate for r in self.records)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["records"] = [asdict(r) for r in self.records]
        d["passed"] = self.passed
        return _nan_to_none(d)

    @classmethod
    def from_dict(cls, d: dict) -> "ValidationReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        records = [ConsistencyRecord(**{k: _none_to_nan(k, v) for k, v in r.items()})
                   for r in d["records"]]
        fields = {k: d[k] for k in (
            "alpha", "v", "s", "tier", "tolerances", "score_method", "rhs",
            "closed_form_lhs", "gate", "wall_time_seconds", "engine_version",
            "schema_version")}
        return cls(records=records, **fields)


def _nan_to_none(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _nan_to_none(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_nan_to_none(v) for v in obj]
    return obj


def _none_to_nan(key, value):
    if value is None and key in ("lhs", "abs_err", "rel_err"):
        return math.nan
    return value


def run_validation(alpha: float, v: float, s: float, tier: int | None = None,
                   cfg: EntropyDerivativeConfig = EntropyDerivativeConfig(),
                   method: ScoreMethod = ScoreMethod(), tol: Tolerance | None = None,
                   gate: float | None = None) -> ValidationReport:
    from .info import default_tolerance

    start = time.perf_counter()
    tol = default_tolerance(alpha) if tol is None else tol
    records = check_consistency(alpha, v, s, cfg, method, tol, tier)
    tier = 1 if records[0].h is None else 2
    exact = closed_form_d_prime(alpha, v, s)
    if gate is None:
        gate = TIER1_GATE if tier == 1 else TIER2_GATE
    return ValidationReport(
        alpha=float(alpha), v=float(v), s=float(s), tier=tier,
        tolerances=asdict(tol),
        score_method={"kind": method.kind.value, "fd_step": method.fd_step},
        records=records, rhs=records[0].rhs,
        closed_form_lhs=exact if tier == 1 else None,
        gate=float(gate),
        wall_time_seconds=time.perf_counter() - start,
    )


def format_summary(report: ValidationReport) -> str:
    """Console table: step size, LHS, RHS, absolute and relative error."""
    out = io.StringIO()
    out.write(f"Consistency check: alpha={report.alpha:g}, v={report.v:g}, s={report.s:g}, "
              f"tier {report.tier}\n")
    header = f"{'Step Size h':>12}  {'LHS':>14}  {'RHS':>14}  {'Abs Error':>10}  {'Rel Error':>10}"
    out.write(header + "\n")
    out.write("-" * len(header) + "\n")
    for r in report.records:
        h = "exact" if r.h is None else f"{r.h:.2e}"
        if r.error is not None:
            out.write(f"{h:>12}  {'failed':>14}  {r.rhs:14.10f}  {r.error}\n")
            continue
        out.write(f"{h:>12}  {r.lhs:14.10f}  {r.rhs:14.10f}  {r.abs_err:10.2e}  {r.rel_err:10.2e}\n")
    verdict = "PASS" if report.passed else "FAIL"
    out.write(f"gate rel_err <= {report.gate:.1e}: {verdict}\n")
    return out.getvalue()


def write_report(report: ValidationReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, allow_nan=False)
        fh.write("\n")


def read_report(path) -> ValidationReport:
    with open(path) as fh:
        return ValidationReport.from_dict(json.load(fh))


@dataclass
class IntegrandCurve:
    """Samples of ``g_v(x) * u(x, 0) * (score_v(x) - score_s(x))``."""

    x_grid: np.ndarray
    u0: np.ndarray
    delta_score: np.ndarray
    integrand: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.x_grid)
        if not (len(self.u0) == len(self.delta_score) == len(self.integrand) == n):
            raise ValueError("curve columns must have equal length")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "u0", "delta_score", "integrand"])
        for row in zip(self.x_grid, self.u0, self.delta_score, self.integrand):
            w.writerow([repr(float(c)) for c in row])
        return buf.getvalue()


def integrand_curve(alpha: float = 1.5, v: float = 1.2, s: float = 1.0,
                    x_min: float = -10.0, x_max: float = 10.0, n_points: int = 401,
                    method: ScoreMethod = ScoreMethod()) -> IntegrandCurve:
    if not x_min < x_max:
        raise ValueError("x_min must be below x_max")
    if n_points < 2:
        raise ValueError("need at least two points")
    x = np.linspace(x_min, x_max, n_points)
    pair = ScorePair.of(alpha, v, s)
    u0 = np.asarray(score_u(InterpolationPath(v, s, alpha), x, 0.0))
    ds = np.asarray(score_difference(pair, x, method))
    g = np.asarray(pdf(DensitySpec(alpha, v), x))
    return IntegrandCurve(x, u0, ds, g * u0 * ds,
                          {"alpha": alpha, "v": v, "s": s,
                           "score_method": ScoreKind(method.kind).value})
