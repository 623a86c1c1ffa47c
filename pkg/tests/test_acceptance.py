"""Acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line, bypassing
pytest's output capture, before asserting.  Run the file directly,
``python tests/test_acceptance.py``, for the same lines without pytest.
"""

import sys
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stableinfo.info import (
    ScorePair,
    d_prime_numeric,
    fisher_score,
    five_point,
    relative_entropy,
    relative_entropy_cauchy_closed,
)
from stableinfo.mfi import (
    best_h,
    check_consistency,
    consistency_rhs,
    lsi_ratio_cauchy,
    mfi_cauchy_closed,
    mfi_integral,
    positivity_sweep,
)
from stableinfo.quadrature import Interval, Tolerance, integrate
from stableinfo.stable import DensitySpec, pdf, pdf_dx

GRID_ALPHAS = [0.8, 1.0, 1.2, 1.5, 1.8, 2.0]
GRID_RATIOS = [0.5, 0.8, 1.2, 2.0]
NORM_ALPHAS = [0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
NORM_SCALES = [0.5, 1.0, 1.2, 2.0]


def _line(n, ok, detail):
    return f"[criterion {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def announce(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print("\n" + _line(n, ok, detail))
    return emit


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def test_criterion_01_tier1_cauchy(announce):
    (rec,), secs = timed(check_consistency, 1.0, 1.2, 1.0)
    ok = rec.lhs == 0.07575757575757573 and rec.rel_err <= 1e-10 and secs <= 5.0
    announce(1, ok, f"Cauchy rel_err={rec.rel_err:.2e} rhs={rec.rhs!r} ({secs:.2f} s)")
    assert ok


def test_criterion_02_tier1_gaussian(announce):
    (rec,), secs = timed(check_consistency, 2.0, 1.2, 1.0)
    ok = rec.lhs == 0.08333333333333331 and rec.rel_err <= 1e-10 and secs <= 5.0
    announce(2, ok, f"Gaussian rel_err={rec.rel_err:.2e} rhs={rec.rhs!r} ({secs:.2f} s)")
    assert ok


def test_criterion_03_tier2_table(announce):
    recs, secs = timed(check_consistency, 1.5, 1.2, 1.0)
    rhs = recs[0].rhs
    rhs_rel = abs(rhs - 0.0657857992) / 0.0657857992
    worst = max(r.rel_err for r in recs)
    ok = (rhs_rel <= 1e-6 and len(recs) == 5 and all(r.error is None for r in recs)
          and worst <= 1e-5 and secs <= 120.0)
    announce(3, ok, f"rhs={rhs:.10f} (rel {rhs_rel:.1e} to reference), "
                    f"worst row rel_err={worst:.2e} ({secs:.1f} s)")
    assert ok


def test_criterion_04_consistency_grid(announce):
    start = time.perf_counter()
    worst, where = 0.0, None
    for a in GRID_ALPHAS:
        for r in GRID_RATIOS:
            pair = ScorePair.of(a, r, 1.0)
            lhs = best_h(d_prime_numeric(pair)).value
            rhs = consistency_rhs(a, r, 1.0)
            rel = abs(lhs - rhs) / abs(rhs)
            if not rel <= worst:
                worst, where = rel, (a, r)
    secs = time.perf_counter() - start
    ok = worst <= 1e-5 and secs <= 20 * 60
    announce(4, ok, f"24 points, worst rel_err={worst:.2e} at (alpha, v/s)={where} "
                    f"({secs:.1f} s)")
    assert ok


def test_criterion_05_positivity(announce):
    rows = positivity_sweep(GRID_ALPHAS, GRID_RATIOS + [1.0])
    bad = []
    for row in rows:
        if row.error is not None or not row.mfi >= -1e-10:
            bad.append(row)
        elif row.v == row.s and abs(row.mfi) > 1e-9:
            bad.append(row)
        elif row.v != row.s and not row.mfi > 1e-6:
            bad.append(row)
    smallest = min(r.mfi for r in rows if r.v != r.s)
    ok = not bad and len(rows) == 30
    announce(5, ok, f"{len(rows)} rows, smallest off-diagonal MFI={smallest:.3e}, "
                    f"{len(bad)} violations")
    assert ok


def test_criterion_06_cauchy_closed_forms(announce):
    worst = 0.0
    for r in (0.5, 2.0, 3.0):
        d = relative_entropy(ScorePair.of(1.0, r, 1.0))
        m = mfi_integral(1.0, r, 1.0)
        worst = max(worst,
                    abs(d / relative_entropy_cauchy_closed(r, 1.0) - 1),
                    abs(m / mfi_cauchy_closed(r, 1.0) - 1))
    ok = worst <= 1e-8
    announce(6, ok, f"worst rel deviation of D and MFI from closed forms={worst:.2e}")
    assert ok


def test_criterion_07_normalization_and_moment(announce):
    tol = Tolerance(1e-12, 1e-12, 400)
    worst_norm = worst_mom = 0.0
    for a in NORM_ALPHAS:
        for s in NORM_SCALES:
            spec = DensitySpec(a, s)
            norm = integrate(lambda x: pdf(spec, x), Interval.real_line(), tol).value
            mom = integrate(lambda x: x * pdf_dx(spec, x), Interval.real_line(), tol).value
            worst_norm = max(worst_norm, abs(norm - 1))
            worst_mom = max(worst_mom, abs(mom + 1))
    ok = worst_norm <= 1e-8 and worst_mom <= 1e-6
    announce(7, ok, f"max |int g - 1|={worst_norm:.1e}, max |int x g' + 1|={worst_mom:.1e}")
    assert ok


def test_criterion_08_scale_derivative_identity(announce):
    v = 1.2
    worst = 0.0
    for a in (1.0, 1.5, 2.0):
        for x in (0.5, 1.0, 3.0):
            fd = five_point(lambda u: pdf(DensitySpec(a, u), x), v, 1e-3)
            g = pdf(DensitySpec(a, v), x)
            gx = pdf_dx(DensitySpec(a, v), x)
            exact = -(g + x * gx) / (a * v)
            worst = max(worst, abs(fd - exact) / abs(exact))
    ok = worst <= 1e-5
    announce(8, ok, f"worst rel deviation={worst:.2e} over alpha in {{1, 1.5, 2}}, "
                    f"x in {{0.5, 1, 3}}")
    assert ok


def test_criterion_09_lsi_unbounded(announce):
    ratios = [lsi_ratio_cauchy(r, 1.0) for r in (10.0, 100.0, 1000.0, 10000.0)]
    ok = all(a < b for a, b in zip(ratios[:-1], ratios[1:]))
    announce(9, ok, "D/M_1 at v/s=10..1e4: " + ", ".join(f"{q:.4f}" for q in ratios))
    assert ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.8, 1.0, 1.3, 1.5, 1.9, 2.0]), st.floats(0.3, 3.0),
       st.floats(-60.0, 60.0))
def _symmetry_and_oddness(alpha, s, x):
    spec = DensitySpec(alpha, s)
    assert pdf(spec, x) == pdf(spec, -x)
    assert fisher_score(spec, x) == -fisher_score(spec, -x)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.8, 1.0, 1.3, 1.5, 1.9, 2.0]), st.floats(0.2, 5.0),
       st.floats(-30.0, 30.0))
def _scaling_identity(alpha, v, x):
    lhs = pdf(DensitySpec(alpha, v), x)
    c = v ** (-1 / alpha)
    rhs = c * pdf(DensitySpec(alpha, 1.0), c * x)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def _quadrature_honesty():
    from test_quadrature import HONESTY_CORPUS

    honest = 0
    for f, (a, b), exact in HONESTY_CORPUS:
        res = integrate(f, Interval(a, b), Tolerance(1e-10, 1e-10, 1000))
        honest += abs(res.value - exact) <= 10 * res.abs_error_estimate + 1e-15
    assert honest >= 0.95 * len(HONESTY_CORPUS)


def _determinism():
    pair = ScorePair.of(1.5, 1.2, 1.0)
    x = np.linspace(-50, 50, 101)
    assert np.array_equal(pdf(pair.v_spec, x), pdf(pair.v_spec, x[::-1])[::-1])
    assert relative_entropy(pair) == relative_entropy(pair)
    assert consistency_rhs(1.5, 1.2, 1.0) == consistency_rhs(1.5, 1.2, 1.0)


def test_criterion_10_property_suites(announce):
    failures = []
    for name, check in [("quadrature honesty", _quadrature_honesty),
                        ("symmetry and score oddness", _symmetry_and_oddness),
                        ("scaling identity", _scaling_identity),
                        ("determinism", _determinism)]:
        try:
            check()
        except Exception as exc:  # noqa: BLE001 - reported, then re-raised below
            failures.append(f"{name}: {type(exc).__name__}")
    ok = not failures
    announce(10, ok, "all property suites hold" if ok else "; ".join(failures))
    assert ok


if __name__ == "__main__":
    import pathlib

    sys.path.insert(0, str(pathlib.Path(__file__).parent))
    failed = 0
    for name, fn in sorted(globals().copy().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(lambda n, ok, detail: print(_line(n, ok, detail)))
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
