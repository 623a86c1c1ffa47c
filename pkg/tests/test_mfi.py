import math

import numpy as np
import pytest

from stableinfo.info import (
    EntropyDerivativeConfig,
    ScoreMethod,
    ScorePair,
    StencilEstimate,
    default_tolerance,
    relative_entropy_cauchy_closed,
    score_difference,
)
from stableinfo.mfi import (
    ConsistencyRecord,
    DegenerateRatio,
    InterpolationPath,
    MfiResult,
    best_h,
    check_consistency,
    closed_form_d_prime,
    consistency_integral,
    consistency_rhs,
    lsi_ratio_cauchy,
    mfi_both,
    mfi_cauchy_closed,
    mfi_chain,
    mfi_integral,
    positivity_sweep,
    score_u,
)
from stableinfo.quadrature import Interval, Tolerance, integrate
from stableinfo.stable import pdf

# converged right-hand side at alpha=1.5, v=1.2, s=1 (plateau of the stencil ladder)
RHS_1_5 = 0.0657858003


class TestInterpolationPath:
    def test_scale_at(self):
        path = InterpolationPath(1.2, 1.0, 1.5)
        assert path.scale_at(0.0) == 1.2
        assert path.scale_at(0.5) == pytest.approx(1.1, rel=1e-15)

    @pytest.mark.parametrize("t", [-0.1, 1.0, 2.0])
    def test_time_range(self, t):
        with pytest.raises(ValueError):
            InterpolationPath(1.2, 1.0, 1.5).scale_at(t)

    @pytest.mark.parametrize("kw", [{"v0": 0.0}, {"target": -1.0}, {"alpha": 2.5}])
    def test_validation(self, kw):
        args = {"v0": 1.2, "target": 1.0, "alpha": 1.5, **kw}
        with pytest.raises(ValueError):
            InterpolationPath(**args)


class TestScoreU:
    def test_example(self):
        assert score_u(InterpolationPath(1.2, 1.0, 1.5), 2.0) == pytest.approx(1 / 3, rel=1e-14)

    def test_identical_scales(self):
        path = InterpolationPath(1.4, 1.4, 1.0)
        for t in (0.0, 0.3, 0.9):
            assert score_u(path, 5.0, t) == 0.0

    def test_origin_and_linearity(self):
        path = InterpolationPath(0.7, 1.3, 1.8)
        assert score_u(path, 0.0, 0.4) == 0.0
        x = np.array([1.0, 2.0, -3.0])
        np.testing.assert_allclose(score_u(path, x, 0.4), x * score_u(path, 1.0, 0.4), rtol=1e-15)

    def test_initial_form(self):
        v, s = 1.7, 0.9
        assert score_u(InterpolationPath(v, s, 1.2), 2.5) == \
            pytest.approx(2.5 * (v - s) / (s * v), rel=1e-14)


class TestMfiResult:
    def test_compare(self):
        r = MfiResult.compare(1.0, 1.1)
        assert r.abs_discrepancy == pytest.approx(0.1)
        assert r.rel_discrepancy == pytest.approx(0.1 / 1.1)

    def test_zero_integral(self):
        r = MfiResult.compare(0.2, 0.0)
        assert r.rel_discrepancy == r.abs_discrepancy == 0.2


class TestChain:
    def test_cauchy(self):
        assert mfi_chain(1.0, 1.2, 1.0, 0.07575757575757573) == \
            pytest.approx(0.04 / 2.64, rel=1e-14)

    def test_gaussian(self):
        assert mfi_chain(2.0, 1.2, 1.0, 0.08333333333333331) == pytest.approx(1 / 30, rel=1e-14)

    def test_identical_scales(self):
        assert mfi_chain(1.5, 1.0, 1.0, 123.0) == 0.0


class TestIntegral:
    def test_identical_scales(self):
        assert mfi_integral(1.5, 1.2, 1.2) == 0.0
        assert consistency_integral(1.5, 1.2, 1.2).value == 0.0

    def test_cauchy(self):
        assert mfi_integral(1.0, 1.2, 1.0) == pytest.approx(mfi_cauchy_closed(1.2, 1.0), rel=1e-10)

    def test_alpha_1_5(self):
        assert mfi_integral(1.5, 1.2, 1.0) == pytest.approx(0.019735740, rel=1e-6)

    @pytest.mark.parametrize("alpha,v", [(1.0, 1.2), (2.0, 1.2), (1.5, 1.2), (0.8, 2.0)])
    def test_identity_with_rhs(self, alpha, v):
        s = 1.0
        lhs = mfi_integral(alpha, v, s)
        assert lhs == pytest.approx(alpha * (v - s) / s * consistency_rhs(alpha, v, s), rel=1e-12)

    @pytest.mark.parametrize("alpha,v", [(1.0, 1.2), (1.5, 1.2), (1.8, 0.5)])
    def test_u_score_linkage(self, alpha, v):
        s = 1.0
        pair = ScorePair.of(alpha, v, s)
        path = InterpolationPath(v, s, alpha)

        def f(x):
            return pdf(pair.v_spec, x) * score_u(path, x) * score_difference(pair, x)

        via_u = integrate(f, Interval.real_line(), default_tolerance(alpha)).value
        assert via_u == pytest.approx(mfi_integral(alpha, v, s), rel=1e-12)

    def test_fd_score_route(self):
        method = ScoreMethod.finite_difference(1e-4)
        val = mfi_integral(1.5, 1.2, 1.0, method, Tolerance(1e-9, 1e-9))
        assert val == pytest.approx(0.019735740, rel=1e-6)


class TestRhs:
    def test_cauchy(self):
        assert consistency_rhs(1.0, 1.2, 1.0) == pytest.approx(0.07575757575757575, rel=1e-12)

    def test_gaussian(self):
        assert consistency_rhs(2.0, 1.2, 1.0) == pytest.approx(0.08333333333333331, rel=1e-12)

    def test_alpha_1_5(self):
        rhs = consistency_rhs(1.5, 1.2, 1.0)
        assert rhs == pytest.approx(0.0657857992, rel=1e-6)
        assert rhs == pytest.approx(RHS_1_5, rel=1e-9)


class TestClosedForms:
    def test_d_prime_selection(self):
        assert closed_form_d_prime(1.0, 1.2, 1.0) == 0.07575757575757573
        assert closed_form_d_prime(2.0, 1.2, 1.0) == 0.08333333333333331
        assert closed_form_d_prime(1.5, 1.2, 1.0) is None

    def test_mfi_cauchy(self):
        assert mfi_cauchy_closed(3.0, 1.0) == pytest.approx(1 / 3, rel=1e-15)
        assert mfi_cauchy_closed(1.0, 1.0) == 0.0


class TestBestH:
    def test_flattest_pair(self):
        ests = [StencilEstimate(1e-2, 1.0), StencilEstimate(5e-3, 1.5),
                StencilEstimate(1e-3, 1.51), StencilEstimate(5e-4, 1.6)]
        assert best_h(ests).h == 5e-3

    def test_failed_entries_skipped(self):
        ests = [StencilEstimate(1e-2, 1.0), StencilEstimate(5e-3, math.nan, "x"),
                StencilEstimate(1e-3, 1.0 + 1e-9)]
        assert best_h(ests).h == 1e-2

    def test_single_and_empty(self):
        assert best_h([StencilEstimate(1e-3, 2.0)]).value == 2.0
        with pytest.raises(ValueError):
            best_h([StencilEstimate(1e-3, math.nan, "x")])


class TestMfiBoth:
    def test_cauchy(self):
        r = mfi_both(1.0, 1.2, 1.0)
        assert r.chain_value == pytest.approx(0.04 / 2.64, rel=1e-14)
        assert r.rel_discrepancy <= 1e-8

    def test_identical_scales(self):
        assert mfi_both(1.5, 1.2, 1.2) == MfiResult(0.0, 0.0, 0.0, 0.0)

    def test_alpha_1_5(self):
        r = mfi_both(1.5, 1.2, 1.0)
        assert r.rel_discrepancy <= 1e-5
        assert r.integral_value == pytest.approx(0.019735740, rel=1e-6)


class TestCheckConsistency:
    def test_tier1_cauchy(self):
        (rec,) = check_consistency(1.0, 1.2, 1.0)
        assert rec.h is None
        assert rec.lhs == 0.07575757575757573
        assert rec.rel_err <= 1e-12

    def test_tier2_table(self):
        recs = check_consistency(1.5, 1.2, 1.0)
        assert [r.h for r in recs] == [1e-2, 5e-3, 1e-3, 5e-4, 1e-4]
        assert len({r.rhs for r in recs}) == 1
        for r in recs:
            assert r.error is None
            assert r.rel_err <= 1e-5
            assert r.abs_err == pytest.approx(abs(r.lhs - r.rhs), abs=0)
        assert recs[0].rel_err < 1e-7

    def test_identical_scales(self):
        for rec in check_consistency(1.5, 1.2, 1.2):
            assert rec.lhs == rec.rhs == 0.0 and rec.rel_err == 0.0
        (rec,) = check_consistency(2.0, 1.0, 1.0)
        assert rec.lhs == rec.rhs == 0.0

    def test_tier_selection_errors(self):
        with pytest.raises(ValueError):
            check_consistency(1.5, 1.2, 1.0, tier=1)
        with pytest.raises(ValueError):
            check_consistency(1.0, 1.2, 1.0, tier=3)

    def test_tier2_forced_for_cauchy(self):
        recs = check_consistency(1.0, 1.2, 1.0, EntropyDerivativeConfig((1e-3,)), tier=2)
        assert recs[0].h == 1e-3 and recs[0].rel_err <= 1e-8

    def test_record_with_error(self):
        rec = ConsistencyRecord.build(1e-3, math.nan, 0.5, "ConvergenceFailure: x")
        assert math.isnan(rec.abs_err) and math.isnan(rec.rel_err)


class TestPositivity:
    def test_small_sweep(self):
        rows = positivity_sweep([1.0, 1.5, 2.0], [0.5, 1.0, 3.0])
        assert len(rows) == 9
        for row in rows:
            assert row.error is None
            if row.v == row.s:
                assert row.mfi == 0.0
            else:
                assert row.mfi > 1e-6
        cauchy = {r.v: r.mfi for r in rows if r.alpha == 1.0}
        assert cauchy[3.0] == pytest.approx(1 / 3, rel=1e-8)
        assert cauchy[0.5] == pytest.approx(mfi_cauchy_closed(0.5, 1.0), rel=1e-8)

    def test_alpha_1_5_point(self):
        (row,) = positivity_sweep([1.5], [1.2])
        assert row.mfi == pytest.approx(0.019735740, rel=1e-5)

    def test_reciprocal_ratios_both_positive(self):
        rows = positivity_sweep([0.8, 1.8], [0.5, 2.0])
        assert all(r.mfi > 0 for r in rows)

    def test_failures_are_flagged(self, monkeypatch):
        from stableinfo import mfi
        from stableinfo.quadrature import ConvergenceFailure

        def boom(*args):
            raise ConvergenceFailure("budget")

        monkeypatch.setattr(mfi, "_numeric_d_prime", boom)
        rows = positivity_sweep([1.5, 1.0], [2.0])
        assert math.isnan(rows[0].mfi) and "ConvergenceFailure" in rows[0].error
        assert rows[1].error is None

    @pytest.mark.parametrize("grids", [([], [1.0]), ([1.0], []), ([1.0], [0.0]), ([1.0], [-2.0])])
    def test_bad_grids(self, grids):
        with pytest.raises(ValueError):
            positivity_sweep(*grids)


class TestLsi:
    def test_values(self):
        assert lsi_ratio_cauchy(2.0, 1.0) == pytest.approx(6 * math.log(1.125), rel=1e-14)
        assert lsi_ratio_cauchy(2.0, 1.0) == pytest.approx(0.70670, abs=1e-5)
        assert lsi_ratio_cauchy(10.0, 1.0) == pytest.approx(110 / 81 * math.log(121 / 40),
                                                            rel=1e-14)
        assert lsi_ratio_cauchy(1000.0, 1.0) == pytest.approx(5.54, abs=0.01)

    def test_increasing(self):
        ratios = [lsi_ratio_cauchy(v, 1.0) for v in (10.0, 100.0, 1000.0, 10000.0)]
        assert all(a < b for a, b in zip(ratios[:-1], ratios[1:]))

    def test_degenerate(self):
        with pytest.raises(DegenerateRatio):
            lsi_ratio_cauchy(1.0, 1.0)

    def test_is_quotient_of_closed_forms(self):
        v, s = 3.0, 0.7
        assert lsi_ratio_cauchy(v, s) == pytest.approx(
            relative_entropy_cauchy_closed(v, s) / mfi_cauchy_closed(v, s), rel=1e-15)


def test_scale_derivative_sign_of_integral():
    # the score integral carries the sign of v - s
    for alpha in (0.8, 1.5):
        assert consistency_integral(alpha, 2.0, 1.0).value > 0
        assert consistency_integral(alpha, 0.5, 1.0).value < 0

