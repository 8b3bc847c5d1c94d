import math
from types import SimpleNamespace

import numpy as np
import pytest

from gridsearch import grid_search_fit

from iondecay.errors import (
    DegenerateDesign,
    NonPositiveVisibility,
    OrderError,
    RangeError,
)
from iondecay.modelfit import (
    DecayFamily,
    LogPoint,
    VisibilityDataset,
    fit_linear,
    fit_quadratic_pure,
    generate_synthetic,
    log_transform,
    sieve,
    verdict_from_asd,
)

EXP = DecayFamily.EXPONENTIAL
GAUSS = DecayFamily.GAUSSIAN


def random_points(rng, n=12, span=8.0):
    t = np.sort(rng.uniform(0.0, span, n))
    f = rng.uniform(-1.0, 0.0) + rng.uniform(-0.5, 0.0) * t \
        + rng.normal(0.0, 0.15, n)
    f = np.minimum(f, 0.0)  # keep within the log-visibility range
    return [LogPoint(float(ti), float(fi)) for ti, fi in zip(t, f)]


class TestFits:
    def test_exact_exponential_recovery(self):
        times = np.linspace(0.0, 10.0, 12)
        ds = generate_synthetic(EXP, -0.1, -0.3, times, 0.0, seed=0)
        fit = fit_linear(log_transform(ds))
        assert fit.p0 == pytest.approx(-0.1, abs=1e-12)
        assert fit.p1 == pytest.approx(-0.3, abs=1e-13)
        assert fit.asd <= 1e-24

    def test_exact_gaussian_recovery(self):
        times = np.linspace(0.0, 8.0, 10)
        ds = generate_synthetic(GAUSS, -0.05, -0.02, times, 0.0, seed=0)
        fit = fit_quadratic_pure(log_transform(ds))
        assert fit.p0 == pytest.approx(-0.05, abs=1e-12)
        assert fit.p1 == pytest.approx(-0.02, abs=1e-13)
        assert fit.asd <= 1e-24

    def test_two_points_interpolate(self):
        fit = fit_linear([LogPoint(1.0, -0.3), LogPoint(2.0, -0.9)])
        assert fit.asd <= 1e-28
        assert fit.p1 == pytest.approx(-0.6, rel=1e-13)

    def test_exact_recovery_on_wide_grids(self):
        t = np.arange(0.0, 1001.0, 100.0)
        lin = fit_linear([LogPoint(ti, -0.5 - 0.01 * ti) for ti in t])
        assert lin.p1 == pytest.approx(-0.01, rel=1e-12)
        assert lin.p0 == pytest.approx(-0.5, rel=1e-12)
        assert lin.asd <= 1e-18
        quad = fit_quadratic_pure(
            [LogPoint(ti, -1.0 - 4e-6 * ti * ti) for ti in t])
        assert quad.p1 == pytest.approx(-4e-6, rel=1e-12)
        assert quad.p0 == pytest.approx(-1.0, rel=1e-12)
        assert quad.asd <= 1e-18

    def test_wrong_family_accumulates_more_distance(self):
        t = np.linspace(0.0, 1000.0, 11)
        pts = [LogPoint(ti, -0.2 - 0.002 * ti) for ti in t]
        assert fit_quadratic_pure(pts).asd > fit_linear(pts).asd + 1e-6

    def test_matches_brute_force_grid_search(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            pts = random_points(rng)
            t = np.array([p.t for p in pts])
            f = np.array([p.f for p in pts])
            for fitter, quad in ((fit_linear, False),
                                 (fit_quadratic_pure, True)):
                got = fitter(pts)
                p0, p1, asd = grid_search_fit(t, f, quadratic=quad)
                assert abs(got.asd - asd) <= 1e-5
                assert got.asd <= asd + 1e-12  # never worse than the search

    def test_residuals_are_orthogonal(self):
        rng = np.random.default_rng(78)
        for _ in range(10):
            pts = random_points(rng)
            t = np.array([p.t for p in pts])
            f = np.array([p.f for p in pts])
            for fitter, u in ((fit_linear, t), (fit_quadratic_pure, t * t)):
                fit = fitter(pts)
                r = f - fit.model(t)
                scale = float(np.sum(np.abs(f * u))) + 1e-30
                assert abs(np.sum(r)) <= 1e-9 * scale
                assert abs(np.sum(r * u)) <= 1e-9 * scale

    def test_asd_recomputable_from_model(self):
        rng = np.random.default_rng(79)
        pts = random_points(rng)
        t = np.array([p.t for p in pts])
        f = np.array([p.f for p in pts])
        for fitter in (fit_linear, fit_quadratic_pure):
            fit = fitter(pts)
            again = float(np.sum((f - fit.model(t)) ** 2))
            assert fit.asd == pytest.approx(again, rel=1e-12, abs=1e-15)

    def test_degenerate_designs(self):
        with pytest.raises(DegenerateDesign):
            fit_linear([LogPoint(1.0, -0.5)])
        with pytest.raises(DegenerateDesign):
            fit_linear([LogPoint(1.0, -0.5), LogPoint(1.0, -0.7)])
        # t and -t share t^2: quadratic regressor collapses
        with pytest.raises(DegenerateDesign):
            fit_quadratic_pure([LogPoint(-1.0, -0.5), LogPoint(1.0, -0.7)])


class TestVerdicts:
    def test_noiseless_winner_exponential(self):
        times = np.linspace(0.5, 9.0, 14)
        ds = generate_synthetic(EXP, -0.2, -0.25, times, 0.0, seed=0)
        _, _, verdict = sieve(ds)
        assert verdict.winner is EXP
        assert verdict.label == "exponential"
        assert verdict.margin > 0.9

    def test_noiseless_winner_gaussian(self):
        times = np.linspace(0.5, 9.0, 14)
        ds = generate_synthetic(GAUSS, -0.1, -0.02, times, 0.0, seed=0)
        _, _, verdict = sieve(ds)
        assert verdict.winner is GAUSS
        assert verdict.label == "gaussian"

    def test_benchmark_magnitude_round_trips(self):
        # coefficient scales of the reference visibility fits
        times = np.arange(0.0, 1001.0, 100.0)
        ds = generate_synthetic(EXP, -0.803, -0.00224, times, 0.0, seed=0)
        fit_exp, _, verdict = sieve(ds)
        assert verdict.winner is EXP
        assert fit_exp.asd <= 1e-18
        times = np.arange(0.0, 301.0, 30.0)
        ds = generate_synthetic(GAUSS, -0.394, -0.391e-4, times, 0.0, seed=0)
        _, fit_gauss, verdict = sieve(ds)
        assert verdict.winner is GAUSS
        assert fit_gauss.asd <= 1e-18

    def test_equal_asd_is_a_tie_even_at_zero_threshold(self):
        v = verdict_from_asd(0.5, 0.5, tie_threshold=0.0)
        assert v.winner is None
        assert v.label == "tie"
        assert verdict_from_asd(0.0, 0.0, 0.0).winner is None

    def test_zero_threshold_is_strict(self):
        v = verdict_from_asd(0.5, 0.5000001, tie_threshold=0.0)
        assert v.winner is EXP

    def test_margin_band(self):
        v = verdict_from_asd(1.0, 1.01, tie_threshold=0.02)
        assert v.margin == pytest.approx(0.01 / 1.01, rel=1e-12)
        assert v.winner is None
        v = verdict_from_asd(1.0, 1.05, tie_threshold=0.02)
        assert v.winner is EXP

    def test_validation(self):
        with pytest.raises(ValueError):
            verdict_from_asd(-1.0, 0.5)
        with pytest.raises(ValueError):
            verdict_from_asd(0.5, float("nan"))
        with pytest.raises(ValueError):
            verdict_from_asd(0.5, 0.5, tie_threshold=-0.1)

    def test_time_rescale_keeps_winner_and_asd(self):
        rng = np.random.default_rng(80)
        times = np.sort(rng.uniform(0.1, 6.0, 12))
        v = np.exp(-0.3 * times + rng.normal(0.0, 0.05, 12))
        v = np.clip(v, 1e-6, 1.0)
        ds = VisibilityDataset(times=times, visibility=v)
        scaled = VisibilityDataset(times=3.0 * times, visibility=v)
        e1, g1, v1 = sieve(ds)
        e2, g2, v2 = sieve(scaled)
        assert v1.winner is v2.winner
        assert e1.asd == pytest.approx(e2.asd, rel=1e-9)
        assert g1.asd == pytest.approx(g2.asd, rel=1e-9)
        assert e2.p1 == pytest.approx(e1.p1 / 3.0, rel=1e-9)
        assert g2.p1 == pytest.approx(g1.p1 / 9.0, rel=1e-9)

    def test_point_on_winning_curve_never_flips_verdict(self):
        rng = np.random.default_rng(81)
        flips = 0
        for _ in range(20):
            times = np.sort(rng.uniform(0.1, 5.0, 10))
            fam = EXP if rng.uniform() < 0.5 else GAUSS
            p1 = -0.3 if fam is EXP else -0.05
            v = np.exp(-0.1 + p1 * (times if fam is EXP else times ** 2)
                       + rng.normal(0.0, 0.08, 10))
            v = np.clip(v, 1e-9, 1.0)
            ds = VisibilityDataset(times=times, visibility=v)
            fit_e, fit_g, verdict = sieve(ds, tie_threshold=0.0)
            if verdict.winner is None:
                continue
            win = fit_e if verdict.winner is EXP else fit_g
            t_new = times[-1] + 1.0
            v_new = float(np.exp(win.model(t_new)))
            if not 0.0 < v_new <= 1.0:
                continue
            bigger = VisibilityDataset(
                times=np.append(times, t_new),
                visibility=np.append(v, v_new))
            _, _, verdict2 = sieve(bigger, tie_threshold=0.0)
            if verdict2.winner is not verdict.winner:
                flips += 1
        assert flips == 0


class TestLogTransform:
    def test_rejects_zero_visibility_with_location(self):
        probe = SimpleNamespace(times=[0.0, 1.0, 2.0],
                                visibility=[1.0, 0.5, 0.0])
        with pytest.raises(NonPositiveVisibility) as exc:
            log_transform(probe)
        assert "point 2" in str(exc.value)

    def test_values(self):
        probe = SimpleNamespace(times=[0.0, 1.0], visibility=[1.0, 0.5])
        pts = log_transform(probe)
        assert pts[0].f == 0.0
        assert pts[1].f == pytest.approx(math.log(0.5), rel=1e-15)

    def test_log_point_stays_in_range(self):
        with pytest.raises(RangeError):
            LogPoint(1.0, 0.2)
        with pytest.raises(ValueError):
            LogPoint(float("nan"), -0.5)
        LogPoint(1.0, 0.0)  # boundary value allowed


class TestSynthetic:
    TIMES = np.linspace(0.0, 10.0, 9)

    def test_deterministic(self):
        a = generate_synthetic(EXP, -0.1, -0.2, self.TIMES, 0.05, seed=42)
        b = generate_synthetic(EXP, -0.1, -0.2, self.TIMES, 0.05, seed=42)
        assert np.array_equal(a.visibility, b.visibility)
        c = generate_synthetic(EXP, -0.1, -0.2, self.TIMES, 0.05, seed=43)
        assert not np.array_equal(a.visibility, c.visibility)

    def test_error_column_is_delta_method(self):
        ds = generate_synthetic(GAUSS, -0.2, -0.01, self.TIMES, 0.1, seed=1)
        assert np.array_equal(ds.err, 0.1 * ds.visibility)
        assert ds.label == "synthetic-gaussian"
        noiseless = generate_synthetic(GAUSS, -0.2, -0.01, self.TIMES, 0.0,
                                       seed=1)
        assert noiseless.err is None

    def test_out_of_range_model_rejected(self):
        with pytest.raises(RangeError):
            generate_synthetic(EXP, 0.5, -0.1, self.TIMES, 0.0, seed=0)

    def test_validation(self):
        with pytest.raises(DegenerateDesign):
            generate_synthetic(EXP, -0.1, -0.2, [0.0, 1.0], 0.0, seed=0)
        with pytest.raises(ValueError):
            generate_synthetic("exponential", -0.1, -0.2, self.TIMES, 0.0,
                               seed=0)
        with pytest.raises(ValueError):
            generate_synthetic(EXP, -0.1, -0.2, self.TIMES, -0.5, seed=0)


class TestDataset:
    def test_validation_errors(self):
        with pytest.raises(DegenerateDesign):
            VisibilityDataset(times=[0.0, 1.0], visibility=[1.0, 0.5])
        with pytest.raises(OrderError):
            VisibilityDataset(times=[0.0, 2.0, 1.0],
                              visibility=[1.0, 0.5, 0.3])
        with pytest.raises(RangeError):
            VisibilityDataset(times=[0.0, 1.0, 2.0],
                              visibility=[1.0, 1.5, 0.3])
        with pytest.raises(RangeError):
            VisibilityDataset(times=[0.0, 1.0, 2.0],
                              visibility=[1.0, 0.5, 0.0])
        with pytest.raises(RangeError):
            VisibilityDataset(times=[0.0, 1.0, 2.0],
                              visibility=[1.0, 0.5, 0.3],
                              err=[0.1, -0.1, 0.1])
        with pytest.raises(ValueError):
            VisibilityDataset(times=[0.0, 1.0, 2.0], visibility=[1.0, 0.5])

    def test_arrays_frozen_and_sized(self):
        ds = VisibilityDataset(times=[0.0, 1.0, 2.0],
                               visibility=[1.0, 0.5, 0.3], label="probe")
        assert len(ds) == 3
        assert ds.label == "probe"
        with pytest.raises(ValueError):
            ds.visibility[0] = 0.9
