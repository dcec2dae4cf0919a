"""Tests for model-comparison statistics."""

import json
import math

import numpy as np
import pytest

from mcgompertz.core import McGParams, cdf as mcg_cdf
from mcgompertz.family import model_spec
from mcgompertz.inference import Dataset, FitResult, fit_mle
from mcgompertz.selection import (
    GofReport,
    chi_square_sf,
    gof_report,
    info_criteria,
    ks_test,
    lrt,
)
from mcgompertz.specfun import kolmogorov_sf

AARSET_MCG_POINT = McGParams(a=0.2619, b=0.0752, c=3.7652, theta=0.0012, gamma=0.0875)
GLASS_MCG_POINT = McGParams(a=0.7940, b=0.1248, c=192.1704, theta=0.0009, gamma=5.2013)


def _dataset(arr, label=""):
    return Dataset(values=tuple(float(v) for v in arr), label=label)


def _table_fit(name, neg_loglik):
    """A FitResult shell carrying a published table value, for LRT math."""
    spec = model_spec(name)
    k = spec.free_count
    return FitResult(
        model=spec,
        estimates={f: 1.0 for f in spec.free_params},
        std_errors=None,
        neg_loglik=neg_loglik,
        info_matrix=np.eye(k),
        converged=True,
        iterations=1,
        grad_norm=0.0,
    )


class TestInfoCriteria:
    def test_published_aarset_row(self):
        aic, aicc, bic = info_criteria(219.0041, 5, 50)
        assert aic == pytest.approx(448.0081, abs=0.001)
        assert aicc == pytest.approx(449.3718, abs=0.001)
        assert bic == pytest.approx(457.5682, abs=0.001)

    def test_published_glass_row(self):
        aic, aicc, bic = info_criteria(11.4208, 5, 63)
        assert aic == pytest.approx(32.8417, abs=0.001)
        assert bic == pytest.approx(43.5573, abs=0.01)

    def test_zero_parameters(self):
        aic, aicc, bic = info_criteria(10.0, 0, 20)
        assert aic == 20.0
        assert aicc == 20.0
        assert bic == 20.0

    def test_aicc_absent_for_tiny_samples(self):
        assert info_criteria(10.0, 3, 4)[1] is None
        assert info_criteria(10.0, 3, 5)[1] is not None

    def test_ordering_and_exact_gap(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            nll = float(rng.uniform(5.0, 300.0))
            k = int(rng.integers(1, 6))
            n = int(rng.integers(k + 2, 200))
            aic, aicc, bic = info_criteria(nll, k, n)
            assert aic < aicc
            assert bic - aic == pytest.approx(k * (math.log(n) - 2.0), abs=1e-12)

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            info_criteria(1.0, -1, 10)
        with pytest.raises(ValueError):
            info_criteria(1.0, 2, 0)


class TestKsTest:
    def test_quantile_construction_gives_half_over_n(self):
        n = 20
        d = _dataset([(i - 0.5) / n for i in range(1, n + 1)])
        stat, p = ks_test(d, lambda y: y)
        assert stat == pytest.approx(0.5 / n, abs=1e-15)
        assert p == pytest.approx(kolmogorov_sf(0.5 / n, n), abs=1e-15)

    def test_aarset_at_published_point(self, aarset):
        stat, p = ks_test(_dataset(aarset), lambda y: mcg_cdf(AARSET_MCG_POINT, y))
        assert stat == pytest.approx(0.1216, abs=0.005)
        assert p == pytest.approx(0.4509, abs=0.05)

    def test_glass_at_published_point(self, glass):
        # The published table prints 0.1159, but the rounded Table estimates
        # give 0.1033 on this cdf; the printed value is not reproducible
        # from the printed parameter row.
        stat, _ = ks_test(_dataset(glass), lambda y: mcg_cdf(GLASS_MCG_POINT, y))
        assert stat == pytest.approx(0.1033, abs=5e-4)

    def test_invariant_under_monotone_transformation(self, glass):
        d = _dataset(glass)
        stat1, _ = ks_test(d, lambda y: mcg_cdf(GLASS_MCG_POINT, y))
        d2 = _dataset(np.asarray(glass) ** 2)
        stat2, _ = ks_test(d2, lambda z: mcg_cdf(GLASS_MCG_POINT, math.sqrt(z)))
        assert stat1 == pytest.approx(stat2, abs=1e-12)

    def test_tied_observations(self):
        d = _dataset([1.0, 1.0, 2.0])
        stat, _ = ks_test(d, lambda y: y / 3.0)
        assert stat == pytest.approx(1.0 / 3.0, abs=1e-15)


class TestLrt:
    def test_identical_fits(self):
        full = _table_fit("mcg", 100.0)
        nested = _table_fit("bg", 100.0)
        stat, df, p = lrt(full, nested)
        assert stat == 0.0
        assert df == 1
        assert p == 1.0

    def test_published_aarset_ladder(self):
        full = _table_fit("mcg", 219.0041)
        cases = [
            ("bg", 220.6714, 3.3346, 0.06779),
            ("kumg", 221.9666, 5.9249, 0.0149),
            ("mce", 237.8158, 37.6233, 0.0),
        ]
        for name, nll, stat_pub, p_pub in cases:
            stat, df, p = lrt(full, _table_fit(name, nll))
            assert df == 1
            assert stat == pytest.approx(stat_pub, abs=0.01)
            if p_pub > 0.0:
                assert p == pytest.approx(p_pub, abs=0.005)
            else:
                assert p < 1e-8

    def test_rejects_non_nested_pairs(self):
        with pytest.raises(ValueError):
            lrt(_table_fit("bg", 10.0), _table_fit("kumg", 11.0))
        with pytest.raises(ValueError):
            lrt(_table_fit("bg", 10.0), _table_fit("mcg", 11.0))
        with pytest.raises(ValueError):
            lrt(_table_fit("mcg", 10.0), _table_fit("mcg", 10.0))

    def test_negative_statistic_passes_through(self):
        stat, df, p = lrt(_table_fit("mcg", 12.0), _table_fit("bg", 11.0))
        assert stat == pytest.approx(-2.0, abs=1e-12)
        assert p == 1.0

    def test_pvalue_decreasing_in_statistic(self):
        full = _table_fit("mcg", 100.0)
        ps = [lrt(full, _table_fit("bg", 100.0 + g))[2] for g in (0.5, 1.0, 2.0, 4.0)]
        assert all(a > b for a, b in zip(ps, ps[1:]))


class TestChiSquareSf:
    def test_at_zero(self):
        for df in (1, 2, 3, 4):
            assert chi_square_sf(0.0, df) == pytest.approx(1.0, abs=1e-12)

    def test_canonical_quantile(self):
        assert chi_square_sf(3.841459, 1) == pytest.approx(0.05, abs=1e-6)

    def test_published_kumg_row(self):
        assert chi_square_sf(5.9249, 1) == pytest.approx(0.0149, abs=5e-5)

    def test_one_df_matches_erfc(self):
        for x in (0.1, 0.7, 1.9, 4.2, 9.0):
            assert chi_square_sf(x, 1) == pytest.approx(
                math.erfc(math.sqrt(x / 2.0)), abs=1e-12
            )

    def test_two_df_closed_form(self):
        for x in (0.3, 1.6, 5.0, 12.0):
            assert chi_square_sf(x, 2) == pytest.approx(math.exp(-x / 2.0), abs=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            chi_square_sf(-1.0, 1)
        with pytest.raises(ValueError):
            chi_square_sf(1.0, 0)
        with pytest.raises(ValueError):
            chi_square_sf(1.0, 1.5)


@pytest.fixture(scope="module")
def aarset_reports(aarset):
    data = _dataset(aarset, "aarset")
    full = fit_mle("mcg", data)
    nested = fit_mle("bg", data)
    return data, full, nested


class TestGofReport:
    def test_fields_satisfy_invariants(self, aarset_reports):
        data, full, nested = aarset_reports
        rep = gof_report(nested, data, full_fit=full)
        assert rep.k_params == 4
        assert rep.n_obs == 50
        assert rep.aic == pytest.approx(2 * rep.neg_loglik + 8, abs=1e-10)
        assert rep.bic - rep.aic == pytest.approx(4 * (math.log(50) - 2), abs=1e-10)
        assert rep.aicc > rep.aic
        assert 0.0 <= rep.ks_pvalue <= 1.0
        assert rep.lrt_df == 1
        assert 0.0 <= rep.lrt_pvalue <= 1.0
        assert rep.lrt_stat == pytest.approx(
            2.0 * (nested.neg_loglik - full.neg_loglik), abs=1e-10
        )

    def test_without_full_fit_lrt_absent(self, aarset_reports):
        data, full, _ = aarset_reports
        rep = gof_report(full, data)
        assert rep.lrt_stat is None
        assert rep.lrt_df is None
        assert rep.lrt_pvalue is None

    def test_serializes_with_exact_field_names(self, aarset_reports):
        data, full, nested = aarset_reports
        rep = gof_report(nested, data, full_fit=full)
        payload = rep.to_dict()
        assert list(payload) == [
            "model",
            "neg_loglik",
            "k_params",
            "n_obs",
            "aic",
            "aicc",
            "bic",
            "ks_stat",
            "ks_pvalue",
            "lrt_stat",
            "lrt_df",
            "lrt_pvalue",
        ]
        assert payload["model"] == "BG"
        round_trip = json.loads(json.dumps(payload))
        assert round_trip["ks_stat"] == rep.ks_stat

    def test_exponential_base_cdf_dispatch(self, glass):
        data = _dataset(glass, "glass")
        fit = fit_mle("mce", data)
        rep = gof_report(fit, data)
        assert 0.0 < rep.ks_stat < 1.0
        assert 0.0 <= rep.ks_pvalue <= 1.0

    def test_rejects_out_of_range_pvalue(self):
        spec = model_spec("bg")
        with pytest.raises(ValueError):
            GofReport(
                model=spec,
                neg_loglik=1.0,
                k_params=4,
                n_obs=10,
                aic=10.0,
                aicc=12.0,
                bic=11.0,
                ks_stat=0.1,
                ks_pvalue=1.5,
            )
