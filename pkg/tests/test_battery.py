import numpy as np
import pytest
from scipy import stats
from statsmodels.stats.diagnostic import acorr_ljungbox
from statsmodels.stats.oneway import anova_oneway
from statsmodels.tsa.stattools import adfuller
from statsmodels.tsa.stattools import kpss as sm_kpss

from chronohurst.battery import (
    TestResult,
    estimate_gph,
    integration_order,
    run_battery,
    test_nonlinearity as nonlinearity,
    test_normality as normality,
    test_seasonality as seasonality,
    test_stationarity as stationarity,
)
from chronohurst.battery.nonlinearity import METHODS, keenan, mcleod_li
from chronohurst.battery.seasonality import friedman, welch
from chronohurst.battery.stationarity import adf, kpss
from chronohurst.errors import DegenerateSampleError, InsufficientDataError
from chronohurst.series import MonthStamp, difference

from conftest import monthly, white_noise


@pytest.fixture(scope="module")
def reports(cleaned):
    return {name: run_battery(s) for name, s in cleaned.items()}


def ar1(seed, n=500, phi=0.5, burn=100):
    e = np.random.default_rng(seed).standard_normal(n + burn)
    x = np.zeros_like(e)
    for t in range(1, len(e)):
        x[t] = phi * x[t - 1] + e[t]
    return x[burn:]


# oracles


def test_result_rejects_on_p():
    assert TestResult.from_p("x", 1.0, 0.049).reject_at_05
    assert not TestResult.from_p("x", 1.0, 0.05).reject_at_05
    with pytest.raises(ValueError):
        TestResult("x", 1.0, 1.5, False, {})


def test_ad_and_cvm_statistics_match_scipy():
    x = np.random.default_rng(1).standard_normal(200)
    assert normality(monthly(x), "anderson_darling").statistic == pytest.approx(stats.anderson(x).statistic, rel=1e-10)
    ref = stats.cramervonmises(x, "norm", args=(x.mean(), x.std(ddof=1))).statistic
    assert normality(monthly(x), "cramer_von_mises").statistic == pytest.approx(ref, rel=1e-10)


@pytest.mark.filterwarnings("ignore::statsmodels.tools.sm_exceptions.InterpolationWarning")
def test_classic_kpss_matches_statsmodels():
    x = np.cumsum(np.random.default_rng(0).standard_normal(300))
    for det, reg in (("drift", "c"), ("trend", "ct")):
        ref = sm_kpss(x, regression=reg, nlags=5)[0]
        assert kpss(x, det, form="classic").statistic == pytest.approx(ref, rel=1e-10)


def test_adf_matches_statsmodels():
    x = np.cumsum(np.random.default_rng(0).standard_normal(300))
    ours = adf(x, "drift")
    stat, p, *_ = adfuller(x, maxlag=int(np.floor(299 ** (1 / 3))), autolag=None, regression="c")
    assert ours.statistic == pytest.approx(stat, rel=1e-10)
    assert ours.p_value == pytest.approx(p, rel=1e-10)


def test_welch_matches_statsmodels():
    x = np.random.default_rng(1).standard_normal(180) + np.tile(np.arange(12), 15) * 0.1
    s = monthly(x)
    ours = welch(s)
    ref = anova_oneway(np.diff(x), np.arange(1, 180) % 12, use_var="unequal")
    assert ours.statistic == pytest.approx(ref.statistic, rel=1e-10)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-10)


def test_friedman_uses_calendar_years():
    s = white_noise(60, seed=3, start=MonthStamp(2000, 7))
    r = friedman(s)
    # differences start in August 2000, so January 2001 opens the first full year
    assert r.params["years"] == 4
    d = np.diff(s.values)[5 : 5 + 48].reshape(4, 12)
    assert r.statistic == pytest.approx(stats.friedmanchisquare(*d.T).statistic)


def test_mcleod_li_matches_ljung_box():
    x = np.random.default_rng(5).standard_normal(300)
    ref = acorr_ljungbox((x - x.mean()) ** 2, lags=24)
    r = mcleod_li(x)
    assert r.statistic == pytest.approx(ref["lb_stat"].iloc[-1], rel=1e-10)
    assert r.p_value == pytest.approx(ref["lb_pvalue"].max(), rel=1e-10)


# fixtures


@pytest.mark.parametrize("name, ref", [("trademarks", 11.055), ("patents", 13.102)])
def test_anderson_darling_on_fixtures(cleaned, name, ref):
    r = normality(cleaned[name], "anderson_darling")
    assert r.statistic == pytest.approx(ref, rel=0.02)
    assert r.reject_at_05 and r.clamped == "lower"


def test_cvm_on_trademarks(cleaned):
    assert normality(cleaned["trademarks"], "cramer_von_mises").statistic == pytest.approx(1.7112, rel=0.02)


def test_kpss_patents_drift(cleaned):
    r = stationarity(cleaned["patents"], "kpss", "drift")
    assert r.statistic == pytest.approx(5.53, rel=0.05)
    assert r.p_value == 0.01 and r.clamped == "lower"


def test_kpss_differenced_trademarks(cleaned):
    r = stationarity(difference(cleaned["trademarks"]), "kpss", "drift")
    assert r.statistic == pytest.approx(0.0294, rel=0.15)
    assert r.p_value == 0.10 and r.clamped == "upper"


def test_integration_orders(cleaned):
    assert integration_order(cleaned["patents"], "kpss") == 1
    assert integration_order(cleaned["trademarks"], "adf") == 1
    for s in cleaned.values():
        for method in ("kpss", "adf"):
            assert integration_order(difference(s), method) <= integration_order(s, method)


def test_trademarks_seasonal_components(cleaned):
    for method in ("qs", "friedman", "welch"):
        assert seasonality(cleaned["trademarks"], method).reject_at_05, method
    assert seasonality(cleaned["patents"], "combined").reject_at_05


def test_trademarks_nonlinearity(cleaned):
    t = nonlinearity(cleaned["trademarks"], "teraesvirta")
    assert t.statistic == pytest.approx(13.656, rel=0.10)
    assert t.reject_at_05
    assert not nonlinearity(cleaned["trademarks"], "keenan").reject_at_05


def test_patents_teraesvirta(cleaned):
    t = nonlinearity(cleaned["patents"], "teraesvirta")
    assert t.reject_at_05 and t.p_value < 1e-6


def test_gph_on_differenced_trademarks(cleaned):
    assert estimate_gph(difference(cleaned["trademarks"])).d < 0


@pytest.mark.parametrize("name", ["patents", "trademarks"])
def test_battery_verdicts(reports, name):
    r = reports[name]
    assert r.verdicts == {"non_normal": True, "non_stationary": True, "seasonal": True, "non_linear": True}
    assert r.integration_order == 1


def test_every_result_is_well_formed(reports):
    for r in reports.values():
        for group in (r.normality, r.stationarity, r.seasonality, r.nonlinearity):
            for t in group:
                assert 0.0 <= t.p_value <= 1.0
                assert np.isfinite(t.statistic)


@pytest.mark.parametrize("name", ["patents", "trademarks"])
def test_battery_decisions_affine_invariant(cleaned, reports, name):
    s = cleaned[name]
    other = run_battery(s.replace_values(0.37 * s.values + 250.0))
    base = reports[name]
    for g in ("normality", "stationarity", "seasonality", "nonlinearity"):
        assert [t.reject_at_05 for t in getattr(base, g)] == [t.reject_at_05 for t in getattr(other, g)]
    assert base.verdicts == other.verdicts
    assert base.integration_order == other.integration_order


# Monte Carlo


def test_normal_samples_rarely_rejected():
    rejects = sum(normality(white_noise(500, seed=k), "anderson_darling").reject_at_05 for k in range(100))
    assert rejects <= 10


def test_kpss_white_noise():
    assert not stationarity(white_noise(500, seed=3), "kpss", "drift").reject_at_05


@pytest.mark.parametrize("method", ["kpss", "adf"])
def test_integration_order_white_noise_and_walk(method):
    wn = white_noise(500, seed=4)
    assert integration_order(wn, method) == 0
    assert integration_order(wn.replace_values(np.cumsum(wn.values)), method) == 1


def test_white_noise_not_seasonal():
    rejects = sum(seasonality(white_noise(480, seed=k), "combined").reject_at_05 for k in range(100))
    assert rejects <= 10


def test_keenan_on_linear_ar1():
    rejects = sum(keenan(ar1(k)).reject_at_05 for k in range(100))
    assert rejects <= 10


def test_gph_white_noise_and_walk():
    x = np.random.default_rng(5).standard_normal(2048)
    assert abs(estimate_gph(x).d) <= 0.15
    assert estimate_gph(np.cumsum(x)).d > 0.4


# errors


def test_degenerate_inputs():
    flat = monthly([3.0] * 120)
    with pytest.raises(DegenerateSampleError):
        normality(flat)
    with pytest.raises(DegenerateSampleError):
        stationarity(flat)
    for m in METHODS:
        with pytest.raises(DegenerateSampleError):
            nonlinearity(flat, m)
    with pytest.raises(DegenerateSampleError):
        estimate_gph(flat)


def test_seasonality_needs_three_years():
    with pytest.raises(InsufficientDataError):
        seasonality(white_noise(35))


def test_unknown_method():
    with pytest.raises(ValueError):
        normality(white_noise(50), "shapiro")
