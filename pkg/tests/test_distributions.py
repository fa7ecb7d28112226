import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from ratio_deconv.distributions import (
    DistributionSpec,
    bbeta_weights,
    betamix_weight,
    cdf,
    families,
    has_sampler,
    lomax_ratio_pdf,
    pdf,
    pdf_complex,
    ratio_moment_T,
    sample,
    spec,
)
from ratio_deconv.errors import CapabilityError, DomainError, ValidationError
from ratio_deconv.verify import moment_by_quadrature

REPRESENTATIVE = [
    spec("exponential", rate=1.7),
    spec("gamma", shape=2.5, rate=0.8),
    spec("generalized-gamma", a=1.3, d=2.0, theta=1.5),
    spec("weibull", shape=2.0, scale=1.5),
    spec("weighted-lindley", c=2.0, beta=1.5),
    spec("generalized-beta-prime", alpha=2.0, beta=3.0, **{"lambda": 1.5}),
    spec("lomax", shape=3.0, scale=2.0),
    spec("kumaraswamy", a=2.0, b=3.0),
    spec("beta", alpha=2.0, beta=3.0),
    spec("bbeta", alpha=2.0, beta=3.0, rho=1.0, delta=1.0),
    spec("topp-leone", v=2.0),
    spec("wl-ratio", c=2.0, beta=1.5, **{"lambda": 2.0}),
    spec("gg-ratio", a1=1.0, d1=2.0, a2=1.0, d2=3.0, theta=2.0),
    spec("uw2", theta=2.0, beta=1.0),
    spec("betamix-wl", a=2.0, b=3.0),
    spec("gbp-ratio", alpha1=2.0, beta1=3.0, alpha2=1.5, beta2=2.0, lambda1=1.0, lambda2=2.0),
]


def _ids(s):
    return s.family


def test_catalog_is_covered():
    assert {s.family for s in REPRESENTATIVE} == set(families())


@pytest.mark.parametrize("s", REPRESENTATIVE, ids=_ids)
def test_density_integrates_to_one(s):
    f = lambda x: pdf(s, x)
    if s.support == "unit":
        val, _ = integrate.quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=400)
    else:
        val = sum(integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
                  for lo, hi in ((0.0, 1.0), (1.0, np.inf)))
    assert val == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("s", REPRESENTATIVE, ids=_ids)
def test_cdf_matches_density_quadrature(s):
    pts = [0.2, 0.5, 0.8] if s.support == "unit" else [0.3, 1.0, 3.0]
    for x in pts:
        ref, _ = integrate.quad(lambda t: pdf(s, t), 0.0, x, epsabs=1e-13, epsrel=1e-11,
                                limit=400)
        assert cdf(s, x) == pytest.approx(ref, abs=1e-8)
    assert cdf(s, 0.0) == 0.0
    if s.support == "unit":
        assert cdf(s, 1.0) == 1.0


@pytest.mark.parametrize("s", REPRESENTATIVE, ids=_ids)
def test_cdf_is_monotone(s):
    x = np.linspace(0.001, 0.999, 200) if s.support == "unit" else np.geomspace(1e-3, 50, 200)
    c = cdf(s, x)
    assert np.all(np.diff(c) >= -1e-12)
    assert np.all((c >= 0) & (c <= 1))


def test_pdf_examples():
    assert pdf(spec("beta", alpha=1, beta=1), 0.4) == pytest.approx(1.0, rel=1e-14)
    assert pdf(spec("gamma", shape=2, rate=1), 1.0) == pytest.approx(math.exp(-1), rel=1e-14)
    assert pdf(spec("beta", alpha=2, beta=3), 1.5) == 0.0
    assert pdf(spec("gamma", shape=2, rate=1), -1.0) == 0.0


def test_endpoint_limits():
    assert pdf(spec("beta", alpha=1, beta=1), 0.0) == pytest.approx(1.0)
    assert pdf(spec("exponential", rate=2.0), 0.0) == pytest.approx(2.0)
    # divergent endpoint returns 0
    assert pdf(spec("beta", alpha=0.5, beta=2.0), 0.0) == 0.0


@pytest.mark.parametrize("alpha,beta,rho,delta", [(2, 3, 1, 1), (1.5, 2.5, 0.0, -2.0),
                                                  (3, 1, 0.5, 3.0)])
def test_bbeta_is_beta_mixture(alpha, beta, rho, delta):
    s = spec("bbeta", alpha=alpha, beta=beta, rho=rho, delta=delta)
    p0, p1, p2 = bbeta_weights(alpha, beta, rho, delta)
    z = np.linspace(0.01, 0.99, 50)
    mix = (p0 * stats.beta.pdf(z, alpha, beta) + p1 * stats.beta.pdf(z, alpha + 1, beta)
           + p2 * stats.beta.pdf(z, alpha + 2, beta))
    np.testing.assert_allclose(pdf(s, z), mix, rtol=1e-12)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 5), st.floats(-5, 5))
def test_bbeta_weights_sum_to_one(alpha, beta, rho, delta):
    assert sum(bbeta_weights(alpha, beta, rho, delta)) == pytest.approx(1.0, abs=1e-14)


@given(st.floats(0.2, 8), st.floats(0.2, 8))
def test_betamix_is_beta_mixture(a, b):
    p = betamix_weight(a, b)
    z = np.linspace(0.02, 0.98, 25)
    ref = p * stats.beta.pdf(z, a, b) + (1 - p) * stats.beta.pdf(z, a + 1, b + 1)
    np.testing.assert_allclose(pdf(spec("betamix-wl", a=a, b=b), z), ref, rtol=1e-12)


@given(st.floats(0.3, 6), st.floats(0.3, 6), st.floats(0.3, 6))
def test_wl_ratio_is_lomax_mixture(c, beta, lam):
    s = spec("wl-ratio", c=c, beta=beta, **{"lambda": lam})
    p = beta / (beta + c)
    z = np.linspace(0.02, 0.98, 25)
    ref = p * lomax_ratio_pdf(c, beta / lam, z) + (1 - p) * lomax_ratio_pdf(c + 1, beta / lam, z)
    np.testing.assert_allclose(pdf(s, z), ref, rtol=1e-10)


def _libby_novick(k, d1, d2, z):
    num = k**d1 * z ** (d1 - 1) * (1 - z) ** (d2 - 1)
    return num / (math.gamma(d1) * math.gamma(d2) / math.gamma(d1 + d2)
                  * (1 - (1 - k) * z) ** (d1 + d2))


@pytest.mark.parametrize("a1,d1,a2,d2", [(1, 2, 1, 3), (2.0, 1.5, 0.5, 2.5), (0.7, 3, 1.9, 1)])
def test_gg_ratio_theta_one_is_libby_novick(a1, d1, a2, d2):
    s = spec("gg-ratio", a1=a1, d1=d1, a2=a2, d2=d2, theta=1.0)
    for z in (0.1, 0.35, 0.5, 0.77, 0.95):
        assert pdf(s, z) == pytest.approx(_libby_novick(a2 / a1, d1, d2, z), rel=1e-12)


def test_complex_density_examples():
    s = spec("beta", alpha=2, beta=3)
    assert pdf_complex(s, 0.5 + 0j) == pytest.approx(1.5, rel=1e-14)
    k = spec("kumaraswamy", a=2.3, b=3.5)
    for z in (0.1, 0.4, 0.9):
        assert pdf_complex(k, z).real == pytest.approx(pdf(k, z), rel=1e-12)
        assert abs(pdf_complex(k, z).imag) < 1e-15


@pytest.mark.parametrize("s", REPRESENTATIVE, ids=_ids)
def test_schwarz_reflection(s):
    w = np.array([0.3 + 0.1j, 0.6 - 0.2j]) if s.support == "unit" else np.array([1 + 0.5j, 2 - 1j])
    np.testing.assert_allclose(np.conj(pdf_complex(s, np.conj(w))), pdf_complex(s, w), rtol=1e-13)


# mpmath: K w^(a1-1) (1-w)^(-a1-1) 2F1(a1+b1, a1+a2; a1+a2+b1+b2; 1 - (l1/l2) w/(1-w))
GBP_COMPLEX = [
    (0.3 + 0.2j, 0.7900278555481872 + 0.13753657535101813j),
    (0.7 - 0.4j, 0.9184348051803757 - 0.4590868588625622j),
    (0.9 + 0.05j, 1.613217643994315 + 0.11625160134622808j),
]


@pytest.mark.parametrize("w,ref", GBP_COMPLEX)
def test_gbp_ratio_continuation(w, ref):
    assert abs(pdf_complex(REPRESENTATIVE[-1], w) - ref) <= 1e-12 * abs(ref)


def test_complex_capability_error(monkeypatch):
    from ratio_deconv import distributions as d

    real_only = dataclasses.replace(d._FAMILIES["beta"], name="beta-real", complex_eval=False)
    monkeypatch.setitem(d._FAMILIES, "beta-real", real_only)
    with pytest.raises(CapabilityError, match="gaver-stehfest"):
        pdf_complex(DistributionSpec("beta-real", {"alpha": 2, "beta": 3}), 0.5 + 0.1j)


def test_kumaraswamy_cdf_example():
    assert cdf(spec("kumaraswamy", a=2, b=3), 0.5) == pytest.approx(0.578125, rel=1e-14)


def test_wl_ratio_cdf_reaches_one():
    s = spec("wl-ratio", c=2.0, beta=1.5, **{"lambda": 2.0})
    assert cdf(s, 1.0) == pytest.approx(1.0, abs=1e-8)
    assert cdf(s, 1.0 - 1e-12) == pytest.approx(1.0, abs=1e-8)


# -- samplers --------------------------------------------------------------

N = 100_000


def test_exponential_sample_mean():
    x = sample(spec("exponential", rate=1.0), 123, N)
    assert abs(x.mean() - 1.0) < 3 / math.sqrt(N)


def test_kumaraswamy_sample_ks():
    x = sample(spec("kumaraswamy", a=2, b=3), np.random.default_rng(5), N)
    d = stats.kstest(x, lambda z: 1 - (1 - z**2) ** 3).statistic
    assert d < 0.009


def test_weighted_lindley_sample_mean():
    s = spec("weighted-lindley", c=2.0, beta=1.5)
    m1 = integrate.quad(lambda x: x * pdf(s, x), 0, np.inf, epsrel=1e-12)[0]
    m2 = integrate.quad(lambda x: x * x * pdf(s, x), 0, np.inf, epsrel=1e-12)[0]
    sd = math.sqrt(m2 - m1 * m1)
    x = sample(s, np.random.default_rng(11), N)
    assert abs(x.mean() - m1) < 3 * sd / math.sqrt(N)


@pytest.mark.parametrize("s", [x for x in REPRESENTATIVE if has_sampler(x)], ids=_ids)
def test_samplers_match_cdf(s):
    x = np.sort(sample(s, np.random.default_rng(17), 20_000))
    d = stats.kstest(x, lambda t: cdf(s, t)).statistic
    assert d < 1.63 / math.sqrt(x.size)


def test_sampling_is_deterministic():
    s = spec("gamma", shape=0.6, rate=2.0)
    np.testing.assert_array_equal(sample(s, 9, 100), sample(s, 9, 100))


def test_sampler_errors():
    with pytest.raises(CapabilityError):
        sample(spec("topp-leone", v=2), 0, 10)
    with pytest.raises(ValidationError):
        sample(spec("beta", alpha=1, beta=1), 0, 0)


def test_gamma_ratio_samples_follow_beta():
    rng = np.random.default_rng(2024)
    x = sample(spec("gamma", shape=2.0, rate=1.5), rng, N)
    y = sample(spec("gamma", shape=3.0, rate=1.5), rng, N)
    z = np.sort(x / (x + y))
    d = stats.kstest(z, lambda t: cdf(spec("beta", alpha=2, beta=3), t)).statistic
    assert d < 1.63 / math.sqrt(N)


# -- positivity over random parameter draws ---------------------------------

pos = st.floats(0.2, 6.0)
FAMILY_PARAMS = {
    "exponential": st.fixed_dictionaries({"rate": pos}),
    "gamma": st.fixed_dictionaries({"shape": pos, "rate": pos}),
    "generalized-gamma": st.fixed_dictionaries({"a": pos, "d": pos, "theta": pos}),
    "weibull": st.fixed_dictionaries({"shape": pos, "scale": pos}),
    "weighted-lindley": st.fixed_dictionaries({"c": pos, "beta": pos}),
    "generalized-beta-prime": st.fixed_dictionaries({"alpha": pos, "beta": pos, "lambda": pos}),
    "lomax": st.fixed_dictionaries({"shape": pos, "scale": pos}),
    "kumaraswamy": st.fixed_dictionaries({"a": pos, "b": pos}),
    "beta": st.fixed_dictionaries({"alpha": pos, "beta": pos}),
    "bbeta": st.fixed_dictionaries({"alpha": pos, "beta": pos, "rho": st.floats(0, 5),
                                    "delta": st.floats(-5, 5)}),
    "topp-leone": st.fixed_dictionaries({"v": pos}),
    "wl-ratio": st.fixed_dictionaries({"c": pos, "beta": pos, "lambda": pos}),
    "gg-ratio": st.fixed_dictionaries({"a1": pos, "d1": pos, "a2": pos, "d2": pos,
                                       "theta": pos}),
    "uw2": st.fixed_dictionaries({"theta": pos, "beta": pos}),
    "betamix-wl": st.fixed_dictionaries({"a": pos, "b": pos}),
    "gbp-ratio": st.fixed_dictionaries({k: pos for k in ("alpha1", "beta1", "alpha2", "beta2",
                                                         "lambda1", "lambda2")}),
}
random_spec = st.sampled_from(sorted(FAMILY_PARAMS)).flatmap(
    lambda fam: FAMILY_PARAMS[fam].map(lambda p: DistributionSpec(fam, p)))


@settings(max_examples=1000)
@given(random_spec)
def test_density_nonnegative(s):
    x = np.linspace(0.005, 0.995, 41) if s.support == "unit" else np.geomspace(1e-3, 100, 41)
    v = pdf(s, x)
    assert np.all(v >= 0)
    assert not np.any(np.isnan(v))


# -- serialization and validation -------------------------------------------

@pytest.mark.parametrize("s", REPRESENTATIVE, ids=_ids)
def test_json_round_trip(s):
    assert DistributionSpec.from_json(s.to_json()) == s


def test_spec_validation():
    with pytest.raises(ValidationError, match="unknown family"):
        DistributionSpec("cauchy", {})
    with pytest.raises(ValidationError, match="missing"):
        spec("gamma", shape=2)
    with pytest.raises(ValidationError, match="> 0"):
        spec("gamma", shape=2, rate=-1)
    with pytest.raises(ValidationError, match=">= 0"):
        spec("bbeta", alpha=1, beta=1, rho=-0.1, delta=0)
    with pytest.raises(ValidationError, match="number"):
        spec("exponential", rate="1")
    with pytest.raises(ValidationError, match="unknown fields"):
        DistributionSpec.from_json('{"family": "exponential", "params": {"rate": 1}, "x": 1}')
    with pytest.raises(ValidationError, match="invalid JSON"):
        DistributionSpec.from_json("{")
    assert spec("bbeta", alpha=1, beta=1, rho=0, delta=-3)["delta"] == -3.0


# -- moment formula ----------------------------------------------------------

@given(st.floats(0.2, 5), st.floats(0.2, 5), st.integers(0, 1), st.floats(-2, 3))
def test_moment_formula_at_beta_equal_lambda(c, lam, j, r):
    assert ratio_moment_T(c, lam, lam, j, r) == pytest.approx((c + j) / (c + j - r + 4), rel=1e-13)


def test_moment_formula_at_r_zero_is_not_one():
    # E[T^0] = 1 exactly, but the formula as written gives (c+j)/(c+j+4) at beta = lambda
    assert ratio_moment_T(2.0, 1.0, 1.0, 0, 0.0) == pytest.approx(1 / 3)


def test_moment_formula_against_quadrature():
    quad = moment_by_quadrature(2.0, 1.0, 1.0, 0, 1.0)
    assert quad == pytest.approx(2 / 3, rel=1e-10)  # E[(1+L)^-1], L ~ Lomax(2, 1)
    assert ratio_moment_T(2.0, 1.0, 1.0, 0, 1.0) == pytest.approx(0.4)
    assert abs(ratio_moment_T(2.0, 1.0, 1.0, 0, 1.0) - quad) > 0.2


def test_moment_formula_domain():
    with pytest.raises(DomainError):
        ratio_moment_T(1.0, 1.0, 1.0, 0, 5.0)
    with pytest.raises(DomainError):
        ratio_moment_T(1.0, 1.0, 1.0, 2, 0.0)
