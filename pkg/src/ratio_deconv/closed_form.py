"""Closed-form densities of X for the nine worked pairings; oracles for the pipelines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize
from scipy import special as _sp

from ratio_deconv.decomposition import kernel_class
from ratio_deconv.deconvolve import GridSpec, default_inversion
from ratio_deconv.distributions import (
    DistributionSpec,
    bbeta_weights,
    cdf,
    logpdf,
    pdf,
)
from ratio_deconv.errors import DomainError, UnknownCaseError
from ratio_deconv.laplace import InversionConfig
from ratio_deconv.special import binomial_coeff, hyp1f1, ln_gamma


@dataclass(frozen=True)
class OracleCase:
    """A (Z, Y) pairing with the exact density of X.

    ``x_spec`` names X as a catalog distribution when it is one (this enables
    the Monte Carlo leg); ``x_cdf`` is used to locate the central mass region.
    """

    name: str
    z_spec: DistributionSpec
    y_spec: DistributionSpec
    x_density: Callable
    x_spec: Optional[DistributionSpec] = None
    x_cdf: Optional[Callable] = None
    grid: GridSpec = field(default_factory=GridSpec)
    inversion: Optional[InversionConfig] = None
    params: dict = field(default_factory=dict)

    @property
    def kernel(self) -> str:
        return kernel_class(self.y_spec.family)

    @property
    def default_inversion(self) -> InversionConfig:
        if self.inversion is not None:
            return self.inversion
        from ratio_deconv.decomposition import decompose

        return default_inversion(decompose(self.y_spec).kernel)

    def cdf_x(self, x: float) -> float:
        if self.x_cdf is not None:
            return float(self.x_cdf(x))
        val, _ = integrate.quad(lambda t: float(self.x_density(t)), 0.0, x, limit=200)
        return val

    def quantile(self, q: float) -> float:
        if not 0.0 < q < 1.0:
            raise DomainError(f"quantile level must be in (0, 1), got {q}")
        hi = 1.0
        while self.cdf_x(hi) < q:
            hi *= 2.0
            if hi > 1e12:
                raise DomainError(f"{self.name}: quantile {q} beyond 1e12")
        lo = hi / 2.0
        while lo > 1e-300 and self.cdf_x(lo) > q:
            lo /= 2.0
        return optimize.brentq(lambda t: self.cdf_x(t) - q, lo, hi, xtol=1e-14, rtol=1e-12)

    def central_region(self, mass_fraction: float = 0.9) -> tuple[float, float]:
        tail = 0.5 * (1.0 - mass_fraction)
        return self.quantile(tail), self.quantile(1.0 - tail)


def _D(family, **params):
    return DistributionSpec(family, params)


def _gamma_logpdf(shape, rate, x):
    x = np.asarray(x, dtype=float)
    return shape * math.log(rate) - ln_gamma(shape) + (shape - 1.0) * np.log(x) - rate * x


def _signed_gamma_mixture(weights, shapes, rate):
    """Density and CDF of sum_k w_k Gamma(shape_k, rate), terms accumulated in log space."""
    weights = list(weights)
    shapes = list(shapes)

    def density(x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        pos = x > 0
        for w, a in zip(weights, shapes):
            if w == 0.0:
                continue
            total[pos] += math.copysign(1.0, w) * np.exp(
                math.log(abs(w)) + _gamma_logpdf(a, rate, x[pos])
            )
        return total if total.ndim else float(total)

    def dist(x):
        x = np.asarray(x, dtype=float)
        return sum(w * _sp.gammainc(a, rate * x) for w, a in zip(weights, shapes))

    return density, dist


def kumaraswamy_exp_weights(b: int) -> list[float]:
    """Gamma-mixture weights C(b-1,k) (-1)^k b/(k+1); they sum to 1."""
    return [binomial_coeff(b - 1, k) * (-1) ** k * b / (k + 1.0) for k in range(b)]


def kumaraswamy_exp_printed_density(a: float, b: int, lam: float, x):
    """The last displayed form of Example 1's result, without the factor b.

    Kept only to document that it integrates to 1/b.
    """
    w = [binomial_coeff(b - 1, k) * (-1) ** k / (k + 1.0) for k in range(b)]
    dens, _ = _signed_gamma_mixture(w, [a * (k + 1) for k in range(b)], lam)
    return dens(x)


def oracle_kumaraswamy_exp(a: float = 2.0, b: int = 1, lam: float = 1.0) -> OracleCase:
    if int(b) != b or b < 1:
        raise DomainError(f"the closed form needs integer b >= 1, got {b}")
    b = int(b)
    dens, dist = _signed_gamma_mixture(
        kumaraswamy_exp_weights(b), [a * (k + 1) for k in range(b)], lam
    )
    x_spec = _D("gamma", shape=a, rate=lam) if b == 1 else None
    return OracleCase(
        "kumaraswamy-exp",
        _D("kumaraswamy", a=a, b=b),
        _D("exponential", rate=lam),
        dens, x_spec=x_spec, x_cdf=dist, params={"a": a, "b": b, "lambda": lam},
    )


def oracle_bbeta_gamma(alpha: float = 2.0, beta: float = 3.0, rho: float = 1.0,
                       delta: float = 1.0, lam: float = 1.0) -> OracleCase:
    w = bbeta_weights(alpha, beta, rho, delta)
    dens, dist = _signed_gamma_mixture(w, [alpha, alpha + 1.0, alpha + 2.0], lam)
    x_spec = _D("gamma", shape=alpha, rate=lam) if delta == 0.0 else None
    return OracleCase(
        "bbeta-gamma",
        _D("bbeta", alpha=alpha, beta=beta, rho=rho, delta=delta),
        _D("gamma", shape=beta, rate=lam),
        dens, x_spec=x_spec, x_cdf=dist,
        params={"alpha": alpha, "beta": beta, "rho": rho, "delta": delta, "lambda": lam},
    )


def oracle_beta_gamma(alpha: float = 2.0, beta: float = 3.0, lam: float = 1.0) -> OracleCase:
    x_spec = _D("gamma", shape=alpha, rate=lam)
    return OracleCase(
        "beta-gamma",
        _D("beta", alpha=alpha, beta=beta),
        _D("gamma", shape=beta, rate=lam),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        params={"alpha": alpha, "beta": beta, "lambda": lam},
    )


def topp_leone_gamma_density(v: int, beta: float, lam: float, x):
    """2v Gamma(beta) sum_k C(v-1,k) 2^k lam^(2v-k-1) x^(2v-k-2) 1F1(2v+1; c_k; -lam x)/Gamma(c_k),
    c_k = beta + 2v - k - 1."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    for k in range(v):
        ck = beta + 2 * v - k - 1.0
        logc = (
            math.log(2.0 * v) + ln_gamma(beta) + math.log(binomial_coeff(v - 1, k))
            + k * math.log(2.0) + (2 * v - k - 1) * math.log(lam) - ln_gamma(ck)
        )
        total[pos] += np.exp(logc + (2 * v - k - 2) * np.log(xp)) * hyp1f1(
            2.0 * v + 1.0, ck, -lam * xp
        )
    return total if total.ndim else float(total)


# X has a power-law tail (about x^-beta), so the grid reaches further out
TOPP_LEONE_GRID = GridSpec(0.01, 1000.0, 200, "log")


def oracle_topp_leone_gamma(v: int = 2, beta: float = 3.0, lam: float = 1.0) -> OracleCase:
    if int(v) != v or v < 1:
        raise DomainError(f"the closed form needs integer v >= 1, got {v}")
    v = int(v)
    return OracleCase(
        "topp-leone-gamma",
        _D("topp-leone", v=v),
        _D("gamma", shape=beta, rate=lam),
        lambda x: topp_leone_gamma_density(v, beta, lam, x),
        grid=TOPP_LEONE_GRID,
        params={"v": v, "beta": beta, "lambda": lam},
    )


def oracle_wlratio_exp(c: float = 2.0, beta: float = 1.5, lam: float = 2.0) -> OracleCase:
    x_spec = _D("weighted-lindley", c=c, beta=beta)
    return OracleCase(
        "wlratio-exp",
        DistributionSpec("wl-ratio", {"c": c, "beta": beta, "lambda": lam}),
        _D("exponential", rate=lam),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        params={"c": c, "beta": beta, "lambda": lam},
    )


def oracle_ggratio_gg(a1: float = 1.0, d1: float = 2.0, a2: float = 1.0, d2: float = 3.0,
                      theta: float = 2.0) -> OracleCase:
    x_spec = _D("generalized-gamma", a=a1, d=d1, theta=theta)
    return OracleCase(
        "gg-gg",
        _D("gg-ratio", a1=a1, d1=d1, a2=a2, d2=d2, theta=theta),
        _D("generalized-gamma", a=a2, d=d2, theta=theta),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        params={"a1": a1, "d1": d1, "a2": a2, "d2": d2, "theta": theta},
    )


def oracle_uw2_weibull(theta: float = 2.0, beta: float = 1.0) -> OracleCase:
    x_spec = _D("weibull", shape=theta, scale=1.0)
    return OracleCase(
        "uw2-weibull",
        _D("uw2", theta=theta, beta=beta),
        _D("weibull", shape=theta, scale=beta),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        params={"theta": theta, "beta": beta},
    )


def oracle_betamix_wl(a: float = 2.0, b: float = 3.0) -> OracleCase:
    x_spec = _D("weighted-lindley", c=a, beta=1.0)
    return OracleCase(
        "betamix-wl",
        _D("betamix-wl", a=a, b=b),
        _D("weighted-lindley", c=b, beta=1.0),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        params={"a": a, "b": b},
    )


GBP_GRID = GridSpec(1e-4, 1e4, 200, "log")


def oracle_gbp(alpha1: float = 1.0, beta1: float = 1.0, lambda1: float = 1.0,
               alpha2: float = 1.0, beta2: float = 1.0, lambda2: float = 1.0) -> OracleCase:
    x_spec = DistributionSpec(
        "generalized-beta-prime", {"alpha": alpha1, "beta": beta1, "lambda": lambda1}
    )
    return OracleCase(
        "gbp-gbp",
        DistributionSpec("gbp-ratio", {
            "alpha1": alpha1, "beta1": beta1, "alpha2": alpha2, "beta2": beta2,
            "lambda1": lambda1, "lambda2": lambda2,
        }),
        DistributionSpec("generalized-beta-prime",
                         {"alpha": alpha2, "beta": beta2, "lambda": lambda2}),
        lambda x: pdf(x_spec, x), x_spec=x_spec, x_cdf=lambda x: cdf(x_spec, x),
        grid=GBP_GRID,
        params={"alpha1": alpha1, "beta1": beta1, "lambda1": lambda1,
                "alpha2": alpha2, "beta2": beta2, "lambda2": lambda2},
    )


REGISTRY: dict[str, Callable[..., OracleCase]] = {
    "kumaraswamy-exp": oracle_kumaraswamy_exp,
    "bbeta-gamma": oracle_bbeta_gamma,
    "beta-gamma": oracle_beta_gamma,
    "topp-leone-gamma": oracle_topp_leone_gamma,
    "wlratio-exp": oracle_wlratio_exp,
    "gg-gg": oracle_ggratio_gg,
    "uw2-weibull": oracle_uw2_weibull,
    "betamix-wl": oracle_betamix_wl,
    "gbp-gbp": oracle_gbp,
}

CASE_NAMES = tuple(REGISTRY)


def get_case(name: str, **params) -> OracleCase:
    """Build a registry case, optionally overriding its parameters."""
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise UnknownCaseError(
            f"unknown case {name!r}; known: {', '.join(CASE_NAMES)}"
        ) from None
    return factory(**params)


def oracle_grid(case: OracleCase, grid: GridSpec | None = None):
    """The exact density sampled on the case grid, as a DensityGrid."""
    from ratio_deconv.deconvolve import DensityGrid

    g = grid or case.grid
    x = g.abscissae()
    return DensityGrid(x, np.asarray(case.x_density(x), dtype=float), {"method": "oracle"})


__all__ = [
    "OracleCase", "REGISTRY", "CASE_NAMES", "get_case", "oracle_grid",
    "oracle_kumaraswamy_exp", "oracle_bbeta_gamma", "oracle_beta_gamma",
    "oracle_topp_leone_gamma", "oracle_wlratio_exp", "oracle_ggratio_gg",
    "oracle_uw2_weibull", "oracle_betamix_wl", "oracle_gbp",
    "kumaraswamy_exp_weights", "kumaraswamy_exp_printed_density",
    "topp_leone_gamma_density", "logpdf",
]
