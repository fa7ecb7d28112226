"""Factorizations f_Y(s x) = A(s) B(x) C(s x) for the positive-support families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ratio_deconv.distributions import DistributionSpec, logpdf
from ratio_deconv.errors import CapabilityError, ValidationError
from ratio_deconv.special import ln_beta, ln_gamma


@dataclass(frozen=True)
class ExpPower:
    """C(x) = exp(-lam x^theta)."""

    lam: float
    theta: float
    name = "exp-power"

    def __post_init__(self):
        if not (self.lam > 0 and self.theta > 0):
            raise ValidationError("ExpPower needs lam > 0 and theta > 0")

    def log_value(self, x):
        return -self.lam * np.asarray(x, dtype=float) ** self.theta

    def value(self, x):
        return np.exp(self.log_value(x))


@dataclass(frozen=True)
class LinearExp:
    """C(x) = (p + q x) exp(-lam x)."""

    p: float
    q: float
    lam: float
    name = "linear-exp"

    def __post_init__(self):
        if not (self.p >= 0 and self.q > 0 and self.lam > 0):
            raise ValidationError("LinearExp needs p >= 0, q > 0, lam > 0")

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        return np.log(self.p + self.q * x) - self.lam * x

    def value(self, x):
        return np.exp(self.log_value(x))


@dataclass(frozen=True)
class PowerLaw:
    """C(x) = (1 + theta x)^(-p)."""

    theta: float
    p: float
    name = "power-law"

    def __post_init__(self):
        if not (self.theta > 0 and self.p > 0):
            raise ValidationError("PowerLaw needs theta > 0 and p > 0")

    def log_value(self, x):
        return -self.p * np.log1p(self.theta * np.asarray(x, dtype=float))

    def value(self, x):
        return np.exp(self.log_value(x))


KernelFamily = Union[ExpPower, LinearExp, PowerLaw]
KERNEL_CLASSES = ("exp-power", "linear-exp", "power-law")
_LOG_TINY = math.log(np.finfo(float).tiny)


@dataclass(frozen=True)
class Monomial:
    """coef * s^power, with a principal-branch complex continuation."""

    log_coef: float
    power: float

    def __call__(self, s):
        return np.exp(self.log(s))

    def log(self, s):
        s = np.asarray(s, dtype=float)
        return self.log_coef + self.power * np.log(s)

    def complex(self, s):
        s = np.asarray(s, dtype=np.complex128)
        return np.exp(self.log_coef + self.power * np.log(s))


@dataclass(frozen=True)
class KernelDecomposition:
    A: Callable
    B: Callable
    kernel: KernelFamily
    A_complex: Optional[Callable] = None
    log_A: Optional[Callable] = None
    log_B: Optional[Callable] = None


def _monomial_decomposition(A: Monomial, B: Monomial, kernel) -> KernelDecomposition:
    return KernelDecomposition(A=A, B=B, kernel=kernel, A_complex=A.complex, log_A=A.log, log_B=B.log)


def _gg(a: float, d: float, theta: float) -> KernelDecomposition:
    A = Monomial(0.0, d - 1.0)
    B = Monomial(math.log(theta) - d * math.log(a) - ln_gamma(d / theta), d - 1.0)
    return _monomial_decomposition(A, B, ExpPower(a ** (-theta), theta))


def decompose(y_spec: DistributionSpec) -> KernelDecomposition:
    """The canonical (A, B, C) triple for a decomposable Y family."""
    f, p = y_spec.family, y_spec.params
    if f == "exponential":
        lam = p["rate"]
        return _monomial_decomposition(Monomial(0.0, 0.0), Monomial(math.log(lam), 0.0), ExpPower(lam, 1.0))
    if f == "gamma":
        be, lam = p["shape"], p["rate"]
        A = Monomial(0.0, be - 1.0)
        B = Monomial(be * math.log(lam) - ln_gamma(be), be - 1.0)
        return _monomial_decomposition(A, B, ExpPower(lam, 1.0))
    if f == "generalized-gamma":
        return _gg(p["a"], p["d"], p["theta"])
    if f == "weibull":
        return _gg(p["scale"], p["shape"], p["shape"])
    if f == "weighted-lindley":
        if p["beta"] != 1.0:
            raise CapabilityError(
                "weighted-lindley decomposes onto the linear-exp kernel only for beta = 1"
            )
        b = p["c"]
        A = Monomial(0.0, b - 1.0)
        B = Monomial(-math.log1p(b) - ln_gamma(b), b - 1.0)
        return _monomial_decomposition(A, B, LinearExp(1.0, 1.0, 1.0))
    if f == "generalized-beta-prime":
        al, be, lam = p["alpha"], p["beta"], p["lambda"]
        A = Monomial(0.0, al - 1.0)
        B = Monomial(al * math.log(lam) - ln_beta(al, be), al - 1.0)
        return _monomial_decomposition(A, B, PowerLaw(lam, al + be))
    raise CapabilityError(
        f"{f} has no decomposition onto the exp-power, linear-exp or power-law kernels"
    )


def kernel_class(family: str) -> str | None:
    """Kernel class name for a family, or None if it is not decomposable."""
    return {
        "exponential": "exp-power",
        "gamma": "exp-power",
        "generalized-gamma": "exp-power",
        "weibull": "exp-power",
        "weighted-lindley": "linear-exp",
        "generalized-beta-prime": "power-law",
    }.get(family)


def validate_decomposition(dec: KernelDecomposition, y_spec: DistributionSpec, trials: int,
                           rng=None) -> float:
    """Max relative error of A(s)B(x)C(sx) against f_Y(sx) on random (s, x) in (0.01, 20)^2.

    Compared in log space. Draws where f_Y(sx) underflows double precision
    are skipped (the relative error is undefined there); 0 if none remain.
    """
    if int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    s = rng.uniform(0.01, 20.0, int(trials))
    x = rng.uniform(0.01, 20.0, int(trials))
    rhs = logpdf(y_spec, s * x)
    keep = rhs > _LOG_TINY
    if not np.any(keep):
        return 0.0
    s, x, rhs = s[keep], x[keep], rhs[keep]
    if dec.log_A is not None and dec.log_B is not None:
        lhs = dec.log_A(s) + dec.log_B(x) + dec.kernel.log_value(s * x)
    else:
        lhs = np.log(dec.A(s) * dec.B(x) * dec.kernel.value(s * x))
    return float(np.max(np.abs(np.expm1(lhs - rhs))))
