"""Gamma, beta and hypergeometric functions.

Real and complex arguments share the same series code; see ``hyp2f1`` for the
regions where argument transformations or the Euler integral take over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from ratio_deconv import _kernels
from ratio_deconv.errors import ConvergenceError, DomainError, ValidationError


@dataclass(frozen=True)
class SeriesControl:
    """Truncation controls for hypergeometric series."""

    max_terms: int = 2000
    rel_tol: float = 1e-14

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValidationError(f"max_terms must be a positive integer, got {self.max_terms}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValidationError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")


DEFAULT_CONTROL = SeriesControl()


def _is_nonpositive_int(c: float) -> bool:
    return c <= 0 and float(c).is_integer()


def ln_gamma(x):
    """Natural log of the gamma function for x > 0 (scalar or array)."""
    if np.ndim(x) == 0:
        xf = float(x)
        if not xf > 0.0:
            raise DomainError(f"ln_gamma requires x > 0, got {x}")
        return _kernels.lanczos_ln_gamma(xf)
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0.0):
        raise DomainError("ln_gamma requires x > 0 for every element")
    return np.array([_kernels.lanczos_ln_gamma(v) for v in arr.ravel()]).reshape(arr.shape)


def gamma_fn(x: float) -> float:
    return math.exp(ln_gamma(x))


def ln_beta(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta function requires a, b > 0, got ({a}, {b})")
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def beta_fn(a: float, b: float) -> float:
    return math.exp(ln_beta(a, b))


def binomial_coeff(n: int, k: int) -> float:
    """C(n, k); exact integer arithmetic for n <= 60."""
    if int(n) != n or int(k) != k or n < 0 or k < 0:
        raise DomainError(f"binomial_coeff needs non-negative integers, got ({n}, {k})")
    n, k = int(n), int(k)
    if k > n:
        raise DomainError(f"binomial_coeff requires k <= n, got ({n}, {k})")
    if n <= 60:
        return float(math.comb(n, k))
    return float(round(math.exp(ln_gamma(n + 1) - ln_gamma(k + 1) - ln_gamma(n - k + 1))))


def regularized_incomplete_beta(a: float, b: float, x):
    """I_x(a, b) for x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise DomainError(f"incomplete beta requires a, b > 0, got ({a}, {b})")
    xa = np.asarray(x, dtype=float)
    if np.any(~((xa >= 0.0) & (xa <= 1.0))):
        raise DomainError("incomplete beta argument must lie in [0, 1]")
    out = _sp.betainc(a, b, xa)
    return float(out) if np.ndim(x) == 0 else out


# ----------------------------------------------------------------------------
# 1F1


_ASYMPTOTIC_FROM = 30.0


def _asymptotic_sum(p: float, q: float, w: float, tol: float):
    """sum_s (p)_s (q)_s / s! w^s, stopped at the smallest term; None if not below tol."""
    total, term = 1.0, 1.0
    for s in range(200):
        nxt = term * (p + s) * (q + s) / (s + 1.0) * w
        if abs(nxt) >= abs(term):
            return None
        total += nxt
        term = nxt
        if abs(term) <= tol * abs(total):
            return total
    return None


def _gamma_ratio(num: float, den: float) -> float:
    """Gamma(num)/Gamma(den); 0 when den is a pole."""
    if _is_nonpositive_int(den):
        return 0.0
    sign = _sp.gammasgn(num) * _sp.gammasgn(den)
    return float(sign * np.exp(_sp.gammaln(num) - _sp.gammaln(den)))


def _hyp1f1_negative_large(a: float, c: float, X: float, tol: float):
    """1F1(a; c; -X) for large X from its algebraic asymptotic series.

    The exponentially small companion term is not summed; the branch is used
    only when a bound on it sits below the tolerance.
    """
    if _is_nonpositive_int(a) or _is_nonpositive_int(c - a):
        return None  # terminating cases: the series is exact and short
    alg = _asymptotic_sum(a, a - c + 1.0, 1.0 / X, tol)
    if alg is None:
        return None
    first = _gamma_ratio(c, c - a) * X ** (-a) * alg
    companion = abs(_gamma_ratio(c, a)) * np.exp(-X) * X ** (a - c)
    if companion > tol * abs(first):
        return None
    return first


def _hyp1f1_scalar(a: float, c: float, z: complex, ctrl: SeriesControl) -> complex:
    if z.imag == 0.0 and z.real <= -_ASYMPTOTIC_FROM:
        val = _hyp1f1_negative_large(a, c, -z.real, ctrl.rel_tol)
        if val is not None:
            return complex(val)
    if z.real < 0.0:
        val, n, ok = _kernels.series_1f1(c - a, c, -z, ctrl.max_terms, ctrl.rel_tol)
        val = complex(val) * np.exp(z)
    else:
        val, n, ok = _kernels.series_1f1(a, c, z, ctrl.max_terms, ctrl.rel_tol)
    if not ok:
        raise ConvergenceError(
            f"1F1({a}; {c}; {z}) did not converge in {n} terms", partial_value=val, n_terms=n
        )
    return complex(val)


def hyp1f1(a: float, c: float, z, ctrl: SeriesControl | None = None):
    """Kummer's confluent hypergeometric function 1F1(a; c; z).

    ``z`` may be real or complex, scalar or array. For Re z < 0 the Kummer
    transformation 1F1(a; c; z) = e^z 1F1(c-a; c; -z) is applied so the
    summed series has no cancellation.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    if _is_nonpositive_int(c):
        raise DomainError(f"1F1 undefined for c = {c}")
    is_complex = np.iscomplexobj(z)
    if np.ndim(z) == 0:
        val = _hyp1f1_scalar(a, c, complex(z), ctrl)
        return val if is_complex else val.real
    arr = np.asarray(z)
    out = np.array([_hyp1f1_scalar(a, c, complex(v), ctrl) for v in arr.ravel()])
    out = out.reshape(arr.shape)
    return out if is_complex else out.real


# ----------------------------------------------------------------------------
# 2F1


def _euler_2f1(a, b, c, zeta: np.ndarray, ctrl: SeriesControl) -> np.ndarray:
    """Euler integral on the real line, u = log(t/(1-t)); needs c > b > 0.

    The integrand is analytic in the strip |Im u| < pi - |arg(1-z)|, so the
    trapezoid rule converges geometrically; step h and 2h sums are compared
    as an error estimate.
    """
    zeta = np.asarray(zeta, dtype=np.complex128)
    tol = max(ctrl.rel_tol, 1e-15)
    span = math.log(1.0 / tol) + 2.0
    lnabs = np.log(np.abs(zeta))
    d = np.pi - np.abs(np.angle(zeta))
    if np.any(d < 1e-3):
        raise DomainError("2F1 argument within 1e-3 rad of the branch cut [1, inf)")
    h = 2.0 * np.pi * 0.8 * d / (math.log(1.0 / tol) + 3.0)
    u_lo = np.minimum(0.0, -lnabs) - span / b
    u_hi = np.maximum(0.0, -lnabs) + span / (c - b)
    log_pref = ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)
    for _ in range(4):
        s_h, s_2h = _kernels.euler_2f1_sums(
            float(a), float(b), float(c), zeta, h, u_lo, u_hi
        )
        scale = np.maximum(np.abs(s_h), np.finfo(float).tiny)
        err = np.abs(s_h - s_2h) / scale
        if np.all(err <= max(math.sqrt(tol) * 10.0, 1e-6)):
            return math.exp(log_pref) * s_h
        h = h / 2.0
    raise ConvergenceError(
        "2F1 Euler-integral quadrature did not settle", partial_value=math.exp(log_pref) * s_h
    )


def _series_2f1_checked(a, b, c, z, ctrl):
    val, n, ok = _kernels.series_2f1(a, b, c, z, ctrl.max_terms, ctrl.rel_tol)
    if not ok:
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}; {z}) did not converge in {n} terms", partial_value=val, n_terms=n
        )
    return complex(val)


def hyp2f1(a: float, b: float, c: float, z, ctrl: SeriesControl | None = None):
    """Gauss hypergeometric function 2F1(a, b; c; z), principal branch.

    Dispatch per point:

    * ``|z| <= 0.5``: direct series.
    * ``|z/(z-1)| <= 0.5``: Pfaff transformation, then series.
    * otherwise: Euler integral (requires c > b > 0 or c > a > 0), which also
      covers large negative and complex arguments off the cut.

    Real ``z >= 1`` is outside the domain.
    """
    zc = np.asarray(z, dtype=np.complex128)
    out = hyp2f1_one_minus(a, b, c, 1.0 - zc, ctrl, _z=zc)
    if np.ndim(z) == 0:
        return complex(out) if np.iscomplexobj(z) else complex(out).real
    return out if np.iscomplexobj(z) else out.real


def hyp2f1_one_minus(a: float, b: float, c: float, zeta, ctrl: SeriesControl | None = None,
                     _z=None):
    """2F1(a, b; c; 1 - zeta) with ``zeta`` supplied directly.

    Keeps full relative precision when z is close to 1 (tiny zeta), where
    forming ``1 - zeta`` first would round onto the branch point. Always
    returns complex values.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    if _is_nonpositive_int(c):
        raise DomainError(f"2F1 undefined for c = {c}")
    scalar = np.ndim(zeta) == 0
    zt = np.atleast_1d(np.asarray(zeta, dtype=np.complex128)).ravel()
    zc = 1.0 - zt if _z is None else np.atleast_1d(np.asarray(_z, dtype=np.complex128)).ravel()
    on_cut = (zt.imag == 0.0) & (zt.real <= 0.0)
    if np.any(on_cut):
        raise DomainError(f"2F1 requires z < 1 off the branch cut, got {zc[on_cut][0]}")
    out = np.empty(zt.shape, dtype=np.complex128)
    absz = np.abs(zc)
    w = 1.0 - 1.0 / zt  # z/(z-1)
    direct = absz <= 0.5
    pfaff = ~direct & (np.abs(w) <= 0.5)
    rest = ~(direct | pfaff)
    for i in np.flatnonzero(direct):
        out[i] = 1.0 if zc[i] == 0 else _series_2f1_checked(a, b, c, zc[i], ctrl)
    for i in np.flatnonzero(pfaff):
        # 2F1(a,b;c;z) = (1-z)^(-b) 2F1(c-a, b; c; z/(z-1))
        out[i] = zt[i] ** (-b) * _series_2f1_checked(c - a, b, c, w[i], ctrl)
    if np.any(rest):
        if c > b > 0:
            out[rest] = _euler_2f1(a, b, c, zt[rest], ctrl)
        elif c > a > 0:
            out[rest] = _euler_2f1(b, a, c, zt[rest], ctrl)
        else:
            for i in np.flatnonzero(rest):
                if absz[i] < 1.0:
                    out[i] = _series_2f1_checked(a, b, c, zc[i], ctrl)
                else:
                    raise ConvergenceError(
                        f"2F1({a}, {b}; {c}; {zc[i]}) needs c > a > 0 or c > b > 0 "
                        "outside the series regions"
                    )
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(zeta))
