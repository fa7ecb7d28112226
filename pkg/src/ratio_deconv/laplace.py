"""Numerical inverse Laplace transforms and the iterated inversion.

Two engines:

* Gaver-Stehfest: real nodes k ln2 / t, exact rational weights.
* Fixed Talbot: cotangent contour s(theta) = r theta (cot theta + i),
  r = contour_scale * M / t, trapezoid rule in theta.

Both are vectorized over t: the transform is called once with every node.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline, PchipInterpolator

from ratio_deconv.errors import CapabilityError, ConfigError, NumericError

log = logging.getLogger(__name__)

LN2 = math.log(2.0)


@lru_cache(maxsize=None)
def stehfest_weights(order: int) -> np.ndarray:
    """Stehfest weights V_1..V_N, computed in exact rational arithmetic."""
    n = order
    half = n // 2
    out = []
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            num = j**half * math.factorial(2 * j)
            den = (
                math.factorial(half - j) * math.factorial(j) * math.factorial(j - 1)
                * math.factorial(k - j) * math.factorial(2 * j - k)
            )
            acc += Fraction(num, den)
        out.append(float((-1) ** (k + half) * acc))
    return np.array(out)


@dataclass(frozen=True)
class GaverStehfest:
    order: int = 14
    name = "gaver-stehfest"

    def __post_init__(self):
        if isinstance(self.order, bool) or int(self.order) != self.order:
            raise ConfigError(f"Gaver-Stehfest order must be an integer, got {self.order}")
        object.__setattr__(self, "order", int(self.order))
        if self.order % 2 or not 4 <= self.order <= 18:
            raise ConfigError(
                f"Gaver-Stehfest order must be even and in [4, 18], got {self.order}"
            )


@dataclass(frozen=True)
class Talbot:
    nodes: int = 32
    contour_scale: float = 0.4
    name = "talbot"

    def __post_init__(self):
        if isinstance(self.nodes, bool) or int(self.nodes) != self.nodes:
            raise ConfigError(f"Talbot nodes must be an integer, got {self.nodes}")
        object.__setattr__(self, "nodes", int(self.nodes))
        if self.nodes < 8:
            raise ConfigError(f"Talbot needs at least 8 nodes, got {self.nodes}")
        if not (self.contour_scale > 0 and math.isfinite(self.contour_scale)):
            raise ConfigError(f"contour_scale must be positive, got {self.contour_scale}")


Method = Union[GaverStehfest, Talbot]


@dataclass(frozen=True)
class InterpGrid:
    t_min: float
    t_max: float
    count: int = 400

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max) or int(self.count) != self.count or self.count < 8:
            raise ConfigError("interp_grid needs 0 < t_min < t_max and count >= 8")


@dataclass(frozen=True)
class InversionConfig:
    method: Method
    inner: Optional["InversionConfig"] = None
    interp_grid: Optional[InterpGrid] = None

    def __post_init__(self):
        if not isinstance(self.method, (GaverStehfest, Talbot)):
            raise ConfigError(f"unknown inversion method {self.method!r}")

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        d: dict = {"method": self.method.name}
        if isinstance(self.method, GaverStehfest):
            d["order"] = self.method.order
        else:
            d["nodes"] = self.method.nodes
            d["contour_scale"] = self.method.contour_scale
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        if self.interp_grid is not None:
            g = self.interp_grid
            d["interp_grid"] = {"t_min": g.t_min, "t_max": g.t_max, "count": g.count}
        return d

    @classmethod
    def from_dict(cls, doc) -> "InversionConfig":
        if not isinstance(doc, dict):
            raise ConfigError("inversion config must be a JSON object")
        name = doc.get("method")
        if name == "gaver-stehfest":
            allowed = {"method", "order", "inner", "interp_grid"}
            method: Method = GaverStehfest(doc.get("order", 14))
        elif name == "talbot":
            allowed = {"method", "nodes", "contour_scale", "inner", "interp_grid"}
            method = Talbot(doc.get("nodes", 32), doc.get("contour_scale", 0.4))
        else:
            raise ConfigError(f"method must be 'gaver-stehfest' or 'talbot', got {name!r}")
        extra = set(doc) - allowed
        if extra:
            raise ConfigError(f"unknown inversion config fields: {sorted(extra)}")
        inner = cls.from_dict(doc["inner"]) if doc.get("inner") is not None else None
        grid = None
        if doc.get("interp_grid") is not None:
            g = doc["interp_grid"]
            if not isinstance(g, dict) or set(g) - {"t_min", "t_max", "count"}:
                raise ConfigError("interp_grid must be {t_min, t_max, count}")
            try:
                grid = InterpGrid(float(g["t_min"]), float(g["t_max"]), int(g.get("count", 400)))
            except KeyError as exc:
                raise ConfigError(f"interp_grid missing {exc}") from None
        return cls(method, inner, grid)


def gaver_stehfest(order: int = 14, inner: InversionConfig | None = None) -> InversionConfig:
    return InversionConfig(GaverStehfest(order), inner)


def talbot(nodes: int = 32, contour_scale: float = 0.4) -> InversionConfig:
    return InversionConfig(Talbot(nodes, contour_scale))


@dataclass(frozen=True)
class Transform:
    """A Laplace-domain function with declared real/complex capability."""

    func: Callable
    real: bool = True
    complex: bool = True

    def __call__(self, s):
        return self.func(s)


def _as_method(cfg) -> Method:
    if isinstance(cfg, InversionConfig):
        return cfg.method
    if isinstance(cfg, (GaverStehfest, Talbot)):
        return cfg
    raise ConfigError(f"expected an InversionConfig, got {type(cfg).__name__}")


def _evaluate(F, nodes: np.ndarray, t: np.ndarray, label: str) -> np.ndarray:
    vals = np.asarray(F(nodes.ravel()))
    if vals.shape != nodes.ravel().shape:
        vals = np.broadcast_to(vals, nodes.ravel().shape)
    vals = vals.reshape(nodes.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, k = np.argwhere(bad)[0]
        raise NumericError(
            f"{label}: transform returned a non-finite value",
            node=complex(nodes[i, k]), t=float(t[i]), value=complex(vals[i, k]),
        )
    return vals


@lru_cache(maxsize=None)
def _talbot_geometry(m: int, scale: float):
    theta = np.arange(1, m) * math.pi / m
    cot = 1.0 / np.tan(theta)
    shape = theta * (cot + 1j)  # s_k t / (scale m)
    sigma = theta + (theta * cot - 1.0) * cot
    return shape, sigma


def invert(F, t, cfg, *, label: str = "inversion"):
    """Approximate the inverse Laplace transform of ``F`` at ``t > 0`` (scalar or array)."""
    method = _as_method(cfg)
    ta = np.asarray(t, dtype=float)
    tf = np.atleast_1d(ta).ravel()
    if np.any(~(tf > 0)) or np.any(~np.isfinite(tf)):
        raise ConfigError("inverse Laplace evaluation points must be positive and finite")
    if isinstance(method, GaverStehfest):
        if isinstance(F, Transform) and not F.real:
            raise CapabilityError("transform is complex-only; Gaver-Stehfest needs real nodes")
        n = method.order
        V = stehfest_weights(n)
        a = LN2 / tf
        nodes = a[:, None] * np.arange(1, n + 1)[None, :]
        vals = _evaluate(F, nodes, tf, label)
        if np.iscomplexobj(vals):
            vals = vals.real
        out = a * (vals @ V)
    else:
        if isinstance(F, Transform) and not F.complex:
            raise CapabilityError(
                "transform has no complex evaluation; use gaver-stehfest instead of talbot"
            )
        m = method.nodes
        shape, sigma = _talbot_geometry(m, float(method.contour_scale))
        rt = method.contour_scale * m
        r = rt / tf
        nodes = np.empty((tf.size, m), dtype=np.complex128)
        nodes[:, 0] = r
        nodes[:, 1:] = (rt * shape)[None, :] / tf[:, None]
        vals = _evaluate(F, nodes, tf, label).astype(np.complex128)
        head = 0.5 * math.exp(rt) * vals[:, 0].real
        ws = np.exp(rt * shape) * (1.0 + 1j * sigma)
        body = (vals[:, 1:] * ws[None, :]).real.sum(axis=1)
        out = r / m * (head + body)
    if not np.all(np.isfinite(out)):
        raise NumericError(f"{label}: non-finite inverse", t=float(tf[~np.isfinite(out)][0]))
    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(ta.shape)


def outer_nodes(x, order: int) -> np.ndarray:
    """Gaver-Stehfest nodes k ln2 / x, shape (len(x), order)."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    return (LN2 / xa)[:, None] * np.arange(1, order + 1)[None, :]


def _inner_values(F, t_needed: np.ndarray, cfg: InversionConfig) -> np.ndarray:
    """Inner inverse at the requested t, exactly or through the cached grid."""
    inner = cfg.inner
    if cfg.interp_grid is None:
        uniq, inv = np.unique(t_needed, return_inverse=True)
        vals = invert(F, uniq, inner, label="inner inversion")
        return vals[inv].reshape(t_needed.shape)
    g = cfg.interp_grid
    lo, hi = float(np.min(t_needed)), float(np.max(t_needed))
    if lo < g.t_min or hi > g.t_max:
        raise ConfigError(
            f"interp_grid [{g.t_min}, {g.t_max}] does not cover outer nodes [{lo:.3g}, {hi:.3g}]"
        )
    tg = np.geomspace(g.t_min, g.t_max, g.count)
    hv = invert(F, tg, inner, label="inner inversion")
    if np.all(hv > 0):
        spline = CubicSpline(np.log(tg), np.log(hv))
        return np.exp(spline(np.log(t_needed)))
    log.debug("inner inverse not positive on the cache grid; using monotone cubic in t")
    return PchipInterpolator(np.log(tg), hv)(np.log(t_needed))


def default_interp_grid(x, order: int, count: int = 400) -> InterpGrid:
    """Cache span [t_min/4, 4 t_max] of the outer Gaver-Stehfest nodes."""
    nodes = outer_nodes(x, order)
    return InterpGrid(float(nodes.min()) / 4.0, float(nodes.max()) * 4.0, count)


def invert_iterated(F, p: float, x, cfg: InversionConfig):
    """L^{-1}{ t^(1-p) L^{-1}{F}(t) }(x): outer Gaver-Stehfest over an inner inversion.

    Without ``cfg.interp_grid`` the inner inverse is evaluated exactly at every
    distinct outer node; with it, the inner inverse is cached on a log grid and
    interpolated by a cubic spline in (log t, log h).
    """
    if not isinstance(cfg, InversionConfig):
        raise ConfigError("invert_iterated needs an InversionConfig")
    if not isinstance(cfg.method, GaverStehfest):
        raise CapabilityError(
            "the outer pass of the iterated inversion must be gaver-stehfest (real nodes)"
        )
    if cfg.inner is None:
        raise ConfigError("iterated inversion requires an inner inversion config")
    if not p > 0:
        raise ConfigError(f"p must be positive, got {p}")
    xa = np.asarray(x, dtype=float)
    xf = np.atleast_1d(xa).ravel()
    if np.any(~(xf > 0)):
        raise ConfigError("iterated inversion points must be positive")
    n = cfg.method.order
    V = stehfest_weights(n)
    nodes = outer_nodes(xf, n)
    try:
        h = _inner_values(F, nodes, cfg)
    except NumericError as exc:
        raise NumericError(f"inner pass: {exc}", **exc.context) from exc
    g = nodes ** (1.0 - p) * h
    out = (LN2 / xf) * (g @ V)
    if not np.all(np.isfinite(out)):
        raise NumericError("outer pass: non-finite inverse", x=float(xf[~np.isfinite(out)][0]))
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def forward_laplace(g: Callable, s, *, rel_tol: float = 1e-10):
    """Integral of exp(-s t) g(t) over (0, inf) by adaptive quadrature.

    For complex ``s`` the path is the ray t = rho exp(i tau) with
    tau = -clip(arg s, +-(pi/2 - 0.05)), which is valid when ``g`` is analytic
    and decaying in the right half-plane sector swept by the rotation.
    """
    sc = complex(s)
    if sc.imag == 0.0:
        if not sc.real > 0:
            raise ConfigError("forward_laplace needs Re s > 0 on the real axis")
        sr = sc.real

        def fr(t):
            return math.exp(-sr * t) * float(np.real(g(t)))

        try:
            val, err = integrate.quad(fr, 0.0, np.inf, epsrel=rel_tol, epsabs=0.0, limit=500)
        except OverflowError:
            raise NumericError("forward Laplace integrand overflows", s=sr) from None
        if not math.isfinite(val) or err > max(1e-8 * abs(val), 1e-14):
            raise NumericError("forward Laplace quadrature did not converge", residual=err, s=sr)
        return val
    tau = -max(-(math.pi / 2 - 0.05), min(math.pi / 2 - 0.05, math.atan2(sc.imag, sc.real)))
    rot = complex(math.cos(tau), math.sin(tau))

    def fc(rho):
        tt = rho * rot
        return complex(np.exp(-sc * tt) * g(tt) * rot)

    try:
        re, e1 = integrate.quad(lambda r: fc(r).real, 0.0, np.inf, epsrel=rel_tol, epsabs=0.0,
                                limit=500)
        im, e2 = integrate.quad(lambda r: fc(r).imag, 0.0, np.inf, epsrel=rel_tol, epsabs=0.0,
                                limit=500)
    except OverflowError:
        raise NumericError("forward Laplace integrand overflows", s=sc) from None
    val = complex(re, im)
    if not np.isfinite(val) or max(e1, e2) > max(1e-8 * abs(val), 1e-14):
        raise NumericError("forward Laplace quadrature did not converge", residual=max(e1, e2), s=sc)
    return val
