"""Recover f_X from f_Z and f_Y for Z = X/(X+Y).

One pipeline per kernel class of the decomposition f_Y(sx) = A(s)B(x)C(sx):

* exp-power   C(x) = exp(-lam x^theta): a single inverse Laplace transform.
* linear-exp  C(x) = (p+qx) exp(-lam x): inverse transform, then an integral
  in x (the solution of a first-order linear ODE).
* power-law   C(x) = (1+theta x)^-p: two nested inverse transforms.

``forward_density`` maps a recovered f_X back to f_Z and is the independent
consistency check for any of them.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline, PchipInterpolator

from ratio_deconv.decomposition import (
    ExpPower,
    KernelDecomposition,
    LinearExp,
    PowerLaw,
    decompose,
)
from ratio_deconv.distributions import (
    POSITIVE,
    UNIT,
    DistributionSpec,
    family_info,
    pdf,
    pdf_complex,
)
from ratio_deconv.errors import (
    CapabilityError,
    ConfigError,
    CoverageError,
    NumericError,
    ValidationError,
)
from ratio_deconv.laplace import (
    GaverStehfest,
    InversionConfig,
    Talbot,
    Transform,
    invert,
    invert_iterated,
)
from ratio_deconv.special import ln_gamma

log = logging.getLogger(__name__)

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_HALVINGS = 50


# ----------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class GridSpec:
    x_min: float = 0.02
    x_max: float = 20.0
    count: int = 200
    spacing: str = "log"

    def __post_init__(self):
        if not (isinstance(self.x_min, (int, float)) and math.isfinite(self.x_min)):
            raise ConfigError(f"grid min must be a finite number, got {self.x_min!r}")
        if not self.x_min > 0:
            raise ConfigError(
                f"grid min must be > 0 (origin singularity of the prefactor), got {self.x_min}"
            )
        if not (math.isfinite(self.x_max) and self.x_max > self.x_min):
            raise ConfigError(f"grid max must exceed min, got [{self.x_min}, {self.x_max}]")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 4:
            raise ConfigError(f"grid count must be an integer >= 4, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"grid spacing must be 'log' or 'linear', got {self.spacing!r}")

    def abscissae(self) -> np.ndarray:
        if self.spacing == "log":
            x = np.geomspace(self.x_min, self.x_max, self.count)
        else:
            x = np.linspace(self.x_min, self.x_max, self.count)
        x[0], x[-1] = self.x_min, self.x_max
        return x

    def to_dict(self) -> dict:
        return {"min": self.x_min, "max": self.x_max, "count": self.count, "spacing": self.spacing}

    @classmethod
    def from_dict(cls, doc) -> "GridSpec":
        if not isinstance(doc, dict):
            raise ConfigError("grid must be a JSON object")
        extra = set(doc) - {"min", "max", "count", "spacing"}
        if extra:
            raise ConfigError(f"unknown grid fields: {sorted(extra)}")
        try:
            return cls(float(doc["min"]), float(doc["max"]), doc.get("count", 200),
                       doc.get("spacing", "log"))
        except KeyError as exc:
            raise ConfigError(f"grid missing {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid value: {exc}") from None


def default_inversion(kernel) -> InversionConfig:
    if isinstance(kernel, PowerLaw):
        return InversionConfig(GaverStehfest(14), inner=InversionConfig(Talbot(16)))
    return InversionConfig(Talbot(32))


@dataclass(frozen=True)
class DeconvolutionProblem:
    z_spec: DistributionSpec
    y_spec: DistributionSpec
    grid: GridSpec = field(default_factory=GridSpec)
    inversion: InversionConfig | None = None

    def __post_init__(self):
        if not isinstance(self.z_spec, DistributionSpec) or self.z_spec.support != UNIT:
            raise ValidationError("z_spec must be a unit-interval distribution")
        if not isinstance(self.y_spec, DistributionSpec) or self.y_spec.support != POSITIVE:
            raise ValidationError("y_spec must be a positive-support distribution")
        dec = decompose(self.y_spec)
        object.__setattr__(self, "_decomposition", dec)
        if self.inversion is None:
            object.__setattr__(self, "inversion", default_inversion(dec.kernel))

    @property
    def decomposition(self) -> KernelDecomposition:
        return self._decomposition  # type: ignore[attr-defined]

    def to_dict(self) -> dict:
        return {
            "z_spec": self.z_spec.to_dict(),
            "y_spec": self.y_spec.to_dict(),
            "grid": self.grid.to_dict(),
            "inversion": self.inversion.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc, *, extra_keys: frozenset = frozenset()) -> "DeconvolutionProblem":
        if not isinstance(doc, dict):
            raise ValidationError("problem must be a JSON object")
        unknown = set(doc) - {"z_spec", "y_spec", "grid", "inversion"} - set(extra_keys)
        if unknown:
            raise ValidationError(f"unknown problem fields: {sorted(unknown)}")
        for key in ("z_spec", "y_spec"):
            if key not in doc:
                raise ValidationError(f"problem missing {key!r}")
        grid = GridSpec.from_dict(doc["grid"]) if "grid" in doc else GridSpec()
        inv = InversionConfig.from_dict(doc["inversion"]) if doc.get("inversion") else None
        return cls(
            DistributionSpec.from_dict(doc["z_spec"]),
            DistributionSpec.from_dict(doc["y_spec"]),
            grid,
            inv,
        )

    @classmethod
    def from_json(cls, text: str) -> "DeconvolutionProblem":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc


# ----------------------------------------------------------------------------
# result container


@dataclass
class DensityGrid:
    abscissae: np.ndarray
    values: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.abscissae = np.asarray(self.abscissae, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.abscissae.ndim != 1 or self.abscissae.shape != self.values.shape:
            raise ValidationError("abscissae and values must be 1-d arrays of equal length")
        if self.abscissae.size < 2 or np.any(np.diff(self.abscissae) <= 0):
            raise ValidationError("abscissae must be strictly increasing")
        if np.any(self.abscissae <= 0):
            raise ValidationError("abscissae must be positive")

    def to_csv(self, path) -> None:
        lines = ["x,f_x"]
        lines += [f"{x:.17g},{f:.17g}" for x, f in zip(self.abscissae, self.values)]
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "DensityGrid":
        text = Path(path).read_text(encoding="ascii")
        rows = text.strip("\n").split("\n")
        if not rows or rows[0].strip() != "x,f_x":
            raise ValidationError(f"{path}: expected header 'x,f_x'")
        xs, fs = [], []
        for i, row in enumerate(rows[1:], start=2):
            parts = row.split(",")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{i}: expected two columns")
            try:
                xs.append(float(parts[0]))
                fs.append(float(parts[1]))
            except ValueError:
                raise ValidationError(f"{path}:{i}: non-numeric value") from None
        return cls(np.array(xs), np.array(fs))

    def write_diagnostics(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(_jsonable(self.diagnostics), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ----------------------------------------------------------------------------
# tails: log f = c + g ln x - k x through three points


def _fit_tail(x3: np.ndarray, f3: np.ndarray):
    if np.any(f3 <= 0) or not np.all(np.isfinite(f3)):
        return None
    M = np.column_stack([np.ones(3), np.log(x3), -x3])
    try:
        c, g, k = np.linalg.solve(M, np.log(f3))
    except np.linalg.LinAlgError:
        return None
    if abs(k) < 1e-10 * max(1.0, 1.0 / x3.max()):
        k = 0.0
    return float(c), float(g), float(k)


def _model(params, x):
    c, g, k = params
    return np.exp(c + g * np.log(x) - k * x)


def _head_nodes(x0: float):
    """GL nodes/weights on geometric panels [x0 2^-(j+1), x0 2^-j], j < _HALVINGS."""
    right = x0 * 2.0 ** -np.arange(_HALVINGS)
    left = right / 2.0
    mid, half = 0.5 * (right + left), 0.5 * (right - left)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    weights = half[:, None] * _GL_W[None, :]
    return nodes, weights


def _tail_nodes(xn: float, panels: int = 60):
    left = xn * 1.5 ** np.arange(panels)
    right = left * 1.5
    mid, half = 0.5 * (right + left), 0.5 * (right - left)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    weights = half[:, None] * _GL_W[None, :]
    return nodes, weights


def _head_mass(params, x0: float) -> float:
    c, g, k = params
    if g <= -1.0:
        return math.inf
    nodes, weights = _head_nodes(x0)
    return float((_model(params, nodes) * weights).sum())


def _power_tail(x2: np.ndarray, f2: np.ndarray):
    """Pure power law through the last two points (k = 0)."""
    g = math.log(f2[1] / f2[0]) / math.log(x2[1] / x2[0])
    return float(math.log(f2[1]) - g * math.log(x2[1])), float(g), 0.0


def _tail_mass(params, xn: float) -> float:
    c, g, k = params
    if k < 0 or (k == 0 and g >= -1.0):
        return math.inf
    val, _ = integrate.quad(lambda x: float(_model(params, x)), xn, np.inf, limit=200)
    return float(val)


_ROUNDOFF_ENDS = 1e-12


def _end_models(x: np.ndarray, f: np.ndarray):
    # an end already at round-off relative to the peak carries no resolvable mass
    noise = _ROUNDOFF_ENDS * float(np.max(np.abs(f)))
    hp = _fit_tail(x[:3], f[:3]) if np.max(np.abs(f[:3])) > noise else None
    tp = _fit_tail(x[-3:], f[-3:]) if np.max(np.abs(f[-3:])) > noise else None
    if tp and tp[2] < 0:
        # slowly varying corrections to a power-law tail can pull k below 0
        tp = _power_tail(x[-2:], f[-2:])
    return hp, tp


def grid_mass(x: np.ndarray, f: np.ndarray, *, with_tails: bool = True) -> dict:
    """Integral of a gridded density: composite Simpson inside, fitted model outside.

    Inside: Simpson in u = ln x on x f(x) for log-like grids, trapezoid-free
    Simpson in x otherwise. Outside: the three-point model
    log f = c + g ln x - k x fitted at each end.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    ratios = x[1:] / x[:-1]
    if np.allclose(ratios, ratios[0], rtol=1e-6):
        inner = float(integrate.simpson(x * f, x=np.log(x)))
    else:
        inner = float(integrate.simpson(f, x=x))
    head = tail = 0.0
    if with_tails:
        hp, tp = _end_models(x, f)
        head = _head_mass(hp, x[0]) if hp else 0.0
        tail = _tail_mass(tp, x[-1]) if tp else 0.0
    return {"inner": inner, "head": head, "tail": tail, "mass": inner + head + tail}


# ----------------------------------------------------------------------------
# transforms


def _fz(z_spec: DistributionSpec, w):
    if np.iscomplexobj(w):
        return pdf_complex(z_spec, w)
    return pdf(z_spec, w)


def _complex_capable(prob: DeconvolutionProblem) -> bool:
    return family_info(prob.z_spec.family).complex_eval and prob.decomposition.A_complex is not None


def _A(dec: KernelDecomposition, v):
    if np.iscomplexobj(v):
        if dec.A_complex is None:
            raise CapabilityError("decomposition has no complex A; use gaver-stehfest")
        return dec.A_complex(v)
    return dec.A(v)


def phi_transform(prob: DeconvolutionProblem) -> Transform:
    """Phi(u) = f_Z(1/(v+1)) / (A(v)(v+1)^2), v = u^(1/theta) (principal branch)."""
    dec = prob.decomposition
    theta = dec.kernel.theta

    def phi(u):
        u = np.asarray(u)
        v = u ** (1.0 / theta) if theta != 1.0 else u
        vp1 = v + 1.0
        return _fz(prob.z_spec, 1.0 / vp1) / (_A(dec, v) * vp1**2)

    return Transform(phi, real=True, complex=_complex_capable(prob))


def theorem2_transform(prob: DeconvolutionProblem) -> Transform:
    """H(s) = f_Z(lam/(s+lam)) / (A(s/lam)(s+lam)^2)."""
    dec = prob.decomposition
    lam = dec.kernel.lam

    def H(s):
        s = np.asarray(s)
        sl = s + lam
        return _fz(prob.z_spec, lam / sl) / (_A(dec, s / lam) * sl**2)

    return Transform(H, real=True, complex=_complex_capable(prob))


def psi_transform(prob: DeconvolutionProblem) -> Transform:
    """Psi(s) = w^2 f_Z(w) / (s^p A(1/(theta s))), w = theta s/(1+theta s)."""
    dec = prob.decomposition
    theta, p = dec.kernel.theta, dec.kernel.p

    def psi(s):
        s = np.asarray(s)
        ts = theta * s
        w = ts / (1.0 + ts)
        return w**2 * _fz(prob.z_spec, w) / (s**p * _A(dec, 1.0 / ts))

    return Transform(psi, real=True, complex=_complex_capable(prob))


def _check_capability(transform: Transform, cfg: InversionConfig) -> None:
    method = cfg.method
    if isinstance(method, Talbot) and not transform.complex:
        raise CapabilityError(
            "talbot needs complex evaluation of f_Z, which this family lacks; "
            "use gaver-stehfest"
        )


# ----------------------------------------------------------------------------
# per-point evaluators (raw, unclamped)


def _log_B(dec: KernelDecomposition, x):
    if dec.log_B is not None:
        return dec.log_B(x)
    return np.log(dec.B(x))


def eval_exp_power(prob: DeconvolutionProblem, x) -> np.ndarray:
    """Raw f_X(x) = lam theta / (x^(2-theta) B(x)) * L^{-1}{Phi}(lam x^theta)."""
    dec = prob.decomposition
    if not isinstance(dec.kernel, ExpPower):
        raise CapabilityError(f"exp-power pipeline given a {dec.kernel.name} kernel")
    cfg = prob.inversion
    phi = phi_transform(prob)
    _check_capability(phi, cfg)
    x = np.asarray(x, dtype=float)
    lam, theta = dec.kernel.lam, dec.kernel.theta
    try:
        inv = invert(phi, lam * x**theta, cfg, label="exp-power inversion")
    except NumericError as exc:
        raise NumericError(f"exp-power pipeline: {exc}", **exc.context) from exc
    pref = np.exp(math.log(lam * theta) - (2.0 - theta) * np.log(x) - _log_B(dec, x))
    return pref * inv


def _xi_panels(x: np.ndarray):
    """GL nodes for the integral over (0, x_i]: geometric panels below x_0 then grid panels."""
    hn, hw = _head_nodes(float(x[0]))
    left, right = x[:-1], x[1:]
    mid, half = 0.5 * (left + right), 0.5 * (right - left)
    gn = mid[:, None] + half[:, None] * _GL_X[None, :]
    gw = half[:, None] * _GL_W[None, :]
    return hn, hw, gn, gw


def eval_linear_exp(prob: DeconvolutionProblem, x) -> np.ndarray:
    """Raw f_X(x) = lam^3/(q x^(m+2) B(x)) * int_0^x xi^m h(xi) dxi, m = lam p / q.

    The integral is accumulated over 8-point Gauss-Legendre panels whose nodes
    are the only places h is evaluated: 50 geometric halvings below the first
    grid point (plus a geometric-series estimate of the rest) and one panel
    between each pair of consecutive grid points.
    """
    dec = prob.decomposition
    if not isinstance(dec.kernel, LinearExp):
        raise CapabilityError(f"linear-exp pipeline given a {dec.kernel.name} kernel")
    cfg = prob.inversion
    H = theorem2_transform(prob)
    _check_capability(H, cfg)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ConfigError("linear-exp pipeline needs an increasing grid")
    p, q, lam = dec.kernel.p, dec.kernel.q, dec.kernel.lam
    m = lam * p / q
    hn, hw, gn, gw = _xi_panels(x)
    nodes = np.concatenate([hn.ravel(), gn.ravel()])
    try:
        h = invert(H, nodes, cfg, label="linear-exp inversion")
    except NumericError as exc:
        raise NumericError(f"linear-exp pipeline: {exc}", **exc.context) from exc
    integrand = nodes**m * h
    head_panels = (integrand[: hn.size].reshape(hn.shape) * hw).sum(axis=1)
    grid_panels = (integrand[hn.size:].reshape(gn.shape) * gw).sum(axis=1)
    head = head_panels.sum()
    # panels shrink geometrically; estimate what lies below the last halving
    r = head_panels[-1] / head_panels[-2] if head_panels[-2] != 0 else 0.0
    if 0.0 < r < 1.0:
        head += head_panels[-1] * r / (1.0 - r)
    cumulative = head + np.concatenate([[0.0], np.cumsum(grid_panels)])
    pref = np.exp(3.0 * math.log(lam) - math.log(q) - (m + 2.0) * np.log(x) - _log_B(dec, x))
    return pref * cumulative


def eval_power_law(prob: DeconvolutionProblem, x) -> np.ndarray:
    """Raw f_X(x) = Gamma(p)/(x B(x)) * L^{-1}{ t^(1-p) L^{-1}{Psi}(t) }(x)."""
    dec = prob.decomposition
    if not isinstance(dec.kernel, PowerLaw):
        raise CapabilityError(f"power-law pipeline given a {dec.kernel.name} kernel")
    cfg = prob.inversion
    if not isinstance(cfg.method, GaverStehfest):
        raise CapabilityError(
            "power-law pipeline: the outer inversion must be gaver-stehfest; "
            "talbot is only available for the inner pass"
        )
    if cfg.inner is None:
        raise ConfigError("power-law pipeline needs an inner inversion config")
    psi = psi_transform(prob)
    _check_capability(psi, cfg.inner)
    x = np.asarray(x, dtype=float)
    p = dec.kernel.p
    try:
        inv = invert_iterated(psi, p, x, cfg)
    except NumericError as exc:
        raise NumericError(f"power-law pipeline: {exc}", **exc.context) from exc
    pref = np.exp(ln_gamma(p) - np.log(x) - _log_B(dec, x))
    return pref * inv


_PIPELINES = {
    ExpPower: ("exp-power", eval_exp_power),
    LinearExp: ("linear-exp", eval_linear_exp),
    PowerLaw: ("power-law", eval_power_law),
}


def _assemble(prob: DeconvolutionProblem, name: str, raw: np.ndarray) -> DensityGrid:
    x = prob.grid.abscissae()
    if not np.all(np.isfinite(raw)):
        i = int(np.flatnonzero(~np.isfinite(raw))[0])
        raise NumericError(f"{name} pipeline produced a non-finite value", x=float(x[i]))
    neg = raw < 0
    values = np.where(neg, 0.0, raw)
    mass = grid_mass(x, values)
    diagnostics = {
        "pipeline": name,
        "method": prob.inversion.to_dict(),
        "mass": mass["mass"],
        "mass_inner": mass["inner"],
        "mass_head": mass["head"],
        "mass_tail": mass["tail"],
        "min_raw": float(raw.min()),
        "clamped_count": int(neg.sum()),
        "count": int(x.size),
    }
    if neg.any():
        log.info("%s: clamped %d negative values (min %.3g)", name, neg.sum(), raw.min())
    return DensityGrid(x, values, diagnostics)


def _run(prob: DeconvolutionProblem, kernel_type) -> DensityGrid:
    if not isinstance(prob.decomposition.kernel, kernel_type):
        raise CapabilityError(
            f"problem kernel is {prob.decomposition.kernel.name}, not {_PIPELINES[kernel_type][0]}"
        )
    name, fn = _PIPELINES[kernel_type]
    return _assemble(prob, name, fn(prob, prob.grid.abscissae()))


def deconvolve_exp_power(prob: DeconvolutionProblem) -> DensityGrid:
    return _run(prob, ExpPower)


def deconvolve_linear_exp(prob: DeconvolutionProblem) -> DensityGrid:
    return _run(prob, LinearExp)


def deconvolve_power_law(prob: DeconvolutionProblem) -> DensityGrid:
    return _run(prob, PowerLaw)


def deconvolve(prob: DeconvolutionProblem) -> DensityGrid:
    """Dispatch on the kernel class of the problem's decomposition."""
    for kernel_type in _PIPELINES:
        if isinstance(prob.decomposition.kernel, kernel_type):
            return _run(prob, kernel_type)
    raise CapabilityError(f"no pipeline for kernel {prob.decomposition.kernel!r}")


# ----------------------------------------------------------------------------
# forward operator


class ForwardOperator:
    """f_Z(z) = (s+1)^2 int_0^inf x f_X(x) f_Y(s x) dx, s = 1/z - 1, from a grid.

    f_X is interpolated by a cubic spline in (ln x, ln f) (monotone cubic in f
    when the grid has zeros) and extended beyond the grid by the fitted
    three-point head/tail model.
    """

    def __init__(self, grid: DensityGrid, *, max_tail_mass: float = 1e-2):
        x, f = grid.abscissae, grid.values
        self.x, self.f = x, f
        if np.all(f > 0):
            spline = CubicSpline(np.log(x), np.log(f))
            self._interp = lambda t: np.exp(spline(np.log(t)))
        else:
            pchip = PchipInterpolator(np.log(x), f)
            self._interp = lambda t: np.maximum(pchip(np.log(t)), 0.0)
        self.head, self.tail = _end_models(x, f)
        head_mass = _head_mass(self.head, x[0]) if self.head else 0.0
        tail_mass = _tail_mass(self.tail, x[-1]) if self.tail else 0.0
        outside = head_mass + tail_mass
        self.outside_mass = outside
        if not math.isfinite(outside) or outside > max_tail_mass:
            raise CoverageError(
                f"grid [{x[0]:.3g}, {x[-1]:.3g}] leaves estimated mass {outside:.3g} outside "
                f"(limit {max_tail_mass:.3g})",
                tail_mass=outside,
            )
        left, right = x[:-1], x[1:]
        mid, half = 0.5 * (left + right), 0.5 * (right - left)
        self._gn = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        self._gw = (half[:, None] * _GL_W[None, :]).ravel()
        self._gf = self._interp(self._gn)
        if self.head:
            hn, hw = _head_nodes(x[0])
            self._hn, self._hw = hn.ravel(), hw.ravel()
            self._hf = _model(self.head, self._hn)
        else:
            self._hn = self._hw = self._hf = np.empty(0)
        if self.tail:
            tn, tw = _tail_nodes(x[-1])
            self._tn, self._tw = tn.ravel(), tw.ravel()
            self._tf = _model(self.tail, self._tn)
        else:
            self._tn = self._tw = self._tf = np.empty(0)
        self._nodes = np.concatenate([self._hn, self._gn, self._tn])
        self._weights = np.concatenate([self._hw, self._gw, self._tw])
        self._fx = np.concatenate([self._hf, self._gf, self._tf])

    def __call__(self, y_spec: DistributionSpec, z: float) -> float:
        if not 0.0 < z < 1.0:
            raise ConfigError(f"forward density needs z in (0, 1), got {z}")
        s = 1.0 / z - 1.0
        fy = pdf(y_spec, s * self._nodes)
        return float((s + 1.0) ** 2 * np.sum(self._weights * self._nodes * self._fx * fy))


def forward_density(x_grid: DensityGrid, y_spec: DistributionSpec, z: float, *,
                    max_tail_mass: float = 1e-2) -> float:
    """Density of Z = X/(X+Y) at z implied by a gridded f_X."""
    return ForwardOperator(x_grid, max_tail_mass=max_tail_mass)(y_spec, z)
