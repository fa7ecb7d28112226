import json
import math
import sys

import numpy as np
import pytest
from scipy import integrate, stats

from ratio_deconv.closed_form import get_case, oracle_beta_gamma, oracle_gbp, oracle_grid
from ratio_deconv.deconvolve import (
    DeconvolutionProblem,
    DensityGrid,
    ForwardOperator,
    GridSpec,
    deconvolve,
    deconvolve_exp_power,
    deconvolve_linear_exp,
    deconvolve_power_law,
    forward_density,
    grid_mass,
)
from ratio_deconv.distributions import pdf, spec
from ratio_deconv.errors import (
    CapabilityError,
    ConfigError,
    CoverageError,
    NumericError,
    ValidationError,
)
from ratio_deconv.laplace import GaverStehfest, InversionConfig, Talbot
from ratio_deconv.verify import compare_to_oracle

BETA23 = spec("beta", alpha=2, beta=3)
GAMMA3 = spec("gamma", shape=3, rate=1)
# 0.01 * 10^(4k/200) hits 1.0 at k = 100
GRID_AT_ONE = GridSpec(0.01, 100.0, 201)


def _at(grid, x0):
    i = int(np.argmin(np.abs(grid.abscissae - x0)))
    assert grid.abscissae[i] == pytest.approx(x0, rel=1e-12)
    return grid.values[i]


@pytest.fixture(scope="module")
def beta_gamma_grid():
    return deconvolve(DeconvolutionProblem(BETA23, GAMMA3))


# -- pipeline examples -------------------------------------------------------

def test_beta_gamma_at_one():
    g = deconvolve_exp_power(DeconvolutionProblem(BETA23, GAMMA3, GRID_AT_ONE))
    assert _at(g, 1.0) == pytest.approx(math.exp(-1), rel=1e-4)


def test_kumaraswamy_single_term_at_two():
    grid = GridSpec(0.02, 200.0, 201)  # k = 100 gives 2.0
    g = deconvolve(DeconvolutionProblem(spec("kumaraswamy", a=2, b=1),
                                        spec("exponential", rate=1), grid))
    assert _at(g, 2.0) == pytest.approx(2 * math.exp(-2), rel=1e-4)


def test_uw2_weibull_at_one():
    g = deconvolve(DeconvolutionProblem(spec("uw2", theta=2, beta=1),
                                        spec("weibull", shape=2, scale=1), GRID_AT_ONE))
    assert _at(g, 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-4)


def test_betamix_at_one():
    g = deconvolve_linear_exp(DeconvolutionProblem(spec("betamix-wl", a=2, b=3),
                                                   spec("weighted-lindley", c=3, beta=1),
                                                   GRID_AT_ONE))
    assert _at(g, 1.0) == pytest.approx(2 * math.exp(-1) / 3, rel=1e-3)
    assert abs(g.diagnostics["mass"] - 1) < 1e-3


def test_betamix_unit_at_half():
    grid = GridSpec(0.005, 50.0, 201)
    g = deconvolve(DeconvolutionProblem(spec("betamix-wl", a=1, b=1),
                                        spec("weighted-lindley", c=1, beta=1), grid))
    assert _at(g, 0.5) == pytest.approx(1.5 * math.exp(-0.5) / 2, rel=1e-3)
    assert abs(g.diagnostics["mass"] - 1) < 1e-3


@pytest.fixture(scope="module")
def gbp_unit_grid():
    c = get_case("gbp-gbp")
    return deconvolve_power_law(DeconvolutionProblem(c.z_spec, c.y_spec,
                                                     GridSpec(1e-4, 1e4, 201)))


def test_gbp_at_one(gbp_unit_grid):
    assert _at(gbp_unit_grid, 1.0) == pytest.approx(0.25, rel=1e-3)
    assert abs(gbp_unit_grid.diagnostics["mass"] - 1) < 5e-3


def test_gbp_asymmetric_matches_beta_prime():
    c = oracle_gbp(2.0, 3.0, 1.0, 1.5, 2.0, 0.5)
    g = deconvolve(DeconvolutionProblem(c.z_spec, c.y_spec, c.grid))
    assert compare_to_oracle(g, c) < 1e-3
    assert abs(g.diagnostics["mass"] - 1) < 5e-3


def test_dispatch_matches_direct_pipelines(beta_gamma_grid):
    direct = deconvolve_exp_power(DeconvolutionProblem(BETA23, GAMMA3))
    np.testing.assert_array_equal(direct.values, beta_gamma_grid.values)
    assert beta_gamma_grid.diagnostics["pipeline"] == "exp-power"


def test_wrong_pipeline_is_rejected():
    with pytest.raises(CapabilityError):
        deconvolve_linear_exp(DeconvolutionProblem(BETA23, GAMMA3))
    with pytest.raises(CapabilityError):
        deconvolve_power_law(DeconvolutionProblem(BETA23, GAMMA3))


# -- diagnostics -------------------------------------------------------------

def test_diagnostics_fields(beta_gamma_grid):
    d = beta_gamma_grid.diagnostics
    assert d["method"] == {"method": "talbot", "nodes": 32, "contour_scale": 0.4}
    assert d["count"] == 200
    assert abs(d["mass"] - 1) < 1e-4
    assert d["clamped_count"] == 0 and d["min_raw"] > 0


def test_clamping_is_counted_not_renormalized():
    c = get_case("kumaraswamy-exp", b=2)
    g = deconvolve(DeconvolutionProblem(c.z_spec, c.y_spec, c.grid))
    d = g.diagnostics
    assert d["clamped_count"] > 0 and d["min_raw"] < 0
    assert np.all(g.values >= 0)
    assert d["mass"] > 1.1  # the signed solution's negative lobe is gone and nothing rescales


def test_grid_mass_of_exact_gamma():
    x = GridSpec().abscissae()
    m = grid_mass(x, stats.gamma.pdf(x, 2.0))
    assert abs(m["mass"] - 1) < 1e-6
    assert m["head"] > 0 and m["tail"] > 0


def test_grid_mass_ignores_roundoff_tail():
    # a grid running far past the support decays into inversion noise; no tail model is fitted there
    z, y = spec("beta", alpha=2, beta=3), spec("gamma", shape=3, rate=1)
    g = deconvolve(DeconvolutionProblem(z, y, GridSpec(0.01, 100, 200)))
    assert g.diagnostics["mass_tail"] == 0.0
    assert abs(g.diagnostics["mass"] - 1) < 1e-6
    assert ForwardOperator(g).outside_mass < 1e-3


# -- problem and grid specs --------------------------------------------------

def test_default_grid():
    x = GridSpec().abscissae()
    assert x.size == 200 and x[0] == 0.02 and x[-1] == 20.0
    assert np.allclose(x[1:] / x[:-1], x[1] / x[0])


@pytest.mark.parametrize("kwargs,msg", [
    ({"x_min": 0.0}, "origin singularity"),
    ({"x_min": 2.0, "x_max": 1.0}, "exceed"),
    ({"count": 3}, "count"),
    ({"spacing": "cubic"}, "spacing"),
])
def test_grid_validation(kwargs, msg):
    with pytest.raises(ConfigError, match=msg):
        GridSpec(**kwargs)


def test_problem_validation():
    with pytest.raises(ValidationError, match="unit-interval"):
        DeconvolutionProblem(GAMMA3, GAMMA3)
    with pytest.raises(ValidationError, match="positive-support"):
        DeconvolutionProblem(BETA23, BETA23)
    with pytest.raises(CapabilityError):
        DeconvolutionProblem(BETA23, spec("lomax", shape=2, scale=1))


def test_problem_json_round_trip():
    prob = DeconvolutionProblem(BETA23, GAMMA3, GridSpec(0.05, 10, 50, "linear"),
                                InversionConfig(GaverStehfest(16)))
    back = DeconvolutionProblem.from_json(json.dumps(prob.to_dict()))
    assert back.to_dict() == prob.to_dict()
    with pytest.raises(ValidationError, match="unknown"):
        DeconvolutionProblem.from_dict({**prob.to_dict(), "extra": 1})
    with pytest.raises(ConfigError, match="unknown grid"):
        DeconvolutionProblem.from_dict({**prob.to_dict(), "grid": {"min": 1, "max": 2, "n": 3}})


def test_default_inversion_per_kernel():
    assert DeconvolutionProblem(BETA23, GAMMA3).inversion == InversionConfig(Talbot(32))
    c = get_case("gbp-gbp")
    inv = DeconvolutionProblem(c.z_spec, c.y_spec).inversion
    assert inv == InversionConfig(GaverStehfest(14), InversionConfig(Talbot(16)))


def test_power_law_rejects_talbot_outer():
    c = get_case("gbp-gbp")
    with pytest.raises(CapabilityError, match="gaver-stehfest"):
        deconvolve(DeconvolutionProblem(c.z_spec, c.y_spec, c.grid, InversionConfig(Talbot(32))))
    with pytest.raises(ConfigError, match="inner"):
        deconvolve(DeconvolutionProblem(c.z_spec, c.y_spec, c.grid,
                                        InversionConfig(GaverStehfest(14))))


def test_non_finite_inversion_is_numeric_error(monkeypatch):
    d = sys.modules["ratio_deconv.deconvolve"]  # the package re-exports a function of this name
    monkeypatch.setattr(d, "_fz", lambda z_spec, w: np.full(np.shape(w), np.nan))
    with pytest.raises(NumericError, match="exp-power"):
        deconvolve(DeconvolutionProblem(BETA23, GAMMA3))


# -- CSV ---------------------------------------------------------------------

def test_csv_round_trip_is_bit_exact(tmp_path, beta_gamma_grid):
    p = tmp_path / "g.csv"
    beta_gamma_grid.to_csv(p)
    text = p.read_bytes()
    assert text.startswith(b"x,f_x\n") and b"\r" not in text
    back = DensityGrid.from_csv(p)
    np.testing.assert_array_equal(back.abscissae, beta_gamma_grid.abscissae)
    np.testing.assert_array_equal(back.values, beta_gamma_grid.values)


def test_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x;f\n1;2\n")
    with pytest.raises(ValidationError, match="header"):
        DensityGrid.from_csv(p)
    p.write_text("x,f_x\n1,2\n0.5,1\n")
    with pytest.raises(ValidationError, match="increasing"):
        DensityGrid.from_csv(p)


def test_diagnostics_json(tmp_path, beta_gamma_grid):
    p = tmp_path / "d.json"
    beta_gamma_grid.write_diagnostics(p)
    doc = json.loads(p.read_text())
    assert doc["pipeline"] == "exp-power" and doc["count"] == 200


# -- forward operator --------------------------------------------------------

def test_forward_on_exact_grid():
    exact = oracle_grid(oracle_beta_gamma())
    assert forward_density(exact, GAMMA3, 0.5) == pytest.approx(1.5, abs=1e-6)


def test_forward_density_integrates_to_one():
    op = ForwardOperator(oracle_grid(oracle_beta_gamma()))
    total, _ = integrate.quad(lambda z: op(GAMMA3, z), 0, 1, epsabs=1e-10, limit=200)
    assert total == pytest.approx(1.0, abs=1e-4)


def test_forward_of_pipeline_output(beta_gamma_grid):
    assert forward_density(beta_gamma_grid, GAMMA3, 0.3) == pytest.approx(1.764, abs=1e-3)


def test_forward_coverage_error():
    x = GridSpec(0.02, 2.0).abscissae()
    g = DensityGrid(x, stats.gamma.pdf(x, 2.0))
    with pytest.raises(CoverageError) as exc:
        forward_density(g, GAMMA3, 0.5)
    assert exc.value.tail_mass > 0.1


def test_forward_rejects_z_outside():
    op = ForwardOperator(oracle_grid(oracle_beta_gamma()))
    with pytest.raises(ConfigError):
        op(GAMMA3, 1.0)


# -- invariants --------------------------------------------------------------

@pytest.mark.parametrize("lam", [0.5, 2.5])
def test_scale_equivariance(lam, beta_gamma_grid):
    base = GridSpec()
    scaled = GridSpec(base.x_min / lam, base.x_max / lam, base.count)
    g = deconvolve(DeconvolutionProblem(BETA23, spec("gamma", shape=3, rate=lam), scaled))
    ref = lam * beta_gamma_grid.values
    big = ref > 1e-8 * ref.max()
    np.testing.assert_allclose(g.values[big], ref[big], rtol=1e-4)
    np.testing.assert_allclose(g.values, stats.gamma.pdf(g.abscissae, 2.0, scale=1 / lam),
                               rtol=1e-4, atol=1e-10)


THEOREM1 = [
    ("beta-gamma", {}), ("kumaraswamy-exp", {"b": 1}), ("kumaraswamy-exp", {"b": 2}),
    ("kumaraswamy-exp", {"b": 3}), ("bbeta-gamma", {}), ("topp-leone-gamma", {"v": 1}),
    ("topp-leone-gamma", {"v": 2}), ("wlratio-exp", {}), ("gg-gg", {}), ("uw2-weibull", {}),
]
GS_TRUNCATION = ("order-18 Gaver-Stehfest truncation error on peaked gamma-like inverses "
                 "exceeds 1e-4 (measured 3.4e-4..7.8e-4); see the decisions ledger")
GS18_LIMITED = {("beta-gamma", ()), ("kumaraswamy-exp", (("b", 1),)), ("bbeta-gamma", ()),
                ("topp-leone-gamma", (("v", 2),)), ("wlratio-exp", ())}


def _agreement_params():
    out = []
    for name, params in THEOREM1:
        key = (name, tuple(sorted(params.items())))
        marks = [pytest.mark.xfail(strict=True, reason=GS_TRUNCATION)] if key in GS18_LIMITED else []
        label = name + "".join(f"-{k}{v}" for k, v in params.items())
        out.append(pytest.param(name, params, marks=marks, id=label))
    return out


@pytest.mark.parametrize("name,params", _agreement_params())
def test_talbot_and_gaver_stehfest_agree(name, params):
    c = get_case(name, **params)
    lo, hi = c.central_region(0.9)
    runs = [deconvolve(DeconvolutionProblem(c.z_spec, c.y_spec, c.grid, InversionConfig(m)))
            for m in (Talbot(32), GaverStehfest(18))]
    x = runs[0].abscissae
    sel = (x >= lo) & (x <= hi)
    a, b = runs[0].values[sel], runs[1].values[sel]
    assert np.max(np.abs(a - b) / np.abs(a)) < 1e-4
