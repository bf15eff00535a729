import numpy as np
import pytest
from scipy import stats

from latticehydro.lattice import ExclusionConfig, IncrementConfig
from latticehydro.measures import (
    ProfileSpec,
    TestFunction,
    block_density,
    default_dictionary,
    empirical_pairing,
    empirical_record,
    nu_tilde_pmf,
    sample_exclusion_initial,
    sample_zr_initial,
)


def const(v, support=(-4.0, 0.0)):
    return ProfileSpec("constant", {"value": v}, support)


# -- marginals ---------------------------------------------------------------


def test_nu_tilde_pmf_values():
    assert nu_tilde_pmf(1.0, 0) == pytest.approx(0.5)
    assert nu_tilde_pmf(0.0, 0) == 1.0
    assert nu_tilde_pmf(0.0, 3) == 0.0
    assert nu_tilde_pmf(3.0, 0) == pytest.approx(0.25)


def test_nu_tilde_pmf_domain():
    with pytest.raises(ValueError):
        nu_tilde_pmf(-0.5, 0)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_nu_tilde_pmf_normalized_with_mean_alpha(alpha):
    ks = np.arange(0, 4000)
    p = nu_tilde_pmf(alpha, ks)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.dot(ks, p) == pytest.approx(alpha, abs=1e-12)


# -- samplers ----------------------------------------------------------------


def test_sample_zr_zero_profile():
    eta = sample_zr_initial(const(0.0), 10, (-40, 0), np.random.default_rng(0))
    assert eta.total() == 0


def test_sample_zr_mean_matches_profile():
    n_sites = 10_000
    eta = sample_zr_initial(
        const(1.0, (-200.0, 0.0)), 100, (-n_sites + 1, 0), np.random.default_rng(7)
    )
    se = np.sqrt(2.0 / n_sites)  # Var = alpha (1 + alpha) = 2
    assert abs(eta.counts.mean() - 1.0) < 3 * se


def test_sample_zr_marginal_chisquare():
    alpha = 0.8
    draws = sample_zr_initial(
        const(alpha, (-2000.0, 0.0)), 100, (-100_000 + 1, 0), np.random.default_rng(11)
    ).counts
    kmax = 8
    observed = np.bincount(np.minimum(draws, kmax), minlength=kmax + 1)
    expected = nu_tilde_pmf(alpha, np.arange(kmax + 1)).astype(float)
    expected[kmax] = 1.0 - expected[:kmax].sum()
    expected *= draws.size
    assert expected.min() > 5
    _, p = stats.chisquare(observed, expected)
    assert p > 0.01


def test_sample_zr_rejects_bad_profile():
    bad = ProfileSpec("table", {"us": [-4, 0], "values": [-1.0, 1.0]}, (-4.0, 0.0))
    with pytest.raises(ValueError):
        sample_zr_initial(bad, 10, (-40, 0), np.random.default_rng(0))


def test_sample_exclusion_full_and_mean():
    xi = sample_exclusion_initial(
        const(1.0, (0.0, 10.0)), 10, (1, 100), np.random.default_rng(0)
    )
    assert xi.total() == 100

    xi = sample_exclusion_initial(
        const(0.5, (0.0, 1000.0)), 10, (1, 10_000), np.random.default_rng(3)
    )
    se = np.sqrt(0.25 / 10_000)
    assert abs(xi.occupancy.mean() - 0.5) < 3 * se


def test_sample_exclusion_determinism_and_validation():
    a = sample_exclusion_initial(const(0.3, (0, 10)), 10, (1, 50), np.random.default_rng(5))
    b = sample_exclusion_initial(const(0.3, (0, 10)), 10, (1, 50), np.random.default_rng(5))
    assert a == b
    with pytest.raises(ValueError):
        sample_exclusion_initial(const(1.5, (0, 10)), 10, (1, 50), np.random.default_rng(5))
    with pytest.raises(ValueError):
        # support ends at 2 so the profile vanishes beyond it
        sample_exclusion_initial(const(0.5, (0, 2)), 10, (1, 50), np.random.default_rng(5))


def test_zr_sampler_stochastic_domination():
    # marginals for a profile between lam and alpha are CDF-sandwiched by the
    # corresponding geometric laws (up to DKW-size statistical slack)
    lam, mid, alpha = 0.4, 0.7, 1.1
    draws = sample_zr_initial(
        const(mid, (-2000.0, 0.0)), 100, (-50_000 + 1, 0), np.random.default_rng(23)
    ).counts
    slack = np.sqrt(np.log(2 / 0.001) / (2 * draws.size))
    ks = np.arange(0, 15)
    cdf_hat = np.searchsorted(np.sort(draws), ks, side="right") / draws.size
    cdf_lam = np.cumsum(nu_tilde_pmf(lam, ks))
    cdf_alpha = np.cumsum(nu_tilde_pmf(alpha, ks))
    assert np.all(cdf_hat >= cdf_alpha - slack)  # dominated by nu_alpha
    assert np.all(cdf_hat <= cdf_lam + slack)  # dominates nu_lam


# -- empirical functionals -----------------------------------------------------


def test_empirical_pairing_zero_config():
    eta = IncrementConfig(-5, np.zeros(6, dtype=int))
    g = TestFunction("g", "smooth-bump", {"center": -0.2, "width": 0.2})
    assert empirical_pairing(eta, g, 10) == 0.0


def test_empirical_pairing_exact_example():
    xi = ExclusionConfig([1, 0, 1, 1])
    g = TestFunction("one", "indicator-smoothed", {"a": -0.2, "b": 1.2, "edge": 0.1})
    assert empirical_pairing(xi, g, 4) == pytest.approx(0.75, abs=1e-15)


def test_empirical_pairing_riemann_error():
    g = TestFunction("g", "smooth-bump", {"center": 1.0, "width": 0.5})
    us = np.linspace(0.4, 1.6, 20_001)
    integral = np.trapezoid(g(us), us)
    c_bound = 1.2 * np.max(np.abs(g.deriv(us)))  # support length * max slope
    for N in (50, 100, 200):
        xi = ExclusionConfig(np.ones(3 * N, dtype=int))
        err = abs(empirical_pairing(xi, g, N) - integral)
        assert err <= c_bound / N


def test_empirical_pairing_linear_in_G():
    rng = np.random.default_rng(1)
    xi = ExclusionConfig(rng.integers(0, 2, size=200))
    g1 = TestFunction("g1", "smooth-bump", {"center": 1.0, "width": 0.5})
    g2 = TestFunction("g2", "smooth-bump", {"center": 0.5, "width": 0.3})
    combo = lambda u: 2.0 * g1(u) - 0.5 * g2(u)
    lhs = empirical_pairing(xi, combo, 50)
    rhs = 2.0 * empirical_pairing(xi, g1, 50) - 0.5 * empirical_pairing(xi, g2, 50)
    assert lhs == pytest.approx(rhs, abs=1e-14)


def test_block_density_basics():
    xi = ExclusionConfig(np.tile([1, 0], 50))
    centers, vals = block_density(xi, 100, 0.1)  # block of 10 sites
    assert np.allclose(vals, 0.5)
    assert np.all((vals >= 0) & (vals <= 1))

    eta = IncrementConfig(-99, np.full(100, 3, dtype=int))
    _, vals = block_density(eta, 100, 0.05)
    assert np.allclose(vals, 3.0)

    with pytest.raises(ValueError):
        block_density(xi, 10, 0.05)  # eps*N < 1


def test_empirical_record_collects_dictionary():
    xi = ExclusionConfig(np.ones(400, dtype=int))
    fns = default_dictionary("right")
    assert len(fns) == 10
    rec = empirical_record(xi, fns, 100)
    assert set(rec.pairings) == {g.id for g in fns}
    assert all(np.isfinite(v) for v in rec.pairings.values())
    assert rec.block_values.size > 0


# -- profiles and test functions ----------------------------------------------


def test_profile_kinds_evaluate():
    step = ProfileSpec("step", {"left": 1.0, "right": 0.25, "at": -1.0}, (-4, 0))
    assert step(-2.0) == 1.0 and step(-0.5) == 0.25 and step(1.0) == 0.0

    ramp = ProfileSpec("linear-ramp", {"u0": 0, "u1": 2, "v0": 0.2, "v1": 1.0}, (0, 4))
    assert ramp(1.0) == pytest.approx(0.6)
    assert ramp(3.0) == pytest.approx(1.0)

    bump = ProfileSpec("bump", {"height": 0.5, "center": -1, "width": 1, "base": 0.1}, (-4, 0))
    assert bump(-1.0) == pytest.approx(0.6)
    assert bump(-3.0) == pytest.approx(0.1)


def test_profile_table_csv(tmp_path):
    path = tmp_path / "prof.csv"
    path.write_text("# u,value\n-4,0.0\n-2,1.0\n0,0.5\n")
    prof = ProfileSpec("table", {"path": str(path)}, (-4.0, 0.0))
    assert prof(-2.0) == pytest.approx(1.0)
    assert prof(-1.0) == pytest.approx(0.75)
    prof.validate_density()


def test_profile_validations():
    with pytest.raises(ValueError):
        ProfileSpec("wiggle", {}, (0, 1))
    with pytest.raises(ValueError):
        const(-0.5).validate_density()
    with pytest.raises(ValueError):
        const(0.0, (0, 4)).validate_occupancy()
    const(1.0, (0, 4)).validate_occupancy()


def test_test_function_derivatives_match_finite_differences():
    fns = [
        TestFunction("b", "smooth-bump", {"center": -1.0, "width": 0.7}),
        TestFunction("hl", "H_l-ramp", {"l": 2.0}),
        TestFunction("hr", "H_l-ramp", {"l": 1.5, "side": "right"}),
        TestFunction("ind", "indicator-smoothed", {"a": 0.2, "b": 1.4, "edge": 0.2}),
    ]
    h = 1e-6
    for g in fns:
        lo, hi = g.support
        us = np.linspace(lo + 10 * h, hi - 10 * h, 211)
        fd = (g(us + h) - g(us - h)) / (2 * h)
        assert np.allclose(g.deriv(us), fd, atol=1e-5)


def test_h_l_ramp_matches_formula():
    g = TestFunction("hl", "H_l-ramp", {"l": 2.0})
    us = np.array([-3.0, -2.0, -1.0, 0.0, 0.5])
    assert np.allclose(g(us), [0.0, 0.0, 0.5, 1.0, 0.0])
