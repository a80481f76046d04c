import math
import os

import pytest

import sveirc


DATA = os.environ["SVEIRC_DATA"]


def table2_params():
    p, warnings = sveirc.load_params(os.path.join(DATA, "table2.json"))
    assert warnings == []
    return p


def fitted_n1_params():
    p, warnings = sveirc.load_params(os.path.join(DATA, "table3_n1.json"))
    assert warnings == []
    return p


def fitted_n2_params():
    p, warnings = sveirc.load_params(os.path.join(DATA, "table3_n2.json"))
    assert warnings == []
    return p


def epidemic_init():
    return sveirc.load_initial_state(os.path.join(DATA, "fig1_init.json"))


def test_params_fields_and_validation():
    p = table2_params()
    assert p.Lambda == 3032
    assert p.mu == pytest.approx(3.653e-5)
    assert p.n == 1
    assert p.get("kappa") == 20000

    q = p.with_param("beta", 2e-9)
    assert q.beta == 2e-9
    assert p.beta == 1.5e-9  # original untouched

    p.lambda_v = 1.5
    with pytest.raises(sveirc.ModelError):
        p.validate()


def test_response_and_rhs():
    assert sveirc.response_g(20000.0, 20000.0, 1) == pytest.approx(0.5)
    s = epidemic_init()
    d = sveirc.rhs(s, table2_params())
    assert sveirc.total_population(s) == 83000000.0
    # The balance identity ties the compartment derivatives together.
    p = table2_params()
    lhs = d.S + d.E + d.I + d.V + d.R
    rhs_val = p.Lambda - p.mu * sveirc.total_population(s) - p.d * s.I
    assert lhs == pytest.approx(rhs_val, rel=1e-10)


def test_integrate_shapes_and_peak():
    traj = sveirc.integrate(table2_params(), epidemic_init(), 300.0)
    assert len(traj.times) == 301
    assert traj.times[0] == 0.0
    assert traj.times[-1] == 300.0
    infections = [s.I for s in traj.states]
    peak_day = infections.index(max(infections))
    assert 35 <= peak_day <= 55
    assert traj.params.beta == table2_params().beta


def test_equilibrium_and_r0():
    p = table2_params()
    rep = sveirc.equilibrium_report(p)
    assert rep["r0"] == pytest.approx(sveirc.r0(p))
    assert rep["r0"] > 1.0
    assert rep["verdict"] == "unstable"
    assert not rep["stable"]

    dfs = sveirc.disease_free_state(p)
    assert dfs.E == 0.0 and dfs.I == 0.0 and dfs.C == 0.0
    assert dfs.S + dfs.V + dfs.R == pytest.approx(p.Lambda / p.mu, rel=1e-12)

    a1, a2, a3, stable_block = sveirc.routh_hurwitz(fitted_n1_params())
    assert a1 > 0 and a3 > 0 and stable_block

    jac = sveirc.jacobian_at(dfs, p)
    assert len(jac) == 6 and len(jac[0]) == 6
    assert jac[5][5] == -p.omega

    f, v = sveirc.next_generation_matrices(p)
    assert f[1] == [0.0, 0.0, 0.0]
    assert v[0][1] == 0.0

    be_minus_cd, sign = sveirc.vaccination_trend(p)
    assert sign == -1
    assert be_minus_cd < 0


def test_bifurcation_and_endemic_states():
    p2 = fitted_n2_params()
    bs = sveirc.beta_star(p2)
    assert bs is not None and bs > 0
    assert sveirc.backward_condition(p2)
    a, b = sveirc.normal_form_coefficients(p2)
    assert a > 0 and b > 0

    w, v = sveirc.criticality_eigenvectors(p2)
    assert w[1] == 1.0 and v[1] == 1.0
    assert w[0] < 0 and w[3] < 0

    p1 = fitted_n1_params()
    a1, b1 = sveirc.normal_form_coefficients(p1)
    assert a1 < 0 and b1 > 0
    assert not sveirc.backward_condition(p1)

    states = sveirc.endemic_steady_states(p2.with_param("beta", 0.999 * bs))
    assert len(states) == 2
    assert states[0].i_root < states[1].i_root
    assert states[0].jac_max_real > 0
    assert all(s.residual <= 1e-8 for s in states)

    rows = sveirc.bifurcation_scan(p2, 0.99 * bs, 1.01 * bs, 3)
    assert len(rows) == 3
    assert rows[0].r0 < 1.0 < rows[-1].r0

    # Saturated vaccinated route: no critical contact rate at all.
    sat = p1.with_param("epsilon", p1.epsilon * 100.0)
    assert sveirc.beta_star(sat) is None
    with pytest.raises(sveirc.ModelError):
        sveirc.criticality_eigenvectors(sat)


def test_fit_round_trip():
    p = fitted_n1_params()
    init = epidemic_init()
    obs = sveirc.synthesize_observations(p, init, 30, 0.0)
    assert len(obs.day_index) == 31
    obs.validate()

    truth = [p.get(name) for name in ("beta", "sigma")]
    assert (
        sveirc.objective(truth, p, init, obs, free_names=["beta", "sigma"])
        == 0.0
    )

    res = sveirc.fit(
        p,
        init,
        obs,
        [truth[0] * 1.2, truth[1] * 0.8],
        max_iter=100,
        free_names=["beta", "sigma"],
    )
    assert res.converged
    assert res.names == ["beta", "sigma"]
    assert res.fitted[0] == pytest.approx(truth[0], rel=1e-3)
    assert res.fitted[1] == pytest.approx(truth[1], rel=1e-3)
    assert res.residual_history[0] >= res.objective


def test_sensitivity_table():
    idx = sveirc.sensitivity_table(fitted_n1_params())
    assert abs(idx["lambda_v"] - (-0.9897355)) < 0.01
    assert abs(idx["delta"] - (-0.6665743)) < 0.01
    idx2 = sveirc.sensitivity_table(fitted_n2_params())
    assert idx2["alpha1"] == 0.0
    assert idx2["alpha2"] == 0.0
    assert sveirc.sensitivity_index(fitted_n1_params(), "Lambda") == (
        pytest.approx(1.0, abs=1e-9)
    )


def test_error_mapping():
    p = table2_params()
    bad = epidemic_init()
    bad.I = -1.0
    with pytest.raises(sveirc.ModelError):
        sveirc.rhs(bad, p)
    with pytest.raises(sveirc.ModelError):
        sveirc.integrate(p, epidemic_init(), -5.0)
    with pytest.raises(sveirc.ModelError):
        sveirc.load_params(os.path.join(DATA, "no_such_file.json"))
