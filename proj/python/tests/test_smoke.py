import math

import numpy as np
import pytest

import cvhbac


def test_swap_chain_reaches_limit():
    spec = cvhbac.MachineSpec(1.0, 1.0, [1.5, 3.0])
    limit = cvhbac.gaussian_cooling_limit(spec)
    assert limit.beta_star == pytest.approx(3.0)
    chain = cvhbac.build_swap_chain(spec)
    records = cvhbac.run_protocol(spec, chain.unitary, 1)
    assert records[1].beta_eff == pytest.approx(3.0, rel=1e-10)
    assert records[1].sigma == pytest.approx(cvhbac.entropy_production_star(spec), abs=1e-9)


def test_passive_unitary_keeps_entropy():
    state = cvhbac.thermal_state([0.3, 1.2, 2.0])
    u = cvhbac.make_beam_splitter(0, 2, 3, 0.4)
    out = cvhbac.apply_unitary(state, u)
    assert cvhbac.gaussian_entropy(out) == pytest.approx(cvhbac.gaussian_entropy(state), abs=1e-12)
    nu = cvhbac.symplectic_eigenvalues(out)
    assert np.allclose(sorted(nu), sorted([0.8, 1.7, 2.5]))


def test_spectrum_solution_is_stationary():
    problem = cvhbac.SpectrumProblem(math.log(1.1), 20 * math.log(1.1), 8)
    sol = cvhbac.solve_stationarity(problem)
    assert sol.residual < 1e-12
    assert np.all(np.diff(sol.g) > 0)
    assert len(cvhbac.analytic_trajectory(problem)) == 9


def test_collision_closed_form_tracks_fock_engine():
    params = cvhbac.CollisionParams.from_occupations(2, 1.0, 1e-2, 2.0, 1.5)
    trace = cvhbac.collision_trace(2, 1e-2, 2.0, 1.5, 200)
    assert trace[-1] == pytest.approx(cvhbac.iterate_closed_form(params, 200), abs=1e-3)
    pops = cvhbac.stationary_populations(2, 1e-2, 2.0, 1.5)
    assert pops.sum() == pytest.approx(1.0)


def test_domain_errors_raise():
    with pytest.raises(ValueError):
        cvhbac.MachineSpec(-1.0, 1.0, [2.0])


def test_property_suites_pass():
    for report in cvhbac.run_all_suites(trials=100, seed=3):
        assert report.passed, report.name
