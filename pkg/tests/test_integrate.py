import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from murraycoat import (
    BadRange,
    Grid,
    NonFinite,
    Params,
    Scheme,
    SchemeConfig,
    State,
    ValidationError,
    build_spectral_operator,
    l2_norm,
    random_ic,
    simulate,
    step_etd,
    step_imex,
)
from murraycoat.grid import SpectralOperator, dct2_forward, dct2_inverse
from murraycoat.model import reaction_full


def zero_forcing(u, v):
    return np.zeros_like(u), np.zeros_like(v)


@pytest.fixture(scope="module")
def near_eq(grid26):
    return random_ic(grid26, 23, 24, 24, 25, seed=7)


def test_scheme_config_invariants():
    with pytest.raises(ValidationError):
        SchemeConfig(Scheme.IMEX, dt=0.0, t_end=1.0)
    with pytest.raises(ValidationError):
        SchemeConfig(Scheme.IMEX, dt=0.1, t_end=1.0, snapshot_times=(0.5, 0.2))
    with pytest.raises(ValidationError):
        SchemeConfig(Scheme.IMEX, dt=0.1, t_end=1.0, snapshot_times=(2.0,))
    assert SchemeConfig("etd").scheme is Scheme.ETD


def test_imex_pure_linear_single_mode(fig1):
    g = Grid(4, 3, 1.0, 1.0)
    sop = SpectralOperator.from_eigenvalues(np.ones(g.shape), np.ones(g.shape))
    c = np.zeros(g.shape)
    c[1, 2] = 1.0
    x = State(dct2_inverse(c, g), dct2_inverse(c, g))
    y = step_imex(x, 0.1, g, sop, fig1, nonlinearity=zero_forcing)
    cu = dct2_forward(y.u, g)
    assert cu[1, 2] == pytest.approx(1 / 1.1, rel=1e-14)
    assert cu[1, 2] == pytest.approx(0.909091, abs=1e-6)
    cu[1, 2] = 0
    assert np.max(np.abs(cu)) < 1e-15


def test_etd_pure_decay(fig1, grid26, sop26, rng):
    x = State(rng.normal(size=grid26.shape), rng.normal(size=grid26.shape))
    y = step_etd(x, 0.05, grid26, sop26, fig1, nonlinearity=zero_forcing)
    np.testing.assert_allclose(dct2_forward(y.u, grid26),
                               np.exp(-0.05 * sop26.lam_u) * dct2_forward(x.u, grid26), atol=1e-13)
    np.testing.assert_allclose(dct2_forward(y.v, grid26),
                               np.exp(-0.05 * sop26.lam_v) * dct2_forward(x.v, grid26), atol=1e-13)


def test_etd_exact_for_constant_forcing(fig1):
    g = Grid(3, 2, 1.0, 1.0)
    lam, c, x0, dt = 3.7, 11.0, 2.0, 0.4
    sop = SpectralOperator.from_eigenvalues(np.full(g.shape, lam), np.full(g.shape, lam))
    forcing = lambda u, v: (np.full_like(u, c), np.full_like(v, c))  # noqa: E731
    y = step_etd(State.constant(g, x0, x0), dt, g, sop, fig1, nonlinearity=forcing)
    ref = solve_ivp(lambda t, x: -lam * x + c, (0, dt), [x0], rtol=1e-13, atol=1e-14).y[0, -1]
    np.testing.assert_allclose(y.u, ref, rtol=1e-12)
    np.testing.assert_allclose(y.v, ref, rtol=1e-12)


@pytest.mark.parametrize("step, tol", [(step_imex, 1e-8), (step_etd, 1e-10)])
def test_equilibrium_is_fixed_point(step, tol, fig1, grid26, sop26, equilibrium):
    x = State.constant(grid26, *equilibrium)
    y = step(x, 0.01, grid26, sop26, fig1)
    assert np.max(np.abs(y.u - x.u)) < tol
    assert np.max(np.abs(y.v - x.v)) < tol


def test_one_step_gap_is_second_order(fig1, grid26, sop26, near_eq):
    gaps = []
    for dt in (1e-3, 5e-4, 2.5e-4):
        a = step_imex(near_eq, dt, grid26, sop26, fig1)
        b = step_etd(near_eq, dt, grid26, sop26, fig1)
        gaps.append(l2_norm(a - b, grid26))
    for g1, g2 in zip(gaps, gaps[1:]):
        assert 3.5 < g1 / g2 < 4.5


def test_cross_scheme_first_order(fig1, grid26, sop26, near_eq):
    gaps = []
    for dt in (0.01, 0.005, 0.0025):
        a = simulate(near_eq, SchemeConfig(Scheme.IMEX, dt, 1.0), grid26, sop26, fig1).final
        b = simulate(near_eq, SchemeConfig(Scheme.ETD, dt, 1.0), grid26, sop26, fig1).final
        gaps.append(l2_norm(a - b, grid26))
    assert gaps[0] > gaps[1] > gaps[2]
    assert all(1.5 <= g1 / g2 <= 2.5 for g1, g2 in zip(gaps, gaps[1:]))


def test_mean_rate_matches_kinetics(fig1, grid26, sop26):
    u0, v0 = 20.0, 30.0
    fu = reaction_full(u0, v0, fig1).fu
    errs = []
    for dt in (1e-3, 5e-4, 2.5e-4):
        y = step_etd(State.constant(grid26, u0, v0), dt, grid26, sop26, fig1)
        errs.append(abs((y.u.mean() - u0) - dt * fu))
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)


def test_simulate_zero_horizon(fig1, grid26, sop26, near_eq):
    traj = simulate(near_eq, SchemeConfig(Scheme.IMEX, 0.01, 0.0), grid26, sop26, fig1)
    assert len(traj.snapshots) == 1
    assert traj.snapshots[0][0] == 0.0
    assert traj.diagnostics[0].t == 0.0


@pytest.mark.parametrize("scheme", list(Scheme))
def test_simulate_steady_ic_stays_put(scheme, fig1, grid26, sop26, equilibrium):
    x = State.constant(grid26, *equilibrium)
    traj = simulate(x, SchemeConfig(scheme, 0.01, 5.0, (1.0, 2.5)), grid26, sop26, fig1)
    for _, y in traj.snapshots:
        assert np.max(np.abs(y.u - x.u)) < 1e-6 and np.max(np.abs(y.v - x.v)) < 1e-6


def test_snapshots_land_exactly(fig1, grid26, sop26, near_eq):
    seen = []
    traj = simulate(near_eq, SchemeConfig(Scheme.ETD, 0.03, 0.5, (0.1, 0.25, 0.5)), grid26, sop26, fig1,
                    observers=[lambda k, t, x: seen.append((k, t))])
    assert traj.times.tolist() == [0.0, 0.1, 0.25, 0.5]
    assert [t for t, _ in traj.snapshots] == [r.t for r in traj.diagnostics]
    steps, times = zip(*seen)
    assert steps == tuple(range(len(seen)))
    assert all(b > a for a, b in zip(times, times[1:]))
    assert max(np.diff(times)) <= 0.03 * (1 + 1e-9)
    for t in (0.1, 0.25, 0.5):
        assert t in times


def test_nonfinite_reports_step(fig1, grid26, sop26, near_eq):
    calls = []

    def exploding(u, v):
        calls.append(1)
        if len(calls) == 3:
            return np.full_like(u, np.inf), v
        return zero_forcing(u, v)

    with pytest.raises(NonFinite) as info:
        simulate(near_eq, SchemeConfig(Scheme.IMEX, 0.01, 1.0), grid26, sop26, fig1, nonlinearity=exploding)
    assert info.value.step == 3
    assert info.value.t == pytest.approx(0.03)


def test_random_ic_contract(grid26):
    x = random_ic(grid26, 23, 24, 24, 25, seed=3)
    assert np.all((x.u > 23) & (x.u < 24)) and np.all((x.v > 24) & (x.v < 25))
    y = random_ic(grid26, 23, 24, 24, 25, seed=3)
    assert x.u.tobytes() == y.u.tobytes() and x.v.tobytes() == y.v.tobytes()
    assert not np.array_equal(x.u, random_ic(grid26, 23, 24, 24, 25, seed=4).u)
    with pytest.raises(BadRange):
        random_ic(grid26, 1, 1, 0, 2, seed=0)
    with pytest.raises(BadRange):
        random_ic(grid26, 0, 1, 3, 2, seed=0)


def test_trajectory_bitwise_deterministic(fig1, grid26, sop26):
    cfg = SchemeConfig(Scheme.ETD, 0.01, 2.0, (1.0,))
    runs = [simulate(random_ic(grid26, 23, 24, 24, 25, seed=11), cfg, grid26, sop26, fig1) for _ in range(2)]
    assert [r.values() for r in runs[0].diagnostics] == [r.values() for r in runs[1].diagnostics]


def test_pattern_forms_above_turing_threshold(grid26):
    # with a larger diffusion ratio the equilibrium is Turing unstable
    p = Params(a=103, b=77, alpha=10, beta=1.5, gamma=15, rho=13, k=0.125)
    sop = build_spectral_operator(grid26, p)
    x0 = random_ic(grid26, 23, 24, 24, 25, seed=0)
    traj = simulate(x0, SchemeConfig(Scheme.IMEX, 0.01, 150.0), grid26, sop, p)
    assert traj.diagnostics[-1].std_u > 1.0
    assert math.isfinite(traj.diagnostics[-1].norm_x)
