import math

import numpy as np
import pytest

from ifrk import (
    BUILTIN_SCHEMES,
    Field,
    GridMismatchError,
    GridSpec,
    StepSizeError,
    Stepper,
    apply_exponential,
    build_periodic_laplacian,
    builtin,
    cubic,
    custom_term,
    dense_operator,
    flory_huggins,
    integrate,
    max_timestep,
)

from _oracles import butcher_step, classic_rk4, heun, reference_laplacian


def zero_term(rho=1.0):
    return custom_term(
        f=lambda x: 0.0 * x,
        fprime=lambda x: 0.0 * x,
        potential=lambda x: 0.0 * x,
        rho=rho,
        name="zero",
    )


@pytest.mark.parametrize("name", BUILTIN_SCHEMES)
def test_zero_reaction_reduces_to_exponential(name):
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    rng = np.random.default_rng(5)
    u = Field.random_uniform(grid, -1.0, 1.0, rng)
    stepped = Stepper(op, zero_term(), builtin(name), 0.2).step(u)
    ref = apply_exponential(op, u, 0.2)
    np.testing.assert_allclose(stepped.values, ref.values, atol=1e-12, rtol=0)


def test_zero_operator_ifrk4_is_classic_rk4():
    term = cubic()
    op = dense_operator(np.zeros((1, 1)))
    u = Field(values=np.array([0.3]), grid=op.grid)
    stepped = Stepper(op, term, builtin("IFRK4"), 0.1).step(u)
    expected = classic_rk4(lambda x: x - x**3, 0.1, 0.3)
    assert stepped.values[0] == pytest.approx(expected, abs=1e-14)


def test_zero_operator_ifrk2_is_heun():
    term = cubic()
    op = dense_operator(np.zeros((1, 1)))
    u = Field(values=np.array([0.4]), grid=op.grid)
    stepped = Stepper(op, term, builtin("IFRK2"), 0.1).step(u)
    assert stepped.values[0] == pytest.approx(heun(lambda x: x - x**3, 0.1, 0.4), abs=1e-14)


def test_zero_symbol_ifrk4_is_elementwise_rk4():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.0)  # symbol identically zero
    term = cubic()
    rng = np.random.default_rng(11)
    u = Field.random_uniform(grid, -0.9, 0.9, rng)
    stepped = Stepper(op, term, builtin("IFRK4"), 0.1).step(u)
    expected = classic_rk4(lambda x: x - x**3, 0.1, u.values)
    np.testing.assert_allclose(stepped.values, expected, atol=1e-14, rtol=0)


@pytest.mark.parametrize("name", BUILTIN_SCHEMES)
@pytest.mark.parametrize("term_factory", [cubic, lambda: flory_huggins(0.8, 1.6)])
def test_spectral_step_matches_butcher_oracle(name, term_factory):
    grid = GridSpec(dim=1, n_per_axis=8)
    term = term_factory()
    op = build_periodic_laplacian(grid, 0.05)
    ref_matrix = reference_laplacian(grid.shape, grid.h, 0.05)
    rng = np.random.default_rng(21)
    u = Field.random_uniform(grid, -0.5, 0.5, rng)
    tab = builtin(name)
    stepped = Stepper(op, term, tab, 0.05).step(u)
    expected = butcher_step(ref_matrix, term.f, tab, 0.05, u.values)
    np.testing.assert_allclose(stepped.values, expected, atol=1e-12, rtol=0)


@pytest.mark.parametrize("name", BUILTIN_SCHEMES)
def test_dense_step_matches_butcher_oracle(name):
    grid = GridSpec(dim=2, n_per_axis=4)
    term = cubic()
    ref_matrix = reference_laplacian(grid.shape, grid.h, 0.02)
    op = dense_operator(ref_matrix, grid=grid, diffusion=0.02)
    rng = np.random.default_rng(33)
    u = Field.random_uniform(grid, -0.5, 0.5, rng)
    tab = builtin(name)
    stepped = Stepper(op, term, tab, 0.04).step(u)
    expected = butcher_step(ref_matrix, term.f, tab, 0.04, u.values)
    np.testing.assert_allclose(stepped.values, expected, atol=1e-12, rtol=0)


def test_constant_field_follows_scalar_ode():
    # constants are in the kernel of the periodic stencil, so the PDE
    # collapses to u' = u - u^3 with closed form
    # u(t) = u0 / sqrt(u0^2 + (1 - u0^2) e^{-2t})
    grid = GridSpec(dim=2, n_per_axis=4)
    op = build_periodic_laplacian(grid, 0.1)
    term = cubic()
    stepper = Stepper(op, term, builtin("IFRK4"), 0.02)
    u = Field.constant(grid, 0.3)
    final, series = integrate(stepper, u, 1.0)
    u0 = 0.3
    exact = u0 / math.sqrt(u0**2 + (1 - u0**2) * math.exp(-2.0))
    np.testing.assert_allclose(final.values, exact, atol=1e-9, rtol=0)
    assert series.status == "completed"
    assert series.records[-1].t == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["IF1", "IFRK2", "IFRK3", "IFRK4"])
@pytest.mark.parametrize("term_factory", [cubic, lambda: flory_huggins(0.8, 1.6)])
def test_one_step_box_property_at_max_tau(name, term_factory):
    term = term_factory()
    grid = GridSpec(dim=2, n_per_axis=16)
    op = build_periodic_laplacian(grid, 0.01)
    tab = builtin(name)
    tau = max_timestep(tab, term)
    stepper = Stepper(op, term, tab, tau)
    rng = np.random.default_rng(77)
    for _ in range(5):
        u = Field.random_uniform(grid, -term.rho, term.rho, rng)
        v = stepper.step(u)
        assert not v.blown_up
        assert np.max(np.abs(v.values)) <= term.rho * (1.0 + 1e-12)


def test_blow_up_is_flagged_not_raised():
    grid = GridSpec(dim=2, n_per_axis=32)
    op = build_periodic_laplacian(grid, 0.01)
    term = flory_huggins(0.8, 1.6)
    tab = builtin("IFRK3_SHUOSHER")
    rng = np.random.default_rng(5)
    u0 = Field.random_uniform(grid, -0.8, 0.8, rng)
    stepper = Stepper(op, term, tab, 0.5)
    final, series = integrate(stepper, u0, 5.0)
    assert final.blown_up
    assert series.status == "blow_up"
    last = series.records[-1]
    assert last.sup_norm == math.inf
    assert math.isnan(last.energy)
    assert not last.mbp_ok
    assert series.records[-1].t < 5.0 + 1e-12


def test_blown_up_input_passes_through():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u = Field(values=np.full(8, np.nan), grid=grid)
    v = stepper.step(u)
    assert v.blown_up


def test_enforcement_refuses_oversized_tau():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    term = cubic()
    tab = builtin("IFRK4")
    limit = max_timestep(tab, term)
    with pytest.raises(StepSizeError):
        Stepper(op, term, tab, limit * 1.01, enforce_mbp_bound=True)
    Stepper(op, term, tab, limit, enforce_mbp_bound=True)  # boundary is allowed


def test_enforcement_refuses_non_admissible_scheme():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    with pytest.raises(StepSizeError):
        Stepper(op, cubic(), builtin("IFRK3_SHUOSHER"), 0.01, enforce_mbp_bound=True)


def test_enforcement_refuses_state_outside_box():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    term = cubic()
    stepper = Stepper(op, term, builtin("IF1"), 0.1, enforce_mbp_bound=True)
    u = Field.constant(grid, 1.5)
    with pytest.raises(StepSizeError):
        stepper.step(u)


def test_invalid_tau_rejected():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    for bad in (0.0, -0.1, math.inf, math.nan):
        with pytest.raises(StepSizeError):
            Stepper(op, cubic(), builtin("IF1"), bad)


def test_partial_final_step_matches_oracle():
    grid = GridSpec(dim=1, n_per_axis=8)
    term = cubic()
    ref_matrix = reference_laplacian(grid.shape, grid.h, 0.05)
    op = build_periodic_laplacian(grid, 0.05)
    rng = np.random.default_rng(8)
    u0 = Field.random_uniform(grid, -0.5, 0.5, rng)
    tab = builtin("IFRK2")
    stepper = Stepper(op, term, tab, 0.4)
    final, series = integrate(stepper, u0, 1.0)
    expected = u0.values
    for tau in (0.4, 0.4, 0.2):
        expected = butcher_step(ref_matrix, term.f, tab, tau, expected)
    np.testing.assert_allclose(final.values, expected, atol=1e-12, rtol=0)
    assert [r.t for r in series.records] == pytest.approx([0.0, 0.4, 0.8, 1.0])


def test_record_every_and_final_always_sampled():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u0 = Field.constant(grid, 0.2)
    _, series = integrate(stepper, u0, 1.0, record_every=3)
    ts = [r.t for r in series.records]
    assert ts == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.0])


def test_integrate_is_deterministic():
    grid = GridSpec(dim=2, n_per_axis=16)
    op = build_periodic_laplacian(grid, 0.01)
    term = flory_huggins(0.8, 1.6)
    tab = builtin("IFRK4")

    def run():
        rng = np.random.default_rng(123)
        u0 = Field.random_uniform(grid, -0.8, 0.8, rng)
        stepper = Stepper(op, term, tab, 0.05)
        return integrate(stepper, u0, 1.0, record_every=2)

    final_a, series_a = run()
    final_b, series_b = run()
    assert np.array_equal(final_a.values, final_b.values)
    assert series_a.csv_bytes() == series_b.csv_bytes()


def test_t_end_zero_returns_copy_and_empty_series():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u0 = Field.constant(grid, 0.2)
    final, series = integrate(stepper, u0, 0.0)
    assert np.array_equal(final.values, u0.values)
    assert final is not u0
    assert len(series) == 0
    assert series.status == "completed"


def test_non_finite_initial_state_short_circuits():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u0 = Field(values=np.array([0.0, np.nan] + [0.0] * 6), grid=grid)
    final, series = integrate(stepper, u0, 1.0)
    assert series.status == "blow_up"
    assert len(series) == 1
    assert series.records[0].sup_norm == math.inf


def test_grid_mismatch_raises():
    op = build_periodic_laplacian(GridSpec(dim=1, n_per_axis=8), 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u = Field.constant(GridSpec(dim=1, n_per_axis=16), 0.1)
    with pytest.raises(GridMismatchError):
        stepper.step(u)


def test_negative_t_end_and_bad_record_every():
    grid = GridSpec(dim=1, n_per_axis=8)
    op = build_periodic_laplacian(grid, 0.01)
    stepper = Stepper(op, cubic(), builtin("IF1"), 0.1)
    u0 = Field.constant(grid, 0.2)
    with pytest.raises(ValueError):
        integrate(stepper, u0, -1.0)
    with pytest.raises(ValueError):
        integrate(stepper, u0, 1.0, record_every=0)
