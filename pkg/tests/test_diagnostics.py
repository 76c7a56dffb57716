import io
import math

import numpy as np
import pytest

from ifrk import (
    Field,
    GridSpec,
    Record,
    TimeSeries,
    cubic,
    custom_term,
    discrete_energy,
    mbp_check,
    sup_norm,
)


def gradient_only_term():
    return custom_term(
        f=lambda x: 0.0 * x,
        fprime=lambda x: 0.0 * x,
        potential=lambda x: 0.0 * x,
        rho=10.0,
        name="zero",
    )


def test_sup_norm_hand_values():
    grid = GridSpec(dim=1, n_per_axis=4)
    assert sup_norm(Field(values=np.array([0.1, -0.7, 0.3, 0.0]), grid=grid)) == 0.7
    assert sup_norm(np.array([1.0, -2.0])) == 2.0
    assert sup_norm(np.array([1.0, np.nan])) == math.inf
    assert sup_norm(np.array([1.0, np.inf])) == math.inf
    assert sup_norm(np.array([])) == 0.0


def test_mbp_check_reports():
    ok = mbp_check(np.array([0.5, -0.9]), rho=1.0)
    assert ok and ok.overshoot == 0.0 and ok.sup == 0.9

    bad = mbp_check(np.array([0.5, -1.5, 0.2]), rho=1.0)
    assert not bad.ok
    assert bad.overshoot == pytest.approx(0.5)
    assert bad.worst_index == 1

    # default tolerance is relative: 1e-12 * rho passes, 1e-11 fails
    assert mbp_check(np.array([1.0 + 1e-13]), rho=1.0).ok
    assert not mbp_check(np.array([1.0 + 1e-11]), rho=1.0).ok

    nan = mbp_check(np.array([0.1, np.nan]), rho=1.0)
    assert not nan.ok and nan.sup == math.inf and nan.worst_index == 1


def test_energy_of_single_mode_matches_analytic_value():
    # u = a sin(2 pi x): continuum gradient energy is eps2 * a^2 * pi^2;
    # the forward-difference sum evaluates exactly to
    # eps2 * a^2 * m^2 * sin^2(pi / m), within 1% for m >= 64 and
    # converging at second order
    eps2, a = 0.3, 0.7
    term = gradient_only_term()
    errors = []
    for m in (64, 256):
        grid = GridSpec(dim=1, n_per_axis=m)
        u = Field.from_function(grid, lambda x: a * np.sin(2 * np.pi * x))
        energy = discrete_energy(u, eps2, term)
        exact_discrete = eps2 * a**2 * m**2 * math.sin(math.pi / m) ** 2
        assert energy == pytest.approx(exact_discrete, rel=1e-12)
        analytic = eps2 * a**2 * math.pi**2
        assert energy == pytest.approx(analytic, rel=0.01)
        errors.append(abs(energy - analytic))
    assert errors[1] < errors[0] / 10.0


def test_energy_constant_field_is_potential_only():
    term = cubic()
    grid = GridSpec(dim=2, n_per_axis=8)
    u = Field.constant(grid, 0.5)
    # domain volume is 1, gradient vanishes: energy = F(0.5) = 0.140625
    assert discrete_energy(u, 1.0, term) == pytest.approx(0.140625, rel=1e-14)


def test_energy_translation_invariance():
    term = cubic()
    grid = GridSpec(dim=2, n_per_axis=16)
    rng = np.random.default_rng(4)
    u = Field.random_uniform(grid, -0.9, 0.9, rng)
    rolled = Field(values=np.roll(u.lattice(), (3, 5), axis=(0, 1)).ravel(), grid=grid)
    assert discrete_energy(rolled, 0.2, term) == pytest.approx(
        discrete_energy(u, 0.2, term), rel=1e-12
    )


def test_energy_nan_outside_domain():
    from ifrk import flory_huggins

    term = flory_huggins(0.8, 1.6)
    grid = GridSpec(dim=1, n_per_axis=4)
    u = Field(values=np.array([0.0, 0.5, 1.5, 0.0]), grid=grid)
    assert math.isnan(discrete_energy(u, 0.1, term))


def make_series():
    return TimeSeries(
        records=(
            Record(t=0.0, sup_norm=0.5, energy=1.25, mbp_ok=True),
            Record(t=0.1, sup_norm=0.75, energy=1.0, mbp_ok=True),
            Record(t=0.2, sup_norm=1.5, energy=math.inf, mbp_ok=False),
            Record(t=0.3, sup_norm=math.inf, energy=math.nan, mbp_ok=False),
        ),
        status="blow_up",
    )


def test_csv_round_trip_preserves_records_exactly():
    series = make_series()
    buf = io.StringIO(series.csv_bytes().decode())
    back = TimeSeries.from_csv(buf, status=series.status)
    assert len(back) == len(series)
    for a, b in zip(series.records, back.records):
        assert a.t == b.t
        assert a.sup_norm == b.sup_norm or (math.isnan(a.sup_norm) and math.isnan(b.sup_norm))
        assert a.energy == b.energy or (math.isnan(a.energy) and math.isnan(b.energy))
        assert a.mbp_ok == b.mbp_ok
    assert back.status == "blow_up"


def test_csv_header_and_formatting():
    text = make_series().csv_bytes().decode()
    lines = text.splitlines()
    assert lines[0] == "t,sup_norm,energy,mbp_ok"
    assert lines[1] == "0,0.5,1.25,true"
    assert lines[-1].endswith(",false")
    assert "inf" in lines[3]
    with pytest.raises(ValueError):
        TimeSeries.from_csv(io.StringIO("wrong,header\n"))


def test_csv_file_round_trip(tmp_path):
    series = make_series()
    path = tmp_path / "series.csv"
    series.to_csv(path)
    back = TimeSeries.from_csv(path)
    assert back.records[1] == series.records[1]


def test_first_violation_time_and_summary():
    series = make_series()
    assert series.first_violation_time() == pytest.approx(0.2)
    summary = series.summary()
    assert summary["status"] == "blow_up"
    assert summary["records"] == 4
    assert summary["first_violation_time"] == pytest.approx(0.2)
    assert summary["sup_max"] == math.inf
    clean = TimeSeries(records=series.records[:2])
    assert clean.first_violation_time() is None
    assert clean.summary()["first_violation_time"] is None


def test_empty_series_summary():
    empty = TimeSeries()
    assert len(empty) == 0
    assert empty.final is None
    assert empty.summary() == {
        "status": "completed",
        "records": 0,
        "first_violation_time": None,
    }


def test_column_extraction():
    series = make_series()
    np.testing.assert_allclose(series.column("t"), [0.0, 0.1, 0.2, 0.3])
    assert series.column("sup_norm")[2] == 1.5
