import math

import numpy as np
import pytest

import cqad


def test_reference_system_and_gamma_prime():
    p = cqad.reference_system("max", gamma=12.2e-3)
    assert len(p.modes) == 7
    assert p.mode(6).g == pytest.approx(1.67)
    assert cqad.gamma_prime(p, 6) * 1e3 == pytest.approx(13.7, rel=0.05)
    assert cqad.SystemParams.from_json(p.to_json()).to_json() == p.to_json()


def test_invalid_argument_maps_to_value_error():
    p = cqad.reference_system()
    p.modes[0].kappa = 0.0
    with pytest.raises(ValueError, match="non-positive rate"):
        cqad.validate(p)
    with pytest.raises(cqad.InvalidArgument):
        cqad.chi_dispersive(0.5, 0.2, 171.0)


def test_engine_matches_closed_form():
    p = cqad.reference_system("max", gamma=12.2e-3)
    t = np.linspace(0.0, 1.0, 21)
    pe, stats = cqad.simulate_resonant_pe(p, 6, t)
    ref = cqad.pe_exact(t, 1.67, cqad.gamma_prime(p, 6), 0.78)
    assert np.max(np.abs(pe - ref)) < 1e-6
    assert stats["trace_drift"] < 1e-8


def test_fit_resonant_recovers_coupling():
    t = np.arange(0.0, 3.0 + 1e-12, 0.005)
    rng = np.random.default_rng(5)
    y = cqad.pe_exact(t, 1.67, 0.0137, 0.78) + rng.normal(0.0, 0.01, t.size)
    r = cqad.fit_resonant(t, y, 0.0137)
    assert r["params"]["g"] == pytest.approx(1.67, rel=0.02)
    assert r["params"]["kappa"] == pytest.approx(0.78, rel=0.1)


def test_fit_exponential():
    t = np.linspace(0.0, 75.0, 301)
    r = cqad.fit_exponential(t, 0.9 * np.exp(-t / 15.0) + 0.05)
    assert r["params"]["T1"] == pytest.approx(15.0, rel=1e-6)


def test_tof_and_echo():
    geo = cqad.geometry_from_timing(864.0, 4557.6, 2.2, 3.0, 27.0)
    assert geo.v_e == pytest.approx(3937.8, rel=1e-4)
    assert geo.L_c == pytest.approx(53.2, rel=0.005)
    m = cqad.echo_model_for(cqad.geometry_from_timing(864.0, 4557.6, 2.2, 3.5, 27.0))
    t, a = cqad.simulate_echo(m, 12.0)
    assert abs(cqad.echo_period(t, a) - m.round_trip_ns()) <= m.sample_dt
    present, dip = cqad.detect_subecho(t, a, m, 12.0)
    assert present and dip >= 0.05


def test_reset_and_crossings():
    rows = cqad.sweep_reset(ratios=[0.01, 1.0])
    assert rows[0][1][0] >= 10.0 / (2.0 * math.pi * 2.5)
    assert rows[1][1][0] < rows[0][1][0]
    xs = cqad.impact_crossings([0.01, 0.05, 0.10])
    assert xs == pytest.approx([3.39, 7.59, 10.73], rel=0.01)
    assert cqad.reset_time(np.array([0.0, 1.0, 2.0]), np.array([0.1, 0.2, 0.3]), 0.99) is None


def test_acceptance_subset():
    res = cqad.run_acceptance(only=[1, 9])
    assert [r["id"] for r in res] == [1, 9]
    assert all(r["passed"] for r in res)
