import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kleene.backaction import (
    DEFAULT_MUS,
    OscillatorSystem,
    SimulationError,
    default_duration,
    disturbance_scan,
    quantized_scan,
    scaled_probe,
    scan_csv,
    simulate,
)


def exact_state(sys: OscillatorSystem, t: float):
    """Closed-form solution through the mass-weighted normal modes."""
    masses = np.array([sys.M, sys.m])
    K = np.array([[sys.k_obj + sys.k_c, -sys.k_c], [-sys.k_c, sys.k_probe + sys.k_c]])
    w = 1 / np.sqrt(masses)
    lam, V = np.linalg.eigh(K * np.outer(w, w))
    omega = np.sqrt(lam)
    q0 = V.T @ (np.sqrt(masses) * np.array([sys.x_obj, sys.x_probe]))
    p0 = V.T @ (np.sqrt(masses) * np.array([sys.v_obj, sys.v_probe]))
    q = q0 * np.cos(omega * t) + p0 / omega * np.sin(omega * t)
    p = -q0 * omega * np.sin(omega * t) + p0 * np.cos(omega * t)
    x = w * (V @ q)
    v = w * (V @ p)
    return x[0], v[0], x[1], v[1]


def exact_disturbance(sys, T):
    x, v, _, _ = exact_state(sys, T)
    e0 = 0.5 * sys.M * sys.v_obj**2 + 0.5 * sys.k_obj * sys.x_obj**2
    return abs(0.5 * sys.M * v * v + 0.5 * sys.k_obj * x * x - e0) / e0


def test_normal_frequencies_symmetric_case():
    sys = OscillatorSystem(k_c=0.05)
    assert np.allclose(sys.normal_frequencies(), [1.0, math.sqrt(1.1)], rtol=1e-12)


def test_uncoupled_object_is_a_cosine():
    sys = OscillatorSystem(k_c=0.0)
    tr = simulate(sys, 20 * math.pi)
    assert np.allclose(tr.x_obj, np.cos(tr.t), atol=1e-7)
    assert np.allclose(tr.x_probe, 0.0)


def test_beats_match_closed_form():
    sys = OscillatorSystem()
    T = 100.0
    tr = simulate(sys, T)
    x, v, y, w = exact_state(sys, tr.t[-1])
    assert tr.x_obj[-1] == pytest.approx(x, abs=1e-8)
    assert tr.x_probe[-1] == pytest.approx(y, abs=1e-8)
    assert tr.v_probe[-1] == pytest.approx(w, abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(
    st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.0, 0.5),
    st.floats(-2, 2), st.floats(-2, 2),
)
def test_random_systems_match_closed_form(m, kp, ko, kc, y0, w0):
    sys = OscillatorSystem(m=m, k_probe=kp, k_obj=ko, k_c=kc, x_probe=y0, v_probe=w0)
    tr = simulate(sys, 10.0, samples=1)
    exact = exact_state(sys, tr.t[-1])
    got = (tr.x_obj[-1], tr.v_obj[-1], tr.x_probe[-1], tr.v_probe[-1])
    assert np.allclose(got, exact, atol=1e-7)


def test_energy_drift_over_1e5_steps():
    sys = OscillatorSystem()
    tr = simulate(sys, 1e5 * sys.step_size())
    assert tr.steps == 10**5
    assert tr.energy_drift() < 1e-6


def test_scan_matches_closed_form():
    base = OscillatorSystem()
    T = default_duration(base)
    for row in disturbance_scan(base):
        sys = scaled_probe(base, row.mu)
        # the integrator rounds T to whole steps
        n = round(T / sys.step_size())
        assert row.disturbance == pytest.approx(exact_disturbance(sys, n * sys.step_size()), rel=1e-6, abs=1e-10)


def test_default_scan_decreases():
    start = time.perf_counter()
    rows = disturbance_scan(OscillatorSystem())
    assert time.perf_counter() - start < 10
    ds = [r.disturbance for r in rows]
    assert [r.mu for r in rows] == list(DEFAULT_MUS)
    assert all(a > b for a, b in zip(ds, ds[1:]))
    assert ds[-1] / ds[0] < 1e-2


def test_disturbance_roughly_linear_in_mu():
    rows = disturbance_scan(OscillatorSystem(), mus=[1e-2, 1e-3, 1e-4])
    ratios = [a.disturbance / b.disturbance for a, b in zip(rows, rows[1:])]
    assert all(9 < r < 11 for r in ratios)


def test_quantized_floor():
    base = OscillatorSystem(h=1.0)
    rows = quantized_scan(base)
    e0 = 0.5 * base.k_obj * base.x_obj**2
    for r in rows:
        eps = scaled_probe(base, r.mu).action_quantum
        assert eps == pytest.approx(1 / (2 * math.pi))
        if r.readout > 0:
            assert r.quantized_disturbance >= eps / e0
        assert r.quantized_disturbance >= r.disturbance
    # the floor binds once the classical disturbance drops below it
    assert rows[-1].quantized_disturbance == pytest.approx(1 / (2 * math.pi) / e0)


def test_scan_modes_are_exclusive():
    with pytest.raises(ValueError):
        disturbance_scan(OscillatorSystem(h=1.0))
    with pytest.raises(ValueError):
        quantized_scan(OscillatorSystem())


@pytest.mark.parametrize("mus", [[], [0.1, 1.0], [1.0, 0.0], [1.0, 1.0]])
def test_bad_mass_ratios(mus):
    with pytest.raises(ValueError):
        disturbance_scan(OscillatorSystem(), mus=mus)


@pytest.mark.parametrize("kw", [{"M": 0}, {"m": -1}, {"k_c": -0.1}, {"dt": 0}, {"h": -1}])
def test_bad_parameters(kw):
    with pytest.raises(ValueError):
        OscillatorSystem(**kw)


def test_unstable_step_is_reported():
    with pytest.raises(SimulationError):
        simulate(OscillatorSystem(dt=10.0), 1e5)


def test_csv_layout():
    base = OscillatorSystem()
    T = default_duration(base)
    text = scan_csv(disturbance_scan(base, mus=[1.0, 0.5]), base, T)
    lines = text.splitlines()
    comments = [line for line in lines if line.startswith("#")]
    body = [line for line in lines if not line.startswith("#")]
    assert "# k_c = 0.05" in comments
    assert body[0] == "mu,disturbance,readout,quantized_disturbance"
    assert len(body) == 3
    assert [float(v) for v in body[1].split(",")][0] == 1.0


def test_scan_deterministic():
    assert disturbance_scan(OscillatorSystem(), mus=[1.0, 0.1]) == disturbance_scan(OscillatorSystem(), mus=[1.0, 0.1])


def test_no_coupling_no_disturbance():
    rows = disturbance_scan(OscillatorSystem(k_c=0.0), mus=[1.0, 1e-2, 1e-4])
    # the object's own energy is conserved to round-off; the probe never moves
    assert all(r.disturbance < 1e-12 and r.readout == 0.0 for r in rows)
