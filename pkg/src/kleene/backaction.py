"""Measurement back-action in two coupled oscillators.

A heavy object oscillator (mass M) is probed by a light oscillator (mass m)
through a coupling spring::

    M x'' = -k_obj x   - k_c (x - y)
    m y'' = -k_probe y - k_c (y - x)

The disturbance is the relative change of the object's own energy
E_obj = M v^2/2 + k_obj x^2/2 over the run.  In a scan the probe is a
mass-scaled copy of the base probe: mass, stiffness and coupling all shrink
by the ratio mu = m/M, so the probe keeps its natural frequency while its
grip on the object weakens.  Classically the disturbance then falls off
linearly in mu.

The quantized variant is a stylized floor, not quantum dynamics: whenever the
probe gained energy at all it must have taken at least one quantum
eps = h * f_probe, so the disturbance is at least eps / E_obj(0).

Integration uses the fourth-order symplectic composition of velocity Verlet
(Yoshida triple jump) at a fixed step.
"""

from __future__ import annotations

import io
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

DEFAULT_MUS = (1.0, 1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_PERIODS = 50
STEPS_PER_PERIOD = 1000

_CBRT2 = 2.0 ** (1.0 / 3.0)
_YOSHIDA = (1.0 / (2.0 - _CBRT2), -_CBRT2 / (2.0 - _CBRT2), 1.0 / (2.0 - _CBRT2))


class SimulationError(RuntimeError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"{message} at step {step}")
        self.step = step


@dataclass(frozen=True)
class OscillatorSystem:
    M: float = 1.0
    m: float = 1.0
    k_obj: float = 1.0
    k_probe: float = 1.0
    k_c: float = 0.05
    x_obj: float = 1.0
    v_obj: float = 0.0
    x_probe: float = 0.0
    v_probe: float = 0.0
    t: float = 0.0
    dt: float | None = None  # None: shortest normal-mode period / STEPS_PER_PERIOD
    h: float = 0.0  # action quantum per unit probe frequency; 0 is classical

    def __post_init__(self):
        if not (self.M > 0 and self.m > 0 and self.k_obj > 0 and self.k_probe > 0):
            raise ValueError("masses and spring constants must be positive")
        if self.k_c < 0:
            raise ValueError("coupling must be non-negative")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.h < 0:
            raise ValueError("h must be non-negative")

    @property
    def probe_frequency(self) -> float:
        return math.sqrt(self.k_probe / self.m) / (2 * math.pi)

    @property
    def action_quantum(self) -> float:
        """eps = h * f_probe."""
        return self.h * self.probe_frequency

    def normal_frequencies(self) -> np.ndarray:
        k = np.array([[self.k_obj + self.k_c, -self.k_c], [-self.k_c, self.k_probe + self.k_c]])
        minv = np.diag([1.0 / self.M, 1.0 / self.m])
        return np.sqrt(np.sort(np.linalg.eigvals(minv @ k).real))

    def shortest_period(self) -> float:
        return 2 * math.pi / self.normal_frequencies()[-1]

    def object_period(self) -> float:
        return 2 * math.pi * math.sqrt(self.M / self.k_obj)

    def step_size(self) -> float:
        return self.dt if self.dt is not None else self.shortest_period() / STEPS_PER_PERIOD

    def energies(self, x, v, y, w):
        """(object, probe, coupling) energies; works on scalars and arrays."""
        e_obj = 0.5 * self.M * v * v + 0.5 * self.k_obj * x * x
        e_probe = 0.5 * self.m * w * w + 0.5 * self.k_probe * y * y
        e_c = 0.5 * self.k_c * (x - y) ** 2
        return e_obj, e_probe, e_c


@dataclass
class Trajectory:
    t: np.ndarray
    x_obj: np.ndarray
    v_obj: np.ndarray
    x_probe: np.ndarray
    v_probe: np.ndarray
    e_obj: np.ndarray
    e_probe: np.ndarray
    e_coupling: np.ndarray
    steps: int

    @property
    def e_total(self) -> np.ndarray:
        return self.e_obj + self.e_probe + self.e_coupling

    def energy_drift(self) -> float:
        """|E(T) - E(0)| / E(0) for the whole system."""
        e = self.e_total
        return abs(e[-1] - e[0]) / e[0] if e[0] else abs(e[-1])


def simulate(sys: OscillatorSystem, T: float, samples: int = 1000) -> Trajectory:
    """Integrate for duration T (rounded to whole steps) and sample the state."""
    if not T > 0:
        raise ValueError("T must be positive")
    dt = sys.step_size()
    n = max(1, int(round(T / dt)))
    every = max(1, n // samples)
    M, m, ko, kp, kc = sys.M, sys.m, sys.k_obj, sys.k_probe, sys.k_c
    x, v, y, w = sys.x_obj, sys.v_obj, sys.x_probe, sys.v_probe
    subs = [c * dt for c in _YOSHIDA]
    rows = [(0, x, v, y, w)]
    for k in range(1, n + 1):
        for hstep in subs:
            half = 0.5 * hstep
            f = kc * (x - y)
            v += half * (-ko * x - f) / M
            w += half * (-kp * y + f) / m
            x += hstep * v
            y += hstep * w
            f = kc * (x - y)
            v += half * (-ko * x - f) / M
            w += half * (-kp * y + f) / m
        if k % every == 0 or k == n:
            if not (math.isfinite(x) and math.isfinite(v) and math.isfinite(y) and math.isfinite(w)):
                raise SimulationError("non-finite state", k)
            rows.append((k, x, v, y, w))
    a = np.array(rows, dtype=float)
    xs, vs, ys, ws = a[:, 1], a[:, 2], a[:, 3], a[:, 4]
    e_obj, e_probe, e_c = sys.energies(xs, vs, ys, ws)
    return Trajectory(sys.t + a[:, 0] * dt, xs, vs, ys, ws, e_obj, e_probe, e_c, n)


@dataclass(frozen=True)
class ScanRow:
    mu: float
    disturbance: float
    readout: float
    quantized_disturbance: float


def scaled_probe(base: OscillatorSystem, mu: float) -> OscillatorSystem:
    """Probe of mass mu*M with stiffness and coupling scaled by mu as well."""
    return replace(base, m=mu * base.M, k_probe=mu * base.k_probe, k_c=mu * base.k_c)


def _scan_row(base: OscillatorSystem, mu: float, T: float, quantized: bool) -> ScanRow:
    sys = scaled_probe(base, mu)
    tr = simulate(sys, T, samples=1)
    e0 = float(tr.e_obj[0])
    if e0 <= 0:
        raise ValueError("object must start with positive energy")
    disturbance = abs(float(tr.e_obj[-1]) - e0) / e0
    readout = float(tr.e_probe[-1] - tr.e_probe[0])
    dq = disturbance
    if quantized and readout > 0:
        dq = max(disturbance, sys.action_quantum / e0)
    return ScanRow(mu, disturbance, readout, dq)


def _check_mus(mus):
    mus = list(mus)
    if not mus or any(not mu > 0 for mu in mus):
        raise ValueError("mass ratios must be positive")
    if any(a <= b for a, b in zip(mus, mus[1:])):
        raise ValueError("mass ratios must be sorted in descending order")
    return mus


def default_duration(base: OscillatorSystem) -> float:
    return DEFAULT_PERIODS * base.object_period()


def disturbance_scan(base: OscillatorSystem, mus=DEFAULT_MUS, T: float | None = None) -> list[ScanRow]:
    """Classical disturbance D and probe readout for each mass ratio."""
    if base.h != 0:
        raise ValueError("disturbance_scan is classical (h = 0); use quantized_scan")
    T = T or default_duration(base)
    return [_scan_row(base, mu, T, quantized=False) for mu in _check_mus(mus)]


def quantized_scan(base: OscillatorSystem, mus=DEFAULT_MUS, T: float | None = None) -> list[ScanRow]:
    """As disturbance_scan, plus D_q = max(D, eps/E_obj(0)) when the probe gained energy."""
    if not base.h > 0:
        raise ValueError("quantized_scan needs h > 0; use disturbance_scan for h = 0")
    T = T or default_duration(base)
    return [_scan_row(base, mu, T, quantized=True) for mu in _check_mus(mus)]


def scan_csv(rows: list[ScanRow], base: OscillatorSystem, T: float) -> str:
    buf = io.StringIO()
    for key, value in asdict(base).items():
        buf.write(f"# {key} = {value!r}\n")
    buf.write(f"# T = {T!r}\n")
    buf.write("mu,disturbance,readout,quantized_disturbance\n")
    for r in rows:
        buf.write(f"{r.mu!r},{r.disturbance!r},{r.readout!r},{r.quantized_disturbance!r}\n")
    return buf.getvalue()
