"""Continuous-time consensus ``dx/dt = -L x`` integrated with classical RK4."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .graph import DiGraph, in_degrees, laplacian

# dt * spectral_radius(L) must stay below this; spectral radius <= 2 * max in-degree
STEP_BOUND = 0.5


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class SimTrace:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n)
    disagreement: np.ndarray
    consensus_value: float | None = None

    def write_csv(self, path_or_file) -> None:
        n = self.states.shape[1]
        own = isinstance(path_or_file, str)
        fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
        try:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"x_{i}" for i in range(1, n + 1)] + ["disagreement"])
            for t, x, d in zip(self.times, self.states, self.disagreement):
                w.writerow([repr(float(t))] + [repr(float(v)) for v in x] + [repr(float(d))])
        finally:
            if own:
                fh.close()


def max_stable_dt(g: DiGraph) -> float:
    return STEP_BOUND / max(1, 2 * max(in_degrees(g)))


def _rk4_step(M: np.ndarray, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = -M @ y
    k2 = -M @ (y + 0.5 * dt * k1)
    k3 = -M @ (y + 0.5 * dt * k2)
    k4 = -M @ (y + dt * k3)
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def simulate(g: DiGraph, x0, dt: float, t_end: float, consensus_tol: float = 1e-6) -> SimTrace:
    """Integrate the consensus dynamics from ``x0`` on a fixed grid of step ``dt``.

    Disagreement (max - min of the state) is tracked through the offsets
    ``x - x_1``, which obey their own linear system.  Integrating them
    directly keeps full relative precision long after the raw states have
    converged to within rounding of each other.
    """
    if g.n < 2:
        raise SimulationError("consensus needs at least two agents")
    if dt <= 0 or t_end <= 0:
        raise SimulationError(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    if dt > max_stable_dt(g) * (1 + 1e-12):
        raise SimulationError(f"dt={dt} exceeds the RK4 step bound {max_stable_dt(g):.4g} for this graph")
    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (g.n,):
        raise SimulationError(f"initial state must have length {g.n}")

    L = laplacian(g).to_numpy()
    # offsets e = x - x_1 * 1 evolve under L - 1 * (row 1 of L)
    M = L - np.outer(np.ones(g.n), L[0])
    e = x - x[0]

    steps = int(round(t_end / dt))
    times = np.arange(steps + 1) * dt
    states = np.empty((steps + 1, g.n))
    spread = np.empty(steps + 1)
    states[0] = x
    spread[0] = e.max() - e.min()
    for k in range(1, steps + 1):
        x = _rk4_step(L, x, dt)
        e = _rk4_step(M, e, dt)
        states[k] = x
        spread[k] = e.max() - e.min()

    value = float(states[-1].mean()) if spread[-1] < consensus_tol else None
    return SimTrace(times, states, spread, value)


def estimate_rate(trace: SimTrace, window: float = 0.25) -> float:
    """Negated least-squares slope of log(disagreement) over the trailing ``window`` of samples."""
    if not 0 < window <= 1:
        raise ValueError("window must be a fraction in (0, 1]")
    k = max(2, int(np.ceil(window * len(trace.times))))
    t = trace.times[-k:]
    d = trace.disagreement[-k:]
    if np.any(d <= np.finfo(float).tiny):
        raise SimulationError("disagreement underflowed inside the fit window; "
                              "use a wider spread in x0 or a shorter t_end")
    slope = np.polyfit(t, np.log(d), 1)[0]
    return float(-slope)
