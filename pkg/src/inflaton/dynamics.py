"""Method-of-lines evolution of the damped radial wave equation

    phi_tt + 3 H phi_t - e^{-2Ht} (phi_rr + (2/r) phi_r) + f(phi) = 0

integrated as u = r * phi, which turns the radial Laplacian into a plain
second derivative ((r phi)_rr / r) and removes the origin singularity:

    u_tt = e^{-2Ht} u_rr - 3 H u_t - r f(u / r),  u(0) = u(r_max) = 0.

Spatial derivatives are centered differences of selectable order (2, 4, 6);
the substitution u(-r) = -u(r) supplies exact ghost values at the origin.
The outer Dirichlet row is only valid while the support stays away from
r_max, which the support monitor enforces (abort, not absorbing layers --
absorbing boundaries would contaminate the virial diagnostics).

Time stepping is classical RK4. The problem is dissipative for H > 0, so
no symplectic structure is at stake; H = 0 energy conservation is an
accuracy statement, checked by the tests rather than built into the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .grid import RadialGrid
from .potentials import PotentialSpec, eval_f

__all__ = [
    "CflViolation",
    "SupportOverflow",
    "NonFiniteField",
    "SolverConfig",
    "FieldState",
    "SupportMonitor",
    "bump_profile",
    "gaussian_profile",
    "initial_state",
    "support_radius",
    "cfl_dt",
    "rhs",
    "step",
    "evolve",
]

SUPPORT_THRESHOLD = 1e-13


class CflViolation(ValueError):
    """Requested time step exceeds the CFL bound; the run is refused."""


class SupportOverflow(RuntimeError):
    """Field support reached the outer boundary; results would be corrupted."""


class NonFiniteField(RuntimeError):
    """NaN/Inf appeared in the evolved field."""


@dataclass
class SolverConfig:
    """Evolution parameters.

    The wave speed e^{-Ht} never exceeds 1 for H >= 0, so the single bound
    dt <= cfl * dr covers every Hubble value.
    """

    t_end: float
    hubble: float = 0.0
    cfl: float = 0.5
    output_every: int = 1
    space_order: int = 2
    dt: float | None = None

    def __post_init__(self) -> None:
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.hubble < 0:
            raise ValueError("hubble must be nonnegative")
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if self.output_every < 1:
            raise ValueError("output_every must be >= 1")
        if self.space_order not in (2, 4, 6):
            raise ValueError("space_order must be one of 2, 4, 6")


def cfl_dt(grid: RadialGrid, cfg: SolverConfig) -> float:
    """Largest admissible time step, cfl * dr."""
    return cfg.cfl * grid.dr


# ---------------------------------------------------------------------------
# stencils (u odd about r=0: ghost u[-k] = -u[k])


def _second_derivative(u: np.ndarray, dr: float, order: int) -> np.ndarray:
    out = np.zeros_like(u)
    h2 = dr * dr
    if order == 2:
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h2
        return out
    if order == 4:
        out[2:-2] = (-u[4:] + 16.0 * u[3:-1] - 30.0 * u[2:-2]
                     + 16.0 * u[1:-3] - u[:-4]) / (12.0 * h2)
        out[1] = (-u[3] + 16.0 * u[2] - 29.0 * u[1] + 16.0 * u[0]) / (12.0 * h2)
        out[-2] = (u[-1] - 2.0 * u[-2] + u[-3]) / h2
        return out
    # order 6
    out[3:-3] = (2.0 * u[:-6] - 27.0 * u[1:-5] + 270.0 * u[2:-4] - 490.0 * u[3:-3]
                 + 270.0 * u[4:-2] - 27.0 * u[5:-1] + 2.0 * u[6:]) / (180.0 * h2)
    out[1] = (-2.0 * u[2] + 27.0 * u[1] + 270.0 * u[0] - 490.0 * u[1]
              + 270.0 * u[2] - 27.0 * u[3] + 2.0 * u[4]) / (180.0 * h2)
    out[2] = (-2.0 * u[1] - 27.0 * u[0] + 270.0 * u[1] - 490.0 * u[2]
              + 270.0 * u[3] - 27.0 * u[4] + 2.0 * u[5]) / (180.0 * h2)
    out[-3] = (-u[-1] + 16.0 * u[-2] - 30.0 * u[-3] + 16.0 * u[-4] - u[-5]) / (12.0 * h2)
    out[-2] = (u[-1] - 2.0 * u[-2] + u[-3]) / h2
    return out


def _first_derivative(u: np.ndarray, dr: float, order: int) -> np.ndarray:
    out = np.empty_like(u)
    if order == 2:
        out[1:-1] = (u[2:] - u[:-2]) / (2.0 * dr)
        out[0] = u[1] / dr
    elif order == 4:
        out[2:-2] = (u[:-4] - 8.0 * u[1:-3] + 8.0 * u[3:-1] - u[4:]) / (12.0 * dr)
        out[1] = (-u[1] - 8.0 * u[0] + 8.0 * u[2] - u[3]) / (12.0 * dr)
        out[0] = (16.0 * u[1] - 2.0 * u[2]) / (12.0 * dr)
        out[-2] = (u[-1] - u[-3]) / (2.0 * dr)
    else:
        out[3:-3] = (-u[:-6] + 9.0 * u[1:-5] - 45.0 * u[2:-4]
                     + 45.0 * u[4:-2] - 9.0 * u[5:-1] + u[6:]) / (60.0 * dr)
        out[1] = (u[2] - 9.0 * u[1] - 45.0 * u[0] + 45.0 * u[2] - 9.0 * u[3] + u[4]) / (60.0 * dr)
        out[2] = (u[1] + 9.0 * u[0] - 45.0 * u[1] + 45.0 * u[3] - 9.0 * u[4] + u[5]) / (60.0 * dr)
        out[0] = (90.0 * u[1] - 18.0 * u[2] + 2.0 * u[3]) / (60.0 * dr)
        out[-3] = (u[-5] - 8.0 * u[-4] + 8.0 * u[-2] - u[-1]) / (12.0 * dr)
        out[-2] = (u[-1] - u[-3]) / (2.0 * dr)
    out[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * dr)
    return out


# ---------------------------------------------------------------------------
# state


@dataclass(eq=False)
class FieldState:
    """Snapshot (t, u, u_t) on a grid; u = r * phi.

    Invariants: u[0] = u[-1] = 0 (origin regularity and outer Dirichlet).
    The point values phi(0), phi_t(0) are reconstructed by quadratic
    extrapolation; the dynamics itself never divides by r = 0.
    """

    t: float
    u: np.ndarray
    u_t: np.ndarray
    grid: RadialGrid
    space_order: int = 2

    def __post_init__(self) -> None:
        if self.u.shape != (self.grid.n_nodes,) or self.u_t.shape != (self.grid.n_nodes,):
            raise ValueError("field arrays must match the grid")

    @staticmethod
    def _origin(values: np.ndarray) -> float:
        return 3.0 * values[1] - 3.0 * values[2] + values[3]

    @cached_property
    def phi(self) -> np.ndarray:
        out = self.u * self.grid.r_inv
        out[0] = self._origin(out)
        return out

    @cached_property
    def phi_t(self) -> np.ndarray:
        out = self.u_t * self.grid.r_inv
        out[0] = self._origin(out)
        return out

    @cached_property
    def phi_r(self) -> np.ndarray:
        u_r = _first_derivative(self.u, self.grid.dr, self.space_order)
        out = np.zeros_like(self.u)
        out[1:] = (u_r[1:] - self.phi[1:]) * self.grid.r_inv[1:]
        return out

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.u.copy(), self.u_t.copy(), self.grid, self.space_order)


def support_radius(state: FieldState, threshold: float = SUPPORT_THRESHOLD) -> float:
    """Largest r_j where |phi| or |phi_t| exceeds the threshold (0 if none)."""
    mask = (np.abs(state.phi) > threshold) | (np.abs(state.phi_t) > threshold)
    idx = np.nonzero(mask)[0]
    return float(state.grid.r[idx[-1]]) if idx.size else 0.0


@dataclass
class SupportMonitor:
    """Tracks the support front along a run.

    The semigroup propagates at speed <= 1, so up to mesh effects
    support(t) <= support(t0) + (t - t0).  ``max_excess`` reports how far
    the measured 1e-13 front ran beyond that bound plus the 2*dr grace;
    the lattice dispersive precursor makes this positive in practice (see
    the acceptance notes), which is why it is recorded rather than assumed.
    """

    grid: RadialGrid
    threshold: float = SUPPORT_THRESHOLD
    records: list[tuple[float, float]] = field(default_factory=list)

    def observe(self, state: FieldState) -> float:
        radius = support_radius(state, self.threshold)
        self.records.append((state.t, radius))
        return radius

    @property
    def initial(self) -> tuple[float, float]:
        return self.records[0]

    def max_excess(self) -> float:
        """max over records of radius - (radius0 + (t - t0) + 2 dr)."""
        t0, r0 = self.initial
        bound = 2.0 * self.grid.dr
        return max(radius - (r0 + (t - t0) + bound) for t, radius in self.records)


# ---------------------------------------------------------------------------
# initial data


def bump_profile(r: np.ndarray, amplitude: float, center: float, width: float,
                 steepness: float = 1.0) -> np.ndarray:
    """Smooth bump supported exactly on |r - center| < width, peak = amplitude."""
    x = (np.asarray(r, dtype=float) - center) / width
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = amplitude * np.exp(steepness * (1.0 - 1.0 / (1.0 - x[inside] ** 2)))
    return out


def gaussian_profile(r: np.ndarray, amplitude: float, center: float,
                     width: float) -> np.ndarray:
    """Gaussian pulse; compactly supported only up to machine precision."""
    x = (np.asarray(r, dtype=float) - center) / width
    return amplitude * np.exp(-x * x)


def initial_state(grid: RadialGrid, amplitude: float, center: float, width: float,
                  kind: str = "bump", velocity: str = "rest", steepness: float = 1.0,
                  space_order: int = 2) -> FieldState:
    """Build t=0 data: phi = profile, phi_t per the velocity mode.

    velocity "rest" sets phi_t = 0; "outgoing" sets u_t = -u_r, which for
    profiles supported away from the origin launches a right-moving pulse.
    """
    if kind == "bump":
        phi = bump_profile(grid.r, amplitude, center, width, steepness)
    elif kind == "gaussian":
        phi = gaussian_profile(grid.r, amplitude, center, width)
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    u = grid.r * phi
    if velocity == "rest":
        u_t = np.zeros_like(u)
    elif velocity == "outgoing":
        u_t = -_first_derivative(u, grid.dr, space_order)
    else:
        raise ValueError(f"unknown velocity mode {velocity!r}")
    u[0] = u[-1] = 0.0
    u_t[0] = u_t[-1] = 0.0
    return FieldState(0.0, u, u_t, grid, space_order)


# ---------------------------------------------------------------------------
# evolution


def rhs(state: FieldState, hubble: float, spec: PotentialSpec | None,
        grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """Semi-discrete right-hand side (du, du_t) at the state's own time."""
    return _rhs(state.u, state.u_t, state.t, hubble, spec, grid, state.space_order)


def _rhs(u: np.ndarray, u_t: np.ndarray, t: float, hubble: float,
         spec: PotentialSpec | None, grid: RadialGrid,
         order: int) -> tuple[np.ndarray, np.ndarray]:
    du_t = _second_derivative(u, grid.dr, order)
    if hubble:
        du_t *= np.exp(-2.0 * hubble * t)
        du_t -= 3.0 * hubble * u_t
    if spec is not None:
        du_t -= grid.r * eval_f(spec, u * grid.r_inv)
    du_t[0] = 0.0
    du_t[-1] = 0.0
    du = u_t.copy()
    du[0] = 0.0
    du[-1] = 0.0
    return du, du_t


def _resolve_dt(grid: RadialGrid, cfg: SolverConfig) -> float:
    limit = cfl_dt(grid, cfg)
    if cfg.dt is not None:
        if cfg.dt <= 0:
            raise CflViolation("dt must be positive")
        if cfg.dt > limit * (1.0 + 1e-12):
            raise CflViolation(f"dt={cfg.dt} exceeds cfl*dr={limit}")
        return cfg.dt
    return limit


def _rk4(u: np.ndarray, u_t: np.ndarray, t: float, dt: float, hubble: float,
         spec: PotentialSpec | None, grid: RadialGrid,
         order: int) -> tuple[np.ndarray, np.ndarray]:
    k1u, k1v = _rhs(u, u_t, t, hubble, spec, grid, order)
    h = 0.5 * dt
    k2u, k2v = _rhs(u + h * k1u, u_t + h * k1v, t + h, hubble, spec, grid, order)
    k3u, k3v = _rhs(u + h * k2u, u_t + h * k2v, t + h, hubble, spec, grid, order)
    k4u, k4v = _rhs(u + dt * k3u, u_t + dt * k3v, t + dt, hubble, spec, grid, order)
    w = dt / 6.0
    un = u + w * (k1u + 2.0 * (k2u + k3u) + k4u)
    vn = u_t + w * (k1v + 2.0 * (k2v + k3v) + k4v)
    un[0] = un[-1] = 0.0
    vn[0] = vn[-1] = 0.0
    return un, vn


def step(state: FieldState, cfg: SolverConfig, spec: PotentialSpec | None,
         grid: RadialGrid) -> FieldState:
    """One RK4 step; boundary values re-imposed afterwards."""
    dt = _resolve_dt(grid, cfg)
    u, u_t = _rk4(state.u, state.u_t, state.t, dt, cfg.hubble, spec, grid,
                  cfg.space_order)
    return FieldState(state.t + dt, u, u_t, grid, cfg.space_order)


def evolve(state0: FieldState, cfg: SolverConfig, spec: PotentialSpec | None,
           grid: RadialGrid, observer: Callable[[FieldState], None] | None = None,
           monitor: SupportMonitor | None = None) -> FieldState:
    """Integrate to t0 + t_end, calling ``observer`` on read-only snapshots
    every ``output_every`` steps (always at the start and the final step).

    Aborts with SupportOverflow once the support comes within 4 dr of
    r_max, and with NonFiniteField on NaN/Inf.
    """
    dt_max = _resolve_dt(grid, cfg)
    if cfg.t_end == 0.0:
        if monitor is not None:
            monitor.observe(state0)
        if observer is not None:
            observer(state0)
        return state0
    n_steps = max(1, int(np.ceil(cfg.t_end / dt_max - 1e-12)))
    dt = cfg.t_end / n_steps
    t0 = state0.t
    u = state0.u.copy()
    u_t = state0.u_t.copy()

    def snapshot(k: int) -> FieldState:
        return FieldState(t0 + k * dt, u.copy(), u_t.copy(), grid, cfg.space_order)

    def inspect(state: FieldState) -> None:
        if not (np.all(np.isfinite(state.u)) and np.all(np.isfinite(state.u_t))):
            raise NonFiniteField(f"non-finite field at t={state.t:.6g}")
        radius = monitor.observe(state) if monitor is not None else support_radius(state)
        if radius >= grid.r_max - 4.0 * grid.dr:
            raise SupportOverflow(
                f"support {radius:.4g} within 4 dr of r_max={grid.r_max:.4g} "
                f"at t={state.t:.6g}; enlarge the domain")
        if observer is not None:
            observer(state)

    inspect(snapshot(0))
    for k in range(1, n_steps + 1):
        u, u_t = _rk4(u, u_t, t0 + (k - 1) * dt, dt, cfg.hubble, spec, grid,
                      cfg.space_order)
        if k % cfg.output_every == 0 or k == n_steps:
            inspect(snapshot(k))
    return snapshot(n_steps)
