"""Nonlinear integration of the rotating-frame equations of motion.

The second-order equations are

    x'' - 2n y' = Omega_x
    y'' + 2n x' = Omega_y
    z''         = Omega_z

integrated here in first-order form with an embedded Dormand-Prince 5(4)
pair (FSAL, adaptive step control, the fifth-order solution propagated).  The
system is autonomous, so C = 2 Omega - |v|^2 is a first integral; its drift
along a trajectory is the accuracy audit for the integrator.  Trajectories
terminate early with a flagged status on close approach to the second primary
(r2 < 1e-6) or escape (|pos| > 1e3).  Escape is the generic fate for k < 0,
where the buoyancy term repels from the first primary.  Sampling density is
one row per accepted step; cap ``max_step`` for denser output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NoGrowthError
from .model import Params, _grad_s, _omega_s
from .equilibria import triangular_points
from .stability import unstable_direction

__all__ = [
    "PhaseState",
    "IntegratorConfig",
    "Trajectory",
    "eom_rhs",
    "jacobi_constant",
    "integrate",
    "growth_rate",
    "equilibrium_state",
    "unstable_seed",
]

COLLISION_R2 = 1e-6
ESCAPE_RADIUS = 1e3


@dataclass(frozen=True)
class PhaseState:
    """Rotating-frame state: position, velocity, and time."""

    pos: np.ndarray
    vel: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", np.asarray(self.pos, dtype=float))
        object.__setattr__(self, "vel", np.asarray(self.vel, dtype=float))
        if self.pos.shape != (3,) or self.vel.shape != (3,):
            raise ValueError("pos and vel must each hold 3 components")
        if not (np.all(np.isfinite(self.pos)) and np.all(np.isfinite(self.vel))):
            raise ValueError("state components must be finite")

    def vector(self) -> np.ndarray:
        """Concatenated 6-vector (x, y, z, vx, vy, vz)."""
        return np.concatenate([self.pos, self.vel])

    @classmethod
    def from_vector(cls, vec, t: float = 0.0) -> "PhaseState":
        vec = np.asarray(vec, dtype=float)
        return cls(pos=vec[:3], vel=vec[3:], t=t)


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-integration settings."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float = 1e-4
    t_end: float = 100.0

    def __post_init__(self) -> None:
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.t_end <= 0.0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.max_step <= 0.0 or self.initial_step <= 0.0:
            raise ValueError("step sizes must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled integration output (one sample per accepted step).

    ``status`` is "completed", "collision" (r2 fell below 1e-6) or
    "escape" (|pos| exceeded 1e3).
    """

    times: np.ndarray
    states: np.ndarray
    jacobi: np.ndarray
    steps: int
    rejections: int
    status: str

    def __len__(self) -> int:
        return len(self.times)

    def final_state(self) -> PhaseState:
        return PhaseState.from_vector(self.states[-1], t=float(self.times[-1]))


def eom_rhs(state: PhaseState, params: Params) -> np.ndarray:
    """Time derivative of the 6-vector state: (vel, acc) with Coriolis coupling."""
    x, y, z = state.pos
    vx, vy, vz = state.vel
    return np.array(_rhs(x, y, z, vx, vy, vz, params.mu, params.k, params.n_sq, params.n))


def jacobi_constant(state: PhaseState, params: Params) -> float:
    """First integral C = 2 Omega(pos) - |vel|^2."""
    x, y, z = state.pos
    vx, vy, vz = state.vel
    om = _omega_s(x, y, z, params.mu, params.k, params.n_sq)
    return 2.0 * om - (vx * vx + vy * vy + vz * vz)


def _rhs(x, y, z, vx, vy, vz, mu, k, n_sq, n):
    gx, gy, gz = _grad_s(x, y, z, mu, k, n_sq)
    return (vx, vy, vz, gx + 2.0 * n * vy, gy - 2.0 * n * vx, gz)


# Dormand-Prince 5(4) tableau (FSAL: the last stage is the next step's first).
_A2 = (1 / 5,)
_A3 = (3 / 40, 9 / 40)
_A4 = (44 / 45, -56 / 15, 32 / 9)
_A5 = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A6 = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def integrate(state0: PhaseState, params: Params, cfg: IntegratorConfig) -> Trajectory:
    """Integrate the equations of motion from ``state0`` over [0, cfg.t_end].

    Every accepted step emits one sample; the trajectory therefore holds
    ``steps + 1`` rows including the initial state.  Raises
    :class:`ConvergenceError` on step-size underflow.
    """
    mu, k, n_sq, n = params.mu, params.k, params.n_sq, params.n

    def rhs(s):
        return _rhs(*s, mu, k, n_sq, n)

    def jac(s):
        om = _omega_s(s[0], s[1], s[2], mu, k, n_sq)
        return 2.0 * om - (s[3] * s[3] + s[4] * s[4] + s[5] * s[5])

    def flagged(s):
        x, y, z = s[0], s[1], s[2]
        dx2 = x + mu - 1.0
        if dx2 * dx2 + y * y + z * z < COLLISION_R2 * COLLISION_R2:
            return "collision"
        if x * x + y * y + z * z > ESCAPE_RADIUS * ESCAPE_RADIUS:
            return "escape"
        return None

    t = 0.0
    s = tuple(state0.vector())
    times, states, jacobi = [t], [s], [jac(s)]
    status = flagged(s)
    steps = rejections = 0

    if status is None:
        h = min(cfg.initial_step, cfg.max_step, cfg.t_end)
        k1 = rhs(s)
        while t < cfg.t_end:
            if h > cfg.t_end - t:
                h = cfg.t_end - t
            # a final sliver h == t_end - t is legitimate however small
            if h < 1e-14 * max(1.0, abs(t)) and h < cfg.t_end - t:
                raise ConvergenceError(
                    f"step size underflow at t={t:.6g} (h={h:.3e}); "
                    "the trajectory is too close to a singularity for the "
                    "requested tolerances"
                )

            def stage(coeffs, *kk):
                return tuple(
                    si + h * sum(c * ki[j] for c, ki in zip(coeffs, kk))
                    for j, si in enumerate(s)
                )

            k2 = rhs(stage(_A2, k1))
            k3 = rhs(stage(_A3, k1, k2))
            k4 = rhs(stage(_A4, k1, k2, k3))
            k5 = rhs(stage(_A5, k1, k2, k3, k4))
            k6 = rhs(stage(_A6, k1, k2, k3, k4, k5))
            s_new = stage(_B5, k1, k2, k3, k4, k5, k6)
            k7 = rhs(s_new)

            err_sq = 0.0
            kk = (k1, k2, k3, k4, k5, k6, k7)
            for j in range(6):
                e_j = h * sum(c * ki[j] for c, ki in zip(_ERR, kk))
                scale = cfg.abs_tol + cfg.rel_tol * max(abs(s[j]), abs(s_new[j]))
                err_sq += (e_j / scale) ** 2
            err = math.sqrt(err_sq / 6.0)

            if err <= 1.0:
                t += h
                s, k1 = s_new, k7
                steps += 1
                times.append(t)
                states.append(s)
                jacobi.append(jac(s))
                status = flagged(s)
                if status is not None:
                    break
                grow = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                h = min(h * grow, cfg.max_step)
            else:
                rejections += 1
                h *= 0.2 if math.isnan(err) else max(0.2, 0.9 * err ** -0.2)

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        jacobi=np.array(jacobi),
        steps=steps,
        rejections=rejections,
        status=status or "completed",
    )


def growth_rate(
    traj: Trajectory,
    eq_point,
    lower_factor: float = 10.0,
    upper_bound: float = 1e-3,
) -> float:
    """Exponential growth rate of the displacement from an equilibrium.

    Fits the least-squares slope of log ||state - equilibrium|| (6-dimensional
    displacement, the equilibrium having zero velocity) against time over the
    window where the displacement lies in [lower_factor x initial,
    upper_bound].  The lower edge skips transient mode mixing; the upper edge
    stops before nonlinear saturation.

    Raises
    ------
    NoGrowthError
        If the displacement never reaches the window ("no exponential growth
        detected").
    """
    eq = np.concatenate([np.asarray(eq_point, dtype=float), np.zeros(3)])
    disp = np.linalg.norm(traj.states - eq, axis=1)
    d0 = disp[0]
    lower = lower_factor * d0
    if lower <= 0.0 or disp.max() < lower:
        raise NoGrowthError("no exponential growth detected")
    window = (disp >= lower) & (disp <= upper_bound)
    if window.sum() < 2:
        raise NoGrowthError("no exponential growth detected")
    slope = np.polyfit(traj.times[window], np.log(disp[window]), 1)[0]
    return float(slope)


def equilibrium_state(params: Params, branch: int = +1) -> PhaseState:
    """The triangular equilibrium (zero velocity) on the chosen z-branch."""
    pts = triangular_points(params)
    if not pts.exists:
        raise ValueError("triangular points do not exist for these parameters")
    return PhaseState(pos=pts.point(branch), vel=np.zeros(3))


def unstable_seed(params: Params, offset: float, branch: int = +1) -> PhaseState:
    """Equilibrium displaced by ``offset`` along the dominant growing eigendirection.

    The 6-dimensional displacement has norm ``offset``, so the growth-rate fit
    sees the unstable mode immediately.
    """
    if offset <= 0.0:
        raise ValueError(f"offset must be positive, got {offset}")
    eq = equilibrium_state(params, branch)
    _, direction = unstable_direction(params, branch)
    vec = eq.vector() + offset * direction
    return PhaseState.from_vector(vec)
