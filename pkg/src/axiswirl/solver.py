"""Explicit RK2 time integration with pressure projection.

The projection removes the divergence through the exact adjoint pair
(D, D*): with D the face-flux divergence and D* its rho-weighted adjoint
(a consistent gradient away from the boundary rows), the normal system
D D* phi = D u* is symmetric positive semidefinite in the rho-weighted
inner product and its right-hand side always lies in the range, so
conjugate-direction iteration converges unconditionally.  The correction
u* - D* phi is the rho-weighted least-norm divergence remover, i.e. the
orthogonal projection onto the discretely divergence-free space.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import CflViolation, ConfigurationError, SolverError
from .fields import (
    VelocityState,
    div_adjoint,
    div_from_components,
    momentum_rhs,
    zero_forcing,
)
from .grid import CylGrid, ScalarSample, integrate


@dataclass
class SimConfig:
    n_rho: int = 32
    n_z: int = 32
    rho_max: float = 2.0
    z_min: float = 0.0
    z_max: float = 1.0
    nu: float = 0.1
    t_start: float = 0.0
    t_end: float = 0.1
    dt: float | None = None
    cfl_safety: float = 0.4
    checkpoint_stride: int = 1
    projection_tol: float = 1e-10
    projection_max_iter: int = 20000

    def __post_init__(self):
        if not (self.t_end > self.t_start):
            raise ConfigurationError("t_end must exceed t_start")
        if self.dt is not None and not (self.dt > 0.0):
            raise ConfigurationError("dt must be positive")
        if not (self.nu > 0.0):
            raise ConfigurationError("nu must be positive")
        if self.checkpoint_stride < 1:
            raise ConfigurationError("checkpoint_stride must be >= 1")


@dataclass
class Trajectory:
    checkpoints: list[VelocityState]
    config: SimConfig
    failed: bool = False
    failure_reason: str | None = None
    step_count: int = 0
    dt: float = 0.0
    projection_info: list[tuple[int, float]] = field(default_factory=list)

    @property
    def times(self):
        return [s.time for s in self.checkpoints]

    def checkpoint_hash(self, i):
        s = self.checkpoints[i]
        h = hashlib.sha256()
        for f in (s.u_rho, s.u_phi, s.u_z, s.pressure):
            h.update(np.ascontiguousarray(f.values).tobytes())
        return h.hexdigest()


# --- pressure Poisson ---------------------------------------------------

def _apply_normal(phi, grid: CylGrid):
    """D D* phi: symmetric positive semidefinite in the rho-weighted product."""
    cr, cz = div_adjoint(phi, grid)
    return div_from_components(cr, cz, grid)


def _remove_null(b, grid: CylGrid):
    """Project out the rho-weighted null space of D*: constants and the
    z-checkerboard (only present for even n_z)."""
    w = np.broadcast_to(grid.rho, b.shape)
    b = b - np.sum(w * b) / np.sum(w)
    if grid.n_z % 2 == 0:
        cb = np.ones(grid.n_z)
        cb[1::2] = -1.0
        mode = np.broadcast_to(cb, b.shape)
        b = b - mode * (np.sum(w * b * mode) / np.sum(w))
    return b


def solve_pressure_poisson(b, grid: CylGrid, tol=1e-10, max_iter=20000,
                           ref_scale=None):
    """Conjugate-gradient solve of D D* phi = b in the rho-weighted
    inner product.

    b is the divergence to remove; it lies in range(D) = range(D D*) by
    construction, so the system is always consistent.  ref_scale, when
    given, sets an absolute rounding floor (1e-13 * ref_scale) below
    which b counts as already zero (keeps re-projection of a projected
    field from chasing rounding noise).  Returns
    (phi, iterations, rel_residual).
    """
    w = grid.rho
    b = _remove_null(b, grid)
    bnorm = float(np.sqrt(np.sum(w * b * b)))
    phi = np.zeros_like(b)
    floor = 1e-13 * ref_scale if ref_scale else 0.0
    if bnorm <= floor or bnorm == 0.0:
        return phi, 0, 0.0
    target = max(tol * bnorm, floor)
    r = b.copy()
    p = r.copy()
    rs = float(np.sum(w * r * r))
    best_phi, best_rs = phi, rs
    for it in range(1, max_iter + 1):
        ap = _apply_normal(p, grid)
        denom = float(np.sum(w * p * ap))
        if denom <= 0.0:
            break  # search direction hit the null space (rounding)
        alpha = rs / denom
        phi = phi + alpha * p
        r = r - alpha * ap
        if it % 50 == 0:
            # strip accumulated null-space drift
            r = _remove_null(r, grid)
        rs_new = float(np.sum(w * r * r))
        if rs_new < best_rs:
            best_phi, best_rs = phi, rs_new
        if np.sqrt(rs_new) <= target:
            return phi, it, float(np.sqrt(rs_new) / bnorm)
        if rs_new > 1e6 * best_rs:
            break  # rounding-dominated stagnation; keep the best iterate
        beta = rs_new / rs
        rs = rs_new
        p = r + beta * p
    rel = float(np.sqrt(best_rs) / bnorm)
    if np.sqrt(best_rs) <= max(10.0 * target, floor):
        return best_phi, max_iter, rel
    raise SolverError(
        f"pressure Poisson did not converge: rel residual {rel:.3e} after "
        f"{max_iter} iterations", iterations=max_iter, residual=rel,
    )


def project(v: VelocityState, tol=1e-10, max_iter=20000, dt=None):
    """Project the state onto the discretely divergence-free space.

    The correction D* phi is the rho-weighted least-norm field removing
    the divergence, so the projection is orthogonal: it never increases
    kinetic energy.  Returns (state, info) with info = (iterations,
    rel_residual).  With dt given, the pressure field is incremented by
    -phi/dt (D* phi plays the role of -grad phi).
    """
    g = v.grid
    b = div_from_components(v.u_rho.values, v.u_z.values, g)
    w = g.rho
    uscale = float(
        np.sqrt(np.sum(w * (v.u_rho.values**2 + v.u_z.values**2)))
    ) / min(g.d_rho, g.d_z)
    phi, iters, rel = solve_pressure_poisson(
        b, g, tol=tol, max_iter=max_iter, ref_scale=uscale
    )
    cr, cz = div_adjoint(phi, g)
    p = v.pressure.values
    if dt is not None:
        p = p - phi / dt
    out = v.replace_fields(
        u_rho=v.u_rho.values - cr, u_z=v.u_z.values - cz, pressure=p
    )
    return out, (iters, rel)


# --- time stepping -------------------------------------------------------

def cfl_limits(v: VelocityState, nu: float):
    """Return (advective_dt_max, diffusive_dt_max) per the stability contract."""
    g = v.grid
    delta = min(g.d_rho, g.d_z)
    umax = max(
        float(np.max(np.abs(v.u_rho.values))),
        float(np.max(np.abs(v.u_phi.values))),
        float(np.max(np.abs(v.u_z.values))),
    )
    adv = 0.5 * delta / umax if umax > 0.0 else np.inf
    dif = 0.25 * delta**2 / nu
    return adv, dif


def step(state: VelocityState, cfg: SimConfig, dt: float,
         forcing_at=None) -> VelocityState:
    """One Heun (RK2) advance of the momentum equations plus projection.

    forcing_at(t) -> ForcingFields; defaults to zero forcing.  Raises
    CflViolation when dt exceeds the stability contract.  A non-finite
    result is returned as-is; the caller treats it as blow-up data.
    """
    g = state.grid
    if forcing_at is None:
        zf = zero_forcing(g)
        forcing_at = lambda t: zf  # noqa: E731
    adv, dif = cfl_limits(state, cfg.nu)
    limit = min(adv, dif)
    if dt > limit * (1.0 + 1e-12):
        raise CflViolation(
            f"dt = {dt} exceeds stability limit {limit}", suggested_dt=0.8 * limit
        )
    t = state.time
    # non-incremental splitting: the pressure enters only through the
    # projection, never through the stored-field gradient
    state = state.replace_fields(pressure=np.zeros(g.shape))
    f0 = forcing_at(t)
    k1 = momentum_rhs(state, f0, cfg.nu)
    mid = state.replace_fields(
        u_rho=state.u_rho.values + dt * k1[0].values,
        u_phi=state.u_phi.values + dt * k1[1].values,
        u_z=state.u_z.values + dt * k1[2].values,
        time=t + dt,
    )
    f1 = forcing_at(t + dt)
    k2 = momentum_rhs(mid, f1, cfg.nu)
    star = state.replace_fields(
        u_rho=state.u_rho.values + 0.5 * dt * (k1[0].values + k2[0].values),
        u_phi=state.u_phi.values + 0.5 * dt * (k1[1].values + k2[1].values),
        u_z=state.u_z.values + 0.5 * dt * (k1[2].values + k2[2].values),
        time=t + dt,
    )
    if not all(
        np.all(np.isfinite(f.values)) for f in (star.u_rho, star.u_phi, star.u_z)
    ):
        return star  # blow-up: caller truncates
    out, _info = project(
        star, tol=cfg.projection_tol, max_iter=cfg.projection_max_iter, dt=dt
    )
    return out


def _is_finite(state: VelocityState) -> bool:
    return all(
        np.all(np.isfinite(f.values))
        for f in (state.u_rho, state.u_phi, state.u_z, state.pressure)
    )


def run(cfg: SimConfig, initial: VelocityState, forcing_at=None) -> Trajectory:
    """Integrate from t_start to t_end, checkpointing every stride steps.

    Deterministic for a fixed config.  Blow-up (non-finite fields) and
    CFL rejection truncate the trajectory with a failure marker instead
    of raising.
    """
    g = initial.grid
    state = initial.replace_fields(time=cfg.t_start)
    # enforce the divergence invariant on the initial checkpoint
    state, info = project(
        state, tol=cfg.projection_tol, max_iter=cfg.projection_max_iter
    )
    if cfg.dt is not None:
        dt = cfg.dt
    else:
        adv, dif = cfl_limits(state, cfg.nu)
        dt = cfg.cfl_safety * min(adv, dif)
        n = max(1, int(np.ceil((cfg.t_end - cfg.t_start) / dt)))
        dt = (cfg.t_end - cfg.t_start) / n
    n_steps = max(1, int(round((cfg.t_end - cfg.t_start) / dt)))
    traj = Trajectory([state], cfg, dt=dt, projection_info=[info])
    for i in range(n_steps):
        try:
            state = step(state, cfg, dt, forcing_at=forcing_at)
        except (CflViolation, SolverError) as exc:
            traj.failed = True
            traj.failure_reason = str(exc)
            break
        traj.step_count = i + 1
        if not _is_finite(state):
            traj.failed = True
            traj.failure_reason = f"blow-up: non-finite fields at t = {state.time}"
            traj.checkpoints.append(state)
            break
        if (i + 1) % cfg.checkpoint_stride == 0 or i == n_steps - 1:
            traj.checkpoints.append(state)
    return traj


def kinetic_energy(v: VelocityState) -> float:
    g = v.grid
    sq = v.u_rho.values**2 + v.u_phi.values**2 + v.u_z.values**2
    return 0.5 * integrate(ScalarSample(sq, g))
