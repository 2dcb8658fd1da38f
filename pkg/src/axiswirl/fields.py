"""Velocity/vorticity fields and the cylindrical differential operators.

Fields are cell-centered on a CylGrid, shape (n_rho, n_z), axis 0 radial.
Radial ghosts encode the axis regularity parities (u_rho, u_phi, w_rho,
w_phi odd across rho = 0; u_z, p, w_z even) and the no-slip wall at
rho = rho_max via mirror-zero ghosts.  z is periodic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .grid import CylGrid, ScalarSample

ODD = "odd"
EVEN = "even"
# wall modes: "noslip" mirrors through zero at the wall face, "neumann"
# copies, "extrap" extrapolates linearly (diagnostic gradients of fields
# that do not vanish at the wall)
NOSLIP = "noslip"
NEUMANN = "neumann"
EXTRAP = "extrap"


@dataclass(frozen=True)
class VelocityState:
    u_rho: ScalarSample
    u_phi: ScalarSample
    u_z: ScalarSample
    pressure: ScalarSample
    time: float

    def __post_init__(self):
        g = self.u_rho.grid
        for f in (self.u_phi, self.u_z, self.pressure):
            if f.grid is not g and f.grid != g:
                raise ContractViolation("all state fields must share one grid")

    @property
    def grid(self) -> CylGrid:
        return self.u_rho.grid

    def replace_fields(self, u_rho=None, u_phi=None, u_z=None, pressure=None, time=None):
        g = self.grid
        return VelocityState(
            ScalarSample(u_rho if u_rho is not None else self.u_rho.values, g),
            ScalarSample(u_phi if u_phi is not None else self.u_phi.values, g),
            ScalarSample(u_z if u_z is not None else self.u_z.values, g),
            ScalarSample(pressure if pressure is not None else self.pressure.values, g),
            self.time if time is None else float(time),
        )


@dataclass(frozen=True)
class VorticityFields:
    w_rho: ScalarSample
    w_phi: ScalarSample
    w_z: ScalarSample

    @property
    def grid(self) -> CylGrid:
        return self.w_rho.grid


@dataclass(frozen=True)
class ForcingFields:
    h_rho: ScalarSample
    h_phi: ScalarSample
    h_z: ScalarSample
    g_rho: ScalarSample | None = None
    g_phi: ScalarSample | None = None
    g_z: ScalarSample | None = None

    @property
    def grid(self) -> CylGrid:
        return self.h_rho.grid


def zero_state(grid: CylGrid, time=0.0) -> VelocityState:
    z = grid.zeros()
    return VelocityState(
        ScalarSample(z, grid), ScalarSample(z.copy(), grid),
        ScalarSample(z.copy(), grid), ScalarSample(z.copy(), grid), time,
    )


def zero_forcing(grid: CylGrid) -> ForcingFields:
    z = grid.zeros()
    return ForcingFields(
        ScalarSample(z, grid), ScalarSample(z.copy(), grid), ScalarSample(z.copy(), grid)
    )


# --- ghost construction -------------------------------------------------

def _pad_rho(f, parity, wall):
    """Return f with one ghost row below the axis and one beyond the wall."""
    if parity == ODD:
        lo = -f[0:1]
    elif parity == EVEN:
        lo = f[0:1]
    else:
        raise ContractViolation(f"unknown axis parity {parity!r}")
    if wall == NOSLIP:
        hi = _noslip_ghost(f)
    elif wall == NEUMANN:
        hi = f[-1:]
    elif wall == EXTRAP:
        hi = 2.0 * f[-1:] - f[-2:-1]
    else:
        raise ContractViolation(f"unknown wall mode {wall!r}")
    return np.concatenate([lo, f, hi], axis=0)


def _noslip_ghost(f):
    """Ghost value past the wall for a field vanishing at rho = rho_max:
    the quadratic through the last two cells and the zero wall value,
    evaluated half a cell outside.  Third-order accurate in the ghost
    value, which keeps wall-adjacent derivative rows second order."""
    return f[-2:-1] / 3.0 - 2.0 * f[-1:]


def d_rho(f, grid: CylGrid, parity, wall=NOSLIP):
    fp = _pad_rho(f, parity, wall)
    return (fp[2:] - fp[:-2]) / (2.0 * grid.d_rho)


def d_z(f, grid: CylGrid):
    return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2.0 * grid.d_z)


def d_zz(f, grid: CylGrid):
    return (np.roll(f, -1, axis=1) - 2.0 * f + np.roll(f, 1, axis=1)) / grid.d_z**2


def radial_diffusion(f, grid: CylGrid, wall=NOSLIP):
    """(1/rho) d/drho (rho df/drho) in conservative flux form.

    The axis face sits at rho = 0 and carries zero flux, so no axis ghost
    is needed; the wall face flux uses the wall ghost.
    """
    faces = np.arange(grid.n_rho + 1) * grid.d_rho  # face radii, axis..wall
    if wall == NOSLIP:
        ghost = _noslip_ghost(f)
    elif wall == NEUMANN:
        ghost = f[-1:]
    else:
        raise ContractViolation(f"unsupported wall mode {wall!r} for diffusion")
    fx = np.concatenate([f, ghost], axis=0)
    diffs = np.diff(fx, axis=0)
    flux = np.concatenate([np.zeros_like(f[0:1]), faces[1:, None] * diffs], axis=0)
    return np.diff(flux, axis=0) / (grid.rho * grid.d_rho**2)


def swirl_laplacian(f, grid: CylGrid, wall=NOSLIP):
    """Viscous operator for odd-parity components: radial diffusion + d_zz - f/rho^2."""
    return radial_diffusion(f, grid, wall) + d_zz(f, grid) - f / grid.rho**2


# --- spec operators -----------------------------------------------------

def divergence(v: VelocityState) -> ScalarSample:
    """Discrete continuity residual, the finite-volume face-flux form of
    (1/rho) d_rho(rho u_rho) + d_z(u_z).

    Radial face values are the averages of the two adjacent cells; the
    axis face carries zero flux exactly and the no-slip wall face zero
    flux as well, so no radial ghosts enter.  This form has an exact
    discrete adjoint gradient, which lets the pressure projection drive
    the residual to the iteration tolerance.
    """
    g = v.grid
    div = div_from_components(v.u_rho.values, v.u_z.values, g)
    return ScalarSample(div, g)


def div_from_components(u_rho, u_z, grid: CylGrid):
    faces = (np.arange(grid.n_rho - 1) + 1.0) * grid.d_rho  # interior faces
    flux = faces[:, None] * 0.5 * (u_rho[:-1] + u_rho[1:])
    zero = np.zeros_like(u_rho[0:1])
    flux = np.concatenate([zero, flux, zero], axis=0)  # axis and wall faces
    radial = np.diff(flux, axis=0) / (grid.rho * grid.d_rho)
    return radial + d_z(u_z, grid)


def div_adjoint(phi, grid: CylGrid):
    """(c_rho, c_z) = D* phi, the exact rho-weighted adjoint of
    div_from_components; c_rho is a consistent approximation of -d_rho phi
    away from the boundary rows."""
    d_rho_, d_z_ = grid.d_rho, grid.d_z
    faces = (np.arange(grid.n_rho - 1) + 1.0) * d_rho_
    dphi = faces[:, None] * (phi[1:] - phi[:-1])
    zero = np.zeros_like(phi[0:1])
    dphi = np.concatenate([zero, dphi, zero], axis=0)
    c_rho = -(dphi[1:] + dphi[:-1]) / (2.0 * grid.rho * d_rho_)
    c_z = -(np.roll(phi, -1, axis=1) - np.roll(phi, 1, axis=1)) / (2.0 * d_z_)
    return c_rho, c_z


def curl_axisym(v: VelocityState) -> VorticityFields:
    """w_rho = -d_z u_phi, w_phi = d_z u_rho - d_rho u_z, w_z = (1/rho) d_rho(rho u_phi)."""
    g = v.grid
    w_rho = -d_z(v.u_phi.values, g)
    w_phi = d_z(v.u_rho.values, g) - d_rho(v.u_z.values, g, EVEN, NOSLIP)
    w_z = d_rho(v.u_phi.values, g, ODD, NOSLIP) + v.u_phi.values / g.rho
    return VorticityFields(
        ScalarSample(w_rho, g), ScalarSample(w_phi, g), ScalarSample(w_z, g)
    )


def momentum_rhs(v: VelocityState, f: ForcingFields, nu: float):
    """Tendencies (du_rho/dt, du_phi/dt, du_z/dt) of the cylindrical system.

    Includes advection, the swirl terms +-u_phi^2/rho and u_phi*u_rho/rho,
    the pressure gradient of the stored pressure field, forcing, and the
    cylindrical viscous operators with their -u/rho^2 corrections.
    """
    if not nu > 0.0:
        raise ContractViolation(f"nu must be positive, got {nu}")
    g = v.grid
    rho = g.rho
    ur, uh, uz, p = (v.u_rho.values, v.u_phi.values, v.u_z.values, v.pressure.values)

    adv_r = ur * d_rho(ur, g, ODD) + uz * d_z(ur, g)
    adv_h = ur * d_rho(uh, g, ODD) + uz * d_z(uh, g)
    adv_z = ur * d_rho(uz, g, EVEN) + uz * d_z(uz, g)

    du_rho = (
        -adv_r + uh**2 / rho - d_rho(p, g, EVEN, NEUMANN) + f.h_rho.values
        + nu * swirl_laplacian(ur, g)
    )
    du_phi = -adv_h - uh * ur / rho + f.h_phi.values + nu * swirl_laplacian(uh, g)
    du_z = (
        -adv_z - d_z(p, g) + f.h_z.values
        + nu * (radial_diffusion(uz, g, NOSLIP) + d_zz(uz, g))
    )
    return (
        ScalarSample(du_rho, g), ScalarSample(du_phi, g), ScalarSample(du_z, g)
    )


def vorticity_transport_residual(v: VelocityState, w: VorticityFields,
                                 dw_dt: VorticityFields, g_force: ForcingFields,
                                 nu: float):
    """(left - right) of the three vorticity transport equations.

    dw_dt is the caller-supplied time derivative (finite difference of
    consecutive checkpoints); omitting it is a contract violation.
    Ghosts at the wall use linear extrapolation since vorticity need not
    vanish there.
    """
    if dw_dt is None:
        raise ContractViolation("dw_dt is required (difference consecutive states)")
    g = v.grid
    rho = g.rho
    ur, uh, uz = v.u_rho.values, v.u_phi.values, v.u_z.values
    wr, wh, wz = w.w_rho.values, w.w_phi.values, w.w_z.values
    gr = g_force.g_rho.values if g_force.g_rho is not None else 0.0
    gh = g_force.g_phi.values if g_force.g_phi is not None else 0.0
    gz = g_force.g_z.values if g_force.g_z is not None else 0.0

    def drho(fv, parity):
        return d_rho(fv, g, parity, EXTRAP)

    def visc_odd(fv):
        return radial_diffusion_extrap(fv, g) + d_zz(fv, g) - fv / rho**2

    def visc_even(fv):
        return radial_diffusion_extrap(fv, g) + d_zz(fv, g)

    r_rho = (
        dw_dt.w_rho.values + ur * drho(wr, ODD) + uz * d_z(wr, g)
        - wr * d_rho(ur, g, ODD) - wz * d_z(ur, g)
        - gr - nu * visc_odd(wr)
    )
    r_phi = (
        dw_dt.w_phi.values + ur * drho(wh, ODD) + uz * d_z(wh, g)
        - (ur / rho) * wh - 2.0 * (uh / rho) * wr
        - gh - nu * visc_odd(wh)
    )
    r_z = (
        dw_dt.w_z.values + ur * drho(wz, EVEN) + uz * d_z(wz, g)
        - wr * d_rho(uz, g, EVEN) - wz * d_z(uz, g)
        - gz - nu * visc_even(wz)
    )
    return (
        ScalarSample(r_rho, g), ScalarSample(r_phi, g), ScalarSample(r_z, g)
    )


def radial_diffusion_extrap(f, grid: CylGrid):
    """Flux-form radial diffusion with a linearly extrapolated wall ghost."""
    faces = np.arange(grid.n_rho + 1) * grid.d_rho
    ghost = 2.0 * f[-1:] - f[-2:-1]
    fx = np.concatenate([f, ghost], axis=0)
    diffs = np.diff(fx, axis=0)
    flux = np.concatenate([np.zeros_like(f[0:1]), faces[1:, None] * diffs], axis=0)
    return np.diff(flux, axis=0) / (grid.rho * grid.d_rho**2)


def grad_squared(f, grid: CylGrid, parity, wall=NOSLIP):
    """(d_rho f)^2 + (d_z f)^2 with the given ghost conventions."""
    return d_rho(f, grid, parity, wall) ** 2 + d_z(f, grid) ** 2


def velocity_grad_l2(v: VelocityState) -> float:
    """L2 norm of the axisymmetric velocity gradient tensor.

    |Du|^2 = sum of squared component derivatives plus the curvature
    terms (u_rho^2 + u_phi^2)/rho^2.
    """
    g = v.grid
    ur, uh, uz = v.u_rho.values, v.u_phi.values, v.u_z.values
    sq = (
        grad_squared(ur, g, ODD) + grad_squared(uh, g, ODD)
        + grad_squared(uz, g, EVEN) + (ur**2 + uh**2) / g.rho**2
    )
    from .grid import integrate

    return integrate(ScalarSample(sq, g)) ** 0.5
