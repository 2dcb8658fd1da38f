"""Manufactured solutions and convergence studies.

Each solution is a set of closed-form cylindrical velocity components
plus the forcing that makes them solve the momentum equations exactly.
Radial profiles are stored as numpy Polynomials (derivatives are exact
coefficient manipulations) or as Bessel functions with hand-coded
derivative identities; no symbolic-differentiation dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import j0, j1, jn_zeros

from .errors import ConfigurationError
from .fields import (
    ForcingFields,
    VelocityState,
    curl_axisym,
    divergence,
    momentum_rhs,
    zero_forcing,
)
from .grid import CylGrid, ScalarSample, build_grid
from .solver import SimConfig, run


# --- analytic building blocks --------------------------------------------

class RadialProfile:
    """A radial factor with exact first and second derivatives."""

    def __init__(self, f, df, d2f):
        self.f, self.df, self.d2f = f, df, d2f

    @classmethod
    def from_poly(cls, poly: Polynomial):
        d1 = poly.deriv()
        d2 = d1.deriv()
        return cls(poly, d1, d2)

    @classmethod
    def zero(cls):
        z = lambda rho: np.zeros_like(rho)  # noqa: E731
        return cls(z, z, z)


def _bessel_j1_profile(lam):
    """J1(lam*rho) with derivatives from J1' = J0 - J1/x and the Bessel ODE."""

    def f(rho):
        return j1(lam * rho)

    def df(rho):
        x = lam * rho
        return lam * (j0(x) - j1(x) / x)

    def d2f(rho):
        x = lam * rho
        jp = j0(x) - j1(x) / x
        return lam**2 * ((1.0 - x**2) * j1(x) - x * jp) / x**2

    return RadialProfile(f, df, d2f)


@dataclass
class Term:
    """coef * exp(-mu t) * F(rho) * G(z), G in {1, sin(k z), cos(k z)}."""

    radial: RadialProfile
    mu: float = 0.0
    z_kind: str = "const"
    k: float = 0.0
    coef: float = 1.0

    def _g(self, z, order):
        if self.z_kind == "const":
            one = np.ones_like(z)
            return one if order == 0 else np.zeros_like(z)
        k = self.k
        if self.z_kind == "sin":
            seq = (np.sin(k * z), k * np.cos(k * z), -(k**2) * np.sin(k * z))
        elif self.z_kind == "cos":
            seq = (np.cos(k * z), -k * np.sin(k * z), -(k**2) * np.cos(k * z))
        else:
            raise ConfigurationError(f"unknown z_kind {self.z_kind!r}")
        return seq[order]

    def _parts(self, rho, z, t, r_order=0, z_order=0):
        rfun = (self.radial.f, self.radial.df, self.radial.d2f)[r_order]
        return self.coef * math.exp(-self.mu * t) * rfun(rho) * self._g(z, z_order)

    def val(self, rho, z, t):
        return self._parts(rho, z, t)

    def d_t(self, rho, z, t):
        return -self.mu * self._parts(rho, z, t)

    def d_rho(self, rho, z, t):
        return self._parts(rho, z, t, r_order=1)

    def d2_rho(self, rho, z, t):
        return self._parts(rho, z, t, r_order=2)

    def d_z(self, rho, z, t):
        return self._parts(rho, z, t, z_order=1)

    def d2_z(self, rho, z, t):
        return self._parts(rho, z, t, z_order=2)


class AnalyticField:
    """Sum of separable terms, with all partials used by the assembly."""

    def __init__(self, terms=()):
        self.terms = list(terms)

    def _sum(self, name, rho, z, t):
        if not self.terms:
            return np.zeros(np.broadcast(rho, z).shape)
        return sum(getattr(term, name)(rho, z, t) for term in self.terms)

    def val(self, rho, z, t):
        return self._sum("val", rho, z, t)

    def d_t(self, rho, z, t):
        return self._sum("d_t", rho, z, t)

    def d_rho(self, rho, z, t):
        return self._sum("d_rho", rho, z, t)

    def d2_rho(self, rho, z, t):
        return self._sum("d2_rho", rho, z, t)

    def d_z(self, rho, z, t):
        return self._sum("d_z", rho, z, t)

    def d2_z(self, rho, z, t):
        return self._sum("d2_z", rho, z, t)


class SwirlPressure:
    """Centrifugal pressure of a z-independent swirl: d_rho p = u_phi^2 / rho.

    Values come from fixed Gauss-Legendre quadrature of the defining
    integral; only the derivatives enter the forcing assembly.
    """

    _NODES = 96

    def __init__(self, swirl: AnalyticField):
        self.swirl = swirl
        self._x, self._w = np.polynomial.legendre.leggauss(self._NODES)

    def val(self, rho, z, t):
        rho = np.asarray(rho, dtype=float)
        flat = rho.reshape(-1)
        # map [-1, 1] -> [tiny, rho] per target point
        half = 0.5 * flat[:, None]
        r = half * (self._x[None, :] + 1.0)
        r = np.maximum(r, 1e-300)
        integrand = self.swirl.val(r, np.zeros_like(r), t) ** 2 / r
        vals = np.sum(integrand * self._w[None, :], axis=1) * half[:, 0]
        return np.broadcast_to(vals.reshape(rho.shape), np.broadcast(rho, z).shape).copy()

    def d_rho(self, rho, z, t):
        return self.swirl.val(rho, z, t) ** 2 / rho

    def d_z(self, rho, z, t):
        return np.zeros(np.broadcast(rho, z).shape)


@dataclass
class ManufacturedSolution:
    kind: str
    params: dict
    u_rho: AnalyticField
    u_phi: AnalyticField
    u_z: AnalyticField
    p: object
    steady: bool = False
    noslip: bool = True
    homogeneous_nu: float | None = None  # nu for which the forcing vanishes
    meta: dict = field(default_factory=dict)

    def curl(self, rho, z, t):
        """Analytic vorticity components."""
        w_rho = -self.u_phi.d_z(rho, z, t)
        w_phi = self.u_rho.d_z(rho, z, t) - self.u_z.d_rho(rho, z, t)
        w_z = self.u_phi.d_rho(rho, z, t) + self.u_phi.val(rho, z, t) / rho
        return w_rho, w_phi, w_z


KINDS = ("rigid_rotation", "decaying_swirl", "taylor_vortex_swirl")


def make_solution(kind, params=None) -> ManufacturedSolution:
    params = dict(params or {})
    if kind == "rigid_rotation":
        omega = params.setdefault("omega", 1.0)
        rho_max = params.setdefault("rho_max", 2.0)
        u_phi = AnalyticField([Term(RadialProfile.from_poly(Polynomial([0.0, omega])))])
        p = AnalyticField(
            [Term(RadialProfile.from_poly(Polynomial([0.0, 0.0, 0.5 * omega**2])))]
        )
        return ManufacturedSolution(
            kind, params, AnalyticField(), u_phi, AnalyticField(), p,
            steady=True, noslip=False, homogeneous_nu=math.inf,
            meta={"rho_max": rho_max},
        )
    if kind == "decaying_swirl":
        amp = params.setdefault("amplitude", 1.0)
        nu = params.setdefault("nu", 0.1)
        rho_max = params.setdefault("rho_max", 2.0)
        lam = float(jn_zeros(1, 1)[0]) / rho_max
        mu = nu * lam**2
        profile = _bessel_j1_profile(lam)
        u_phi = AnalyticField([Term(profile, mu=mu, coef=amp)])
        return ManufacturedSolution(
            kind, params, AnalyticField(), u_phi, AnalyticField(),
            SwirlPressure(u_phi), steady=False, noslip=True,
            homogeneous_nu=nu, meta={"lambda": lam, "rho_max": rho_max},
        )
    if kind == "taylor_vortex_swirl":
        amp = params.setdefault("amplitude", 0.3)
        swirl = params.setdefault("swirl", 0.5)
        swirl_z = params.setdefault("swirl_z", 0.5)
        p_amp = params.setdefault("p_amp", 0.2)
        mu = params.setdefault("decay", 0.5)
        rho_max = params.setdefault("rho_max", 2.0)
        z_min = params.setdefault("z_min", 0.0)
        z_max = params.setdefault("z_max", 1.0)
        k = 2.0 * math.pi / (z_max - z_min)
        # w(rho) = (1 - (rho/R)^2)^3: triple zero at the wall keeps the
        # mirror-zero ghosts fourth-order accurate there
        w = Polynomial([1.0, 0.0, -1.0 / rho_max**2]) ** 3
        rho_poly = Polynomial([0.0, 1.0])
        rho_w = rho_poly * w
        uz_profile = 2.0 * w + rho_poly * w.deriv()
        u_rho = AnalyticField(
            [Term(RadialProfile.from_poly(-k * rho_w), mu=mu, z_kind="cos", k=k, coef=amp)]
        )
        u_z = AnalyticField(
            [Term(RadialProfile.from_poly(uz_profile), mu=mu, z_kind="sin", k=k, coef=amp)]
        )
        u_phi = AnalyticField(
            [
                Term(RadialProfile.from_poly(rho_w), mu=mu, coef=swirl),
                Term(RadialProfile.from_poly(rho_w), mu=mu, z_kind="cos", k=k,
                     coef=swirl * swirl_z),
            ]
        )
        p = AnalyticField(
            [Term(RadialProfile.from_poly(rho_poly**2 * w), mu=2.0 * mu,
                  z_kind="cos", k=k, coef=p_amp)]
        )
        return ManufacturedSolution(
            kind, params, u_rho, u_phi, u_z, p, steady=False, noslip=True,
            homogeneous_nu=None, meta={"k": k, "rho_max": rho_max},
        )
    raise ConfigurationError(f"unknown manufactured solution kind {kind!r}")


# --- sampling and forcing -------------------------------------------------

def sample_state(sol: ManufacturedSolution, grid: CylGrid, t) -> VelocityState:
    rho, z = grid.meshgrid()
    return VelocityState(
        ScalarSample(sol.u_rho.val(rho, z, t), grid),
        ScalarSample(sol.u_phi.val(rho, z, t), grid),
        ScalarSample(sol.u_z.val(rho, z, t), grid),
        ScalarSample(sol.p.val(rho, z, t), grid),
        float(t),
    )


def forcing_components(sol: ManufacturedSolution, nu, rho, z, t):
    """Analytic (h_rho, h_phi, h_z) closing the momentum equations."""
    ur, uh, uz, p = sol.u_rho, sol.u_phi, sol.u_z, sol.p

    ur_v = ur.val(rho, z, t)
    uh_v = uh.val(rho, z, t)
    uz_v = uz.val(rho, z, t)

    def visc(fieldv, v, odd):
        lap = (
            fieldv.d2_rho(rho, z, t) + fieldv.d_rho(rho, z, t) / rho
            + fieldv.d2_z(rho, z, t)
        )
        if odd:
            lap = lap - v / rho**2
        return lap

    h_rho = (
        ur.d_t(rho, z, t)
        + ur_v * ur.d_rho(rho, z, t) + uz_v * ur.d_z(rho, z, t)
        - uh_v**2 / rho + p.d_rho(rho, z, t)
        - nu * visc(ur, ur_v, odd=True)
    )
    h_phi = (
        uh.d_t(rho, z, t)
        + ur_v * uh.d_rho(rho, z, t) + uz_v * uh.d_z(rho, z, t)
        + uh_v * ur_v / rho
        - nu * visc(uh, uh_v, odd=True)
    )
    h_z = (
        uz.d_t(rho, z, t)
        + ur_v * uz.d_rho(rho, z, t) + uz_v * uz.d_z(rho, z, t)
        + p.d_z(rho, z, t)
        - nu * visc(uz, uz_v, odd=False)
    )
    return h_rho, h_phi, h_z


def forcing_for(sol: ManufacturedSolution, nu, grid: CylGrid, t) -> ForcingFields:
    """Forcing sampled on the grid at time t."""
    if sol.homogeneous_nu is not None and (
        math.isinf(sol.homogeneous_nu) or math.isclose(sol.homogeneous_nu, nu)
    ):
        return zero_forcing(grid)
    rho, z = grid.meshgrid()
    h_rho, h_phi, h_z = forcing_components(sol, nu, rho, z, t)
    return ForcingFields(
        ScalarSample(h_rho, grid), ScalarSample(h_phi, grid), ScalarSample(h_z, grid)
    )


def forcing_callable(sol: ManufacturedSolution, nu, grid: CylGrid):
    return lambda t: forcing_for(sol, nu, grid, t)


# --- convergence studies --------------------------------------------------

def lopsided_curl(v: VelocityState) -> np.ndarray:
    """Negative-control fixture: w_z from a one-sided radial difference.

    First-order by construction; convergence studies must detect it.
    """
    g = v.grid
    uh = v.u_phi.values
    ghost = -uh[-1:]
    fwd = (np.concatenate([uh[1:], ghost], axis=0) - uh) / g.d_rho
    return fwd + uh / g.rho


def _interior(arr):
    """Drop the outermost radial ring (wall ghosts are boundary-condition
    dependent and excluded from operator exactness measures)."""
    return arr[:-1, :]


def _max_err(a, b):
    return float(np.max(np.abs(_interior(a) - _interior(b))))


def _l2_err(a, b, grid: CylGrid):
    d = _interior(a) - _interior(b)
    w = grid.cell_weight[:-1]
    return float(np.sqrt(np.sum(w * d * d)))


def default_dt_rule(nu, safety=0.1):
    def rule(grid: CylGrid):
        delta = min(grid.d_rho, grid.d_z)
        return safety * delta**2 / nu

    return rule


def convergence_order(sol: ManufacturedSolution, grids, dt_rule=None,
                      quantity="solver", nu=0.1, t0=0.0, t_end=0.05):
    """Refinement study; returns {"errors": [...], "orders": [...], ...}.

    quantity selects what is measured:
      solver        end-time velocity error of a forced solver run
      operator      momentum_rhs tendency against the analytic d_t u
      curl          discrete curl against the analytic curl
      divergence    max |div| of the sampled field
      lopsided_curl the first-order negative-control stencil
    """
    if len(grids) < 2:
        raise ConfigurationError("need at least two grid levels")
    if dt_rule is None:
        dt_rule = default_dt_rule(nu)
    errors = []
    for grid in grids:
        rho, z = grid.meshgrid()
        if quantity == "solver":
            dt = dt_rule(grid)
            cfg = SimConfig(
                n_rho=grid.n_rho, n_z=grid.n_z, rho_max=grid.rho_max,
                z_min=grid.z_min, z_max=grid.z_max, nu=nu,
                t_start=t0, t_end=t_end, dt=dt, checkpoint_stride=10**9,
            )
            traj = run(cfg, sample_state(sol, grid, t0),
                       forcing_at=forcing_callable(sol, nu, grid))
            if traj.failed:
                raise ConfigurationError(f"solver failed: {traj.failure_reason}")
            final = traj.checkpoints[-1]
            t = final.time
            err = max(
                _max_err(final.u_rho.values, sol.u_rho.val(rho, z, t)),
                _max_err(final.u_phi.values, sol.u_phi.val(rho, z, t)),
                _max_err(final.u_z.values, sol.u_z.val(rho, z, t)),
            )
        elif quantity == "operator":
            state = sample_state(sol, grid, t0)
            f = forcing_for(sol, nu, grid, t0)
            tend = momentum_rhs(state, f, nu)
            # volume-weighted L2: single boundary-adjacent rows carry
            # vanishing measure, matching the norm the time integration sees
            err = max(
                _l2_err(tend[0].values, sol.u_rho.d_t(rho, z, t0), grid),
                _l2_err(tend[1].values, sol.u_phi.d_t(rho, z, t0), grid),
                _l2_err(tend[2].values, sol.u_z.d_t(rho, z, t0), grid),
            )
        elif quantity == "curl":
            state = sample_state(sol, grid, t0)
            w = curl_axisym(state)
            wr, wh, wz = sol.curl(rho, z, t0)
            err = max(
                _max_err(w.w_rho.values, wr),
                _max_err(w.w_phi.values, wh),
                _max_err(w.w_z.values, wz),
            )
        elif quantity == "divergence":
            state = sample_state(sol, grid, t0)
            err = float(np.max(np.abs(_interior(divergence(state).values))))
        elif quantity == "lopsided_curl":
            state = sample_state(sol, grid, t0)
            _, _, wz = sol.curl(rho, z, t0)
            err = _max_err(lopsided_curl(state), wz)
        else:
            raise ConfigurationError(f"unknown quantity {quantity!r}")
        errors.append(err)
    orders = [
        math.log2(errors[i] / errors[i + 1]) if errors[i + 1] > 0 else math.inf
        for i in range(len(errors) - 1)
    ]
    return {"quantity": quantity, "errors": errors, "orders": orders}


def grid_levels(base, levels, rho_max=2.0, z_min=0.0, z_max=1.0):
    return [
        build_grid(base * 2**i, base * 2**i, rho_max, z_min, z_max)
        for i in range(levels)
    ]
