"""Per-checkpoint evaluation of the swirl regularity estimates.

Given consecutive solver checkpoints this module evaluates every
monitored quantity of the estimate chain: the growth coefficient d(t)
built from the negative part of the radial velocity, the weighted
swirl-norm budget with all of its intermediate Holder/Young steps, the
epsilon-weighted azimuthal-vorticity budget and its epsilon -> 0 limit,
the quartic swirl identity and its Young-absorbed inequality, the
Gronwall envelope, and the blow-up indicator time series.

Two classes of checks are distinguished throughout:

* constant-free discrete inequalities (Holder, Young, Cauchy-Schwarz on
  quadrature sums) hold exactly up to rounding and are asserted with a
  relative tolerance around 1e-12;
* assembled budget margins depend on empirical constants (c_grow,
  c_sob, c3) that the estimate chain does not pin down, so they are
  reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .exponents import ExponentSet
from .fields import (
    EVEN,
    EXTRAP,
    NOSLIP,
    ODD,
    ForcingFields,
    VelocityState,
    curl_axisym,
    d_rho,
    d_z,
    grad_squared,
    velocity_grad_l2,
)
from .grid import CylGrid, ScalarSample, serrin_accumulate, weighted_lq_norm


# --- configuration --------------------------------------------------------

DEFAULT_EPSILON_LIST = (0.4, 0.2, 0.1, 0.04, 0.0)


@dataclass
class MonitorConfig:
    """Constants and exponents for the estimate monitor.

    c_sob is the empirical embedding constant in
    ||u_phi||_{3q}^q <= c_sob * integral |grad(u_phi^{q/2})|^2 (see
    calibrate_sobolev).  c_grow defaults to the coefficient the
    absorption steps produce for the d(t) growth term; c3 bounds the
    absorbed vorticity-forcing term and defaults to 0 (exact for
    unforced vorticity).
    """

    exponents: ExponentSet
    nu: float
    c_sob: float
    q: int = 4
    epsilon_list: tuple = DEFAULT_EPSILON_LIST
    c_grow: float | None = None
    c3: float = 0.0
    tolerances: dict = field(default_factory=lambda: {
        "sub_margin_rel": 1e-12,
        "envelope_rel": 1e-6,
        "serrin_rel": 1e-10,
    })

    def __post_init__(self):
        if self.q < 2 or self.q % 2 != 0:
            raise ConfigurationError(f"q must be an even integer >= 2, got {self.q}")
        if not (self.nu > 0.0):
            raise ConfigurationError(f"nu must be positive, got {self.nu}")
        if not (self.c_sob > 0.0):
            raise ConfigurationError(f"c_sob must be positive, got {self.c_sob}")
        eps = tuple(float(e) for e in self.epsilon_list)
        if any(not (0.0 <= e < 1.0) for e in eps):
            raise ConfigurationError("every epsilon must lie in [0, 1)")
        if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
            raise ConfigurationError("epsilon_list must be strictly decreasing")
        if eps and eps[-1] != 0.0:
            raise ConfigurationError("epsilon_list must end with the limit value 0")
        self.epsilon_list = eps
        if self.c_grow is None:
            self.c_grow = self.default_c_grow()
        if not (self.c_grow > 0.0):
            raise ConfigurationError(f"c_grow must be positive, got {self.c_grow}")

    @property
    def eps1(self) -> float:
        """First absorption parameter: q*eps1/p eats half of nu*q*I2."""
        return self.nu * self.exponents.p_hold / 2.0

    @property
    def eps2(self) -> float:
        """Second absorption parameter: the Sobolev-embedded term eats
        half of the nu*4(q-1)/q gradient dissipation."""
        e = self.exponents
        p, s, q = e.p_hold, e.s, float(self.q)
        return (2.0 * self.nu * (q - 1.0) / q) * s * p \
            * self.eps1 ** (1.0 / (p - 1.0)) / (3.0 * (p - 1.0) * q * self.c_sob)

    def default_c_grow(self) -> float:
        """Coefficient of the Serrin-integrand growth term after both
        absorptions, scaled by q from the q-fold norm estimate."""
        e = self.exponents
        p, s, q = e.p_hold, e.s, float(self.q)
        return q * (p - 1.0) * (s - 3.0) / (s * p) \
            * self.eps1 ** (1.0 / (1.0 - p)) * self.eps2 ** (3.0 / (3.0 - s))


def probe_fields(grid: CylGrid):
    """Deterministic swirl probes vanishing at the wall, used for the
    embedding-constant calibration."""
    rho, z = grid.meshgrid()
    r = rho / grid.rho_max
    two_pi_z = 2.0 * math.pi * (z - grid.z_min) / (grid.z_max - grid.z_min)
    probes = []
    for k in (1, 2, 3):
        base = rho * (1.0 - r**2) ** k
        probes.append(base)
        probes.append(base * (1.0 + 0.5 * np.cos(two_pi_z)))
    probes.append(rho * (1.0 - r) ** 2 * (1.0 + 0.25 * np.sin(two_pi_z)))
    return probes


def calibrate_sobolev(grid: CylGrid, q: int = 4) -> float:
    """Empirical constant c_sob with ||u||_{3q}^q <= c_sob * integral
    |grad(u^{q/2})|^2, taken as the max Rayleigh quotient over the
    fixed probe family (reported, not proven)."""
    if q < 2 or q % 2 != 0:
        raise ConfigurationError(f"q must be an even integer >= 2, got {q}")
    parity = ODD if (q // 2) % 2 == 1 else EVEN
    best = 0.0
    for u in probe_fields(grid):
        w = u ** (q // 2)
        num = _integ(np.abs(w) ** 6, grid) ** (1.0 / 3.0)
        den = _integ(grad_squared(w, grid, parity, NOSLIP), grid)
        if den > 0.0:
            best = max(best, num / den)
    return best


def monitor_for(grid: CylGrid, exponents: ExponentSet, nu: float, q: int = 4,
                **kwargs) -> MonitorConfig:
    """MonitorConfig with c_sob calibrated on the given grid."""
    c_sob = kwargs.pop("c_sob", None)
    if c_sob is None:
        c_sob = calibrate_sobolev(grid, q)
    return MonitorConfig(exponents=exponents, nu=nu, c_sob=c_sob, q=q, **kwargs)


# --- basic functionals ----------------------------------------------------

def _integ(vals, grid: CylGrid) -> float:
    return float(np.sum(vals * grid.cell_weight))


def negative_part(u_rho: np.ndarray) -> np.ndarray:
    """u_rho^-(x) = max(-u_rho(x), 0) >= 0."""
    return np.maximum(-u_rho, 0.0)


def serrin_integrand(v: VelocityState, e: ExponentSet) -> float:
    """integral (u_rho^-)^alpha rho^beta dx, the spatial factor of both
    d(t) and the running Serrin accumulator."""
    g = v.grid
    un = negative_part(v.u_rho.values)
    return _integ(un ** e.alpha * g.rho ** e.beta, g)


def d_of_t(v: VelocityState, m: MonitorConfig) -> float:
    """Growth coefficient d(t) = q + c_grow * (integral (u_rho^-)^alpha
    rho^beta dx)^theta; equals q exactly when u_rho >= 0 everywhere."""
    s_int = serrin_integrand(v, m.exponents)
    return float(m.q) + m.c_grow * s_int ** m.exponents.theta


def transport_cancellation(v: VelocityState, q: int) -> float:
    """Discrete value of integral u_rho d_rho(u_phi^q) + u_z d_z(u_phi^q),
    which vanishes for divergence-free fields; O(Delta^2) on projected
    states."""
    if q < 2 or q % 2 != 0:
        raise ContractViolation(f"q must be an even integer >= 2, got {q}")
    g = v.grid
    uq = v.u_phi.values ** q  # even power: even across the axis, 0 at wall
    val = v.u_rho.values * d_rho(uq, g, EVEN, NOSLIP) + v.u_z.values * d_z(uq, g)
    return _integ(val, g)


def _swirl_power_parity(q_half: int):
    return ODD if q_half % 2 == 1 else EVEN


def swirl_gradient_dissipation(v: VelocityState, q: int) -> float:
    """integral |grad(u_phi^{q/2})|^2 dx."""
    g = v.grid
    w = v.u_phi.values ** (q // 2)
    return _integ(grad_squared(w, g, _swirl_power_parity(q // 2), NOSLIP), g)


def swirl_axis_dissipation(v: VelocityState, q: int) -> float:
    """integral u_phi^q / rho^2 dx."""
    g = v.grid
    return _integ(v.u_phi.values ** q / g.rho**2, g)


# --- Step-1 budget --------------------------------------------------------

@dataclass(frozen=True)
class SwirlBudget:
    """Signed margin of the weighted swirl-norm inequality plus the
    margins (and scales, for relative tolerance) of every intermediate
    Holder/Young step, each of which is an exact discrete inequality."""

    margin: float
    d_t: float
    swirl_q_norm: float
    forcing_q_norm: float
    gradient_dissipation: float
    axis_dissipation: float
    sub_margins: dict
    sub_scales: dict


def swirl_lq_budget(prev: VelocityState, nxt: VelocityState,
                    f: ForcingFields, m: MonitorConfig) -> SwirlBudget:
    """Margin of the q-norm growth inequality across one checkpoint pair.

    Instantaneous terms are evaluated on the earlier state (forward
    difference in time).  The final margin depends on c_grow/c_sob and
    is reported; the six sub-margins are exact and must be >=
    -tolerance * scale.
    """
    g = prev.grid
    if nxt.time <= prev.time:
        raise ContractViolation("checkpoints must be in increasing time order")
    dt = nxt.time - prev.time
    q = m.q
    e = m.exponents
    p, s = e.p_hold, e.s
    nu = m.nu

    uh = prev.u_phi.values
    h = f.h_phi.values
    n_prev = _integ(uh**q, g)
    n_next = _integ(nxt.u_phi.values**q, g)
    h_q = _integ(np.abs(h) ** q, g)
    grad_diss = swirl_gradient_dissipation(prev, q)
    axis_diss = swirl_axis_dissipation(prev, q)
    d_t = d_of_t(prev, m)

    margin = (h_q + d_t * n_prev) - (
        (n_next - n_prev) / dt
        + nu * (2.0 * (q - 1.0) / q) * grad_diss
        + nu * q / 2.0 * axis_diss
    )

    # exact intermediate inequalities, evaluated on the earlier state
    sub_m, sub_s = {}, {}

    def record(name, lhs, rhs):
        sub_m[name] = rhs - lhs
        sub_s[name] = max(abs(lhs), abs(rhs))

    # forcing Young step: int |h| |u|^{q-1} against (1/q)((q-1)/q)^{q-1}
    # ||h||_q^q + ||u||_q^q
    lhs = _integ(np.abs(h) * np.abs(uh) ** (q - 1), g)
    rhs = (1.0 / q) * ((q - 1.0) / q) ** (q - 1) * h_q + n_prev
    record("young_forcing", lhs, rhs)

    un = negative_part(prev.u_rho.values)
    t1 = _integ(un / g.rho * uh**q, g)
    y1 = _integ(
        un ** (p / (p - 1.0)) * uh**q * g.rho ** ((2.0 - p) / (p - 1.0)), g
    )
    i2 = axis_diss
    record("holder_p", t1, y1 ** ((p - 1.0) / p) * i2 ** (1.0 / p))

    eps1 = m.eps1
    record(
        "young_eps1",
        y1 ** ((p - 1.0) / p) * i2 ** (1.0 / p),
        p / (p - 1.0) * eps1 ** (1.0 / (1.0 - p)) * y1 + eps1 / p * i2,
    )

    s_int = serrin_integrand(prev, e)
    mid = _integ(np.abs(uh) ** (q * s / (s - 2.0)), g) ** ((s - 2.0) / s)
    record("holder_s_half", y1, s_int ** (2.0 / s) * mid)

    n_3q = _integ(np.abs(uh) ** (3 * q), g) ** (1.0 / 3.0)  # ||u||_{3q}^q
    record(
        "holder_inner",
        mid,
        n_prev ** ((s - 3.0) / s) * n_3q ** (3.0 / s),
    )

    eps2 = m.eps2
    record(
        "young_eps2",
        s_int ** (2.0 / s) * n_prev ** ((s - 3.0) / s) * n_3q ** (3.0 / s),
        3.0 / s * eps2 * n_3q
        + (s - 3.0) / s * eps2 ** (3.0 / (3.0 - s))
        * s_int ** (2.0 / (s - 3.0)) * n_prev,
    )

    return SwirlBudget(
        margin=margin,
        d_t=d_t,
        swirl_q_norm=n_prev ** (1.0 / q),
        forcing_q_norm=h_q ** (1.0 / q),
        gradient_dissipation=grad_diss,
        axis_dissipation=axis_diss,
        sub_margins=sub_m,
        sub_scales=sub_s,
    )


# --- Step-2 budget --------------------------------------------------------

def weighted_vorticity_energy(v: VelocityState, eps: float = 0.0) -> float:
    """(1/2) integral omega_phi^2 / rho^{2-eps} dx."""
    g = v.grid
    wh = curl_axisym(v).w_phi.values
    return 0.5 * _integ(wh**2 / g.rho ** (2.0 - eps), g)


def vorticity_dissipation(v: VelocityState, eps: float = 0.0) -> float:
    """integral |grad(omega_phi / rho^{1-eps})|^2 rho^{-eps} dx."""
    g = v.grid
    wh = curl_axisym(v).w_phi.values
    fld = wh / g.rho ** (1.0 - eps)  # odd/odd-like: even across the axis
    return _integ(grad_squared(fld, g, EVEN, EXTRAP) * g.rho ** (-eps), g)


@dataclass(frozen=True)
class VorticityBudget:
    margin: float
    eps: float
    energy_rate: float
    dissipation: float
    quartic_source: float
    radial_source: float
    curvature_term: float
    forcing_pairing: float


def weighted_vorticity_budget(prev: VelocityState, nxt: VelocityState,
                              g_force: ForcingFields, m: MonitorConfig,
                              eps: float) -> VorticityBudget:
    """Signed margin of the eps-weighted azimuthal-vorticity inequality;
    eps = 0 evaluates the limit form directly (all weights finite on the
    axis-offset grid).

    The vorticity forcing enters the inequality only through the
    absorbed constant c3; its raw pairing integral |g_phi| |omega| /
    rho^{2-eps} is reported alongside so the adequacy of c3 is visible.
    """
    if not (0.0 <= eps < 1.0):
        raise ContractViolation(f"eps must lie in [0, 1), got {eps}")
    if nxt.time <= prev.time:
        raise ContractViolation("checkpoints must be in increasing time order")
    g = prev.grid
    dt = nxt.time - prev.time
    nu = m.nu

    rate = (weighted_vorticity_energy(nxt, eps)
            - weighted_vorticity_energy(prev, eps)) / dt
    diss = vorticity_dissipation(prev, eps)
    wh = curl_axisym(prev).w_phi.values
    uh = prev.u_phi.values
    ur = prev.u_rho.values
    quartic = 1.0 / (2.0 * nu) * _integ(uh**4 / g.rho ** (4.0 - eps), g)
    radial = eps / 2.0 * _integ(
        np.abs(ur) / g.rho * wh**2 / g.rho ** (2.0 - eps), g
    )
    curvature = nu * eps / 2.0 * (eps - 2.0) * _integ(
        wh**2 / g.rho ** (4.0 - eps), g
    )
    if g_force.g_phi is not None:
        pairing = _integ(
            np.abs(g_force.g_phi.values) * np.abs(wh) / g.rho ** (2.0 - eps), g
        )
    else:
        pairing = 0.0
    margin = (quartic + radial + curvature + m.c3) - (rate + nu / 4.0 * diss)
    return VorticityBudget(
        margin=margin, eps=eps, energy_rate=rate, dissipation=diss,
        quartic_source=quartic, radial_source=radial,
        curvature_term=curvature, forcing_pairing=pairing,
    )


def vorticity_margin_sequence(prev, nxt, g_force, m: MonitorConfig):
    """Margins over the configured epsilon list, ending at the limit 0."""
    return [
        weighted_vorticity_budget(prev, nxt, g_force, m, eps)
        for eps in m.epsilon_list
    ]


# --- Step-3 budget --------------------------------------------------------

def quartic_swirl_energy(v: VelocityState) -> float:
    """integral u_phi^4 / rho^2 dx."""
    g = v.grid
    return _integ(v.u_phi.values**4 / g.rho**2, g)


def quartic_axis_energy(v: VelocityState) -> float:
    """integral u_phi^4 / rho^4 dx."""
    g = v.grid
    return _integ(v.u_phi.values**4 / g.rho**4, g)


def quartic_gradient_dissipation(v: VelocityState) -> float:
    """integral |grad(u_phi^2 / rho)|^2 dx."""
    g = v.grid
    fld = v.u_phi.values**2 / g.rho  # odd^2 / odd: odd across the axis
    return _integ(grad_squared(fld, g, ODD, NOSLIP), g)


@dataclass(frozen=True)
class QuarticBudget:
    margin: float
    identity_residual: float
    identity_scale: float
    quartic_energy: float
    axis_energy: float
    gradient_dissipation: float


def quartic_swirl_budget(prev: VelocityState, nxt: VelocityState,
                         f: ForcingFields, m: MonitorConfig) -> QuarticBudget:
    """Quartic swirl balance across one checkpoint pair.

    identity_residual is the defect of the exact quartic identity
    (an equality up to O(Delta_t + Delta^2) on smooth trajectories):

        (1/4) d/dt int u^4/rho^2 + (3/2) int u_rho u^4/rho^3
        + 3 nu int [(d_rho u)^2 + (d_z u)^2] u^2/rho^2
        = int h u^3/rho^2.

    margin is the signed Young-absorbed inequality with the explicit
    constant 27/(4 nu^3) on the forcing term (reported, not asserted):

        [(3/2) int u^4 u_rho^- /rho^3 + 27/(4 nu^3) int rho^4 h^4]
        - [(1/4) d/dt int u^4/rho^2 + (3/4) nu int |grad(u^2/rho)|^2
           + (nu/2) int u^4/rho^4].
    """
    if nxt.time <= prev.time:
        raise ContractViolation("checkpoints must be in increasing time order")
    g = prev.grid
    dt = nxt.time - prev.time
    nu = m.nu
    uh = prev.u_phi.values
    ur = prev.u_rho.values
    h = f.h_phi.values

    q2_prev = quartic_swirl_energy(prev)
    q2_next = quartic_swirl_energy(nxt)
    rate = 0.25 * (q2_next - q2_prev) / dt
    transport = 1.5 * _integ(ur * uh**4 / g.rho**3, g)
    grad_term = 3.0 * nu * _integ(
        (d_rho(uh, g, ODD, NOSLIP) ** 2 + d_z(uh, g) ** 2) * uh**2 / g.rho**2, g
    )
    forcing = _integ(h * uh**3 / g.rho**2, g)
    residual = rate + transport + grad_term - forcing
    scale = max(abs(rate), abs(transport), abs(grad_term), abs(forcing), 1e-300)

    un = negative_part(ur)
    source = 1.5 * _integ(uh**4 * un / g.rho**3, g)
    young = 27.0 / (4.0 * nu**3) * _integ(g.rho**4 * h**4, g)
    margin = (source + young) - (
        rate + 0.75 * nu * quartic_gradient_dissipation(prev)
        + 0.5 * nu * quartic_axis_energy(prev)
    )
    return QuarticBudget(
        margin=margin,
        identity_residual=residual,
        identity_scale=scale,
        quartic_energy=q2_prev,
        axis_energy=quartic_axis_energy(prev),
        gradient_dissipation=quartic_gradient_dissipation(prev),
    )


# --- Gronwall envelope and records ----------------------------------------

@dataclass
class DiagnosticsRecord:
    """One row of monitor output per checkpoint.

    Pair-based quantities (margins, rates) describe the interval ending
    at this checkpoint and are absent (NaN / empty) on the first record
    of a trajectory.
    """

    time: float
    swirl_q_norm: float
    d_t: float
    serrin_running: float
    forcing_q_norm: float
    weighted_vort_energy: float
    quartic_swirl_r2: float
    quartic_swirl_r4: float
    dissipation_swirl_grad: float
    dissipation_swirl_axis: float
    dissipation_vort: float
    dissipation_quartic: float
    grad_u_l2: float
    vort_l2: float
    transport_cancellation: float
    f_indicator: float
    gronwall_envelope: float = math.nan
    margins: dict = field(default_factory=dict)
    truncated: bool = False

    def __post_init__(self):
        for name in ("swirl_q_norm", "serrin_running", "weighted_vort_energy",
                     "quartic_swirl_r2", "quartic_swirl_r4", "grad_u_l2",
                     "vort_l2"):
            val = getattr(self, name)
            if not self.truncated and val < 0.0:
                raise ContractViolation(f"{name} must be nonnegative, got {val}")


def gronwall_envelope(records, m: MonitorConfig):
    """Pointwise envelope exp(int d) * ||u_phi(t_start)||_q^q +
    (t - t_start) * sup_s ||h_phi(s)||_q^q * exp(int d), with the d(t)
    integral accumulated by the trapezoid rule over the records."""
    if not records:
        return []
    t0 = records[0].time
    n0 = records[0].swirl_q_norm ** m.q
    out = []
    int_d = 0.0
    sup_h = 0.0
    prev = None
    for r in records:
        if prev is not None:
            int_d += 0.5 * (prev.d_t + r.d_t) * (r.time - prev.time)
        sup_h = max(sup_h, r.forcing_q_norm ** m.q)
        grow = math.exp(int_d)
        out.append(grow * n0 + (r.time - t0) * sup_h * grow)
        prev = r
    return out


def blowup_indicator(records) -> dict:
    """Summary of the Step-4 quantities over a record sequence: the
    indicator F(t), the vorticity L2 norm and its running time integral,
    and the velocity-gradient L2 norm.  Reports values only; no
    regularity claim is encoded."""
    finite = [r for r in records if not r.truncated]
    report = {
        "truncated": any(r.truncated for r in records),
        "window_end": records[-1].time if records else math.nan,
        "last_finite_time": finite[-1].time if finite else math.nan,
    }
    if not finite:
        report.update({
            "f_max": math.nan, "f_final": math.nan, "vort_l2_max": math.nan,
            "vort_l2_time_integral": math.nan, "grad_u_l2_max": math.nan,
        })
        return report
    times = [r.time for r in finite]
    vort = [r.vort_l2 for r in finite]
    report["f_max"] = max(r.f_indicator for r in finite)
    report["f_final"] = finite[-1].f_indicator
    report["vort_l2_max"] = max(vort)
    report["vort_l2_time_integral"] = float(np.trapezoid(vort, times)) \
        if len(finite) > 1 else 0.0
    report["grad_u_l2_max"] = max(r.grad_u_l2 for r in finite)
    return report


def _finite_state(v: VelocityState) -> bool:
    return all(
        np.all(np.isfinite(s.values)) for s in (v.u_rho, v.u_phi, v.u_z)
    )


def collect_diagnostics(checkpoints, m: MonitorConfig, forcing_at=None):
    """Assemble the time-ordered DiagnosticsRecord sequence for a list of
    checkpoints.

    forcing_at(t) -> ForcingFields; defaults to zero forcing.  Margins
    for the interval (t_i, t_{i+1}) are stored on the later record.  A
    non-finite checkpoint produces a terminal truncated record.
    """
    if not checkpoints:
        return []
    g = checkpoints[0].grid
    if forcing_at is None:
        from .fields import zero_forcing

        zf = zero_forcing(g)
        forcing_at = lambda t: zf  # noqa: E731
    e = m.exponents
    records = []
    serrin = 0.0
    prev = None
    for v in checkpoints:
        if not _finite_state(v):
            records.append(DiagnosticsRecord(
                time=v.time, swirl_q_norm=math.nan, d_t=math.nan,
                serrin_running=serrin, forcing_q_norm=math.nan,
                weighted_vort_energy=math.nan, quartic_swirl_r2=math.nan,
                quartic_swirl_r4=math.nan, dissipation_swirl_grad=math.nan,
                dissipation_swirl_axis=math.nan, dissipation_vort=math.nan,
                dissipation_quartic=math.nan, grad_u_l2=math.nan,
                vort_l2=math.nan, transport_cancellation=math.nan,
                f_indicator=math.nan, truncated=True,
            ))
            break
        f = forcing_at(v.time)
        w = curl_axisym(v)
        vort_l2 = math.sqrt(_integ(
            w.w_rho.values**2 + w.w_phi.values**2 + w.w_z.values**2, g
        ))
        if prev is not None:
            dt = v.time - prev.time
            neg = ScalarSample(negative_part(prev.u_rho.values), g)
            serrin = serrin_accumulate(serrin, neg, e.a, e.b, e.gamma, dt)
        wv = weighted_vorticity_energy(v)
        q2 = quartic_swirl_energy(v)
        rec = DiagnosticsRecord(
            time=v.time,
            swirl_q_norm=weighted_lq_norm(v.u_phi, m.q),
            d_t=d_of_t(v, m),
            serrin_running=serrin,
            forcing_q_norm=weighted_lq_norm(f.h_phi, m.q),
            weighted_vort_energy=wv,
            quartic_swirl_r2=q2,
            quartic_swirl_r4=quartic_axis_energy(v),
            dissipation_swirl_grad=swirl_gradient_dissipation(v, m.q),
            dissipation_swirl_axis=swirl_axis_dissipation(v, m.q),
            dissipation_vort=vorticity_dissipation(v),
            dissipation_quartic=quartic_gradient_dissipation(v),
            grad_u_l2=velocity_grad_l2(v),
            vort_l2=vort_l2,
            transport_cancellation=transport_cancellation(v, m.q),
            f_indicator=1.0 / (2.0 * m.nu**2) * q2 + wv,
        )
        if prev is not None:
            fp = forcing_at(prev.time)
            sb = swirl_lq_budget(prev, v, fp, m)
            qb = quartic_swirl_budget(prev, v, fp, m)
            rec.margins["swirl_budget"] = sb.margin
            for name, val in sb.sub_margins.items():
                rec.margins[name] = val
                rec.margins[name + "_scale"] = sb.sub_scales[name]
            rec.margins["quartic_budget"] = qb.margin
            rec.margins["quartic_identity_residual"] = qb.identity_residual
            for vb in vorticity_margin_sequence(prev, v, fp, m):
                rec.margins[f"vorticity_budget_eps_{vb.eps:g}"] = vb.margin
        records.append(rec)
        prev = v
    env = gronwall_envelope([r for r in records if not r.truncated], m)
    for r, val in zip(records, env):
        r.gronwall_envelope = val
    return records
