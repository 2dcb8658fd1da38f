"""Pressure projection and time integration."""

import math

import numpy as np
import pytest

from axiswirl.errors import CflViolation, ConfigurationError
from axiswirl.fields import div_adjoint, divergence, zero_state, ForcingFields
from axiswirl.grid import ScalarSample, build_grid
from axiswirl.solver import (
    SimConfig,
    cfl_limits,
    kinetic_energy,
    project,
    run,
    step,
)
from axiswirl import mms


def _div_norm(v):
    g = v.grid
    return float(np.sqrt(np.sum(g.rho * divergence(v).values ** 2)))


@pytest.fixture()
def taylor_state():
    sol = mms.make_solution("taylor_vortex_swirl", {})
    g = build_grid(32, 32)
    return mms.sample_state(sol, g, 0.0)


def test_projection_removes_divergence(taylor_state):
    before = _div_norm(taylor_state)
    projected, (iters, rel) = project(taylor_state)
    after = _div_norm(projected)
    assert after <= 1e-8 * before
    assert iters > 0 and rel <= 1e-8


def test_projection_idempotent(taylor_state):
    once, _ = project(taylor_state)
    twice, _ = project(once)
    scale = max(np.max(np.abs(once.u_rho.values)), np.max(np.abs(once.u_z.values)))
    drift = max(
        np.max(np.abs(twice.u_rho.values - once.u_rho.values)),
        np.max(np.abs(twice.u_z.values - once.u_z.values)),
    )
    assert drift <= 1e-12 * scale


def test_projection_annihilates_gradients():
    g = build_grid(32, 32)
    rho, z = g.meshgrid()
    phi = np.cos(2.0 * math.pi * z) * (1.0 - (rho / 2.0) ** 2) ** 2 + 0.3 * rho**2
    cr, cz = div_adjoint(phi, g)
    scale = max(np.max(np.abs(cr)), np.max(np.abs(cz)))
    v = zero_state(g).replace_fields(u_rho=cr, u_z=cz)
    projected, _ = project(v)
    residual = max(
        np.max(np.abs(projected.u_rho.values)),
        np.max(np.abs(projected.u_z.values)),
    )
    assert residual <= 1e-8 * scale


def test_projection_never_increases_energy(taylor_state):
    projected, _ = project(taylor_state)
    assert kinetic_energy(projected) <= kinetic_energy(taylor_state) * (1 + 1e-13)


def test_projection_preserves_swirl(taylor_state):
    projected, _ = project(taylor_state)
    assert np.array_equal(projected.u_phi.values, taylor_state.u_phi.values)


def test_cfl_limits_and_violation(taylor_state):
    cfg = SimConfig(n_rho=32, n_z=32, nu=0.1)
    adv, dif = cfl_limits(taylor_state, cfg.nu)
    assert adv > 0 and dif > 0
    with pytest.raises(CflViolation) as exc:
        step(taylor_state, cfg, 10.0 * min(adv, dif))
    assert exc.value.suggested_dt < min(adv, dif)


def test_sim_config_validation():
    with pytest.raises(ConfigurationError):
        SimConfig(t_start=1.0, t_end=0.5)
    with pytest.raises(ConfigurationError):
        SimConfig(dt=-0.1)
    with pytest.raises(ConfigurationError):
        SimConfig(nu=0.0)
    with pytest.raises(ConfigurationError):
        SimConfig(checkpoint_stride=0)


def test_run_deterministic():
    sol = mms.make_solution("decaying_swirl", {"nu": 0.1})
    g = build_grid(16, 8)
    cfg = SimConfig(n_rho=16, n_z=8, nu=0.1, t_end=0.02, dt=1e-3)
    t1 = run(cfg, mms.sample_state(sol, g, 0.0))
    t2 = run(cfg, mms.sample_state(sol, g, 0.0))
    assert len(t1.checkpoints) == len(t2.checkpoints)
    for i in range(len(t1.checkpoints)):
        assert t1.checkpoint_hash(i) == t2.checkpoint_hash(i)


def test_run_truncates_on_blowup():
    g = build_grid(12, 8)
    sol = mms.make_solution("decaying_swirl", {"nu": 0.1})

    def poisoned(t):
        h = np.zeros(g.shape)
        if t > 5e-3:
            h[3, 3] = np.nan
        return ForcingFields(
            ScalarSample(h, g), ScalarSample(h, g), ScalarSample(h, g)
        )

    cfg = SimConfig(n_rho=12, n_z=8, nu=0.1, t_end=0.05, dt=1e-3)
    traj = run(cfg, mms.sample_state(sol, g, 0.0), forcing_at=poisoned)
    assert traj.failed
    assert "blow-up" in traj.failure_reason
    # the truncated checkpoint is kept as blow-up data
    last = traj.checkpoints[-1]
    assert not np.all(np.isfinite(last.u_phi.values))


def test_energy_nonincreasing_unforced(audit_run):
    energies = [kinetic_energy(s) for s in audit_run["traj"].checkpoints]
    assert len(energies) == 201
    for e0, e1 in zip(energies, energies[1:]):
        assert e1 - e0 <= 1e-10 * e0


def test_kinetic_energy_scaling():
    g = build_grid(16, 8)
    u = np.full(g.shape, 0.5)
    v = zero_state(g).replace_fields(u_phi=u)
    # constant swirl magnitude c: E = c^2/2 * V with V = 4*pi exactly
    assert kinetic_energy(v) == pytest.approx(0.125 * 4.0 * math.pi, rel=1e-13)
    assert kinetic_energy(zero_state(g)) == 0.0
