"""Shared fixtures: reference trajectories and convergence studies.

The expensive artifacts (multi-hundred-step runs, refinement studies)
are session-scoped so the unit suites and the acceptance gate reuse the
same computations.
"""

import pytest

from axiswirl import mms
from axiswirl.exponents import derive_exponents
from axiswirl.grid import build_grid
from axiswirl.monitor import collect_diagnostics, monitor_for
from axiswirl.solver import SimConfig, run

NU = 0.1

SUB_CHECKS = ("young_forcing", "holder_p", "young_eps1", "holder_s_half",
              "holder_inner", "young_eps2")


@pytest.fixture(scope="session")
def exp640():
    return derive_exponents(6.0, 4.0, 0.0)


@pytest.fixture(scope="session")
def decaying_sol():
    return mms.make_solution("decaying_swirl", {"nu": NU})


@pytest.fixture(scope="session")
def taylor_sol():
    return mms.make_solution("taylor_vortex_swirl", {})


@pytest.fixture(scope="session")
def audit_run(decaying_sol, exp640):
    """Unforced 200-step swirl run with full monitor diagnostics."""
    grid = build_grid(32, 8)
    dt = 9e-4
    cfg = SimConfig(n_rho=32, n_z=8, nu=NU, t_start=0.0, t_end=200 * dt,
                    dt=dt, checkpoint_stride=1)
    traj = run(cfg, mms.sample_state(decaying_sol, grid, 0.0))
    assert not traj.failed, traj.failure_reason
    monitor = monitor_for(grid, exp640, NU)
    records = collect_diagnostics(traj.checkpoints, monitor)
    return {"traj": traj, "grid": grid, "monitor": monitor,
            "records": records, "dt": dt}


@pytest.fixture(scope="session")
def forced_taylor(taylor_sol, exp640):
    """Forced 50-step vortex-with-swirl run with full diagnostics."""
    grid = build_grid(24, 24)
    dt = 0.1 * min(grid.d_rho, grid.d_z) ** 2 / NU
    cfg = SimConfig(n_rho=24, n_z=24, nu=NU, t_start=0.0, t_end=50 * dt,
                    dt=dt, checkpoint_stride=1)
    forcing = mms.forcing_callable(taylor_sol, NU, grid)
    traj = run(cfg, mms.sample_state(taylor_sol, grid, 0.0), forcing_at=forcing)
    assert not traj.failed, traj.failure_reason
    monitor = monitor_for(grid, exp640, NU)
    records = collect_diagnostics(traj.checkpoints, monitor,
                                  forcing_at=forcing)
    return {"traj": traj, "grid": grid, "monitor": monitor,
            "records": records, "forcing": forcing, "dt": dt}


@pytest.fixture(scope="session")
def solver_study(decaying_sol):
    grids = mms.grid_levels(16, 3)
    return mms.convergence_order(decaying_sol, grids, quantity="solver",
                                 nu=NU, t_end=0.02)


@pytest.fixture(scope="session")
def lopsided_study(taylor_sol):
    grids = mms.grid_levels(16, 3)
    return mms.convergence_order(taylor_sol, grids, quantity="lopsided_curl")
