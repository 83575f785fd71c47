import numpy as np
import pytest

from trichain import calibration as cal
from trichain.config import table1_config
from trichain.device import TABLE1, DeviceParams, mhz_to_angular
from trichain.errors import ConfigError


def test_hold_time_estimate_table1():
    # quarter period of the 5.786 MHz exchange
    assert cal.hold_time_estimate(TABLE1, 6.00) == pytest.approx(43.2, abs=0.05)


def test_default_interaction_point():
    assert cal.default_interaction_ghz(TABLE1) == pytest.approx(6.00)


def test_parabola_refine_recovers_vertex():
    xs = np.linspace(-1, 1, 21)
    ys = 3.0 * (xs - 0.1234) ** 2 + 0.5
    k = int(np.argmin(ys))
    assert cal._parabola_refine(xs, ys, k) == pytest.approx(0.1234, abs=1e-12)


def test_parabola_refine_clips_at_boundary():
    xs = np.linspace(0, 1, 5)
    ys = xs.copy()
    assert cal._parabola_refine(xs, ys, 0) == 0.0


def test_working_point_overshoot_identity():
    wp = cal.WorkingPoint(2.0, 1.2, 43.0, 6.0)
    assert wp.overshoot_mhz == pytest.approx(0.8)
    assert wp.to_dict()["overshoot_mhz"] == pytest.approx(0.8)


def _single_crossing(xs, ys):
    """x-interval of the unique sign change of ys (exact zeros count once)."""
    ok = ~np.isnan(ys)
    xs, ys = xs[ok], ys[ok]
    zeros = np.where(ys == 0.0)[0]
    flips = np.where(np.sign(ys[:-1]) * np.sign(ys[1:]) < 0)[0]
    assert len(zeros) + len(flips) == 1, (zeros, flips)
    if len(zeros):
        return xs[zeros[0]], xs[zeros[0]]
    return xs[flips[0]], xs[flips[0] + 1]


def test_fig2a_zero_crossing_at_500():
    result = cal.scenario_fig2a(table1_config())
    alpha = result.axes[0][1]
    j1 = result.columns["j1_excited_mhz"]
    lo, hi = _single_crossing(alpha, j1)
    assert lo <= 500.0 <= hi
    assert np.allclose(result.columns["j1_ground_mhz"], -4.05)


def test_fig2b_zero_contour_follows_switch_off_rule():
    result = cal.scenario_fig2b(table1_config(), n_alpha=36, n_delta=26)
    grids = result.grids()["j1_excited_over_g"]
    alpha = result.axes[0][1]
    delta = result.axes[1][1]
    for j_col in (5, 15):
        lo, hi = _single_crossing(alpha, grids[:, j_col])
        assert lo - 1e-9 <= -delta[j_col] <= hi + 1e-9



def test_run_sweep_single_point_analytic():
    cfg = table1_config()
    spec = cal.SweepSpec(
        axes=(cal.SweepAxis("interaction_ghz", "pulse.interaction_ghz", (6.00,)),),
        metrics=("analytic_j1_ground_mhz",),
        base=cfg.raw,
    )
    result = cal.run_sweep(spec)
    assert result.columns["analytic_j1_ground_mhz"][0] == pytest.approx(-5.786, abs=1e-3)


def test_run_sweep_deterministic_csv(tmp_path):
    cfg = table1_config()
    spec = cal.SweepSpec(
        axes=(
            cal.SweepAxis("alpha2_mhz", "device.anharm_mhz.1", tuple(np.linspace(300, 400, 5))),
        ),
        metrics=("analytic_j1_excited_mhz",),
        base=cfg.raw,
    )
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    cal.run_sweep(spec).to_csv(a)
    cal.run_sweep(spec, threads=2).to_csv(b)
    assert a.read_bytes() == b.read_bytes()


def test_run_sweep_records_singular_points():
    cfg = table1_config()
    # alpha_2 equal to the detuning magnitude crosses the exchange pole
    spec = cal.SweepSpec(
        axes=(
            cal.SweepAxis("alpha2_mhz", "device.anharm_mhz.1", (-350.0, 350.0)),
        ),
        metrics=("analytic_j1_excited_mhz",),
        base=cfg.raw,
    )
    result = cal.run_sweep(spec)
    vals = result.columns["analytic_j1_excited_mhz"]
    assert np.isnan(vals[0]) and not np.isnan(vals[1])
    assert result.missing and result.missing[0][0] == 0


def test_run_sweep_rejects_unknown_metric():
    cfg = table1_config()
    spec = cal.SweepSpec(
        axes=(cal.SweepAxis("x", "pulse.interaction_ghz", (6.0,)),),
        metrics=("no_such_metric",),
        base=cfg.raw,
    )
    with pytest.raises(ConfigError):
        cal.run_sweep(spec)


def test_j_vs_time_profile():
    from trichain.device import ghz_to_angular
    from trichain.pulses import schedule_from_calibration

    sched = schedule_from_calibration(
        TABLE1.omega_idle, float(ghz_to_angular(6.00)), 0.0, 0.0, 43.2, 1.0
    )
    ts, j0, j1 = cal.j_vs_time(TABLE1, sched, n_samples=201)
    mid = len(ts) // 2
    # during the hold the blocked-sector coupling is interfered away
    assert abs(j1[mid]) < 0.2
    assert abs(j0[mid]) == pytest.approx(5.79, abs=0.5)
    # at the idle endpoints the exchange is parked weak (1.05-1.2 GHz detuned)
    assert j0[0] == pytest.approx(-1.8109, abs=1e-3)
    assert abs(j0[0]) < abs(j0[mid]) / 3
    # pulse symmetry carries over to the analytic profile
    assert np.nanmax(np.abs(j0 - j0[::-1])) < 1e-9


def test_blocked_error_landscape_symmetric_for_symmetric_device():
    # fully symmetric chain: the Hamiltonian family is invariant under the
    # 1<->3 exchange combined with (delta1, delta3) -> (delta3, delta1), so
    # the blocked-swap error of the exchange-symmetric doublet state obeys
    # the same symmetry.  (At equal idle frequencies the individual |011~>
    # label is hybridized away, so the doublet state is the well-defined
    # probe.)
    from trichain import linalg
    from trichain.device import ghz_to_angular
    from trichain.evolution import evolve_state_batch
    from trichain.pulses import schedule_from_calibration

    params = DeviceParams((5.22, 6.35, 5.22), TABLE1.anharm_mhz, (45.0, 45.0), 4)
    psi = np.zeros(64, dtype=complex)
    psi[linalg.fock_index((0, 1, 1), 4)] = 1 / np.sqrt(2)
    psi[linalg.fock_index((1, 1, 0), 4)] = 1 / np.sqrt(2)
    axis = mhz_to_angular(np.linspace(-15.0, 15.0, 5))
    w_int = float(ghz_to_angular(6.00))
    scheds = [
        schedule_from_calibration(params.omega_idle, w_int, d1, d3, 45.0, 1.0)
        for d1 in axis
        for d3 in axis
    ]
    finals = evolve_state_batch(params, scheds, psi, dt=0.01)
    err = (1.0 - np.abs(finals @ psi.conj()) ** 2).reshape(5, 5)
    assert np.abs(err - err.T).max() < 1e-6


def test_fig11_crossing_near_665():
    result = cal.scenario_fig11(table1_config())
    grid = result.grids()["j2_excited_I_over_g"]
    alpha = result.axes[0][1]
    delta = result.axes[1][1]
    row = int(np.where(np.isclose(delta, -315.0))[0][0])
    lo, hi = _single_crossing(alpha, grid[:, row])
    assert abs((lo + hi) / 2.0 - 665.0) <= 10.0


def test_scenario_registry_rejects_unknown():
    with pytest.raises(ConfigError):
        cal.run_scenario("fig99", table1_config())
