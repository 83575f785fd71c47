import numpy as np
import pytest
from scipy.special import erfc

from trichain.device import TABLE1, ghz_to_angular, mhz_to_angular
from trichain.errors import ValidationError
from trichain.pulses import PulseSchedule, flat_schedule, schedule_from_calibration

W_IDLE = TABLE1.omega_idle
W_INT = float(ghz_to_angular(6.00))


def table1_schedule(t_hold=43.2, sigma=1.0, d1=0.0, d3=0.0):
    return schedule_from_calibration(W_IDLE, W_INT, d1, d3, t_hold, sigma)


def test_gate_time_arithmetic():
    s = table1_schedule()
    assert s.t_ramp == pytest.approx(4 * np.sqrt(2))
    assert s.t_gate == pytest.approx(43.2 + 4 * np.sqrt(2))


def test_hold_plateau_reaches_interaction_point():
    s = table1_schedule(t_hold=200.0)
    w = s.trajectory(1, s.t_gate / 2)
    assert w == pytest.approx(W_INT, rel=1e-9)


def test_ramp_midpoint_is_halfway():
    s = table1_schedule(t_hold=400.0)
    w = s.trajectory(1, s.t_ramp / 2)
    assert w == pytest.approx((W_IDLE[0] + W_INT) / 2, rel=1e-9)


def test_endpoint_residual_bounded():
    # erf tails leave a small documented frequency residual at t = 0
    s = table1_schedule()
    excursion = abs(W_INT - W_IDLE[0])
    residual = abs(s.trajectory(1, 0.0) - W_IDLE[0])
    assert residual <= excursion * erfc(2.0)
    assert residual > 0


def test_time_reversal_symmetry():
    s = table1_schedule()
    ts = np.linspace(0, s.t_gate, 57)
    fwd = s.trajectory(1, ts)
    bwd = s.trajectory(1, s.t_gate - ts)
    assert np.abs(fwd - bwd).max() < 1e-12


def test_monotone_ramp():
    s = table1_schedule(t_hold=100.0)
    ts = np.linspace(0, s.t_ramp, 200)
    w = s.trajectory(1, ts)
    assert np.all(np.diff(w) > 0)


def test_middle_qubit_fixed():
    s = table1_schedule(d1=mhz_to_angular(5.0), d3=mhz_to_angular(-3.0))
    ts = np.linspace(0, s.t_gate, 41)
    assert np.abs(s.trajectory(2, ts) - W_IDLE[1]).max() == 0.0


def test_offsets_fold_into_targets():
    d1 = mhz_to_angular(5.0)
    d3 = mhz_to_angular(2.0)
    s = table1_schedule(t_hold=300.0, d1=d1, d3=d3)
    assert s.trajectory(1, s.t_gate / 2) == pytest.approx(W_INT + d1, rel=1e-9)
    assert s.trajectory(3, s.t_gate / 2) == pytest.approx(W_INT + d3, rel=1e-9)
    assert s.overshoot == pytest.approx(d1 - d3)


def test_zero_offsets_hit_ideal_point():
    s = table1_schedule(t_hold=300.0)
    assert s.omega_target[0] == pytest.approx(W_INT)
    assert s.omega_target[2] == pytest.approx(W_INT)


def test_rejects_out_of_range_time():
    s = table1_schedule()
    with pytest.raises(ValidationError):
        s.trajectory(1, -0.1)
    with pytest.raises(ValidationError):
        s.trajectory(1, s.t_gate + 1.0)


def test_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        PulseSchedule(tuple(W_IDLE), tuple(W_IDLE), sigma=0.0, t_hold=10.0)
    with pytest.raises(ValidationError):
        PulseSchedule(tuple(W_IDLE), tuple(W_IDLE), sigma=1.0, t_hold=-1.0)


def test_flat_schedule_constant():
    s = flat_schedule(W_IDLE, 20.0)
    ts = np.linspace(0, s.t_gate, 17)
    assert np.abs(s.frequencies_at(ts) - W_IDLE).max() == 0.0
