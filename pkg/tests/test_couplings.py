"""Closed-form coupling expressions.

The formulas are degree-1 homogeneous in their frequency arguments, so the
tests evaluate them directly in MHz.  Frozen numbers were computed by
independent evaluation of the published expressions and cross-checked
against the exact-diagonalization oracle (see
test_analytic_matches_numeric_oracle).
"""

import numpy as np
import pytest

from trichain import couplings as cpl
from trichain.device import (
    TABLE1,
    DeviceParams,
    extract_couplings_numeric,
    ghz_to_angular,
    mhz_to_angular,
)
from trichain.errors import SingularityError


def test_j1_ground_symmetric_reduction():
    assert cpl.j1_ground(45.0, 45.0, -500.0, -500.0) == pytest.approx(
        45.0 * 45.0 / -500.0
    )


def test_j1_ground_values():
    assert cpl.j1_ground(45, 45, -500, -500) == pytest.approx(-4.05)
    assert cpl.j1_ground(45, 45, -350, -350) == pytest.approx(-5.7857142857, abs=1e-9)


def test_j1_ground_pole():
    with pytest.raises(SingularityError) as err:
        cpl.j1_ground(45, 45, 0.0, -500)
    assert "Delta_1" in str(err.value)


def test_j1_excited_switch_off_exact():
    # opposite-sign anharmonicity exactly cancels the two exchange paths
    assert cpl.j1_excited(45, 45, -500, -500, 500) == 0.0


def test_j1_excited_linear_resonator_limit():
    for d1, d3 in ((-500, -500), (-430, -510)):
        assert cpl.j1_excited(40, 45, d1, d3, 0.0) == pytest.approx(
            cpl.j1_ground(40, 45, d1, d3), abs=1e-14
        )


def test_j1_excited_value():
    assert cpl.j1_excited(45, 45, -500, -500, 350) == pytest.approx(
        -0.7147058823529412, abs=1e-12
    )


def test_j1_excited_two_level_limit():
    g = 45.0
    big = 1e6 * g
    val = cpl.j1_excited(g, g, -500, -500, big)
    ref = -cpl.j1_ground(g, g, -500, -500)
    assert abs(val - ref) / abs(ref) < 1e-3


def test_j1_excited_pole():
    with pytest.raises(SingularityError) as err:
        cpl.j1_excited(45, 45, -500, 350, 350)
    assert "alpha_2" in str(err.value)


def test_j2_ground_value_and_symmetry():
    j_i, j_ii = cpl.j2_ground(45, 45, -500, -500, -350, -350)
    assert j_i == pytest.approx(-4.548360383691116, abs=1e-12)
    assert j_i == pytest.approx(j_ii)


def test_j2_ground_vanishes_without_coupling():
    assert cpl.j2_ground(0.0, 45, -500, -500, -350, -350) == (0.0, 0.0)


def test_j2_exchange_symmetry():
    # swapping (g1, d1, a1) <-> (g3, d3, a3) swaps branch I and II
    args = (40.0, 50.0, -480.0, -520.0, -340.0, -360.0)
    swapped = (args[1], args[0], args[3], args[2], args[5], args[4])
    a, b = cpl.j2_ground(*args)
    b2, a2 = cpl.j2_ground(*swapped)
    assert (a, b) == pytest.approx((a2, b2))
    ae, be = cpl.j2_excited(*args, 333.0)
    be2, ae2 = cpl.j2_excited(*swapped, 333.0)
    assert (ae, be) == pytest.approx((ae2, be2))


def test_j2_excited_reduces_to_ground_at_zero_anharmonicity():
    args = (45.0, 45.0, -500.0, -480.0, -350.0, -330.0)
    assert cpl.j2_excited(*args, 0.0) == pytest.approx(cpl.j2_ground(*args), abs=1e-12)


def test_j2_excited_vanishes_without_coupling():
    assert cpl.j2_excited(45, 0.0, -500, -500, -350, -350, 600) == (0.0, 0.0)


def test_j2_excited_zero_crossing_near_665():
    # with the outer qubits at the doubly-excited resonance the crossing sits
    # where alpha_2 = |Delta_1| = |Delta_3 + alpha_3|
    a3 = -350.0
    d3 = -315.0
    d1 = d3 + a3
    vals = []
    for a2 in (655.0, 665.0, 675.0):
        vals.append(cpl.j2_excited(45, 45, d1, d3, -350.0, a3, a2)[0])
    assert np.sign(vals[0]) != np.sign(vals[-1])
    assert abs(vals[1]) < abs(vals[0]) and abs(vals[1]) < abs(vals[-1])


def test_zz_nn_value_and_cancellation():
    assert cpl.zz_nn(45, -500, -350, 300) == pytest.approx(-0.2977941176470588)
    assert cpl.zz_nn(45, -500, -350, 350) == 0.0  # opposite anharmonicity
    assert cpl.zz_nn(0.0, -500, -350, 300) == 0.0


def test_delta_shift_values():
    assert cpl.delta_shift(0.0, -500, -350, 350) == 0.0
    assert cpl.delta_shift(45, -500, -350, 350) == pytest.approx(2.3625)
    # 5a + d + 3a2 = 0 leaves only the -g^2/d term
    a, d = -350.0, -500.0
    a2 = (5 * abs(a) + d * 1.0) / 3.0  # 5*(-350)+(-500)+3*a2 = 0
    a2 = (5 * 350 + 500) / 3.0
    assert cpl.delta_shift(45, d, a, a2) == pytest.approx(-(45.0**2) / d)


def test_zz_nnn_values():
    assert cpl.zz_nnn((0.0, 0.0), (0.0, 0.0), 10.0, -350, -350) == (0.0, 0.0)
    j = cpl.j2_ground(45, 45, -350, -350, -350, -350)
    z101, _ = cpl.zz_nnn(j, (0.0, 0.0), 0.0, -350.0, -350.0)
    assert z101 == pytest.approx(2 * j[0] ** 2 / 350.0)
    assert z101 == pytest.approx(0.2152, abs=5e-4)
    # symmetric excited-state reduction with no shifts
    jx = (3.0, 3.0)
    _, z111 = cpl.zz_nnn((0.0, 0.0), jx, 0.0, -350.0, -350.0)
    assert z111 == pytest.approx(2 * 9.0 / 350.0)


def test_two_level_effective():
    w1, w2, w3, j = cpl.two_level_effective(45, 45, -500, -500, 5850.0, 6350.0, 5850.0)
    assert j == pytest.approx(4.05)
    assert j == pytest.approx(-cpl.j1_ground(45, 45, -500, -500))
    assert w1 == pytest.approx(5850.0 + 45.0**2 / -500.0)
    assert w2 == pytest.approx(6350.0 + 2 * 45.0**2 / 500.0)
    # one coupling off: no exchange, middle qubit shifted by the other arm
    _, w2b, _, jb = cpl.two_level_effective(0.0, 45, -500, -500, 5850.0, 6350.0, 5850.0)
    assert jb == 0.0
    assert w2b == pytest.approx(6350.0 + 45.0**2 / 500.0)


def _interaction_omega():
    w = TABLE1.omega_idle.copy()
    w[0] = w[2] = float(ghz_to_angular(6.00))
    return w


def test_effective_coefficients_table1_interaction():
    eff = cpl.effective_coefficients(TABLE1, _interaction_omega())
    to_mhz = lambda v: 1e3 * v / (2 * np.pi)  # noqa: E731
    assert to_mhz(eff.j1_ground) == pytest.approx(-5.786, abs=1e-3)
    assert abs(to_mhz(eff.j1_excited)) < 1e-10
    assert to_mhz(eff.j_z) == pytest.approx(2.893, abs=1e-3)
    assert to_mhz(eff.j_i) == pytest.approx(-2.893, abs=1e-3)


def test_effective_coefficients_identities():
    eff = cpl.effective_coefficients(TABLE1, _interaction_omega())
    assert eff.j_z == pytest.approx((eff.j1_excited - eff.j1_ground) / 2, abs=1e-15)
    assert eff.j_i == pytest.approx((eff.j1_excited + eff.j1_ground) / 2, abs=1e-15)
    assert eff.zeta_z == pytest.approx((eff.zeta_111 - eff.zeta_101) / 4, abs=1e-15)
    assert eff.zeta_i == pytest.approx((eff.zeta_111 + eff.zeta_101) / 4, abs=1e-15)
    m = eff.manifold
    assert m.e_111 - m.e_110 - m.e_011 + m.e_010 == pytest.approx(0.0, abs=1e-14)


def test_effective_coefficients_uncoupled():
    params = DeviceParams(TABLE1.freq_ghz, TABLE1.anharm_mhz, (0.0, 0.0), 4)
    eff = cpl.effective_coefficients(params)
    assert eff.j1_ground == 0.0 and eff.j1_excited == 0.0
    assert eff.zeta_101 == 0.0 and eff.zeta_111 == 0.0
    assert (eff.omega1, eff.omega2, eff.omega3) == pytest.approx(
        tuple(params.omega_idle)
    )


def test_effective_coefficients_zz_suppression():
    # alpha_j = -alpha_2 kills the nearest-neighbor ZZ exactly
    eff = cpl.effective_coefficients(TABLE1, _interaction_omega())
    assert eff.zz_nn_1 == 0.0 and eff.zz_nn_3 == 0.0


def test_bab_configuration_same_code_path():
    # middle qubit below the outer ones with negative anharmonicity
    params = DeviceParams(
        (6.35, 5.15, 6.30), (350.0, -350.0, 350.0), (45.0, 45.0), 4
    )
    w = params.omega_idle.copy()
    w[0] = w[2] = float(ghz_to_angular(5.15 + 0.350))
    eff = cpl.effective_coefficients(params, w)
    assert abs(eff.j1_excited) < 1e-12
    assert abs(eff.j1_ground) > 0


def test_analytic_matches_numeric_oracle():
    # dual-route check: second-order expressions against exact
    # diagonalization at weak coupling (g/2pi = 5 MHz)
    params = DeviceParams(TABLE1.freq_ghz, TABLE1.anharm_mhz, (5.0, 5.0), 4)
    ext = extract_couplings_numeric(params, _interaction_omega())
    delta = mhz_to_angular(-350.0)
    g1, g3 = params.g
    analytic = abs(cpl.j1_ground(g1, g3, delta, delta))
    assert ext.j1_ground == pytest.approx(analytic, rel=0.02)
