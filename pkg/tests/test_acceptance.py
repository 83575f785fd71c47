"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criteria 9 (the 50 ns weak-coupling point) and 12 (Toffoli/CCZ from
exactly two exchange applications) are implemented faithfully as stated and
are expected to fail; the blocking analysis lives in the project decision
notes.  Everything else passes.
"""

import numpy as np
import pytest

from trichain import calibration as cal
from trichain import circuits as cc
from trichain import couplings as cpl
from trichain import metrics, open_system as osys
from trichain.config import table1_config
from trichain.device import (
    TABLE1,
    DeviceParams,
    extract_couplings_numeric,
    ghz_to_angular,
)

TWO_PI = 2 * np.pi


def line(num, ok: bool, msg: str) -> bool:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {msg}")
    return ok


@pytest.fixture(scope="module")
def working_point():
    return cal.find_working_point(TABLE1)


@pytest.fixture(scope="module")
def gate_report(working_point):
    sched = cal.gate_schedule(TABLE1, working_point)
    return metrics.characterize_gate(TABLE1, sched, dt=0.01, verify=True)


@pytest.fixture(scope="module")
def lindblad_curve(working_point, gate_report):
    sched = cal.gate_schedule(TABLE1, working_point)
    target_eff = cal._dressed_target(gate_report)
    out = {}
    for t1 in (15.0, 50.0, 105.0):
        res = osys.evolve_superoperator(
            TABLE1, sched, osys.NoiseParams(t1_us=t1), dt=0.005
        )
        out[t1] = osys.open_fidelity(res.block, target_eff)
    return out, sched.t_gate


def test_criterion_01_analytic_switch_off():
    exact = cpl.j1_excited(45.0, 45.0, -500.0, -500.0, 500.0)
    result = cal.scenario_fig2a(table1_config())
    alpha = result.axes[0][1]
    j1 = result.columns["j1_excited_mhz"]
    ok = ~np.isnan(j1)
    zeros = np.where(j1[ok] == 0.0)[0]
    flips = np.where(np.sign(j1[ok][:-1]) * np.sign(j1[ok][1:]) < 0)[0]
    n_crossings = len(zeros) + len(flips)
    cross_at = alpha[ok][zeros[0]] if len(zeros) else alpha[ok][flips[0]]
    passed = exact == 0.0 and n_crossings == 1 and abs(cross_at - 500.0) <= 5.0
    assert line(
        1,
        passed,
        f"j1_excited(. . ., 500 MHz) = {exact}; single scan crossing at "
        f"{cross_at:.0f} MHz",
    )


def test_criterion_02_numeric_on_off_ratio():
    w_int = TABLE1.omega_idle.copy()
    w_int[0] = w_int[2] = float(ghz_to_angular(6.00))
    ext = extract_couplings_numeric(TABLE1, w_int)
    j10_mhz = 1e3 * ext.j1_ground / TWO_PI
    ratio = ext.j1_excited / ext.j1_ground
    passed = abs(j10_mhz - 5.79) <= 0.579 and ratio < 1.0 / 20.0
    assert line(
        2,
        passed,
        f"|J1(0)|/2pi = {j10_mhz:.3f} MHz (target 5.79 +- 10%), on/off "
        f"ratio {1/ratio:.0f}:1 (need > 20:1)",
    )


def test_criterion_03_calibrated_gate(working_point, gate_report):
    wp = working_point
    table = gate_report.truth_table
    transfer = table[4, 1]
    blocked = table[6, 6]
    passed = abs(wp.t_hold_ns - 43.2) <= 1.0 and transfer > 0.999 and blocked > 0.99
    assert line(
        3,
        passed,
        f"t_hold = {wp.t_hold_ns:.2f} ns (43.2 +- 1.0), transfer "
        f"P(100->001) = {transfer:.5f} (> 0.999), blocked retention "
        f"{blocked:.5f} (> 0.99)",
    )


def test_criterion_04_intrinsic_fidelity(gate_report):
    f = gate_report.fidelity
    passed = f >= 0.999 and abs(f - 0.9997) <= 5e-4
    assert line(4, passed, f"intrinsic F = {f:.6f} (>= 0.999, within 5e-4 of 0.9997)")


def test_criterion_05_leakage(gate_report):
    worst = gate_report.worst_leakage
    passed = worst < 1e-4
    soft = worst < 1e-5
    assert line(
        5,
        passed,
        f"worst-case leakage {worst:.2e} (< 1e-4 asserted; < 1e-5 soft check: "
        f"{'met' if soft else 'not met'})",
    )


def test_criterion_06_accumulated_phases(gate_report):
    phases = gate_report.phases
    mags = {k: abs(v) for k, v in phases.items()}
    max_label = max(mags, key=mags.get)
    passed = all(m < 0.02 for m in mags.values()) and max_label == (1, 0, 1)
    signs = {
        "".join(map(str, k)): ("+" if v > 0 else "-") for k, v in phases.items()
    }
    assert line(
        6,
        passed,
        f"phases (mrad): "
        + ", ".join(f"{''.join(map(str, k))}: {1e3 * v:+.2f}" for k, v in phases.items())
        + f"; |phi_101| is max; signs {signs} (reported, not asserted)",
    )


def test_criterion_07_open_system(gate_report, lindblad_curve):
    curve, t_gate = lindblad_curve
    f15 = curve[15.0][0]
    f105 = curve[105.0][0]
    eps_intr = 1.0 - gate_report.fidelity
    parts, details = [], []
    parts.append(f15 >= 0.995)
    parts.append(f105 >= 0.999)
    for t1 in (15.0, 50.0, 105.0):
        eps_full = 1.0 - curve[t1][0]
        eps_decay = osys.decay_only_infidelity(t_gate, t1)
        estimate = eps_intr + eps_decay
        rel = abs(eps_full - estimate) / estimate
        parts.append(rel <= 0.10)
        eq9 = eps_intr + osys.epsilon_t1(t_gate, t1)
        details.append(
            f"T1={t1:.0f}us: eps_full={eps_full:.3e} vs eps+eps_T1={estimate:.3e} "
            f"({100 * rel:.1f}%; three-times-single-qubit form would give "
            f"{eps_full / eq9:.2f}x)"
        )
    passed = all(parts)
    assert line(
        7,
        passed,
        f"F_o(15us) = {f15:.5f} (>= 0.995), F_o(105us) = {f105:.5f} (>= 0.999); "
        + "; ".join(details),
    )


def test_criterion_08_decoherence_identities():
    ok_identity = all(
        osys.epsilon_t1(t, 33.0) == pytest.approx(
            3 * (1 - osys.idling_fidelity(t, 33.0)[0]), abs=1e-15
        )
        for t in (5.0, 100.0, 2000.0)
    )
    comp = max(
        np.abs(
            sum(m.conj().T @ m for m in osys.kraus_channel(t, t1, tphi)) - np.eye(2)
        ).max()
        for t, t1, tphi in ((20.0, 15, np.inf), (300.0, 10, 20), (1e4, 30, 60))
    )
    noise = osys.NoiseParams(t1_us=0.02, tphi_us=0.04)
    rho0 = np.array([[0.35, 0.2 - 0.3j], [0.2 + 0.3j, 0.65]], dtype=complex)
    rho = rho0.copy()
    h = np.zeros((2, 2))
    for _ in range(600):
        rho = osys.lindblad_step(rho, h, noise, 0.001)
    kraus_rho = osys.apply_kraus(rho0, osys.kraus_channel(0.6, 0.02, 0.04))
    dev = np.abs(kraus_rho - rho).max()
    passed = ok_identity and comp < 1e-15 and dev < 1e-8
    assert line(
        8,
        passed,
        f"eps_T1 = 3(1-F_I) exact; Kraus completeness defect {comp:.1e}; "
        f"Kraus vs Lindblad deviation {dev:.1e} (< 1e-8)",
    )


def _weak_coupling_fidelity(alpha2_mhz: float, hold_seed_ns: float):
    dev = DeviceParams(
        freq_ghz=TABLE1.freq_ghz,
        anharm_mhz=(-350.0, alpha2_mhz, -350.0),
        g_mhz=(30.0, 30.0),
        levels=4,
    )
    interaction = dev.freq_ghz[1] - alpha2_mhz / 1e3
    wp = cal.find_working_point(
        dev,
        interaction_ghz=interaction,
        t_hold_guess=hold_seed_ns,
        stage2_overshoot_mhz=4.0,
        stage2_overshoot_points=33,
        stage2_hold_halfwidth_ns=8.0,
        stage2_hold_points=65,
    )
    sched = cal.gate_schedule(dev, wp)
    report = metrics.characterize_gate(dev, sched, dt=0.01, verify=False)
    return report.fidelity, wp.t_hold_ns


def test_criterion_09_weak_coupling_100ns():
    f, t_hold = _weak_coupling_fidelity(350.0, cal.hold_time_estimate(
        DeviceParams(TABLE1.freq_ghz, (-350.0, 350.0, -350.0), (30.0, 30.0), 4), 6.00
    ))
    passed = f >= 0.999 and abs(t_hold - 100.0) <= 10.0
    assert line(
        "9 (100 ns)",
        passed,
        f"g = 30 MHz, alpha2 = 350 MHz: F = {f:.5f} (>= 0.999) at "
        f"t_hold = {t_hold:.1f} ns (~100 ns)",
    )


def test_criterion_09_weak_coupling_50ns():
    # Known red: at the detuning a 50 ns swap requires, the published
    # nearest-neighbor ZZ expression (proportional to alpha_2 + alpha_j)
    # leaves >2% of coherent phase error, capping F near 0.978 across the
    # entire recalibrated alpha_2 ridge.  See the decision notes.
    f, t_hold = _weak_coupling_fidelity(190.0, 50.0)
    passed = f >= 0.99 and abs(t_hold - 50.0) <= 10.0
    assert line(
        "9 (50 ns)",
        passed,
        f"g = 30 MHz, best ridge cell alpha2 = 190 MHz: F = {f:.5f} "
        f"(criterion: >= 0.99) at t_hold = {t_hold:.1f} ns",
    )


def test_criterion_10_doubly_excited_switch():
    result11 = cal.scenario_fig11(table1_config())
    grid = result11.grids()["j2_excited_I_over_g"]
    alpha = result11.axes[0][1]
    delta = result11.axes[1][1]
    row = int(np.where(np.isclose(delta, -315.0))[0][0])
    col = grid[:, row]
    okv = ~np.isnan(col)
    flips = np.where(np.sign(col[okv][:-1]) * np.sign(col[okv][1:]) < 0)[0]
    zeros = np.where(col[okv] == 0.0)[0]
    cross = alpha[okv][zeros[0]] if len(zeros) else 0.5 * (
        alpha[okv][flips[0]] + alpha[okv][flips[0] + 1]
    )
    res12 = cal.scenario_fig12(table1_config())
    transfer = res12["fig12c"].meta["transfer"]
    retention = res12["fig12d"].meta["retention"]
    hold = res12["fig12c"].meta["t_hold_ns"]
    passed = abs(cross - 665.0) <= 10.0 and transfer > 0.95 and retention > 0.95
    assert line(
        10,
        passed,
        f"J2(1),I crossing at alpha2 = {cross:.0f} MHz (665 +- 10); "
        f"|101~> -> |002~> transfer {transfer:.4f} (> 0.95) at hold "
        f"{hold:.1f} ns; |111~> retention {retention:.4f} (> 0.95)",
    )


def test_criterion_11_limits_and_reductions():
    checks = []
    # linear-resonator limit: machine precision
    checks.append(
        cpl.j1_excited(45, 45, -480, -510, 0.0)
        == pytest.approx(cpl.j1_ground(45, 45, -480, -510), abs=1e-14)
    )
    checks.append(
        cpl.j2_excited(45, 45, -480, -510, -340, -360, 0.0)
        == pytest.approx(cpl.j2_ground(45, 45, -480, -510, -340, -360), abs=1e-13)
    )
    # two-level limit at alpha_2 = 1e6 g
    big = 1e6 * 45.0
    ratio = cpl.j1_excited(45, 45, -500, -500, big) / -cpl.j1_ground(45, 45, -500, -500)
    checks.append(abs(ratio - 1.0) < 1e-3)
    # exact ZZ cancellation at opposite anharmonicity
    checks.append(cpl.zz_nn(45, -444, -350, 350) == 0.0)
    # 1 <-> 3 exchange symmetry
    a = cpl.j2_excited(40, 50, -480, -520, -340, -360, 333)
    b = cpl.j2_excited(50, 40, -520, -480, -360, -340, 333)
    checks.append(a == pytest.approx((b[1], b[0])))
    # unitarity / trace / positivity invariants on a short pulse
    from trichain.evolution import propagate
    from trichain.pulses import schedule_from_calibration

    sched = schedule_from_calibration(
        TABLE1.omega_idle, float(ghz_to_angular(6.00)), 0, 0, 10.0, 1.0
    )
    res = propagate(TABLE1, sched, dt=0.01, verify=False)
    checks.append(np.abs(res.unitary @ res.unitary.conj().T - np.eye(64)).max() < 1e-8)
    open_res = osys.evolve_superoperator(
        TABLE1, sched, osys.NoiseParams(t1_us=20.0), dt=0.01
    )
    checks.append(open_res.trace_defect < 1e-8)
    checks.append(open_res.min_eigenvalue > -1e-8)
    passed = all(checks)
    assert line(11, passed, f"{sum(checks)}/{len(checks)} limit/invariant checks hold")


def test_criterion_12_continuous_controlled_rotations():
    parts = []
    for theta in (np.pi / 7, np.pi / 3, np.pi):
        for maker, target_name in (
            (cc.cxx_circuit, "cxx"),
            (cc.cyy_circuit, "cyy"),
        ):
            circuit = maker(theta)
            rep = cc.equivalent_up_to_global_phase(
                circuit.unitary(), cc.fixture_target(target_name, theta)
            )
            depth, count = cc.depth_count_report(circuit)
            parts.append(rep.verdict and rep.distance < 1e-8 and depth <= 4 and count <= 4)
        czz = cc.czz_circuit(theta)
        rep = cc.equivalent_up_to_global_phase(czz.unitary(), cc.target_czz(theta))
        extra = czz.gate_count - cc.cyy_circuit(theta).gate_count
        parts.append(rep.verdict and rep.distance < 1e-8 and extra <= 5)
    passed = all(parts)
    assert line(
        "12 (CXX/CYY/CZZ)",
        passed,
        "CXX(theta), CYY(theta) from two exchange applications at depth 4 / "
        "count 4, CZZ with 4 extra rotations, for theta in {pi/7, pi/3, pi}",
    )


def test_criterion_12_toffoli_from_two_applications():
    # Known red: exhaustive deterministic multistart over every local
    # dressing of two exchange applications floors at distance 7.6e-2
    # (full swap) and 1.3e-1 (half swap) from the canonical Toffoli --
    # the construction the source asserts is unreachable in this gate
    # algebra.  See the decision notes for the search evidence.
    reports = {}
    for swap_angle, tag in ((np.pi, "pi"), (np.pi / 2, "pi/2")):
        skeleton = cc.toffoli_skeleton(swap_angle)
        reports[tag] = cc.solve_local_dressing(
            skeleton, cc.target_toffoli(), n_starts=30, seed=12
        )
    achieved = {k: r.distance for k, r in reports.items()}
    passed = all(r.solved and r.distance < 1e-8 for r in reports.values())
    assert line(
        "12 (Toffoli/CCZ)",
        passed,
        f"solver floors: CXY(pi) x2 -> {achieved['pi']:.2e}, CXY(pi/2) x2 -> "
        f"{achieved['pi/2']:.2e} (criterion: < 1e-8)",
    )
