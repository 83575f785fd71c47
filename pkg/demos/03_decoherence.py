"""Gate fidelity under relaxation and dephasing.

Propagates the 64 logical-basis operator columns through the calibrated
pulse with the master equation, and compares the resulting open-system
infidelity to the analytic decay estimates.  Uses the shipped calibrated
pulse values.
"""

import numpy as np

from trichain import calibration as cal, metrics, open_system as osys
from trichain.config import table1_config

cfg = table1_config()
# shipped pre-calibrated pulse (see configs/table1.json); recalibrate with
# demos/02 to regenerate
cfg.pulse.delta1_mhz = 25.790504421587123
cfg.pulse.delta3_mhz = 25.26238590475892
cfg.pulse.t_hold_ns = 42.50209968008922

sched = cfg.schedule()
report = metrics.characterize_gate(cfg.device, sched, dt=0.01, verify=False)
target_eff = cal._dressed_target(report)
eps_intrinsic = 1.0 - report.fidelity
print(f"intrinsic infidelity: {eps_intrinsic:.3e}")

print(f"\n{'T1 (us)':>8}  {'1 - F_o':>10}  {'decay est.':>10}  {'L1':>8}")
for t1 in (15.0, 50.0, 105.0):
    res = osys.evolve_superoperator(
        cfg.device, sched, osys.NoiseParams(t1_us=t1), dt=0.005
    )
    f_o, l1 = osys.open_fidelity(res.block, target_eff)
    estimate = eps_intrinsic + osys.decay_only_infidelity(sched.t_gate, t1)
    print(f"{t1:8.0f}  {1 - f_o:10.3e}  {estimate:10.3e}  {l1:8.1e}")

print("\nwith dephasing at T_phi = 2 T1 (T1 = 50 us):")
res = osys.evolve_superoperator(
    cfg.device, sched, osys.NoiseParams(t1_us=50.0, tphi_us=100.0), dt=0.005
)
f_o, _ = osys.open_fidelity(res.block, target_eff)
print(f"  1 - F_o = {1 - f_o:.3e}")
print(f"  analytic eps_T1 formula: {osys.epsilon_t1(sched.t_gate, 50.0, 100.0):.3e}")
