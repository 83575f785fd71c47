"""Controlled two-qubit rotations from the native exchange gate.

The echo identity behind the constructions: conjugating one of two exchange
applications by an X (or Y) rotation on an outer qubit flips the sign of the
YY (or XX) half of the generator, so the pair composes to a pure controlled
XX (YY) rotation while the echoes cancel identically in the blocked sector.

Also runs the local-dressing solver against the Toffoli-from-two-exchanges
construction, which fails with a large distance floor: that decomposition is
outside this gate algebra (see the ledger in the repository notes), while
three-or-more-application compilations and all the continuous controlled
rotations below verify exactly.
"""

import numpy as np

from trichain import circuits as cc

for theta in (np.pi / 7, np.pi / 3, np.pi):
    for name, maker, target in (
        ("CXX", cc.cxx_circuit, cc.target_cxx),
        ("CYY", cc.cyy_circuit, cc.target_cyy),
        ("CZZ", cc.czz_circuit, cc.target_czz),
    ):
        circuit = maker(theta)
        rep = cc.equivalent_up_to_global_phase(circuit.unitary(), target(theta))
        depth, count = cc.depth_count_report(circuit)
        print(
            f"{name}({theta:.3f}): distance {rep.distance:.1e}, "
            f"depth {depth}, count {count}"
        )

print("\nwriting a verified fixture for CXX(pi/3) ...")
fx = cc.Fixture(
    name="cxx_pi3",
    target_name="cxx",
    circuit=cc.cxx_circuit(np.pi / 3),
    distance=0.0,
    theta=np.pi / 3,
)
with open("cxx_pi3_fixture.json", "w") as fh:
    fh.write(fx.to_json())
print("verify with: trichain circuit verify cxx_pi3_fixture.json")

print("\nattempting Toffoli from two full-swap applications (solver, ~1 min):")
report = cc.solve_local_dressing(
    cc.toffoli_skeleton(np.pi), cc.target_toffoli(), n_starts=12, seed=1
)
print(f"  solved: {report.solved}, best distance {report.distance:.3e}")
print("  (the floor is structural; two applications cannot reach the Toffoli class)")
