"""Three-qubit circuit algebra over the native controlled-exchange gate.

Gates: single-qubit rotations [O]_theta = exp(-i theta O / 2) for O in
{X, Y, Z}, and the ``cxy`` primitive (the swap-matrix gate of
:func:`trichain.metrics.ideal_ucxy`, exchange conditioned on the middle
qubit being in its physical ground state).

Targets follow the relabeled-control convention: the middle qubit's
physical ground state is its logical |1>, so the native gate is a
conventionally controlled operation.  All target matrices here are written
in the physical basis with that relabeling applied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .errors import ValidationError
from .metrics import ideal_ucxy

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    "z": np.diag([1.0, -1.0]).astype(complex),
}


def rotation(axis: str, angle: float) -> np.ndarray:
    """exp(-i angle O/2) on one qubit."""
    o = _PAULI[axis]
    return np.cos(angle / 2.0) * np.eye(2) - 1j * np.sin(angle / 2.0) * o


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    kind "rot": single-qubit rotation (qubit, axis, angle).
    kind "cxy": the native three-qubit primitive with swap angle ``angle``;
    wiring is fixed by the hardware (control = qubit 2, exchange on 1 and 3).
    ``angle=None`` marks a free slot for the dressing solver.
    """

    kind: str
    qubit: int = 0
    axis: str = "z"
    angle: float | None = 0.0

    def qubits(self) -> set[int]:
        return {1, 2, 3} if self.kind == "cxy" else {self.qubit}

    def unitary(self) -> np.ndarray:
        if self.angle is None:
            raise ValidationError("free slot has no angle; run the dressing solver")
        if self.kind == "cxy":
            return ideal_ucxy(self.angle)
        if self.kind != "rot":
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if self.qubit not in (1, 2, 3):
            raise ValidationError(f"qubit index {self.qubit} outside 1..3")
        mats = [np.eye(2, dtype=complex)] * 3
        mats[self.qubit - 1] = rotation(self.axis, self.angle)
        return linalg.kron3(*mats)

    def to_dict(self) -> dict:
        if self.kind == "cxy":
            return {"kind": "cxy", "angle": self.angle}
        return {"kind": "rot", "qubit": self.qubit, "axis": self.axis, "angle": self.angle}

    @staticmethod
    def from_dict(d: dict) -> "Gate":
        if d["kind"] == "cxy":
            return Gate(kind="cxy", angle=d["angle"])
        return Gate(kind="rot", qubit=d["qubit"], axis=d["axis"], angle=d["angle"])


@dataclass
class Circuit:
    """Ordered layers of gates on disjoint qubit subsets."""

    layers: list = field(default_factory=list)

    def add_layer(self, *gates: Gate) -> "Circuit":
        used: set[int] = set()
        for g in gates:
            if used & g.qubits():
                raise ValidationError("gates within a layer must act on disjoint qubits")
            used |= g.qubits()
        self.layers.append(list(gates))
        return self

    @property
    def depth(self) -> int:
        return sum(1 for layer in self.layers if layer)

    @property
    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def gates(self):
        for layer in self.layers:
            yield from layer

    def unitary(self) -> np.ndarray:
        """Left-to-right temporal composition: later layers multiply from
        the left."""
        u = np.eye(8, dtype=complex)
        for layer in self.layers:
            layer_u = np.eye(8, dtype=complex)
            for g in layer:
                layer_u = g.unitary() @ layer_u
            u = layer_u @ u
        return u

    def concatenate(self, other: "Circuit") -> "Circuit":
        return Circuit(layers=[list(l) for l in self.layers] + [list(l) for l in other.layers])

    def pruned(self, tol: float = 1e-9) -> "Circuit":
        """Drop rotations with angle ~ 0 and empty layers."""
        out = Circuit()
        for layer in self.layers:
            kept = [
                g
                for g in layer
                if g.kind == "cxy" or g.angle is None or abs(g.angle) > tol
            ]
            if kept:
                out.layers.append(kept)
        return out

    def to_dict(self) -> dict:
        return {"layers": [[g.to_dict() for g in layer] for layer in self.layers]}

    @staticmethod
    def from_dict(d: dict) -> "Circuit":
        c = Circuit()
        for layer in d["layers"]:
            c.layers.append([Gate.from_dict(g) for g in layer])
        return c


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    return circuit.unitary()


def depth_count_report(circuit: Circuit) -> tuple[int, int]:
    return circuit.depth, circuit.gate_count


@dataclass
class EquivalenceReport:
    verdict: bool
    distance: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "verdict": bool(self.verdict),
            "distance": self.distance,
            "threshold": self.threshold,
        }


def global_phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - |Tr(U^+ V)| / dim; zero iff U = e^{i phi} V."""
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(1.0 - abs(np.trace(u.conj().T @ v)) / u.shape[0])


def equivalent_up_to_global_phase(
    u: np.ndarray, v: np.ndarray, threshold: float = 1e-8
) -> EquivalenceReport:
    d = global_phase_distance(u, v)
    return EquivalenceReport(verdict=d < threshold, distance=d, threshold=threshold)


# ---------------------------------------------------------------------------
# targets (relabeled-control convention)


def _relabel_middle(u: np.ndarray) -> np.ndarray:
    x2 = linalg.kron3(np.eye(2), _PAULI["x"], np.eye(2))
    return x2 @ u @ x2


def canonical_toffoli() -> np.ndarray:
    """CCX with controls (1, 2) and target 3, in the logical labeling."""
    u = np.zeros((8, 8))
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                u[4 * i + 2 * j + (k ^ (i & j)), 4 * i + 2 * j + k] = 1.0
    return u.astype(complex)


def target_toffoli() -> np.ndarray:
    """Canonical Toffoli expressed over the physical middle-qubit basis."""
    return _relabel_middle(canonical_toffoli())


def target_ccz() -> np.ndarray:
    ccz = np.diag([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0]).astype(complex)
    return _relabel_middle(ccz)


def _controlled_two_qubit(generator: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i theta G/2) on the outer qubits when the middle qubit is in its
    logical |1> (physical ground) state; identity otherwise."""
    from scipy.linalg import expm

    p0 = linalg.kron3(np.eye(2), np.diag([1.0, 0.0]), np.eye(2))
    p1 = linalg.kron3(np.eye(2), np.diag([0.0, 1.0]), np.eye(2))
    return expm(-0.5j * theta * generator) @ p0 + p1


def target_cxx(theta: float) -> np.ndarray:
    g = linalg.kron3(_PAULI["x"], np.eye(2), _PAULI["x"])
    return _controlled_two_qubit(g, theta)


def target_cyy(theta: float) -> np.ndarray:
    g = linalg.kron3(_PAULI["y"], np.eye(2), _PAULI["y"])
    return _controlled_two_qubit(g, theta)


def target_czz(theta: float) -> np.ndarray:
    g = linalg.kron3(_PAULI["z"], np.eye(2), _PAULI["z"])
    return _controlled_two_qubit(g, theta)


# ---------------------------------------------------------------------------
# dressing solver


@dataclass
class DressingReport:
    """Outcome of a local-dressing solve; ``circuit`` is None when no
    solution reached the requested floor (a report, not an exception)."""

    circuit: Circuit | None
    distance: float
    solved: bool
    starts_used: int

    def to_dict(self) -> dict:
        return {
            "solved": self.solved,
            "distance": self.distance,
            "starts_used": self.starts_used,
            "circuit": None if self.circuit is None else self.circuit.to_dict(),
        }


def _free_slots(skeleton: Circuit):
    slots = []
    for li, layer in enumerate(skeleton.layers):
        for gi, g in enumerate(layer):
            if g.angle is None:
                slots.append((li, gi))
    return slots


def _with_angles(skeleton: Circuit, slots, angles) -> Circuit:
    c = Circuit(layers=[list(l) for l in skeleton.layers])
    for (li, gi), a in zip(slots, angles):
        g = c.layers[li][gi]
        c.layers[li][gi] = Gate(kind=g.kind, qubit=g.qubit, axis=g.axis, angle=float(a))
    return c


def solve_local_dressing(
    skeleton: Circuit,
    target: np.ndarray,
    n_starts: int = 60,
    floor: float = 1e-6,
    seeds=None,
    seed: int = 0,
) -> DressingReport:
    """Numerically choose the free single-qubit angles of ``skeleton`` to
    minimize the global-phase distance to ``target``.

    Deterministic multistart (fixed RNG seed enumeration) with optional
    caller-provided seed vectors tried first; a distance floor above
    ``floor`` after all starts yields an unsolved report.
    """
    slots = _free_slots(skeleton)
    n = len(slots)

    def dist_of(angles):
        return global_phase_distance(_with_angles(skeleton, slots, angles).unitary(), target)

    rng = np.random.default_rng(seed)
    starts = [np.asarray(s, dtype=float) for s in (seeds or [])]
    while len(starts) < n_starts:
        starts.append(rng.uniform(-np.pi, np.pi, n))

    best_d, best_x, used = np.inf, None, 0
    for x0 in starts:
        used += 1
        res = minimize(dist_of, x0, method="L-BFGS-B", options={"maxiter": 4000})
        x, d = res.x, res.fun
        if d < best_d:
            best_d, best_x = d, x
        if best_d < 1e-10:
            break
    if best_x is not None and best_d < 1e-3:
        res = minimize(
            dist_of, best_x, method="Nelder-Mead",
            options={"xatol": 1e-14, "fatol": 1e-16, "maxiter": 40000, "maxfev": 60000},
        )
        if res.fun < best_d:
            best_d, best_x = res.fun, res.x
    if best_d > floor:
        return DressingReport(circuit=None, distance=float(best_d), solved=False, starts_used=used)
    circuit = _with_angles(skeleton, slots, best_x)
    return DressingReport(circuit=circuit, distance=float(best_d), solved=True, starts_used=used)


# ---------------------------------------------------------------------------
# named constructions


def cxx_circuit(theta: float) -> Circuit:
    """Controlled-XX(theta) from two exchange applications and two X echoes.

    Echo identity: with W the exchange primitive at swap angle -theta,
    Rx1(-pi) W Rx1(pi) W = exp(-i theta XX/2) on the active sector while the
    echoes cancel exactly on the blocked sector.  Depth 4, count 4.
    """
    c = Circuit()
    c.add_layer(Gate("cxy", angle=-theta))
    c.add_layer(Gate("rot", qubit=1, axis="x", angle=np.pi))
    c.add_layer(Gate("cxy", angle=-theta))
    c.add_layer(Gate("rot", qubit=1, axis="x", angle=-np.pi))
    return c


def cyy_circuit(theta: float) -> Circuit:
    """Controlled-YY(theta): same echo with Y rotations."""
    c = Circuit()
    c.add_layer(Gate("cxy", angle=-theta))
    c.add_layer(Gate("rot", qubit=1, axis="y", angle=np.pi))
    c.add_layer(Gate("cxy", angle=-theta))
    c.add_layer(Gate("rot", qubit=1, axis="y", angle=-np.pi))
    return c


def czz_circuit(theta: float) -> Circuit:
    """Controlled-ZZ(theta): the YY construction conjugated into the Z basis
    by four extra single-qubit rotations."""
    c = Circuit()
    c.add_layer(
        Gate("rot", qubit=1, axis="x", angle=-np.pi / 2),
        Gate("rot", qubit=3, axis="x", angle=-np.pi / 2),
    )
    for layer in cyy_circuit(theta).layers:
        c.layers.append(list(layer))
    c.add_layer(
        Gate("rot", qubit=1, axis="x", angle=np.pi / 2),
        Gate("rot", qubit=3, axis="x", angle=np.pi / 2),
    )
    return c


def toffoli_skeleton(swap_angle: float) -> Circuit:
    """Two exchange applications interleaved with free ZYZ slots on every
    qubit (the middle qubit's slots included: its rotations need not be
    diagonal)."""
    c = Circuit()

    def free_layer():
        logical = []
        for q in (1, 2, 3):
            logical += [
                Gate("rot", qubit=q, axis="z", angle=None),
                Gate("rot", qubit=q, axis="y", angle=None),
                Gate("rot", qubit=q, axis="z", angle=None),
            ]
        return logical

    for g in free_layer():
        c.add_layer(g)
    c.add_layer(Gate("cxy", angle=swap_angle))
    for g in free_layer():
        c.add_layer(g)
    c.add_layer(Gate("cxy", angle=swap_angle))
    for g in free_layer():
        c.add_layer(g)
    return c


# ---------------------------------------------------------------------------
# fixtures


@dataclass
class Fixture:
    """A stored decomposition: circuit, target id, achieved distance."""

    name: str
    target_name: str
    circuit: Circuit
    distance: float
    theta: float | None = None
    note: str = ""

    def target(self) -> np.ndarray:
        return fixture_target(self.target_name, self.theta)

    def verify(self, threshold: float = 1e-8) -> EquivalenceReport:
        return equivalent_up_to_global_phase(self.circuit.unitary(), self.target(), threshold)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "target": self.target_name,
                "theta": self.theta,
                "distance": self.distance,
                "note": self.note,
                "circuit": self.circuit.to_dict(),
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "Fixture":
        d = json.loads(text)
        return Fixture(
            name=d["name"],
            target_name=d["target"],
            circuit=Circuit.from_dict(d["circuit"]),
            distance=d["distance"],
            theta=d.get("theta"),
            note=d.get("note", ""),
        )


def fixture_target(name: str, theta: float | None = None) -> np.ndarray:
    if name == "toffoli":
        return target_toffoli()
    if name == "ccz":
        return target_ccz()
    if name == "cxx":
        return target_cxx(theta)
    if name == "cyy":
        return target_cyy(theta)
    if name == "czz":
        return target_czz(theta)
    raise ValidationError(f"unknown fixture target {name!r}")
