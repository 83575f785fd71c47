"""Device parameters, full-system Hamiltonian, and the logical eigenbasis.

User-facing frequencies are cyclic (values of omega/2pi, in GHz or MHz, as
quoted in hardware specs); everything internal is angular in rad/ns.  The
conversion happens exactly once, at the :class:`DeviceParams` boundary.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import linalg
from .errors import BasisError, ValidationError

TWO_PI = 2.0 * np.pi


def ghz_to_angular(f):
    """Cyclic GHz -> angular rad/ns."""
    return TWO_PI * np.asarray(f, dtype=float)


def mhz_to_angular(f):
    """Cyclic MHz -> angular rad/ns."""
    return TWO_PI * np.asarray(f, dtype=float) / 1e3


def angular_to_ghz(w):
    return np.asarray(w, dtype=float) / TWO_PI


def angular_to_mhz(w):
    return 1e3 * np.asarray(w, dtype=float) / TWO_PI


@dataclass(frozen=True)
class DeviceParams:
    """Three-oscillator chain parameters.

    Attributes:
        freq_ghz: bare (idle) qubit frequencies, omega/2pi in GHz.
        anharm_mhz: anharmonicities alpha/2pi in MHz (sign-general: negative
            for transmon-like, positive for C-shunt-flux-like oscillators).
        g_mhz: nearest-neighbor couplings (g1, g3) to the middle qubit, MHz.
        levels: per-qubit truncation d.  d >= 3 is required by anything that
            evaluates leakage or higher-level couplings; d = 2 only supports
            the ideal two-level model.
    """

    freq_ghz: tuple[float, float, float]
    anharm_mhz: tuple[float, float, float]
    g_mhz: tuple[float, float] = (45.0, 45.0)
    levels: int = 4

    def __post_init__(self):
        if self.levels < 2:
            raise ValidationError(f"levels must be >= 2, got {self.levels}")
        if any(g < 0 for g in self.g_mhz):
            raise ValidationError("couplings g must be non-negative")

    @property
    def omega_idle(self) -> np.ndarray:
        """Idle angular frequencies (rad/ns)."""
        return ghz_to_angular(self.freq_ghz)

    @property
    def alpha(self) -> np.ndarray:
        """Angular anharmonicities (rad/ns)."""
        return mhz_to_angular(self.anharm_mhz)

    @property
    def g(self) -> np.ndarray:
        """Angular couplings (g1, g3) in rad/ns."""
        return mhz_to_angular(self.g_mhz)

    @property
    def dim(self) -> int:
        return self.levels**3

    def dispersive_ratios(self, omega: np.ndarray | None = None) -> np.ndarray:
        """|Delta_j / g_j| for j = 1, 3 at the given angular frequencies."""
        w = self.omega_idle if omega is None else np.asarray(omega)
        g1, g3 = self.g
        out = []
        for wj, gj in ((w[0], g1), (w[2], g3)):
            out.append(np.inf if gj == 0 else abs((wj - w[1]) / gj))
        return np.array(out)


TABLE1 = DeviceParams(
    freq_ghz=(5.15, 6.35, 5.30),
    anharm_mhz=(-350.0, 350.0, -350.0),
    g_mhz=(45.0, 45.0),
    levels=4,
)
# Shared interaction point: outer qubits parked where alpha_2 = -Delta_j.
TABLE1_INTERACTION_GHZ = 6.00


class HamiltonianTerms:
    """Cached static pieces of the chain Hamiltonian for one device.

    H(omega) = sum_l [omega_l n_l + (alpha_l/2) n_l (n_l - 1)] + V
    with V the frequency-independent exchange coupling.  Only the number
    diagonals are frequency dependent, which keeps time stepping cheap.
    """

    def __init__(self, params: DeviceParams):
        self.params = params
        d = params.levels
        self.d = d
        idx = np.arange(d**3)
        self.n_diag = np.stack([idx // (d * d), (idx // d) % d, idx % d]).astype(float)
        alpha = params.alpha
        self.anharm_diag = sum(
            0.5 * alpha[l] * self.n_diag[l] * (self.n_diag[l] - 1) for l in range(3)
        )
        a = linalg.annihilation(d)
        g1, g3 = params.g
        a1 = linalg.embed3(a, 1, d)
        a2 = linalg.embed3(a, 2, d)
        a3 = linalg.embed3(a, 3, d)
        self.coupling = g1 * (a1.T @ a2 + a1 @ a2.T) + g3 * (a3.T @ a2 + a3 @ a2.T)

    def diagonal(self, omega: np.ndarray) -> np.ndarray:
        """Diagonal of H at per-qubit angular frequencies ``omega``."""
        return omega @ self.n_diag + self.anharm_diag

    def h(self, omega: np.ndarray) -> np.ndarray:
        h = self.coupling.copy()
        h[np.diag_indices_from(h)] += self.diagonal(omega)
        return h


def build_hamiltonian(params: DeviceParams, omega: np.ndarray | None = None) -> np.ndarray:
    """Full-system Hamiltonian (rad/ns) at angular frequencies ``omega``.

    Defaults to the idle point.  The result is real symmetric: number
    operators and the exchange coupling have real matrix elements.
    """
    w = params.omega_idle if omega is None else np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValidationError("frequencies must be finite")
    return HamiltonianTerms(params).h(w)


@dataclass
class LogicalBasis:
    """Computational bare labels matched to eigenvectors of the idle Hamiltonian.

    ``vectors[:, k]`` is the eigenvector assigned to the k-th computational
    label in flat order (000, 001, ..., 111); phases are fixed so the
    dominant bare amplitude is real positive.
    """

    d: int
    vectors: np.ndarray
    energies: np.ndarray
    overlaps: np.ndarray
    labels: list = field(default_factory=linalg.computational_labels)

    def vector(self, label) -> np.ndarray:
        k = self.labels.index(tuple(label))
        return self.vectors[:, k]

    def energy(self, label) -> float:
        return float(self.energies[self.labels.index(tuple(label))])


def match_eigenstates(
    eigvecs: np.ndarray,
    bare_indices: np.ndarray,
    min_overlap: float = 0.5,
    margin: float = 0.1,
) -> np.ndarray:
    """Greedy injective assignment of bare indices to eigenvector columns.

    Assignments proceed in descending squared-overlap order.  An assignment
    whose best squared overlap is <= ``min_overlap``, or that beats the best
    still-available rival column by less than ``margin``, is an error rather
    than a silent choice: at a hybridized bias point both members of a
    resonant pair retain overlaps just above one half, and silently picking
    one would corrupt every downstream metric.

    Returns the eigenvector column index for each bare index.
    """
    ov = np.abs(eigvecs[np.asarray(bare_indices), :]) ** 2
    n_rows, n_cols = ov.shape
    assignment = np.full(n_rows, -1)
    col_taken = np.zeros(n_cols, dtype=bool)
    order = np.argsort(ov, axis=None)[::-1]
    for flat in order:
        r, c = divmod(flat, n_cols)
        if assignment[r] >= 0 or col_taken[c]:
            continue
        best = ov[r, c]
        if best <= min_overlap:
            raise BasisError(
                f"basis ill-defined: best overlap {best:.3f} <= {min_overlap} "
                f"for bare index {bare_indices[r]}"
            )
        rivals = np.where(~col_taken)[0]
        rivals = rivals[rivals != c]
        if rivals.size and best - ov[r, rivals].max() < margin:
            raise BasisError(
                f"ambiguous eigenstate assignment for bare index "
                f"{bare_indices[r]}: overlaps {best:.3f} vs "
                f"{ov[r, rivals].max():.3f} (hybridized bias point)"
            )
        assignment[r] = c
        col_taken[c] = True
        if np.all(assignment >= 0):
            break
    if np.any(assignment < 0):
        raise BasisError("eigenstate assignment is not injective")
    return assignment


def _fix_phases(vectors: np.ndarray, bare_indices: np.ndarray) -> np.ndarray:
    """Rotate each column so its dominant bare amplitude is real positive."""
    out = vectors.copy().astype(complex)
    for k, b in enumerate(bare_indices):
        amp = out[b, k]
        if abs(amp) > 0:
            out[:, k] *= np.conj(amp) / abs(amp)
    return np.real_if_close(out, tol=1)


def logical_basis(
    params: DeviceParams,
    omega: np.ndarray | None = None,
    warn_ratio: float = 5.0,
) -> LogicalBasis:
    """Logical eigenbasis at the (idle) bias point ``omega``.

    Each computational bare label is matched to the idle eigenvector of
    maximal squared overlap (adiabatic connection); the assignment must be a
    bijection with every overlap > 0.5.
    """
    w = params.omega_idle if omega is None else np.asarray(omega, dtype=float)
    ratios = params.dispersive_ratios(w)
    if np.any(ratios < warn_ratio):
        warnings.warn(
            f"bias point is weakly dispersive: |Delta/g| = {ratios.round(2)}",
            stacklevel=2,
        )
    h = build_hamiltonian(params, w)
    evals, evecs = linalg.eigh(h)
    bare = linalg.computational_indices(params.levels)
    cols = match_eigenstates(evecs, bare)
    vectors = _fix_phases(evecs[:, cols], bare)
    overlaps = np.abs(vectors[bare, np.arange(8)]) ** 2
    return LogicalBasis(
        d=params.levels,
        vectors=vectors,
        energies=evals[cols],
        overlaps=np.real(overlaps),
    )


def full_eigenbasis(params: DeviceParams, omega: np.ndarray | None = None):
    """Match every bare Fock label to an idle eigenvector (for endpoint
    population reporting).  Returns (vectors, energies) in flat-label order."""
    w = params.omega_idle if omega is None else np.asarray(omega, dtype=float)
    h = build_hamiltonian(params, w)
    evals, evecs = linalg.eigh(h)
    bare = np.arange(params.dim)
    cols = match_eigenstates(evecs, bare)
    return _fix_phases(evecs[:, cols], bare), evals[cols]


def pair_splitting(
    params: DeviceParams,
    omega: np.ndarray,
    label_a,
    label_b,
    scan_qubit: int = 1,
    scan_halfwidth_mhz: float = 25.0,
) -> float:
    """|J| for the dressed pair adiabatically connected to ``{a, b}``.

    Exact-diagonalization oracle: scans the frequency of ``scan_qubit``
    through the avoided crossing around ``omega`` and returns half the
    minimum eigenvalue splitting.  The scan absorbs the dressed-frequency
    shifts that would otherwise masquerade as coupling; at a true crossing
    (zero coupling) the minimum splitting vanishes.

    Raises:
        BasisError: if the pair is not spectrally isolated anywhere in the
            scan (overlap matching fails).
    """
    d = params.levels
    terms = HamiltonianTerms(params)
    ia = linalg.fock_index(label_a, d)
    ib = linalg.fock_index(label_b, d)
    w0 = np.asarray(omega, dtype=float)
    halfwidth = mhz_to_angular(scan_halfwidth_mhz)

    def splitting(x: float) -> float:
        w = w0.copy()
        w[scan_qubit - 1] += x
        evals, evecs = np.linalg.eigh(terms.h(w))
        weight = np.abs(evecs[ia, :]) ** 2 + np.abs(evecs[ib, :]) ** 2
        top2 = np.argsort(weight)[-2:]
        if np.any(weight[top2] <= 0.5):
            raise BasisError(
                f"manifold {{{label_a}, {label_b}}} not spectrally isolated "
                f"(subspace weights {weight[top2].round(3)})"
            )
        return float(abs(evals[top2[0]] - evals[top2[1]]))

    res = minimize_scalar(
        splitting, bounds=(-halfwidth, halfwidth), method="bounded",
        options={"xatol": 1e-12},
    )
    return 0.5 * min(res.fun, splitting(0.0))


@dataclass(frozen=True)
class ExtractedCouplings:
    """Numerically extracted NNN exchange strengths (rad/ns, magnitudes)."""

    j1_ground: float
    j1_excited: float

    @property
    def on_off_ratio(self) -> float:
        return np.inf if self.j1_excited == 0 else self.j1_ground / self.j1_excited


def extract_couplings_numeric(params: DeviceParams, omega: np.ndarray) -> ExtractedCouplings:
    """Exact-diagonalization values of |J1(0)| and |J1(1)| at an interaction
    point where the outer qubits are resonant (omega_1 = omega_3)."""
    j10 = pair_splitting(params, omega, (1, 0, 0), (0, 0, 1))
    j11 = pair_splitting(params, omega, (1, 1, 0), (0, 1, 1))
    return ExtractedCouplings(j1_ground=j10, j1_excited=j11)
