"""Dense complex linear algebra and bosonic operator construction.

All operators are plain ``numpy.ndarray`` matrices (complex128, row-major).
The three-oscillator Hilbert space uses the flat-index convention
``idx = n1*d**2 + n2*d + n3`` so qubit 1 is the leftmost (most significant)
tensor factor.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidDimensionError, ValidationError

__all__ = [
    "annihilation",
    "number_op",
    "kron3",
    "embed3",
    "fock_index",
    "fock_label",
    "computational_labels",
    "computational_indices",
    "is_hermitian",
    "is_unitary",
    "eigh",
    "expm_skew_hermitian",
]


def is_hermitian(mat: np.ndarray, tol: float = 1e-9) -> bool:
    """True if ``mat`` equals its conjugate transpose within relative ``tol``."""
    mat = np.asarray(mat)
    scale = max(np.abs(mat).max(), 1.0)
    return bool(np.abs(mat - mat.conj().T).max() <= tol * scale)


def is_unitary(mat: np.ndarray, tol: float = 1e-10) -> bool:
    """True if ``mat @ mat.conj().T`` is the identity within absolute ``tol``."""
    mat = np.asarray(mat)
    if mat.shape[0] != mat.shape[1]:
        return False
    eye = np.eye(mat.shape[0])
    return bool(np.abs(mat @ mat.conj().T - eye).max() <= tol)


def annihilation(d: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, <n-1|a|n> = sqrt(n).

    Args:
        d: number of retained oscillator levels (>= 2).
    """
    if d < 2:
        raise InvalidDimensionError(f"need at least 2 levels, got d={d}")
    a = np.zeros((d, d))
    ns = np.arange(1, d)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def number_op(d: int) -> np.ndarray:
    """Diagonal number operator diag(0, 1, ..., d-1)."""
    if d < 2:
        raise InvalidDimensionError(f"need at least 2 levels, got d={d}")
    return np.diag(np.arange(d, dtype=float))


def kron3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b (x) c with qubit 1 leftmost."""
    for m in (a, b, c):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"kron3 needs square matrices, got shape {m.shape}")
    return np.kron(np.kron(a, b), c)


def embed3(op: np.ndarray, qubit: int, d: int) -> np.ndarray:
    """Embed a single-oscillator operator on ``qubit`` (1, 2 or 3) into d^3."""
    if qubit not in (1, 2, 3):
        raise InvalidDimensionError(f"qubit index must be 1, 2 or 3, got {qubit}")
    eye = np.eye(d)
    ops = [eye, eye, eye]
    ops[qubit - 1] = op
    return kron3(*ops)


def fock_index(occupations, d: int) -> int:
    """Flat index of the Fock label (n1, n2, n3)."""
    n1, n2, n3 = occupations
    for n in (n1, n2, n3):
        if not 0 <= n < d:
            raise InvalidDimensionError(f"occupation {n} outside [0, {d})")
    return n1 * d * d + n2 * d + n3


def fock_label(index: int, d: int) -> tuple[int, int, int]:
    """Inverse of :func:`fock_index`."""
    if not 0 <= index < d**3:
        raise InvalidDimensionError(f"index {index} outside [0, {d**3})")
    n1, rest = divmod(index, d * d)
    n2, n3 = divmod(rest, d)
    return (n1, n2, n3)


def computational_labels() -> list[tuple[int, int, int]]:
    """The eight computational labels (i, j, k) in flat-index order."""
    return [(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]


def computational_indices(d: int) -> np.ndarray:
    """Flat indices of the computational labels in the d^3 space."""
    return np.array([fock_index(lbl, d) for lbl in computational_labels()])


def eigh(h: np.ndarray, tol: float = 1e-9):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix V) with H V = V diag(w).

    Raises:
        ValidationError: if ``h`` is not Hermitian within ``tol`` (relative).
    """
    h = np.asarray(h)
    if not is_hermitian(h, tol):
        raise ValidationError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return w, v


def expm_skew_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h``, via eigendecomposition.

    Unitary to round-off by construction, unlike a truncated series.
    """
    w, v = eigh(h)
    phases = np.exp(-1j * w * t)
    return (v * phases) @ v.conj().T
