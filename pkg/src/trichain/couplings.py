"""Closed-form effective couplings for the dispersively coupled chain.

Second-order (Schrieffer-Wolff) exchange strengths between the outer qubits,
parasitic ZZ strengths, dressed frequencies, and the coefficient set of the
effective three-qubit Pauli Hamiltonian.

All expressions are degree-1 homogeneous in the frequency-like arguments
(g, Delta, alpha), so they may be evaluated in any single consistent unit
(rad/ns internally; plain MHz works equally well in tests).  They are also
sign-general: a chain with the middle qubit below the outer ones and a
negative middle anharmonicity runs through the same code path.

Poles raise :class:`SingularityError` naming the vanishing denominator
rather than returning infinities, so parameter scans can record missing
points with a reason.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import DeviceParams
from .errors import SingularityError

__all__ = [
    "j1_ground",
    "j1_excited",
    "j2_ground",
    "j2_excited",
    "zz_nn",
    "delta_shift",
    "zz_nnn",
    "two_level_effective",
    "effective_coefficients",
    "EffectiveCoefficients",
    "ManifoldEnergies",
]


def _guard(value: float, symbol: str, *parts: float) -> float:
    """Reject a vanishing denominator.

    ``parts`` are the terms whose cancellation produced ``value``; a result
    smaller than 1e-9 of their magnitude is treated as an on-pole evaluation
    (grid scans land on poles through floating-point cancellation, not exact
    zeros)."""
    scale = max((abs(p) for p in parts), default=0.0)
    if value == 0.0 or abs(value) < 1e-9 * scale:
        raise SingularityError(symbol)
    return value


def _finite(value, symbol: str):
    if not np.all(np.isfinite(value)):
        raise SingularityError(symbol, f"non-finite result near pole of {symbol}")
    return value


def j1_ground(g1: float, g3: float, d1: float, d3: float) -> float:
    """Exchange strength in the one-excitation manifold {|100>, |001>}
    with the middle qubit in its ground state: g1 g3 (d1 + d3) / (2 d1 d3)."""
    _guard(d1, "Delta_1")
    _guard(d3, "Delta_3")
    return _finite(g1 * g3 * (d1 + d3) / (2.0 * d1 * d3), "Delta_1*Delta_3")


def j1_excited(g1: float, g3: float, d1: float, d3: float, a2: float) -> float:
    """Exchange strength for {|110>, |011>} (middle qubit excited).

    Two interfering virtual paths; vanishes identically at a2 = -d1 = -d3,
    which is the coupling switch-off condition.
    """
    _guard(d1, "Delta_1")
    _guard(d3, "Delta_3")
    _guard(d1 - a2, "Delta_1-alpha_2", d1, a2)
    _guard(d3 - a2, "Delta_3-alpha_2", d3, a2)
    term1 = (d1 + a2) / (d1 * (d1 - a2))
    term3 = (d3 + a2) / (d3 * (d3 - a2))
    return _finite(0.5 * g1 * g3 * (term1 + term3), "Delta_j(Delta_j-alpha_2)")


def j2_ground(g1, g3, d1, d3, a1, a3) -> tuple[float, float]:
    """Two-excitation exchange strengths with the middle qubit in |0>:

    I couples |101> <-> |002>, II couples |101> <-> |200> (the 1<->3 image).
    """
    _guard(d1, "Delta_1")
    _guard(d3, "Delta_3")
    _guard(d3 + a3, "Delta_3+alpha_3", d3, a3)
    _guard(d1 + a1, "Delta_1+alpha_1", d1, a1)
    sq2 = np.sqrt(2.0)
    j_i = sq2 * g1 * g3 * (d1 + d3 + a3) / (2.0 * d1 * (d3 + a3))
    j_ii = sq2 * g3 * g1 * (d3 + d1 + a1) / (2.0 * d3 * (d1 + a1))
    return _finite(j_i, "J2(0),I"), _finite(j_ii, "J2(0),II")


def _j2_excited_one(g1, g3, d1, d3, a1, a3, a2) -> float:
    _guard(d1, "Delta_1")
    _guard(d1 - a2, "Delta_1-alpha_2", d1, a2)
    _guard(d3 + a3, "Delta_3+alpha_3", d3, a3)
    _guard(d3 - a2 + a3, "Delta_3-alpha_2+alpha_3", d3, a2, a3)
    u = a3 - d1 + d3
    num = (
        2.0 * d1 * (d1**2 - a2**2)
        + (3.0 * d1**2 - a2**2) * u
        + (a2 + d1) * u**2
    )
    den = 2.0 * d1 * (d1 - a2) * (d3 + a3) * (d3 - a2 + a3)
    return _finite(np.sqrt(2.0) * g1 * g3 * num / den, "J2(1)")


def j2_excited(g1, g3, d1, d3, a1, a3, a2) -> tuple[float, float]:
    """Two-excitation exchange strengths with the middle qubit in |1>:

    I couples |111> <-> |012>, II couples |111> <-> |210>.  Reduces exactly
    to :func:`j2_ground` at a2 = 0 (linear-resonator limit).
    """
    j_i = _j2_excited_one(g1, g3, d1, d3, a1, a3, a2)
    j_ii = _j2_excited_one(g3, g1, d3, d1, a3, a1, a2)
    return j_i, j_ii


def zz_nn(g: float, d: float, a: float, a2: float) -> float:
    """Parasitic nearest-neighbor ZZ strength zeta'_j between an outer qubit
    and the middle qubit: 2 g^2 (a + a2) / ((d - a2)(d + a)).

    Vanishes identically for opposite anharmonicities a = -a2.
    """
    _guard(d - a2, "Delta_j-alpha_2", d, a2)
    _guard(d + a, "Delta_j+alpha_j", d, a)
    return _finite(2.0 * g**2 * (a + a2) / ((d - a2) * (d + a)), "zz_nn")


def delta_shift(g: float, d: float, a: float, a2: float) -> float:
    """Higher-level frequency shift delta_j of the doubly excited outer qubit
    when the middle qubit is excited."""
    _guard(2.0 * a + d, "2alpha_j+Delta_j", a, d)
    _guard(d + a - a2, "Delta_j+alpha_j-alpha_2", d, a, a2)
    _guard(d, "Delta_j")
    return _finite(
        g**2 * (5.0 * a + d + 3.0 * a2) / ((2.0 * a + d) * (d + a - a2)) - g**2 / d,
        "delta_shift",
    )


def zz_nnn(
    j2_0: tuple[float, float],
    j2_1: tuple[float, float],
    delta: float,
    a1: float,
    a3: float,
    zz1: float = 0.0,
    zz3: float = 0.0,
    shift1: float = 0.0,
    shift3: float = 0.0,
) -> tuple[float, float]:
    """Next-nearest-neighbor ZZ strengths (zeta_101, zeta_111).

    ``delta`` is the dressed frequency difference omega_1 - omega_3 of the
    outer qubits.  zeta_111 uses denominators shifted by the nearest-neighbor
    ZZ terms and the higher-level shifts of the excited-middle manifold.
    """
    den_a = _guard(delta - a3, "Delta-alpha_3", delta, a3)
    den_b = _guard(delta + a1, "Delta+alpha_1", delta, a1)
    z101 = j2_0[0] ** 2 / den_a - j2_0[1] ** 2 / den_b
    den_c = _guard(delta - a3 + zz1 + zz3 - shift3, "Delta-alpha_3+zeta'-delta_3", delta, a3)
    den_d = _guard(delta + a1 - zz1 - zz3 + shift1, "Delta+alpha_1-zeta'+delta_1", delta, a1)
    z111 = j2_1[0] ** 2 / den_c - j2_1[1] ** 2 / den_d
    return _finite(z101, "zeta_101"), _finite(z111, "zeta_111")


def two_level_effective(g1, g3, d1, d3, wt1, wt2, wt3):
    """Second-order effective model with each qubit as an ideal two-level
    system: dressed frequencies and the three-body exchange strength J.

    Note the sign convention: this J equals minus :func:`j1_ground`.  Both
    conventions appear in the literature; physical observables (splittings,
    swap periods) depend only on |J|.
    """
    _guard(d1, "Delta_1")
    _guard(d3, "Delta_3")
    w1 = wt1 + g1**2 / d1
    w2 = wt2 - (g1**2 / d1 + g3**2 / d3)
    w3 = wt3 + g3**2 / d3
    j = -g1 * g3 * (d1 + d3) / (2.0 * d1 * d3)
    return w1, w2, w3, _finite(j, "J")


@dataclass(frozen=True)
class ManifoldEnergies:
    """Diagonal energies of the excited-middle-qubit manifold (rad/ns) plus
    the dressed single-qubit frequencies entering the ground-state block."""

    e_010: float
    e_011: float
    e_110: float
    e_111: float
    e_012: float
    e_210: float
    omega_p1: float  # dressed 0->1 transition of Q1
    omega_p2: float
    omega_p3: float
    omega_pp1: float  # dressed frequency entering doubly excited outer levels
    omega_pp3: float


@dataclass(frozen=True)
class EffectiveCoefficients:
    """Every coefficient of the effective three-qubit Pauli Hamiltonian.

    All angular frequencies in rad/ns.  The identities
    ``j_z = (j1_excited - j1_ground)/2``, ``j_i = (j1_excited + j1_ground)/2``,
    ``zeta_z = (zeta_111 - zeta_101)/4``, ``zeta_i = (zeta_111 + zeta_101)/4``
    hold by construction.
    """

    omega1: float
    omega2: float
    omega3: float
    zeta1: float
    zeta3: float
    j_z: float
    j_i: float
    zeta_z: float
    zeta_i: float
    j1_ground: float
    j1_excited: float
    j2_ground: tuple[float, float]
    j2_excited: tuple[float, float]
    zeta_101: float
    zeta_111: float
    zz_nn_1: float
    zz_nn_3: float
    shift_1: float
    shift_3: float
    manifold: ManifoldEnergies
    dispersive_ratios: tuple[float, float]


def effective_coefficients(
    params: DeviceParams, omega: np.ndarray | None = None
) -> EffectiveCoefficients:
    """Assemble the full effective-Hamiltonian coefficient set at a bias point.

    Args:
        params: device (couplings, anharmonicities).
        omega: per-qubit angular frequencies; defaults to the idle point.
    """
    w = params.omega_idle if omega is None else np.asarray(omega, dtype=float)
    g1, g3 = params.g
    a1, a2, a3 = params.alpha
    d1 = w[0] - w[1]
    d3 = w[2] - w[1]

    j10 = j1_ground(g1, g3, d1, d3)
    j11 = j1_excited(g1, g3, d1, d3, a2)
    j2_0 = j2_ground(g1, g3, d1, d3, a1, a3)
    j2_1 = j2_excited(g1, g3, d1, d3, a1, a3, a2)
    zz1 = zz_nn(g1, d1, a1, a2)
    zz3 = zz_nn(g3, d3, a3, a2)
    sh1 = delta_shift(g1, d1, a1, a2)
    sh3 = delta_shift(g3, d3, a3, a2)

    wp1 = w[0] + g1**2 / _guard(d1, "Delta_1")
    wp3 = w[2] + g3**2 / _guard(d3, "Delta_3")
    wp2 = w[1] - g1**2 / d1 - g3**2 / d3
    wpp1 = w[0] + g1**2 / _guard(d1 + a1, "Delta_1+alpha_1", d1, a1)
    wpp3 = w[2] + g3**2 / _guard(d3 + a3, "Delta_3+alpha_3", d3, a3)

    z101, z111 = zz_nnn(j2_0, j2_1, wp1 - wp3, a1, a3, zz1, zz3, sh1, sh3)

    manifold = ManifoldEnergies(
        e_010=wp2,
        e_011=wp2 + wp3 + zz3,
        e_110=wp2 + wp1 + zz1,
        e_111=wp2 + wp3 + wp1 + zz3 + zz1,
        e_012=wp2 + 2.0 * wp3 + a3 + sh3,
        e_210=wp2 + 2.0 * wp1 + a1 + sh1,
        omega_p1=wp1,
        omega_p2=wp2,
        omega_p3=wp3,
        omega_pp1=wpp1,
        omega_pp3=wpp3,
    )
    return EffectiveCoefficients(
        omega1=wp1 + zz1 / 2.0 + (z111 + z101) / 4.0,
        omega2=wp2 + (zz1 + zz3) / 2.0 + (z111 - z101) / 4.0,
        omega3=wp3 + zz3 / 2.0 + (z111 + z101) / 4.0,
        zeta1=zz1 / 2.0 + (z111 - z101) / 4.0,
        zeta3=zz3 / 2.0 + (z111 - z101) / 4.0,
        j_z=(j11 - j10) / 2.0,
        j_i=(j11 + j10) / 2.0,
        zeta_z=(z111 - z101) / 4.0,
        zeta_i=(z111 + z101) / 4.0,
        j1_ground=j10,
        j1_excited=j11,
        j2_ground=j2_0,
        j2_excited=j2_1,
        zeta_101=z101,
        zeta_111=z111,
        zz_nn_1=zz1,
        zz_nn_3=zz3,
        shift_1=sh1,
        shift_3=sh3,
        manifold=manifold,
        dispersive_ratios=tuple(params.dispersive_ratios(w)),
    )
