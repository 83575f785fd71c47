"""Rounded-trapezoid frequency trajectories for the outer qubits.

The ramp shape is a pair of error functions; the hold time is the interval
between the midpoints of the two ramps, so t_hold = t_g - t_ramp with
t_ramp = 4 sqrt(2) sigma.  The trajectory does not exactly reach the idle
frequency at t = 0 (erf tails); the residual is bounded by
|omega_I - omega_i| * erfc(2) ~ 0.5% and simulations start in the idle-point
eigenbasis by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .errors import ValidationError

RAMP_FACTOR = 4.0 * np.sqrt(2.0)


@dataclass(frozen=True)
class PulseSchedule:
    """Per-qubit frequency trajectories over one gate.

    ``omega_idle`` and ``omega_target`` are angular (rad/ns) per-qubit
    frequencies; the middle qubit's target equals its idle value (its
    frequency is fixed throughout the gate).  The calibration offsets
    delta1/delta3 are already folded into the targets and kept only for
    reporting.
    """

    omega_idle: tuple[float, float, float]
    omega_target: tuple[float, float, float]
    sigma: float
    t_hold: float
    delta1: float = 0.0
    delta3: float = 0.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if self.t_hold < 0:
            raise ValidationError(f"t_hold must be non-negative, got {self.t_hold}")

    @property
    def t_ramp(self) -> float:
        return RAMP_FACTOR * self.sigma

    @property
    def t_gate(self) -> float:
        return self.t_hold + self.t_ramp

    @property
    def overshoot(self) -> float:
        """Frequency overshoot delta_s = delta1 - delta3 applied to qubit 1."""
        return self.delta1 - self.delta3

    def trajectory(self, qubit: int, t):
        """omega(t) of one qubit (rad/ns).  ``t`` may be a scalar or array in
        [0, t_gate]."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.t_gate + 1e-12):
            raise ValidationError(f"time outside [0, {self.t_gate}] ns")
        wi = self.omega_idle[qubit - 1]
        wt = self.omega_target[qubit - 1]
        tr = self.t_ramp
        s = np.sqrt(2.0) * self.sigma
        envelope = erf((t - tr / 2.0) / s) - erf((t - self.t_gate + tr / 2.0) / s)
        out = wi + 0.5 * (wt - wi) * envelope
        return out if out.ndim else float(out)

    def frequencies_at(self, t) -> np.ndarray:
        """Per-qubit angular frequencies, shape (3,) or (len(t), 3)."""
        cols = [self.trajectory(q, t) for q in (1, 2, 3)]
        return np.stack(cols, axis=-1)


def schedule_from_calibration(
    omega_idle,
    omega_interaction: float,
    delta1: float = 0.0,
    delta3: float = 0.0,
    t_hold: float = 0.0,
    sigma: float = 1.0,
) -> PulseSchedule:
    """Build a gate schedule from an ideal interaction point plus offsets.

    Qubit 1 targets ``omega_interaction + delta1``, qubit 3 targets
    ``omega_interaction + delta3`` (all angular rad/ns); the middle qubit
    stays at its idle frequency.
    """
    wi = tuple(float(x) for x in np.asarray(omega_idle, dtype=float))
    targets = (
        float(omega_interaction) + float(delta1),
        wi[1],
        float(omega_interaction) + float(delta3),
    )
    return PulseSchedule(
        omega_idle=wi,
        omega_target=targets,
        sigma=float(sigma),
        t_hold=float(t_hold),
        delta1=float(delta1),
        delta3=float(delta3),
    )


def flat_schedule(omega, t_hold: float, sigma: float = 1.0) -> PulseSchedule:
    """Schedule with all qubits pinned at ``omega`` (no excursion)."""
    wi = tuple(float(x) for x in np.asarray(omega, dtype=float))
    return PulseSchedule(omega_idle=wi, omega_target=wi, sigma=sigma, t_hold=t_hold)
