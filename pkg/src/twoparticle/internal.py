"""Internal degree of freedom carried by each particle (polarization, spin).

The internal space is two-dimensional. States are immutable unit vectors;
the overlap between the tags of the two sources controls how
distinguishable the particles are.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class InternalState:
    """Unit vector in C^2.

    Amplitudes within ``NORM_TOLERANCE`` of unit norm are renormalized;
    anything further off is rejected.
    """

    amplitudes: tuple[complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 2:
            raise ValueError(f"internal state must have 2 amplitudes, got {len(amps)}")
        norm = math.sqrt(abs(amps[0]) ** 2 + abs(amps[1]) ** 2)
        if not math.isfinite(norm) or abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"internal state is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", (amps[0] / norm, amps[1] / norm))

    @classmethod
    def from_vector(cls, vec) -> "InternalState":
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls((complex(vec[0]), complex(vec[1])) if vec.size == 2 else tuple(vec))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def orthogonal(self) -> "InternalState":
        """The state orthogonal to this one (unique up to a phase)."""
        a0, a1 = self.amplitudes
        return InternalState((-a1.conjugate(), a0.conjugate()))

    def with_phase(self, phase: float) -> "InternalState":
        g = cmath.exp(1j * phase)
        return InternalState((g * self.amplitudes[0], g * self.amplitudes[1]))


@dataclass(frozen=True)
class Overlap:
    """Inner product <a|b>, kept complex so eraser projections see phases."""

    value: complex

    @property
    def modulus(self) -> float:
        return min(abs(self.value), 1.0)


def as_state(obj) -> InternalState:
    if isinstance(obj, InternalState):
        return obj
    return InternalState.from_vector(obj)


def make_state(theta: float, phi: float) -> InternalState:
    """Bloch-sphere state (cos(theta/2), e^{i phi} sin(theta/2))."""
    theta = math.fmod(theta, 2 * math.pi)
    phi = math.fmod(phi, 2 * math.pi)
    return InternalState((math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2)))


def overlap(a: InternalState, b: InternalState) -> Overlap:
    a, b = as_state(a), as_state(b)
    return Overlap(complex(np.vdot(a.vector, b.vector)))


def distinguishability_uqsd(a: InternalState, b: InternalState) -> float:
    """Optimal unambiguous-discrimination success probability, 1 - |<a|b>|."""
    return 1.0 - overlap(a, b).modulus


def distinguishability(a: InternalState, b: InternalState) -> float:
    """Particle distinguishability 1 - |<a|b>|^2, i.e. D_Q (2 - D_Q)."""
    return 1.0 - overlap(a, b).modulus ** 2


def pair_with_overlap(s: float, phase: float = 0.0) -> tuple[InternalState, InternalState]:
    """Return (dA, dB) with <dA|dB> = s; ``phase`` is the Bloch azimuth of dB.

    dA sits on the north pole; dB is the Bloch state at polar angle
    2 arccos(s), written with exact amplitudes (s, sqrt(1 - s^2) e^{i phase})
    so that s = 0 and s = 1 are hit without rounding.
    """
    if not 0.0 <= s <= 1.0 + 1e-12:
        raise ValueError(f"overlap modulus must lie in [0, 1], got {s}")
    s = min(float(s), 1.0)
    dB = InternalState((s, math.sqrt(1.0 - s * s) * cmath.exp(1j * phase)))
    return make_state(0.0, 0.0), dB


def equal_overlap_basis(dA: InternalState, dB: InternalState) -> tuple[InternalState, InternalState]:
    """Orthonormal pair (e, e_perp), each with equal overlap modulus on dA and dB.

    For orthogonal tags this is the usual (dA + dB)/sqrt(2), (dA - dB)/sqrt(2)
    eraser basis.
    """
    dA, dB = as_state(dA), as_state(dB)
    ov = overlap(dA, dB).value
    rot = cmath.exp(-1j * cmath.phase(ov)) if abs(ov) > 0 else 1.0
    v = dA.vector + rot * dB.vector
    e = InternalState.from_vector(v / np.linalg.norm(v))
    # keep e_perp as the literal (dA - dB)/sqrt(2) direction for orthogonal tags
    w = dA.vector - rot * dB.vector
    if np.linalg.norm(w) > 1e-12:
        w = w - np.vdot(e.vector, w) * e.vector
        e_perp = InternalState.from_vector(w / np.linalg.norm(w))
    else:
        e_perp = e.orthogonal()
    return e, e_perp
