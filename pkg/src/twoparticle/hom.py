"""Hong-Ou-Mandel experiment with internally tagged particles.

Two particles leave sources A and B, meet at a balanced beam splitter and
are counted at detectors D1 and D2. The state is kept as an explicit list
of first-quantized terms so the beam-splitter expansion can be inspected
term by term; ``brute_force_coincidence`` evaluates detector projections on
the full tensor-product vector without using any closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .internal import InternalState, as_state, overlap

SPATIAL_LABELS = ("A", "B", "D1", "D2")
_LABEL_INDEX = {label: i for i, label in enumerate(SPATIAL_LABELS)}

INV_SQRT2 = 1.0 / math.sqrt(2.0)

# rows: inputs A, B; columns: outputs D1, D2
BEAM_SPLITTER = np.array([[INV_SQRT2, -INV_SQRT2], [INV_SQRT2, INV_SQRT2]])
_BS_RULES = {
    "A": ((INV_SQRT2, "D1"), (-INV_SQRT2, "D2")),
    "B": ((INV_SQRT2, "D1"), (INV_SQRT2, "D2")),
}


@dataclass(frozen=True)
class Term:
    """coefficient * |l1>_1 |l2>_2 |i1>_1 |i2>_2"""

    coefficient: complex
    labels: tuple[str, str]
    internal: tuple[InternalState, InternalState]

    def swapped(self) -> "Term":
        return Term(self.coefficient, self.labels[::-1], self.internal[::-1])


@dataclass(frozen=True)
class HomState:
    terms: tuple[Term, ...]

    def to_vector(self) -> np.ndarray:
        """Two-particle vector in (spatial x internal) x (spatial x internal), shape (64,)."""
        vec = np.zeros(64, dtype=complex)
        for t in self.terms:
            p1 = np.kron(_onehot(t.labels[0]), t.internal[0].vector)
            p2 = np.kron(_onehot(t.labels[1]), t.internal[1].vector)
            vec += t.coefficient * np.kron(p1, p2)
        return vec

    def norm_squared(self) -> float:
        v = self.to_vector()
        return float(np.vdot(v, v).real)

    def swap_particles(self) -> "HomState":
        return HomState(tuple(t.swapped() for t in self.terms))

    def is_exchange_symmetric(self, eta: int = 1, atol: float = 1e-12) -> bool:
        """True when relabeling 1 <-> 2 returns eta times the state."""
        return bool(np.allclose(self.swap_particles().to_vector(), eta * self.to_vector(), atol=atol))


def _onehot(label: str) -> np.ndarray:
    e = np.zeros(len(SPATIAL_LABELS))
    e[_LABEL_INDEX[label]] = 1.0
    return e


def _check_eta(eta: int) -> int:
    if eta not in (1, -1):
        raise ValueError(f"exchange sign must be +1 or -1, got {eta}")
    return int(eta)


def build_input_state(dA, dB, eta: int = 1) -> HomState:
    """(|A>_1|B>_2|dA>_1|dB>_2 + eta |A>_2|B>_1|dA>_2|dB>_1) / sqrt(2).

    ``eta = -1`` gives the antisymmetrized (fermionic) variant.
    """
    dA, dB = as_state(dA), as_state(dB)
    eta = _check_eta(eta)
    state = HomState((
        Term(INV_SQRT2, ("A", "B"), (dA, dB)),
        Term(eta * INV_SQRT2, ("B", "A"), (dB, dA)),
    ))
    norm2 = state.norm_squared()
    if abs(norm2 - 1.0) > 1e-9:
        raise ValueError(f"input state norm^2 = {norm2}, expected 1")
    return state


def apply_beamsplitter(state: HomState) -> HomState:
    """Replace every source label by its superposition of detector labels."""
    out = []
    for t in state.terms:
        for label in t.labels:
            if label not in _BS_RULES:
                raise ValueError(f"label {label!r} is already in the detector basis")
        for c1, l1 in _BS_RULES[t.labels[0]]:
            for c2, l2 in _BS_RULES[t.labels[1]]:
                out.append(Term(t.coefficient * c1 * c2, (l1, l2), t.internal))
    return HomState(tuple(out))


def detector_amplitude(state: HomState, label1: str, label2: str) -> np.ndarray:
    """Internal-space amplitude (2x2) left after projecting particle 1 on
    ``label1`` and particle 2 on ``label2``."""
    v = state.to_vector().reshape(4, 2, 4, 2)
    return v[_LABEL_INDEX[label1], :, _LABEL_INDEX[label2], :]


def brute_force_coincidence(dA, dB, eta: int = 1) -> float:
    """Coincidence probability from explicit projections of U|Psi>.

    Sums the squared norms of the two particle orderings (1 at D1, 2 at D2)
    and (1 at D2, 2 at D1).
    """
    out = apply_beamsplitter(build_input_state(dA, dB, eta))
    total = 0.0
    for l1, l2 in (("D1", "D2"), ("D2", "D1")):
        amp = detector_amplitude(out, l1, l2)
        total += float(np.vdot(amp, amp).real)
    return total


def coincidence_probability(dA, dB, eta: int = 1) -> float:
    """P_C = (1 - eta |<dA|dB>|^2) / 2."""
    s = overlap(dA, dB).modulus
    return 0.5 * (1.0 - _check_eta(eta) * s * s)


def hom_visibility(dA, dB, eta: int = 1) -> float:
    """|C_max - C_min| / C_max with C_max = 1/2 (particles arriving apart)."""
    c_max = 0.5
    c_min = coincidence_probability(dA, dB, eta)
    return abs(c_max - c_min) / c_max


def temporal_overlap(tau, sigma_t: float):
    """Overlap of two Gaussian temporal modes of width ``sigma_t`` offset by ``tau``."""
    return np.exp(-np.square(tau) / (4.0 * sigma_t**2))


def delay_scan(dA, dB, sigma_t: float, taus, eta: int = 1) -> list[tuple[float, float]]:
    """Coincidence probability versus relative arrival delay.

    P_C(tau) = (1 - eta s^2 m(tau)^2) / 2; tau = 0 gives the dip value and
    large |tau| tends to 1/2.
    """
    if not sigma_t > 0:
        raise ValueError(f"sigma_t must be positive, got {sigma_t}")
    s2 = overlap(dA, dB).modulus ** 2
    eta = _check_eta(eta)
    taus = np.asarray(taus, dtype=float)
    pc = 0.5 * (1.0 - eta * s2 * temporal_overlap(taus, sigma_t) ** 2)
    return [(float(t), float(p)) for t, p in zip(taus, pc)]


def eraser_joint_probability(dA, dB, e1, e2, eta: int = 1) -> float:
    """P(coincidence, internal outcome e1 at D1 and e2 at D2).

    Closed form (1/4)|<e1|dA><e2|dB> - eta <e1|dB><e2|dA>|^2.
    """
    dA, dB, e1, e2 = map(as_state, (dA, dB, e1, e2))
    a = overlap(e1, dA).value * overlap(e2, dB).value
    b = overlap(e1, dB).value * overlap(e2, dA).value
    return 0.25 * abs(a - _check_eta(eta) * b) ** 2


def brute_force_eraser_probability(dA, dB, e1, e2, eta: int = 1) -> float:
    """Same quantity as ``eraser_joint_probability`` via explicit projection."""
    e1, e2 = as_state(e1), as_state(e2)
    out = apply_beamsplitter(build_input_state(dA, dB, eta))
    total = 0.0
    # (1 at D1 carrying e1, 2 at D2 carrying e2) and the swapped ordering
    amp = detector_amplitude(out, "D1", "D2")
    total += abs(e1.vector.conj() @ amp @ e2.vector.conj()) ** 2
    amp = detector_amplitude(out, "D2", "D1")
    total += abs(e2.vector.conj() @ amp @ e1.vector.conj()) ** 2
    return float(total)
