"""Hanbury Brown-Twiss experiment with two Gaussian sources.

Particles start as Gaussian packets of width ``epsilon`` centred at +x0 and
-x0, each carrying an internal tag, and spread freely until they reach
detectors at x1 and x2. Natural units: hbar = 1, so ``delta = 2 t / m``.

Shorthands used throughout, with D = eps^4 + delta^2:

* envelope     exp(-2 eps^2 (x1^2 + x2^2 + 2 x0^2) / D)
* cosh rate    4 eps^2 x0 / D   (incoherent two-packet baseline)
* fringe wavenumber  4 delta x0 / D
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import propagate
from .propagate import GridError
from .internal import as_state, overlap


class ExchangeSign(enum.IntEnum):
    BOSON = 1
    FERMION = -1


def as_eta(eta) -> ExchangeSign:
    try:
        return ExchangeSign(int(eta))
    except (ValueError, TypeError):
        raise ValueError(f"exchange sign must be +1 or -1, got {eta!r}") from None


@dataclass(frozen=True)
class WavepacketConfig:
    """Source geometry and flight time.

    ``x0`` is half the source separation. Sources must be well separated
    (x0 >= 3 eps) so the two-term initial state is normalized.
    """

    x0: float
    epsilon: float
    mass: float = 1.0
    time: float = 0.0

    def __post_init__(self):
        for name in ("x0", "epsilon", "mass", "time"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.time < 0:
            raise ValueError(f"time must be non-negative, got {self.time}")
        if self.x0 <= 0:
            raise ValueError(f"x0 must be positive, got {self.x0}")
        if self.x0 < 3.0 * self.epsilon or math.exp(-4.0 * (self.x0 / self.epsilon) ** 2) >= 1e-12:
            raise ValueError(
                f"sources not well separated: x0={self.x0} < 3*epsilon={3 * self.epsilon}"
            )

    @classmethod
    def from_delta(cls, x0: float, epsilon: float, delta: float, mass: float = 1.0) -> "WavepacketConfig":
        return cls(x0=x0, epsilon=epsilon, mass=mass, time=delta * mass / 2.0)

    @classmethod
    def far_field(cls) -> "WavepacketConfig":
        """eps = 1, x0 = 10, delta = 200 (m = 1, t = 100)."""
        return cls(x0=10.0, epsilon=1.0, mass=1.0, time=100.0)

    @property
    def delta(self) -> float:
        return 2.0 * self.time / self.mass

    @property
    def sigma_sq(self) -> float:
        return self.epsilon**2 + self.delta**2 / self.epsilon**2

    @property
    def _denom(self) -> float:
        return self.epsilon**4 + self.delta**2

    @property
    def envelope_rate(self) -> float:
        """Coefficient c in exp(-2c(...)): eps^2 / (eps^4 + delta^2)."""
        return self.epsilon**2 / self._denom

    @property
    def cosh_rate(self) -> float:
        return 4.0 * self.epsilon**2 * self.x0 / self._denom

    @property
    def fringe_wavenumber(self) -> float:
        return 4.0 * self.delta * self.x0 / self._denom

    @property
    def fringe_period(self) -> float:
        k = self.fringe_wavenumber
        return 2.0 * math.pi / k if k > 0 else math.inf


# ---------------------------------------------------------------- analytic

def _evolved(u, cfg: WavepacketConfig):
    """Unnormalized evolved Gaussian exp(-u^2 / (eps^2 + i delta))."""
    return np.exp(-np.square(u) / (cfg.epsilon**2 + 1j * cfg.delta))


def initial_wavefunction(x1, x2, cfg: WavepacketConfig, eta, dA, dB) -> np.ndarray:
    """Tagged two-particle amplitude at t = 0.

    Returns the internal-space vector (particle 1 tag (x) particle 2 tag)
    with shape ``broadcast(x1, x2).shape + (4,)``.
    """
    eta = as_eta(eta)
    dA, dB = as_state(dA), as_state(dB)
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    eps2 = cfg.epsilon**2
    g1 = np.exp(-((x1 - cfg.x0) ** 2) / eps2 - (x2 + cfg.x0) ** 2 / eps2)
    g2 = np.exp(-((x1 + cfg.x0) ** 2) / eps2 - (x2 - cfg.x0) ** 2 / eps2)
    ab = np.kron(dA.vector, dB.vector)
    ba = np.kron(dB.vector, dA.vector)
    amp = g1[..., None] * ab + int(eta) * g2[..., None] * ba
    return amp / (math.sqrt(math.pi) * cfg.epsilon)


def _incoherent(x1, x2, cfg: WavepacketConfig):
    """envelope * cosh, written as the mean of the two packet-product densities."""
    c2 = 2.0 * cfg.envelope_rate
    a = (x1 - cfg.x0) ** 2 + (x2 + cfg.x0) ** 2
    b = (x1 + cfg.x0) ** 2 + (x2 - cfg.x0) ** 2
    return 0.5 * (np.exp(-c2 * a) + np.exp(-c2 * b))


def envelope(x1, x2, cfg: WavepacketConfig):
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    return np.exp(-2.0 * cfg.envelope_rate * (x1**2 + x2**2 + 2.0 * cfg.x0**2))


def _bracket_density(x1, x2, cfg: WavepacketConfig, eta: int, s: float):
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    fringe = np.cos(cfg.fringe_wavenumber * (x1 - x2))
    return _incoherent(x1, x2, cfg) + eta * s * s * envelope(x1, x2, cfg) * fringe


@lru_cache(maxsize=256)
def density_normalization(cfg: WavepacketConfig, eta: int, s: float) -> float:
    """Constant N making the analytic joint density integrate to one.

    The density separates in u = x1 + x2 and v = x1 - x2 (dx1 dx2 = du dv / 2),
    so two 1-D trapezoid quadratures suffice.
    """
    c = cfg.envelope_rate
    k = cfg.fringe_wavenumber
    width = math.sqrt(80.0 / c)
    h = 0.25 * min(1.0 / math.sqrt(c), 2.0 * math.pi / (k + math.sqrt(320.0 * c)))
    u = np.arange(-width, width + h, h)
    v = np.arange(-(width + 2.0 * cfg.x0), width + 2.0 * cfg.x0 + h, h)
    iu = np.trapezoid(np.exp(-c * u**2), u)
    baseline = 0.5 * (np.exp(-c * (v - 2 * cfg.x0) ** 2) + np.exp(-c * (v + 2 * cfg.x0) ** 2))
    cross = np.exp(-c * v**2 - 4.0 * c * cfg.x0**2) * np.cos(k * v)
    iv = np.trapezoid(baseline + int(eta) * s * s * cross, v)
    return 1.0 / (0.5 * iu * iv)


def joint_density_analytic(x1, x2, cfg: WavepacketConfig, eta, s: float):
    """Normalized coincidence density N * env * [cosh + eta s^2 cos]."""
    if not 0.0 <= s <= 1.0 + 1e-12:
        raise ValueError(f"overlap modulus must lie in [0, 1], got {s}")
    eta = int(as_eta(eta))
    s = min(float(s), 1.0)
    return density_normalization(cfg, eta, s) * _bracket_density(x1, x2, cfg, eta, s)


def hbt_eraser_density(x1, x2, cfg: WavepacketConfig, eta, dA, dB, e1, e2):
    """Joint density of a coincidence at (x1, x2) with tag outcomes e1 (particle
    at x1) and e2 (particle at x2).

    Carries the same normalization as ``joint_density_analytic``, so summing
    over an orthonormal basis for (e1, e2) reproduces it.
    """
    eta = int(as_eta(eta))
    dA, dB, e1, e2 = map(as_state, (dA, dB, e1, e2))
    a = overlap(e1, dA).value * overlap(e2, dB).value
    b = overlap(e1, dB).value * overlap(e2, dA).value
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    g1 = _evolved(x1 - cfg.x0, cfg) * _evolved(x2 + cfg.x0, cfg)
    g2 = _evolved(x1 + cfg.x0, cfg) * _evolved(x2 - cfg.x0, cfg)
    s = overlap(dA, dB).modulus
    norm = density_normalization(cfg, eta, s)
    return 0.5 * norm * np.abs(a * g1 + eta * b * g2) ** 2


# ---------------------------------------------------------------- numeric

@dataclass(frozen=True)
class GridSpec:
    """1-D grid used for each single-particle factor.

    ``dx`` defaults to eps / 4. ``method`` is ``"transfer"``, ``"fresnel"``
    or ``"auto"`` (transfer while the spread packet still fits the input
    grid, fresnel otherwise).
    """

    n: int = 2048
    dx: float | None = None
    method: str = "auto"


@dataclass(frozen=True)
class JointDensityGrid:
    x: np.ndarray
    density: np.ndarray  # density[i, j] at (x1, x2) = (x[i], x[j])
    incoherent: np.ndarray  # same without the exchange cross term
    norm: float
    method: str

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])


_TAIL = 1e-10


def propagate_numeric(cfg: WavepacketConfig, eta, dA, dB, grid: GridSpec = GridSpec()) -> JointDensityGrid:
    """Evolve each Gaussian factor of the initial state numerically and
    reassemble the tagged two-particle density.

    Raises ``GridError`` if the grid cannot hold the result: norm drift above
    1e-8, packet mass above 1e-10 at the edges, or fewer than 8 points per
    fringe period.
    """
    eta = int(as_eta(eta))
    dA, dB = as_state(dA), as_state(dB)
    dx = grid.dx if grid.dx is not None else cfg.epsilon / 4.0
    if dx > cfg.epsilon / 4.0 * (1 + 1e-12):
        raise GridError(f"dx={dx} does not resolve eps/4={cfg.epsilon / 4}")
    x_in = propagate.centered_grid(grid.n, dx)
    half_span = grid.n * dx / 2.0
    if cfg.x0 + 6.0 * cfg.epsilon > half_span:
        raise GridError("input grid does not contain the initial packets")

    method = grid.method
    if method == "auto":
        spread = math.sqrt(math.log(1.0 / _TAIL) / (2.0 * cfg.envelope_rate))
        method = "transfer" if cfg.x0 + spread < half_span else "fresnel"

    plus0 = propagate.gaussian_packet(x_in, cfg.x0, cfg.epsilon)
    minus0 = propagate.gaussian_packet(x_in, -cfg.x0, cfg.epsilon)
    if method == "transfer":
        x = x_in
        plus = propagate.transfer_propagate(plus0, dx, cfg.delta)
        minus = propagate.transfer_propagate(minus0, dx, cfg.delta)
    elif method == "fresnel":
        x, plus = propagate.fresnel_propagate(plus0, dx, cfg.delta)
        _, minus = propagate.fresnel_propagate(minus0, dx, cfg.delta)
    else:
        raise ValueError(f"unknown propagation method {grid.method!r}")
    h = float(x[1] - x[0])

    for name, f in (("+x0", plus), ("-x0", minus)):
        p = np.abs(f) ** 2
        drift = abs(np.sum(p) * h - 1.0)
        if drift > 1e-8:
            raise GridError(f"norm drift {drift:.3g} for packet at {name}")
        if max(p[0], p[-1]) > _TAIL * p.max():
            raise GridError(f"packet at {name} reaches the grid edge ({method} grid)")
    k = cfg.fringe_wavenumber
    if k > 0 and (2.0 * math.pi / k) / h < 8.0:
        raise GridError(f"fringe period sampled by {(2 * math.pi / k) / h:.1f} < 8 points")

    # psi = (T1 dA(x)dB + eta T2 dB(x)dA) / sqrt(2), T1 = plus(x1) minus(x2)
    ab = np.kron(dA.vector, dB.vector)
    ba = np.kron(dB.vector, dA.vector)
    tag_overlap = np.vdot(ab, ba)
    p_plus, p_minus = np.abs(plus) ** 2, np.abs(minus) ** 2
    incoherent = 0.5 * (np.outer(p_plus, p_minus) + np.outer(p_minus, p_plus))
    cross = np.outer(np.conj(plus) * minus, np.conj(minus) * plus)
    density = incoherent + eta * np.real(tag_overlap * cross)
    norm = float(np.sum(density) * h * h)
    return JointDensityGrid(x=x, density=density, incoherent=incoherent, norm=norm, method=method)


# ---------------------------------------------------------------- fringes

@dataclass(frozen=True)
class FringePattern:
    """Coincidence density along a line of detector separations.

    ``corrected`` is the density with the Gaussian envelope divided out and
    the incoherent cosh baseline replaced by one: 1 + (fringe term).
    """

    separations: np.ndarray
    densities: np.ndarray
    corrected: np.ndarray
    period: float

    def __post_init__(self):
        n = len(self.separations)
        if len(self.densities) != n or len(self.corrected) != n:
            raise ValueError("pattern arrays must have equal lengths")
        if np.any(np.asarray(self.densities) < 0):
            raise ValueError("densities must be non-negative")

    def __len__(self) -> int:
        return len(self.separations)


def separation_samples(cfg: WavepacketConfig, periods: float = 3.0, samples_per_period: int = 50) -> np.ndarray:
    """Separations j * period / samples_per_period covering ``periods`` periods
    centred on zero; with an even sample count both 0 and every half period
    are hit exactly."""
    if samples_per_period < 2:
        raise ValueError("need at least 2 samples per period")
    period = cfg.fringe_period
    if not math.isfinite(period):
        raise ValueError("no fringes at delta = 0")
    half = int(round(periods * samples_per_period / 2))
    return np.arange(-half, half + 1) * (period / samples_per_period)


def _line(separations, center: float):
    v = np.asarray(separations, float)
    return center + v / 2.0, center - v / 2.0


def _pattern(cfg, separations, center, density, baseline_weight, incoherent):
    x1, x2 = _line(separations, center)
    env = envelope(x1, x2, cfg)
    corrected = 1.0 + (density - incoherent) / (baseline_weight * env)
    return FringePattern(
        separations=np.asarray(separations, float),
        densities=np.asarray(density, float),
        corrected=corrected,
        period=cfg.fringe_period,
    )


def analytic_pattern(cfg: WavepacketConfig, eta, s: float, periods: float = 3.0,
                     samples_per_period: int = 50, center: float = 0.0) -> FringePattern:
    """Analytic density sampled along x1 + x2 = 2 * center."""
    eta = int(as_eta(eta))
    seps = separation_samples(cfg, periods, samples_per_period)
    x1, x2 = _line(seps, center)
    density = joint_density_analytic(x1, x2, cfg, eta, s)
    norm = density_normalization(cfg, eta, min(float(s), 1.0))
    return _pattern(cfg, seps, center, density, norm, norm * _incoherent(x1, x2, cfg))


def eraser_pattern(cfg: WavepacketConfig, eta, dA, dB, e1, e2, periods: float = 3.0,
                   samples_per_period: int = 50, center: float = 0.0) -> FringePattern:
    """Post-selected density for tag outcomes (e1, e2) along the same line."""
    eta = int(as_eta(eta))
    dA, dB, e1, e2 = map(as_state, (dA, dB, e1, e2))
    seps = separation_samples(cfg, periods, samples_per_period)
    x1, x2 = _line(seps, center)
    density = hbt_eraser_density(x1, x2, cfg, eta, dA, dB, e1, e2)
    a = abs(overlap(e1, dA).value * overlap(e2, dB).value) ** 2
    b = abs(overlap(e1, dB).value * overlap(e2, dA).value) ** 2
    norm = 0.5 * density_normalization(cfg, eta, overlap(dA, dB).modulus)
    c2 = 2.0 * cfg.envelope_rate
    incoherent = norm * (a * np.exp(-c2 * ((x1 - cfg.x0) ** 2 + (x2 + cfg.x0) ** 2))
                         + b * np.exp(-c2 * ((x1 + cfg.x0) ** 2 + (x2 - cfg.x0) ** 2)))
    weight = norm * (a + b)
    if weight <= 0:
        raise ValueError("post-selected channel has zero probability")
    return _pattern(cfg, seps, center, density, weight, incoherent)


def extract_visibility(pattern: FringePattern) -> float:
    """(I_max - I_min) / (I_max + I_min) on the corrected channel.

    I_max is the global maximum; I_min the lowest sample within half a
    period on either side of it.
    """
    seps = np.asarray(pattern.separations, float)
    corr = np.asarray(pattern.corrected, float)
    if len(seps) < 3:
        raise ValueError("pattern too short")
    if not math.isfinite(pattern.period) or seps.max() - seps.min() < pattern.period:
        raise ValueError("pattern spans less than one full fringe")
    i = int(np.argmax(corr))
    window = np.abs(seps - seps[i]) <= 0.5 * pattern.period * (1 + 1e-9)
    i_max = corr[i]
    i_min = corr[window].min()
    if i_max + i_min <= 0:
        raise ValueError("non-positive corrected intensities")
    return float(np.clip((i_max - i_min) / (i_max + i_min), 0.0, 1.0))
