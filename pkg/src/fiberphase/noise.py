"""Calibrated stochastic phase-noise processes for long optical fibers.

The model is a gaussian self-similar phase process with stationary
increments: the standard deviation of phi(t+tau) - phi(t) follows the
power law

    sigma(tau) = sigma_ref * (tau / tau_ref)**hurst

plus an optional deterministic linear drift.  hurst = 0.5 is an ordinary
random walk (independent gaussian increments); other exponents are
synthesized with exact covariance (circulant embedding of fractional
gaussian noise, dense Cholesky fallback for short traces).

Loop/arm lengths convert to delays through the group index; the default
n = 1.5 corresponds to 5 us of one-way travel time per km of fiber.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceLimitError

# Propagation speed convention: c/n with c rounded to 3e5 km/s, i.e. exactly
# 5 us/km at the default group index 1.5.
SPEED_OF_LIGHT_KM_S = 3.0e5
DEFAULT_GROUP_INDEX = 1.5

# Hard limits for hurst != 0.5 synthesis (number of increments).
MAX_FGN_STEPS = 1 << 21
MAX_DENSE_STEPS = 4096

__all__ = [
    "SPEED_OF_LIGHT_KM_S",
    "DEFAULT_GROUP_INDEX",
    "NoiseParams",
    "PhaseTrace",
    "PhaseProcess",
    "build_process",
    "from_sagnac_calibration",
    "travel_time",
]


def travel_time(length_km: float, group_index: float = DEFAULT_GROUP_INDEX) -> float:
    """One-way travel time in seconds for `length_km` of fiber.

    36.5 km at n = 1.5 gives 182.5 us.
    """
    if length_km < 0:
        raise DomainError(f"length_km must be >= 0, got {length_km}")
    if group_index <= 1:
        raise DomainError(f"group_index must be > 1, got {group_index}")
    return length_km * group_index / SPEED_OF_LIGHT_KM_S


@dataclass(frozen=True)
class NoiseParams:
    """Calibration of a fiber phase-noise process.

    Attributes
    ----------
    sigma_ref : float
        Phase standard deviation (rad) at the reference lag.
    tau_ref : float
        Reference time lag (s).
    hurst : float
        Scaling exponent of the increment power law, in (0, 1).
        0.5 is a pure random walk.
    drift_rate : float
        Deterministic linear phase drift (rad/s).
    length_km : float, optional
        Fiber length the calibration refers to (km).  Defaults to the
        one-way length whose travel time equals tau_ref.
    group_index : float
        Refractive group index used for length <-> delay conversion.
    """

    sigma_ref: float
    tau_ref: float
    hurst: float = 0.5
    drift_rate: float = 0.0
    length_km: float | None = None
    group_index: float = DEFAULT_GROUP_INDEX

    def __post_init__(self):
        if not (self.sigma_ref >= 0):
            raise DomainError(f"sigma_ref must be >= 0, got {self.sigma_ref}")
        if not (self.tau_ref > 0):
            raise DomainError(f"tau_ref must be > 0, got {self.tau_ref}")
        if not (0 < self.hurst < 1):
            raise DomainError(f"hurst out of range (0, 1): got {self.hurst}")
        if not (self.group_index > 1):
            raise DomainError(f"group_index must be > 1, got {self.group_index}")
        if not math.isfinite(self.drift_rate):
            raise DomainError(f"drift_rate must be finite, got {self.drift_rate}")
        if self.length_km is None:
            derived = self.tau_ref * SPEED_OF_LIGHT_KM_S / self.group_index
            object.__setattr__(self, "length_km", derived)
        if not (self.length_km > 0):
            raise DomainError(f"length_km must be > 0, got {self.length_km}")


@dataclass(frozen=True, eq=False)
class PhaseTrace:
    """Sampled phase-vs-time series with valid-region bookkeeping.

    `segments` is a tuple of half-open (start, stop) index ranges marking
    contiguous runs of meaningful samples; samples outside every segment
    are NaN for extracted traces.  A freshly simulated trace has one
    segment covering everything.
    """

    t0: float
    dt: float
    samples: np.ndarray
    segments: tuple[tuple[int, int], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not (self.dt > 0):
            raise DomainError(f"dt must be > 0, got {self.dt}")
        samples = np.asarray(self.samples, dtype=float)
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        n = samples.size
        if self.segments is None:
            segs = ((0, n),) if n else ()
            object.__setattr__(self, "segments", segs)
        else:
            segs = tuple((int(a), int(b)) for a, b in self.segments)
            object.__setattr__(self, "segments", segs)
        prev_stop = 0
        for a, b in self.segments:
            if not (0 <= a < b <= n):
                raise DomainError(f"segment ({a}, {b}) out of bounds for {n} samples")
            if a < prev_stop:
                raise DomainError("segments must be sorted and disjoint")
            prev_stop = b

    @property
    def n_samples(self) -> int:
        return int(self.samples.size)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseTrace):
            return NotImplemented
        return (
            self.t0 == other.t0
            and self.dt == other.dt
            and self.segments == other.segments
            and np.array_equal(self.samples, other.samples, equal_nan=True)
        )


def _fgn_autocov(hurst: float, max_lag: int) -> np.ndarray:
    # Autocovariance of unit-variance fractional gaussian noise at integer lags.
    k = np.arange(max_lag + 1, dtype=float)
    two_h = 2.0 * hurst
    return 0.5 * (
        np.abs(k + 1) ** two_h - 2.0 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h
    )


def _fgn_circulant(n_steps: int, hurst: float, rng: np.random.Generator) -> np.ndarray | None:
    """Exact fGn sample via circulant embedding; None if the embedding fails."""
    n = n_steps
    gamma = _fgn_autocov(hurst, n)
    row = np.concatenate([gamma[:n], gamma[n:n + 1], gamma[n - 1:0:-1]])
    eigenvalues = np.fft.fft(row).real
    if eigenvalues.min() < -1e-8 * eigenvalues.max():
        return None
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    z1 = rng.standard_normal(n + 1)
    z2 = rng.standard_normal(n - 1) if n > 1 else np.empty(0)
    m = 2 * n
    w = np.zeros(m, dtype=complex)
    w[0] = math.sqrt(eigenvalues[0] / m) * z1[0]
    w[n] = math.sqrt(eigenvalues[n] / m) * z1[n]
    if n > 1:
        half = np.sqrt(eigenvalues[1:n] / (2.0 * m))
        w[1:n] = half * (z1[1:n] + 1j * z2)
        w[n + 1:] = np.conj(w[1:n][::-1])
    return np.fft.fft(w).real[:n]


def _fgn_dense(n_steps: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    # Fallback: Cholesky of the dense Toeplitz covariance. O(n^3), short traces only.
    from scipy.linalg import toeplitz

    if n_steps > MAX_DENSE_STEPS:
        raise ResourceLimitError(
            f"circulant embedding failed and {n_steps} steps exceeds the dense "
            f"fallback limit of {MAX_DENSE_STEPS}"
        )
    gamma = _fgn_autocov(hurst, n_steps - 1)
    cov = toeplitz(gamma)
    chol = np.linalg.cholesky(cov)
    return chol @ rng.standard_normal(n_steps)


@dataclass(frozen=True)
class PhaseProcess:
    """Immutable handle over validated noise parameters.

    Safe to share across threads: sampling is a pure function of
    (process, seed, grid).
    """

    params: NoiseParams

    @property
    def sigma_ref(self) -> float:
        return self.params.sigma_ref

    @property
    def tau_ref(self) -> float:
        return self.params.tau_ref

    @property
    def hurst(self) -> float:
        return self.params.hurst

    @property
    def drift_rate(self) -> float:
        return self.params.drift_rate

    @property
    def length_km(self) -> float:
        return self.params.length_km

    @property
    def group_index(self) -> float:
        return self.params.group_index

    def sigma_at(self, tau: float) -> float:
        """Phase-increment standard deviation (rad) at time lag `tau`."""
        if tau < 0:
            raise DomainError(f"tau must be >= 0, got {tau}")
        if tau == 0:
            return 0.0
        return self.sigma_ref * (tau / self.tau_ref) ** self.hurst

    def sample_trace(self, duration: float, dt: float, seed: int) -> PhaseTrace:
        """Simulate one realization of the phase on a regular grid.

        The returned trace starts at t = 0 with phi(0) = 0 and has
        floor(duration/dt) increments, so the final sample sits at
        t = duration when duration is a multiple of dt.  Identical
        (params, duration, dt, seed) give bit-identical output.
        """
        if not (dt > 0):
            raise DomainError(f"dt must be > 0, got {dt}")
        if not (duration >= dt):
            raise DomainError(f"duration must be >= dt, got duration={duration}, dt={dt}")
        n_steps = int(math.floor(duration / dt + 1e-9))

        rng = np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))
        sigma_step = self.sigma_at(dt)
        if sigma_step == 0.0:
            increments = np.zeros(n_steps)
        elif self.hurst == 0.5:
            increments = sigma_step * rng.standard_normal(n_steps)
        else:
            if n_steps > MAX_FGN_STEPS:
                raise ResourceLimitError(
                    f"{n_steps} steps exceeds the hurst != 0.5 synthesis limit "
                    f"of {MAX_FGN_STEPS}"
                )
            unit = _fgn_circulant(n_steps, self.hurst, rng)
            if unit is None:
                unit = _fgn_dense(n_steps, self.hurst, rng)
            increments = sigma_step * unit

        samples = np.concatenate([[0.0], np.cumsum(increments)])
        if self.drift_rate != 0.0:
            samples = samples + self.drift_rate * (dt * np.arange(n_steps + 1))
        return PhaseTrace(t0=0.0, dt=dt, samples=samples)


def build_process(params: NoiseParams) -> PhaseProcess:
    """Wrap validated parameters in an immutable process handle."""
    if not isinstance(params, NoiseParams):
        raise DomainError(f"expected NoiseParams, got {type(params).__name__}")
    return PhaseProcess(params=params)


def from_sagnac_calibration(
    diffusion: float,
    loop_km: float,
    hurst: float = 0.5,
    group_index: float = DEFAULT_GROUP_INDEX,
) -> NoiseParams:
    """Noise parameters from a loop diffusion coefficient D (rad^2/km).

    The reference point is placed at half the loop travel time (the
    effective delay of a fiber loop probed by counterpropagating pulses),
    with sigma_ref = sqrt(D * loop_km), so a loop of length `loop_km`
    built on the result has effective variance D * loop_km exactly.
    """
    if diffusion < 0:
        raise DomainError(f"diffusion coefficient must be >= 0, got {diffusion}")
    if not (loop_km > 0):
        raise DomainError(f"loop_km must be > 0, got {loop_km}")
    return NoiseParams(
        sigma_ref=math.sqrt(diffusion * loop_km),
        tau_ref=travel_time(loop_km, group_index) / 2.0,
        hurst=hurst,
        length_km=loop_km,
        group_index=group_index,
    )
