"""Forward models of Sagnac and Mach-Zehnder interferometers.

A Sagnac loop probed by counterpropagating pulses cancels phase noise
slower than its effective delay (half the loop travel time); the residual
gaussian phase jitter of width sigma washes fringe contrast out as
V = exp(-sigma^2 / 2).  A Mach-Zehnder maps the instantaneous arm phase
difference phi(t) onto intensity between calibration extremes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .noise import PhaseProcess, travel_time

__all__ = [
    "FringeScan",
    "IntensityTrace",
    "visibility_from_sigma",
    "sigma_from_visibility",
    "sagnac_effective_sigma",
    "simulate_fringe_scan",
    "simulate_mz_trace",
]

# Tolerances on construction-time invariants (fraction of full scale).
_INTENSITY_BOUND_TOL = 1e-3
_AREA_NEGATIVE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FringeScan:
    """Pulse area vs applied phase for a scanned interference fringe.

    `pulse_area[i]` is the mean over `pulses_per_point` pulse repetitions
    at modulator setting `applied_phase[i]`, including the additive
    detector noise floor.  `i0` is the mean full intensity of the fringe.
    """

    applied_phase: np.ndarray
    pulse_area: np.ndarray
    detector_noise: float = 0.0
    i0: float = 1.0

    def __post_init__(self):
        phase = np.asarray(self.applied_phase, dtype=float).copy()
        area = np.asarray(self.pulse_area, dtype=float).copy()
        phase.setflags(write=False)
        area.setflags(write=False)
        object.__setattr__(self, "applied_phase", phase)
        object.__setattr__(self, "pulse_area", area)
        if phase.size != area.size:
            raise DomainError(
                f"applied_phase and pulse_area lengths differ: "
                f"{phase.size} vs {area.size}"
            )
        if phase.size < 4:
            raise DomainError(f"a fringe scan needs >= 4 points, got {phase.size}")
        tol = _AREA_NEGATIVE_TOL * (abs(self.i0) + abs(self.detector_noise)) + 1e-12
        if np.any(area - self.detector_noise < -tol):
            raise DomainError("pulse_area is negative after detector-noise subtraction")

    @property
    def n_points(self) -> int:
        return int(self.applied_phase.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FringeScan):
            return NotImplemented
        return (
            self.detector_noise == other.detector_noise
            and self.i0 == other.i0
            and np.array_equal(self.applied_phase, other.applied_phase)
            and np.array_equal(self.pulse_area, other.pulse_area)
        )


@dataclass(frozen=True, eq=False)
class IntensityTrace:
    """Detector record of a Mach-Zehnder output vs time.

    i_max/i_min are the calibration extremes of the fringe; samples must
    stay inside them up to a small tolerance.
    """

    t0: float
    dt: float
    samples: np.ndarray
    i_max: float
    i_min: float

    def __post_init__(self):
        if not (self.dt > 0):
            raise DomainError(f"dt must be > 0, got {self.dt}")
        if not (self.i_max > self.i_min):
            raise DomainError(
                f"i_max must exceed i_min, got i_max={self.i_max}, i_min={self.i_min}"
            )
        samples = np.asarray(self.samples, dtype=float).copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.size:
            eps = _INTENSITY_BOUND_TOL * (self.i_max - self.i_min)
            if samples.min() < self.i_min - eps or samples.max() > self.i_max + eps:
                raise DomainError("intensity samples fall outside [i_min, i_max]")

    @property
    def n_samples(self) -> int:
        return int(self.samples.size)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntensityTrace):
            return NotImplemented
        return (
            self.t0 == other.t0
            and self.dt == other.dt
            and self.i_max == other.i_max
            and self.i_min == other.i_min
            and np.array_equal(self.samples, other.samples, equal_nan=True)
        )


def visibility_from_sigma(sigma: float) -> float:
    """Fringe visibility left by gaussian phase noise of width `sigma`."""
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    return math.exp(-0.5 * sigma * sigma)


def sigma_from_visibility(visibility: float) -> float:
    """Gaussian phase-noise width implied by a measured visibility.

    Exact inverse of :func:`visibility_from_sigma` on (0, 1].
    """
    if not (0 < visibility <= 1):
        raise DomainError(f"visibility must be in (0, 1], got {visibility}")
    return math.sqrt(-2.0 * math.log(visibility))


def sagnac_effective_sigma(process: PhaseProcess, loop_km: float) -> float:
    """Effective phase-noise width seen by a Sagnac loop of `loop_km`.

    Counterpropagating pulses sample each fiber element with a mean time
    offset of half the loop travel time, so the loop is sensitive to
    sigma at that half-loop delay.
    """
    if not (loop_km > 0):
        raise DomainError(f"loop_km must be > 0, got {loop_km}")
    return process.sigma_at(travel_time(loop_km, process.group_index) / 2.0)


def simulate_fringe_scan(
    process: PhaseProcess,
    loop_km: float,
    n_points: int,
    pulses_per_point: int,
    detector_noise: float = 0.0,
    seed: int = 0,
    i0: float = 1.0,
) -> FringeScan:
    """Scan one fringe of a Sagnac loop built on `process`.

    The applied phase spans [0, 2*pi] linearly.  Each point averages
    `pulses_per_point` pulses whose phase jitter is drawn independently
    from N(0, sagnac_effective_sigma^2); scan points use independent
    deterministic substreams of `seed`.
    """
    if n_points < 4:
        raise DomainError(f"n_points must be >= 4, got {n_points}")
    if pulses_per_point < 1:
        raise DomainError(f"pulses_per_point must be >= 1, got {pulses_per_point}")
    if not (i0 > 0):
        raise DomainError(f"i0 must be > 0, got {i0}")
    sigma = sagnac_effective_sigma(process, loop_km)
    applied = np.linspace(0.0, 2.0 * math.pi, n_points)
    base = np.random.Philox(key=int(seed) & (2**64 - 1))
    areas = np.empty(n_points)
    for i, phi in enumerate(applied):
        rng = np.random.Generator(base.jumped(i))
        jitter = sigma * rng.standard_normal(pulses_per_point)
        areas[i] = (0.5 * i0 * (1.0 + np.cos(phi + jitter))).mean() + detector_noise
    return FringeScan(
        applied_phase=applied,
        pulse_area=areas,
        detector_noise=detector_noise,
        i0=i0,
    )


def simulate_mz_trace(
    process: PhaseProcess,
    duration: float,
    dt: float,
    i_max: float = 1.0,
    i_min: float = 0.0,
    phi0: float = 0.0,
    seed: int = 0,
) -> IntensityTrace:
    """Mach-Zehnder intensity record for one phase realization.

    samples[k] = (i_max - i_min)/2 * [1 + cos(phi0 + phi(t_k))] + i_min
    with phi drawn from `process` (noiseless detector).  Deterministic
    per seed.
    """
    if not (i_max > i_min):
        raise DomainError(f"i_max must exceed i_min, got i_max={i_max}, i_min={i_min}")
    phase = process.sample_trace(duration, dt, seed)
    values = i_min + 0.5 * (i_max - i_min) * (1.0 + np.cos(phi0 + phase.samples))
    np.clip(values, i_min, i_max, out=values)
    return IntensityTrace(t0=phase.t0, dt=dt, samples=values, i_max=i_max, i_min=i_min)
