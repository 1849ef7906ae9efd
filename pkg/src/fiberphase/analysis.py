"""Recovery of phase statistics from interferometer records.

The pipeline mirrors how such measurements are reduced in practice:
sinusoidal fringe fits give visibility; intensity traces are inverted to
phase on fringe slopes only (extrema carry no usable phase information);
signed phase increments over a grid of lags give the mean phase change
curve dphi(tau), its gaussian width, threshold times and the scaling
exponent of the underlying noise; Sagnac visibilities convert to a
per-kilometre diffusion coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    EmptySegmentsError,
    FitError,
    InsufficientDataError,
    ThresholdNotReachedError,
)
from .interferometer import FringeScan, IntensityTrace, sigma_from_visibility
from .noise import PhaseTrace

__all__ = [
    "FringeFit",
    "PhaseStats",
    "GaussianHistogram",
    "fit_fringe",
    "extract_phase",
    "default_lag_grid",
    "increment_sets",
    "pool_stats",
    "mean_phase_change",
    "gaussian_widths",
    "fit_gaussian",
    "check_gaussian_relation",
    "tau_threshold",
    "fit_scaling_exponent",
    "estimate_diffusion",
]

MEAN_ABS_FACTOR = math.sqrt(2.0 / math.pi)  # <|x|> / sigma for gaussian x

DEFAULT_BAND = (0.2, 0.8)
DEFAULT_MAX_LAGS = 100


@dataclass(frozen=True)
class FringeFit:
    """Result of a linear sinusoidal fit to a fringe scan."""

    offset: float
    cos_amp: float
    sin_amp: float
    visibility: float
    residual_rms: float

    def __post_init__(self):
        if not (self.offset > 0):
            raise FitError(f"non-positive fringe offset after fit: {self.offset}")
        if not (-1e-9 <= self.visibility <= 1.0 + 1e-6):
            raise FitError(f"fitted visibility out of range: {self.visibility}")


@dataclass
class PhaseStats:
    """Increment statistics of a phase trace over a grid of lags.

    Built by :func:`increment_sets`; the derived fields are filled in by
    the estimator functions below and start out empty.
    """

    taus: np.ndarray
    increments: list[np.ndarray]
    n_increments: np.ndarray
    dt: float
    mean_abs_change: np.ndarray | None = None
    sigma_per_tau: np.ndarray = field(default=None)  # type: ignore[assignment]
    histogram: tuple[np.ndarray, np.ndarray] | None = None
    histogram_tau: float | None = None
    scaling_exponent: float | None = None
    scaling_fit_range: tuple[float, float] | None = None

    def __post_init__(self):
        self.taus = np.asarray(self.taus, dtype=float)
        self.n_increments = np.asarray(self.n_increments, dtype=int)
        if np.any(np.diff(self.taus) <= 0):
            raise DomainError("lags must be strictly increasing")
        if self.sigma_per_tau is None:
            self.sigma_per_tau = np.full(self.taus.size, np.nan)

    def lag_index(self, tau: float) -> int:
        """Index of the stored lag matching `tau` (within half a sample)."""
        idx = int(np.argmin(np.abs(self.taus - tau)))
        if abs(self.taus[idx] - tau) > 0.5 * self.dt:
            raise DomainError(f"no stored lag near tau={tau:g} s")
        return idx


@dataclass(frozen=True)
class GaussianHistogram:
    """Binned increment distribution at one lag, with a gaussian fit.

    `sigma` is the sample standard deviation (the primary estimate); the
    fit_* fields come from a least-squares gaussian on the histogram and
    exist for reporting/figures only.  `degenerate` marks distributions
    with zero spread, where no fit is possible.
    """

    sigma: float
    bin_edges: np.ndarray
    counts: np.ndarray
    fit_amplitude: float
    fit_mean: float
    fit_sigma: float
    degenerate: bool

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def fit_fringe(scan: FringeScan) -> FringeFit:
    """Least-squares sinusoid through a fringe scan.

    The detector noise floor is subtracted, then
    I ~ a0 + a1*cos(phi) + a2*sin(phi) is solved as a linear problem on
    the known applied phases; visibility is sqrt(a1^2 + a2^2) / a0.
    """
    phi = scan.applied_phase
    y = scan.pulse_area - scan.detector_noise
    design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise FitError("degenerate phase grid: singular design matrix")
    a0, a1, a2 = coef
    residual = design @ coef - y
    return FringeFit(
        offset=float(a0),
        cos_amp=float(a1),
        sin_amp=float(a2),
        visibility=float(math.hypot(a1, a2) / a0),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
    )


def _unfold_principal(theta: np.ndarray) -> np.ndarray:
    """Continue arccos principal values into an unwrapped phase.

    Successive samples are assumed to move by less than pi; each step
    picks, among the phases consistent with the observed cosine
    (+-theta + 2*pi*m), the one nearest the previous sample.  On the
    principal branch this makes the phase change opposite in sign to the
    intensity change; ties at branch points (theta = 0 or pi) keep the
    current orientation.
    """
    values = theta.tolist()
    out = np.empty_like(theta)
    prev = values[0]
    out[0] = prev
    two_pi = 2.0 * math.pi
    for k in range(1, len(values)):
        th = values[k]
        cand_a = two_pi * round((prev - th) / two_pi) + th
        cand_b = two_pi * round((prev + th) / two_pi) - th
        prev = cand_a if abs(cand_a - prev) <= abs(cand_b - prev) else cand_b
        out[k] = prev
    return out


def extract_phase(
    trace: IntensityTrace, band: tuple[float, float] = DEFAULT_BAND
) -> PhaseTrace:
    """Invert an intensity record to phase on fringe slopes.

    The intensity is normalized to u = (I - i_min) / (i_max - i_min) and
    clamped to [0, 1]; maximal contiguous runs with u inside `band`
    become the valid segments (runs of a single sample are dropped; they
    carry no increment information).  Within each segment the phase is
    arccos(2u - 1) continued by the nearest-branch rule of
    :func:`_unfold_principal`.  Samples outside all segments are NaN.
    """
    lo, hi = band
    if not (0 <= lo < hi <= 1):
        raise DomainError(f"band must satisfy 0 <= lo < hi <= 1, got ({lo}, {hi})")
    u = (trace.samples - trace.i_min) / (trace.i_max - trace.i_min)
    u = np.clip(u, 0.0, 1.0)
    in_band = (u >= lo) & (u <= hi)

    samples = np.full(u.size, np.nan)
    segments = []
    padded = np.concatenate([[0], in_band.astype(np.int8), [0]])
    edges = np.flatnonzero(np.diff(padded))
    for start, stop in zip(edges[::2], edges[1::2]):
        if stop - start < 2:
            continue
        theta = np.arccos(2.0 * u[start:stop] - 1.0)
        samples[start:stop] = _unfold_principal(theta)
        segments.append((int(start), int(stop)))
    if not segments:
        raise EmptySegmentsError(
            "no contiguous run of >= 2 samples inside the intensity band "
            f"[{lo}, {hi}]"
        )
    return PhaseTrace(t0=trace.t0, dt=trace.dt, samples=samples, segments=tuple(segments))


def default_lag_grid(dt: float, tau_max: float, max_lags: int = DEFAULT_MAX_LAGS) -> np.ndarray:
    """Lags (s) from dt up to tau_max: every sample step, geometrically
    thinned once there would be more than `max_lags` of them."""
    if not (dt > 0) or not (tau_max >= dt):
        raise DomainError(f"need tau_max >= dt > 0, got dt={dt}, tau_max={tau_max}")
    k_max = int(math.floor(tau_max / dt + 1e-9))
    if k_max <= max_lags:
        ks = np.arange(1, k_max + 1)
    else:
        ks = np.unique(np.round(np.geomspace(1, k_max, max_lags)).astype(int))
    return ks * dt


def increment_sets(phase: PhaseTrace, taus) -> PhaseStats:
    """Collect signed phase increments phi(t + tau) - phi(t) per lag.

    All overlapping pairs are used; pairs spanning a segment boundary are
    discarded (the phase is unobservable through omitted extrema).  Lags
    with no valid pair on any segment are dropped from the result.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        raise DomainError("at least one lag is required")
    if np.any(np.diff(taus) <= 0):
        raise DomainError("lags must be strictly increasing")
    dt = phase.dt
    kept_taus = []
    incs = []
    counts = []
    for tau in taus:
        if tau <= 0:
            raise DomainError(f"lags must be positive, got {tau}")
        k = int(round(tau / dt))
        if k < 1 or abs(tau - k * dt) > 1e-6 * dt:
            raise DomainError(
                f"lag {tau:g} s is not a multiple of the sample interval {dt:g} s"
            )
        parts = [
            phase.samples[a + k:b] - phase.samples[a:b - k]
            for a, b in phase.segments
            if b - a > k
        ]
        if not parts:
            continue
        values = np.concatenate(parts)
        kept_taus.append(k * dt)
        incs.append(values)
        counts.append(values.size)
    if not kept_taus:
        raise InsufficientDataError("no lag has a valid increment pair on any segment")
    return PhaseStats(
        taus=np.array(kept_taus),
        increments=incs,
        n_increments=np.array(counts),
        dt=dt,
    )


def pool_stats(stats_list: list[PhaseStats]) -> PhaseStats:
    """Merge increment sets from repeated measurements of one process.

    All inputs must share the same sample interval; increments are pooled
    lag-by-lag over the union of the stored lag grids.
    """
    if not stats_list:
        raise DomainError("nothing to pool")
    dt = stats_list[0].dt
    if any(s.dt != dt for s in stats_list):
        raise DomainError("pooled statistics must share the same sample interval")
    buckets: dict[int, list[np.ndarray]] = {}
    for s in stats_list:
        for tau, inc in zip(s.taus, s.increments):
            buckets.setdefault(int(round(tau / dt)), []).append(inc)
    ks = sorted(buckets)
    incs = [np.concatenate(buckets[k]) for k in ks]
    return PhaseStats(
        taus=np.array([k * dt for k in ks]),
        increments=incs,
        n_increments=np.array([v.size for v in incs]),
        dt=dt,
    )


def mean_phase_change(stats: PhaseStats) -> np.ndarray:
    """Mean absolute phase change dphi(tau) per stored lag."""
    curve = np.array([np.mean(np.abs(inc)) for inc in stats.increments])
    stats.mean_abs_change = curve
    return curve


def gaussian_widths(stats: PhaseStats) -> np.ndarray:
    """Sample standard deviation of the increments at every stored lag.

    Lags with fewer than two increments stay NaN.  This is the same
    primary estimator as :func:`fit_gaussian`, without the histogram.
    """
    for i, inc in enumerate(stats.increments):
        if inc.size >= 2:
            stats.sigma_per_tau[i] = float(np.std(inc, ddof=1))
    return stats.sigma_per_tau


def fit_gaussian(stats: PhaseStats, tau: float) -> GaussianHistogram:
    """Gaussian width of the increment distribution at one lag.

    The primary sigma is the (bias-free, bin-free) sample standard
    deviation; a ceil(sqrt(n))-bin histogram with a least-squares
    gaussian is attached for reporting.  Needs >= 100 increments.
    """
    idx = stats.lag_index(tau)
    inc = stats.increments[idx]
    if inc.size < 100:
        raise InsufficientDataError(
            f"need >= 100 increments at tau={tau:g} s, have {inc.size}"
        )
    sigma = float(np.std(inc, ddof=1))
    n_bins = math.ceil(math.sqrt(inc.size))
    degenerate = sigma == 0.0
    if degenerate:
        # All increments identical: a single spike, nothing to fit.
        center = float(inc[0])
        width = max(abs(center) * 1e-6, 1e-12)
        edges = np.linspace(center - width, center + width, n_bins + 1)
        counts, _ = np.histogram(inc, bins=edges)
        amp, mu, fit_sig = math.nan, math.nan, math.nan
    else:
        counts, edges = np.histogram(inc, bins=n_bins)
        centers = 0.5 * (edges[:-1] + edges[1:])
        amp, mu, fit_sig = _lsq_gaussian(centers, counts, sigma)
    stats.sigma_per_tau[idx] = sigma
    stats.histogram = (edges, counts)
    stats.histogram_tau = float(stats.taus[idx])
    return GaussianHistogram(
        sigma=sigma,
        bin_edges=edges,
        counts=counts,
        fit_amplitude=amp,
        fit_mean=mu,
        fit_sigma=fit_sig,
        degenerate=degenerate,
    )


def _lsq_gaussian(x: np.ndarray, y: np.ndarray, sigma0: float) -> tuple[float, float, float]:
    from scipy.optimize import curve_fit

    def model(t, amp, mu, sig):
        return amp * np.exp(-0.5 * ((t - mu) / sig) ** 2)

    p0 = (float(y.max()), float(np.average(x, weights=np.maximum(y, 1e-12))), sigma0)
    try:
        popt, _ = curve_fit(model, x, y.astype(float), p0=p0, maxfev=10000)
        return float(popt[0]), float(popt[1]), float(abs(popt[2]))
    except RuntimeError:
        return math.nan, math.nan, math.nan


def check_gaussian_relation(stats: PhaseStats, tau: float) -> float:
    """Relative deviation from the gaussian identity dphi = sqrt(2/pi)*sigma.

    Returns |dphi - sqrt(2/pi)*sigma| / (sqrt(2/pi)*sigma) at the lag
    nearest `tau`; NaN (undefined) when sigma is zero.
    """
    idx = stats.lag_index(tau)
    inc = stats.increments[idx]
    sigma = stats.sigma_per_tau[idx]
    if np.isnan(sigma):
        sigma = float(np.std(inc, ddof=1))
    dphi = stats.mean_abs_change[idx] if stats.mean_abs_change is not None else float(
        np.mean(np.abs(inc))
    )
    if sigma == 0.0:
        return math.nan
    expected = MEAN_ABS_FACTOR * sigma
    return abs(dphi - expected) / expected


def tau_threshold(stats: PhaseStats, target: float) -> float:
    """First lag at which dphi(tau) reaches `target`, by linear interpolation.

    If the curve already starts at or above the target, the first stored
    lag is returned (the crossing happened below the resolved range).
    Raises ThresholdNotReachedError, carrying the maximum observed value,
    when the curve never gets there.
    """
    if not (target > 0):
        raise DomainError(f"target must be > 0, got {target}")
    curve = stats.mean_abs_change
    if curve is None:
        curve = mean_phase_change(stats)
    above = np.flatnonzero(curve >= target)
    if above.size == 0:
        raise ThresholdNotReachedError(target, float(curve.max()))
    i = int(above[0])
    if i == 0:
        return float(stats.taus[0])
    t0, t1 = stats.taus[i - 1], stats.taus[i]
    y0, y1 = curve[i - 1], curve[i]
    return float(t0 + (target - y0) * (t1 - t0) / (y1 - y0))


def fit_scaling_exponent(stats: PhaseStats, tau_range: tuple[float, float]) -> float:
    """Slope of log dphi vs log tau over lags inside `tau_range`."""
    lo, hi = tau_range
    if not (0 < lo < hi):
        raise DomainError(f"need 0 < tau_min < tau_max, got ({lo}, {hi})")
    curve = stats.mean_abs_change
    if curve is None:
        curve = mean_phase_change(stats)
    mask = (stats.taus >= lo) & (stats.taus <= hi)
    if mask.sum() < 3:
        raise DomainError(
            f"need >= 3 lags in [{lo:g}, {hi:g}] s, have {int(mask.sum())}"
        )
    if np.any(curve[mask] <= 0):
        raise DomainError("dphi must be positive over the fit range")
    slope, _ = np.polyfit(np.log(stats.taus[mask]), np.log(curve[mask]), 1)
    stats.scaling_exponent = float(slope)
    stats.scaling_fit_range = (float(lo), float(hi))
    return float(slope)


def estimate_diffusion(
    length_km: float,
    *,
    visibility: float | None = None,
    sigma: float | None = None,
) -> float:
    """Per-kilometre phase-diffusion coefficient D = sigma^2 / L (rad^2/km).

    Give exactly one of `visibility` (converted through the gaussian
    washout V = exp(-sigma^2/2), i.e. D = -2 ln(V) / L) or `sigma`.
    """
    if not (length_km > 0):
        raise DomainError(f"length_km must be > 0, got {length_km}")
    if (visibility is None) == (sigma is None):
        raise DomainError("give exactly one of visibility= or sigma=")
    if visibility is not None:
        sigma = sigma_from_visibility(visibility)
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    return sigma * sigma / length_km
