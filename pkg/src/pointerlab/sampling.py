"""Monte Carlo engines and statistics for reading distributions.

Provides exact samplers for the two-pointer quantum reading density, the
acceptance filter that reproduces post-selected distributions by
thinning unconditional readings, histogramming, and histogram-to-density
distance metrics.  Samplers are deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .csvio import write_csv
from .errors import (
    EnvelopeFailure,
    IllConditionedPostselection,
    NegativeWeight,
    SupportMismatch,
)
from .grids import GRID_POINTS, DensityGrid, span_grid
from .kernels import GaussianKernel
from .quantum import (
    PS_EPS,
    PointerSpec,
    QuantumScenario,
    arrival_probabilities,
    expected_shift,
    path_amplitudes,
    pointer_shift,
)


class ReadingSample(NamedTuple):
    trial: int
    final_index: int
    x1: float
    x2: float


@dataclass(frozen=True)
class ReadingSamples:
    """A batch of reading records, one row per trial."""

    trial: np.ndarray
    final_index: np.ndarray
    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        n = len(self.trial)
        for name in ("final_index", "x1", "x2"):
            if len(getattr(self, name)) != n:
                raise ValueError("all sample columns must have equal length")
        if n and not (np.all(np.isfinite(self.x1)) and np.all(np.isfinite(self.x2))):
            raise ValueError("readings must be finite")

    def __len__(self) -> int:
        return len(self.trial)

    def __iter__(self) -> Iterator[ReadingSample]:
        for k in range(len(self)):
            yield ReadingSample(
                int(self.trial[k]), int(self.final_index[k]),
                float(self.x1[k]), float(self.x2[k]),
            )

    def write_csv(self, path) -> None:
        write_csv(
            path,
            ["trial", "final_index", "x1", "x2"],
            zip(self.trial.tolist(), self.final_index.tolist(),
                self.x1.tolist(), self.x2.tolist()),
        )


class SegmentSampler:
    """Draws indices by splitting [0, 1) into segments proportional to weights.

    The weights may be any array shape; draws return flat indices.
    Negative entries are rejected outright -- an instruction to sample
    with a negative probability has no meaning, which is precisely why
    tables with sign-changing entries cannot drive a trial simulator.
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0.0):
            worst = float(w.min())
            raise NegativeWeight(
                f"sampling weights must be non-negative; smallest entry is {worst:.6g}"
            )
        total = w.sum()
        if not total > 0.0:
            raise ValueError("sampling weights must have positive total")
        self.shape = w.shape
        self._boundaries = np.cumsum(w.ravel()) / total

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size)
        return np.searchsorted(self._boundaries, u, side="right")


def gaussian_readings(rng: np.random.Generator, centers, width: float) -> np.ndarray:
    """Readings of a Gaussian pointer of the given width around ``centers``."""
    centers = np.asarray(centers, dtype=float)
    return centers + (width / np.sqrt(2.0)) * rng.standard_normal(centers.shape)


def final_state_weights(sc: QuantumScenario, pointer1: PointerSpec) -> np.ndarray:
    """Finite-width probability of each final state under the first pointer.

    Closed-form Gaussian overlap integrals of the coherent first-reading
    profile; the weights sum to one exactly at any width and tend to the
    arrival probabilities as the pointer broadens.
    """
    amps = path_amplitudes(sc).table
    b = pointer1.couplings
    overlap = np.exp(-((b[:, None] - b[None, :]) ** 2) / (4.0 * pointer1.width**2))
    w = np.einsum("ji,ik,jk->j", amps.conj(), overlap, amps).real
    return np.clip(w, 0.0, None)


def sample_quantum_readings(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    pointer2: PointerSpec,
    trials: int,
    seed: int,
) -> ReadingSamples:
    """Exact joint samples (final state, first reading, second reading).

    The final state is drawn from the closed-form overlap weights; the
    first reading follows the coherent profile of the chosen state via
    rejection sampling under a provably sufficient envelope (Cauchy-
    Schwarz bounds the coherent profile by ``N`` times the incoherent
    mixture); the second reading is a Gaussian around the final state's
    coupling.

    Raises
    ------
    EnvelopeFailure
        If the envelope is ever violated (an implementation bug, not a
        property of the input).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    amps = path_amplitudes(sc).table
    n = sc.dim
    weights = final_state_weights(sc, pointer1)
    finals = SegmentSampler(weights).draw(rng, trials)
    x1 = np.empty(trials)
    kernel = GaussianKernel(pointer1.width)
    for j in range(n):
        idx = np.nonzero(finals == j)[0]
        if idx.size == 0:
            continue
        x1[idx] = _rejection_sample_coherent(
            rng, amps[j], pointer1.couplings, kernel, idx.size
        )
    x2 = gaussian_readings(rng, pointer2.couplings[finals], pointer2.width)
    return ReadingSamples(np.arange(trials), finals, x1, x2)


def _rejection_sample_coherent(
    rng: np.random.Generator,
    amps_row: np.ndarray,
    couplings: np.ndarray,
    kernel: GaussianKernel,
    count: int,
) -> np.ndarray:
    """Draw from |sum_i a_i g(x - B_i)|^2 (normalised) by rejection."""
    n = amps_row.size
    mags = np.abs(amps_row) ** 2
    total = mags.sum()
    if not total > 0.0:
        raise ValueError("cannot sample a final state with vanishing amplitudes")
    component = SegmentSampler(mags)
    out = np.empty(count)
    filled = 0
    # acceptance rate is at least (overlap mass)/(n * total); batch generously
    batch = max(64, int(1.25 * count * n) + 16)
    while filled < count:
        comps = component.draw(rng, batch)
        x = gaussian_readings(rng, couplings[comps], kernel.width)
        waves = kernel.wave_amplitude(x[:, None] - couplings)
        target = np.abs(waves @ amps_row) ** 2
        envelope = n * (waves**2 * mags).sum(axis=1)
        ratio = target / envelope
        if np.any(ratio > 1.0 + 1e-9):
            raise EnvelopeFailure(
                f"rejection envelope violated: max ratio {float(ratio.max()):.12f}"
            )
        accepted = x[rng.random(batch) < ratio]
        take = min(accepted.size, count - filled)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out


@dataclass(frozen=True)
class AcceptanceFilter:
    """Per-final-state acceptance probabilities for reading thinning.

    ``omega[j]`` tabulates, on ``x``, the probability with which a
    reading drawn *without* post-selection should be kept in order to
    reproduce the distribution conditional on final state ``j``.  The
    rows form a pointwise partition of unity over the included states,
    so every recorded reading is kept for exactly one final state.
    """

    x: np.ndarray
    omega: np.ndarray  # shape (n_final, len(x))
    weights: np.ndarray  # arrival probability per final state
    shifts: np.ndarray  # conditional shift per final state
    width: float
    mean_shift: float
    included: np.ndarray  # boolean mask of final states above threshold

    def omega_at(self, j: int, x) -> np.ndarray:
        """Exact acceptance probability for final state ``j`` at ``x``."""
        if not self.included[j]:
            raise IllConditionedPostselection(f"final state {j} was excluded")
        x = np.asarray(x, dtype=float)
        num = None
        den = np.zeros(x.shape)
        for k in np.nonzero(self.included)[0]:
            term = self.weights[k] * np.exp(-((x - self.shifts[k]) ** 2) / self.width**2)
            den += term
            if k == j:
                num = term
        return num / den

    def wide_limit_coefficients(self, j: int) -> tuple[float, float, float]:
        """(prefactor, rate, offset) of the wide-pointer acceptance ratio.

        In the regime where the unconditional density is a single
        Gaussian at the mean shift, the acceptance probability reduces
        to ``prefactor * exp(rate * x + offset)``: the ratio of the
        conditional to the unconditional Gaussian.
        """
        if not self.included[j]:
            raise IllConditionedPostselection(f"final state {j} was excluded")
        zj, y = float(self.shifts[j]), self.mean_shift
        rate = 2.0 * (zj - y) / self.width**2
        offset = -(zj**2 - y**2) / self.width**2
        return float(self.weights[j]), rate, offset

    def wide_limit_ratio(self, j: int, x) -> np.ndarray:
        pre, rate, offset = self.wide_limit_coefficients(j)
        return pre * np.exp(rate * np.asarray(x, dtype=float) + offset)

    def wide_limit_unit_crossing(self, j: int) -> float | None:
        """Reading at which the wide-limit ratio reaches one, if any."""
        pre, rate, offset = self.wide_limit_coefficients(j)
        if rate == 0.0:
            return None
        return float(-(np.log(pre) + offset) / rate)


def reshaping_filter(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    points: int = GRID_POINTS,
    eps_ps: float = PS_EPS,
) -> AcceptanceFilter:
    """Acceptance filter reproducing every post-selected reading density.

    Thinning the unconditional reading stream with row ``j`` recovers the
    distribution conditioned on final state ``j`` -- post-selection only
    redistributes readings that the broad pointer had already produced.
    Final states with arrival probability below ``eps_ps`` are excluded
    together with their vanishing weights.
    """
    arrivals = arrival_probabilities(sc)
    n = sc.dim
    included = arrivals >= eps_ps
    if not np.any(included):
        raise IllConditionedPostselection("no final state is reachable")
    shifts = np.zeros(n)
    for j in np.nonzero(included)[0]:
        shifts[j] = pointer_shift(sc, j, pointer1.couplings, eps_ps)
    mean = expected_shift(sc, pointer1.couplings)
    marks = np.concatenate([shifts[included], [mean], pointer1.couplings])
    x = span_grid(marks, pointer1.width, points)
    terms = np.zeros((n, x.size))
    for j in np.nonzero(included)[0]:
        terms[j] = arrivals[j] * np.exp(-((x - shifts[j]) ** 2) / pointer1.width**2)
    omega = terms / terms.sum(axis=0)
    return AcceptanceFilter(
        x=x,
        omega=omega,
        weights=arrivals,
        shifts=shifts,
        width=pointer1.width,
        mean_shift=mean,
        included=included,
    )


def apply_filter(
    samples: ReadingSamples, filt: AcceptanceFilter, j: int, seed: int
) -> ReadingSamples:
    """Keep each reading with probability ``omega_j(x1)``.

    The surviving readings are distributed like the density conditional
    on final state ``j``, and the survival fraction estimates that
    state's arrival probability.
    """
    rng = np.random.default_rng(seed)
    accept = rng.random(len(samples)) < filt.omega_at(j, samples.x1)
    return ReadingSamples(
        samples.trial[accept],
        samples.final_index[accept],
        samples.x1[accept],
        samples.x2[accept],
    )


@dataclass(frozen=True)
class Histogram:
    """Counts over strictly increasing bin edges."""

    edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        c = np.asarray(self.counts)
        if e.ndim != 1 or np.any(np.diff(e) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if c.shape != (e.size - 1,) or np.any(c < 0):
            raise ValueError("counts must be non-negative, one per bin")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "counts", np.asarray(c, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def write_csv(self, path) -> None:
        write_csv(
            path,
            ["bin_left", "bin_right", "count"],
            zip(self.edges[:-1].tolist(), self.edges[1:].tolist(), self.counts.tolist()),
        )


MIN_BINS = 64


def histogram(values, bins: int | None = None) -> Histogram:
    """Histogram with Freedman-Diaconis width, clipped to >= 64 bins."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("cannot histogram an empty sample")
    if bins is None:
        q75, q25 = np.percentile(v, [75, 25])
        width = 2.0 * (q75 - q25) / v.size ** (1.0 / 3.0)
        span = v.max() - v.min()
        if width <= 0.0 or span <= 0.0:
            bins = MIN_BINS
        else:
            bins = max(MIN_BINS, int(np.ceil(span / width)))
    counts, edges = np.histogram(v, bins=bins)
    return Histogram(edges, counts)


def distribution_distance(hist: Histogram, density: DensityGrid, metric: str = "KS") -> float:
    """Distance between a histogram and a reference density.

    ``KS``: maximum gap between the empirical CDF (at bin edges) and the
    density's CDF.  ``L1``: total variation over the bin partition, with
    density mass outside the histogram range counted in full; disjoint
    supports therefore give 2.

    Raises
    ------
    SupportMismatch
        For KS when the histogram and density supports do not overlap.
    """
    name = metric.upper()
    lo, hi = float(density.x[0]), float(density.x[-1])
    cdf_grid = density.cdf()

    def density_cdf(points):
        return np.interp(points, density.x, cdf_grid, left=0.0, right=1.0)

    if name == "KS":
        if hist.edges[-1] <= lo or hist.edges[0] >= hi:
            raise SupportMismatch(
                f"histogram range [{hist.edges[0]:g}, {hist.edges[-1]:g}] does not "
                f"overlap density support [{lo:g}, {hi:g}]"
            )
        ecdf = np.concatenate([[0.0], np.cumsum(hist.counts) / hist.total])
        return float(np.max(np.abs(ecdf - density_cdf(hist.edges))))
    if name == "L1":
        cdf_edges = density_cdf(hist.edges)
        dens_mass = np.diff(cdf_edges)
        hist_mass = hist.counts / hist.total
        outside = 1.0 - (cdf_edges[-1] - cdf_edges[0])
        return float(np.sum(np.abs(hist_mass - dens_mass)) + outside)
    raise ValueError(f"unknown metric {metric!r}; expected 'KS' or 'L1'")
