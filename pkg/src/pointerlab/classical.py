"""Classical stochastic network read out by inaccurate pointers.

A particle enters one of N nodes with fixed entry probabilities and is
then routed to one of N final states by a column-stochastic branching
matrix.  One pointer records a node-dependent displacement, a second a
final-state-dependent one; both carry Gaussian reading noise.  The
module computes the path probabilities, the reading densities with and
without conditioning on the final state, the recovery of path
probabilities from conditional mean shifts, the trial simulator, and the
locality property of the recovered probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import UnreachableFinalState
from .grids import GRID_POINTS, DensityGrid, DensityGrid2D, span_grid
from .kernels import GaussianKernel
from .sampling import SegmentSampler, gaussian_readings

#: tolerance on probability normalisation at construction
PROB_TOL = 1e-12
#: floor for arrival probabilities used as conditioning denominators
PS_EPS = 1e-12


@dataclass(frozen=True)
class ClassicalNetwork:
    """Entry probabilities and column-stochastic branching matrix.

    ``entry[i]`` is the probability of entering node ``i``;
    ``branching[j, i]`` the probability of moving from node ``i`` to
    final state ``j``.  Columns of ``branching`` sum to one.
    """

    entry: np.ndarray
    branching: np.ndarray

    def __post_init__(self):
        entry = np.atleast_1d(np.asarray(self.entry, dtype=float))
        branching = np.asarray(self.branching, dtype=float)
        n = entry.size
        if branching.shape != (n, n):
            raise ValueError(f"branching must be {n}x{n}, got {branching.shape}")
        for name, a in (("entry", entry), ("branching", branching)):
            if np.any(a < -PROB_TOL) or np.any(a > 1.0 + PROB_TOL):
                raise ValueError(f"{name} probabilities must lie in [0, 1]")
        if abs(entry.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"entry probabilities sum to {entry.sum()!r}, not 1")
        colsums = branching.sum(axis=0)
        bad = np.nonzero(np.abs(colsums - 1.0) > PROB_TOL)[0]
        if bad.size:
            raise ValueError(
                f"branching column {bad[0]} sums to {colsums[bad[0]]!r}, not 1"
            )
        object.__setattr__(self, "entry", entry)
        object.__setattr__(self, "branching", branching)

    @property
    def size(self) -> int:
        return self.entry.size


@dataclass(frozen=True)
class ClassicalPointerPair:
    """Couplings and widths of the node pointer and the final-state pointer."""

    b_values: np.ndarray
    f_values: np.ndarray
    width1: float
    width2: float

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b_values, dtype=float))
        f = np.atleast_1d(np.asarray(self.f_values, dtype=float))
        if b.size != f.size:
            raise ValueError("b_values and f_values must have equal length")
        if not (self.width1 > 0 and self.width2 > 0):
            raise ValueError("pointer widths must be positive")
        object.__setattr__(self, "b_values", b)
        object.__setattr__(self, "f_values", f)
        object.__setattr__(self, "width1", float(self.width1))
        object.__setattr__(self, "width2", float(self.width2))

    def with_b_values(self, b_values) -> "ClassicalPointerPair":
        return replace(self, b_values=np.asarray(b_values, dtype=float))


@dataclass(frozen=True)
class PathProbTable:
    """Path probabilities, entry ``[j, i]`` for the route via node i to
    final state j.  Row sums are arrival probabilities, column sums the
    entry probabilities."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"path table must be square, got {t.shape}")
        object.__setattr__(self, "table", t)

    @property
    def arrivals(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def entries(self) -> np.ndarray:
        return self.table.sum(axis=0)

    @property
    def total(self) -> float:
        return float(self.table.sum())


def path_probabilities(net: ClassicalNetwork) -> PathProbTable:
    """Product of branching and entry probabilities for every route."""
    return PathProbTable(net.branching * net.entry[None, :])


def arrival_probabilities(net: ClassicalNetwork) -> np.ndarray:
    return path_probabilities(net).arrivals


def mean_shift(net: ClassicalNetwork, b_values) -> float:
    """Unconditional mean displacement of the node pointer.

    Indicator couplings extract a single entry probability: a broad
    pointer estimates how often the particle visited one node even
    though no single trial reveals where it went.
    """
    b = np.asarray(b_values, dtype=float)
    return float(b @ net.entry)


def density_no_postselection(
    net: ClassicalNetwork, pointer: ClassicalPointerPair, points: int = GRID_POINTS
) -> DensityGrid:
    """Node-pointer reading density when the final state is ignored."""
    k = GaussianKernel(pointer.width1)
    x = span_grid(pointer.b_values, pointer.width1, points)
    vals = k.density(x[:, None] - pointer.b_values) @ net.entry
    return DensityGrid(x, vals)


def joint_density(
    net: ClassicalNetwork, pointer: ClassicalPointerPair, points: int = 1201
) -> DensityGrid2D:
    """Joint density of the two readings; integrates to one."""
    table = path_probabilities(net).table
    k1 = GaussianKernel(pointer.width1)
    k2 = GaussianKernel(pointer.width2)
    x1 = span_grid(pointer.b_values, pointer.width1, points)
    x2 = span_grid(pointer.f_values, pointer.width2, points)
    r1 = k1.density(x1[:, None] - pointer.b_values)  # (n1, N) over nodes
    r2 = k2.density(x2[:, None] - pointer.f_values)  # (n2, N) over finals
    return DensityGrid2D(x1, x2, r1 @ table.T @ r2.T)


def causality_marginal(
    net: ClassicalNetwork, pointer: ClassicalPointerPair, points: int = GRID_POINTS
) -> DensityGrid:
    """Node-pointer density with the final reading integrated out.

    Carried out by quadrature per final state on the second pointer's
    grid.  Must reproduce :func:`density_no_postselection` at any widths:
    statistics already recorded cannot depend on a later read-out.
    """
    table = path_probabilities(net).table
    k1 = GaussianKernel(pointer.width1)
    k2 = GaussianKernel(pointer.width2)
    x1 = span_grid(pointer.b_values, pointer.width1, points)
    x2 = span_grid(pointer.f_values, pointer.width2, points)
    r1 = k1.density(x1[:, None] - pointer.b_values)
    mass2 = np.trapezoid(k2.density(x2[:, None] - pointer.f_values), x2, axis=0)
    return DensityGrid(x1, r1 @ (mass2 @ table))


def conditional_shift(
    net: ClassicalNetwork, b_values, j: int, eps_ps: float = PS_EPS
) -> float:
    """Mean node-pointer displacement among trials ending in state ``j``.

    A path-probability-weighted average of the couplings, so it always
    lies inside ``[min(b), max(b)]`` -- the bound whose quantum violation
    is the point of the whole construction.

    Raises
    ------
    UnreachableFinalState
        If the arrival probability of ``j`` is below ``eps_ps``.
    """
    table = path_probabilities(net).table
    row = table[j]
    denom = row.sum()
    if denom < eps_ps:
        raise UnreachableFinalState(
            f"final state {j} has arrival probability {denom:.3e} < {eps_ps:.1e}"
        )
    b = np.asarray(b_values, dtype=float)
    return float((b @ row) / denom)


def conditional_shift_table(net: ClassicalNetwork, eps_ps: float = PS_EPS) -> np.ndarray:
    """Indicator-coupling conditional shifts for all (final, node) pairs.

    Entry ``[j, i]`` is the conditional shift measured with couplings
    concentrated on node ``i``: the probability of having passed through
    ``i`` given arrival in ``j``.
    """
    table = path_probabilities(net).table
    arrivals = table.sum(axis=1)
    if np.any(arrivals < eps_ps):
        j = int(np.argmin(arrivals))
        raise UnreachableFinalState(
            f"final state {j} has arrival probability {arrivals[j]:.3e} < {eps_ps:.1e}"
        )
    return table / arrivals[:, None]


def recover_path_probabilities(shifts, arrivals, tol: float = 1e-6) -> PathProbTable:
    """Rebuild the path table from indicator shifts and arrival counts.

    ``shifts[j, i]`` is the (possibly noisy) conditional shift measured
    with indicator couplings on node ``i``; ``arrivals[j]`` the fraction
    of trials ending in ``j``.  The product reproduces the path table
    exactly for exact inputs.  No renormalisation is applied: noisy
    inputs yield a raw reconstruction whose total may differ from one
    (see :func:`normalize_table`).
    """
    shifts = np.asarray(shifts, dtype=float)
    arrivals = np.atleast_1d(np.asarray(arrivals, dtype=float))
    if abs(arrivals.sum() - 1.0) > tol:
        raise ValueError(f"arrival probabilities sum to {arrivals.sum()!r}, not 1")
    if shifts.shape != (arrivals.size, arrivals.size):
        raise ValueError(f"shift table shape {shifts.shape} does not match arrivals")
    return PathProbTable(shifts * arrivals[:, None])


def normalize_table(table: PathProbTable) -> PathProbTable:
    """Rescale a raw reconstruction so its entries sum to one."""
    return PathProbTable(table.table / table.table.sum())


@dataclass(frozen=True)
class TrialRecords:
    """Per-trial simulation output: route taken and the two readings."""

    node: np.ndarray
    final: np.ndarray
    x1: np.ndarray
    x2: np.ndarray

    def __len__(self) -> int:
        return len(self.node)


def simulate_trials(
    net: ClassicalNetwork,
    pointer: ClassicalPointerPair,
    trials: int,
    seed: int,
) -> TrialRecords:
    """Simulate independent trials of the two-pointer experiment.

    The route of each trial is drawn by splitting [0, 1) into N^2
    segments with lengths equal to the path probabilities; the readings
    add independent Gaussian noise (redrawn every trial) to the
    couplings of the visited node and final state.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    sampler = SegmentSampler(path_probabilities(net).table)
    flat = sampler.draw(rng, trials)
    final, node = np.unravel_index(flat, sampler.shape)
    x1 = gaussian_readings(rng, pointer.b_values[node], pointer.width1)
    x2 = gaussian_readings(rng, pointer.f_values[final], pointer.width2)
    return TrialRecords(node=node, final=final, x1=x1, x2=x2)


def nearest_final_bins(f_values, x2) -> np.ndarray:
    """Assign each second reading to the final state with the closest coupling.

    This is how post-selection works with a finite-width second pointer;
    it matches the ideal assignment as that width shrinks.
    """
    f = np.atleast_1d(np.asarray(f_values, dtype=float))
    if np.unique(f).size != f.size:
        raise ValueError("final-state couplings must be pairwise distinct for binning")
    order = np.argsort(f)
    mids = 0.5 * (f[order][1:] + f[order][:-1])
    return order[np.searchsorted(mids, np.asarray(x2, dtype=float))]


@dataclass(frozen=True)
class RecoveryResult:
    """Monte Carlo estimates feeding the path-probability reconstruction."""

    recovered: PathProbTable
    shifts: np.ndarray
    arrivals: np.ndarray


def monte_carlo_recovery(
    net: ClassicalNetwork,
    pointer: ClassicalPointerPair,
    trials: int,
    seed: int,
) -> RecoveryResult:
    """Estimate the full path table from simulated experiments alone.

    Runs one experiment per node with indicator couplings on that node,
    classifies trials by the nearest final-state coupling, and averages
    the first reading within each class to estimate the conditional
    shifts.  Arrival probabilities are pooled across the runs.  Only the
    recorded readings are used -- the simulator's knowledge of the true
    route never leaks into the estimate.
    """
    n = net.size
    run_seeds = np.random.SeedSequence(seed).spawn(n)
    shifts = np.zeros((n, n))
    arrival_counts = np.zeros(n)
    for i in range(n):
        indicator = np.zeros(n)
        indicator[i] = 1.0
        run = simulate_trials(net, pointer.with_b_values(indicator), trials, run_seeds[i])
        binned = nearest_final_bins(pointer.f_values, run.x2)
        for j in range(n):
            mask = binned == j
            count = int(mask.sum())
            arrival_counts[j] += count
            if count:
                shifts[j, i] = float(run.x1[mask].mean())
    arrivals = arrival_counts / (n * trials)
    return RecoveryResult(
        recovered=recover_path_probabilities(shifts, arrivals),
        shifts=shifts,
        arrivals=arrivals,
    )


def locality_demo(
    net: ClassicalNetwork, new_cross_branching: float
) -> tuple[float, float]:
    """Recovered probability of the 1<-1 route before and after tampering
    with the other node's branching (two-node networks only).

    Changing how node 2 routes its trials cannot move the product of the
    indicator shift and the arrival probability for the route through
    node 1: the measurement is local.  Returns the recovered values
    (before, after); they are equal.
    """
    if net.size != 2:
        raise ValueError("the locality demonstration uses a two-node network")
    if not 0.0 <= new_cross_branching <= 1.0:
        raise ValueError("branching probability must lie in [0, 1]")

    def recovered_first_route(network: ClassicalNetwork) -> float:
        shift = conditional_shift(network, [1.0, 0.0], 0)
        return shift * float(arrival_probabilities(network)[0])

    before = recovered_first_route(net)
    modified = np.array(net.branching)
    modified[0, 1] = new_cross_branching
    modified[1, 1] = 1.0 - new_cross_branching
    after = recovered_first_route(ClassicalNetwork(net.entry, modified))
    return before, after
