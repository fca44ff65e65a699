"""N-level systems probed by one or two Gaussian von Neumann pointers.

A scenario fixes an initial state, two orthonormal eigenbases (one read
out at the intermediate time, one at the final time) with real
eigenvalues, and the unitaries evolving the system between those times.
Each intermediate/final index pair defines a path whose complex
amplitude is the product of the two transition matrix elements.  From
the amplitudes follow the reading distributions of broad pointers, the
post-selected shifts (real parts of weak values), the real but possibly
negative path quasi-probabilities, and the exact marginalisation
identity stating that a later pointer cannot alter the earlier
pointer's statistics.

Everything here is pure and operates on immutable inputs; all grids
follow the conventions of :mod:`pointerlab.grids`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedPostselection
from .grids import GRID_POINTS, DensityGrid, DensityGrid2D, span_grid
from .kernels import GaussianKernel

#: absolute floor for post-selection probabilities |sum_i amp|^2
PS_EPS = 1e-12

#: construction tolerances
NORM_TOL = 1e-12
GRAM_TOL = 1e-12
UNITARY_TOL = 1e-10


def _as_complex_matrix(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def unitarity_deviation(u: np.ndarray) -> float:
    """Max-entry deviation of ``u^H u`` from the identity."""
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def unitary_from_hamiltonian(h, t: float) -> np.ndarray:
    """Evolution operator ``exp(-i h t)`` of a Hermitian generator.

    Built by eigendecomposition; the result is re-checked against the
    unitarity tolerance before being returned.
    """
    h = _as_complex_matrix(h, "hamiltonian")
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise ValueError("hamiltonian must be Hermitian")
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    dev = unitarity_deviation(u)
    if dev > UNITARY_TOL:
        raise ValueError(f"constructed evolution deviates from unitarity by {dev:.3e}")
    return u


@dataclass(frozen=True)
class PointerSpec:
    """Couplings and initial width of one Gaussian pointer.

    ``couplings[i]`` is the displacement imprinted on the pointer when
    the system takes the i-th branch of the basis the pointer reads.
    Indicator couplings (one 1, rest 0) turn the pointer into a probe of
    a single branch.
    """

    couplings: np.ndarray
    width: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.couplings, dtype=float))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("couplings must be a non-empty vector")
        if not self.width > 0:
            raise ValueError(f"pointer width must be positive, got {self.width}")
        object.__setattr__(self, "couplings", c)
        object.__setattr__(self, "width", float(self.width))

    def kernel(self, center: float = 0.0) -> GaussianKernel:
        return GaussianKernel(self.width, center)


@dataclass(frozen=True)
class QuantumScenario:
    """Initial state, two read-out eigenbases, and the two evolutions.

    Basis arrays hold one eigenvector per row.  ``evolution_1`` carries
    the state from preparation to the intermediate read-out time and
    ``evolution_2`` from there to the final read-out.

    Parameters
    ----------
    initial : (N,) complex unit vector
    basis_b, basis_f : (N, N) complex
        Orthonormal intermediate/final eigenvectors (rows).
    b_values, f_values : (N,) real
        Eigenvalues attached to the two bases.
    evolution_1, evolution_2 : (N, N) unitary
    """

    initial: np.ndarray
    basis_b: np.ndarray
    b_values: np.ndarray
    basis_f: np.ndarray
    f_values: np.ndarray
    evolution_1: np.ndarray
    evolution_2: np.ndarray

    def __post_init__(self):
        init = np.atleast_1d(np.asarray(self.initial, dtype=complex))
        n = init.size
        norm_dev = abs(np.vdot(init, init).real - 1.0)
        if norm_dev > NORM_TOL:
            raise ValueError(f"initial state norm deviates from 1 by {norm_dev:.3e}")
        fields = {}
        for name in ("basis_b", "basis_f"):
            basis = _as_complex_matrix(getattr(self, name), name)
            if basis.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {basis.shape}")
            gram_dev = float(np.max(np.abs(basis.conj() @ basis.T - np.eye(n))))
            if gram_dev > GRAM_TOL:
                raise ValueError(f"{name} Gram deviation {gram_dev:.3e} exceeds {GRAM_TOL}")
            fields[name] = basis
        for name in ("evolution_1", "evolution_2"):
            u = _as_complex_matrix(getattr(self, name), name)
            if u.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {u.shape}")
            dev = unitarity_deviation(u)
            if dev > UNITARY_TOL:
                raise ValueError(f"{name} unitarity deviation {dev:.3e} exceeds {UNITARY_TOL}")
            fields[name] = u
        for name in ("b_values", "f_values"):
            vals = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if vals.shape != (n,):
                raise ValueError(f"{name} must have length {n}, got shape {vals.shape}")
            fields[name] = vals
        object.__setattr__(self, "initial", init)
        for name, value in fields.items():
            object.__setattr__(self, name, value)

    @property
    def dim(self) -> int:
        return self.initial.size

    def intermediate_operator(self) -> np.ndarray:
        """Matrix ``sum_i |b_i> B_i <b_i|`` of the intermediate observable."""
        return (self.basis_b.T * self.b_values) @ self.basis_b.conj()


@dataclass(frozen=True)
class PathAmplitudeTable:
    """Complex path amplitudes, entry ``[j, i]`` for final j via branch i."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=complex)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"amplitude table must be square, got {t.shape}")
        object.__setattr__(self, "table", t)

    @property
    def final_sums(self) -> np.ndarray:
        """Per-final-state amplitude sums over the intermediate index."""
        return self.table.sum(axis=1)

    def completeness_deviation(self) -> float:
        """|sum_j |sum_i A_ji|^2 - 1|; zero for any unitary scenario."""
        return float(abs(np.sum(np.abs(self.final_sums) ** 2) - 1.0))


@dataclass(frozen=True)
class QuasiProbTable:
    """Real path weights, entry ``[j, i]``; rows/columns marginalise to
    genuine probabilities even though single entries may be negative."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"quasi-probability table must be square, got {t.shape}")
        object.__setattr__(self, "table", t)

    @property
    def arrival_marginals(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def node_marginals(self) -> np.ndarray:
        return self.table.sum(axis=0)

    @property
    def total(self) -> float:
        return float(self.table.sum())


def path_amplitudes(sc: QuantumScenario) -> PathAmplitudeTable:
    """Amplitude of every final-via-intermediate path.

    Entry ``[j, i]`` is the product of the final-leg matrix element
    (final state j reached from branch i under ``evolution_2``) and the
    first-leg element (branch i reached from the initial state under
    ``evolution_1``).
    """
    first_leg = sc.basis_b.conj() @ (sc.evolution_1 @ sc.initial)
    second_leg = sc.basis_f.conj() @ sc.evolution_2 @ sc.basis_b.T
    return PathAmplitudeTable(second_leg * first_leg[None, :])


def node_probabilities(sc: QuantumScenario) -> np.ndarray:
    """Probability of each intermediate branch, no conditioning."""
    first_leg = sc.basis_b.conj() @ (sc.evolution_1 @ sc.initial)
    return np.abs(first_leg) ** 2


def arrival_probabilities(sc: QuantumScenario) -> np.ndarray:
    """Probability of each final state under the composed evolution."""
    evolved = sc.evolution_2 @ (sc.evolution_1 @ sc.initial)
    return np.abs(sc.basis_f.conj() @ evolved) ** 2


def quasi_probabilities(sc: QuantumScenario) -> QuasiProbTable:
    """Real path weights ``Re[A_ji * conj(sum_i' A_ji')]``.

    Row sums reproduce the arrival probabilities, column sums the branch
    probabilities, and the grand total is one; single entries may be
    negative, which is exactly what permits conditional pointer shifts
    outside the coupling range.
    """
    amps = path_amplitudes(sc)
    return QuasiProbTable((amps.table * amps.final_sums.conj()[:, None]).real)


def _postselected_amplitudes(sc: QuantumScenario, j: int, eps_ps: float) -> np.ndarray:
    amps = path_amplitudes(sc).table
    row = amps[j]
    denom = row.sum()
    if abs(denom) ** 2 < eps_ps:
        raise IllConditionedPostselection(
            f"final state {j}: |amplitude sum|^2 = {abs(denom) ** 2:.3e} < {eps_ps:.1e}; "
            "the conditional shift diverges"
        )
    return row


def weak_value(sc: QuantumScenario, j: int, couplings=None, eps_ps: float = PS_EPS) -> complex:
    """Complex amplitude-weighted average of the couplings, conditioned on j.

    With trivial dynamics this equals the matrix-element ratio
    ``<f_j|op|I> / <f_j|I>`` of the intermediate observable.  Its real
    part is the asymptotic shift of a broad pointer conditioned on final
    state ``j``; near-orthogonal post-selection makes it arbitrarily
    large.

    Raises
    ------
    IllConditionedPostselection
        If the arrival amplitude sum is below ``eps_ps`` in square.
    """
    row = _postselected_amplitudes(sc, j, eps_ps)
    b = sc.b_values if couplings is None else np.asarray(couplings, dtype=float)
    return complex((b @ row) / row.sum())


def pointer_shift(sc: QuantumScenario, j: int, couplings=None, eps_ps: float = PS_EPS) -> float:
    """Real part of :func:`weak_value`: the conditional reading shift."""
    return weak_value(sc, j, couplings, eps_ps).real


def shift_from_quasi_probabilities(
    qp: QuasiProbTable, couplings, j: int, eps_ps: float = PS_EPS
) -> float:
    """Conditional shift as a quasi-probability-weighted average.

    Algebraically identical to :func:`pointer_shift`; the two routes are
    kept separate so tests can cross-check them.
    """
    row = qp.table[j]
    denom = row.sum()
    if abs(denom) < eps_ps:
        raise IllConditionedPostselection(
            f"final state {j}: arrival probability {denom:.3e} < {eps_ps:.1e}"
        )
    b = np.asarray(couplings, dtype=float)
    return float((b @ row) / denom)


def expected_shift(sc: QuantumScenario, couplings=None) -> float:
    """Unconditional mean displacement: branch-probability average."""
    b = sc.b_values if couplings is None else np.asarray(couplings, dtype=float)
    return float(b @ node_probabilities(sc))


def density_one_pointer(
    sc: QuantumScenario, pointer: PointerSpec, points: int = GRID_POINTS
) -> DensityGrid:
    """Reading density of a single pointer coupled at the intermediate time.

    A probability mixture of the pointer's initial density displaced by
    each coupling, weighted by the branch probabilities; coherence
    between branches never reaches this marginal.  Integrates to one.
    """
    probs = node_probabilities(sc)
    x = span_grid(pointer.couplings, pointer.width, points)
    dens = np.exp(-((x[:, None] - pointer.couplings) ** 2) / pointer.width**2)
    vals = dens @ probs / (np.sqrt(np.pi) * pointer.width)
    return DensityGrid(x, vals)


def joint_amplitude(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    pointer2: PointerSpec,
    j: int,
    x1,
    x2,
):
    """Amplitude for final state ``j`` with both pointers found at (x1, x2).

    Uses unit-norm wave amplitudes for both pointers, so the absolute
    squares summed over ``j`` and integrated over both readings give 1.
    Broadcasts over array-valued ``x1``/``x2``.
    """
    amps = path_amplitudes(sc).table[j]
    x1 = np.asarray(x1, dtype=float)
    k1 = GaussianKernel(pointer1.width)
    mixed = sum(
        a * k1.wave_amplitude(x1 - b) for a, b in zip(amps, pointer1.couplings)
    )
    k2 = GaussianKernel(pointer2.width, float(pointer2.couplings[j]))
    return mixed * k2.wave_amplitude(np.asarray(x2, dtype=float))


def _coherent_row_density(
    amps_row: np.ndarray, couplings: np.ndarray, width: float, x: np.ndarray
) -> np.ndarray:
    """|sum_i A_i g(x - B_i)|^2 with unit-norm wave amplitudes."""
    k = GaussianKernel(width)
    waves = k.wave_amplitude(x[:, None] - couplings)
    return np.abs(waves @ amps_row) ** 2


def joint_density(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    pointer2: PointerSpec,
    points: int = 1201,
) -> DensityGrid2D:
    """Two-pointer reading density, summed over final states.

    The second pointer's dependence factors per final state, so the
    density is assembled as a sum of products of a coherent first-reading
    profile and the second pointer's displaced density.  The double
    integral is one.
    """
    amps = path_amplitudes(sc).table
    x1 = span_grid(pointer1.couplings, pointer1.width, points)
    x2 = span_grid(pointer2.couplings, pointer2.width, points)
    k2 = GaussianKernel(pointer2.width)
    vals = np.zeros((x1.size, x2.size))
    for j in range(sc.dim):
        w1 = _coherent_row_density(amps[j], pointer1.couplings, pointer1.width, x1)
        d2 = k2.density(x2 - pointer2.couplings[j])
        vals += np.outer(w1, d2)
    return DensityGrid2D(x1, x2, vals)


def causality_marginal(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    pointer2: PointerSpec,
    points: int = GRID_POINTS,
) -> DensityGrid:
    """First-pointer reading density with the second reading integrated out.

    The second-pointer dependence factors per final state, so the
    quadrature over the second reading is carried out as one trapezoid
    integral per final state on the second pointer's grid, and the
    remaining sum collapses the cross-state structure.  The result must
    equal :func:`density_one_pointer` at *any* widths -- recording a later
    reading cannot reshape the earlier statistics unless one conditions
    on it.
    """
    amps = path_amplitudes(sc).table
    x1 = span_grid(pointer1.couplings, pointer1.width, points)
    x2 = span_grid(pointer2.couplings, pointer2.width, points)
    k2 = GaussianKernel(pointer2.width)
    vals = np.zeros(x1.size)
    for j in range(sc.dim):
        mass2 = np.trapezoid(k2.density(x2 - pointer2.couplings[j]), x2)
        vals += mass2 * _coherent_row_density(amps[j], pointer1.couplings, pointer1.width, x1)
    return DensityGrid(x1, vals)


def causal_sum_identity(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    points: int = GRID_POINTS,
    eps_ps: float = PS_EPS,
) -> tuple[DensityGrid, DensityGrid]:
    """Both sides of the wide-pointer partition of the unconditional density.

    Left side: arrival-probability-weighted initial densities displaced
    by each conditional shift.  Right side: one initial density displaced
    by the unconditional mean.  They agree in the wide-pointer regime;
    final states with arrival probability below ``eps_ps`` are excluded
    together with their vanishing weights.
    """
    arrivals = arrival_probabilities(sc)
    shifts = np.zeros(sc.dim)
    weights = np.zeros(sc.dim)
    for j in range(sc.dim):
        if arrivals[j] < eps_ps:
            continue
        shifts[j] = pointer_shift(sc, j, pointer1.couplings, eps_ps)
        weights[j] = arrivals[j]
    mean = expected_shift(sc, pointer1.couplings)
    marks = np.concatenate([shifts[weights > 0], [mean], pointer1.couplings])
    x = span_grid(marks, pointer1.width, points)
    k = GaussianKernel(pointer1.width)
    lhs = np.zeros(x.size)
    for j in range(sc.dim):
        if weights[j] > 0:
            lhs += weights[j] * k.density(x - shifts[j])
    rhs = k.density(x - mean)
    return DensityGrid(x, lhs), DensityGrid(x, rhs)


@dataclass(frozen=True)
class ObservableReport:
    """Directly observable probabilities extracted from a two-pointer run.

    All three families are measurable and must be non-negative even when
    individual quasi-probabilities are not:

    * ``arrivals``: final-state probabilities (row sums of the table);
    * ``window_probs``: mass of the second reading near each of its
      couplings, from quadrature of the joint density, with
      ``window_expected`` the corresponding row sums;
    * ``conditional_minima``: per final state, the minimum over the grid
      of the wide-limit conditional first-reading density (row-weighted
      kernel mixture).  ``conditional_quadrature_minima`` gives the same
      minima for the exact finite-width conditional densities.
    """

    arrivals: np.ndarray
    window_probs: np.ndarray
    window_expected: np.ndarray
    conditional_minima: np.ndarray
    conditional_quadrature_minima: np.ndarray

    @property
    def window_max_error(self) -> float:
        return float(np.max(np.abs(self.window_probs - self.window_expected)))

    def min_observable(self) -> float:
        """Most negative value among all reported observables."""
        return float(
            min(
                self.arrivals.min(),
                self.window_probs.min(),
                self.conditional_minima.min(),
                self.conditional_quadrature_minima.min(),
            )
        )


def observable_probability_checks(
    sc: QuantumScenario,
    pointer1: PointerSpec,
    pointer2: PointerSpec,
    points: int = GRID_POINTS,
    window_halfwidth: float | None = None,
) -> ObservableReport:
    """Evaluate the three observable probability families.

    ``window_halfwidth`` bounds the second-reading window around each of
    its couplings (default four widths).  The wide-limit conditional
    densities are tabulated on the standard first-pointer grid.
    """
    qp = quasi_probabilities(sc)
    amps = path_amplitudes(sc).table
    arrivals = qp.arrival_marginals.copy()

    half = 4.0 * pointer2.width if window_halfwidth is None else float(window_halfwidth)
    k2 = GaussianKernel(pointer2.width)
    n = sc.dim
    window_probs = np.zeros(n)
    x1 = span_grid(pointer1.couplings, pointer1.width, points)
    k1 = GaussianKernel(pointer1.width)
    kernels1 = k1.density(x1[:, None] - pointer1.couplings)
    row_profiles = [
        _coherent_row_density(amps[jj], pointer1.couplings, pointer1.width, x1)
        for jj in range(n)
    ]
    row_weights = np.array([np.trapezoid(p, x1) for p in row_profiles])
    cond_minima = np.zeros(n)
    cond_quad_minima = np.zeros(n)
    for j in range(n):
        # mass of each final state's second reading inside window j
        lo = pointer2.couplings[j] - half
        hi = pointer2.couplings[j] + half
        x2 = np.linspace(lo, hi, points)
        row_masses = np.array(
            [np.trapezoid(k2.density(x2 - c), x2) for c in pointer2.couplings]
        )
        window_probs[j] = float(row_masses @ row_weights)
        cond_minima[j] = float(np.min(kernels1 @ qp.table[j]))
        exact = sum(row_masses[jj] * row_profiles[jj] for jj in range(n))
        cond_quad_minima[j] = float(np.min(exact))
    return ObservableReport(
        arrivals=arrivals,
        window_probs=window_probs,
        window_expected=qp.arrival_marginals,
        conditional_minima=cond_minima,
        conditional_quadrature_minima=cond_quad_minima,
    )
