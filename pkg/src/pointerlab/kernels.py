"""Gaussian pointer kernels and the wide-kernel collapse of weighted sums.

A weighted sum of Gaussians sharing one large width ``scale`` behaves, as
the width grows, like a *single* Gaussian: it carries the summed weight
and sits at the weighted centroid of the shifts.  With weights of mixed
sign (or complex weights) that centroid is not confined to the interval
spanned by the shifts, so the collapsed bump can appear far away from
every constituent kernel.  This module provides the kernels, exact
mixtures, the collapsed limit, and a numerical probe of the convergence.

Only Gaussian kernels are implemented.  :class:`GaussianKernel` is the
single extension point should another smooth kernel ever be needed: all
mixture routines evaluate kernels through its three normalisation
methods.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateWeightSum
from .grids import GRID_POINTS, DensityGrid, span_grid

#: relative floor for |sum of weights| below which the collapse centre is undefined
SUM_EPS = 1e-12

#: kernel normalisation picked by ``kernel_form`` arguments
AMPLITUDE = "amplitude"
DENSITY = "density"


@dataclass(frozen=True)
class GaussianKernel:
    """Gaussian kernel of a given ``width`` centred on ``center``.

    Three conventional normalisations coexist and are used by different
    operations:

    * :meth:`amplitude` -- ``exp(-(x-c)^2/w^2)``, peak value 1;
    * :meth:`density` -- ``pi^(-1/2) w^(-1) exp(-(x-c)^2/w^2)``, unit integral;
    * :meth:`wave_amplitude` -- ``pi^(-1/4) w^(-1/2) exp(-(x-c)^2/(2 w^2))``,
      whose absolute square is the :meth:`density` form.
    """

    width: float
    center: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"kernel width must be positive, got {self.width}")

    def amplitude(self, x):
        return np.exp(-((x - self.center) ** 2) / self.width**2)

    def density(self, x):
        return self.amplitude(x) / (np.sqrt(np.pi) * self.width)

    def wave_amplitude(self, x):
        return np.exp(-((x - self.center) ** 2) / (2.0 * self.width**2)) / (
            np.pi**0.25 * np.sqrt(self.width)
        )


def _density_norm(scale: float, kernel_form: str) -> float:
    if kernel_form == AMPLITUDE:
        return 1.0
    if kernel_form == DENSITY:
        return 1.0 / (np.sqrt(np.pi) * scale)
    raise ValueError(f"unknown kernel_form {kernel_form!r}")


@dataclass(frozen=True)
class WeightedShiftSet:
    """Complex (or real) weights paired with kernel shifts and one width.

    ``weights[i]`` multiplies a Gaussian of width ``scale`` centred on
    ``shifts[i]``.  The derived :attr:`weight_sum` is what survives the
    wide-kernel limit.
    """

    weights: np.ndarray
    shifts: np.ndarray
    scale: float

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex))
        b = np.atleast_1d(np.asarray(self.shifts, dtype=float))
        if w.ndim != 1 or b.ndim != 1 or w.size != b.size or w.size < 1:
            raise ValueError(
                f"weights and shifts must be equal-length vectors, got {w.shape} and {b.shape}"
            )
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "shifts", b)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def weight_sum(self) -> complex:
        return complex(self.weights.sum())

    @property
    def has_real_weights(self) -> bool:
        return bool(np.all(self.weights.imag == 0.0))

    def with_scale(self, scale: float) -> "WeightedShiftSet":
        return replace(self, scale=scale)


def _checked_weight_sum(shift_set: WeightedShiftSet, eps_sum: float) -> complex:
    total = shift_set.weight_sum
    floor = eps_sum * float(np.max(np.abs(shift_set.weights)))
    if floor == 0.0 or abs(total) < floor:
        raise DegenerateWeightSum(
            f"|weight sum| = {abs(total):.3e} is below {floor:.3e}; "
            "the collapse centre is undefined"
        )
    return total


def mixture_value(shift_set: WeightedShiftSet, x, kernel_form: str = AMPLITUDE):
    """Exact weighted sum of kernels centred on the shifts, evaluated at ``x``.

    With ``kernel_form='amplitude'`` each kernel has unit peak; with
    ``'density'`` each kernel is the unit-integral form, so real
    non-negative weights summing to one make the mixture a probability
    density.  The return value is complex whenever the weights are.
    """
    x = np.asarray(x, dtype=float)
    dev = x[..., None] - shift_set.shifts
    gauss = np.exp(-(dev**2) / shift_set.scale**2)
    out = gauss @ shift_set.weights
    out = out * _density_norm(shift_set.scale, kernel_form)
    return out if out.ndim else complex(out)


def collapse_center_real(shift_set: WeightedShiftSet, eps_sum: float = SUM_EPS) -> float:
    """Weighted centroid ``sum(A_i B_i) / sum(A_i)`` for real weights.

    This is the limit position of the single surviving Gaussian when the
    common width grows.  Mixed-sign weights may place it outside
    ``[min(B), max(B)]``; non-negative weights never do.

    Raises
    ------
    DegenerateWeightSum
        If ``|sum(A_i)|`` is below ``eps_sum * max|A_i|``.
    """
    if not shift_set.has_real_weights:
        raise ValueError("collapse_center_real requires real weights")
    total = _checked_weight_sum(shift_set, eps_sum)
    return float((shift_set.weights.real @ shift_set.shifts) / total.real)


def collapse_center_complex(shift_set: WeightedShiftSet, eps_sum: float = SUM_EPS) -> float:
    """Real part of the weighted centroid, valid for complex weights.

    Reduces exactly to :func:`collapse_center_real` when the weights are
    real.  The squared mixture collapses onto a Gaussian centred here.
    """
    total = _checked_weight_sum(shift_set, eps_sum)
    return float(((shift_set.weights @ shift_set.shifts) / total).real)


def _collapse_grid(shift_set: WeightedShiftSet, center: float, points: int) -> np.ndarray:
    marks = np.append(shift_set.shifts, center)
    return span_grid(marks, shift_set.scale, points=points)


def mixture_squared_density(
    shift_set: WeightedShiftSet,
    kernel_form: str = AMPLITUDE,
    points: int = GRID_POINTS,
    x: np.ndarray | None = None,
) -> DensityGrid:
    """``|mixture|^2`` sampled on a grid covering shifts and collapse centre."""
    if x is None:
        x = _collapse_grid(shift_set, collapse_center_complex(shift_set), points)
    vals = np.abs(mixture_value(shift_set, x, kernel_form)) ** 2
    return DensityGrid(x, vals)


def collapse_limit_density(
    shift_set: WeightedShiftSet,
    kernel_form: str = AMPLITUDE,
    points: int = GRID_POINTS,
    eps_sum: float = SUM_EPS,
    x: np.ndarray | None = None,
) -> DensityGrid:
    """Wide-kernel limit of ``|mixture|^2``: one squared Gaussian.

    The limit is ``|sum(A_i)|^2 * k(x - Z)^2`` with ``Z`` from
    :func:`collapse_center_complex` and ``k`` the kernel in the requested
    normalisation, sampled on the same grid convention as
    :func:`mixture_squared_density`.
    """
    center = collapse_center_complex(shift_set, eps_sum)
    if x is None:
        x = _collapse_grid(shift_set, center, points)
    norm = _density_norm(shift_set.scale, kernel_form)
    amp2 = abs(shift_set.weight_sum * norm) ** 2
    vals = amp2 * np.exp(-2.0 * (x - center) ** 2 / shift_set.scale**2)
    return DensityGrid(x, vals)


def convergence_probe(
    shift_set: WeightedShiftSet,
    scales,
    points: int = GRID_POINTS,
    eps_sum: float = SUM_EPS,
) -> np.ndarray:
    """Peak-normalised sup-norm error of the collapsed limit, per scale.

    For each width in ``scales`` (strictly increasing) the exact squared
    mixture and its collapsed limit are sampled on the matching grid and
    compared after dividing each by its own peak.  The error tends to
    zero as the width grows, but only once the width dominates both the
    shift spread and the collapse centre itself; with nearly cancelling
    weights the centre can be enormous and the onset correspondingly
    late.

    Parameters
    ----------
    shift_set : WeightedShiftSet
        Weight/shift data; its own ``scale`` is ignored.
    scales : array_like
        Strictly increasing kernel widths to probe.
    points : int
        Grid resolution used for each comparison.

    Returns
    -------
    numpy.ndarray
        Sup-norm errors aligned with ``scales``.
    """
    scales = np.atleast_1d(np.asarray(scales, dtype=float))
    if np.any(scales <= 0) or np.any(np.diff(scales) <= 0):
        raise ValueError("scales must be positive and strictly increasing")
    errors = np.empty(scales.size)
    for k, s in enumerate(scales):
        probe = shift_set.with_scale(float(s))
        exact = mixture_squared_density(probe, AMPLITUDE, points)
        limit = collapse_limit_density(probe, AMPLITUDE, points, eps_sum, x=exact.x)
        errors[k] = exact.peak_normalized().sup_distance(limit.peak_normalized())
    return errors
