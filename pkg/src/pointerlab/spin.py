"""Closed-form two-level ("double-slit") specialisations.

The system starts spin-up along z, the intermediate basis is polarised
up/down a direction ``n`` and the final basis up/down a direction
``n'``, both given by Bloch angles.  The four path weights have compact
closed forms that this module evaluates directly; everything must agree
with the general machinery in :mod:`pointerlab.quantum` applied to the
mapped two-level scenario.

State convention in the z basis::

    up(n)   = ( cos(theta/2),  e^{+i phi} sin(theta/2) )
    down(n) = (-e^{-i phi} sin(theta/2),  cos(theta/2) )

Any global-phase-equivalent convention would do, as long as the four
closed forms below stay intact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IllConditionedPostselection
from .grids import GRID_POINTS, DensityGrid, span_grid
from .kernels import GaussianKernel
from .quantum import PS_EPS, QuantumScenario


@dataclass(frozen=True)
class BlochDirection:
    """Direction on the Bloch sphere; polar angle clamped into [0, pi]."""

    azimuth: float
    polar: float

    def __post_init__(self):
        object.__setattr__(self, "azimuth", float(self.azimuth))
        object.__setattr__(self, "polar", float(min(max(self.polar, 0.0), math.pi)))

    def up_state(self) -> np.ndarray:
        h = 0.5 * self.polar
        return np.array([math.cos(h), np.exp(1j * self.azimuth) * math.sin(h)], dtype=complex)

    def down_state(self) -> np.ndarray:
        h = 0.5 * self.polar
        return np.array([-np.exp(-1j * self.azimuth) * math.sin(h), math.cos(h)], dtype=complex)


@dataclass(frozen=True)
class SpinConfiguration:
    """Intermediate and final quantisation directions; initial state is
    spin-up along z."""

    intermediate: BlochDirection
    final: BlochDirection


def spin_quasi_probabilities(cfg: SpinConfiguration) -> np.ndarray:
    """The four path weights in closed form, ordered
    (up'<-up, up'<-down, down'<-up, down'<-down).

    Two terms build each weight: a product of squared half-angle
    cosines/sines, plus an interference term proportional to
    ``cos(phi - phi') sin(theta) sin(theta') / 4`` whose sign alternates.
    The four always sum to one; any of them may be negative.
    """
    th, ph = cfg.intermediate.polar, cfg.intermediate.azimuth
    tf, pf = cfg.final.polar, cfg.final.azimuth
    cross = math.cos(ph - pf) * math.sin(th) * math.sin(tf) / 4.0
    cu, su = math.cos(th / 2.0) ** 2, math.sin(th / 2.0) ** 2
    cf, sf = math.cos(tf / 2.0) ** 2, math.sin(tf / 2.0) ** 2
    return np.array(
        [
            cf * cu + cross,
            cf * su - cross,
            sf * cu - cross,
            sf * su + cross,
        ]
    )


def to_scenario(
    cfg: SpinConfiguration,
    couplings=(1.0, -1.0),
    final_values=(1.0, -1.0),
) -> QuantumScenario:
    """Map the configuration onto a two-level scenario with trivial dynamics."""
    eye = np.eye(2, dtype=complex)
    return QuantumScenario(
        initial=np.array([1.0, 0.0], dtype=complex),
        basis_b=np.array([cfg.intermediate.up_state(), cfg.intermediate.down_state()]),
        b_values=np.asarray(couplings, dtype=float),
        basis_f=np.array([cfg.final.up_state(), cfg.final.down_state()]),
        f_values=np.asarray(final_values, dtype=float),
        evolution_1=eye,
        evolution_2=eye,
    )


@dataclass(frozen=True)
class SpinWeakResult:
    """Outcome of a broad-pointer spin-projection measurement with
    post-selection on the final 'up' state."""

    arrival: float
    shift: float
    unconditional: DensityGrid
    conditional: DensityGrid


def weak_spin_measurement(
    cfg: SpinConfiguration,
    width1: float,
    points: int = GRID_POINTS,
    eps_ps: float = PS_EPS,
) -> SpinWeakResult:
    """Spin projection onto the intermediate direction, couplings +-1.

    Returns the arrival probability of the final 'up' state, the
    conditional shift ``(w1 - w2) / (w1 + w2)`` built from the first two
    path weights, and a shared-grid pair of reading densities: the
    unconditional mixture and the (unnormalised) wide-limit conditional,
    which fits under the unconditional curve everywhere.
    """
    w = spin_quasi_probabilities(cfg)
    arrival = float(w[0] + w[1])
    if arrival < eps_ps:
        raise IllConditionedPostselection(
            f"arrival probability {arrival:.3e} below {eps_ps:.1e}"
        )
    shift = float((w[0] - w[1]) / arrival)
    node_up = math.cos(cfg.intermediate.polar / 2.0) ** 2
    couplings = np.array([1.0, -1.0])
    x = span_grid(np.append(couplings, shift), width1, points)
    k = GaussianKernel(width1)
    unconditional = node_up * k.density(x - 1.0) + (1.0 - node_up) * k.density(x + 1.0)
    conditional = arrival * k.density(x - shift)
    return SpinWeakResult(
        arrival=arrival,
        shift=shift,
        unconditional=DensityGrid(x, unconditional),
        conditional=DensityGrid(x, conditional),
    )


@dataclass(frozen=True)
class NegativityMap:
    """Classification of intermediate directions by path-weight sign.

    ``min_weight[a, p]`` is the smallest of the four closed-form weights
    at azimuth ``azimuths[a]``, polar ``polars[p]``; ``negative`` flags
    points where it drops below zero.
    """

    azimuths: np.ndarray
    polars: np.ndarray
    min_weight: np.ndarray
    final: BlochDirection

    @property
    def negative(self) -> np.ndarray:
        return self.min_weight < 0.0


def _min_weight(azimuth: float, polar: float, final: BlochDirection) -> float:
    cfg = SpinConfiguration(BlochDirection(azimuth, polar), final)
    return float(spin_quasi_probabilities(cfg).min())


def negativity_region_map(
    final: BlochDirection,
    azimuth_points: int = 360,
    polar_points: int = 180,
) -> NegativityMap:
    """Scan intermediate directions over [0, 2pi] x [0, pi].

    Emitted as a table for external plotting; no rendering here.
    """
    azimuths = np.linspace(0.0, 2.0 * math.pi, int(azimuth_points))
    polars = np.linspace(0.0, math.pi, int(polar_points))
    tf, pf = final.polar, final.azimuth
    cf, sf = math.cos(tf / 2.0) ** 2, math.sin(tf / 2.0) ** 2
    cu = np.cos(polars / 2.0) ** 2
    su = np.sin(polars / 2.0) ** 2
    cross = np.cos(azimuths[:, None] - pf) * np.sin(polars)[None, :] * math.sin(tf) / 4.0
    stacked = np.stack(
        [
            cf * cu[None, :] + cross,
            cf * su[None, :] - cross,
            sf * cu[None, :] - cross,
            sf * su[None, :] + cross,
        ]
    )
    return NegativityMap(azimuths, polars, stacked.min(axis=0), final)


def refine_region_boundary(
    nmap: NegativityMap, tol: float = 1e-6, max_iter: int = 80
) -> list[tuple[float, float]]:
    """Bisect each azimuth column for polar angles where the minimum
    weight crosses zero; returns (azimuth, polar) boundary points."""
    points = []
    for a, azimuth in enumerate(nmap.azimuths):
        col = nmap.min_weight[a]
        signs = np.sign(col)
        for p in range(col.size - 1):
            if signs[p] == 0.0:
                points.append((float(azimuth), float(nmap.polars[p])))
                continue
            if signs[p] * signs[p + 1] < 0:
                lo, hi = float(nmap.polars[p]), float(nmap.polars[p + 1])
                flo = _min_weight(azimuth, lo, nmap.final)
                for _ in range(max_iter):
                    mid = 0.5 * (lo + hi)
                    fmid = _min_weight(azimuth, mid, nmap.final)
                    if abs(fmid) < tol:
                        break
                    if flo * fmid < 0:
                        hi = mid
                    else:
                        lo, flo = mid, fmid
                points.append((float(azimuth), 0.5 * (lo + hi)))
    return points


@dataclass(frozen=True)
class NonlocalitySweep:
    """Families of final directions holding one path amplitude constant.

    Along the sweep the amplitude of the up'<-up path stays at ``beta``
    while its quasi-probability ``beta * cos(theta'/2)`` keeps changing:
    the weight attached to one path responds to the other paths it
    interferes with.
    """

    beta: float
    polar: np.ndarray
    final_polar: np.ndarray
    amplitude: np.ndarray
    quasi_probability: np.ndarray


def admissible_polar_limit(beta: float) -> float:
    """Largest intermediate polar angle for which the sweep is defined."""
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    return 2.0 * math.acos(beta)


def nonlocality_sweep(beta: float, polar_angles) -> NonlocalitySweep:
    """Sweep intermediate polar angles with azimuths equal, amplitude pinned.

    For each ``theta`` the final polar angle
    ``theta' = theta + 2*arccos(beta / cos(theta/2))`` keeps the
    up'<-up amplitude ``cos(theta/2) cos((theta - theta')/2)`` equal to
    ``beta``.

    Raises
    ------
    DomainError
        If ``beta`` is outside (0, 1), an angle is outside the stated
        sweep range, or ``beta / cos(theta/2) > 1`` so the arccos does
        not exist.
    """
    limit = admissible_polar_limit(beta)
    stated_range = 2.0 * math.acos(beta / 2.0)
    th = np.atleast_1d(np.asarray(polar_angles, dtype=float))
    if np.any(th <= 0.0) or np.any(th >= stated_range):
        raise DomainError(
            f"polar angles must lie strictly inside (0, {stated_range:.6f})"
        )
    ratio = beta / np.cos(th / 2.0)
    if np.any(ratio > 1.0):
        bad = float(th[np.argmax(ratio)])
        raise DomainError(
            f"beta/cos(theta/2) exceeds 1 at theta = {bad:.6f} "
            f"(admissible polar angles stop at {limit:.6f})"
        )
    final_polar = th + 2.0 * np.arccos(ratio)
    amplitude = np.cos(th / 2.0) * np.cos((th - final_polar) / 2.0)
    quasi = beta * np.cos(final_polar / 2.0)
    return NonlocalitySweep(
        beta=float(beta),
        polar=th,
        final_polar=final_polar,
        amplitude=amplitude,
        quasi_probability=quasi,
    )
