"""Scenario runner and data emitter.

Loads a declarative YAML scenario file, executes one named experiment,
and writes CSV data files plus a JSON run report into an output
directory.  Identical scenario file and seed produce byte-identical CSV
output.  Exit codes: 0 all built-in checks passed, 1 at least one check
failed, 2 input error (parse, validation, or execution failure).

See the repository README for the scenario file format and the list of
experiments.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import classical as cl
from . import kernels as kr
from . import quantum as qn
from . import sampling as smp
from . import spin as sp
from .csvio import write_csv
from .errors import (
    ExecutionError,
    ParseError,
    PointerLabError,
    ValidationError,
)
from .grids import GRID_POINTS, DensityGrid, span_grid

DEFAULT_SEED = 0
DEFAULT_TRIALS = 100_000

KINDS = ("classical", "quantum", "spin")


# --------------------------------------------------------------------------
# scenario parsing
# --------------------------------------------------------------------------


def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a mapping, got {type(obj).__name__}")
    return obj


def _real(obj, path: str) -> float:
    if isinstance(obj, bool):
        raise ValidationError(f"{path}: expected a number, got a boolean")
    if isinstance(obj, (int, float)):
        return float(obj)
    if isinstance(obj, str):
        try:
            return float(obj)
        except ValueError:
            pass
    raise ValidationError(f"{path}: expected a number, got {obj!r}")


def _integer(obj, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ValidationError(f"{path}: expected an integer, got {obj!r}")
    return int(obj)


def _complex_entry(obj, path: str) -> complex:
    """A complex number serialised as a [re, im] pair (bare reals allowed)."""
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(float(obj), 0.0)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(_real(obj[0], f"{path}[0]"), _real(obj[1], f"{path}[1]"))
    raise ValidationError(f"{path}: expected [re, im] or a real number, got {obj!r}")


def _real_vector(obj, path: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValidationError(f"{path}: expected a non-empty list of numbers")
    return np.array([_real(v, f"{path}[{k}]") for k, v in enumerate(obj)])


def _real_matrix(obj, path: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValidationError(f"{path}: expected a non-empty list of rows")
    return np.array([_real_vector(row, f"{path}[{k}]") for k, row in enumerate(obj)])


def _complex_vector(obj, path: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValidationError(f"{path}: expected a non-empty list")
    return np.array([_complex_entry(v, f"{path}[{k}]") for k, v in enumerate(obj)])


def _complex_matrix(obj, path: str, n: int | None = None) -> np.ndarray:
    if isinstance(obj, str):
        if obj == "identity":
            if n is None:
                raise ValidationError(f"{path}: 'identity' needs a known dimension")
            return np.eye(n, dtype=complex)
        raise ValidationError(f"{path}: unknown matrix keyword {obj!r}")
    if not isinstance(obj, (list, tuple)) or not obj:
        raise ValidationError(f"{path}: expected a matrix or 'identity'")
    return np.array([_complex_vector(row, f"{path}[{k}]") for k, row in enumerate(obj)])


def _get(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ValidationError(f"{path}.{key}: required key is missing")
    return mapping[key]


@dataclass(frozen=True)
class SpinSection:
    config: sp.SpinConfiguration
    couplings: np.ndarray
    final_values: np.ndarray
    width1: float
    width2: float
    beta: float | None
    sweep_points: int
    map_azimuth_points: int
    map_polar_points: int


@dataclass(frozen=True)
class Scenario:
    """A parsed and fully validated scenario file."""

    path: Path
    digest: str
    kind: str
    seed: int
    trials: int
    grid_points: int
    postselect: int | None
    classical_net: cl.ClassicalNetwork | None = None
    classical_pointer: cl.ClassicalPointerPair | None = None
    quantum_scenario: qn.QuantumScenario | None = None
    pointer1: qn.PointerSpec | None = None
    pointer2: qn.PointerSpec | None = None
    spin: SpinSection | None = None
    collapse_set: kr.WeightedShiftSet | None = None
    probe_scales: np.ndarray | None = None


def _parse_direction(obj, path: str) -> sp.BlochDirection:
    m = _require_mapping(obj, path)
    return sp.BlochDirection(
        _real(_get(m, "azimuth", path), f"{path}.azimuth"),
        _real(_get(m, "polar", path), f"{path}.polar"),
    )


def _wrap_section(path: str, build):
    try:
        return build()
    except ValidationError:
        raise
    except (ValueError, PointerLabError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file.

    Raises
    ------
    ParseError
        If the file cannot be read or is not valid YAML.
    ValidationError
        If required keys are missing or any invariant fails; messages
        carry the offending field path.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: scenario must be a mapping at top level")

    kind = raw.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"kind: expected one of {KINDS}, got {kind!r}")
    seed = _integer(raw.get("seed", DEFAULT_SEED), "seed")
    trials = _integer(raw.get("trials", DEFAULT_TRIALS), "trials")
    if trials < 1:
        raise ValidationError(f"trials: must be >= 1, got {trials}")
    grid_points = _integer(raw.get("grid_points", GRID_POINTS), "grid_points")
    if grid_points < 16:
        raise ValidationError(f"grid_points: must be >= 16, got {grid_points}")
    postselect = raw.get("postselect")
    if postselect is not None:
        postselect = _integer(postselect, "postselect")

    fields: dict = {}

    if kind == "classical":
        sec = _require_mapping(_get(raw, "classical", "scenario"), "classical")

        def build_classical():
            net = cl.ClassicalNetwork(
                _real_vector(_get(sec, "entry", "classical"), "classical.entry"),
                _real_matrix(_get(sec, "branching", "classical"), "classical.branching"),
            )
            pointer = cl.ClassicalPointerPair(
                _real_vector(_get(sec, "b_values", "classical"), "classical.b_values"),
                _real_vector(_get(sec, "f_values", "classical"), "classical.f_values"),
                _real(_get(sec, "width1", "classical"), "classical.width1"),
                _real(_get(sec, "width2", "classical"), "classical.width2"),
            )
            if pointer.b_values.size != net.size:
                raise ValidationError(
                    f"classical.b_values: expected length {net.size}, got {pointer.b_values.size}"
                )
            return net, pointer

        fields["classical_net"], fields["classical_pointer"] = _wrap_section(
            "classical", build_classical
        )

    if kind == "quantum":
        sec = _require_mapping(_get(raw, "quantum", "scenario"), "quantum")

        def build_quantum():
            initial = _complex_vector(_get(sec, "initial", "quantum"), "quantum.initial")
            n = initial.size
            scenario = qn.QuantumScenario(
                initial=initial,
                basis_b=_complex_matrix(_get(sec, "basis_b", "quantum"), "quantum.basis_b"),
                b_values=_real_vector(_get(sec, "b_values", "quantum"), "quantum.b_values"),
                basis_f=_complex_matrix(_get(sec, "basis_f", "quantum"), "quantum.basis_f"),
                f_values=_real_vector(_get(sec, "f_values", "quantum"), "quantum.f_values"),
                evolution_1=_complex_matrix(
                    sec.get("evolution_1", "identity"), "quantum.evolution_1", n
                ),
                evolution_2=_complex_matrix(
                    sec.get("evolution_2", "identity"), "quantum.evolution_2", n
                ),
            )
            return scenario

        scenario = _wrap_section("quantum", build_quantum)
        fields["quantum_scenario"] = scenario

        def build_pointers():
            return (
                qn.PointerSpec(
                    scenario.b_values, _real(_get(sec, "width1", "quantum"), "quantum.width1")
                ),
                qn.PointerSpec(
                    scenario.f_values, _real(_get(sec, "width2", "quantum"), "quantum.width2")
                ),
            )

        fields["pointer1"], fields["pointer2"] = _wrap_section("quantum", build_pointers)

    if kind == "spin":
        sec = _require_mapping(_get(raw, "spin", "scenario"), "spin")

        def build_spin():
            config = sp.SpinConfiguration(
                _parse_direction(_get(sec, "intermediate", "spin"), "spin.intermediate"),
                _parse_direction(_get(sec, "final", "spin"), "spin.final"),
            )
            couplings = (
                _real_vector(sec["couplings"], "spin.couplings")
                if "couplings" in sec
                else np.array([1.0, -1.0])
            )
            final_values = (
                _real_vector(sec["final_values"], "spin.final_values")
                if "final_values" in sec
                else np.array([1.0, -1.0])
            )
            if couplings.size != 2 or final_values.size != 2:
                raise ValidationError("spin.couplings/final_values: expected length 2")
            beta = sec.get("beta")
            if beta is not None:
                beta = _real(beta, "spin.beta")
                if not 0.0 < beta < 1.0:
                    raise ValidationError(f"spin.beta: must lie in (0, 1), got {beta}")
            return SpinSection(
                config=config,
                couplings=couplings,
                final_values=final_values,
                width1=_real(_get(sec, "width1", "spin"), "spin.width1"),
                width2=_real(sec.get("width2", 0.05), "spin.width2"),
                beta=beta,
                sweep_points=_integer(sec.get("sweep_points", 41), "spin.sweep_points"),
                map_azimuth_points=_integer(
                    sec.get("map_azimuth_points", 360), "spin.map_azimuth_points"
                ),
                map_polar_points=_integer(
                    sec.get("map_polar_points", 180), "spin.map_polar_points"
                ),
            )

        spin_sec = _wrap_section("spin", build_spin)
        fields["spin"] = spin_sec

        def build_mapped():
            scenario = sp.to_scenario(
                spin_sec.config, spin_sec.couplings, spin_sec.final_values
            )
            return (
                scenario,
                qn.PointerSpec(spin_sec.couplings, spin_sec.width1),
                qn.PointerSpec(spin_sec.final_values, spin_sec.width2),
            )

        (
            fields["quantum_scenario"],
            fields["pointer1"],
            fields["pointer2"],
        ) = _wrap_section("spin", build_mapped)

    if "collapse" in raw:
        sec = _require_mapping(raw["collapse"], "collapse")

        def build_collapse():
            shift_set = kr.WeightedShiftSet(
                _complex_vector(_get(sec, "weights", "collapse"), "collapse.weights"),
                _real_vector(_get(sec, "shifts", "collapse"), "collapse.shifts"),
                _real(_get(sec, "scale", "collapse"), "collapse.scale"),
            )
            scales = (
                _real_vector(sec["probe_scales"], "collapse.probe_scales")
                if "probe_scales" in sec
                else shift_set.scale * np.array([1.0, 2.0, 4.0, 8.0, 16.0])
            )
            if np.any(scales <= 0) or np.any(np.diff(scales) <= 0):
                raise ValidationError(
                    "collapse.probe_scales: must be positive and strictly increasing"
                )
            return shift_set, scales

        fields["collapse_set"], fields["probe_scales"] = _wrap_section(
            "collapse", build_collapse
        )

    digest = hashlib.sha256(text.encode()).hexdigest()
    return Scenario(
        path=path,
        digest=digest,
        kind=kind,
        seed=seed,
        trials=trials,
        grid_points=grid_points,
        postselect=postselect,
        **fields,
    )


# --------------------------------------------------------------------------
# run report
# --------------------------------------------------------------------------


@dataclass
class RunReport:
    """Scalars, identity-check outcomes and emitted files of one run."""

    scenario_name: str
    scenario_digest: str
    kind: str
    experiment: str
    seed: int
    scalars: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def scalar(self, name: str, value, definition: str, tolerance: float | None = None):
        entry = {"value": float(value), "definition": definition}
        if tolerance is not None:
            entry["tolerance"] = float(tolerance)
        self.scalars[name] = entry

    def check(self, name: str, passed: bool, detail: str):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    def to_dict(self) -> dict:
        return {
            "scenario": {
                "name": self.scenario_name,
                "sha256": self.scenario_digest,
                "kind": self.kind,
                "seed": self.seed,
            },
            "experiment": self.experiment,
            "scalars": self.scalars,
            "checks": self.checks,
            "all_checks_passed": self.all_passed,
            "outputs": self.outputs,
        }

    def write(self, out_dir: Path) -> Path:
        target = out_dir / "report.json"
        target.write_text(json.dumps(self.to_dict(), indent=2) + "\n", newline="\n")
        return target


def _emit(report: RunReport, out: Path, name: str, header, rows) -> None:
    write_csv(out / name, header, rows)
    report.outputs.append(name)


def _density_columns(grids: list[DensityGrid], labels: list[str]):
    x = grids[0].x
    for g in grids[1:]:
        if not np.array_equal(g.x, x):
            raise ValueError("density columns must share one grid")
    header = ["x"] + labels
    rows = zip(x.tolist(), *[g.values.tolist() for g in grids])
    return header, rows


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------


def _need(scenario: Scenario, attr: str, experiment: str):
    value = getattr(scenario, attr)
    if value is None:
        section = {
            "classical_net": "classical",
            "classical_pointer": "classical",
            "quantum_scenario": "quantum or spin",
            "pointer1": "quantum or spin",
            "pointer2": "quantum or spin",
            "spin": "spin",
            "collapse_set": "collapse",
            "probe_scales": "collapse",
        }[attr]
        raise ValidationError(
            f"experiment {experiment!r} needs a {section} section in the scenario file"
        )
    return value


def _postselect_index(scenario: Scenario, arrivals: np.ndarray) -> int:
    if scenario.postselect is not None:
        j = scenario.postselect
        if not 0 <= j < arrivals.size:
            raise ValidationError(
                f"postselect: index {j} outside 0..{arrivals.size - 1}"
            )
        return j
    valid = np.where(arrivals >= qn.PS_EPS, arrivals, np.inf)
    return int(np.argmin(valid))


def _mc_tolerance(base: float, trials: int, reference: int = 1_000_000) -> float:
    return base * math.sqrt(max(1.0, reference / trials))


def _exp_fig1_collapse(scenario: Scenario, out: Path, report: RunReport) -> None:
    shift_set = _need(scenario, "collapse_set", "fig1-collapse")
    scales = _need(scenario, "probe_scales", "fig1-collapse")
    points = scenario.grid_points

    center = kr.collapse_center_complex(shift_set)
    exact = kr.mixture_squared_density(shift_set, kr.AMPLITUDE, points)
    limit = kr.collapse_limit_density(shift_set, kr.AMPLITUDE, points, x=exact.x)
    report.scalar(
        "collapse-center",
        center,
        "weighted centroid of the shifts: real part of sum(w*s)/sum(w)",
    )
    report.scalar(
        "squared-mixture-centroid",
        exact.centroid(),
        "centroid of the squared exact mixture on the grid",
    )
    if shift_set.has_real_weights:
        signed = kr.mixture_value(shift_set, exact.x, kr.AMPLITUDE).real
        report.scalar(
            "signed-mixture-centroid",
            DensityGrid(exact.x, signed).centroid(),
            "centroid of the signed exact mixture on the grid",
        )
    _emit(
        report,
        out,
        "collapse_curves.csv",
        *_density_columns([exact, limit], ["exact_squared_mixture", "collapsed_limit"]),
    )

    errors = kr.convergence_probe(shift_set, scales, points)
    _emit(
        report,
        out,
        "collapse_probe.csv",
        ["scale", "sup_error"],
        zip(scales.tolist(), errors.tolist()),
    )
    spread = float(np.max(np.abs(shift_set.shifts)) + abs(center))
    qualifying = np.asarray(scales) >= 10.0 * spread
    err_q = errors[qualifying]
    monotone = bool(np.all(np.diff(err_q) <= 0.0)) if err_q.size > 1 else True
    report.check(
        "probe-monotone-decrease",
        monotone,
        f"sup errors over qualifying scales (>= {10.0 * spread:g}): "
        + ", ".join(format(e, ".3e") for e in err_q),
    )
    report.check(
        "probe-vanishes",
        bool(errors[-1] < errors[0] or errors[0] == 0.0),
        f"first {errors[0]:.3e} -> last {errors[-1]:.3e}",
    )


def _exp_classical_two_point(scenario: Scenario, out: Path, report: RunReport) -> None:
    net = _need(scenario, "classical_net", "classical-two-point")
    pointer = _need(scenario, "classical_pointer", "classical-two-point")
    dens = cl.density_no_postselection(net, pointer, scenario.grid_points)
    mean = cl.mean_shift(net, pointer.b_values)
    report.scalar(
        "unconditional-mean-shift",
        mean,
        "entry-probability average of the node couplings",
    )
    for i, p in enumerate(net.entry):
        report.scalar(
            f"entry-probability-{i}", p, f"probability of entering node {i}"
        )
    mass = dens.integral()
    report.scalar("density-mass", mass, "integral of the reading density", 1e-8)
    report.check("density-normalised", abs(mass - 1.0) <= 1e-8, f"mass = {mass!r}")
    centroid = dens.centroid()
    report.check(
        "density-centroid-matches-mean",
        abs(centroid - mean) <= 1e-6,
        f"centroid {centroid!r} vs mean shift {mean!r}",
    )
    _emit(report, out, "classical_reading_density.csv", *_density_columns([dens], ["density"]))


def _exp_classical_postselect(scenario: Scenario, out: Path, report: RunReport) -> None:
    net = _need(scenario, "classical_net", "classical-postselect")
    pointer = _need(scenario, "classical_pointer", "classical-postselect")
    arrivals = cl.arrival_probabilities(net)
    b = pointer.b_values
    lo, hi = float(b.min()), float(b.max())
    k = kr.GaussianKernel(pointer.width1)
    x = None
    grids, labels, rows = [], [], []
    in_range = True
    for j in range(net.size):
        shift = cl.conditional_shift(net, b, j)
        rows.append((j, float(arrivals[j]), shift))
        report.scalar(
            f"conditional-shift-{j}",
            shift,
            f"mean node coupling among trials ending in final state {j}",
        )
        in_range = in_range and (lo - 1e-12 <= shift <= hi + 1e-12)
        if x is None:
            x = span_grid(np.append(b, [shift]), pointer.width1, scenario.grid_points)
        grids.append(DensityGrid(x, arrivals[j] * k.density(x - shift)))
        labels.append(f"conditional_{j}")
    report.check(
        "conditional-shifts-in-coupling-range",
        in_range,
        f"every conditional shift inside [{lo:g}, {hi:g}]",
    )
    total = DensityGrid(x, np.sum([g.values for g in grids], axis=0))
    reference = DensityGrid(
        x, k.density(x[:, None] - b) @ net.entry
    )
    gap = total.sup_distance(reference)
    wide = pointer.width1 >= 100.0 * (np.ptp(b) + max(abs(lo), abs(hi)))
    report.scalar(
        "conditional-sum-gap",
        gap,
        "sup distance between summed conditional densities and the unconditional one",
    )
    if wide:
        report.check(
            "conditional-sum-matches-unconditional",
            gap <= 1e-3 * float(reference.values.max()),
            f"sup gap {gap:.3e} (wide-pointer regime)",
        )
    _emit(
        report,
        out,
        "classical_conditional_shifts.csv",
        ["final_state", "arrival_probability", "conditional_shift"],
        rows,
    )
    _emit(
        report,
        out,
        "classical_conditional_densities.csv",
        *_density_columns(grids, labels),
    )


def _exp_classical_recover_paths(scenario: Scenario, out: Path, report: RunReport) -> None:
    net = _need(scenario, "classical_net", "classical-recover-paths")
    pointer = _need(scenario, "classical_pointer", "classical-recover-paths")
    result = cl.monte_carlo_recovery(net, pointer, scenario.trials, scenario.seed)
    analytic = cl.path_probabilities(net)
    err = np.max(np.abs(result.recovered.table - analytic.table))
    tol = _mc_tolerance(0.01, scenario.trials)
    report.scalar(
        "recovery-max-error",
        err,
        "largest entrywise gap between recovered and analytic path probabilities",
        tol,
    )
    report.check("recovery-within-tolerance", err <= tol, f"max error {err:.4g} <= {tol:.4g}")
    rows = []
    for j in range(net.size):
        for i in range(net.size):
            rows.append(
                (j, i, float(analytic.table[j, i]), float(result.recovered.table[j, i]),
                 float(result.recovered.table[j, i] - analytic.table[j, i]))
            )
    _emit(
        report,
        out,
        "classical_recovered_paths.csv",
        ["final_state", "node", "analytic", "recovered", "error"],
        rows,
    )


def _exp_classical_causality(scenario: Scenario, out: Path, report: RunReport) -> None:
    net = _need(scenario, "classical_net", "classical-causality")
    pointer = _need(scenario, "classical_pointer", "classical-causality")
    marginal = cl.causality_marginal(net, pointer, scenario.grid_points)
    reference = cl.density_no_postselection(net, pointer, scenario.grid_points)
    gap = marginal.sup_distance(reference)
    report.scalar(
        "causality-sup-gap",
        gap,
        "sup distance between the integrated-out joint and the unconditional density",
        1e-8,
    )
    report.check("causality-identity", gap <= 1e-8, f"sup gap {gap:.3e}")
    _emit(
        report,
        out,
        "classical_causality.csv",
        ["x", "marginal", "unconditional", "difference"],
        zip(
            marginal.x.tolist(),
            marginal.values.tolist(),
            reference.values.tolist(),
            (marginal.values - reference.values).tolist(),
        ),
    )


def _exp_quantum_two_point(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "quantum-two-point")
    pointer1 = _need(scenario, "pointer1", "quantum-two-point")
    dens = qn.density_one_pointer(sc, pointer1, scenario.grid_points)
    mean = qn.expected_shift(sc, pointer1.couplings)
    report.scalar(
        "unconditional-mean-shift",
        mean,
        "branch-probability average of the couplings (operator expectation)",
    )
    probs = qn.node_probabilities(sc)
    for i, p in enumerate(probs):
        report.scalar(f"node-probability-{i}", p, f"probability of intermediate branch {i}")
    mass = dens.integral()
    report.scalar("density-mass", mass, "integral of the reading density", 1e-8)
    report.check("density-normalised", abs(mass - 1.0) <= 1e-8, f"mass = {mass!r}")
    centroid = dens.centroid()
    report.check(
        "density-centroid-matches-mean",
        abs(centroid - mean) <= 1e-6,
        f"centroid {centroid!r} vs mean shift {mean!r}",
    )
    total = float(probs.sum())
    report.check(
        "node-probabilities-normalised",
        abs(total - 1.0) <= 1e-12,
        f"sum = {total!r}",
    )
    _emit(report, out, "quantum_reading_density.csv", *_density_columns([dens], ["density"]))


def _exp_quantum_postselect(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "quantum-postselect")
    pointer1 = _need(scenario, "pointer1", "quantum-postselect")
    arrivals = qn.arrival_probabilities(sc)
    qp = qn.quasi_probabilities(sc)
    k = kr.GaussianKernel(pointer1.width)
    rows = []
    route_gap = 0.0
    shifts = []
    included = []
    for j in range(sc.dim):
        if arrivals[j] < qn.PS_EPS:
            continue
        included.append(j)
        via_amp = qn.pointer_shift(sc, j, pointer1.couplings)
        via_qp = qn.shift_from_quasi_probabilities(qp, pointer1.couplings, j)
        route_gap = max(route_gap, abs(via_amp - via_qp))
        shifts.append(via_amp)
        rows.append((j, float(arrivals[j]), via_amp, via_qp))
        report.scalar(
            f"conditional-shift-{j}",
            via_amp,
            f"real part of the amplitude-weighted coupling average, final state {j}",
        )
        report.scalar(
            f"arrival-probability-{j}", arrivals[j], f"probability of final state {j}"
        )
    report.scalar(
        "shift-route-gap",
        route_gap,
        "largest gap between the amplitude-ratio and table-ratio conditional shifts",
        1e-12,
    )
    report.check("shift-routes-agree", route_gap <= 1e-12, f"max gap {route_gap:.3e}")
    x = span_grid(
        np.concatenate([pointer1.couplings, np.asarray(shifts)]),
        pointer1.width,
        scenario.grid_points,
    )
    grids = [
        DensityGrid(x, arrivals[j] * k.density(x - s)) for j, s in zip(included, shifts)
    ]
    labels = [f"conditional_{j}" for j in included]
    _emit(
        report,
        out,
        "quantum_conditional_shifts.csv",
        ["final_state", "arrival_probability", "shift_amplitude_route", "shift_table_route"],
        rows,
    )
    _emit(report, out, "quantum_conditional_densities.csv", *_density_columns(grids, labels))


def _exp_quasiprob_table(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "quasiprob-table")
    qp = qn.quasi_probabilities(sc)
    report.scalar("table-total", qp.total, "sum of all path weights", 1e-12)
    report.check("table-sums-to-one", abs(qp.total - 1.0) <= 1e-12, f"total = {qp.total!r}")
    node_gap = float(np.max(np.abs(qp.node_marginals - qn.node_probabilities(sc))))
    arrival_gap = float(np.max(np.abs(qp.arrival_marginals - qn.arrival_probabilities(sc))))
    report.check(
        "column-marginals-match-node-probabilities",
        node_gap <= 1e-12,
        f"max gap {node_gap:.3e}",
    )
    report.check(
        "row-marginals-match-arrival-probabilities",
        arrival_gap <= 1e-12,
        f"max gap {arrival_gap:.3e}",
    )
    max_abs = float(np.max(np.abs(qp.table)))
    report.check("entries-bounded-by-one", max_abs <= 1.0 + 1e-12, f"max |entry| {max_abs!r}")
    report.scalar(
        "most-negative-entry",
        float(qp.table.min()),
        "smallest path weight in the table",
    )
    rows = []
    for j in range(sc.dim):
        for i in range(sc.dim):
            rows.append((j, i, float(qp.table[j, i])))
    _emit(
        report,
        out,
        "quasi_probabilities.csv",
        ["final_state", "node", "weight"],
        rows,
    )
    _emit(
        report,
        out,
        "quasi_probability_marginals.csv",
        ["index", "arrival_marginal", "node_marginal"],
        zip(
            range(sc.dim),
            qp.arrival_marginals.tolist(),
            qp.node_marginals.tolist(),
        ),
    )


def _exp_spin_region_map(scenario: Scenario, out: Path, report: RunReport) -> None:
    spin_sec = _need(scenario, "spin", "spin-region-map")
    nmap = sp.negativity_region_map(
        spin_sec.config.final,
        spin_sec.map_azimuth_points,
        spin_sec.map_polar_points,
    )
    rows = []
    for a, azimuth in enumerate(nmap.azimuths):
        for p, polar in enumerate(nmap.polars):
            rows.append(
                (float(azimuth), float(polar), float(nmap.min_weight[a, p]),
                 bool(nmap.negative[a, p]))
            )
    _emit(
        report,
        out,
        "spin_region_map.csv",
        ["azimuth", "polar", "min_weight", "some_negative"],
        rows,
    )
    frac = float(np.mean(nmap.negative))
    report.scalar(
        "negative-fraction",
        frac,
        "fraction of scanned intermediate directions with a negative path weight",
    )
    wrap_gap = float(np.max(np.abs(nmap.min_weight[0] - nmap.min_weight[-1])))
    report.check(
        "azimuth-periodicity",
        wrap_gap <= 1e-12,
        f"map equal at azimuth 0 and 2*pi to {wrap_gap:.3e}",
    )
    probe = sp.SpinConfiguration(
        sp.BlochDirection(float(nmap.azimuths[len(nmap.azimuths) // 2]),
                          float(nmap.polars[len(nmap.polars) // 2])),
        spin_sec.config.final,
    )
    closed = sp.spin_quasi_probabilities(probe)
    general = qn.quasi_probabilities(sp.to_scenario(probe)).table.ravel()
    gap = float(np.max(np.abs(closed - general)))
    report.check(
        "closed-form-matches-general",
        gap <= 1e-12,
        f"mid-grid spot check gap {gap:.3e}",
    )


def _exp_spin_weak_value(scenario: Scenario, out: Path, report: RunReport) -> None:
    spin_sec = _need(scenario, "spin", "spin-weak-value")
    result = sp.weak_spin_measurement(
        spin_sec.config, spin_sec.width1, scenario.grid_points
    )
    weights = sp.spin_quasi_probabilities(spin_sec.config)
    names = ("up-up", "up-down", "down-up", "down-down")
    for w, name in zip(weights, names):
        report.scalar(
            f"path-weight-{name}",
            w,
            f"path weight for final-{name.split('-')[0]} via intermediate-{name.split('-')[1]}",
        )
    report.scalar(
        "arrival-probability",
        result.arrival,
        "probability of post-selecting the final up state",
        5e-5,
    )
    report.scalar(
        "conditional-shift",
        result.shift,
        "broad-pointer reading shift conditional on the final up state",
        1e-3,
    )
    sc = _need(scenario, "quantum_scenario", "spin-weak-value")
    general_shift = qn.pointer_shift(sc, 0, spin_sec.couplings)
    gap = abs(general_shift - result.shift)
    report.check(
        "closed-form-shift-matches-general",
        gap <= 1e-12,
        f"gap {gap:.3e}",
    )
    fits = bool(np.all(result.conditional.values <= result.unconditional.values * (1 + 1e-12)))
    report.check(
        "conditional-fits-under-unconditional",
        fits,
        "conditional density pointwise below the unconditional one",
    )
    mass = result.unconditional.integral()
    report.check("density-normalised", abs(mass - 1.0) <= 1e-8, f"mass = {mass!r}")
    cond_mass = result.conditional.integral()
    report.check(
        "conditional-mass-equals-arrival",
        abs(cond_mass - result.arrival) <= 1e-8,
        f"conditional mass {cond_mass!r} vs arrival {result.arrival!r}",
    )
    _emit(
        report,
        out,
        "spin_reading_densities.csv",
        *_density_columns(
            [result.unconditional, result.conditional], ["unconditional", "conditional"]
        ),
    )
    filt = smp.reshaping_filter(sc, _need(scenario, "pointer1", "spin-weak-value"),
                                scenario.grid_points)
    pre, rate, offset = filt.wide_limit_coefficients(0)
    report.scalar("acceptance-prefactor", pre, "arrival probability entering the wide-limit acceptance ratio")
    report.scalar("acceptance-rate", rate, "exponential rate of the wide-limit acceptance ratio")
    report.scalar("acceptance-offset", offset, "constant offset of the wide-limit acceptance ratio")
    crossing = filt.wide_limit_unit_crossing(0)
    if crossing is not None:
        report.scalar(
            "acceptance-unit-crossing",
            crossing,
            "reading at which the wide-limit acceptance ratio reaches one",
        )
    _emit(
        report,
        out,
        "spin_acceptance_filter.csv",
        ["x", "omega_up", "wide_limit_ratio"],
        zip(
            filt.x.tolist(),
            filt.omega[0].tolist(),
            filt.wide_limit_ratio(0, filt.x).tolist(),
        ),
    )


def _exp_nonlocality_sweep(scenario: Scenario, out: Path, report: RunReport) -> None:
    spin_sec = _need(scenario, "spin", "nonlocality-sweep")
    if spin_sec.beta is None:
        raise ValidationError("spin.beta: required for the nonlocality-sweep experiment")
    beta = spin_sec.beta
    limit = sp.admissible_polar_limit(beta)
    margin = 1e-6 * limit
    thetas = np.linspace(margin, limit - margin, spin_sec.sweep_points)
    sweep = sp.nonlocality_sweep(beta, thetas)
    _emit(
        report,
        out,
        "nonlocality_sweep.csv",
        ["polar", "final_polar", "amplitude", "quasi_probability"],
        zip(
            sweep.polar.tolist(),
            sweep.final_polar.tolist(),
            sweep.amplitude.tolist(),
            sweep.quasi_probability.tolist(),
        ),
    )
    amp_gap = float(np.max(np.abs(sweep.amplitude - beta)))
    variation = float(sweep.quasi_probability.max() - sweep.quasi_probability.min())
    report.scalar("amplitude-constancy-gap", amp_gap, "largest |amplitude - beta| along the sweep", 1e-12)
    report.scalar("quasi-probability-variation", variation, "spread of the path weight along the sweep")
    report.check("amplitude-held-constant", amp_gap <= 1e-12, f"max gap {amp_gap:.3e}")
    report.check(
        "path-weight-depends-on-other-paths",
        variation > 0.1,
        f"variation {variation:.4f} while the amplitude never moves",
    )
    net = cl.ClassicalNetwork([0.5, 0.5], [[0.7, 0.3], [0.3, 0.7]])
    before, after = cl.locality_demo(net, 0.9)
    report.scalar("classical-recovered-before", before, "recovered first-route probability before tampering")
    report.scalar("classical-recovered-after", after, "recovered first-route probability after tampering")
    report.check(
        "classical-counterpart-local",
        before == after,
        f"recovered route probability unchanged: {before!r} == {after!r}",
    )


def _exp_reshaping_demo(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "reshaping-demo")
    pointer1 = _need(scenario, "pointer1", "reshaping-demo")
    pointer2 = _need(scenario, "pointer2", "reshaping-demo")
    arrivals = qn.arrival_probabilities(sc)
    j = _postselect_index(scenario, arrivals)
    filt = smp.reshaping_filter(sc, pointer1, scenario.grid_points)
    bounds_ok = bool(np.all(filt.omega >= 0.0) and np.all(filt.omega <= 1.0))
    partition_gap = float(np.max(np.abs(filt.omega.sum(axis=0) - 1.0)))
    report.check("acceptance-in-unit-interval", bounds_ok, "omega within [0, 1] everywhere")
    report.check(
        "acceptance-partition-of-unity",
        partition_gap <= 1e-10,
        f"max |sum_j omega_j - 1| = {partition_gap:.3e}",
    )
    labels = [f"omega_{k}" for k in np.nonzero(filt.included)[0]]
    _emit(
        report,
        out,
        "reshaping_filter.csv",
        ["x"] + labels,
        zip(filt.x.tolist(), *[filt.omega[k].tolist() for k in np.nonzero(filt.included)[0]]),
    )

    samples = smp.sample_quantum_readings(sc, pointer1, pointer2, scenario.trials, scenario.seed)
    kept = smp.apply_filter(samples, filt, j, scenario.seed + 1)
    survival = len(kept) / len(samples)
    dens = qn.density_one_pointer(sc, pointer1, scenario.grid_points)
    expected = float(np.trapezoid(filt.omega_at(j, dens.x) * dens.values, dens.x))
    se = math.sqrt(expected * (1.0 - expected) / scenario.trials)
    report.scalar(
        "survival-fraction",
        survival,
        f"fraction of unconditional readings kept for final state {j}",
        3.0 * se,
    )
    report.scalar(
        "expected-survival",
        expected,
        "quadrature of acceptance times unconditional density",
    )
    report.check(
        "survival-matches-arrival",
        abs(survival - expected) <= 3.0 * se,
        f"survival {survival:.6f} vs expected {expected:.6f} (3 SE = {3 * se:.2e})",
    )
    shift = qn.pointer_shift(sc, j, pointer1.couplings)
    k1 = kr.GaussianKernel(pointer1.width)
    conditional = DensityGrid(dens.x, filt.omega_at(j, dens.x) * dens.values / expected)
    hist = smp.histogram(kept.x1)
    ks = smp.distribution_distance(hist, conditional, "KS")
    ks_tol = _mc_tolerance(0.02, max(1, int(round(scenario.trials * expected))), 6200)
    report.scalar("ks-distance", ks, "KS distance of surviving readings vs conditional density", ks_tol)
    report.check("survivors-match-conditional", ks <= ks_tol, f"KS {ks:.4f} <= {ks_tol:.4f}")
    report.scalar(
        "conditional-shift",
        shift,
        f"conditional reading shift of final state {j}",
    )
    wide = DensityGrid(dens.x, k1.density(dens.x - shift))
    _emit(
        report,
        out,
        "reshaping_conditional_density.csv",
        *_density_columns([conditional, wide], ["conditional", "wide_limit_form"]),
    )
    hist.write_csv(out / "reshaping_survivors_hist.csv")
    report.outputs.append("reshaping_survivors_hist.csv")


def _exp_causality_quantum(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "causality-quantum")
    pointer1 = _need(scenario, "pointer1", "causality-quantum")
    pointer2 = _need(scenario, "pointer2", "causality-quantum")
    marginal = qn.causality_marginal(sc, pointer1, pointer2, scenario.grid_points)
    reference = qn.density_one_pointer(sc, pointer1, scenario.grid_points)
    gap = marginal.sup_distance(reference)
    report.scalar(
        "causality-sup-gap",
        gap,
        "sup distance between the integrated-out joint and the single-pointer density",
        1e-8,
    )
    report.check("causality-identity", gap <= 1e-8, f"sup gap {gap:.3e}")
    lhs, rhs = qn.causal_sum_identity(sc, pointer1, scenario.grid_points)
    arrivals = qn.arrival_probabilities(sc)
    shift_extent = max(
        (abs(qn.pointer_shift(sc, j, pointer1.couplings))
         for j in range(sc.dim) if arrivals[j] >= qn.PS_EPS),
        default=0.0,
    )
    wide = pointer1.width >= 100.0 * (shift_extent + float(np.max(np.abs(pointer1.couplings))))
    peak = float(rhs.values.max())
    sum_gap = lhs.sup_distance(rhs)
    report.scalar(
        "causal-sum-gap",
        sum_gap,
        "sup distance between the conditional-sum density and the single displaced kernel",
    )
    if wide:
        report.check(
            "causal-sum-identity-wide-regime",
            sum_gap <= 1e-3 * peak,
            f"sup gap {sum_gap:.3e} vs 1e-3 * peak {1e-3 * peak:.3e}",
        )
    _emit(
        report,
        out,
        "quantum_causality.csv",
        ["x", "marginal", "single_pointer", "difference"],
        zip(
            marginal.x.tolist(),
            marginal.values.tolist(),
            reference.values.tolist(),
            (marginal.values - reference.values).tolist(),
        ),
    )
    _emit(
        report,
        out,
        "quantum_causal_sum.csv",
        *_density_columns([lhs, rhs], ["conditional_sum", "single_kernel"]),
    )


def _exp_observable_checks(scenario: Scenario, out: Path, report: RunReport) -> None:
    sc = _need(scenario, "quantum_scenario", "observable-checks")
    pointer1 = _need(scenario, "pointer1", "observable-checks")
    pointer2 = _need(scenario, "pointer2", "observable-checks")
    obs = qn.observable_probability_checks(sc, pointer1, pointer2, scenario.grid_points)
    floor = obs.min_observable()
    report.scalar(
        "min-observable",
        floor,
        "most negative value among arrival, window and conditional-density observables",
        1e-12,
    )
    report.check(
        "observables-non-negative",
        floor >= -1e-12,
        f"minimum observable value {floor:.3e}",
    )
    span = float(np.ptp(pointer1.couplings))
    window_tol = max(1e-6, (span / pointer1.width) ** 2)
    report.scalar(
        "window-probability-gap",
        obs.window_max_error,
        "largest gap between window probabilities and table row sums",
        window_tol,
    )
    report.check(
        "window-probabilities-match-row-sums",
        obs.window_max_error <= window_tol,
        f"max gap {obs.window_max_error:.3e} <= {window_tol:.3e}",
    )
    rows = []
    for j in range(sc.dim):
        rows.append(
            (j, float(obs.arrivals[j]), float(obs.window_probs[j]),
             float(obs.window_expected[j]), float(obs.conditional_minima[j]),
             float(obs.conditional_quadrature_minima[j]))
        )
    _emit(
        report,
        out,
        "observable_checks.csv",
        ["final_state", "arrival", "window_probability", "row_sum",
         "conditional_min", "conditional_quadrature_min"],
        rows,
    )


def _exp_montecarlo_validate(scenario: Scenario, out: Path, report: RunReport) -> None:
    ran_any = False
    trials = scenario.trials
    ks_tol = _mc_tolerance(0.005, trials)
    if scenario.classical_net is not None:
        ran_any = True
        net, pointer = scenario.classical_net, scenario.classical_pointer
        run = cl.simulate_trials(net, pointer, trials, scenario.seed)
        analytic = cl.density_no_postselection(net, pointer, scenario.grid_points)
        hist = smp.histogram(run.x1)
        ks = smp.distribution_distance(hist, analytic, "KS")
        report.scalar("classical-ks-distance", ks, "KS distance of simulated first readings vs analytic density", ks_tol)
        report.check("classical-readings-match-density", ks <= ks_tol, f"KS {ks:.5f} <= {ks_tol:.5f}")
        frac_gap_se = 0.0
        for i in range(net.size):
            frac = float(np.mean(run.node == i))
            se = math.sqrt(max(net.entry[i] * (1 - net.entry[i]), 1e-12) / trials)
            frac_gap_se = max(frac_gap_se, abs(frac - net.entry[i]) / se)
            report.scalar(
                f"classical-node-fraction-{i}",
                frac,
                f"fraction of trials passing node {i}",
                4.0 * se,
            )
        report.check(
            "classical-node-fractions-match",
            frac_gap_se <= 4.0,
            f"worst deviation {frac_gap_se:.2f} standard errors",
        )
        hist.write_csv(out / "montecarlo_classical_hist.csv")
        report.outputs.append("montecarlo_classical_hist.csv")
    if scenario.quantum_scenario is not None:
        ran_any = True
        sc = scenario.quantum_scenario
        samples = smp.sample_quantum_readings(
            sc, scenario.pointer1, scenario.pointer2, trials, scenario.seed
        )
        analytic = qn.causality_marginal(
            sc, scenario.pointer1, scenario.pointer2, scenario.grid_points
        )
        hist = smp.histogram(samples.x1)
        ks = smp.distribution_distance(hist, analytic, "KS")
        report.scalar("quantum-ks-distance", ks, "KS distance of sampled first readings vs analytic marginal", ks_tol)
        report.check("quantum-readings-match-density", ks <= ks_tol, f"KS {ks:.5f} <= {ks_tol:.5f}")
        weights = smp.final_state_weights(sc, scenario.pointer1)
        worst = 0.0
        for j in range(sc.dim):
            frac = float(np.mean(samples.final_index == j))
            se = math.sqrt(max(weights[j] * (1 - weights[j]), 1e-12) / trials)
            worst = max(worst, abs(frac - weights[j]) / se)
            report.scalar(
                f"quantum-final-fraction-{j}",
                frac,
                f"fraction of trials post-selected in final state {j}",
                4.0 * se,
            )
        report.check(
            "quantum-final-fractions-match",
            worst <= 4.0,
            f"worst deviation {worst:.2f} standard errors",
        )
        hist.write_csv(out / "montecarlo_quantum_hist.csv")
        report.outputs.append("montecarlo_quantum_hist.csv")
        samples_head = smp.ReadingSamples(
            samples.trial[:1000], samples.final_index[:1000],
            samples.x1[:1000], samples.x2[:1000],
        )
        samples_head.write_csv(out / "montecarlo_quantum_samples_head.csv")
        report.outputs.append("montecarlo_quantum_samples_head.csv")
    if not ran_any:
        raise ValidationError(
            "experiment 'montecarlo-validate' needs a classical, quantum or spin section"
        )


EXPERIMENTS = {
    "fig1-collapse": _exp_fig1_collapse,
    "classical-two-point": _exp_classical_two_point,
    "classical-postselect": _exp_classical_postselect,
    "classical-recover-paths": _exp_classical_recover_paths,
    "classical-causality": _exp_classical_causality,
    "quantum-two-point": _exp_quantum_two_point,
    "quantum-postselect": _exp_quantum_postselect,
    "quasiprob-table": _exp_quasiprob_table,
    "spin-region-map": _exp_spin_region_map,
    "spin-weak-value": _exp_spin_weak_value,
    "nonlocality-sweep": _exp_nonlocality_sweep,
    "reshaping-demo": _exp_reshaping_demo,
    "causality-quantum": _exp_causality_quantum,
    "observable-checks": _exp_observable_checks,
    "montecarlo-validate": _exp_montecarlo_validate,
}


# --------------------------------------------------------------------------
# entry points
# --------------------------------------------------------------------------


def _override(scenario: Scenario, seed=None, trials=None, grid_points=None) -> Scenario:
    from dataclasses import replace

    updates = {}
    if seed is not None:
        updates["seed"] = int(seed)
    if trials is not None:
        if trials < 1:
            raise ValidationError(f"trials: must be >= 1, got {trials}")
        updates["trials"] = int(trials)
    if grid_points is not None:
        if grid_points < 16:
            raise ValidationError(f"grid_points: must be >= 16, got {grid_points}")
        updates["grid_points"] = int(grid_points)
    return replace(scenario, **updates) if updates else scenario


def run(
    scenario_path,
    experiment: str,
    output_dir,
    seed: int | None = None,
    trials: int | None = None,
    grid_points: int | None = None,
) -> RunReport:
    """Execute one named experiment and write its outputs.

    Returns the :class:`RunReport`; raises :class:`ParseError`,
    :class:`ValidationError` or :class:`ExecutionError` for input
    problems.  Check failures do not raise -- they are recorded in the
    report (and drive the process exit code).
    """
    scenario = _override(load_scenario(scenario_path), seed, trials, grid_points)
    if experiment not in EXPERIMENTS:
        known = ", ".join(sorted(EXPERIMENTS))
        raise ValidationError(f"unknown experiment {experiment!r}; expected one of: {known}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(
        scenario_name=scenario.path.name,
        scenario_digest=scenario.digest,
        kind=scenario.kind,
        experiment=experiment,
        seed=scenario.seed,
    )
    try:
        EXPERIMENTS[experiment](scenario, out, report)
    except (ParseError, ValidationError):
        raise
    except PointerLabError as exc:
        raise ExecutionError(f"{type(exc).__name__}: {exc}") from exc
    report.write(out)
    report.outputs.append("report.json")
    return report


def validate(scenario_path) -> RunReport:
    """Parse and validate a scenario file without executing anything."""
    scenario = load_scenario(scenario_path)
    report = RunReport(
        scenario_name=scenario.path.name,
        scenario_digest=scenario.digest,
        kind=scenario.kind,
        experiment="validate",
        seed=scenario.seed,
    )
    report.check("scenario-valid", True, "all schema and invariant checks passed")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pointerlab",
        description="Run pointer-measurement experiments from a scenario file",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a named experiment")
    run_p.add_argument("scenario", help="scenario YAML file")
    run_p.add_argument("--experiment", required=True, choices=sorted(EXPERIMENTS))
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--trials", type=int, default=None)
    run_p.add_argument("--grid", type=int, default=None, help="grid points per axis")
    val_p = sub.add_parser("validate", help="validate a scenario file")
    val_p.add_argument("scenario", help="scenario YAML file")
    args = parser.parse_args(argv)

    try:
        if args.command == "validate":
            report = validate(args.scenario)
            print(json.dumps(report.to_dict(), indent=2))
            return 0
        report = run(
            args.scenario,
            args.experiment,
            args.out,
            seed=args.seed,
            trials=args.trials,
            grid_points=args.grid,
        )
    except (ParseError, ValidationError, ExecutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for check in report.checks:
        mark = "PASS" if check["passed"] else "FAIL"
        print(f"[{mark}] {check['name']}: {check['detail']}")
    print(f"report: {Path(args.out) / 'report.json'}")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
