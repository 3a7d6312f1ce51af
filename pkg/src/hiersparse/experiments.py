"""Reproducible experiment runners: delay estimation and NMSE benchmarks.

Trials are seeded per index (trial i uses master_seed + i), channel
parameters come from substream 0 of that seed and noise from substream 1,
so every CSV row is reproducible bit-for-bit from the config file and the
master seed, and trials can run in any order.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from . import dictionary as dct
from . import opcount, recovery, signal_model
from .errors import BudgetExceeded, ConfigError, LengthMismatch, ZeroTruth
from .hierarchical_search import HSearchConfig, hsearch_1d
from .opcount import OpCounter, SelectionMethod
from .signal_model import ObservationGrid, PathSet, TargetDomain

CSV_HEADER = (
    "method",
    "scenario",
    "n",
    "S_or_A",
    "sel_mults",
    "total_mults",
    "metric",
    "trials",
    "seed",
)

DEFAULT_DELTA_F = 1.44e6  # pilot spacing in Hz; tau_max = 1/delta_f
DEFAULT_BUDGET = 10**10


class Scenario(enum.Enum):
    DELAY_1D = "delay1d"
    NMSE_1D = "nmse1d"
    NMSE_3D = "nmse3d"


_SCENARIO_METHODS = {
    Scenario.DELAY_1D: ("classical", "hierarchical"),
    Scenario.NMSE_1D: ("omp", "homp"),
    Scenario.NMSE_3D: ("omp", "momp", "mhomp"),
}

_HIER_METHODS = ("hierarchical", "homp", "mhomp")

_DEFAULT_DIMS = {
    Scenario.DELAY_1D: [256],
    Scenario.NMSE_1D: [256],
    Scenario.NMSE_3D: [64, 16, 8],
}

_DEFAULT_PATHS = {Scenario.DELAY_1D: 1, Scenario.NMSE_1D: 3, Scenario.NMSE_3D: 5}


@dataclass(frozen=True)
class SweepPoint:
    """One method/resolution point of an experiment sweep."""

    method: str
    sizes: tuple[int, ...] | None = None  # dictionary sizes A_d
    n: int | None = None  # branching factor
    steps: tuple[int, ...] | None = None  # hierarchical steps S_d

    @property
    def hierarchical(self) -> bool:
        return self.method in _HIER_METHODS

    @property
    def s_or_a(self) -> str:
        vals = self.steps if self.hierarchical else self.sizes
        return "x".join(str(v) for v in vals)

    def resolutions(self) -> tuple[int, ...]:
        """Effective dictionary sizes: A_d, or n**S_d for hierarchical points."""
        if self.hierarchical:
            return tuple(self.n**s for s in self.steps)
        return self.sizes


@dataclass
class ExperimentConfig:
    scenario: Scenario
    dims: list[int]
    sweep: list[SweepPoint]
    paths: int
    trials: int
    snr_db: float = 10.0
    varying_snr: bool = False
    on_grid: bool = False
    delta_f: float = DEFAULT_DELTA_F
    space_spacing: float = 0.5
    master_seed: int = 0
    budget: int = DEFAULT_BUDGET

    def grids(self) -> list[ObservationGrid]:
        """Dimension 0 is the pilot-frequency axis; the rest are ULAs."""
        grids = [ObservationGrid.frequency(self.dims[0], self.delta_f)]
        grids += [ObservationGrid.space(n, self.space_spacing) for n in self.dims[1:]]
        return grids

    def domains(self) -> list[TargetDomain]:
        return [TargetDomain.for_grid(g) for g in self.grids()]


def _as_int_tuple(value, what: str) -> tuple[int, ...]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    try:
        out = tuple(int(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be an integer or list of integers") from None
    if not out or any(v != float(w) for v, w in zip(out, value)) or any(v < 1 for v in out):
        raise ConfigError(f"{what} must be positive integers")
    return out


def _parse_sweep_point(raw: dict, scenario: Scenario, ndims: int) -> SweepPoint:
    method = raw.get("method")
    if method not in _SCENARIO_METHODS[scenario]:
        raise ConfigError(
            f"method {method!r} not valid for scenario {scenario.value}; "
            f"expected one of {_SCENARIO_METHODS[scenario]}"
        )
    multi = method in ("momp", "mhomp", "omp") and scenario is Scenario.NMSE_3D
    want = ndims if multi else 1
    if method in _HIER_METHODS:
        if "S" not in raw:
            raise ConfigError(f"hierarchical point needs 'S': {raw}")
        steps = _as_int_tuple(raw["S"], "S")
        n = int(raw.get("n", 2))
        if n < 2:
            raise ConfigError("branching factor n must be >= 2")
        if len(steps) != want:
            raise ConfigError(f"point {raw} needs {want} step counts")
        return SweepPoint(method=method, n=n, steps=steps)
    if "A" not in raw:
        raise ConfigError(f"classical point needs 'A': {raw}")
    sizes = _as_int_tuple(raw["A"], "A")
    if len(sizes) != want:
        raise ConfigError(f"point {raw} needs {want} dictionary sizes")
    return SweepPoint(method=method, sizes=sizes)


def _default_sweep(scenario: Scenario) -> list[dict]:
    if scenario is Scenario.DELAY_1D:
        return [{"method": "classical", "A": 2**s} for s in (2, 4, 6, 8, 10)] + [
            {"method": "hierarchical", "n": 2, "S": s} for s in (2, 4, 6, 8, 10)
        ]
    if scenario is Scenario.NMSE_1D:
        return [{"method": "omp", "A": 2**s} for s in (4, 6, 8, 10)] + [
            {"method": "homp", "n": 2, "S": s} for s in (4, 6, 8, 10)
        ]
    return [
        {"method": "omp", "A": [8, 4, 2]},
        {"method": "momp", "A": [64, 32, 16]},
        {"method": "momp", "A": [256, 64, 32]},
        {"method": "mhomp", "n": 2, "S": [6, 5, 4]},
        {"method": "mhomp", "n": 2, "S": [8, 6, 5]},
    ]


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a JSON-style mapping into an ExperimentConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    try:
        scenario = Scenario(raw.get("scenario"))
    except ValueError:
        raise ConfigError(
            f"scenario must be one of {[s.value for s in Scenario]}"
        ) from None
    dims = list(_as_int_tuple(raw.get("dims", _DEFAULT_DIMS[scenario]), "dims"))
    want_dims = 1 if scenario is not Scenario.NMSE_3D else 3
    if scenario is Scenario.NMSE_3D and len(dims) < 2:
        raise ConfigError("nmse3d needs at least two dimensions")
    if scenario is not Scenario.NMSE_3D and len(dims) != want_dims:
        raise ConfigError(f"{scenario.value} takes exactly one dimension size")
    paths = int(raw.get("paths", _DEFAULT_PATHS[scenario]))
    trials = int(raw.get("trials", 100))
    if paths < 1 or trials < 1:
        raise ConfigError("paths and trials must be >= 1")
    if scenario is Scenario.DELAY_1D and paths != 1:
        raise ConfigError("delay1d is a single-path scenario")
    snr_raw = raw.get("snr_db", 10.0)
    snr_db = math.inf if snr_raw is None else float(snr_raw)
    sweep_raw = raw.get("sweep") or _default_sweep(scenario)
    sweep = [_parse_sweep_point(p, scenario, len(dims)) for p in sweep_raw]
    try:
        cfg = ExperimentConfig(
            scenario=scenario,
            dims=dims,
            sweep=sweep,
            paths=paths,
            trials=trials,
            snr_db=snr_db,
            varying_snr=bool(raw.get("varying_snr", False)),
            on_grid=bool(raw.get("on_grid", False)),
            delta_f=float(raw.get("delta_f", DEFAULT_DELTA_F)),
            space_spacing=float(raw.get("space_spacing", 0.5)),
            master_seed=int(raw.get("master_seed", 0)),
            budget=int(raw.get("budget", DEFAULT_BUDGET)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if cfg.delta_f <= 0 or cfg.space_spacing <= 0:
        raise ConfigError("grid spacings must be positive")
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    sweep = []
    for p in cfg.sweep:
        entry: dict = {"method": p.method}
        if p.hierarchical:
            entry["n"] = p.n
            entry["S"] = list(p.steps) if len(p.steps) > 1 else p.steps[0]
        else:
            entry["A"] = list(p.sizes) if len(p.sizes) > 1 else p.sizes[0]
        sweep.append(entry)
    return {
        "scenario": cfg.scenario.value,
        "dims": list(cfg.dims),
        "sweep": sweep,
        "paths": cfg.paths,
        "trials": cfg.trials,
        "snr_db": None if math.isinf(cfg.snr_db) else cfg.snr_db,
        "varying_snr": cfg.varying_snr,
        "on_grid": cfg.on_grid,
        "delta_f": cfg.delta_f,
        "space_spacing": cfg.space_spacing,
        "master_seed": cfg.master_seed,
        "budget": cfg.budget,
    }


# ---------------------------------------------------------------------------
# Metrics


def mae(estimates, truths) -> float:
    """Mean absolute error between paired parameter estimates."""
    estimates = np.asarray(estimates, dtype=np.float64)
    truths = np.asarray(truths, dtype=np.float64)
    if estimates.shape != truths.shape or estimates.size == 0:
        raise LengthMismatch("estimates and truths must be equal-length, nonempty")
    return float(np.mean(np.abs(estimates - truths)))


def nmse(estimates, truths) -> float:
    """Mean of per-sample squared error normalized by true energy."""
    if len(estimates) != len(truths) or not truths:
        raise LengthMismatch("estimates and truths must pair up")
    total = 0.0
    for est, ref in zip(estimates, truths):
        est = np.asarray(est, dtype=np.complex128)
        ref = np.asarray(ref, dtype=np.complex128)
        if est.shape != ref.shape:
            raise LengthMismatch("estimate/truth length mismatch")
        energy = float(np.real(np.vdot(ref, ref)))
        if energy == 0.0:
            raise ZeroTruth("a reference channel has zero energy")
        diff = est - ref
        total += float(np.real(np.vdot(diff, diff))) / energy
    return total / len(truths)


# ---------------------------------------------------------------------------
# Trial sampling


def trial_seed(master_seed: int, index: int) -> int:
    return master_seed + index


def sample_trial(cfg: ExperimentConfig, index: int) -> tuple[PathSet, float, int]:
    """Draw one trial's paths and SNR from the trial's parameter substream.

    Gains are standard circularly-symmetric complex Gaussian; delays are
    uniform on [0, 1/delta_f]; angle cosines are uniform on [-1, 1].
    """
    seed = trial_seed(cfg.master_seed, index)
    rng = np.random.default_rng([seed, 0])
    k = cfg.paths
    gains = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / math.sqrt(2.0)
    cols = [rng.uniform(0.0, 1.0 / cfg.delta_f, size=k)]
    for _ in cfg.dims[1:]:
        cols.append(rng.uniform(-1.0, 1.0, size=k))
    params = np.column_stack(cols)
    snr_db = float(rng.uniform(5.0, 15.0)) if cfg.varying_snr else cfg.snr_db
    return PathSet(gains=gains, params=params), snr_db, seed


def snap_to_bins(params: np.ndarray, domains: list[TargetDomain], resolutions) -> np.ndarray:
    """Quantize each parameter column to its domain's bin centers."""
    out = params.copy()
    for d, (dom, a) in enumerate(zip(domains, resolutions)):
        step = dom.width / a
        idx = np.clip(np.floor((out[:, d] - dom.u_min) / step), 0, a - 1)
        out[:, d] = dom.u_min + (idx + 0.5) * step
    return out


def _observe(cfg, grids, paths, snr_db, seed):
    h = signal_model.synth_channel(grids, paths)
    return signal_model.add_noise(h, snr_db, seed)


# ---------------------------------------------------------------------------
# Dataset generation


def gen_dataset(cfg: ExperimentConfig, path) -> int:
    """Write one JSON-lines record per trial; channels are re-synthesized
    from parameters by consumers, so no complex vectors are persisted.
    Returns the number of records written."""
    grid_meta = [{"kind": "frequency", "count": cfg.dims[0], "spacing": cfg.delta_f, "start": 0.0}]
    grid_meta += [
        {"kind": "space", "count": n, "spacing": cfg.space_spacing, "start": 0.0}
        for n in cfg.dims[1:]
    ]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(cfg.trials):
            paths, snr_db, seed = sample_trial(cfg, i)
            record = {
                "seed": seed,
                "grids": grid_meta,
                "paths": {
                    "gains": [[g.real, g.imag] for g in paths.gains],
                    "params": paths.params.tolist(),
                },
                "snr_db": None if math.isinf(snr_db) else snr_db,
            }
            fh.write(json.dumps(record) + "\n")
    return cfg.trials


def load_dataset(path) -> list[tuple[PathSet, float, int]]:
    """Read records written by gen_dataset."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            gains = np.array([complex(re, im) for re, im in rec["paths"]["gains"]])
            params = np.asarray(rec["paths"]["params"], dtype=np.float64)
            snr = math.inf if rec["snr_db"] is None else float(rec["snr_db"])
            out.append((PathSet(gains=gains, params=params), snr, int(rec["seed"])))
    return out


# ---------------------------------------------------------------------------
# Metric rows and CSV emission


@dataclass
class MetricRow:
    method: str
    scenario: str
    n: int | None
    s_or_a: str
    sel_mults: float
    total_mults: float
    metric: float
    trials: int
    seed: int

    def as_record(self) -> tuple:
        return (
            self.method,
            self.scenario,
            "" if self.n is None else str(self.n),
            self.s_or_a,
            _fmt_num(self.sel_mults),
            _fmt_num(self.total_mults),
            _fmt_num(self.metric),
            str(self.trials),
            str(self.seed),
        )


def _fmt_num(x) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def write_csv(rows: list[MetricRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for row in rows:
            fh.write(",".join(row.as_record()) + "\n")


# ---------------------------------------------------------------------------
# Runners


def _budget_check(point: SweepPoint, predicted: int, budget: int) -> None:
    if predicted > budget:
        raise BudgetExceeded(
            f"sweep point {point.method} {point.s_or_a}: predicted "
            f"{predicted:.3e} selection multiplications per invocation exceed "
            f"the budget {budget:.3e}",
            predicted=predicted,
            budget=budget,
        )


def predicted_point_mults(cfg: ExperimentConfig, point: SweepPoint) -> int:
    """Per-invocation selection multiplications of one sweep point."""
    dims = cfg.dims
    if cfg.scenario is not Scenario.NMSE_3D:
        if point.hierarchical:
            return opcount.predicted_selection_mults(
                SelectionMethod.HIER_1D, dims, (point.n, point.steps)
            )
        return opcount.predicted_selection_mults(
            SelectionMethod.CLASSICAL_1D, dims, point.sizes
        )
    if point.method == "omp":
        return opcount.predicted_selection_mults(
            SelectionMethod.CLASSICAL_3D, dims, point.sizes
        )
    if point.method == "momp":
        return opcount.predicted_selection_mults(
            SelectionMethod.MULTIDIM_CLASSICAL, dims, point.sizes
        )
    return opcount.predicted_selection_mults(
        SelectionMethod.MULTIDIM_HIER, dims, (point.n, point.steps)
    )


def predicted_point_correlations(cfg: ExperimentConfig, point: SweepPoint) -> int:
    if cfg.scenario is not Scenario.NMSE_3D:
        method = SelectionMethod.HIER_1D if point.hierarchical else SelectionMethod.CLASSICAL_1D
    elif point.method == "omp":
        method = SelectionMethod.CLASSICAL_3D
    elif point.method == "momp":
        method = SelectionMethod.MULTIDIM_CLASSICAL
    else:
        method = SelectionMethod.MULTIDIM_HIER
    sizes = (point.n, point.steps) if point.hierarchical else point.sizes
    return opcount.predicted_correlations(method, sizes)


def circular_abs_error(estimate: float, truth: float, period: float) -> float:
    """Absolute difference on a circle of the given period.

    Delays are identifiable only modulo 1/delta_f: the atomic signals of
    tau and tau - 1/delta_f are bit-identical, so a wrap-around selection
    near the domain edge is a zero-size physical error and is scored as
    such (for every method alike).
    """
    err = abs(estimate - truth) % period
    return min(err, period - err)


def run_delay_estimation(cfg: ExperimentConfig) -> list[MetricRow]:
    """Single-path delay estimation: circular MAE of the selected delay."""
    if cfg.scenario is not Scenario.DELAY_1D:
        raise ConfigError("run_delay_estimation needs a delay1d config")
    (grid,) = cfg.grids()
    (domain,) = cfg.domains()
    rows = []
    for point in cfg.sweep:
        _budget_check(point, predicted_point_mults(cfg, point), cfg.budget)
        classical = None
        search_cfg = None
        if point.hierarchical:
            search_cfg = HSearchConfig(n=point.n, steps=point.steps[0])
        else:
            classical = dct.build_classical(grid, domain, point.sizes[0])
        errors = []
        sel_sum = 0
        total_sum = 0
        for i in range(cfg.trials):
            paths, snr_db, seed = sample_trial(cfg, i)
            if cfg.on_grid:
                paths = PathSet(
                    gains=paths.gains,
                    params=snap_to_bins(paths.params, [domain], point.resolutions()),
                )
            obs = _observe(cfg, [grid], paths, snr_db, seed)
            counter = OpCounter()
            if point.hierarchical:
                out = hsearch_1d(obs.y, domain, grid, search_cfg, counter)
                estimate = out.u_star
            else:
                corr = classical.atoms.conj().T @ obs.y
                counter.add_selection(grid.count * classical.size, classical.size)
                estimate = float(classical.params[int(np.argmax(np.abs(corr)))])
            errors.append(
                circular_abs_error(estimate, float(paths.params[0, 0]), domain.width)
            )
            sel_sum += counter.selection_mults
            total_sum += counter.total_mults
        rows.append(
            MetricRow(
                method=point.method,
                scenario=cfg.scenario.value,
                n=point.n,
                s_or_a=point.s_or_a,
                sel_mults=sel_sum / cfg.trials,
                total_mults=total_sum / cfg.trials,
                metric=float(np.mean(errors)),
                trials=cfg.trials,
                seed=cfg.master_seed,
            )
        )
    return rows


def _recover_point(cfg, point, grids, domains, observation):
    """Run one sweep point's algorithm on one observation."""
    counter = OpCounter()
    stop = recovery.StoppingRule.fixed_iterations(cfg.paths)
    if cfg.scenario is Scenario.NMSE_1D:
        if point.method == "omp":
            d = dct.build_classical(grids[0], domains[0], point.sizes[0])
            return recovery.omp(observation, d, stop, counter)
        cfg_h = HSearchConfig(n=point.n, steps=point.steps[0])
        return recovery.homp(observation, grids[0], domains[0], cfg_h, stop, counter)
    if point.method == "omp":
        dicts = [
            dct.build_classical(g, dom, a)
            for g, dom, a in zip(grids, domains, point.sizes)
        ]
        atoms = dicts[0].atoms
        params: list[tuple[float, ...]] = [(float(p),) for p in dicts[0].params]
        for d in dicts[1:]:
            atoms = np.kron(atoms, d.atoms)
            params = [pp + (float(q),) for pp in params for q in d.params]
        return recovery.omp_matrix(observation, atoms, params, stop, counter)
    if point.method == "momp":
        dicts = [
            dct.build_classical(g, dom, a)
            for g, dom, a in zip(grids, domains, point.sizes)
        ]
        return recovery.momp(observation, dicts, stop, counter)
    cfgs = [HSearchConfig(n=point.n, steps=s) for s in point.steps]
    return recovery.mhomp(observation, grids, domains, cfgs, stop, counter)


def _run_nmse(cfg: ExperimentConfig) -> list[MetricRow]:
    grids = cfg.grids()
    domains = cfg.domains()
    rows = []
    for point in cfg.sweep:
        _budget_check(point, predicted_point_mults(cfg, point), cfg.budget)
        errors = []
        sel_sum = 0
        total_sum = 0
        for i in range(cfg.trials):
            paths, snr_db, seed = sample_trial(cfg, i)
            if cfg.on_grid:
                paths = PathSet(
                    gains=paths.gains,
                    params=snap_to_bins(paths.params, domains, point.resolutions()),
                )
            obs = _observe(cfg, grids, paths, snr_db, seed)
            result = _recover_point(cfg, point, grids, domains, obs)
            h = obs.true_channel
            diff = result.estimate - h
            errors.append(
                float(np.real(np.vdot(diff, diff)) / np.real(np.vdot(h, h)))
            )
            sel_sum += result.counter.selection_mults
            total_sum += result.counter.total_mults
        rows.append(
            MetricRow(
                method=point.method,
                scenario=cfg.scenario.value,
                n=point.n,
                s_or_a=point.s_or_a,
                sel_mults=sel_sum / cfg.trials,
                total_mults=total_sum / cfg.trials,
                metric=float(np.mean(errors)),
                trials=cfg.trials,
                seed=cfg.master_seed,
            )
        )
    return rows


def run_nmse_1d(cfg: ExperimentConfig) -> list[MetricRow]:
    """OMP vs HOMP channel-estimation NMSE over a resolution sweep."""
    if cfg.scenario is not Scenario.NMSE_1D:
        raise ConfigError("run_nmse_1d needs an nmse1d config")
    return _run_nmse(cfg)


def run_nmse_3d(cfg: ExperimentConfig) -> list[MetricRow]:
    """OMP (budget-guarded) vs MOMP vs MHOMP NMSE on multi-dimensional
    synthetic geometric channels."""
    if cfg.scenario is not Scenario.NMSE_3D:
        raise ConfigError("run_nmse_3d needs an nmse3d config")
    return _run_nmse(cfg)


def run(cfg: ExperimentConfig) -> list[MetricRow]:
    if cfg.scenario is Scenario.DELAY_1D:
        return run_delay_estimation(cfg)
    if cfg.scenario is Scenario.NMSE_1D:
        return run_nmse_1d(cfg)
    return run_nmse_3d(cfg)
