"""Monte-Carlo sweep engine: scenario configs, trial scheduling, CSV output.

Per-trial random streams are derived from (master_seed, sweep index, trial
index), so results are independent of worker count and execution order; the
reduction over trials always runs in trial order.
"""

import concurrent.futures
import csv
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .ao import AoConfig, evaluate
from .baselines import BaselineKind, solve_scheme
from .channel import (ChannelRealization, CsiErrorModel, FadingParams, Geometry,
                      generate_realization, perturb_realization)
from .errors import ConfigError, SolverFailure
from .phase_opt import PenaltyConfig
from .rates import LinkBudget, SicModel
from .units import db_to_lin, dbm_to_watts

SWEEP_PARAMS = ("snr_db", "elements", "ap_x_m", "csi_eta", "sic_gamma_dbm")

CSV_HEADER = ["scheme", "sweep_param", "sweep_value", "mean_sum_rate_bps_hz",
              "stderr", "feasible", "infeasible", "mean_iters", "mean_solve_ms"]


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: Geometry = field(default_factory=Geometry)
    fading: FadingParams = field(default_factory=FadingParams)
    budget: LinkBudget = field(default_factory=lambda: LinkBudget(
        tx_power=dbm_to_watts(10.0), noise_power=dbm_to_watts(-110.0),
        qos_threshold=float(db_to_lin(10.0)), spreading_gain=10))
    ao: AoConfig = field(default_factory=AoConfig)
    schemes: tuple[BaselineKind, ...] = (
        BaselineKind.FULL_ALGORITHM, BaselineKind.RANDOM_PHASE,
        BaselineKind.OMA_ALIGNED, BaselineKind.OMA_RANDOM_PHASE)
    trials: int = 200
    master_seed: int = 1
    workers: int = 1
    sweep_param: str = "snr_db"
    sweep_values: tuple[float, ...] = (65.0, 70.0, 75.0, 80.0, 85.0)
    csi_eta: float = 0.0
    csi_links: str = "all"
    sic_beta: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep param {self.sweep_param!r}")
        if not self.sweep_values:
            raise ValueError("sweep_values must be non-empty")
        if list(self.sweep_values) != sorted(self.sweep_values):
            raise ValueError("sweep_values must be sorted ascending")
        if self.sweep_param == "sic_gamma_dbm" and self.sic_beta is None:
            raise ValueError("sic_gamma_dbm sweep requires sic_beta")


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    sweep_param: str
    sweep_value: float
    mean_sum_rate_bps_hz: float
    stderr: float
    feasible: int
    infeasible: int
    mean_iters: float
    mean_solve_ms: float


@dataclass
class SweepResult:
    rows: list[SweepRow]

    def row(self, scheme: str, sweep_value: float) -> SweepRow:
        for r in self.rows:
            if r.scheme == scheme and r.sweep_value == sweep_value:
                return r
        raise KeyError(f"no row for scheme={scheme!r} at {sweep_value!r}")

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in self.rows:
                writer.writerow([r.scheme, r.sweep_param, repr(r.sweep_value),
                                 repr(r.mean_sum_rate_bps_hz), repr(r.stderr),
                                 r.feasible, r.infeasible, repr(r.mean_iters),
                                 repr(r.mean_solve_ms)])

    @classmethod
    def from_csv(cls, path) -> "SweepResult":
        rows = []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise ValueError(f"unexpected CSV header in {path}")
            for rec in reader:
                rows.append(SweepRow(
                    scheme=rec["scheme"], sweep_param=rec["sweep_param"],
                    sweep_value=float(rec["sweep_value"]),
                    mean_sum_rate_bps_hz=float(rec["mean_sum_rate_bps_hz"]),
                    stderr=float(rec["stderr"]),
                    feasible=int(rec["feasible"]),
                    infeasible=int(rec["infeasible"]),
                    mean_iters=float(rec["mean_iters"]),
                    mean_solve_ms=float(rec["mean_solve_ms"])))
        return cls(rows=rows)


def _apply_sweep(config: ScenarioConfig, value: float):
    """Materialize (geometry, budget, csi model, sic model) for one point."""
    geometry, budget = config.geometry, config.budget
    csi = CsiErrorModel(config.csi_eta, config.csi_links) if config.csi_eta > 0 else None
    sic = SicModel(beta=config.sic_beta) if config.sic_beta is not None else None
    p = config.sweep_param
    if p == "snr_db":
        budget = replace(budget, tx_power=float(
            budget.noise_power * db_to_lin(value)))
    elif p == "elements":
        geometry = replace(geometry, num_elements=int(value))
    elif p == "ap_x_m":
        geometry = replace(geometry, ap_position=(-float(value), 0.0))
    elif p == "csi_eta":
        csi = CsiErrorModel(float(value), config.csi_links) if value > 0 else None
    elif p == "sic_gamma_dbm":
        sic = SicModel(beta=config.sic_beta,
                       gamma_sic=float(dbm_to_watts(value)))
    return geometry, budget, csi, sic


def _run_trial(config: ScenarioConfig, sweep_idx: int, value: float,
               scheme: BaselineKind, scheme_idx: int, trial: int):
    """One (sweep point, scheme, trial) cell. Returns
    (sum_rate | None, iterations, solve_ms)."""
    geometry, budget, csi, sic = _apply_sweep(config, value)
    rng_ch = np.random.default_rng([config.master_seed, sweep_idx, trial])
    truth = generate_realization(geometry, config.fading, rng_ch)
    observed = truth
    if csi is not None:
        rng_err = np.random.default_rng([config.master_seed, sweep_idx, trial, 101])
        observed = perturb_realization(truth, csi, rng_err)

    ao_config = replace(config.ao, seed=(config.master_seed, sweep_idx,
                                         trial, 1000 + scheme_idx))
    t0 = time.perf_counter()
    try:
        solution = solve_scheme(scheme, observed, budget, ao_config)
    except SolverFailure:
        return None, 0, (time.perf_counter() - t0) * 1e3
    ms = (time.perf_counter() - t0) * 1e3
    if solution.status != "feasible":
        return None, solution.iterations, ms
    report = evaluate(solution, truth, budget, sic)
    return report.sum_rate, solution.iterations, ms


def _aggregate(config: ScenarioConfig, value: float, scheme: BaselineKind,
               cells) -> SweepRow:
    rates = [c[0] for c in cells if c[0] is not None]
    iters = [c[1] for c in cells if c[0] is not None]
    times = [c[2] for c in cells]
    n = len(rates)
    mean = float(np.mean(rates)) if n else math.nan
    stderr = float(np.std(rates, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return SweepRow(
        scheme=scheme.value, sweep_param=config.sweep_param, sweep_value=value,
        mean_sum_rate_bps_hz=mean, stderr=stderr, feasible=n,
        infeasible=config.trials - n,
        mean_iters=float(np.mean(iters)) if n else 0.0,
        mean_solve_ms=float(np.mean(times)))


def run_sweep(config: ScenarioConfig) -> SweepResult:
    """Run every (sweep value, scheme) cell over ``config.trials`` trials."""
    tasks = []
    for si, value in enumerate(config.sweep_values):
        for ki, scheme in enumerate(config.schemes):
            for trial in range(config.trials):
                tasks.append((config, si, value, scheme, ki, trial))

    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(config.workers) as pool:
            cells = list(pool.map(_run_trial_star, tasks, chunksize=4))
    else:
        cells = [_run_trial(*t) for t in tasks]

    rows = []
    i = 0
    for si, value in enumerate(config.sweep_values):
        for ki, scheme in enumerate(config.schemes):
            rows.append(_aggregate(config, value, scheme,
                                   cells[i:i + config.trials]))
            i += config.trials
    return SweepResult(rows=rows)


def _run_trial_star(args):
    return _run_trial(*args)


def summarize_gains(result: SweepResult, reference: BaselineKind | str,
                    at: float, full: BaselineKind | str = BaselineKind.FULL_ALGORITHM
                    ) -> float:
    """Percent sum-rate gain of the full algorithm over ``reference`` at one
    sweep value."""
    ref = reference.value if isinstance(reference, BaselineKind) else reference
    ful = full.value if isinstance(full, BaselineKind) else full
    mean_full = result.row(ful, at).mean_sum_rate_bps_hz
    mean_ref = result.row(ref, at).mean_sum_rate_bps_hz
    return 100.0 * (mean_full - mean_ref) / mean_ref


# ------------------------------------------------------------------ parsing

def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from the JSON schema; collects every invalid
    field into one ConfigError with dotted field paths."""
    errors: list[str] = []
    defaults = ScenarioConfig()

    def section(name):
        sub = data.get(name, {})
        if not isinstance(sub, dict):
            errors.append(f"{name}: expected an object")
            return {}
        return sub

    def num(sub, path, key, default, cast=float, positive=False):
        raw = sub.get(key, default)
        where = f"{path}.{key}" if path else key
        try:
            val = cast(raw)
        except (TypeError, ValueError):
            errors.append(f"{where}: not a number")
            return default
        if positive and val <= 0:
            errors.append(f"{where}: must be > 0")
            return default
        return val

    g = section("geometry")
    try:
        geometry = Geometry(
            ap_position=tuple(g.get("ap_position_m", defaults.geometry.ap_position)),
            irs_position=tuple(g.get("irs_position_m", defaults.geometry.irs_position)),
            user_region=tuple(map(tuple, g.get("user_region_m",
                                               defaults.geometry.user_region))),
            num_elements=num(g, "geometry", "num_elements",
                             defaults.geometry.num_elements, int, positive=True))
    except (ValueError, TypeError) as exc:
        errors.append(f"geometry: {exc}")
        geometry = defaults.geometry

    fa = section("fading")
    try:
        fading = FadingParams(
            rician_k=float(db_to_lin(num(fa, "fading", "rician_k_db", 3.0))),
            pathloss_exponent=num(fa, "fading", "pathloss_exponent", 2.1,
                                  positive=True),
            carrier_freq=num(fa, "fading", "carrier_freq_hz", 915e6,
                             positive=True))
    except ValueError as exc:
        errors.append(f"fading: {exc}")
        fading = defaults.fading

    bu = section("budget")
    try:
        budget = LinkBudget(
            tx_power=float(dbm_to_watts(num(bu, "budget", "tx_power_dbm", 10.0))),
            noise_power=float(dbm_to_watts(num(bu, "budget", "noise_power_dbm",
                                               -110.0))),
            qos_threshold=float(db_to_lin(num(bu, "budget", "qos_threshold_db",
                                              10.0))),
            spreading_gain=num(bu, "budget", "spreading_gain", 10, int,
                               positive=True))
    except ValueError as exc:
        errors.append(f"budget: {exc}")
        budget = defaults.budget

    aoc = section("ao")
    pen = aoc.get("penalty", {}) if isinstance(aoc.get("penalty", {}), dict) else {}
    try:
        ao = AoConfig(
            epsilon=num(aoc, "ao", "epsilon", 1e-4, positive=True),
            max_outer_iters=num(aoc, "ao", "max_outer_iters", 30, int,
                                positive=True),
            penalty=PenaltyConfig(
                mu=num(pen, "ao.penalty", "mu", 5e-5, positive=True),
                sca_tol=num(pen, "ao.penalty", "sca_tol", 1e-5, positive=True),
                max_sca_iters=num(pen, "ao.penalty", "max_sca_iters", 50, int,
                                  positive=True),
                rank_tol=num(pen, "ao.penalty", "rank_tol", 1e-4,
                             positive=True)))
    except ValueError as exc:
        errors.append(f"ao: {exc}")
        ao = defaults.ao

    scheme_names = data.get("schemes", [k.value for k in defaults.schemes])
    schemes = []
    valid = {k.value: k for k in BaselineKind}
    for i, name in enumerate(scheme_names):
        if name in valid:
            schemes.append(valid[name])
        else:
            errors.append(f"schemes[{i}]: unknown scheme {name!r}")

    sweep = section("sweep")
    sweep_param = sweep.get("param", defaults.sweep_param)
    sweep_values = sweep.get("values", list(defaults.sweep_values))
    if sweep_param not in SWEEP_PARAMS:
        errors.append(f"sweep.param: must be one of {SWEEP_PARAMS}")
        sweep_param = defaults.sweep_param
    if (not isinstance(sweep_values, list) or not sweep_values
            or not all(isinstance(v, (int, float)) for v in sweep_values)):
        errors.append("sweep.values: expected a non-empty list of numbers")
        sweep_values = list(defaults.sweep_values)
    elif sorted(sweep_values) != list(sweep_values):
        errors.append("sweep.values: must be sorted ascending")

    csi = section("csi")
    eta = num(csi, "csi", "eta", 0.0)
    links = csi.get("links", "all")
    if links not in ("all", "ap_irs"):
        errors.append("csi.links: must be 'all' or 'ap_irs'")
        links = "all"

    beta = sweep.get("beta", data.get("sic_beta"))
    if beta is not None:
        try:
            beta = float(beta)
        except (TypeError, ValueError):
            errors.append("sweep.beta: not a number")
            beta = None
    if sweep_param == "sic_gamma_dbm" and beta is None:
        errors.append("sweep.beta: required for a sic_gamma_dbm sweep")
        beta = 0.1

    trials = num(data, "", "trials", defaults.trials, int, positive=True)
    master_seed = num(data, "", "master_seed", defaults.master_seed, int)
    workers = num(data, "", "workers", defaults.workers, int, positive=True)

    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(
        geometry=geometry, fading=fading, budget=budget, ao=ao,
        schemes=tuple(schemes), trials=trials, master_seed=master_seed,
        workers=workers, sweep_param=sweep_param,
        sweep_values=tuple(float(v) for v in sweep_values),
        csi_eta=eta, csi_links=links, sic_beta=beta)
