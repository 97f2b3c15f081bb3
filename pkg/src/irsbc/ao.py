"""Alternating optimization over power split, NOMA coefficients and phases.

Each outer iteration recomputes the decoding order from the current phases,
applies the two closed-form power updates, then refreshes the phase vector
through the lifted penalty subproblem. A candidate phase vector is kept only
if the refreshed closed-form strong-user rate does not decrease, which makes
the convergence trace monotone despite the rank-one extraction step.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization
from .errors import Infeasible, SolverFailure
from .phase_opt import (PenaltyConfig, build_subproblem, extract_phases,
                        random_unit_modulus, sca_penalty_loop)
from .rates import (DecodingOrder, EffectiveGains, LinkBudget, NomaAllocation,
                    SicModel, alpha_feasible, decoding_order, effective_gains,
                    optimal_alpha, optimal_power_coeff, primary_sinr, rate,
                    secondary_snr, sinr_imperfect_sic)

FULL = "full"
RANDOM_PHASE = "random_phase"
OMA_ALIGNED = "oma_aligned"
OMA_RANDOM_PHASE = "oma_random_phase"


@dataclass(frozen=True)
class AoConfig:
    epsilon: float = 1e-4          # strong-rate convergence tolerance, bits/s/Hz
    max_outer_iters: int = 30
    seed: int | tuple[int, ...] = 0
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be >= 1")


@dataclass
class Solution:
    """Outcome of one solve: allocation, phases, rates and diagnostics."""

    status: str                              # "feasible" | "infeasible"
    scheme: str = FULL
    failed_constraint: str | None = None
    alpha: float | None = None
    a: tuple[float, float] | None = None     # per-user NOMA coefficients
    phases: np.ndarray | None = None         # (M,) or (2, M) for per-slot OMA
    order: DecodingOrder | None = None
    rate_strong: float | None = None
    rate_weak: float | None = None
    secondary_snr: tuple[float, float] | None = None
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    order_flips: int = 0

    @property
    def sum_rate(self) -> float | None:
        if self.rate_strong is None or self.rate_weak is None:
            return None
        return self.rate_strong + self.rate_weak


@dataclass
class RatesReport:
    """Rates of an existing solution re-evaluated on (possibly different)
    channels, optionally under an imperfect-SIC model."""

    rate_strong: float
    rate_weak: float
    secondary_snr: tuple[float, float]
    alpha_used: float
    weak_qos_ok: bool
    secondary_qos_ok: bool
    sic_residual_ok: bool | None = None

    @property
    def sum_rate(self) -> float:
        return self.rate_strong + self.rate_weak


@dataclass
class _Step:
    gains: EffectiveGains
    order: DecodingOrder
    alloc: NomaAllocation
    rate_strong: float


def closed_form_step(channels: ChannelRealization, v: np.ndarray,
                     a_current: tuple[float, float],
                     budget: LinkBudget) -> _Step:
    """Order, power split and NOMA coefficients for fixed phases.

    Raises Infeasible naming the failing constraint. The alpha window is
    checked both with the incoming coefficients (the state the split is
    computed in) and after the coefficient update.
    """
    gains = effective_gains(channels, v)
    order = decoding_order(gains)
    alpha = optimal_alpha(gains, budget)
    if alpha is None:
        raise Infeasible("secondary_qos")
    # orient the incoming pair to the re-derived order (weak user keeps the
    # larger coefficient); a no-op unless the phases flipped the ordering
    lo, hi = min(a_current), max(a_current)
    a_current = (lo, hi) if order.strong == 0 else (hi, lo)
    pre = NomaAllocation(alpha=alpha, a=a_current)
    if not alpha_feasible(alpha, pre, order, gains, budget):
        raise Infeasible("alpha_window")
    a_s = optimal_power_coeff(alpha, gains.G[order.weak], budget)
    if a_s is None:
        raise Infeasible("power_coeff")
    a = (a_s, 1.0 - a_s) if order.strong == 0 else (1.0 - a_s, a_s)
    alloc = NomaAllocation(alpha=alpha, a=a)
    if not alpha_feasible(alpha, alloc, order, gains, budget):
        raise Infeasible("alpha_window")
    r_s = rate(primary_sinr(alloc, order, order.strong, gains, budget))
    return _Step(gains=gains, order=order, alloc=alloc, rate_strong=r_s)


def _initial_coefficients(order: DecodingOrder, budget: LinkBudget,
                          rng: np.random.Generator) -> tuple[float, float]:
    # weak-favoring start; the 1/(1+gamma) scaling keeps a_w - gamma a_s > 0,
    # so the power-split window of the weak-user QoS is open at iteration 0
    a_s = rng.uniform(0.05, 0.5) / (1.0 + budget.qos_threshold)
    return (a_s, 1.0 - a_s) if order.strong == 0 else (1.0 - a_s, a_s)


def _finalize(channels: ChannelRealization, v: np.ndarray, step: _Step,
              budget: LinkBudget, trace: list[float], flips: int,
              scheme: str = FULL) -> Solution:
    alloc, order, gains = step.alloc, step.order, step.gains
    return Solution(
        status="feasible", scheme=scheme, alpha=alloc.alpha, a=alloc.a,
        phases=v, order=order, rate_strong=step.rate_strong,
        rate_weak=rate(primary_sinr(alloc, order, order.weak, gains, budget)),
        secondary_snr=(secondary_snr(alloc, gains.G[0], budget),
                       secondary_snr(alloc, gains.G[1], budget)),
        trace=trace, iterations=len(trace), order_flips=flips)


def _infeasible(exc: Infeasible, scheme: str, trace: list[float]) -> Solution:
    return Solution(status="infeasible", scheme=scheme,
                    failed_constraint=exc.constraint, trace=trace,
                    iterations=len(trace))


def solve(channels: ChannelRealization, budget: LinkBudget,
          config: AoConfig) -> Solution:
    """Run the full alternating loop from a random start."""
    rng = np.random.default_rng(config.seed)
    v = random_unit_modulus(channels.num_elements, rng)
    order0 = decoding_order(effective_gains(channels, v))
    a0 = _initial_coefficients(order0, budget, rng)

    try:
        step = closed_form_step(channels, v, a0, budget)
    except Infeasible as exc:
        # Phase-first recovery. The random start often violates the secondary
        # QoS at operating points where good phases exist; the lifted
        # subproblem carries those QoS constraints, so one solve with a
        # provisional split can restore feasibility.
        gains0 = effective_gains(channels, v)
        order0 = decoding_order(gains0)
        alpha0 = optimal_alpha(gains0, budget)
        # a few provisional splits: the weak-user QoS tightens as alpha
        # shrinks while the secondary QoS tightens as it grows
        ladder = [a for a in (alpha0, 0.9, 0.5) if a is not None]
        step = None
        for alpha_try in ladder:
            try:
                alloc0 = NomaAllocation(alpha=alpha_try, a=a0)
                problem = build_subproblem(channels, alloc0, order0, budget)
                sca = sca_penalty_loop(problem, config=config.penalty)
                v_try = extract_phases(sca.V)
                step = closed_form_step(channels, v_try, a0, budget)
                v = v_try
                break
            except (Infeasible, SolverFailure):
                continue
        if step is None:
            return _infeasible(exc, FULL, [])

    trace = [step.rate_strong]
    flips = 0
    for _ in range(config.max_outer_iters - 1):
        try:
            problem = build_subproblem(channels, step.alloc, step.order, budget)
            sca = sca_penalty_loop(problem, config=config.penalty)
            v_new = extract_phases(sca.V)
            candidate = closed_form_step(channels, v_new, step.alloc.a, budget)
        except (Infeasible, SolverFailure):
            candidate = None  # keep the current iterate; loop then terminates
        if candidate is not None and candidate.rate_strong >= step.rate_strong - 1e-12:
            if candidate.order != step.order:
                flips += 1
            v, step = v_new, candidate
        trace.append(step.rate_strong)
        if abs(trace[-1] - trace[-2]) < config.epsilon:
            break

    return _finalize(channels, v, step, budget, trace, flips)


def evaluate(solution: Solution, channels: ChannelRealization,
             budget: LinkBudget, sic: SicModel | None = None) -> RatesReport:
    """Re-evaluate a solution's rates against the supplied channels.

    ``channels`` are the channels to score against (e.g. the true channels
    when the solve used a CSI estimate). The committed decoding order and
    allocation are kept. With a capped SIC model, the power split is backed
    off just enough to meet the residual cap.
    """
    if solution.status != "feasible":
        raise ValueError("cannot evaluate an infeasible solution")
    if solution.scheme in (OMA_ALIGNED, OMA_RANDOM_PHASE):
        return _evaluate_oma(solution, channels, budget)

    gains = effective_gains(channels, solution.phases)
    order = solution.order
    alpha = solution.alpha
    sic_ok = None
    if sic is not None and sic.gamma_sic is not None:
        residual = (sic.beta * solution.a[order.weak] * alpha
                    * budget.tx_power * gains.G[order.strong])
        sic_ok = residual <= sic.gamma_sic
        if not sic_ok and residual > 0:
            alpha = alpha * sic.gamma_sic / residual
    alloc = NomaAllocation(alpha=alpha, a=solution.a)

    if sic is not None:
        sinr_s = sinr_imperfect_sic(alloc, order, gains, budget, sic)
    else:
        sinr_s = primary_sinr(alloc, order, order.strong, gains, budget)
    sinr_w = primary_sinr(alloc, order, order.weak, gains, budget)
    snr_c = (secondary_snr(alloc, gains.G[0], budget),
             secondary_snr(alloc, gains.G[1], budget))
    gamma = budget.qos_threshold
    slack = 1.0 - 1e-6
    return RatesReport(
        rate_strong=rate(sinr_s), rate_weak=rate(sinr_w), secondary_snr=snr_c,
        alpha_used=alpha,
        weak_qos_ok=sinr_w >= gamma * slack,
        secondary_qos_ok=min(snr_c) >= gamma * slack,
        sic_residual_ok=sic_ok)


def _evaluate_oma(solution: Solution, channels: ChannelRealization,
                  budget: LinkBudget) -> RatesReport:
    """Half-frame TDMA rates; phases may be per-slot (2, M) or shared (M,)."""
    phases = np.atleast_2d(solution.phases)
    slot_phases = [phases[min(k, phases.shape[0] - 1)] for k in (0, 1)]
    G = [effective_gains(channels, slot_phases[k]).G[k] for k in (0, 1)]
    alpha = solution.alpha
    p = alpha * budget.tx_power
    r = [0.5 * rate(p * G[k] / budget.noise_power) for k in (0, 1)]
    order = solution.order
    alloc = NomaAllocation(alpha=alpha, a=(0.5, 0.5))
    snr_c = tuple(secondary_snr(alloc, G[k], budget) for k in (0, 1))
    gamma = budget.qos_threshold
    return RatesReport(
        rate_strong=r[order.strong], rate_weak=r[order.weak],
        secondary_snr=snr_c, alpha_used=alpha,
        weak_qos_ok=True,  # no weak-user NOMA QoS in OMA
        secondary_qos_ok=min(snr_c) >= gamma * (1.0 - 1e-6),
        sic_residual_ok=None)
