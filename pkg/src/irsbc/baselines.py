"""Benchmark schemes: random phases, OMA (TDMA), and OMA with random phases."""

import enum

import numpy as np

from .ao import (FULL, OMA_ALIGNED, OMA_RANDOM_PHASE, RANDOM_PHASE, AoConfig,
                 Solution, _infeasible, _initial_coefficients, closed_form_step,
                 _finalize, solve as solve_full)
from .channel import ChannelRealization
from .errors import Infeasible
from .phase_opt import random_unit_modulus
from .rates import (DecodingOrder, LinkBudget, NomaAllocation, decoding_order,
                    effective_gains, rate, secondary_snr)


class BaselineKind(enum.Enum):
    RANDOM_PHASE = RANDOM_PHASE        # benchmark 1: NOMA, frozen random phases
    OMA_ALIGNED = OMA_ALIGNED          # benchmark 2: TDMA, per-slot aligned phases
    OMA_RANDOM_PHASE = OMA_RANDOM_PHASE  # benchmark 3: TDMA, random phases
    FULL_ALGORITHM = FULL


def random_phases(m: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-modulus vector with i.i.d. uniform phases."""
    return random_unit_modulus(m, rng)


def aligned_phases(h: np.ndarray, f_k: np.ndarray) -> np.ndarray:
    """Phases that make the cascaded sum coherent: theta_m = -arg(h_m f_km).

    Entries with a zero product get phase 0.
    """
    if len(h) != len(f_k):
        raise ValueError("h and f_k must have equal length")
    prod = h * f_k
    v = np.where(np.abs(prod) > 0, np.exp(-1j * np.angle(prod)), 1.0 + 0j)
    return v


def solve_benchmark1(channels: ChannelRealization, budget: LinkBudget,
                     config: AoConfig) -> Solution:
    """NOMA with phases frozen at one random draw; only the closed-form
    power updates alternate."""
    rng = np.random.default_rng(config.seed)
    v = random_phases(channels.num_elements, rng)
    order0 = decoding_order(effective_gains(channels, v))
    a0 = _initial_coefficients(order0, budget, rng)

    try:
        step = closed_form_step(channels, v, a0, budget)
    except Infeasible as exc:
        return _infeasible(exc, RANDOM_PHASE, [])

    trace = [step.rate_strong]
    for _ in range(config.max_outer_iters - 1):
        try:
            step = closed_form_step(channels, v, step.alloc.a, budget)
        except Infeasible as exc:
            return _infeasible(exc, RANDOM_PHASE, trace)
        trace.append(step.rate_strong)
        if abs(trace[-1] - trace[-2]) < config.epsilon:
            break
    return _finalize(channels, v, step, budget, trace, 0, scheme=RANDOM_PHASE)


def solve_oma(channels: ChannelRealization, budget: LinkBudget,
              config: AoConfig, phases: BaselineKind,
              enforce_secondary_qos: bool = True) -> Solution:
    """TDMA with equal slot time: R_k = (1/2) log2(1 + alpha P_T G_k / sigma^2).

    For OMA_ALIGNED the surface is re-aligned to the served user in its own
    slot; for OMA_RANDOM_PHASE one random draw is shared by both slots. The
    power split follows the secondary QoS in each slot (for the served user)
    unless ``enforce_secondary_qos`` is off, in which case alpha = 1.
    """
    if phases not in (BaselineKind.OMA_ALIGNED, BaselineKind.OMA_RANDOM_PHASE):
        raise ValueError("phases must be OMA_ALIGNED or OMA_RANDOM_PHASE")
    m = channels.num_elements
    if phases is BaselineKind.OMA_ALIGNED:
        slot_v = np.stack([aligned_phases(channels.h, channels.f[k])
                           for k in (0, 1)])
        scheme = OMA_ALIGNED
    else:
        rng = np.random.default_rng(config.seed)
        v = random_phases(m, rng)
        slot_v = np.stack([v, v])
        scheme = OMA_RANDOM_PHASE

    G = [effective_gains(channels, slot_v[k]).G[k] for k in (0, 1)]
    gamma, sigma2 = budget.qos_threshold, budget.noise_power
    if enforce_secondary_qos and min(G) > 0:
        alpha = min(1.0 - sigma2 * gamma / (budget.spreading_gain
                                            * budget.tx_power * G[k])
                    for k in (0, 1))
    elif enforce_secondary_qos:
        alpha = 0.0
    else:
        alpha = 1.0
    if alpha <= 0:
        return _infeasible(Infeasible("secondary_qos"), scheme, [])

    r = [0.5 * rate(alpha * budget.tx_power * G[k] / sigma2) for k in (0, 1)]
    strong = 0 if G[0] >= G[1] else 1
    order = DecodingOrder(strong=strong, weak=1 - strong)
    alloc = NomaAllocation(alpha=alpha, a=(0.5, 0.5))
    return Solution(
        status="feasible", scheme=scheme, alpha=alpha, a=None,
        phases=slot_v if phases is BaselineKind.OMA_ALIGNED else slot_v[0],
        order=order, rate_strong=r[strong], rate_weak=r[1 - strong],
        secondary_snr=tuple(secondary_snr(alloc, G[k], budget) for k in (0, 1)),
        trace=[r[strong]], iterations=1)


def solve_scheme(kind: BaselineKind, channels: ChannelRealization,
                 budget: LinkBudget, config: AoConfig) -> Solution:
    """Dispatch one scheme."""
    if kind is BaselineKind.FULL_ALGORITHM:
        return solve_full(channels, budget, config)
    if kind is BaselineKind.RANDOM_PHASE:
        return solve_benchmark1(channels, budget, config)
    return solve_oma(channels, budget, config, kind)
