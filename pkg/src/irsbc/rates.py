"""SINR/rate formulas and the closed-form power updates.

Users are indexed 0 and 1. The "strong" user is decoded interference-free
after SIC; the "weak" user is decoded first, under the strong user's
interference. All quantities are linear (no dB anywhere in this module).
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization


@dataclass(frozen=True)
class LinkBudget:
    """Scalar physical parameters shared by all rate formulas."""

    tx_power: float        # P_T, watts
    noise_power: float     # sigma^2, watts
    qos_threshold: float   # gamma_th, linear SINR
    spreading_gain: int    # L, secondary bit period over primary symbol period

    def __post_init__(self):
        if self.tx_power <= 0 or self.noise_power <= 0:
            raise ValueError("tx_power and noise_power must be > 0")
        if self.qos_threshold < 0:
            raise ValueError("qos_threshold must be >= 0")
        if self.spreading_gain < 1:
            raise ValueError("spreading_gain must be >= 1")


@dataclass(frozen=True)
class EffectiveGains:
    """Cascaded channel products g_k = sum_m h_m v_m f_km for both users."""

    g: tuple[complex, complex]

    def __post_init__(self):
        if not all(np.isfinite(gk) for gk in self.g):
            raise ValueError("gains must be finite")

    @property
    def G(self) -> tuple[float, float]:
        """Magnitude-squared gains |g_k|^2."""
        return (abs(self.g[0]) ** 2, abs(self.g[1]) ** 2)


def effective_gains(channels: ChannelRealization, v: np.ndarray) -> EffectiveGains:
    """Cascaded gains through the surface for phase vector ``v`` (|v_m| = 1)."""
    hv = channels.h * v
    return EffectiveGains(g=(complex(hv @ channels.f[0]), complex(hv @ channels.f[1])))


@dataclass(frozen=True)
class DecodingOrder:
    strong: int
    weak: int

    def __post_init__(self):
        if {self.strong, self.weak} != {0, 1}:
            raise ValueError("order must be a permutation of users {0, 1}")


@dataclass(frozen=True)
class NomaAllocation:
    """Power split alpha and per-user NOMA coefficients (a[0] + a[1] = 1)."""

    alpha: float
    a: tuple[float, float]

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not all(0.0 <= ak <= 1.0 for ak in self.a):
            raise ValueError("NOMA coefficients must lie in [0, 1]")
        if abs(self.a[0] + self.a[1] - 1.0) > 1e-12:
            raise ValueError("NOMA coefficients must sum to 1")


@dataclass(frozen=True)
class SicModel:
    """Residual-interference SIC model: fraction ``beta`` of the cancelled
    signal survives; optional absolute cap ``gamma_sic`` (watts) on the
    residual power."""

    beta: float
    gamma_sic: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if self.gamma_sic is not None and self.gamma_sic <= 0:
            raise ValueError("gamma_sic must be > 0 when present")


def decoding_order(gains: EffectiveGains) -> DecodingOrder:
    """Strong user has the larger cascaded gain; ties go to user 0."""
    G = gains.G
    strong = 0 if G[0] >= G[1] else 1
    return DecodingOrder(strong=strong, weak=1 - strong)


def secondary_snr(alloc: NomaAllocation, G_k: float, budget: LinkBudget) -> float:
    """SNR of the backscattered (surface-data) signal at one user."""
    return (budget.spreading_gain * (1.0 - alloc.alpha) * budget.tx_power * G_k
            / budget.noise_power)


def primary_sinr(alloc: NomaAllocation, order: DecodingOrder, user: int,
                 gains: EffectiveGains, budget: LinkBudget) -> float:
    """Post-SIC SINR of one primary user under the given decoding order."""
    G = gains.G
    p = alloc.alpha * budget.tx_power
    if user == order.strong:
        return p * alloc.a[user] * G[user] / budget.noise_power
    interference = p * alloc.a[order.strong] * G[user]
    return p * alloc.a[user] * G[user] / (interference + budget.noise_power)


def rate(sinr: float) -> float:
    """Shannon rate log2(1 + sinr) in bits/s/Hz."""
    if sinr < 0:
        raise ValueError("sinr must be >= 0")
    return float(np.log2(1.0 + sinr))


def optimal_alpha(gains: EffectiveGains, budget: LinkBudget) -> float | None:
    """Largest power split meeting the secondary QoS at both users.

    Returns None when the secondary QoS cannot be met even with all the
    power left unmodulated (infeasible realization).
    """
    G = gains.G
    if min(G) <= 0:
        return None
    c = budget.noise_power * budget.qos_threshold / (budget.spreading_gain
                                                     * budget.tx_power)
    alpha = 1.0 - c / min(G)
    return alpha if alpha > 0 else None


def alpha_feasible(alpha: float, alloc: NomaAllocation, order: DecodingOrder,
                   gains: EffectiveGains, budget: LinkBudget) -> bool:
    """Check the lower edge of the feasible window for the power split.

    The weak user's QoS imposes
    sigma^2 gamma_th / (P_T G_w (a_w - a_s gamma_th)) <= alpha; a non-positive
    denominator means that QoS is unreachable at any alpha.
    """
    gamma = budget.qos_threshold
    if gamma == 0:
        return True
    a_w = alloc.a[order.weak]
    a_s = alloc.a[order.strong]
    den = a_w - a_s * gamma
    if den <= 0:
        return False
    G_w = gains.G[order.weak]
    if G_w <= 0:
        return False
    lower = budget.noise_power * gamma / (budget.tx_power * G_w * den)
    # 1e-6 relative slack, the constraint-satisfaction tolerance used
    # throughout: the coefficient update pins the weak SINR exactly at
    # gamma_th (lower == alpha up to rounding), and phase candidates meet
    # the window only up to solver accuracy
    return lower <= alpha * (1.0 + 1e-6)


def optimal_power_coeff(alpha: float, G_weak: float,
                        budget: LinkBudget) -> float | None:
    """Strong-user NOMA coefficient that makes the weak user's SINR exactly
    equal the QoS threshold.

    a_s = (1 + gamma)^-1 * [1 - gamma sigma^2 / (alpha P_T G_weak)], using the
    squared cascaded magnitude. Returns None when a_s <= 0 (infeasible).
    """
    if alpha <= 0 or G_weak <= 0:
        raise ValueError("alpha and G_weak must be > 0")
    gamma = budget.qos_threshold
    a_s = (1.0 - gamma * budget.noise_power
           / (alpha * budget.tx_power * G_weak)) / (1.0 + gamma)
    return a_s if a_s > 0 else None


def sinr_imperfect_sic(alloc: NomaAllocation, order: DecodingOrder,
                       gains: EffectiveGains, budget: LinkBudget,
                       sic: SicModel) -> float:
    """Strong-user SINR when a fraction beta of the weak signal survives SIC."""
    G_s = gains.G[order.strong]
    p = alloc.alpha * budget.tx_power
    residual = sic.beta * alloc.a[order.weak] * p * G_s
    return alloc.a[order.strong] * p * G_s / (residual + budget.noise_power)


def residual_sic_ok(alloc: NomaAllocation, order: DecodingOrder, G_strong: float,
                    budget: LinkBudget, sic: SicModel) -> bool:
    """True iff the residual SIC power beta a_w alpha P_T G_s respects the
    cap gamma_sic (inclusive)."""
    if sic.gamma_sic is None:
        raise ValueError("sic model has no gamma_sic cap")
    residual = (sic.beta * alloc.a[order.weak] * alloc.alpha
                * budget.tx_power * G_strong)
    return residual <= sic.gamma_sic
