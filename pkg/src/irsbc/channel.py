"""Geometry, pathloss, and Rician-faded channel vectors.

Channels are generated for a single-antenna AP, an M-element reflecting
surface, and two single-antenna users placed uniformly in a rectangle.
There is no AP-user direct link; every link is AP -> surface -> user.
"""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 3.0e8


@dataclass(frozen=True)
class Geometry:
    """Node placement in the 2-D plane (meters)."""

    ap_position: tuple[float, float] = (0.0, 0.0)
    irs_position: tuple[float, float] = (2.0, 2.0)
    # ((x_min, x_max), (y_min, y_max)) rectangle the users are drawn from
    user_region: tuple[tuple[float, float], tuple[float, float]] = ((2.0, 20.0), (1.0, 2.0))
    num_elements: int = 30
    num_users: int = 2

    def __post_init__(self):
        if self.num_users != 2:
            raise ValueError("exactly two users are supported")
        if self.num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        (x0, x1), (y0, y1) = self.user_region
        if not (x1 > x0 and y1 > y0):
            raise ValueError("user_region must have strictly positive area")


@dataclass(frozen=True)
class FadingParams:
    """Rician fading and pathloss parameters (all linear units)."""

    rician_k: float = 10.0 ** 0.3  # 3 dB
    pathloss_exponent: float = 2.1
    carrier_freq: float = 915e6

    def __post_init__(self):
        if self.rician_k < 0:
            raise ValueError("rician_k must be >= 0")
        if self.pathloss_exponent <= 0:
            raise ValueError("pathloss_exponent must be > 0")
        if self.carrier_freq <= 0:
            raise ValueError("carrier_freq must be > 0")


@dataclass
class ChannelRealization:
    """One fading draw: AP->IRS vector ``h`` and IRS->user vectors ``f[k]``."""

    h: np.ndarray
    f: tuple[np.ndarray, np.ndarray]
    is_estimate: bool = False
    user_positions: np.ndarray | None = None

    def __post_init__(self):
        m = len(self.h)
        if any(len(fk) != m for fk in self.f):
            raise ValueError("h and f_k must all have length M")
        if not (np.all(np.isfinite(self.h))
                and all(np.all(np.isfinite(fk)) for fk in self.f)):
            raise ValueError("channel entries must be finite")

    @property
    def num_elements(self) -> int:
        return len(self.h)


@dataclass(frozen=True)
class CsiErrorModel:
    """Additive Gaussian channel-estimation error.

    ``eta`` scales the per-entry error variance: var(e_m) = eta * |h_m|^2.
    ``links`` selects which links are perturbed: "all" or "ap_irs".
    """

    eta: float
    links: str = "all"

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.links not in ("all", "ap_irs"):
            raise ValueError("links must be 'all' or 'ap_irs'")


def pathloss(distance: float, params: FadingParams) -> float:
    """Linear power gain (c / 4 pi f)^2 * d^(-xi) at distance ``distance`` m."""
    if distance <= 0:
        raise ValueError("distance must be > 0")
    ref = (SPEED_OF_LIGHT / (4.0 * np.pi * params.carrier_freq)) ** 2
    return ref * distance ** (-params.pathloss_exponent)


def sample_rician(k_factor: float, length: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-power Rician vector: deterministic all-ones LOS plus CSCG scatter.

    E[|entry|^2] = 1 for every K >= 0; pathloss scaling is applied by the
    caller.
    """
    if k_factor < 0:
        raise ValueError("k_factor must be >= 0")
    if length < 1:
        raise ValueError("length must be >= 1")
    los = np.ones(length, dtype=complex)
    w = (rng.standard_normal(length) + 1j * rng.standard_normal(length)) / np.sqrt(2.0)
    return np.sqrt(k_factor / (k_factor + 1.0)) * los + np.sqrt(1.0 / (k_factor + 1.0)) * w


def generate_realization(geometry: Geometry, params: FadingParams,
                         rng: np.random.Generator) -> ChannelRealization:
    """Draw user positions and one Rician fading realization of all links."""
    (x0, x1), (y0, y1) = geometry.user_region
    users = np.column_stack([rng.uniform(x0, x1, geometry.num_users),
                             rng.uniform(y0, y1, geometry.num_users)])
    ap = np.asarray(geometry.ap_position, dtype=float)
    irs = np.asarray(geometry.irs_position, dtype=float)
    m = geometry.num_elements

    h = np.sqrt(pathloss(np.linalg.norm(ap - irs), params)) * sample_rician(
        params.rician_k, m, rng)
    f = tuple(
        np.sqrt(pathloss(np.linalg.norm(irs - users[k]), params)) * sample_rician(
            params.rician_k, m, rng)
        for k in range(geometry.num_users))
    return ChannelRealization(h=h, f=f, user_positions=users)


def apply_csi_error(channel: np.ndarray, model: CsiErrorModel,
                    rng: np.random.Generator) -> np.ndarray:
    """Perturb one channel vector: e_m ~ CSCG with variance eta * |h_m|^2."""
    if model.eta == 0:
        return channel.copy()
    scale = np.sqrt(model.eta) * np.abs(channel)
    e = scale * (rng.standard_normal(len(channel))
                 + 1j * rng.standard_normal(len(channel))) / np.sqrt(2.0)
    return channel + e


def perturb_realization(real: ChannelRealization, model: CsiErrorModel,
                        rng: np.random.Generator) -> ChannelRealization:
    """Estimated copy of ``real`` with CSI error on the selected links."""
    h = apply_csi_error(real.h, model, rng)
    if model.links == "all":
        f = tuple(apply_csi_error(fk, model, rng) for fk in real.f)
    else:
        f = tuple(fk.copy() for fk in real.f)
    return ChannelRealization(h=h, f=f, is_estimate=True,
                              user_positions=real.user_positions)
