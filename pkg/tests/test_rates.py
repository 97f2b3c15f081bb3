import numpy as np
import pytest

from irsbc import (ChannelRealization, DecodingOrder, EffectiveGains,
                   LinkBudget, NomaAllocation, SicModel, alpha_feasible,
                   decoding_order, effective_gains, optimal_alpha,
                   optimal_power_coeff, primary_sinr, rate, residual_sic_ok,
                   secondary_snr, sinr_imperfect_sic)


def budget(p=0.01, sigma2=1e-14, gamma=10.0, spread=10):
    return LinkBudget(tx_power=p, noise_power=sigma2, qos_threshold=gamma,
                      spreading_gain=spread)


def gains(G0, G1):
    return EffectiveGains(g=(np.sqrt(G0) + 0j, np.sqrt(G1) + 0j))


def test_effective_gains_cascade():
    h = np.array([1.0 + 1j, 2.0 - 1j])
    f0 = np.array([0.5 + 0j, 1.0 + 0.5j])
    f1 = np.array([1.0 + 0j, 0.0 + 1j])
    v = np.exp(1j * np.array([0.3, -1.1]))
    ch = ChannelRealization(h=h, f=(f0, f1))
    out = effective_gains(ch, v)
    exp0 = np.sum(h * v * f0)
    exp1 = np.sum(h * v * f1)
    assert out.g[0] == pytest.approx(exp0)
    assert out.g[1] == pytest.approx(exp1)


def test_decoding_order_cases():
    assert decoding_order(gains(4.0, 1.0)).strong == 0
    assert decoding_order(gains(1.0, 4.0)).strong == 1
    # tie goes to user 0
    assert decoding_order(gains(2.0, 2.0)).strong == 0


def test_decoding_order_scale_invariant():
    rng = np.random.default_rng(0)
    for _ in range(50):
        G = rng.uniform(0.1, 5.0, 2)
        c = rng.uniform(1e-10, 1e10)
        assert decoding_order(gains(*G)).strong == \
            decoding_order(gains(*(c * G))).strong


def test_secondary_snr_edges():
    b = budget()
    alloc = NomaAllocation(alpha=1.0, a=(0.5, 0.5))
    assert secondary_snr(alloc, 1e-8, b) == 0.0
    # alpha = 0 with P_T G / sigma^2 = 1 leaves only the spreading gain
    b1 = budget(p=1.0, sigma2=1.0)
    alloc0 = NomaAllocation(alpha=0.0, a=(0.5, 0.5))
    assert secondary_snr(alloc0, 1.0, b1) == pytest.approx(10.0)


def test_secondary_snr_hand_value():
    b = budget()
    alloc = NomaAllocation(alpha=0.6, a=(0.5, 0.5))
    assert secondary_snr(alloc, 1e-8, b) == pytest.approx(4e4)


def test_primary_sinr_strong_no_interference():
    b = budget(p=1.0, sigma2=1.0)
    order = DecodingOrder(strong=0, weak=1)
    alloc = NomaAllocation(alpha=0.5, a=(0.0, 1.0))
    assert primary_sinr(alloc, order, 0, gains(1.0, 1.0), b) == 0.0


def test_primary_sinr_weak_hand_value():
    # alpha 0.5, a = (0.2, 0.8), P G_w / sigma^2 = 100, weak = user 1
    b = budget(p=1.0, sigma2=1.0)
    order = DecodingOrder(strong=0, weak=1)
    alloc = NomaAllocation(alpha=0.5, a=(0.2, 0.8))
    sinr = primary_sinr(alloc, order, 1, gains(400.0, 100.0), b)
    assert sinr == pytest.approx(40.0 / 11.0)


def test_primary_sinr_weak_reduces_without_interference():
    b = budget(p=1.0, sigma2=1.0)
    order = DecodingOrder(strong=0, weak=1)
    alloc = NomaAllocation(alpha=0.5, a=(0.0, 1.0))
    sinr = primary_sinr(alloc, order, 1, gains(400.0, 100.0), b)
    assert sinr == pytest.approx(0.5 * 100.0)


def test_rate_values():
    assert rate(0.0) == 0.0
    assert rate(1.0) == pytest.approx(1.0)
    assert rate(40.0 / 11.0) == pytest.approx(np.log2(1.0 + 40.0 / 11.0))
    assert rate(3.636) == pytest.approx(2.213, abs=5e-4)
    with pytest.raises(ValueError):
        rate(-0.1)


def test_optimal_alpha_hand_value():
    # sigma^2 gamma / (L P G_k) = 0.1 for both users
    b = budget(p=1.0, sigma2=1.0, gamma=10.0, spread=10)
    assert optimal_alpha(gains(10.0, 10.0), b) == pytest.approx(0.9)


def test_optimal_alpha_no_qos():
    b = budget(gamma=0.0)
    assert optimal_alpha(gains(1e-9, 1e-9), b) == pytest.approx(1.0)


def test_optimal_alpha_infeasible_boundary():
    b = budget(p=1.0, sigma2=1.0, gamma=10.0, spread=10)
    assert optimal_alpha(gains(1.0, 5.0), b) is None


def test_optimal_alpha_maximality_grid():
    # no feasible alpha on a fine grid beats the closed form
    rng = np.random.default_rng(4)
    b = budget(p=1.0, sigma2=1.0, gamma=10.0, spread=10)
    for _ in range(20):
        G = gains(*rng.uniform(1.5, 50.0, 2))
        best = optimal_alpha(G, b)
        assert best is not None
        grid = np.arange(0.0, 1.0 + 1e-9, 1e-4)
        ok = [a for a in grid
              if min(secondary_snr(NomaAllocation(alpha=a, a=(0.5, 0.5)), Gk, b)
                     for Gk in G.G) >= b.qos_threshold]
        assert max(ok) <= best + 1e-4


def test_alpha_feasible_cases():
    b = budget(p=1.0, sigma2=1.0, gamma=1.0)
    order = DecodingOrder(strong=1, weak=0)
    # a_w - a_s gamma <= 0: unreachable
    bad = NomaAllocation(alpha=0.5, a=(0.4, 0.6))
    assert not alpha_feasible(0.5, bad, order, gains(1.0, 100.0), b)
    # gamma = 0: always true
    b0 = budget(gamma=0.0)
    any_alloc = NomaAllocation(alpha=0.5, a=(0.5, 0.5))
    assert alpha_feasible(0.5, any_alloc, order, gains(1e-9, 1e-9), b0)
    # hand value: lower bound 1 / (100 (0.9 - 0.1)) = 0.0125 <= 0.5
    alloc = NomaAllocation(alpha=0.5, a=(0.9, 0.1))
    assert alpha_feasible(0.5, alloc, order, gains(100.0, 400.0), b)


def test_optimal_power_coeff_values():
    b0 = budget(gamma=0.0)
    assert optimal_power_coeff(0.5, 1.0, b0) == pytest.approx(1.0)
    # boundary gamma sigma^2 / (alpha P G_w) = 1
    b = budget(p=1.0, sigma2=1.0, gamma=10.0)
    assert optimal_power_coeff(0.5, 20.0, b) is None
    # alpha P G_w / sigma^2 = 1000 at gamma 10
    assert optimal_power_coeff(1.0, 1000.0, b) == pytest.approx(0.09)


def test_power_coeff_makes_weak_sinr_tight():
    rng = np.random.default_rng(9)
    b = budget(p=1.0, sigma2=1.0, gamma=10.0)
    for _ in range(100):
        Gs, Gw = sorted(rng.uniform(50.0, 5000.0, 2), reverse=True)
        alpha = rng.uniform(0.2, 1.0)
        a_s = optimal_power_coeff(alpha, Gw, b)
        if a_s is None:
            continue
        order = DecodingOrder(strong=0, weak=1)
        alloc = NomaAllocation(alpha=alpha, a=(a_s, 1.0 - a_s))
        sinr_w = primary_sinr(alloc, order, 1, gains(Gs, Gw), b)
        assert sinr_w == pytest.approx(b.qos_threshold, rel=1e-9)


def test_sinr_imperfect_sic():
    b = budget(p=1.0, sigma2=1.0)
    order = DecodingOrder(strong=0, weak=1)
    alloc = NomaAllocation(alpha=1.0, a=(0.9, 0.1))
    G = gains(100.0, 1.0)
    # beta = 0 reduces to the perfect-SIC strong SINR
    assert sinr_imperfect_sic(alloc, order, G, b, SicModel(beta=0.0)) == \
        pytest.approx(primary_sinr(alloc, order, 0, G, b))
    # hand value at beta = 0.1
    assert sinr_imperfect_sic(alloc, order, G, b, SicModel(beta=0.1)) == \
        pytest.approx(45.0)
    # beta = 1: full residual interference
    full = sinr_imperfect_sic(alloc, order, G, b, SicModel(beta=1.0))
    assert full == pytest.approx(0.9 * 100.0 / (0.1 * 100.0 + 1.0))


def test_residual_sic_cap_boundary():
    order = DecodingOrder(strong=0, weak=1)
    sic = SicModel(beta=0.1, gamma_sic=1.0)
    alloc = NomaAllocation(alpha=0.5, a=(0.5, 0.5))
    # beta a_w alpha P G_s = 0.1 * 0.5 * 0.5 * P G_s; P G_s = 40 -> exactly 1
    b = budget(p=40.0, sigma2=1.0)
    assert residual_sic_ok(alloc, order, 1.0, b, sic)
    b2 = budget(p=80.0, sigma2=1.0)
    assert not residual_sic_ok(alloc, order, 1.0, b2, sic)
    # beta = 0: always within the cap
    assert residual_sic_ok(alloc, order, 1.0, b2, SicModel(beta=0.0, gamma_sic=1.0))


def test_noma_allocation_validation():
    with pytest.raises(ValueError):
        NomaAllocation(alpha=1.5, a=(0.5, 0.5))
    with pytest.raises(ValueError):
        NomaAllocation(alpha=0.5, a=(0.6, 0.6))
