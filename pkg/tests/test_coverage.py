"""Laplace transforms and SINR coverage integrals."""
import pytest

from hetcache import (ConstantWatts, LinkClass, Path, PdfMode, Tier,
                      association_masses, coverage_access, coverage_all,
                      coverage_backhaul, default_cache, default_system,
                      laplace_interference, mc_laplace)
from hetcache.association import biased_amplitude

SBS_L = LinkClass(Tier.SBS, Path.LOS)
MBS_L = LinkClass(Tier.MBS, Path.LOS)


def test_laplace_at_zero_is_one():
    s, c = default_system(), default_cache()
    for lc in LinkClass.all_classes():
        assert laplace_interference(s, c, lc, 50.0, 0.0) == 1.0
    assert laplace_interference(s, c, MBS_L, 200.0, 0.0, backhaul=True) == 1.0


def test_laplace_no_interferers_is_one():
    s = default_system(lambda_s=0.0, lambda_m=0.0)
    c = default_cache()
    assert laplace_interference(s, c, SBS_L, 50.0, 1e10) == 1.0


def test_laplace_in_unit_interval_and_decreasing_in_s():
    s, c = default_system(), default_cache()
    amp = biased_amplitude(s, c, SBS_L)
    s_ref = 10.0 * 50.0 ** s.alpha_los / amp
    prev = 1.0
    for mult in (0.0, 0.01, 0.1, 1.0, 10.0):
        val = laplace_interference(s, c, SBS_L, 50.0, mult * s_ref)
        assert 0.0 < val <= 1.0
        assert val <= prev + 1e-12
        prev = val


def test_laplace_matches_monte_carlo_spot():
    # one quick 3-sigma spot check; the five-pair 2% gate is in acceptance
    s, c = default_system(), default_cache()
    amp = biased_amplitude(s, c, SBS_L)
    sval = 10.0 * 50.0 ** s.alpha_los / amp
    ana = laplace_interference(s, c, SBS_L, 50.0, sval)
    mc = mc_laplace(s, c, SBS_L, 50.0, sval, n=3000, seed=7321)
    assert abs(ana - mc.value) < 3.5 * mc.stderr + 0.002


def test_coverage_rejects_nonpositive_gamma():
    s, c = default_system(), default_cache()
    with pytest.raises(ValueError):
        coverage_access(s, c, Tier.SBS, 0.0)


def test_coverage_at_vanishing_threshold_equals_association_mass():
    s, c = default_system(), default_cache()
    masses = association_masses(s, c, PdfMode.THINNED)
    for tier in (Tier.SBS, Tier.MBS):
        p_l, p_n = coverage_access(s, c, tier, 1e-12)
        expected = masses.tier_mass(tier)
        assert p_l + p_n == pytest.approx(expected, abs=1e-3)
    b_l, b_n = coverage_backhaul(s, c, 1e-12)
    assert b_l + b_n == pytest.approx(1.0, abs=1e-3)


def test_coverage_vanishes_at_huge_threshold():
    s, c = default_system(), default_cache()
    p_l, p_n = coverage_access(s, c, Tier.SBS, 1e20)
    assert p_l == pytest.approx(0.0, abs=1e-9)
    assert p_n == pytest.approx(0.0, abs=1e-9)


def test_coverage_monotone_in_gamma():
    s, c = default_system(), default_cache()
    grid = [10 ** (g / 10.0) for g in (0.0, 10.0, 20.0)]
    stacks = [coverage_all(s, c, g) for g in grid]
    for a, b in zip(stacks, stacks[1:]):
        assert b.sbs_los <= a.sbs_los + 1e-9
        assert b.sbs_nlos <= a.sbs_nlos + 1e-9
        assert b.mbs_los <= a.mbs_los + 1e-9
        assert b.mbs_nlos <= a.mbs_nlos + 1e-9
        assert b.bh_los <= a.bh_los + 1e-9
        assert b.bh_nlos <= a.bh_nlos + 1e-9


def test_coverage_components_in_unit_interval():
    s, c = default_system(), default_cache()
    cov = coverage_all(s, c, 10.0)
    for v in (cov.sbs_los, cov.sbs_nlos, cov.mbs_los, cov.mbs_nlos,
              cov.bh_los, cov.bh_nlos):
        assert 0.0 <= v <= 1.0


def test_high_power_limit_monotone():
    # scaling all transmit powers by K with N0 fixed lifts every component
    # toward its interference-limited ceiling
    base = dict(p_tot_s=9.1, p_fc_s=0.1, p_tot_m=610.0, p_fc_m=10.16)
    prev = None
    for k in (1.0, 10.0, 100.0):
        s = default_system(noise_model=ConstantWatts(1e-14),
                           **{key: v * k for key, v in base.items()})
        c = default_cache(w_ca=2.5e-9 * k)
        p_l, p_n = coverage_access(s, c, Tier.SBS, 10.0)
        b_l, b_n = coverage_backhaul(s, c, 10.0)
        cur = (p_l, p_n, b_l, b_n)
        if prev is not None:
            assert all(b >= a - 1e-9 for a, b in zip(prev, cur))
        prev = cur


def test_backhaul_denser_mbs_sanity_recorded():
    # densifying the MBS tier under dominant noise: recorded, not asserted
    # analytically (interference also grows); values must stay valid
    s1 = default_system(noise_model=ConstantWatts(1e-12))
    s2 = default_system(lambda_m=1e-4, noise_model=ConstantWatts(1e-12))
    c = default_cache()
    v1 = sum(coverage_backhaul(s1, c, 10.0))
    v2 = sum(coverage_backhaul(s2, c, 10.0))
    assert 0.0 <= v1 <= 1.0 and 0.0 <= v2 <= 1.0