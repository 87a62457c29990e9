"""Determinism, sampling laws, and estimator contracts of the MC oracle."""
import math

import numpy as np
import pytest

from hetcache import (LinkClass, Path, RejectionStarvation, Tier,
                      default_cache, default_system, mc_coverage, mc_laplace,
                      sample_realization)
from hetcache.association import biased_amplitude
from hetcache.montecarlo import mc_apt, mc_apt_coverage

SBS_L = LinkClass(Tier.SBS, Path.LOS)
SBS_N = LinkClass(Tier.SBS, Path.NLOS)


def test_realization_bit_identical_replay():
    s = default_system()
    a = sample_realization(s, 1500.0, seed=11, substream=3)
    b = sample_realization(s, 1500.0, seed=11, substream=3)
    assert np.array_equal(a.sbs_xy, b.sbs_xy)
    assert np.array_equal(a.mbs_xy, b.mbs_xy)
    assert np.array_equal(a.sbs_los, b.sbs_los)
    assert np.array_equal(a.sbs_fade, b.sbs_fade)
    assert np.array_equal(a.bh_fade, b.bh_fade)


def test_realizations_differ_across_substreams():
    s = default_system()
    a = sample_realization(s, 1500.0, seed=11, substream=3)
    b = sample_realization(s, 1500.0, seed=11, substream=4)
    assert a.sbs_r.size != b.sbs_r.size or not np.array_equal(a.sbs_r, b.sbs_r)


def test_poisson_disc_counts():
    # mean in-disc SBS count lambda*pi*r^2 = 2827.4 at the default density
    s = default_system()
    r_sim = 3000.0
    mean = s.lambda_s * math.pi * r_sim ** 2
    n = 300
    counts = [np.count_nonzero(sample_realization(s, r_sim, 5, k).sbs_r <= r_sim)
              for k in range(n)]
    sample_mean = np.mean(counts)
    sigma = math.sqrt(mean / n)
    assert abs(sample_mean - mean) < 3.0 * sigma


def test_far_field_present_and_los_only():
    s = default_system()
    real = sample_realization(s, 3000.0, seed=2, substream=0)
    far = real.sbs_r > 3000.0
    assert far.any()  # LoS far field out to r_far
    assert real.sbs_los[far].all()
    assert real.sbs_r.max() <= real.r_far


def test_empty_tier_at_vanishing_density():
    s = default_system(lambda_m=1e-12)
    real = sample_realization(s, 1000.0, seed=1, substream=0)
    assert real.mbs_r.size == 0


def test_mc_coverage_deterministic_and_worker_invariant():
    s, c = default_system(), default_cache()
    r1 = mc_coverage(s, c, [10.0], n=1200, r_sim=1200.0, seed=77, workers=1)
    r2 = mc_coverage(s, c, [10.0], n=1200, r_sim=1200.0, seed=77, workers=2)
    for lc in LinkClass.all_classes():
        assert r1.assoc[lc].value == r2.assoc[lc].value
        assert r1.coverage[lc][0].value == r2.coverage[lc][0].value
    assert r1.bh_coverage[Path.LOS][0].value == r2.bh_coverage[Path.LOS][0].value


def test_mc_association_fractions_sum_to_one():
    s, c = default_system(), default_cache()
    r = mc_coverage(s, c, (), n=500, r_sim=1500.0, seed=3)
    total = sum(r.assoc[lc].value for lc in LinkClass.all_classes())
    assert total == 1.0
    assert r.n_skipped == 0


def test_mc_coverage_at_tiny_threshold_equals_association():
    s, c = default_system(), default_cache()
    r = mc_coverage(s, c, [1e-20], n=400, r_sim=1500.0, seed=9)
    for lc in LinkClass.all_classes():
        assert r.coverage[lc][0].value == r.assoc[lc].value


def test_mc_empty_network_skipped_and_counted():
    s = default_system(lambda_s=1e-12, lambda_m=1e-12)
    r = mc_coverage(s, default_cache(), [10.0], n=20, r_sim=100.0, seed=4)
    assert r.n_skipped == 20
    assert r.n_bh_skipped == 20
    assert math.isnan(r.assoc[SBS_L].value)


def test_mc_estimate_stderr_flag_at_n1():
    s, c = default_system(), default_cache()
    r = mc_coverage(s, c, [10.0], n=1, r_sim=800.0, seed=5)
    est = r.assoc[SBS_L]
    assert est.value in (0.0, 1.0)
    assert math.isnan(est.stderr)


def test_mc_laplace_at_s_zero_is_exactly_one():
    s, c = default_system(), default_cache()
    est = mc_laplace(s, c, SBS_L, 50.0, 0.0, n=300, seed=6, r_sim=1200.0)
    assert est.value == 1.0
    assert est.n == 300


def test_mc_laplace_no_interference_limit():
    s = default_system(lambda_s=1e-12, lambda_m=1e-12)
    est = mc_laplace(s, default_cache(), SBS_L, 50.0, 1e12, n=200, seed=6,
                     r_sim=500.0)
    assert est.value == 1.0


def test_mc_laplace_starves_on_implausible_conditioning():
    # an NLoS serving link at 30 m is beaten by any LoS BS within ~17 km,
    # so the association event there is effectively impossible
    s, c = default_system(), default_cache()
    amp = biased_amplitude(s, c, SBS_N)
    sval = 10.0 * 30.0 ** s.alpha_nlos / amp
    with pytest.raises(RejectionStarvation):
        mc_laplace(s, c, SBS_N, 30.0, sval, n=100, seed=8)


def test_mc_apt_full_hit_skips_backhaul():
    s = default_system()
    c = default_cache(library_size=20, cache_size=20)  # p_h = 1
    res = mc_apt(s, c, 0.4, 10.0, n=300, r_sim=1500.0, seed=12)
    assert res.estimates.n_miss == 0
    for case in res.breakdown.cases:
        assert math.isinf(case.backhaul_term)
        assert case.value == case.access_term


def test_mc_apt_eta_zero_gives_zero():
    s, c = default_system(), default_cache()
    res = mc_apt(s, c, 0.0, 10.0, n=200, r_sim=1500.0, seed=13)
    assert res.breakdown.r_total == 0.0


def test_mc_apt_miss_rate_matches_hit_ratio():
    s, c = default_system(), default_cache()
    est = mc_apt_coverage(s, c, 10.0, n=4000, r_sim=1200.0, seed=14)
    p_miss = est.n_miss / 4000.0
    from hetcache import cache_hit_ratio
    expected = 1.0 - cache_hit_ratio(c)
    assert abs(p_miss - expected) < 3.0 * math.sqrt(expected * (1 - expected) / 4000.0)
