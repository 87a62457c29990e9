"""Exclusion geometry, association densities and masses."""
import pytest

from hetcache import (LinkClass, NonPositiveTxPower, Path, PdfMode, Tier,
                      association_density, association_masses,
                      backhaul_association_density, default_cache,
                      default_system, exclusion_distances, mbs_tx_power,
                      mc_association, nearest_distance_pdf, sbs_tx_power)
from hetcache.propagation import NearestTier

SBS_L = LinkClass(Tier.SBS, Path.LOS)
SBS_N = LinkClass(Tier.SBS, Path.NLOS)
MBS_L = LinkClass(Tier.MBS, Path.LOS)
MBS_N = LinkClass(Tier.MBS, Path.NLOS)


def test_own_class_radius_is_r_exactly():
    s, c = default_system(), default_cache()
    for lc in LinkClass.all_classes():
        for r in (1.0, 57.3, 400.0):
            assert exclusion_distances(s, c, lc, r).radius(lc) == r


def test_same_tier_cross_path_powers_cancel():
    # desired SBS-LoS vs competing SBS-NLoS: d = (A_NL/A_L)^(1/a_NL) * r^(a_L/a_NL)
    s, c = default_system(), default_cache()
    r = 64.0
    expected = (s.a_nlos / s.a_los) ** (1.0 / s.alpha_nlos) \
        * r ** (s.alpha_los / s.alpha_nlos)
    got = exclusion_distances(s, c, SBS_L, r).radius(SBS_N)
    assert got == pytest.approx(expected, rel=1e-12)


def test_cross_tier_radius_pinned():
    # desired MBS-LoS at r=100 vs competing SBS-LoS: biased-power balance
    # d = (P_s B_s / (P_m B_m))^(1/a_L) * 100
    s, c = default_system(), default_cache()
    ratio = (sbs_tx_power(s, c) * s.bias_s) / (mbs_tx_power(s, c) * s.bias_m)
    expected = ratio ** (1.0 / s.alpha_los) * 100.0
    got = exclusion_distances(s, c, MBS_L, 100.0).radius(SBS_L)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(28.5403, abs=0.001)


def test_exclusion_radii_increase_with_r():
    s, c = default_system(), default_cache()
    prev = None
    for r in (10.0, 20.0, 40.0, 80.0, 160.0):
        ex = exclusion_distances(s, c, SBS_L, r)
        radii = [ex.radius(lc) for lc in LinkClass.all_classes()]
        if prev is not None:
            assert all(b > a for a, b in zip(prev, radii))
        prev = radii


def test_exclusion_propagates_power_error():
    s = default_system()
    c = default_cache(cache_size=113)  # infeasible SBS cache
    with pytest.raises(NonPositiveTxPower):
        exclusion_distances(s, c, SBS_L, 50.0)


def test_density_reduces_to_pdf_without_competition():
    # all competing densities -> 0 turns every void factor into 1
    s = default_system(lambda_m=0.0)
    c = default_cache()
    # target SBS-LoS with no MBS tier: only the same-tier NLoS factor remains,
    # and inside 18 m that factor is exactly 1
    r = 10.0
    f = nearest_distance_pdf(s, NearestTier.SBS, Path.LOS, PdfMode.THINNED, r)
    assert association_density(s, c, SBS_L, PdfMode.THINNED, r) \
        == pytest.approx(f, rel=1e-12)


def test_user_masses_sum_to_one_thinned():
    s, c = default_system(), default_cache()
    m = association_masses(s, c, PdfMode.THINNED)
    assert m.user_total() == pytest.approx(1.0, abs=1e-3)
    assert all(v >= 0.0 for v in m.user.values())


def test_backhaul_masses_sum_to_one_thinned():
    s, c = default_system(), default_cache()
    m = association_masses(s, c, PdfMode.THINNED)
    assert m.backhaul_los + m.backhaul_nlos == pytest.approx(1.0, abs=1e-3)


def test_paper_literal_masses_undershoot():
    # the printed pdfs double-count same-tier voids once the exclusion
    # factors are applied, so the literal masses sum below 1
    s, c = default_system(), default_cache()
    m = association_masses(s, c, PdfMode.PAPER_LITERAL)
    assert m.user_total() < 0.99


def test_bias_dominance_limit():
    s = default_system(bias_s=1e9)
    c = default_cache()
    m = association_masses(s, c, PdfMode.THINNED)
    assert m.tier_mass(Tier.SBS) == pytest.approx(1.0, abs=1e-3)


def test_denser_equal_power_tier_wins():
    # identical power budgets and biases; lambda_s = 10 lambda_m
    s = default_system(p_tot_m=9.1, p_fc_m=0.1, rho_m=4.0, bias_s=1.0, bias_m=1.0)
    c = default_cache(w_ca=0.0)
    m = association_masses(s, c, PdfMode.THINNED)
    assert m.tier_mass(Tier.SBS) > m.tier_mass(Tier.MBS)


def test_scale_invariance_of_masses():
    # scaling every power (and the noise floor) by K leaves exclusion
    # geometry and masses unchanged: powers enter only through ratios
    from hetcache import ConstantWatts
    k = 40.0
    base = dict(p_tot_s=9.1, p_fc_s=0.1, p_tot_m=610.0, p_fc_m=10.16)
    s1 = default_system(noise_model=ConstantWatts(1e-14))
    s2 = default_system(noise_model=ConstantWatts(1e-14 * k),
                        **{key: v * k for key, v in base.items()})
    c1 = default_cache()
    c2 = default_cache(w_ca=2.5e-9 * k)
    ex1 = exclusion_distances(s1, c1, SBS_L, 73.0)
    ex2 = exclusion_distances(s2, c2, SBS_L, 73.0)
    for lc in LinkClass.all_classes():
        assert ex1.radius(lc) == pytest.approx(ex2.radius(lc), rel=1e-12)
    m1 = association_masses(s1, c1, PdfMode.THINNED)
    m2 = association_masses(s2, c2, PdfMode.THINNED)
    for lc in LinkClass.all_classes():
        assert m1.user[lc] == pytest.approx(m2.user[lc], abs=1e-9)


def test_density_superpolynomial_decay():
    s, c = default_system(), default_cache()
    f300 = association_density(s, c, SBS_L, PdfMode.THINNED, 300.0)
    f3000 = association_density(s, c, SBS_L, PdfMode.THINNED, 3000.0)
    assert f3000 * 3000.0 ** 6 < f300 * 300.0 ** 6


def test_backhaul_density_positive_and_split():
    s, c = default_system(), default_cache()
    assert backhaul_association_density(s, c, Path.LOS, PdfMode.THINNED, 150.0) > 0
    assert backhaul_association_density(s, c, Path.NLOS, PdfMode.THINNED, 10.0) == 0.0


def test_masses_match_monte_carlo_3sigma():
    # quick-n cross-check; the 50k acceptance run lives in test_acceptance
    s, c = default_system(), default_cache()
    m = association_masses(s, c, PdfMode.THINNED)
    mc = mc_association(s, c, n=4000, r_sim=3000.0, seed=424242)
    for lc in LinkClass.all_classes():
        est = mc.assoc[lc]
        se = max(est.stderr, 1e-4)
        assert abs(m.user[lc] - est.value) < 3.5 * se + 1e-3
