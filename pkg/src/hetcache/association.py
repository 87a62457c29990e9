"""Max-biased-received-power association.

For a candidate serving BS of class (k, X) at distance r, each competing
class (j, Y) has an exclusion distance d: an interferer of that class closer
than d would win the biased-power comparison. The association density is the
nearest-distance density of the serving class times the void probabilities of
the three competing classes inside their exclusion radii (one competing class
for the SBS<-MBS backhaul link).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import scipy.integrate

from .errors import QuadratureFailure
from .params import CacheParams, LinkClass, Path, SystemParams, Tier, tx_power
from .propagation import NearestTier, PdfMode, nearest_distance_pdf, radial_mass

USER_CLASSES = LinkClass.all_classes()
BACKHAUL_CLASSES = (LinkClass(Tier.MBS, Path.LOS), LinkClass(Tier.MBS, Path.NLOS))


def biased_amplitude(sys: SystemParams, cache: CacheParams, lc: LinkClass) -> float:
    """P_tr * bias * intercept of a class: its biased received power at r is
    this amplitude times r^-alpha."""
    return tx_power(sys, cache, lc.tier) * sys.bias(lc.tier) * sys.intercept(lc.path)


@dataclass(frozen=True)
class ExclusionSet:
    """Exclusion radii around a desired link of class `desired` at distance r."""

    desired: LinkClass
    r: float
    sbs_los: float
    sbs_nlos: float
    mbs_los: float
    mbs_nlos: float

    def radius(self, lc: LinkClass) -> float:
        if lc.tier is Tier.SBS:
            return self.sbs_los if lc.path is Path.LOS else self.sbs_nlos
        return self.mbs_los if lc.path is Path.LOS else self.mbs_nlos


def exclusion_distances(sys: SystemParams, cache: CacheParams,
                        desired: LinkClass, r: float) -> ExclusionSet:
    """Minimum distance each class must keep for the desired BS to win.

    d_jY = (amp_jY / amp_desired)^(1/alpha_Y) * r^(alpha_X/alpha_Y); the
    desired class's own radius is r itself.
    """
    amp_des = biased_amplitude(sys, cache, desired)
    alpha_des = sys.exponent(desired.path)
    radii = {}
    for lc in USER_CLASSES:
        if lc == desired:
            radii[lc] = r
            continue
        alpha = sys.exponent(lc.path)
        amp = biased_amplitude(sys, cache, lc)
        radii[lc] = (amp / amp_des) ** (1.0 / alpha) * r ** (alpha_des / alpha)
    return ExclusionSet(
        desired=desired, r=r,
        sbs_los=radii[LinkClass(Tier.SBS, Path.LOS)],
        sbs_nlos=radii[LinkClass(Tier.SBS, Path.NLOS)],
        mbs_los=radii[LinkClass(Tier.MBS, Path.LOS)],
        mbs_nlos=radii[LinkClass(Tier.MBS, Path.NLOS)],
    )


def void_probability(sys: SystemParams, lc: LinkClass, d: float) -> float:
    """Probability that no BS of class (tier, path) lies within distance d,
    under independent LoS/NLoS thinning of the tier's PPP."""
    lam = sys.density(lc.tier)
    return math.exp(-2.0 * math.pi * lam * radial_mass(sys, lc.path, d))


def association_density(sys: SystemParams, cache: CacheParams,
                        target: LinkClass, mode: PdfMode, r: float) -> float:
    """Joint density that the typical user's serving BS is of class `target`
    and sits at distance r (three competing-class void factors)."""
    tier = NearestTier.SBS if target.tier is Tier.SBS else NearestTier.MBS
    f = nearest_distance_pdf(sys, tier, target.path, mode, r)
    if f == 0.0:
        return 0.0
    excl = exclusion_distances(sys, cache, target, r)
    p = 1.0
    for lc in USER_CLASSES:
        if lc == target:
            continue
        p *= void_probability(sys, lc, excl.radius(lc))
    return p * f


def backhaul_association_density(sys: SystemParams, cache: CacheParams,
                                 path: Path, mode: PdfMode, r: float) -> float:
    """Joint density that a typical SBS's serving MBS uses the given path type
    and sits at distance r (one competing MBS path class)."""
    f = nearest_distance_pdf(sys, NearestTier.BACKHAUL_MBS, path, mode, r)
    if f == 0.0:
        return 0.0
    desired = LinkClass(Tier.MBS, path)
    other = LinkClass(Tier.MBS, Path.NLOS if path is Path.LOS else Path.LOS)
    excl = exclusion_distances(sys, cache, desired, r)
    return void_probability(sys, other, excl.radius(other)) * f


def integrate_radial(fn: Callable[[float], float], epsabs: float = 1e-9,
                     limit: int = 200) -> Tuple[float, float]:
    """Integrate a radial density over [0, inf), splitting at the 18 m kink.

    Returns (value, error estimate); raises QuadratureFailure if either
    panel reports non-convergence.
    """
    total, err = 0.0, 0.0
    for lo, hi in ((0.0, 18.0), (18.0, math.inf)):
        out = scipy.integrate.quad(fn, lo, hi, epsabs=epsabs, epsrel=1e-8,
                                   limit=limit, full_output=1)
        if len(out) > 3:
            raise QuadratureFailure(
                f"radial integral on [{lo}, {hi}] did not converge: {out[3]}")
        total += out[0]
        err += out[1]
    return total, err


@dataclass(frozen=True)
class AssociationMasses:
    """Per-class association probabilities for the typical user and the
    typical SBS backhaul link."""

    user: Dict[LinkClass, float]
    backhaul_los: float
    backhaul_nlos: float

    def user_total(self) -> float:
        return sum(self.user.values())

    def tier_mass(self, tier: Tier) -> float:
        return sum(v for lc, v in self.user.items() if lc.tier is tier)


def association_masses(sys: SystemParams, cache: CacheParams,
                       mode: PdfMode) -> AssociationMasses:
    """Integrate the association densities over distance.

    In THINNED mode the four user masses sum to 1 (the classes partition the
    association event); PAPER_LITERAL double-counts same-tier voids and sums
    below 1.
    """
    user = {}
    for lc in USER_CLASSES:
        if sys.density(lc.tier) == 0.0:
            user[lc] = 0.0
            continue
        val, _ = integrate_radial(
            lambda r, lc=lc: association_density(sys, cache, lc, mode, r))
        user[lc] = val
    if sys.lambda_m == 0.0:
        bh_l = bh_n = 0.0
    else:
        bh_l, _ = integrate_radial(
            lambda r: backhaul_association_density(sys, cache, Path.LOS, mode, r))
        bh_n, _ = integrate_radial(
            lambda r: backhaul_association_density(sys, cache, Path.NLOS, mode, r))
    return AssociationMasses(user=user, backhaul_los=bh_l, backhaul_nlos=bh_n)
