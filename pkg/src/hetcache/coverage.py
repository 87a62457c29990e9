"""Interference Laplace transforms and SINR coverage probabilities.

Coverage of a link of class (k, X) served at distance r under Rayleigh
fading integrates
    exp(-s N0) * L_I(s) * F_k^X(r)   with   s = gamma r^alpha_X / (P_k B_k A_X)
over r, where L_I is the product over interfering classes of the thinned-PPP
Laplace functional restricted outside each class's exclusion radius. Access
links see both tiers; the SBS<-MBS backhaul link sees only other MBSs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import scipy.integrate

from .association import (BACKHAUL_CLASSES, USER_CLASSES, association_density,
                          backhaul_association_density, biased_amplitude,
                          exclusion_distances)
from .errors import QuadratureFailure
from .params import CacheParams, LinkClass, Path, SystemParams, Tier, noise_power
from .propagation import PdfMode, los_probability, nlos_probability

# Inner (Laplace exponent) tolerances: the exponent is 2*pi*lambda*J with
# lambda ~ 1e-4..1e-5, so absolute errors of 1e-4 on J are invisible.
_INNER_EPSABS = 1e-6
_INNER_EPSREL = 1e-7
_OUTER_EPSABS = 1e-6


def _tail_bound(path: Path, c: float, d: float, alpha: float) -> float:
    """Analytic upper bound on the interference mass beyond d.

    Uses P_L(t) <= 18/t and P_NL(t) <= 1 with c*t/(t^alpha + c) <= c*t^(1-alpha).
    """
    if path is Path.LOS:
        return 18.0 * c * d ** (1.0 - alpha) / (alpha - 1.0)
    if alpha <= 2.0:
        return math.inf
    return c * d ** (2.0 - alpha) / (alpha - 2.0)


def _asymptotic_tail(sys: SystemParams, path: Path, c: float, s_cut: float,
                     alpha: float) -> float:
    """int_{s_cut}^inf of the interference integrand, second-order asymptotics.

    Valid once c * s_cut^-alpha <= ~1e-3 and exp(-beta*s_cut) is negligible:
    P_L(t) ~ 18/t (or 1 when beta == 0), P_NL(t) ~ 1 - 18/t, and the kernel
    expands as c t^-alpha (1 - c t^-alpha + ...). Relative error ~1e-6.
    """
    los_flat = sys.beta == 0.0  # unblocked network: P_L is identically 1
    if path is Path.LOS:
        if los_flat:
            if alpha <= 2.0:
                return math.inf  # non-integrable interference field
            return c * (s_cut ** (2.0 - alpha) / (alpha - 2.0)
                        - c * s_cut ** (2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0))
        return 18.0 * c * (s_cut ** (1.0 - alpha) / (alpha - 1.0)
                           - c * s_cut ** (1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0))
    if los_flat:
        return 0.0  # P_NL is identically 0
    if alpha <= 2.0:
        return math.inf
    return c * (s_cut ** (2.0 - alpha) / (alpha - 2.0)
                - 18.0 * s_cut ** (1.0 - alpha) / (alpha - 1.0)
                - c * s_cut ** (2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0))


def _interference_mass(sys: SystemParams, path: Path, c: float, d: float,
                       alpha: float) -> float:
    """int_d^inf P_Y(t) * c*t / (t^alpha + c) dt for one interferer class.

    c = s * P_j B_j A_Y. The NLoS integrand vanishes below 18 m. Quadrature
    runs on a finite range split at the blockage kink (18 m) and the kernel
    knee (~c^(1/alpha)); past the asymptotic cut the tail is closed-form.
    """
    if c == 0.0:
        return 0.0
    if path is Path.LOS:
        prob = lambda t: los_probability(sys, t)
        lo = d
    else:
        prob = lambda t: nlos_probability(sys, t)
        lo = max(d, 18.0)
    if lo >= 18.0:
        bound = _tail_bound(path, c, lo, alpha)
        if bound < 1e-9:
            # negligible against the 1e-4 exponent scale; skip the quadrature
            return bound

    # asymptotic cut: kernel expansion error ~(1e-3)^2 and blockage
    # exponential below 1e-12
    s_cut = max(36.0, 2.0 * lo, (1e3 * c) ** (1.0 / alpha))
    if sys.beta > 0.0:
        s_cut = max(s_cut, 27.7 / sys.beta)
    tail = _asymptotic_tail(sys, path, c, s_cut, alpha)
    if not math.isfinite(tail):
        return math.inf

    def f(t):
        return prob(t) * c * t / (t ** alpha + c)

    knee = 2.0 * c ** (1.0 / alpha)
    cuts = sorted({x for x in (18.0, knee) if lo < x < s_cut})
    edges = [lo, *cuts, s_cut]
    total = tail
    for a, b in zip(edges[:-1], edges[1:]):
        out = scipy.integrate.quad(f, a, b, epsabs=_INNER_EPSABS,
                                   epsrel=_INNER_EPSREL, limit=200, full_output=1)
        val, abserr = out[0], out[1]
        if len(out) > 3 and abserr > max(10.0 * _INNER_EPSABS, 1e-3 * abs(val)):
            # tolerate flagged panels whose estimated error is still
            # negligible on the exponent scale
            raise QuadratureFailure(
                f"interference integral on [{a}, {b}] did not converge: {out[3]}")
        total += val
    return total


def laplace_interference(sys: SystemParams, cache: CacheParams,
                         desired: LinkClass, r: float, s: float,
                         backhaul: bool = False) -> float:
    """Laplace transform E[exp(-s I)] of the aggregate interference seen by a
    link of class `desired` served at distance r, conditioned on association.

    Interferers of class (j, Y) are a thinned PPP outside the exclusion
    radius d_jY(r); Rayleigh fading gives the 1/(1 + s P B A t^-alpha) kernel.
    """
    if s < 0:
        raise ValueError("Laplace argument s must be >= 0")
    if s == 0.0:
        return 1.0
    excl = exclusion_distances(sys, cache, desired, r)
    classes = BACKHAUL_CLASSES if backhaul else USER_CLASSES
    exponent = 0.0
    for lc in classes:
        lam = sys.density(lc.tier)
        if lam == 0.0:
            continue
        c = s * biased_amplitude(sys, cache, lc)
        j = _interference_mass(sys, lc.path, c, excl.radius(lc), sys.exponent(lc.path))
        exponent += 2.0 * math.pi * lam * j
        if exponent > 745.0:  # exp() underflow: interference certainly kills the link
            return 0.0
    return math.exp(-exponent)


@dataclass(frozen=True)
class CoverageResult:
    """Unconditional per-class coverage P(class AND SINR >= gamma) at one
    threshold, plus outer-quadrature error estimates."""

    gamma: float  # linear SINR threshold
    sbs_los: float
    sbs_nlos: float
    mbs_los: float
    mbs_nlos: float
    bh_los: float
    bh_nlos: float
    err_access: float = 0.0
    err_backhaul: float = 0.0

    def access(self, tier: Tier) -> Tuple[float, float]:
        if tier is Tier.SBS:
            return self.sbs_los, self.sbs_nlos
        return self.mbs_los, self.mbs_nlos

    def backhaul(self) -> Tuple[float, float]:
        return self.bh_los, self.bh_nlos

    def access_total(self, tier: Tier) -> float:
        return sum(self.access(tier))


def _coverage_integral(sys: SystemParams, cache: CacheParams, desired: LinkClass,
                       gamma: float, mode: PdfMode, backhaul: bool) -> Tuple[float, float]:
    """One coverage component: integrate noise * Laplace * association density."""
    lam = sys.lambda_m if (backhaul or desired.tier is Tier.MBS) else sys.lambda_s
    if lam == 0.0:
        return 0.0, 0.0
    amp = biased_amplitude(sys, cache, desired)
    alpha = sys.exponent(desired.path)
    n0 = noise_power(sys)

    def dens(r: float) -> float:
        if backhaul:
            return backhaul_association_density(sys, cache, desired.path, mode, r)
        return association_density(sys, cache, desired, mode, r)

    def f(r: float) -> float:
        fr = dens(r)
        if fr < 1e-22:  # association-density tail: contributes < 1e-14 mass
            return 0.0
        s = gamma * r ** alpha / amp
        noise_term = math.exp(-s * n0)
        if noise_term == 0.0:
            return 0.0
        return noise_term * laplace_interference(sys, cache, desired, r, s,
                                                 backhaul=backhaul) * fr

    total, err = 0.0, 0.0
    for lo, hi in ((0.0, 18.0), (18.0, math.inf)):
        out = scipy.integrate.quad(f, lo, hi, epsabs=_OUTER_EPSABS, epsrel=1e-7,
                                   limit=200, full_output=1)
        if len(out) > 3:
            raise QuadratureFailure(
                f"coverage integral for {desired} on [{lo}, {hi}] "
                f"did not converge: {out[3]}")
        total += out[0]
        err += out[1]
    return total, err


def coverage_access(sys: SystemParams, cache: CacheParams, tier: Tier,
                    gamma: float, mode: PdfMode = PdfMode.THINNED) -> Tuple[float, float]:
    """(LoS, NLoS) coverage of the typical user served by the given tier."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0 (linear)")
    p_l, _ = _coverage_integral(sys, cache, LinkClass(tier, Path.LOS), gamma, mode, False)
    p_n, _ = _coverage_integral(sys, cache, LinkClass(tier, Path.NLOS), gamma, mode, False)
    return p_l, p_n


def coverage_backhaul(sys: SystemParams, cache: CacheParams, gamma: float,
                      mode: PdfMode = PdfMode.THINNED) -> Tuple[float, float]:
    """(LoS, NLoS) coverage of the typical SBS's backhaul link from its MBS."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0 (linear)")
    p_l, _ = _coverage_integral(sys, cache, LinkClass(Tier.MBS, Path.LOS), gamma, mode, True)
    p_n, _ = _coverage_integral(sys, cache, LinkClass(Tier.MBS, Path.NLOS), gamma, mode, True)
    return p_l, p_n


@lru_cache(maxsize=4096)
def coverage_all(sys: SystemParams, cache: CacheParams, gamma: float,
                 mode: PdfMode = PdfMode.THINNED) -> CoverageResult:
    """All six coverage components at one threshold (memoized; the inputs are
    immutable). This is the quantity stack the throughput layer consumes."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0 (linear)")
    comps = {}
    err_acc = 0.0
    for lc in USER_CLASSES:
        v, e = _coverage_integral(sys, cache, lc, gamma, mode, False)
        comps[str(lc)] = v
        err_acc += e
    bh_l, e_l = _coverage_integral(sys, cache, LinkClass(Tier.MBS, Path.LOS),
                                   gamma, mode, True)
    bh_n, e_n = _coverage_integral(sys, cache, LinkClass(Tier.MBS, Path.NLOS),
                                   gamma, mode, True)
    return CoverageResult(
        gamma=gamma,
        sbs_los=comps["sbs_los"], sbs_nlos=comps["sbs_nlos"],
        mbs_los=comps["mbs_los"], mbs_nlos=comps["mbs_nlos"],
        bh_los=bh_l, bh_nlos=bh_n,
        err_access=err_acc, err_backhaul=e_l + e_n)
