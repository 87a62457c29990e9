"""System-level Monte Carlo oracle.

Samples Poisson point process realizations on a disc around a typical
receiver at the origin and applies the literal association / SINR / rate
definitions, independently of the analytical pipeline. Every estimator is
bit-reproducible: realization substreams are derived from (seed, substream)
counter pairs, and parallel execution reduces fixed-size chunks in substream
order, so results do not depend on worker count or scheduling.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .caching import cache_hit_ratio
from .errors import RejectionStarvation
from .params import (CacheParams, LinkClass, Path, SystemParams, Tier,
                     mbs_tx_power, noise_power, sbs_tx_power)
from .propagation import los_probability

# Substreams per work chunk; fixed so that worker count never affects results.
CHUNK_SUBSTREAMS = 1000
# Trials vectorized per rejection-sampler batch.
LAPLACE_BATCH = 256
# Far-field horizon. Inside r_sim the full two-path process is sampled; in
# [r_sim, r_far] only the LoS-thinned field (intensity ~ 2*pi*lambda*18 per
# meter once exp(-beta r_sim) is negligible) — the far NLoS field is ~40
# orders below the inner interference. The LoS tail decays only like
# t^-(alpha_L - 1), so a bare 3 km window would clip up to ~15% of the
# interference Laplace exponent.
R_FAR_DEFAULT = 3e5


def _far_field_active(beta: float, r_sim: float) -> bool:
    # exp(-beta * r_sim) <= 2e-9: the LoS far-field intensity is 18/t * t
    # to double precision and the uniform-radius shortcut is exact
    return beta * r_sim >= 20.0

_CLASSES = LinkClass.all_classes()
_CLASS_INDEX = {lc: i for i, lc in enumerate(_CLASSES)}


def _rng(seed: int, *stream) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, *stream))))


@dataclass(frozen=True)
class McEstimate:
    """Point estimate with its standard error (NaN-flagged when n == 1)."""

    value: float
    stderr: float
    n: int
    seed: int


@dataclass(frozen=True)
class PppRealization:
    """One sampled network around receivers at the origin.

    Points within r_sim carry the full per-link blockage draw; beyond it, up
    to r_far, only the LoS-thinned far field is kept (its members are LoS by
    construction for every origin receiver). Blockage states are drawn once
    per (BS, receiver) link and reused for both signal and interference
    roles; `bh_los`/`bh_fade` are the MBS links seen by a typical SBS at the
    origin.
    """

    seed: int
    substream: int
    r_sim: float
    r_far: float
    sbs_xy: np.ndarray
    mbs_xy: np.ndarray
    sbs_r: np.ndarray
    mbs_r: np.ndarray
    sbs_los: np.ndarray
    mbs_los: np.ndarray
    sbs_fade: np.ndarray
    mbs_fade: np.ndarray
    bh_los: np.ndarray
    bh_fade: np.ndarray


def _far_los_count_rate(lam: float, r_sim: float, r_far: float) -> float:
    """Expected LoS-thinned point count per tier in [r_sim, r_far]."""
    return 2.0 * math.pi * lam * 18.0 * max(r_far - r_sim, 0.0)


def sample_realization(sys: SystemParams, r_sim: float, seed: int,
                       substream: int, r_far: float = R_FAR_DEFAULT) -> PppRealization:
    """Draw one PPP realization; bit-identical for equal (seed, substream)."""
    rng = _rng(seed, substream)
    area = math.pi * r_sim * r_sim
    n_s = rng.poisson(sys.lambda_s * area)
    n_m = rng.poisson(sys.lambda_m * area)

    def _points(n, radii=None):
        if radii is None:
            radii = r_sim * np.sqrt(rng.random(n))
        theta = 2.0 * math.pi * rng.random(n)
        return np.column_stack((radii * np.cos(theta), radii * np.sin(theta))), radii

    sbs_xy, sbs_r = _points(n_s)
    mbs_xy, mbs_r = _points(n_m)
    sbs_los = rng.random(n_s) < los_probability(sys, sbs_r)
    mbs_los = rng.random(n_m) < los_probability(sys, mbs_r)
    sbs_fade = rng.exponential(1.0, n_s)
    mbs_fade = rng.exponential(1.0, n_m)
    bh_los = rng.random(n_m) < los_probability(sys, mbs_r)
    bh_fade = rng.exponential(1.0, n_m)

    if _far_field_active(sys.beta, r_sim) and r_far > r_sim:
        far = []
        for lam in (sys.lambda_s, sys.lambda_m):
            k = rng.poisson(_far_los_count_rate(lam, r_sim, r_far))
            radii = r_sim + (r_far - r_sim) * rng.random(k)
            xy, radii = _points(k, radii=radii)
            far.append((xy, radii, rng.exponential(1.0, k), rng.exponential(1.0, k)))
        (sxy, sr, sf, _), (mxy, mr, mf, mbf) = far
        ones_s = np.ones(sr.size, dtype=bool)
        ones_m = np.ones(mr.size, dtype=bool)
        sbs_xy = np.vstack((sbs_xy, sxy))
        sbs_r = np.concatenate((sbs_r, sr))
        sbs_los = np.concatenate((sbs_los, ones_s))
        sbs_fade = np.concatenate((sbs_fade, sf))
        mbs_xy = np.vstack((mbs_xy, mxy))
        mbs_r = np.concatenate((mbs_r, mr))
        mbs_los = np.concatenate((mbs_los, ones_m))
        mbs_fade = np.concatenate((mbs_fade, mf))
        bh_los = np.concatenate((bh_los, ones_m))
        bh_fade = np.concatenate((bh_fade, mbf))

    return PppRealization(seed=seed, substream=substream, r_sim=r_sim, r_far=r_far,
                          sbs_xy=sbs_xy, mbs_xy=mbs_xy, sbs_r=sbs_r, mbs_r=mbs_r,
                          sbs_los=sbs_los, mbs_los=mbs_los,
                          sbs_fade=sbs_fade, mbs_fade=mbs_fade,
                          bh_los=bh_los, bh_fade=bh_fade)


def _biased_powers(r: np.ndarray, los: np.ndarray, amp_los: float,
                   amp_nlos: float, a_los: float, a_nlos: float) -> np.ndarray:
    """amp_X * r^-alpha_X with per-link path selection (no fading)."""
    alpha = np.where(los, a_los, a_nlos)
    amp = np.where(los, amp_los, amp_nlos)
    with np.errstate(divide="ignore"):
        return amp * r ** -alpha


@dataclass
class _Consts:
    p_s: float
    p_m: float
    n0: float
    amp_s_l: float
    amp_s_n: float
    amp_m_l: float
    amp_m_n: float

    @staticmethod
    def of(sys: SystemParams, cache: CacheParams) -> "_Consts":
        p_s = sbs_tx_power(sys, cache)
        p_m = mbs_tx_power(sys, cache)
        return _Consts(
            p_s=p_s, p_m=p_m, n0=noise_power(sys),
            amp_s_l=p_s * sys.bias_s * sys.a_los,
            amp_s_n=p_s * sys.bias_s * sys.a_nlos,
            amp_m_l=p_m * sys.bias_m * sys.a_los,
            amp_m_n=p_m * sys.bias_m * sys.a_nlos,
        )


def _class_of(is_sbs: bool, is_los: bool) -> int:
    return (0 if is_los else 1) if is_sbs else (2 if is_los else 3)


def _coverage_chunk(args) -> Dict[str, np.ndarray]:
    """Accumulate association/coverage counts over one substream chunk."""
    sys, cache, gammas, r_sim, r_far, seed, start, stop = args
    k = _Consts.of(sys, cache)
    ng = len(gammas)
    gam = np.asarray(gammas, dtype=float)
    assoc = np.zeros(4, dtype=np.int64)
    cover = np.zeros((4, ng), dtype=np.int64)
    bh_assoc = np.zeros(2, dtype=np.int64)
    bh_cover = np.zeros((2, ng), dtype=np.int64)
    skipped = 0
    bh_skipped = 0
    for sub in range(start, stop):
        real = sample_realization(sys, r_sim, seed, sub, r_far)
        p_s = _biased_powers(real.sbs_r, real.sbs_los, k.amp_s_l, k.amp_s_n,
                             sys.alpha_los, sys.alpha_nlos)
        p_m = _biased_powers(real.mbs_r, real.mbs_los, k.amp_m_l, k.amp_m_n,
                             sys.alpha_los, sys.alpha_nlos)
        n_s = p_s.size
        if n_s + p_m.size == 0:
            skipped += 1
        else:
            powers = np.concatenate((p_s, p_m))  # SBS first: ties go to the SBS tier
            i = int(np.argmax(powers))
            is_sbs = i < n_s
            is_los = bool(real.sbs_los[i]) if is_sbs else bool(real.mbs_los[i - n_s])
            ci = _class_of(is_sbs, is_los)
            assoc[ci] += 1
            if ng:
                fades = np.concatenate((real.sbs_fade, real.mbs_fade))
                rx = powers * fades
                sig = rx[i]
                sinr = sig / (rx.sum() - sig + k.n0)
                cover[ci] += sinr >= gam
        # backhaul link of a typical SBS at the origin (MBS field only)
        if p_m.size == 0:
            bh_skipped += 1
        else:
            bp = _biased_powers(real.mbs_r, real.bh_los, k.amp_m_l, k.amp_m_n,
                                sys.alpha_los, sys.alpha_nlos)
            j = int(np.argmax(bp))
            yi = 0 if real.bh_los[j] else 1
            bh_assoc[yi] += 1
            if ng:
                rx = bp * real.bh_fade
                sig = rx[j]
                sinr = sig / (rx.sum() - sig + k.n0)
                bh_cover[yi] += sinr >= gam
    return {"assoc": assoc, "cover": cover, "bh_assoc": bh_assoc,
            "bh_cover": bh_cover,
            "skipped": np.array([skipped, bh_skipped], dtype=np.int64)}


def _run_chunks(fn, n: int, workers: int, make_args):
    chunks = [(s, min(s + CHUNK_SUBSTREAMS, n)) for s in range(0, n, CHUNK_SUBSTREAMS)]
    arglist = [make_args(s, e) for s, e in chunks]
    if workers <= 1 or len(chunks) == 1:
        return [fn(a) for a in arglist]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, arglist))


def _binomial(count: int, n: int, seed: int) -> McEstimate:
    if n < 1:
        return McEstimate(math.nan, math.nan, n, seed)
    p = count / n
    se = math.sqrt(p * (1.0 - p) / n) if n > 1 else math.nan
    return McEstimate(p, se, n, seed)


@dataclass(frozen=True)
class McCoverageResult:
    """Empirical association fractions and unconditional per-class coverage.

    Coverage entries are P(association class AND SINR >= gamma), the same
    unconditional quantities the analytical coverage integrals produce.
    """

    gammas: Tuple[float, ...]
    assoc: Dict[LinkClass, McEstimate]
    coverage: Dict[LinkClass, Tuple[McEstimate, ...]]
    bh_assoc: Dict[Path, McEstimate]
    bh_coverage: Dict[Path, Tuple[McEstimate, ...]]
    n: int
    n_skipped: int
    n_bh_skipped: int
    seed: int


def mc_coverage(sys: SystemParams, cache: CacheParams, gammas: Sequence[float],
                n: int, r_sim: float, seed: int, workers: int = 1,
                r_far: float = R_FAR_DEFAULT) -> McCoverageResult:
    """Estimate association fractions and SINR coverage on a gamma grid."""
    if n < 1:
        raise ValueError("need n >= 1 realizations")
    parts = _run_chunks(_coverage_chunk, n, workers,
                        lambda s, e: (sys, cache, tuple(gammas), r_sim, r_far, seed, s, e))
    assoc = sum(p["assoc"] for p in parts)
    cover = sum(p["cover"] for p in parts)
    bh_assoc = sum(p["bh_assoc"] for p in parts)
    bh_cover = sum(p["bh_cover"] for p in parts)
    skipped, bh_skipped = (sum(p["skipped"] for p in parts)).tolist()
    n_valid = n - skipped
    n_bh = n - bh_skipped
    return McCoverageResult(
        gammas=tuple(gammas),
        assoc={lc: _binomial(int(assoc[i]), n_valid, seed)
               for i, lc in enumerate(_CLASSES)},
        coverage={lc: tuple(_binomial(int(c), n_valid, seed) for c in cover[i])
                  for i, lc in enumerate(_CLASSES)},
        bh_assoc={Path.LOS: _binomial(int(bh_assoc[0]), n_bh, seed),
                  Path.NLOS: _binomial(int(bh_assoc[1]), n_bh, seed)},
        bh_coverage={Path.LOS: tuple(_binomial(int(c), n_bh, seed) for c in bh_cover[0]),
                     Path.NLOS: tuple(_binomial(int(c), n_bh, seed) for c in bh_cover[1])},
        n=n, n_skipped=int(skipped), n_bh_skipped=int(bh_skipped), seed=seed)


def mc_association(sys: SystemParams, cache: CacheParams, n: int, r_sim: float,
                   seed: int, workers: int = 1,
                   r_far: float = R_FAR_DEFAULT) -> McCoverageResult:
    """Association fractions only (empty gamma grid)."""
    return mc_coverage(sys, cache, (), n, r_sim, seed, workers, r_far)


def _apt_chunk(args) -> Dict[str, np.ndarray]:
    """Coverage counts at a single threshold for the APT estimator.

    Backhaul indicators are sampled on cache-miss realizations only
    (Bernoulli(1 - p_h) marks, independent of everything else) and evaluate
    the typical-SBS-at-origin link, the exact quantity the throughput
    composition consumes. Conditioning the backhaul on the *user's* SBS
    association instead would couple it to the MBS field (a user joins the
    SBS tier precisely when MBSs are weak at the origin) and depress the
    estimate by 10-30% at baseline parameters; that correlation is a modeling
    gap of the marginal composition itself, not of either engine.
    """
    sys, cache, gamma0, p_h, r_sim, r_far, seed, start, stop = args
    k = _Consts.of(sys, cache)
    sample_bh = p_h < 1.0 - 1e-12
    assoc = np.zeros(4, dtype=np.int64)
    cover = np.zeros(4, dtype=np.int64)
    miss = 0
    bh_cover = np.zeros(2, dtype=np.int64)
    skipped = 0
    for sub in range(start, stop):
        real = sample_realization(sys, r_sim, seed, sub, r_far)
        p_s = _biased_powers(real.sbs_r, real.sbs_los, k.amp_s_l, k.amp_s_n,
                             sys.alpha_los, sys.alpha_nlos)
        p_m = _biased_powers(real.mbs_r, real.mbs_los, k.amp_m_l, k.amp_m_n,
                             sys.alpha_los, sys.alpha_nlos)
        n_s = p_s.size
        if n_s + p_m.size == 0:
            skipped += 1
        else:
            powers = np.concatenate((p_s, p_m))
            i = int(np.argmax(powers))
            is_sbs = i < n_s
            is_los = bool(real.sbs_los[i]) if is_sbs else bool(real.mbs_los[i - n_s])
            ci = _class_of(is_sbs, is_los)
            assoc[ci] += 1
            fades = np.concatenate((real.sbs_fade, real.mbs_fade))
            rx = powers * fades
            sig = rx[i]
            if sig / (rx.sum() - sig + k.n0) >= gamma0:
                cover[ci] += 1
        if sample_bh and _rng(seed, sub, 0xB).random() < 1.0 - p_h:
            miss += 1
            if real.mbs_r.size:
                bp = _biased_powers(real.mbs_r, real.bh_los, k.amp_m_l, k.amp_m_n,
                                    sys.alpha_los, sys.alpha_nlos)
                j = int(np.argmax(bp))
                rx2 = bp * real.bh_fade
                sig2 = rx2[j]
                if sig2 / (rx2.sum() - sig2 + k.n0) >= gamma0:
                    bh_cover[0 if real.bh_los[j] else 1] += 1
    return {"assoc": assoc, "cover": cover,
            "miss": np.array([miss, skipped], dtype=np.int64),
            "bh_cover": bh_cover}


@dataclass(frozen=True)
class McAptResult:
    """Empirical coverage inputs of the throughput composition."""

    access_cover: Dict[LinkClass, McEstimate]  # P(class and SINR >= gamma0)
    bh_cover: Dict[Path, McEstimate]  # P(bh path and covered), miss-sampled
    n: int
    n_miss: int
    seed: int


def mc_apt_coverage(sys: SystemParams, cache: CacheParams, gamma0: float,
                    n: int, r_sim: float, seed: int, workers: int = 1,
                    r_far: float = R_FAR_DEFAULT) -> McAptResult:
    """Flow-level coverage estimates feeding the APT composition."""
    p_h = cache_hit_ratio(cache)
    parts = _run_chunks(_apt_chunk, n, workers,
                        lambda s, e: (sys, cache, gamma0, p_h, r_sim, r_far, seed, s, e))
    cover = sum(p["cover"] for p in parts)
    bh_cover = sum(p["bh_cover"] for p in parts)
    miss = int(sum(int(p["miss"][0]) for p in parts))
    skipped = int(sum(int(p["miss"][1]) for p in parts))
    n_valid = n - skipped
    return McAptResult(
        access_cover={lc: _binomial(int(cover[i]), n_valid, seed)
                      for i, lc in enumerate(_CLASSES)},
        bh_cover={Path.LOS: _binomial(int(bh_cover[0]), miss, seed),
                  Path.NLOS: _binomial(int(bh_cover[1]), miss, seed)},
        n=n_valid, n_miss=miss, seed=seed)


@dataclass(frozen=True)
class McApt:
    """Monte Carlo APT: the min-composition applied to empirical coverage."""

    breakdown: "object"  # apt.AptBreakdown
    estimates: McAptResult


def mc_apt(sys: SystemParams, cache: CacheParams, eta: float, gamma0: float,
           n: int, r_sim: float, seed: int, workers: int = 1,
           r_far: float = R_FAR_DEFAULT) -> McApt:
    """Estimate the APT breakdown from realizations at threshold gamma0.

    Coverage probabilities are estimated empirically (flow-level sampling);
    the deterministic throughput composition they feed is shared with the
    analytical engine, so this validates the coverage distributions.
    """
    from .apt import apt_from_coverage
    from .coverage import CoverageResult

    est = mc_apt_coverage(sys, cache, gamma0, n, r_sim, seed, workers, r_far)

    def _val(e: McEstimate) -> float:
        return 0.0 if math.isnan(e.value) else e.value

    cov = CoverageResult(
        gamma=gamma0,
        sbs_los=_val(est.access_cover[LinkClass(Tier.SBS, Path.LOS)]),
        sbs_nlos=_val(est.access_cover[LinkClass(Tier.SBS, Path.NLOS)]),
        mbs_los=_val(est.access_cover[LinkClass(Tier.MBS, Path.LOS)]),
        mbs_nlos=_val(est.access_cover[LinkClass(Tier.MBS, Path.NLOS)]),
        bh_los=_val(est.bh_cover[Path.LOS]),
        bh_nlos=_val(est.bh_cover[Path.NLOS]))
    return McApt(breakdown=apt_from_coverage(sys, cache, eta, gamma0, cov),
                 estimates=est)


def mc_laplace(sys: SystemParams, cache: CacheParams, desired: LinkClass,
               r: float, s: float, n: int, seed: int, r_sim: float = 3000.0,
               min_rate: float = 1e-4, r_far: float = R_FAR_DEFAULT) -> McEstimate:
    """Estimate E[exp(-s I)] conditioned on association with `desired` at
    radius r, by rejection sampling on the association condition.

    Interference I sums the biased received powers (with Rayleigh fading) of
    every sampled BS (including the LoS far field out to r_far); a trial is
    accepted when no sampled BS beats the desired link's biased power, i.e.
    the literal association event.
    """
    if n < 1:
        raise ValueError("need n >= 1 accepted realizations")
    k = _Consts.of(sys, cache)
    amp_des = (k.p_s * sys.bias_s if desired.tier is Tier.SBS
               else k.p_m * sys.bias_m) * sys.intercept(desired.path)
    q = amp_des * r ** -sys.exponent(desired.path)
    area = math.pi * r_sim * r_sim
    rng = _rng(seed, 0xACCE)
    vals = []
    trials = 0
    accepted = 0
    far_on = _far_field_active(sys.beta, r_sim) and r_far > r_sim

    def _segments(counts, p, fade):
        p_aug = np.append(p, 0.0)
        ph_aug = np.append(p * fade, 0.0)
        starts = np.concatenate(([0], np.cumsum(counts)))[:-1].astype(np.intp)
        seg_max = np.maximum.reduceat(p_aug, starts)
        seg_sum = np.add.reduceat(ph_aug, starts)
        empty = counts == 0
        seg_max[empty] = 0.0
        seg_sum[empty] = 0.0
        return seg_max, seg_sum

    def _tier_batch(b, lam, amp_l, amp_n):
        counts = rng.poisson(lam * area, b)
        total = int(counts.sum())
        radii = r_sim * np.sqrt(rng.random(total))
        los = rng.random(total) < los_probability(sys, radii)
        fade = rng.exponential(1.0, total)
        p = _biased_powers(radii, los, amp_l, amp_n, sys.alpha_los, sys.alpha_nlos)
        seg_max, seg_sum = _segments(counts, p, fade)
        if far_on and lam > 0.0:
            fc = rng.poisson(_far_los_count_rate(lam, r_sim, r_far), b)
            ftotal = int(fc.sum())
            fradii = r_sim + (r_far - r_sim) * rng.random(ftotal)
            ffade = rng.exponential(1.0, ftotal)
            fp = amp_l * fradii ** -sys.alpha_los
            fmax, fsum = _segments(fc, fp, ffade)
            seg_max = np.maximum(seg_max, fmax)
            seg_sum = seg_sum + fsum
        return seg_max, seg_sum

    while accepted < n:
        b = LAPLACE_BATCH
        max_s, sum_s = _tier_batch(b, sys.lambda_s, k.amp_s_l, k.amp_s_n)
        max_m, sum_m = _tier_batch(b, sys.lambda_m, k.amp_m_l, k.amp_m_n)
        ok = (max_s < q) & (max_m < q)
        batch_vals = np.exp(-s * (sum_s[ok] + sum_m[ok]))
        take = min(batch_vals.size, n - accepted)
        vals.append(batch_vals[:take])
        accepted += take
        trials += b
        if trials >= 10_000 and (accepted + (batch_vals.size - take)) / trials < min_rate:
            raise RejectionStarvation(
                f"acceptance rate below {min_rate} after {trials} trials "
                f"(desired {desired} at r={r} m)")
    allv = np.concatenate(vals) if vals else np.array([])
    value = float(np.mean(allv))
    stderr = float(np.std(allv, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return McEstimate(value=value, stderr=stderr, n=n, seed=seed)


def write_golden_csv(result: McCoverageResult, path, gammas_db: Optional[Sequence[float]] = None):
    """Persist a coverage run in the golden-file layout:
    (quantity, class, gamma_db, estimate, stderr, n, seed)."""
    db = list(gammas_db) if gammas_db is not None else [
        10.0 * math.log10(g) if g > 0 else -math.inf for g in result.gammas]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "class", "gamma_db", "estimate", "stderr", "n", "seed"])
        for lc in _CLASSES:
            e = result.assoc[lc]
            w.writerow(["assoc", str(lc), "", repr(e.value), repr(e.stderr), e.n, e.seed])
        for lc in _CLASSES:
            for g, e in zip(db, result.coverage[lc]):
                w.writerow(["coverage", str(lc), repr(float(g)), repr(e.value),
                            repr(e.stderr), e.n, e.seed])
        for p_, name in ((Path.LOS, "bh_los"), (Path.NLOS, "bh_nlos")):
            e = result.bh_assoc[p_]
            w.writerow(["bh_assoc", name, "", repr(e.value), repr(e.stderr), e.n, e.seed])
            for g, ce in zip(db, result.bh_coverage[p_]):
                w.writerow(["bh_coverage", name, repr(float(g)), repr(ce.value),
                            repr(ce.stderr), ce.n, ce.seed])
