"""Average potential throughput (APT) of the two-tier network.

APT composes per-class coverage, the cache hit ratio, and the spectrum
partition: the MBS tier contributes lambda_m * eta*W * log2(1+gamma0) * coverage,
and each SBS (access path x, backhaul path y) case is the min of its access
term and its cache-discounted backhaul term, with 1/(1 - p_h) inflating the
backhaul capacity because only cache misses travel over it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .caching import cache_hit_ratio
from .coverage import CoverageResult, coverage_all
from .errors import ParameterError
from .params import CacheParams, Path, SpectrumPartition, SystemParams, Tier
from .propagation import PdfMode

# hit ratios this close to 1 make the backhaul unconstrained
_FULL_HIT = 1.0 - 1e-12

ACCESS_LIMITED = "access-limited"
BACKHAUL_LIMITED = "backhaul-limited"


@dataclass(frozen=True)
class SbsCase:
    """One (access path, backhaul path) throughput case of the SBS tier."""

    access_path: Path
    backhaul_path: Path
    access_term: float  # bits/s per m^2
    backhaul_term: float  # bits/s per m^2 (inf when the cache absorbs backhaul)
    value: float
    binding: str  # ACCESS_LIMITED or BACKHAUL_LIMITED


@dataclass(frozen=True)
class AptBreakdown:
    """Total APT and its tier/case decomposition, bits/s per m^2."""

    r_total: float
    r_sbs: float
    r_mbs: float
    cases: Tuple[SbsCase, SbsCase, SbsCase, SbsCase]  # (ll, ln, nl, nn)
    coverage: CoverageResult
    hit_ratio: float
    eta: float
    gamma0: float

    def case(self, access_path: Path, backhaul_path: Path) -> SbsCase:
        for c in self.cases:
            if c.access_path is access_path and c.backhaul_path is backhaul_path:
                return c
        raise KeyError((access_path, backhaul_path))


def _rate_scale(gamma0: float) -> float:
    return math.log2(1.0 + gamma0)


def apt_mbs_from_coverage(sys: SystemParams, eta: float, gamma0: float,
                          cov: CoverageResult) -> float:
    """MBS-tier APT: lambda_m * eta W * log2(1+gamma0) * (LoS + NLoS coverage)."""
    w_ac = SpectrumPartition(eta).access_bandwidth_hz(sys)
    return sys.lambda_m * w_ac * _rate_scale(gamma0) * cov.access_total(Tier.MBS)


def apt_sbs_from_coverage(sys: SystemParams, eta: float, gamma0: float,
                          cov: CoverageResult, p_h: float,
                          paper_literal_cases: bool = False
                          ) -> Tuple[SbsCase, SbsCase, SbsCase, SbsCase]:
    """Four (x, y) min-composed SBS cases.

    With paper_literal_cases=True all four cases use the LoS coverage pair,
    reproducing the printed all-LoS expressions instead of the (x, y)-matched
    combinations implied by the four-case decomposition.
    """
    if not 0.0 <= p_h <= 1.0:
        raise ParameterError(f"hit ratio must be in [0, 1], got {p_h}")
    part = SpectrumPartition(eta)
    w_ac = part.access_bandwidth_hz(sys)
    w_bh = part.backhaul_bandwidth_hz(sys)
    scale = _rate_scale(gamma0)
    access = {Path.LOS: sys.lambda_s * w_ac * scale * cov.sbs_los,
              Path.NLOS: sys.lambda_s * w_ac * scale * cov.sbs_nlos}
    if p_h >= _FULL_HIT:
        backhaul = {Path.LOS: math.inf, Path.NLOS: math.inf}
    else:
        inflate = 1.0 / (1.0 - p_h)
        backhaul = {Path.LOS: inflate * sys.lambda_m * w_bh * scale * cov.bh_los,
                    Path.NLOS: inflate * sys.lambda_m * w_bh * scale * cov.bh_nlos}
    cases = []
    for x in (Path.LOS, Path.NLOS):
        for y in (Path.LOS, Path.NLOS):
            a = access[Path.LOS] if paper_literal_cases else access[x]
            b = backhaul[Path.LOS] if paper_literal_cases else backhaul[y]
            value = min(a, b)
            binding = ACCESS_LIMITED if a <= b else BACKHAUL_LIMITED
            cases.append(SbsCase(access_path=x, backhaul_path=y, access_term=a,
                                 backhaul_term=b, value=value, binding=binding))
    return tuple(cases)


def apt_from_coverage(sys: SystemParams, cache: CacheParams, eta: float,
                      gamma0: float, cov: CoverageResult,
                      paper_literal_cases: bool = False) -> AptBreakdown:
    """Compose an APT breakdown from precomputed coverage components."""
    p_h = cache_hit_ratio(cache)
    cases = apt_sbs_from_coverage(sys, eta, gamma0, cov, p_h, paper_literal_cases)
    r_sbs = sum(c.value for c in cases)
    r_mbs = apt_mbs_from_coverage(sys, eta, gamma0, cov)
    return AptBreakdown(r_total=r_sbs + r_mbs, r_sbs=r_sbs, r_mbs=r_mbs,
                        cases=cases, coverage=cov, hit_ratio=p_h,
                        eta=eta, gamma0=gamma0)


def apt_mbs(sys: SystemParams, cache: CacheParams, eta: float, gamma0: float,
            mode: PdfMode = PdfMode.THINNED) -> float:
    """MBS-tier APT, bits/s per m^2."""
    return apt_mbs_from_coverage(sys, eta, gamma0, coverage_all(sys, cache, gamma0, mode))


def apt_sbs(sys: SystemParams, cache: CacheParams, eta: float, gamma0: float,
            mode: PdfMode = PdfMode.THINNED,
            paper_literal_cases: bool = False) -> Tuple[Tuple[SbsCase, ...], float]:
    """SBS-tier four-case breakdown and its sum, bits/s per m^2."""
    cov = coverage_all(sys, cache, gamma0, mode)
    cases = apt_sbs_from_coverage(sys, eta, gamma0, cov, cache_hit_ratio(cache),
                                  paper_literal_cases)
    return cases, sum(c.value for c in cases)


def apt_total(sys: SystemParams, cache: CacheParams, eta: float, gamma0: float,
              mode: PdfMode = PdfMode.THINNED,
              paper_literal_cases: bool = False) -> AptBreakdown:
    """Total APT breakdown at one (eta, C, gamma0) operating point."""
    cov = coverage_all(sys, cache, gamma0, mode)
    return apt_from_coverage(sys, cache, eta, gamma0, cov, paper_literal_cases)


@dataclass(frozen=True)
class EtaOptimum:
    eta_star: float
    apt_star: float
    tie: bool  # all grid values equal (degenerate objective)
    grid_eta: Tuple[float, ...]
    grid_apt: Tuple[float, ...]


def optimize_eta(sys: SystemParams, cache: CacheParams, gamma0: float,
                 grid_points: int = 41, mode: PdfMode = PdfMode.THINNED,
                 paper_literal_cases: bool = False) -> EtaOptimum:
    """Best spectrum partition for fixed cache and threshold.

    Coverage does not depend on eta, so the stack is computed once and the
    composition is optimized: uniform grid argmax, then golden-section
    refinement inside the bracketing interval. Deterministic.
    """
    if grid_points < 3:
        raise ParameterError("grid must have at least 3 points")
    cov = coverage_all(sys, cache, gamma0, mode)
    p_h = cache_hit_ratio(cache)

    def value(eta: float) -> float:
        cases = apt_sbs_from_coverage(sys, eta, gamma0, cov, p_h, paper_literal_cases)
        return sum(c.value for c in cases) + apt_mbs_from_coverage(sys, eta, gamma0, cov)

    grid = [i / (grid_points - 1) for i in range(grid_points)]
    vals = [value(e) for e in grid]
    if max(vals) == min(vals):
        return EtaOptimum(eta_star=grid[0], apt_star=vals[0], tie=True,
                          grid_eta=tuple(grid), grid_apt=tuple(vals))
    best = max(range(grid_points), key=lambda i: vals[i])
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid_points - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = value(c), value(d)
    for _ in range(80):
        if b - a < 1e-10:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = value(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = value(d)
    eta_star = (a + b) / 2.0
    apt_star = value(eta_star)
    # never return a refined point worse than the best grid point
    if apt_star < vals[best]:
        eta_star, apt_star = grid[best], vals[best]
    return EtaOptimum(eta_star=eta_star, apt_star=apt_star, tie=False,
                      grid_eta=tuple(grid), grid_apt=tuple(vals))


@dataclass(frozen=True)
class CacheOptimum:
    c_star: int
    apt_star: float
    grid_c: Tuple[int, ...]
    grid_apt: Tuple[float, ...]


def max_feasible_cache(sys: SystemParams, cache: CacheParams) -> int:
    """Largest cache size (files) leaving strictly positive SBS transmit power."""
    per_file = cache.file_size_bits * cache.w_ca
    if per_file == 0.0:
        return cache.library_size
    headroom = sys.p_tot_s - sys.p_fc_s
    limit = int(math.ceil(headroom / per_file)) - 1
    while limit >= 0 and sys.p_tot_s - sys.p_fc_s - limit * per_file <= 0:
        limit -= 1
    return max(0, min(limit, cache.library_size))


def optimize_cache(sys: SystemParams, cache_template: CacheParams, eta: float,
                   gamma0: float, mode: PdfMode = PdfMode.THINNED, step: int = 1,
                   paper_literal_cases: bool = False) -> CacheOptimum:
    """Best cache size on an integer grid over the feasible range.

    Each grid point needs a fresh coverage stack (transmit power depends on C),
    so `step` coarsens the exhaustive default for wide feasible ranges.
    """
    if step < 1:
        raise ParameterError("step must be >= 1")
    c_max = max_feasible_cache(sys, cache_template)
    grid = list(range(0, c_max + 1, step))
    if grid[-1] != c_max:
        grid.append(c_max)
    vals = []
    for c in grid:
        cch = CacheParams(library_size=cache_template.library_size, cache_size=c,
                          zipf_exponent=cache_template.zipf_exponent,
                          w_ca=cache_template.w_ca,
                          file_size_bits=cache_template.file_size_bits)
        vals.append(apt_total(sys, cch, eta, gamma0, mode, paper_literal_cases).r_total)
    best = max(range(len(grid)), key=lambda i: vals[i])
    return CacheOptimum(c_star=grid[best], apt_star=vals[best],
                        grid_c=tuple(grid), grid_apt=tuple(vals))
