"""Throughput analysis for two-tier cache-enabled mmWave networks whose
access and backhaul links share one band.

Analytical stochastic-geometry engine (association, coverage, throughput)
plus an independent Monte Carlo point-process oracle and a sweep CLI.
"""
from .apt import (AptBreakdown, CacheOptimum, EtaOptimum, SbsCase, apt_mbs,
                  apt_sbs, apt_total, max_feasible_cache, optimize_cache,
                  optimize_eta)
from .association import (AssociationMasses, ExclusionSet, association_density,
                          association_masses, backhaul_association_density,
                          exclusion_distances)
from .caching import PopularityProfile, cache_hit_ratio, zipf_popularity
from .config import (RunConfig, SweepSpec, default_cache, default_system,
                     load_config)
from .coverage import (CoverageResult, coverage_access, coverage_all,
                       coverage_backhaul, laplace_interference)
from .errors import (ConfigError, IndexOutOfLibrary, NegativeDistance,
                     NonPositiveTxPower, ParameterError, QuadratureFailure,
                     RejectionStarvation, ZeroDistance)
from .montecarlo import (McCoverageResult, McEstimate, PppRealization,
                         mc_association, mc_coverage, mc_laplace,
                         sample_realization)
from .params import (CacheParams, ConstantWatts, LinkClass, Path,
                     SpectrumPartition, SystemParams, ThermalPlusNoiseFigure,
                     Tier, mbs_tx_power, noise_power, sbs_tx_power)
from .propagation import (NearestTier, PathSample, PdfMode, los_probability,
                          nearest_distance_pdf, nlos_probability, path_loss)

__version__ = "0.1.0"

__all__ = [
    "AptBreakdown", "AssociationMasses", "CacheOptimum", "CacheParams",
    "ConfigError", "ConstantWatts", "CoverageResult", "EtaOptimum",
    "ExclusionSet", "IndexOutOfLibrary", "LinkClass", "McCoverageResult",
    "McEstimate", "NearestTier", "NegativeDistance", "NonPositiveTxPower",
    "ParameterError", "Path", "PathSample", "PdfMode", "PopularityProfile",
    "PppRealization", "QuadratureFailure", "RejectionStarvation", "RunConfig",
    "SbsCase", "SpectrumPartition", "SweepSpec", "SystemParams",
    "ThermalPlusNoiseFigure", "Tier", "ZeroDistance",
    "apt_mbs", "apt_sbs", "apt_total", "association_density",
    "association_masses", "backhaul_association_density", "cache_hit_ratio",
    "coverage_access", "coverage_all", "coverage_backhaul", "default_cache",
    "default_system", "exclusion_distances", "laplace_interference",
    "load_config", "los_probability", "max_feasible_cache", "mbs_tx_power",
    "mc_association", "mc_coverage", "mc_laplace", "nearest_distance_pdf",
    "nlos_probability", "noise_power", "optimize_cache", "optimize_eta",
    "path_loss", "sample_realization", "sbs_tx_power", "zipf_popularity",
]
