"""Network configuration types and the cache-aware transmit power model.

All internal computation is in SI units (watts, hertz, meters). dB and dBm
values appear only at configuration and reporting boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .errors import NonPositiveTxPower, ParameterError


class Tier(Enum):
    SBS = "sbs"
    MBS = "mbs"


class Path(Enum):
    LOS = "los"
    NLOS = "nlos"


@dataclass(frozen=True)
class LinkClass:
    """(tier, path) tag: one of the four BS classes a link can belong to."""

    tier: Tier
    path: Path

    @staticmethod
    def all_classes() -> tuple["LinkClass", ...]:
        return (
            LinkClass(Tier.SBS, Path.LOS),
            LinkClass(Tier.SBS, Path.NLOS),
            LinkClass(Tier.MBS, Path.LOS),
            LinkClass(Tier.MBS, Path.NLOS),
        )

    def __str__(self) -> str:
        return f"{self.tier.value}_{self.path.value}"


@dataclass(frozen=True)
class ConstantWatts:
    """Noise floor given directly in watts."""

    watts: float

    def __post_init__(self):
        if not self.watts > 0:
            raise ParameterError(f"noise power must be > 0 W, got {self.watts}")


@dataclass(frozen=True)
class ThermalPlusNoiseFigure:
    """Thermal noise (-174 dBm/Hz) over the full band plus a noise figure in dB."""

    nf_db: float


NoiseModel = Union[ConstantWatts, ThermalPlusNoiseFigure]


@dataclass(frozen=True)
class SystemParams:
    """Deployment densities, spectrum, blockage/path-loss constants and the
    per-tier power budgets of the two-tier network.
    """

    lambda_m: float  # MBS density, BS/m^2
    lambda_s: float  # SBS density, BS/m^2
    lambda_u: float  # user density, users/m^2 (density-sufficiency assumption only)
    total_bandwidth_hz: float  # W
    a_los: float  # path-loss intercept A_L (linear)
    a_nlos: float  # path-loss intercept A_NL (linear)
    alpha_los: float  # path-loss exponent, LoS
    alpha_nlos: float  # path-loss exponent, NLoS
    beta: float  # blockage rate, 1/m
    p_tot_s: float  # SBS total power budget, W
    p_tot_m: float  # MBS total power budget, W
    p_fc_s: float  # SBS fixed circuit power, W
    p_fc_m: float  # MBS fixed circuit power, W
    rho_s: float  # SBS amplifier/cooling coefficient
    rho_m: float  # MBS amplifier/cooling coefficient
    bias_s: float  # SBS association bias
    bias_m: float  # MBS association bias
    noise_model: NoiseModel = field(default=ThermalPlusNoiseFigure(5.0))

    def __post_init__(self):
        # lambda_s / lambda_m may be zero (absent tier); everything else strict.
        for name in ("lambda_m", "lambda_s"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        for name in ("lambda_u", "total_bandwidth_hz", "a_los", "a_nlos",
                     "alpha_los", "alpha_nlos", "p_tot_s", "p_tot_m",
                     "p_fc_s", "p_fc_m", "rho_s", "rho_m", "bias_s", "bias_m"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be > 0")
        if self.beta < 0:
            raise ParameterError("beta must be >= 0")
        if not self.p_fc_s < self.p_tot_s:
            raise ParameterError("p_fc_s must be < p_tot_s")
        if not self.p_fc_m < self.p_tot_m:
            raise ParameterError("p_fc_m must be < p_tot_m")

    def intercept(self, path: Path) -> float:
        return self.a_los if path is Path.LOS else self.a_nlos

    def exponent(self, path: Path) -> float:
        return self.alpha_los if path is Path.LOS else self.alpha_nlos

    def density(self, tier: Tier) -> float:
        return self.lambda_s if tier is Tier.SBS else self.lambda_m

    def bias(self, tier: Tier) -> float:
        return self.bias_s if tier is Tier.SBS else self.bias_m


@dataclass(frozen=True)
class CacheParams:
    """File library, SBS cache size and the cache power cost model."""

    library_size: int  # F, files
    cache_size: int  # C, files cached per SBS
    zipf_exponent: float  # popularity skew
    w_ca: float  # cache power coefficient, W/bit
    file_size_bits: float  # size of one file unit, bits

    def __post_init__(self):
        if self.library_size < 1:
            raise ParameterError("library_size must be >= 1")
        if not 0 <= self.cache_size <= self.library_size:
            raise ParameterError("cache_size must be in [0, library_size]")
        if not self.zipf_exponent > 0:
            raise ParameterError("zipf_exponent must be > 0")
        if self.w_ca < 0:
            raise ParameterError("w_ca must be >= 0")
        if not self.file_size_bits > 0:
            raise ParameterError("file_size_bits must be > 0")

    def cache_power_w(self) -> float:
        """Cache hardware power draw of one SBS, watts."""
        return self.cache_size * self.file_size_bits * self.w_ca

    def library_power_w(self) -> float:
        """Cache power of a full-library cache (the MBS case), watts."""
        return self.library_size * self.file_size_bits * self.w_ca


@dataclass(frozen=True)
class SpectrumPartition:
    """Access/backhaul split of the shared band: eta to access, 1-eta to backhaul."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ParameterError(f"eta must be in [0, 1], got {self.eta}")

    def access_bandwidth_hz(self, sys: SystemParams) -> float:
        return self.eta * sys.total_bandwidth_hz

    def backhaul_bandwidth_hz(self, sys: SystemParams) -> float:
        # complement computed from the same product so the two always sum to W
        return sys.total_bandwidth_hz - self.eta * sys.total_bandwidth_hz


def sbs_tx_power(sys: SystemParams, cache: CacheParams) -> float:
    """SBS transmit power after circuit and cache draw, watts.

    The budget identity P_tot = rho * P_tr + P_fc + P_cache solved for P_tr.
    Raises NonPositiveTxPower when the cache draw exhausts the budget,
    i.e. the requested cache size is infeasible for this SBS.
    """
    headroom = sys.p_tot_s - sys.p_fc_s - cache.cache_power_w()
    if headroom <= 0:
        raise NonPositiveTxPower(
            f"SBS cache power {cache.cache_power_w():.6g} W leaves no transmit "
            f"budget (p_tot_s={sys.p_tot_s}, p_fc_s={sys.p_fc_s})")
    return headroom / sys.rho_s


def mbs_tx_power(sys: SystemParams, cache: CacheParams) -> float:
    """MBS transmit power, watts. The MBS caches the whole library, so this
    is a constant independent of the SBS cache size."""
    headroom = sys.p_tot_m - sys.p_fc_m - cache.library_power_w()
    if headroom <= 0:
        raise NonPositiveTxPower(
            f"library cache power {cache.library_power_w():.6g} W leaves no MBS "
            f"transmit budget (p_tot_m={sys.p_tot_m}, p_fc_m={sys.p_fc_m})")
    return headroom / sys.rho_m


def tx_power(sys: SystemParams, cache: CacheParams, tier: Tier) -> float:
    return sbs_tx_power(sys, cache) if tier is Tier.SBS else mbs_tx_power(sys, cache)


def noise_power(sys: SystemParams) -> float:
    """Noise floor N0 in watts, shared by access and backhaul links."""
    model = sys.noise_model
    if isinstance(model, ConstantWatts):
        return model.watts
    n0_dbm = -174.0 + 10.0 * math.log10(sys.total_bandwidth_hz) + model.nf_db
    return 10.0 ** (n0_dbm / 10.0) / 1000.0
