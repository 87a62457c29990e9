"""Blockage-dependent LoS probability, dual-slope path loss, and the
distance density of the nearest base station reached over a given path type.

The LoS probability is the 3GPP-style urban model
P_L(r) = min(18/r, 1) * (1 - exp(-beta*r)) + exp(-beta*r),
which is exactly 1 up to 18 m. Its radial mass integral int_0^r P_L(t) t dt
has a closed form (used throughout the association and coverage integrals
instead of an inner quadrature; a quadrature cross-check lives in the tests).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NegativeDistance, ZeroDistance
from .params import Path, SystemParams, Tier


class PdfMode(Enum):
    """Void-factor convention for nearest-distance densities.

    PAPER_LITERAL keeps the unthinned disc void factor exp(-pi r^2 lambda);
    THINNED uses the blockage-thinned factor exp(-2 pi lambda int_0^r P_X t dt),
    i.e. the exact nearest-point density of the LoS/NLoS-thinned process.
    """

    PAPER_LITERAL = "paper_literal"
    THINNED = "thinned"


class NearestTier(Enum):
    """Which point process the nearest-BS distance refers to."""

    SBS = "sbs"
    MBS = "mbs"
    BACKHAUL_MBS = "backhaul_mbs"  # MBS field seen by a typical SBS


@dataclass(frozen=True)
class PathSample:
    """A link at distance r with a resolved LoS/NLoS state and linear gain."""

    distance: float
    path: Path
    loss: float

    @staticmethod
    def of(sys: SystemParams, r: float, path: Path) -> "PathSample":
        return PathSample(distance=r, path=path, loss=path_loss(sys, r, path))


def los_probability(sys: SystemParams, r):
    """Probability that a link of length r (meters) is line-of-sight.

    Accepts scalars or arrays; equals 1 for r <= 18 m.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise NegativeDistance(f"distance must be >= 0, got {r}")
    safe = np.maximum(arr, 18.0)
    decay = np.exp(-sys.beta * arr)
    far = (18.0 / safe) * (1.0 - decay) + decay
    out = np.where(arr <= 18.0, 1.0, far)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def nlos_probability(sys: SystemParams, r):
    """Exact complement of los_probability."""
    return 1.0 - los_probability(sys, r)


def path_loss(sys: SystemParams, r, path: Path):
    """Linear path gain A_X * r^-alpha_X for the given path type."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise NegativeDistance(f"distance must be > 0, got {r}")
    if np.any(arr == 0):
        raise ZeroDistance("path loss is undefined at r = 0")
    out = sys.intercept(path) * arr ** -sys.exponent(path)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def _int_t_exp(u, beta: float):
    """int_0^u t*exp(-beta*t) dt, stable for small beta*u."""
    u = np.asarray(u, dtype=float)
    if beta == 0.0:
        return u * u / 2.0
    x = beta * u
    small = x < 1e-4
    # series x^2/2 - x^3/3 + x^4/8 guards the cancellation at tiny x
    series = x * x * (0.5 - x / 3.0 + x * x / 8.0)
    with np.errstate(over="ignore"):
        exact = 1.0 - (1.0 + x) * np.exp(-x)
    return np.where(small, series, exact) / (beta * beta)


def los_radial_mass(sys: SystemParams, r):
    """int_0^r P_L(t) t dt in closed form.

    For r <= 18 the integrand is exactly t; beyond 18 it is
    18(1 - exp(-beta t)) + t exp(-beta t).
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise NegativeDistance(f"distance must be >= 0, got {r}")
    near = arr * arr / 2.0
    u = np.maximum(arr - 18.0, 0.0)
    scale = math.exp(-18.0 * sys.beta)
    far = 162.0 + 18.0 * u + scale * _int_t_exp(u, sys.beta)
    out = np.where(arr <= 18.0, near, far)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def nlos_radial_mass(sys: SystemParams, r):
    """int_0^r P_NL(t) t dt = r^2/2 - los_radial_mass(r)."""
    arr = np.asarray(r, dtype=float)
    out = arr * arr / 2.0 - los_radial_mass(sys, arr)
    # clamp the tiny negative round-off possible just above r = 18
    out = np.maximum(out, 0.0)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def radial_mass(sys: SystemParams, path: Path, r):
    return los_radial_mass(sys, r) if path is Path.LOS else nlos_radial_mass(sys, r)


def _tier_density(sys: SystemParams, tier: NearestTier) -> float:
    return sys.lambda_s if tier is NearestTier.SBS else sys.lambda_m


def nearest_distance_pdf(sys: SystemParams, tier: NearestTier, path: Path,
                         mode: PdfMode, r) -> float:
    """Density of the distance to the nearest BS of the given tier reached
    over the given path type.

    In THINNED mode this is the exact nearest-point density of the
    independently thinned process: 2 pi lambda r P_X(r) exp(-2 pi lambda G_X(r)).
    In PAPER_LITERAL mode the void factor is the unthinned exp(-pi lambda r^2),
    which makes the LoS/NLoS pair a decomposition of the plain nearest-BS
    density by the path type of the nearest point (the two then integrate to
    complementary probabilities).
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise NegativeDistance(f"distance must be >= 0, got {r}")
    lam = _tier_density(sys, tier)
    p_path = los_probability(sys, arr) if path is Path.LOS else nlos_probability(sys, arr)
    if mode is PdfMode.PAPER_LITERAL:
        void = np.exp(-math.pi * lam * arr * arr)
    else:
        void = np.exp(-2.0 * math.pi * lam * radial_mass(sys, path, arr))
    out = p_path * void * 2.0 * math.pi * lam * arr
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out
