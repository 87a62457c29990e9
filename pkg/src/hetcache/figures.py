"""Reproduction of the headline result figures as CSV data sets.

Each emitter writes one CSV consumed by external plotting tools (the plots
package renders them without sharing any code). Column schemas are documented
in the run manifest written next to the CSVs.

fig2: best spectrum split vs cache size, per MBS density (small-file profile)
fig3: APT vs spectrum split, cached vs no-cache series
fig4: APT vs cache size per eta, both file-size profiles
fig5: APT vs SINR threshold, cached (at its best eta) vs no-cache series
"""
from __future__ import annotations

import csv
import json
from dataclasses import replace
from typing import Dict, List

from .apt import apt_total, max_feasible_cache, optimize_eta
from .config import (SMALL_FILE_BITS, RunConfig, db_to_linear, default_cache,
                     resolved_dict)
from .params import CacheParams

FIGURE_SCHEMAS = {
    "fig2.csv": ["lambda_m", "cache_size", "eta_star", "apt_star_bps_m2"],
    "fig3.csv": ["eta", "series", "cache_size", "apt_bps_m2"],
    "fig4.csv": ["cache_size", "eta", "file_size_bits", "apt_bps_m2"],
    "fig5.csv": ["gamma0_db", "gamma0_linear", "series", "eta", "cache_size",
                 "apt_bps_m2"],
}


def _write(path, header: List[str], rows: List[list]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _with_cache(cache: CacheParams, **kw) -> CacheParams:
    return replace(cache, **kw)


def fig2_rows(cfg: RunConfig) -> List[list]:
    """Best eta vs cache size for two MBS densities (small-file profile so
    the larger cache sizes stay inside the SBS power budget)."""
    rows = []
    g0 = cfg.gamma0
    for lam_m in (cfg.system.lambda_m, 2.0 * cfg.system.lambda_m):
        sysp = replace(cfg.system, lambda_m=lam_m)
        for c_size in (100, 200, 300, 400):
            cache = _with_cache(cfg.cache, cache_size=c_size,
                                file_size_bits=SMALL_FILE_BITS)
            opt = optimize_eta(sysp, cache, g0, mode=cfg.mode,
                               paper_literal_cases=cfg.paper_literal_cases)
            rows.append([lam_m, c_size, opt.eta_star, opt.apt_star])
    return rows


def fig3_rows(cfg: RunConfig, points: int = 41) -> List[list]:
    """APT vs eta for the cached configuration and the no-cache baseline."""
    rows = []
    for label, c_size in (("cached", cfg.cache.cache_size), ("no_cache", 0)):
        cache = _with_cache(cfg.cache, cache_size=c_size)
        for i in range(points):
            eta = i / (points - 1)
            apt = apt_total(cfg.system, cache, eta, cfg.gamma0, cfg.mode,
                            cfg.paper_literal_cases).r_total
            rows.append([eta, label, c_size, apt])
    return rows


def fig4_rows(cfg: RunConfig, n_points: int = 16) -> List[list]:
    """APT vs cache size for two eta values, under both file-size profiles."""
    rows = []
    for bits in (cfg.cache.file_size_bits, SMALL_FILE_BITS):
        tmpl = _with_cache(cfg.cache, cache_size=0, file_size_bits=bits)
        c_max = max_feasible_cache(cfg.system, tmpl)
        step = max(1, c_max // (n_points - 1))
        grid = list(range(0, c_max + 1, step))
        if grid[-1] != c_max:
            grid.append(c_max)
        for eta in (0.2, 0.5):
            for c_size in grid:
                cache = _with_cache(tmpl, cache_size=c_size)
                apt = apt_total(cfg.system, cache, eta, cfg.gamma0, cfg.mode,
                                cfg.paper_literal_cases).r_total
                rows.append([c_size, eta, bits, apt])
    return rows


def fig5_rows(cfg: RunConfig) -> List[list]:
    """APT vs threshold for the cached series (at its best eta) and the
    no-cache series (at its own best eta)."""
    rows = []
    g0 = cfg.gamma0
    for label, c_size in (("cached", cfg.cache.cache_size), ("no_cache", 0)):
        cache = _with_cache(cfg.cache, cache_size=c_size)
        eta = optimize_eta(cfg.system, cache, g0, mode=cfg.mode,
                           paper_literal_cases=cfg.paper_literal_cases).eta_star
        for gdb in (0.0, 5.0, 10.0, 15.0, 20.0, 25.0):
            g = db_to_linear(gdb)
            apt = apt_total(cfg.system, cache, eta, g, cfg.mode,
                            cfg.paper_literal_cases).r_total
            rows.append([gdb, g, label, eta, c_size, apt])
    return rows


def reproduce_figures(cfg: RunConfig, out_dir: str) -> Dict[str, str]:
    """Emit fig2..fig5 CSVs plus a manifest documenting the column schemas."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    emitted = {}
    for name, rows in (("fig2.csv", fig2_rows(cfg)),
                       ("fig3.csv", fig3_rows(cfg)),
                       ("fig4.csv", fig4_rows(cfg)),
                       ("fig5.csv", fig5_rows(cfg))):
        path = os.path.join(out_dir, name)
        _write(path, FIGURE_SCHEMAS[name], rows)
        emitted[name] = path
    manifest = {
        "kind": "figure-reproduction",
        "schemas": FIGURE_SCHEMAS,
        "config": resolved_dict(cfg),
        "notes": {
            "fig2.csv": "eta_star per (lambda_m, cache_size); small-file profile",
            "fig3.csv": "APT vs eta; cached vs no_cache series",
            "fig4.csv": "APT vs cache size per eta; one block per file profile",
            "fig5.csv": "APT vs threshold; each series at its own best eta",
        },
    }
    mpath = os.path.join(out_dir, "figures_manifest.json")
    with open(mpath, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    emitted["figures_manifest.json"] = mpath
    return emitted
