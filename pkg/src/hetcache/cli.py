"""Command-line entry points.

Verbs:
  run <config>        evaluate a single point or a sweep, emit CSV artifacts
  validate <config>   parse + validate a config, exit status reports the result
  figures             reproduce the headline figure data sets as CSVs
  mc-compare <config> analytical vs Monte Carlo comparison table

Exit codes: 0 success, 2 config parse/validation error, 3 numerical failure
(partial CSV is preserved with a failure marker row).

HETCACHE_WORKERS overrides the configured Monte Carlo worker count.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys as _sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .apt import AptBreakdown, apt_from_coverage, apt_total
from .association import association_masses
from .caching import cache_hit_ratio
from .config import (RunConfig, db_to_linear, dump_resolved, load_config,
                     resolved_dict)
from .coverage import coverage_all
from .errors import ConfigError, QuadratureFailure, RejectionStarvation
from .figures import reproduce_figures
from .montecarlo import mc_apt_coverage, mc_coverage
from .params import LinkClass, Path, Tier, mbs_tx_power, noise_power, sbs_tx_power

RESULT_COLUMNS = ["axis", "axis_value", "axis_linear", "engine", "quantity",
                  "value", "stderr", "n", "seed", "note"]

_GAMMA_GRID_DB = (0.0, 5.0, 10.0, 15.0, 20.0)


def _workers(cfg: RunConfig) -> int:
    env = os.environ.get("HETCACHE_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return cfg.mc.workers


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


class _CsvSink:
    """Incremental row writer so a numerical failure preserves partial output."""

    def __init__(self, path: str):
        self.path = path
        self._fh = open(path, "w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(RESULT_COLUMNS)

    def row(self, axis, axis_value, axis_linear, engine, quantity, value,
            stderr=None, n=None, seed=None, note=""):
        self._w.writerow([_fmt(axis), _fmt(axis_value), _fmt(axis_linear),
                          engine, quantity, _fmt(value), _fmt(stderr),
                          _fmt(n), _fmt(seed), note])
        self._fh.flush()

    def close(self):
        self._fh.close()


def _apt_rows(sink: _CsvSink, axis, value, linear, engine: str,
              b: AptBreakdown, stderrs=None, n=None, seed=None):
    se = stderrs or {}
    sink.row(axis, value, linear, engine, "apt_total", b.r_total,
             se.get("apt_total"), n, seed)
    sink.row(axis, value, linear, engine, "apt_sbs", b.r_sbs,
             se.get("apt_sbs"), n, seed)
    sink.row(axis, value, linear, engine, "apt_mbs", b.r_mbs,
             se.get("apt_mbs"), n, seed)
    for c in b.cases:
        name = "apt_case_%s%s" % ("l" if c.access_path is Path.LOS else "n",
                                  "l" if c.backhaul_path is Path.LOS else "n")
        sink.row(axis, value, linear, engine, name, c.value, None, n, seed,
                 note=c.binding)


def _mc_breakdown(cfg: RunConfig, point_cfg: RunConfig):
    est = mc_apt_coverage(point_cfg.system, point_cfg.cache, point_cfg.gamma0,
                          cfg.mc.n, cfg.mc.r_sim_m, cfg.mc.seed, _workers(cfg))
    from .coverage import CoverageResult

    def v(e):
        return 0.0 if math.isnan(e.value) else e.value

    cov = CoverageResult(
        gamma=point_cfg.gamma0,
        sbs_los=v(est.access_cover[LinkClass(Tier.SBS, Path.LOS)]),
        sbs_nlos=v(est.access_cover[LinkClass(Tier.SBS, Path.NLOS)]),
        mbs_los=v(est.access_cover[LinkClass(Tier.MBS, Path.LOS)]),
        mbs_nlos=v(est.access_cover[LinkClass(Tier.MBS, Path.NLOS)]),
        bh_los=v(est.bh_cover[Path.LOS]),
        bh_nlos=v(est.bh_cover[Path.NLOS]))
    b = apt_from_coverage(point_cfg.system, point_cfg.cache, point_cfg.eta,
                          point_cfg.gamma0, cov)
    return b, est


def _point_config(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    if axis == "eta":
        return replace(cfg, eta=float(value))
    if axis == "cache_size":
        return replace(cfg, cache=replace(cfg.cache, cache_size=int(value)))
    if axis == "gamma0_db":
        return replace(cfg, gamma0_db=float(value))
    if axis == "lambda_m":
        return replace(cfg, system=replace(cfg.system, lambda_m=float(value)))
    if axis == "zipf_exponent":
        return replace(cfg, cache=replace(cfg.cache, zipf_exponent=float(value)))
    raise ConfigError(f"sweep.axis: unknown axis {axis!r}")


def _axis_linear(axis: str, value: float) -> float:
    return db_to_linear(value) if axis == "gamma0_db" else value


def _artifact_paths(out_csv: str):
    base = out_csv[:-4] if out_csv.endswith(".csv") else out_csv
    return base + ".resolved.yaml", base + ".manifest.json"


def _write_manifest(path: str, cfg: RunConfig, kind: str, outputs: List[str]):
    manifest = {
        "kind": kind,
        "version": __version__,
        "seed": cfg.mc.seed,
        "columns": RESULT_COLUMNS,
        "outputs": sorted(outputs),
        "config": resolved_dict(cfg),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)


def cmd_run(cfg: RunConfig, out_override: Optional[str] = None) -> int:
    out_csv = out_override or (cfg.sweep.output if cfg.sweep else "results.csv")
    echo_path, manifest_path = _artifact_paths(out_csv)
    sink = _CsvSink(out_csv)
    status = 0
    try:
        if cfg.sweep is None:
            _run_point_table(sink, cfg)
        else:
            _run_sweep(sink, cfg)
    except (QuadratureFailure, RejectionStarvation) as exc:
        sink.row("", "", "", "", "failure_marker", None,
                 note=f"{type(exc).__name__}: {exc}")
        status = 3
        print(f"numerical failure: {exc}", file=_sys.stderr)
    finally:
        sink.close()
    dump_resolved(cfg, echo_path)
    _write_manifest(manifest_path, cfg, "sweep" if cfg.sweep else "point",
                    [out_csv, echo_path])
    return status


def _run_point_table(sink: _CsvSink, cfg: RunConfig):
    """Single-point summary: powers, hit ratio, masses, coverage, APT."""
    sysp, cache = cfg.system, cfg.cache
    sink.row("", "", "", "analytical", "sbs_tx_power_w", sbs_tx_power(sysp, cache))
    sink.row("", "", "", "analytical", "mbs_tx_power_w", mbs_tx_power(sysp, cache))
    sink.row("", "", "", "analytical", "noise_power_w", noise_power(sysp))
    sink.row("", "", "", "analytical", "cache_hit_ratio", cache_hit_ratio(cache))
    masses = association_masses(sysp, cache, cfg.mode)
    for lc, m in masses.user.items():
        sink.row("", "", "", "analytical", f"assoc_mass_{lc}", m)
    sink.row("", "", "", "analytical", "assoc_mass_bh_los", masses.backhaul_los)
    sink.row("", "", "", "analytical", "assoc_mass_bh_nlos", masses.backhaul_nlos)
    cov = coverage_all(sysp, cache, cfg.gamma0, cfg.mode)
    for name, v in (("coverage_sbs_los", cov.sbs_los),
                    ("coverage_sbs_nlos", cov.sbs_nlos),
                    ("coverage_mbs_los", cov.mbs_los),
                    ("coverage_mbs_nlos", cov.mbs_nlos),
                    ("coverage_bh_los", cov.bh_los),
                    ("coverage_bh_nlos", cov.bh_nlos)):
        sink.row("", "", "", "analytical", name, v)
    b = apt_from_coverage(sysp, cache, cfg.eta, cfg.gamma0, cov,
                          cfg.paper_literal_cases)
    _apt_rows(sink, "", "", "", "analytical", b)


def _run_sweep(sink: _CsvSink, cfg: RunConfig):
    sweep = cfg.sweep
    for value in sweep.values:
        pcfg = _point_config(cfg, sweep.axis, value)
        linear = _axis_linear(sweep.axis, value)
        if sweep.engines in ("analytical", "both"):
            b = apt_total(pcfg.system, pcfg.cache, pcfg.eta, pcfg.gamma0,
                          pcfg.mode, pcfg.paper_literal_cases)
            _apt_rows(sink, sweep.axis, value, linear, "analytical", b)
        if sweep.engines in ("montecarlo", "both"):
            b, est = _mc_breakdown(cfg, pcfg)
            _apt_rows(sink, sweep.axis, value, linear, "montecarlo", b,
                      n=est.n, seed=cfg.mc.seed)


def cmd_mc_compare(cfg: RunConfig, out_csv: str) -> int:
    """Coverage comparison table over the acceptance threshold grid."""
    sysp, cache = cfg.system, cfg.cache
    gammas = [db_to_linear(g) for g in _GAMMA_GRID_DB]
    with open(out_csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "class", "gamma_db", "analytical",
                    "mc_estimate", "mc_stderr", "abs_diff", "n", "seed"])
        mcc = mc_coverage(sysp, cache, gammas, cfg.mc.n, cfg.mc.r_sim_m,
                          cfg.mc.seed, _workers(cfg))
        masses = association_masses(sysp, cache, cfg.mode)
        for lc in LinkClass.all_classes():
            e = mcc.assoc[lc]
            w.writerow(["assoc", str(lc), "", repr(masses.user[lc]),
                        repr(e.value), repr(e.stderr),
                        repr(abs(masses.user[lc] - e.value)), e.n, e.seed])
        for i, gdb in enumerate(_GAMMA_GRID_DB):
            cov = coverage_all(sysp, cache, gammas[i], cfg.mode)
            rows = [("sbs_los", cov.sbs_los, mcc.coverage[LinkClass(Tier.SBS, Path.LOS)][i]),
                    ("sbs_nlos", cov.sbs_nlos, mcc.coverage[LinkClass(Tier.SBS, Path.NLOS)][i]),
                    ("mbs_los", cov.mbs_los, mcc.coverage[LinkClass(Tier.MBS, Path.LOS)][i]),
                    ("mbs_nlos", cov.mbs_nlos, mcc.coverage[LinkClass(Tier.MBS, Path.NLOS)][i]),
                    ("bh_los", cov.bh_los, mcc.bh_coverage[Path.LOS][i]),
                    ("bh_nlos", cov.bh_nlos, mcc.bh_coverage[Path.NLOS][i])]
            for name, ana, est in rows:
                w.writerow(["coverage", name, repr(gdb), repr(ana),
                            repr(est.value), repr(est.stderr),
                            repr(abs(ana - est.value)), est.n, est.seed])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hetcache",
                                description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="evaluate a config (point or sweep)")
    runp.add_argument("config")
    runp.add_argument("--out", help="override the output CSV path")

    valp = sub.add_parser("validate", help="validate a config file")
    valp.add_argument("config")

    figp = sub.add_parser("figures", help="reproduce figure data CSVs")
    figp.add_argument("--config", help="optional config (defaults otherwise)")
    figp.add_argument("--out-dir", default="figures")

    mcp = sub.add_parser("mc-compare", help="analytical vs Monte Carlo table")
    mcp.add_argument("config")
    mcp.add_argument("--out", default="mc_compare.csv")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            load_config(args.config)
            print("OK")
            return 0
        if args.command == "run":
            cfg = load_config(args.config)
            return cmd_run(cfg, args.out)
        if args.command == "figures":
            if args.config:
                cfg = load_config(args.config)
            else:
                from .config import config_from_dict
                cfg = config_from_dict({}, source="<defaults>")
            try:
                emitted = reproduce_figures(cfg, args.out_dir)
            except (QuadratureFailure, RejectionStarvation) as exc:
                print(f"numerical failure: {exc}", file=_sys.stderr)
                return 3
            for name in sorted(emitted):
                print(emitted[name])
            return 0
        if args.command == "mc-compare":
            cfg = load_config(args.config)
            try:
                return cmd_mc_compare(cfg, args.out)
            except (QuadratureFailure, RejectionStarvation) as exc:
                print(f"numerical failure: {exc}", file=_sys.stderr)
                return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
