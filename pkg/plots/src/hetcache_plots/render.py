"""Render static charts from the engine's figure CSVs.

Consumes only the documented CSV column contract; no code is shared with the
analysis package, so this tool can be pointed at any conforming file.

Usage: hetcache-render --fig N --in figN.csv --out figN.png
(also: python -m hetcache_plots.render ...)
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

EXPECTED_COLUMNS = {
    2: ["lambda_m", "cache_size", "eta_star", "apt_star_bps_m2"],
    3: ["eta", "series", "cache_size", "apt_bps_m2"],
    4: ["cache_size", "eta", "file_size_bits", "apt_bps_m2"],
    5: ["gamma0_db", "gamma0_linear", "series", "eta", "cache_size",
        "apt_bps_m2"],
}


class SchemaMismatch(ValueError):
    """Input CSV does not carry the expected columns for the figure."""


@dataclass(frozen=True)
class FigureJob:
    input_csv: str
    figure_id: int
    output_path: str


@dataclass(frozen=True)
class RenderSummary:
    figure_id: int
    series_count: int
    row_count: int
    output_path: str


def _load(job: FigureJob) -> List[Dict[str, str]]:
    expected = EXPECTED_COLUMNS.get(job.figure_id)
    if expected is None:
        raise SchemaMismatch(f"unknown figure id {job.figure_id}; "
                             f"known: {sorted(EXPECTED_COLUMNS)}")
    with open(job.input_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in expected if c not in header]
        if missing:
            raise SchemaMismatch(
                f"{job.input_csv}: missing columns {missing}; "
                f"expected {expected}, found {header}")
        rows = list(reader)
    if not rows:
        raise SchemaMismatch(f"{job.input_csv}: no data rows")
    return rows


def _groups(rows, key) -> Dict[str, List[Dict[str, str]]]:
    out: Dict[str, List[Dict[str, str]]] = {}
    for r in rows:
        out.setdefault(r[key], []).append(r)
    return out


def _line(ax, rows, xcol, ycol, label):
    pts = sorted((float(r[xcol]), float(r[ycol])) for r in rows)
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
            markersize=3, label=label)


def render(job: FigureJob) -> RenderSummary:
    """Render one figure; returns the series/row summary.

    Raises SchemaMismatch (no image written) when the CSV does not match the
    figure's column contract or carries no rows.
    """
    rows = _load(job)
    fid = job.figure_id
    if fid == 2:
        fig, ax = plt.subplots(figsize=(5.5, 4))
        groups = _groups(rows, "lambda_m")
        for lam in sorted(groups, key=float):
            _line(ax, groups[lam], "cache_size", "eta_star",
                  f"MBS density {float(lam):g}/m$^2$")
        ax.set_xlabel("cache size (files)")
        ax.set_ylabel("best access share $\\eta^*$")
        ax.set_title("Spectrum shifted to access vs cache size")
    elif fid == 3:
        fig, ax = plt.subplots(figsize=(5.5, 4))
        groups = _groups(rows, "series")
        for name in sorted(groups):
            c_size = groups[name][0]["cache_size"]
            _line(ax, groups[name], "eta", "apt_bps_m2",
                  f"{name} (C={c_size})")
        ax.set_xlabel("access share $\\eta$")
        ax.set_ylabel("APT (bit/s per m$^2$)")
        ax.set_title("Throughput vs spectrum partition")
    elif fid == 4:
        profiles = _groups(rows, "file_size_bits")
        keys = sorted(profiles, key=float, reverse=True)
        fig, axes = plt.subplots(1, len(keys), figsize=(5.5 * len(keys), 4),
                                 squeeze=False)
        for ax, bits in zip(axes[0], keys):
            by_eta = _groups(profiles[bits], "eta")
            for eta in sorted(by_eta, key=float):
                _line(ax, by_eta[eta], "cache_size", "apt_bps_m2",
                      f"$\\eta$={float(eta):g}")
            ax.set_xlabel("cache size (files)")
            ax.set_ylabel("APT (bit/s per m$^2$)")
            ax.set_title(f"{float(bits) / 1e6:g} Mbit files")
            ax.legend()
        groups = {(b, e) for b in keys for e in _groups(profiles[b], "eta")}
        for ax in axes[0]:
            ax.grid(alpha=0.3)
        fig.suptitle("Throughput vs cache size")
        fig.tight_layout()
        fig.savefig(job.output_path, dpi=120)
        plt.close(fig)
        return RenderSummary(fid, len(groups), len(rows), job.output_path)
    elif fid == 5:
        fig, ax = plt.subplots(figsize=(5.5, 4))
        groups = _groups(rows, "series")
        for name in sorted(groups):
            first = groups[name][0]
            _line(ax, groups[name], "gamma0_db", "apt_bps_m2",
                  f"{name} (C={first['cache_size']}, "
                  f"$\\eta$={float(first['eta']):.2f})")
        ax.set_xlabel("SINR threshold (dB)")
        ax.set_ylabel("APT (bit/s per m$^2$)")
        ax.set_title("Throughput vs SINR threshold")
    else:  # unreachable: _load validates the id
        raise SchemaMismatch(f"unknown figure id {fid}")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(job.output_path, dpi=120)
    plt.close(fig)
    return RenderSummary(fid, len(groups), len(rows), job.output_path)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="hetcache-render", description=__doc__)
    p.add_argument("--fig", type=int, required=True, choices=(2, 3, 4, 5))
    p.add_argument("--in", dest="input_csv", required=True)
    p.add_argument("--out", dest="output_path", required=True)
    args = p.parse_args(argv)
    job = FigureJob(input_csv=args.input_csv, figure_id=args.fig,
                    output_path=args.output_path)
    try:
        summary = render(job)
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    print(f"fig{summary.figure_id}: {summary.series_count} series, "
          f"{summary.row_count} rows -> {summary.output_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
