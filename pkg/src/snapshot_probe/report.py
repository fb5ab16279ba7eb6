"""CSV tables and SVG figures for sweeps, interval classifications and A_crit tables."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .dephasing import Verdict, a_crit_fit, a_crit_numeric  # noqa: E402
from .probing import ProbeBounds  # noqa: E402

SWEEP_COLUMNS = (
    "thickness_mm",
    "tau",
    "lower_fid",
    "upper_fid",
    "lower_fid_std",
    "upper_fid_std",
    "lower_td",
    "upper_td",
    "lower_td_std",
    "upper_td_std",
    "acrit",
    "acrit_source",
    "verdict",
    "flags",
)
INTERVAL_COLUMNS = ("label", "tau_start", "tau_end")
ACRIT_COLUMNS = ("delta_eta", "acrit_numeric", "acrit_fit", "difference")

FLOAT_FMT = ".12g"

plt.rcParams.update({"svg.hashsalt": "snapshot-probe", "font.size": 10})

ROUTE_STYLE = {
    "fidelity": dict(color="tab:blue", marker="+", linestyle="none", markersize=9, label="alpha-fidelity"),
    "trace": dict(color="tab:red", marker="x", linestyle="none", markersize=7, label="trace distance"),
}
LABEL_COLORS = {Verdict.NON_MARKOVIAN: "tab:red", Verdict.MARKOVIAN: "tab:green", Verdict.INCONCLUSIVE: "0.3"}


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, FLOAT_FMT)
    return str(x)


def sweep_records(report) -> list[dict]:
    out = []
    for r in report.rows:
        b = r.bounds
        out.append(
            {
                "thickness_mm": r.thickness_mm,
                "tau": r.tau,
                "lower_fid": b.lower_fid,
                "upper_fid": b.upper_fid,
                "lower_fid_std": b.lower_fid_std,
                "upper_fid_std": b.upper_fid_std,
                "lower_td": b.lower_td,
                "upper_td": b.upper_td,
                "lower_td_std": b.lower_td_std,
                "upper_td_std": b.upper_td_std,
                "acrit": r.acrit,
                "acrit_source": r.acrit_source,
                "verdict": str(r.verdict),
                "flags": ";".join(r.flags),
            }
        )
    return out


def write_sweep_csv(report, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for rec in sweep_records(report):
            writer.writerow([_fmt(rec[c]) for c in SWEEP_COLUMNS])
    return path


def read_sweep_csv(path) -> list[dict]:
    """Parse a sweep CSV back into typed records."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        out = []
        for row in reader:
            rec = {k: float(row[k]) for k in SWEEP_COLUMNS if k not in ("acrit_source", "verdict", "flags")}
            rec["acrit_source"] = row["acrit_source"]
            rec["verdict"] = Verdict(row["verdict"])
            rec["flags"] = [f for f in row["flags"].split(";") if f]
            out.append(rec)
    return out


def bounds_from_record(rec: dict) -> ProbeBounds:
    return ProbeBounds(rec["lower_fid"], rec["upper_fid"], rec["lower_td"], rec["upper_td"])


def write_metadata(report, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.metadata, indent=2, sort_keys=True) + "\n")
    return path


def write_intervals_csv(interval_report, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INTERVAL_COLUMNS)
        for label, a, b in interval_report.runs:
            writer.writerow([str(label), _fmt(a), _fmt(b)])
    return path


def acrit_table(delta_etas: Iterable[float]) -> list[dict]:
    rows = []
    for d in delta_etas:
        numeric = a_crit_numeric(d)
        fit = a_crit_fit(d)
        rows.append(
            {
                "delta_eta": d,
                "acrit_numeric": math.nan if numeric is None else numeric,
                "acrit_fit": fit,
                "difference": math.nan if numeric is None else numeric - fit,
            }
        )
    return rows


def write_acrit_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ACRIT_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(float(r[c])) for c in ACRIT_COLUMNS])
    return path


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_sweep(records: list[dict], path, title: str = "") -> Path:
    """Bounds versus thickness, one series per bound route, with A_crit guides."""
    x = [r["thickness_mm"] for r in records]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for route, key in (("fidelity", "fid"), ("trace", "td")):
        style = dict(ROUTE_STYLE[route])
        label = style.pop("label")
        lows = [r[f"lower_{key}"] for r in records]
        highs = [r[f"upper_{key}"] for r in records]
        container = ax.errorbar(
            x + x,
            lows + highs,
            yerr=[r[f"lower_{key}_std"] for r in records] + [r[f"upper_{key}_std"] for r in records],
            label=label,
            capsize=2,
            **style,
        )
        container.lines[0].set_gid(f"route-{route}")
    acrit = [r["acrit"] for r in records]
    ax.plot(x, acrit, "k-.", lw=1, label="A_crit, 1 - A_crit")
    ax.plot(x, [1 - a for a in acrit], "k-.", lw=1)
    ax.set_xlabel("plate thickness (mm)")
    ax.set_ylabel("bounds on A")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_intervals(interval_report, path, title: str = "") -> Path:
    """Per-time non-Markovian band with the amplitude bounds and a label strip."""
    from .dephasing import nonmarkovian_region

    region = nonmarkovian_region(interval_report.delta_eta, interval_report.tau)
    fig, (ax, strip) = plt.subplots(2, 1, figsize=(6.5, 4.2), sharex=True, gridspec_kw={"height_ratios": [4, 1]})
    ax.plot(region.tau, region.a_minus, color="tab:blue", lw=1.2, label="A_crit(tau)")
    ax.plot(region.tau, region.a_plus, color="tab:red", lw=1.2, label="1 - A_crit(tau)")
    lo, hi = interval_report.bounds
    ax.axhline(lo, color="k", lw=1)
    ax.axhline(hi, color="k", lw=1, label="probed bounds")
    ax.set_ylim(0, 1)
    ax.set_ylabel("A")
    ax.legend(loc="upper right", fontsize=8)
    for label, a, b in interval_report.runs:
        strip.axvspan(a, b, color=LABEL_COLORS[label], lw=0)
    strip.set_yticks([])
    strip.set_xlabel("rescaled time 2 pi sigma dn t")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_acrit(rows, path) -> Path:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    d = [r["delta_eta"] for r in rows]
    ax.plot(d, [r["acrit_numeric"] for r in rows], "ko", ms=3, label="numeric")
    ax.plot(d, [r["acrit_fit"] for r in rows], "c-", label="fit")
    ax.plot(d, [1 - r["acrit_numeric"] for r in rows], "ks", ms=3)
    ax.plot(d, [1 - r["acrit_fit"] for r in rows], "m-")
    ax.set_xlabel("peak separation / width")
    ax.set_ylabel("A")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def emit(report, out_dir, fmt: str = "csv", stem: str = "sweep") -> list[Path]:
    """Write the sweep CSV (always), metadata, and the SVG figure when requested."""
    if fmt not in ("csv", "svg", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = write_sweep_csv(report, out / f"{stem}.csv")
    written = [csv_path, write_metadata(report, out / f"{stem}_meta.json")]
    if fmt in ("svg", "both"):
        written.append(plot_sweep(sweep_records(report), out / f"{stem}.svg", stem))
    return written
