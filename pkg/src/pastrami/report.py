"""Analysis reports: JSON (schema report-v1), markdown, and the SVG loss plot."""

from __future__ import annotations

import datetime
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import jsonschema

from pastrami.ingest import LoadLossCurve
from pastrami.metrics import LoadLevelStats
from pastrami.plotting import render_loss_plot
from pastrami.saturation import (
    PdrEstimate,
    SaturationVerdict,
    TirPoint,
    assess_pdr_accuracy,
)

SCHEMA_VERSION = 1
SCHEMA_NAME = "report-v1.json"

JSON_FILE = "report.json"
MARKDOWN_FILE = "report.md"
SVG_FILE = "loss_curve.svg"

FORMATS = ("json", "markdown", "svg")


@dataclass(frozen=True)
class ReportBundle:
    curve_ref: str
    checksum: str
    stats: tuple[LoadLevelStats, ...]
    verdict: SaturationVerdict
    generated_at: str
    plot_artifacts: tuple[str, ...] = field(default=())


def make_bundle(
    curve: LoadLossCurve,
    verdict: SaturationVerdict,
    curve_ref: str,
    generated_at: Optional[str] = None,
    plot_artifacts: Sequence[str] = (),
) -> ReportBundle:
    if generated_at is None:
        generated_at = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return ReportBundle(
        curve_ref=curve_ref,
        checksum=curve.checksum(),
        stats=tuple(curve.stats),
        verdict=verdict,
        generated_at=generated_at,
        plot_artifacts=tuple(plot_artifacts),
    )


def load_schema() -> dict:
    text = resources.files("pastrami").joinpath("schemas", SCHEMA_NAME).read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` is not a valid v1 report."""
    jsonschema.validate(doc, load_schema())


def _level_dict(s: LoadLevelStats) -> dict:
    return {
        "offered_load_pps": s.offered_load,
        "k": s.k,
        "plr": s.plr,
        "dr": s.dr,
        "throughput_pps": s.throughput,
        "sigma_plr": s.sigma_plr,
        "lcl95": s.lcl95,
        "ucl95": s.ucl95,
        "delta_ucl95": s.delta_ucl95,
    }


def bundle_to_dict(bundle: ReportBundle) -> dict:
    v = bundle.verdict
    pdr = v.pdr
    idx = v.potential_sat_index
    return {
        "schema_version": SCHEMA_VERSION,
        "curve_ref": bundle.curve_ref,
        "checksum": bundle.checksum,
        "generated_at": bundle.generated_at,
        "pdr_threshold": v.pdr_threshold,
        "eta": v.eta,
        "classification": v.classification,
        "reason": v.reason,
        "pdr_accurate": assess_pdr_accuracy(v).accurate,
        "pdr_load_pps": None if pdr is None else pdr.load,
        "pdr_grid_load_pps": None if pdr is None else pdr.grid_load,
        "sweep_exhausted": None if pdr is None else pdr.sweep_exhausted,
        "potential_sat_index": idx,
        "potential_sat_load_pps": None if idx is None else bundle.stats[idx].offered_load,
        "entered_saturation": v.entered_saturation,
        "saturation_index": v.saturation_index,
        "tir_series": [
            {"load_a_pps": p.load_a, "load_b_pps": p.load_b, "tir": p.tir} for p in v.tir_series
        ],
        "levels": [_level_dict(s) for s in bundle.stats],
        "plot_artifacts": list(bundle.plot_artifacts),
    }


def bundle_from_dict(doc: dict) -> ReportBundle:
    pdr = None
    if doc["pdr_load_pps"] is not None:
        pdr = PdrEstimate(doc["pdr_load_pps"], doc["pdr_grid_load_pps"], doc["sweep_exhausted"])
    verdict = SaturationVerdict(
        classification=doc["classification"],
        eta=doc["eta"],
        pdr_threshold=doc["pdr_threshold"],
        pdr=pdr,
        potential_sat_index=doc["potential_sat_index"],
        tir_series=tuple(TirPoint(p["load_a_pps"], p["load_b_pps"], p["tir"]) for p in doc["tir_series"]),
        entered_saturation=doc["entered_saturation"],
        saturation_index=doc["saturation_index"],
        reason=doc["reason"],
    )
    stats = tuple(
        LoadLevelStats(
            offered_load=d["offered_load_pps"],
            k=d["k"],
            plr=d["plr"],
            dr=d["dr"],
            throughput=d["throughput_pps"],
            sigma_plr=d["sigma_plr"],
            lcl95=d["lcl95"],
            ucl95=d["ucl95"],
            delta_ucl95=d["delta_ucl95"],
        )
        for d in doc["levels"]
    )
    return ReportBundle(
        curve_ref=doc["curve_ref"],
        checksum=doc["checksum"],
        stats=stats,
        verdict=verdict,
        generated_at=doc["generated_at"],
        plot_artifacts=tuple(doc["plot_artifacts"]),
    )


def _opt(x: Optional[float], fmt: str) -> str:
    return "-" if x is None else format(x, fmt)


def _markdown(bundle: ReportBundle) -> str:
    v = bundle.verdict
    acc = assess_pdr_accuracy(v)
    pdr = v.pdr
    if pdr is None:
        pdr_text = "absent (threshold exceeded at the lowest load)"
    else:
        pdr_text = f"{pdr.load / 1e6:.6g} Mpps (last compliant grid load {pdr.grid_load / 1e6:.6g} Mpps)"
        if pdr.sweep_exhausted:
            pdr_text += ", sweep exhausted"
    lines = [
        f"# Load-sweep report: {bundle.curve_ref}",
        "",
        f"- classification: **{v.classification}**",
        f"- PDR@{v.pdr_threshold * 100:g}%: {pdr_text}",
        f"- PDR accurate: {'yes' if acc.accurate else 'no'} ({acc.reason})",
        f"- eta: {v.eta:g}",
        f"- reason: {v.reason}",
        f"- data checksum: `{bundle.checksum}`",
        f"- generated at: {bundle.generated_at}",
        "",
        "## Levels",
        "",
        "| load [Mpps] | K | PLR | DR | throughput [Mpps] | sigma PLR | LCL95 | UCL95 | Delta UCL95 |",
        "|---:|---:|---:|---:|---:|---:|---:|---:|---:|",
    ]
    for s in bundle.stats:
        lines.append(
            f"| {s.offered_load / 1e6:.4g} | {s.k} | {s.plr:.4e} | {s.dr:.6f} | {s.throughput / 1e6:.6g} "
            f"| {_opt(s.sigma_plr, '.3e')} | {_opt(s.lcl95, '.3e')} | {_opt(s.ucl95, '.3e')} "
            f"| {_opt(s.delta_ucl95, '.3g')} |"
        )
    lines += ["", "## TIR past the potential saturation point", ""]
    if v.tir_series:
        lines += ["| from [Mpps] | to [Mpps] | TIR | below eta |", "|---:|---:|---:|:---:|"]
        for p in v.tir_series:
            lines.append(
                f"| {p.load_a / 1e6:.4g} | {p.load_b / 1e6:.4g} | {p.tir:.4f} | {'yes' if p.tir < v.eta else 'no'} |"
            )
    else:
        lines.append("none")
    if bundle.plot_artifacts:
        lines += ["", "## Figures", ""]
        lines += [f"![load-loss curve]({a})" for a in bundle.plot_artifacts]
    return "\n".join(lines) + "\n"


def emit_report(bundle: ReportBundle, fmt: str = "json") -> str:
    """Serialize ``bundle`` as ``json`` or ``markdown`` text."""
    if fmt == "json":
        return json.dumps(bundle_to_dict(bundle), indent=2) + "\n"
    if fmt in ("markdown", "md"):
        return _markdown(bundle)
    raise ValueError(f"unknown report format {fmt!r}")


def write_reports(
    curve: LoadLossCurve,
    verdict: SaturationVerdict,
    out_dir: "os.PathLike[str] | str",
    curve_ref: str,
    formats: Iterable[str] = FORMATS,
    generated_at: Optional[str] = None,
) -> tuple[ReportBundle, list[Path]]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    formats = set(formats)
    written = []
    artifacts = []
    if "svg" in formats and len(curve.stats) >= 2:
        path = out / SVG_FILE
        path.write_bytes(render_loss_plot(curve.stats, verdict, title=curve_ref))
        written.append(path)
        artifacts.append(SVG_FILE)
    bundle = make_bundle(curve, verdict, curve_ref, generated_at, artifacts)
    for fmt, name in (("json", JSON_FILE), ("markdown", MARKDOWN_FILE)):
        if fmt in formats:
            path = out / name
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(emit_report(bundle, fmt))
            written.append(path)
    return bundle, written
