"""``pastrami`` command line: analyze, synth, compare.

Exit codes (stable):
  analyze  0 GOOD, 3 BAD, 4 NO_SATURATION, 1 input error
  synth    0 ok, 2 invalid model parameters
  compare  0 ok, 1 fewer than two campaigns or an unreadable campaign
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional, Sequence

from pastrami import __version__
from pastrami.curve_models import IDEAL, REALISTIC, SyntheticModel, sample_campaign
from pastrami.ingest import LoadLossCurve, read_campaign, synthetic_metadata, write_campaign
from pastrami.metrics import DEFAULT_TX_TOLERANCE, InvalidInputError
from pastrami.report import write_reports
from pastrami.saturation import (
    BAD,
    DEFAULT_ETA,
    DEFAULT_PDR_THRESHOLD,
    GOOD,
    NO_SATURATION,
    SaturationVerdict,
    assess_pdr_accuracy,
    detect_saturation,
)

log = logging.getLogger("pastrami")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARAMS = 2
EXIT_BAD = 3
EXIT_NO_SATURATION = 4

CLASS_EXIT = {GOOD: EXIT_OK, BAD: EXIT_BAD, NO_SATURATION: EXIT_NO_SATURATION}

_FORMAT_ALIASES = {"json": "json", "md": "markdown", "markdown": "markdown", "svg": "svg"}


@dataclass
class CliConfig:
    pdr_threshold: float = DEFAULT_PDR_THRESHOLD
    eta: float = DEFAULT_ETA
    tx_tolerance: float = DEFAULT_TX_TOLERANCE
    output_dir: Optional[Path] = None
    seed: Optional[int] = None
    formats: set = field(default_factory=lambda: {"json", "markdown", "svg"})

    def __post_init__(self) -> None:
        for name in ("pdr_threshold", "eta", "tx_tolerance"):
            if not 0 < getattr(self, name) < 1:
                raise InvalidInputError(f"{name.replace('_', '-')} must be in (0, 1)")


def _color(text: str, code: str) -> str:
    if os.environ.get("PASTRAMI_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


_CLASS_COLOR = {GOOD: "32;1", BAD: "31;1", NO_SATURATION: "33;1"}


def parse_loads(spec: str) -> list[int]:
    """``start:stop:step`` in Mpps, inclusive stop, to integer pps."""
    try:
        start, stop, step = (Decimal(p) for p in spec.split(":"))
    except (ValueError, InvalidOperation):
        raise InvalidInputError(f"loads spec {spec!r} is not start:stop:step") from None
    if step <= 0 or start <= 0 or stop < start:
        raise InvalidInputError(f"loads spec {spec!r} needs 0 < start <= stop and step > 0")
    loads = []
    x = start
    while x <= stop:
        loads.append(int((x * 1_000_000).to_integral_value()))
        x += step
    return loads


def parse_formats(text: str) -> set:
    out = set()
    for part in text.split(","):
        part = part.strip().lower()
        if part not in _FORMAT_ALIASES:
            raise argparse.ArgumentTypeError(f"unknown format {part!r} (json, md, svg)")
        out.add(_FORMAT_ALIASES[part])
    return out


def _ratio(text: str) -> float:
    x = float(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return x


def analyze_campaign(path: Path, config: CliConfig) -> tuple[LoadLossCurve, SaturationVerdict]:
    curve = read_campaign(path, config.tx_tolerance)
    for w in curve.warnings:
        log.warning("%s: %s", path, w)
    verdict = detect_saturation(curve, config.pdr_threshold, config.eta)
    return curve, verdict


def _print_levels(curve: LoadLossCurve, out) -> None:
    print("load_mpps\tk\tplr\tdr\tthroughput_mpps\tsigma_plr\tlcl95\tucl95\tdelta_ucl95", file=out)
    for s in curve.stats:
        opt = lambda x: "" if x is None else f"{x:.6e}"  # noqa: E731
        print(
            f"{s.offered_load / 1e6:.6g}\t{s.k}\t{s.plr:.6e}\t{s.dr:.6f}\t{s.throughput / 1e6:.6g}"
            f"\t{opt(s.sigma_plr)}\t{opt(s.lcl95)}\t{opt(s.ucl95)}\t{opt(s.delta_ucl95)}",
            file=out,
        )


def cmd_analyze(args: argparse.Namespace) -> int:
    path = Path(args.campaign)
    try:
        config = CliConfig(args.pdr_threshold, args.eta, args.tx_tolerance, args.out, formats=args.format)
        curve, verdict = analyze_campaign(path, config)
        out_dir = config.output_dir or path
        _, written = write_reports(curve, verdict, out_dir, path.name, config.formats)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    _print_levels(curve, sys.stdout)
    acc = assess_pdr_accuracy(verdict)
    pdr = "absent" if verdict.pdr_load is None else f"{verdict.pdr_load / 1e6:.6g} Mpps"
    if verdict.pdr is not None and verdict.pdr.sweep_exhausted:
        pdr += " (sweep exhausted)"
    cls = verdict.classification
    print(f"# classification\t{_color(cls, _CLASS_COLOR[cls])}")
    print(f"# pdr@{config.pdr_threshold * 100:g}%\t{pdr}")
    print(f"# pdr_accurate\t{'yes' if acc.accurate else 'no'}\t{acc.reason}")
    for p in written:
        print(f"# wrote\t{p}")
    return CLASS_EXIT[cls]


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        if args.mode == IDEAL:
            model = SyntheticModel.ideal(args.o_sat * 1e6)
        else:
            ramp = None
            if args.plr_floor is not None or args.o_floor is not None:
                plr_floor = 1e-6 if args.plr_floor is None else args.plr_floor
                o_floor = 0.5 * args.o_sat if args.o_floor is None else args.o_floor
                ramp = (plr_floor, o_floor * 1e6)
            model = SyntheticModel.realistic(
                args.o_sat * 1e6, args.plr_at_sat, args.o_trash * 1e6, args.m * 1e6, ramp
            )
        loads = parse_loads(args.loads)
        if args.k < 1 or not args.duration > 0:
            raise InvalidInputError("k must be >= 1 and duration > 0")
        runs = sample_campaign(model, loads, args.duration, args.k, args.seed)
        meta = synthetic_metadata(
            args.k, args.duration, date=args.date,
            synthetic_model=_model_record(model, args.seed),
        )
        curve = LoadLossCurve.from_runs(meta, runs)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    try:
        write_campaign(curve, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {len(runs)} runs over {len(loads)} loads to {args.out}")
    return EXIT_OK


def _model_record(model: SyntheticModel, seed: int) -> dict:
    rec = {"mode": model.mode, "o_sat_pps": model.o_sat, "seed": seed}
    if model.mode == REALISTIC:
        plr_floor, o_floor = model.ramp
        rec.update(
            plr_at_sat=model.plr_at_sat, o_trash_pps=model.o_trash, m_pps=model.m,
            plr_floor=plr_floor, o_floor_pps=o_floor,
        )
    return rec


def cmd_compare(args: argparse.Namespace) -> int:
    paths = [Path(p) for p in args.campaigns]
    if len(paths) < 2:
        print("error: compare needs at least two campaigns", file=sys.stderr)
        return EXIT_INPUT
    try:
        config = CliConfig(args.pdr_threshold, args.eta, args.tx_tolerance)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    def one(path: Path):
        try:
            return analyze_campaign(path, config)
        except (InvalidInputError, OSError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max(1, args.parallel)) as pool:
        results = list(pool.map(one, paths))
    failed = [(p, r) for p, r in zip(paths, results) if isinstance(r, Exception)]
    if failed:
        for p, exc in failed:
            print(f"error: {p}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    print("campaign\tpdr_mpps\tclassification\tmax_delta_ucl95\tnote")
    for path, (curve, verdict) in zip(paths, results):
        pdr = "" if verdict.pdr_load is None else f"{verdict.pdr_load / 1e6:.6g}"
        deltas = [s.delta_ucl95 for s in curve.stats if s.delta_ucl95 is not None]
        max_delta = f"{max(deltas):.4g}" if deltas else ""
        cls = verdict.classification
        note = ""
        if cls == BAD:
            note = "! PDR unreliable: no sharp saturation past the PDR point"
        elif cls == NO_SATURATION:
            note = "! sweep never crossed the PDR threshold"
        print(f"{path}\t{pdr}\t{_color(cls, _CLASS_COLOR[cls])}\t{max_delta}\t{note}")
    return EXIT_OK


def _add_thresholds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pdr-threshold", type=_ratio, default=DEFAULT_PDR_THRESHOLD,
                   help="loss ratio defining PDR (0.005 = PDR@0.5%%)")
    p.add_argument("--eta", type=_ratio, default=DEFAULT_ETA,
                   help="TIR below this marks saturation")
    p.add_argument("--tx-tolerance", type=_ratio, default=DEFAULT_TX_TOLERANCE,
                   help="allowed relative gap between offered_count and load*duration")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="pastrami", formatter_class=fmt,
        description="Analyze software-router load sweeps: PLR/DR statistics, PDR, saturation verdicts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", formatter_class=fmt, help="analyze one campaign directory")
    p.add_argument("campaign", help="directory with metadata.json and runs.csv")
    _add_thresholds(p)
    p.add_argument("--out", type=Path, default=None, help="report directory (default: the campaign directory)")
    p.add_argument("--format", type=parse_formats, default="json,md,svg",
                   help="comma-separated report formats: json, md, svg")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", formatter_class=fmt, help="write a synthetic campaign")
    p.add_argument("--mode", choices=(IDEAL, REALISTIC), default=IDEAL)
    p.add_argument("--o-sat", type=float, default=1.0, help="saturation offered load [Mpps]")
    p.add_argument("--plr-at-sat", type=float, default=0.01, help="PLR at o_sat (realistic)")
    p.add_argument("--o-trash", type=float, default=1.5, help="trashing load [Mpps] (realistic)")
    p.add_argument("--m", type=float, default=1.0, help="throughput decay scale [Mpps] (realistic)")
    p.add_argument("--plr-floor", type=float, default=None,
                   help="PLR at the start of the pre-saturation ramp (realistic; default 1e-6)")
    p.add_argument("--o-floor", type=float, default=None,
                   help="load where the ramp starts [Mpps] (realistic; default 0.5*o_sat)")
    p.add_argument("--loads", default="0.1:2.0:0.1", help="start:stop:step in Mpps, stop inclusive")
    p.add_argument("--k", type=int, default=50, help="runs per load")
    p.add_argument("--duration", type=float, default=10.0, help="run duration [s]")
    p.add_argument("--seed", type=int, required=True, help="RNG seed")
    p.add_argument("--date", default="1970-01-01", help="ISO date recorded in metadata")
    p.add_argument("--out", type=Path, required=True, help="campaign directory to write")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", formatter_class=fmt, help="tabulate PDR and verdicts of several campaigns")
    p.add_argument("campaigns", nargs="*", help="two or more campaign directories")
    _add_thresholds(p)
    p.add_argument("--parallel", type=int, default=1, help="campaigns analyzed concurrently")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
