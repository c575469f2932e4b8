"""Saturation detection on a load sweep and the GOOD/BAD verdict for PDR.

The Throughput Increase Ratio between two loads is dT/dO: the share of the
extra offered load that actually comes out of the router. Once PLR first
exceeds the PDR threshold, every following step must keep TIR below ``eta``
for the sweep to count as GOOD, i.e. for PDR to sit right at the knee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional, Sequence

from pastrami.metrics import InvalidInputError, LoadLevelStats

GOOD = "GOOD"
BAD = "BAD"
NO_SATURATION = "NO_SATURATION"

DEFAULT_PDR_THRESHOLD = 0.005
DEFAULT_ETA = 0.1

INSUFFICIENT_EVIDENCE = "no load levels beyond the potential saturation point"
NEVER_CROSSED = "sweep never crossed PDR threshold"


class PdrEstimate(NamedTuple):
    load: float  # interpolated crossing load, pps
    grid_load: float  # last sampled load at or below the threshold
    sweep_exhausted: bool


@dataclass(frozen=True)
class TirPoint:
    load_a: float
    load_b: float
    tir: float


@dataclass(frozen=True)
class SaturationVerdict:
    classification: str
    eta: float
    pdr_threshold: float
    pdr: Optional[PdrEstimate] = None
    potential_sat_index: Optional[int] = None
    tir_series: tuple[TirPoint, ...] = field(default_factory=tuple)
    entered_saturation: bool = False
    saturation_index: Optional[int] = None
    reason: str = ""

    @property
    def pdr_load(self) -> Optional[float]:
        return None if self.pdr is None else self.pdr.load

    @property
    def violations(self) -> list[TirPoint]:
        return [p for p in self.tir_series if not p.tir < self.eta]


class PdrAccuracy(NamedTuple):
    accurate: bool
    reason: str


# a LoadLossCurve, or anything with a .stats sequence, or the stats themselves
CurveLike = Any


def _levels(curve: CurveLike) -> list[LoadLevelStats]:
    levels = list(getattr(curve, "stats", curve))
    if len(levels) < 2:
        raise InvalidInputError("need at least 2 load levels")
    for a, b in zip(levels, levels[1:]):
        if not b.offered_load > a.offered_load:
            raise InvalidInputError(
                f"offered loads must be strictly increasing ({a.offered_load} then {b.offered_load})"
            )
    return levels


def tir(level_a: LoadLevelStats, level_b: LoadLevelStats) -> float:
    d_load = level_b.offered_load - level_a.offered_load
    if d_load == 0:
        raise InvalidInputError("TIR undefined for equal offered loads")
    if d_load < 0:
        raise InvalidInputError("level_b must have the higher offered load")
    return (level_b.throughput - level_a.throughput) / d_load


def _first_crossing(levels: Sequence[LoadLevelStats], threshold: float) -> Optional[int]:
    return next((i for i, lv in enumerate(levels) if lv.plr > threshold), None)


def pdr_at(curve: CurveLike, threshold: float = DEFAULT_PDR_THRESHOLD) -> Optional[PdrEstimate]:
    """Highest offered load whose PLR stays within ``threshold``.

    The crossing is refined by linear interpolation in (load, PLR) between the
    last compliant level and the first violating one. Returns ``None`` when the
    very first level already exceeds the threshold, and the top load with
    ``sweep_exhausted`` set when no level does.
    """
    levels = _levels(curve)
    c = _first_crossing(levels, threshold)
    if c is None:
        top = levels[-1].offered_load
        return PdrEstimate(top, top, True)
    if c == 0:
        return None
    a, b = levels[c - 1], levels[c]
    frac = (threshold - a.plr) / (b.plr - a.plr)
    load = a.offered_load + frac * (b.offered_load - a.offered_load)
    return PdrEstimate(load, a.offered_load, False)


def detect_saturation(
    curve: CurveLike,
    pdr_threshold: float = DEFAULT_PDR_THRESHOLD,
    eta: float = DEFAULT_ETA,
) -> SaturationVerdict:
    """Run the saturation walk over a sweep and classify it.

    1. The first level with PLR above ``pdr_threshold`` is the potential
       saturation point; without one the sweep is NO_SATURATION.
    2. TIR is computed for every consecutive pair from that point on.
    3. TIR < eta marks the system as saturated; TIR >= eta clears the mark.
    4. GOOD only if saturation is marked on the first pair and never cleared.

    The potential point is fixed once; a later PLR dip does not move it.
    """
    if not 0 < eta < 1:
        raise InvalidInputError("eta must be in (0, 1)")
    if not 0 < pdr_threshold < 1:
        raise InvalidInputError("pdr_threshold must be in (0, 1)")
    levels = _levels(curve)
    pdr = pdr_at(levels, pdr_threshold)
    common = dict(eta=eta, pdr_threshold=pdr_threshold, pdr=pdr)

    start = _first_crossing(levels, pdr_threshold)
    if start is None:
        return SaturationVerdict(NO_SATURATION, reason=NEVER_CROSSED, **common)

    series = tuple(
        TirPoint(a.offered_load, b.offered_load, tir(a, b))
        for a, b in zip(levels[start:], levels[start + 1 :])
    )
    if not series:
        return SaturationVerdict(
            BAD, potential_sat_index=start, reason=INSUFFICIENT_EVIDENCE, **common
        )

    in_saturation = False
    sat_index = None
    for offset, point in enumerate(series):
        if point.tir < eta:
            if not in_saturation:
                in_saturation = True
                sat_index = start + offset
        else:
            in_saturation = False
            sat_index = None

    good = sat_index == start and in_saturation
    if good:
        reason = "saturated from the potential saturation point to the end of the sweep"
    elif in_saturation:
        reason = "saturation onset delayed past the potential saturation point"
    else:
        reason = "not in saturation at the end of the sweep"
    return SaturationVerdict(
        GOOD if good else BAD,
        potential_sat_index=start,
        tir_series=series,
        entered_saturation=in_saturation,
        saturation_index=sat_index,
        reason=reason,
        **common,
    )


def assess_pdr_accuracy(verdict: SaturationVerdict) -> PdrAccuracy:
    if verdict.classification == GOOD:
        return PdrAccuracy(True, "TIR below eta at every step past the PDR crossing")
    if verdict.classification == NO_SATURATION:
        return PdrAccuracy(False, NEVER_CROSSED)
    bad = verdict.violations
    if not bad:
        return PdrAccuracy(False, verdict.reason or INSUFFICIENT_EVIDENCE)
    pairs = ", ".join(
        f"{p.load_a / 1e6:g}->{p.load_b / 1e6:g} Mpps (TIR={p.tir:.3g})" for p in bad
    )
    return PdrAccuracy(False, f"TIR >= eta={verdict.eta:g} at {pairs}")
