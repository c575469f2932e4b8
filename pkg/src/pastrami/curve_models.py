"""Closed-form synthetic load-loss curves and a binomial run sampler.

Two models are provided:

* ``ideal``: no loss up to the saturation load, then throughput stays pinned
  at the saturation throughput so PLR = 1 - t_sat / O.
* ``realistic``: a small loss ramp below saturation (log-linear in PLR between
  two anchor points), non-zero loss at saturation, a flat throughput plateau up
  to the trashing load and then a linear throughput collapse with slope
  ``t_sat / m`` that clamps at zero.

The piecewise trashing factor is evaluated on the absolute offered load, which
is what reproduces the published reference numbers (0.99 Mpps at 1.2 Mpps,
0.495 Mpps at 2.0 Mpps for o_sat=1, plr_at_sat=1%, o_trash=1.5, m=1 Mpps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from pastrami.metrics import InvalidInputError, RunObservation

IDEAL = "ideal"
REALISTIC = "realistic"

DEFAULT_PLR_FLOOR = 1e-6
DEFAULT_FLOOR_FRACTION = 0.5


@dataclass(frozen=True)
class SyntheticModel:
    o_sat: float
    plr_at_sat: float = 0.0
    o_trash: Optional[float] = None
    m: Optional[float] = None
    pre_sat_ramp: Optional[tuple[float, float]] = None  # (plr_floor, o_floor)
    mode: str = IDEAL

    def __post_init__(self) -> None:
        if self.mode not in (IDEAL, REALISTIC):
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if not self.o_sat > 0:
            raise InvalidInputError("o_sat must be > 0")
        if not 0 <= self.plr_at_sat < 1:
            raise InvalidInputError("plr_at_sat must be in [0, 1)")
        if self.mode == IDEAL:
            if self.plr_at_sat != 0:
                raise InvalidInputError("ideal model has plr_at_sat = 0")
            if self.pre_sat_ramp is not None:
                raise InvalidInputError("ideal model has no pre-saturation ramp")
            return
        if self.o_trash is None or self.m is None:
            raise InvalidInputError("realistic model needs o_trash and m")
        if self.o_trash < self.o_sat:
            raise InvalidInputError(
                f"o_trash ({self.o_trash}) must be >= o_sat ({self.o_sat})"
            )
        if not self.m > 0:
            raise InvalidInputError("m must be > 0")
        plr_floor, o_floor = self.ramp
        if not 0 <= plr_floor <= self.plr_at_sat:
            raise InvalidInputError("ramp plr_floor must be in [0, plr_at_sat]")
        if not 0 < o_floor < self.o_sat:
            raise InvalidInputError("ramp o_floor must be in (0, o_sat)")

    @classmethod
    def ideal(cls, o_sat: float) -> "SyntheticModel":
        return cls(o_sat=o_sat, mode=IDEAL)

    @classmethod
    def realistic(
        cls,
        o_sat: float,
        plr_at_sat: float,
        o_trash: float,
        m: float,
        pre_sat_ramp: Optional[tuple[float, float]] = None,
    ) -> "SyntheticModel":
        return cls(o_sat, plr_at_sat, o_trash, m, pre_sat_ramp, REALISTIC)

    @property
    def t_sat(self) -> float:
        return self.o_sat * (1 - self.plr_at_sat)

    @property
    def ramp(self) -> tuple[float, float]:
        """(plr_floor, o_floor), with defaults filled in for realistic mode."""
        if self.pre_sat_ramp is not None:
            return self.pre_sat_ramp
        return (min(DEFAULT_PLR_FLOOR, self.plr_at_sat), DEFAULT_FLOOR_FRACTION * self.o_sat)

    def plr(self, o: float) -> float:
        return ideal_plr(o, self) if self.mode == IDEAL else realistic_plr(o, self)

    def throughput(self, o: float) -> float:
        if self.mode == IDEAL:
            return min(o, self.t_sat)
        return realistic_throughput(o, self)


def _require_mode(model: SyntheticModel, mode: str) -> None:
    if model.mode != mode:
        raise InvalidInputError(f"expected a {mode} model, got {model.mode}")


def ideal_plr(o: float, model: SyntheticModel) -> float:
    _require_mode(model, IDEAL)
    if not o > 0:
        raise InvalidInputError("offered load must be > 0")
    if o <= model.o_sat:
        return 0.0
    return 1 - model.t_sat / o


def trashing_factor(o: float, model: SyntheticModel) -> float:
    """Throughput multiplier above saturation: 1 up to o_trash, then linear to 0."""
    if o <= model.o_trash:
        return 1.0
    return max(0.0, 1 - (o - model.o_trash) / model.m)


def _ramp_plr(o: float, model: SyntheticModel) -> float:
    plr_floor, o_floor = model.ramp
    if o < o_floor:
        return 0.0
    if o >= model.o_sat:
        return model.plr_at_sat
    frac = (o - o_floor) / (model.o_sat - o_floor)
    if plr_floor > 0 and model.plr_at_sat > 0:
        lo, hi = math.log10(plr_floor), math.log10(model.plr_at_sat)
        return 10 ** (lo + frac * (hi - lo))
    # log-linear needs positive anchors
    return plr_floor + frac * (model.plr_at_sat - plr_floor)


def realistic_throughput(o: float, model: SyntheticModel) -> float:
    """Delivered rate at offered load ``o``.

    Above saturation this is ``t_sat * trashing_factor(o)``. At or below
    saturation it is ``o * (1 - ramp PLR)``, which meets ``t_sat`` at ``o_sat``.
    """
    _require_mode(model, REALISTIC)
    if o <= model.o_sat:
        return o * (1 - _ramp_plr(o, model))
    return model.t_sat * trashing_factor(o, model)


def realistic_plr(o: float, model: SyntheticModel) -> float:
    _require_mode(model, REALISTIC)
    if not o > 0:
        raise InvalidInputError("offered load must be > 0")
    if o <= model.o_sat:
        return _ramp_plr(o, model)
    return 1 - realistic_throughput(o, model) / o


def _check_sweep(loads: Sequence[float], duration: float, k: int) -> None:
    if len(loads) == 0:
        raise InvalidInputError("empty load list")
    if any(b <= a for a, b in zip(loads, loads[1:])):
        raise InvalidInputError("loads must be strictly increasing")
    if loads[0] <= 0:
        raise InvalidInputError("loads must be > 0")
    if not duration > 0:
        raise InvalidInputError("duration must be > 0")
    if k < 1:
        raise InvalidInputError("k must be >= 1")


def sample_runs(
    plr_of: Callable[[float], float],
    loads: Sequence[float],
    duration: float,
    k: int,
    seed: int,
) -> list[RunObservation]:
    """Draw ``k`` binomial runs per load from an arbitrary loss-ratio function.

    Each packet is lost independently with probability ``plr_of(load)``.
    The generator is private to the call, so equal seeds give equal output.
    """
    _check_sweep(loads, duration, k)
    rng = np.random.default_rng(seed)
    out = []
    for load in loads:
        sent = int(round(load * duration))
        p_loss = min(max(plr_of(load), 0.0), 1.0)
        delivered = rng.binomial(sent, 1.0 - p_loss, size=k)
        out.extend(RunObservation(load, duration, sent, int(n)) for n in delivered)
    return out


def sample_campaign(
    model: SyntheticModel,
    loads: Sequence[float],
    duration: float,
    k: int,
    seed: int,
) -> list[RunObservation]:
    return sample_runs(model.plr, loads, duration, k, seed)


def expected_runs(
    plr_of: Callable[[float], float],
    loads: Sequence[float],
    duration: float,
    k: int = 1,
) -> list[RunObservation]:
    """Noiseless counterpart of :func:`sample_runs`: delivered = round(expected)."""
    _check_sweep(loads, duration, k)
    out = []
    for load in loads:
        sent = int(round(load * duration))
        delivered = int(round(sent * (1.0 - min(max(plr_of(load), 0.0), 1.0))))
        out.extend(RunObservation(load, duration, sent, delivered) for _ in range(k))
    return out


def expected_campaign(
    model: SyntheticModel, loads: Sequence[float], duration: float, k: int = 1
) -> list[RunObservation]:
    return expected_runs(model.plr, loads, duration, k)


def piecewise_throughput(knots: Sequence[tuple[float, float]]) -> Callable[[float], float]:
    """Loss-ratio function from a piecewise-linear throughput profile.

    ``knots`` are (offered_load, throughput) points with increasing load.
    Below the first knot throughput equals the offered load (no loss); beyond
    the last knot throughput is held constant. Handy for building shapes the
    two closed-form models cannot express, such as a slow knee.
    """
    xs = [float(x) for x, _ in knots]
    ys = [float(y) for _, y in knots]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InvalidInputError("knot loads must be strictly increasing")

    def plr(o: float) -> float:
        if o <= xs[0]:
            return 0.0
        t = float(np.interp(o, xs, ys))
        return min(max(1 - t / o, 0.0), 1.0)

    return plr
