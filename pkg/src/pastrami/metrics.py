"""Per-load loss statistics: PLR, DR, throughput, sample spread and t-based CIs.

All rates are packets per second. A run is one repetition of duration T at a
constant offered load O; the generator reports how many packets it sent
(nominally O*T) and the receiver how many came back (N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from pastrami._ttable import T975

#: 0.975 quantile of the standard normal, the df -> infinity limit.
Z975 = 1.959963984540054

#: Largest df served from the embedded table.
TABLE_MAX_DF = len(T975) - 1

DEFAULT_TX_TOLERANCE = 0.01


class InvalidInputError(ValueError):
    """Raised when an operation's inputs violate its preconditions."""


@dataclass(frozen=True)
class RunObservation:
    """One repetition at one offered load."""

    offered_load: float
    duration: float
    offered_count: int
    delivered_count: int

    def __post_init__(self) -> None:
        if not self.offered_load > 0:
            raise InvalidInputError(f"offered_load must be > 0, got {self.offered_load}")
        if not self.duration > 0:
            raise InvalidInputError(f"duration must be > 0, got {self.duration}")
        if not self.offered_count >= self.delivered_count >= 0:
            raise InvalidInputError(
                "need offered_count >= delivered_count >= 0, got "
                f"{self.offered_count}/{self.delivered_count}"
            )

    @property
    def lost_count(self) -> int:
        return self.offered_count - self.delivered_count

    @property
    def nominal_count(self) -> float:
        return self.offered_load * self.duration

    def tx_error(self) -> float:
        """Relative deviation of the transmitted count from O*T."""
        return abs(self.offered_count - self.nominal_count) / self.nominal_count

    def check_tx(self, tx_tolerance: float = DEFAULT_TX_TOLERANCE) -> None:
        if self.tx_error() > tx_tolerance:
            raise InvalidInputError(
                f"offered_count {self.offered_count} deviates from offered_load*duration "
                f"{self.nominal_count:g} by {self.tx_error():.4%} (> {tx_tolerance:.2%})"
            )


@dataclass(frozen=True)
class LoadLevelStats:
    """Aggregated statistics over the K runs at a single offered load.

    ``sigma_plr``, ``lcl95``, ``ucl95`` are ``None`` when ``k == 1``;
    ``delta_ucl95`` is also ``None`` when ``plr == 0``.
    """

    offered_load: float
    k: int
    plr: float
    dr: float
    throughput: float
    sigma_plr: Optional[float] = None
    lcl95: Optional[float] = None
    ucl95: Optional[float] = None
    delta_ucl95: Optional[float] = None

    @property
    def has_ci(self) -> bool:
        return self.sigma_plr is not None


def run_plr(run: RunObservation) -> float:
    """Loss ratio of a single run, (sent - delivered) / sent."""
    if run.offered_count == 0:
        raise InvalidInputError("offered_count is 0; loss ratio undefined")
    return (run.offered_count - run.delivered_count) / run.offered_count


def t_critical(df: int, cutoff: int = 10_000) -> float:
    """Upper 0.975 quantile of Student's t with ``df`` degrees of freedom.

    df <= 100 comes from an embedded table; between the table and ``cutoff``
    a Cornish-Fisher expansion is used (error well below 1e-6 there); beyond
    ``cutoff`` the normal limit 1.959964 is returned.
    """
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise InvalidInputError(f"df must be a positive integer, got {df!r}")
    df = int(df)
    if df <= TABLE_MAX_DF:
        return T975[df]
    if df > cutoff:
        return Z975
    z = Z975
    g1 = (z**3 + z) / 4
    g2 = (5 * z**5 + 16 * z**3 + 3 * z) / 96
    g3 = (3 * z**7 + 19 * z**5 + 17 * z**3 - 15 * z) / 384
    return z + g1 / df + g2 / df**2 + g3 / df**3


def aggregate_level(runs: Sequence[RunObservation]) -> LoadLevelStats:
    """Collapse the K runs at one offered load into a :class:`LoadLevelStats`.

    PLR is the mean of the per-run loss ratios, sigma uses the K-1 divisor and
    the 95% limits are ``plr -/+ t_{K-1} * sigma / sqrt(K)``.
    """
    if not runs:
        raise InvalidInputError("cannot aggregate an empty list of runs")
    load = runs[0].offered_load
    duration = runs[0].duration
    for r in runs[1:]:
        if r.offered_load != load:
            raise InvalidInputError(f"mixed offered loads {load} and {r.offered_load}")
        if r.duration != duration:
            raise InvalidInputError(f"mixed durations {duration} and {r.duration}")

    k = len(runs)
    plrs = [run_plr(r) for r in runs]
    plr = math.fsum(plrs) / k
    throughput = math.fsum(r.delivered_count for r in runs) / (k * duration)
    stats = dict(offered_load=load, k=k, plr=plr, dr=1.0 - plr, throughput=throughput)
    if k == 1:
        return LoadLevelStats(**stats)

    sigma = math.sqrt(math.fsum((p - plr) ** 2 for p in plrs) / (k - 1))
    half = t_critical(k - 1) * sigma / math.sqrt(k)
    ucl = plr + half
    delta = (ucl - plr) / plr if plr > 0 else None
    return LoadLevelStats(
        **stats, sigma_plr=sigma, lcl95=plr - half, ucl95=ucl, delta_ucl95=delta
    )
