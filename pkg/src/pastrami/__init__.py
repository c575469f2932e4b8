"""Load-sweep analysis for software routers: loss statistics, PDR and saturation verdicts."""

__version__ = "0.1.0"

from pastrami.curve_models import (
    SyntheticModel,
    expected_campaign,
    ideal_plr,
    realistic_plr,
    realistic_throughput,
    sample_campaign,
)
from pastrami.ingest import (
    CampaignError,
    ExperimentMetadata,
    LoadLossCurve,
    read_campaign,
    write_campaign,
)
from pastrami.metrics import (
    InvalidInputError,
    LoadLevelStats,
    RunObservation,
    aggregate_level,
    run_plr,
    t_critical,
)
from pastrami.saturation import (
    SaturationVerdict,
    assess_pdr_accuracy,
    detect_saturation,
    pdr_at,
    tir,
)

__all__ = [
    "CampaignError",
    "ExperimentMetadata",
    "InvalidInputError",
    "LoadLevelStats",
    "LoadLossCurve",
    "RunObservation",
    "SaturationVerdict",
    "SyntheticModel",
    "aggregate_level",
    "assess_pdr_accuracy",
    "detect_saturation",
    "expected_campaign",
    "ideal_plr",
    "pdr_at",
    "read_campaign",
    "realistic_plr",
    "realistic_throughput",
    "run_plr",
    "sample_campaign",
    "t_critical",
    "tir",
    "write_campaign",
]
