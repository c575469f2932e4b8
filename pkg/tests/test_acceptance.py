"""Acceptance checks. A per-criterion PASS/FAIL summary is printed at the end of the run."""

import json
import math
import time

import pytest

from conftest import CAMPAIGNS, MALFORMED, MPPS, ideal_grid, level_from_plrs
from pastrami.cli import main
from pastrami.curve_models import (
    SyntheticModel,
    expected_campaign,
    piecewise_throughput,
    realistic_plr,
    realistic_throughput,
    sample_campaign,
    sample_runs,
)
from pastrami.ingest import (
    CampaignError,
    LoadLossCurve,
    read_campaign,
    runs_csv_text,
    synthetic_metadata,
    write_campaign,
)
from pastrami.metrics import aggregate_level, t_critical
from pastrami.report import emit_report, make_bundle, validate_report
from pastrami.saturation import BAD, GOOD, NO_SATURATION, detect_saturation

REF = SyntheticModel.realistic(1 * MPPS, 0.01, 1.5 * MPPS, 1 * MPPS)


def c(n, title):
    return pytest.mark.criterion(n, title)


C1 = c(1, "ideal-curve oracle")
C2 = c(2, "realistic-curve oracle")
C3 = c(3, "GOOD/BAD shape discrimination")
C4 = c(4, "CI machinery")
C5 = c(5, "CI coverage property")
C6 = c(6, "determinism and round trip")
C7 = c(7, "degenerate inputs")


# criterion 1 ---------------------------------------------------------------

def ideal_analysis():
    model = SyntheticModel.ideal(1 * MPPS)
    loads = ideal_grid(0.05, 2.0)
    curve = LoadLossCurve.from_runs(synthetic_metadata(1, 10.0), expected_campaign(model, loads, 10.0))
    return curve, detect_saturation(curve, 0.005, 0.1)


@C1
def test_c1_pdr_within_one_step():
    curve, v = ideal_analysis()
    target = MPPS / 0.995
    assert target / MPPS == pytest.approx(1.00503, abs=5e-6)
    assert abs(v.pdr_load - target) <= 0.05 * MPPS
    print(f"PDR@0.5% = {v.pdr_load / MPPS:.6f} Mpps (oracle {target / MPPS:.6f})")


@C1
def test_c1_tir_zero_and_good():
    _, v = ideal_analysis()
    assert v.tir_series and all(p.tir == 0 for p in v.tir_series)
    assert v.classification == GOOD


@C1
def test_c1_runtime():
    t0 = time.perf_counter()
    ideal_analysis()
    elapsed = time.perf_counter() - t0
    print(f"ideal synth+analysis: {elapsed:.3f} s")
    assert elapsed < 1.0


# criterion 2 ---------------------------------------------------------------

@C2
def test_c2_closed_form_at_2mpps():
    assert abs(realistic_throughput(2.0 * MPPS, REF) - 0.495 * MPPS) <= 1e-12 * MPPS
    assert abs(realistic_plr(2.0 * MPPS, REF) - 0.7525) <= 1e-12


@C2
def test_c2_plr_one_where_throughput_zero():
    # under these parameters the throughput formula first reaches 0 at 2.5 Mpps
    assert realistic_throughput(2.5 * MPPS, REF) == 0
    assert realistic_plr(2.5 * MPPS, REF) == 1.0
    assert realistic_throughput(2.49 * MPPS, REF) > 0


@C2
def test_c2_plr_exactly_one_at_2_49_mpps():
    # stated literally by the criterion; the closed form gives 1 - 0.0099/2.49 here
    plr = realistic_plr(2.49 * MPPS, REF)
    print(f"realistic_plr(2.49 Mpps) = {plr!r}")
    assert plr == 1.0


# criterion 3 ---------------------------------------------------------------

LOADS_3 = ideal_grid(0.1, 2.0)
GRADUAL = piecewise_throughput([(0.9 * MPPS, 0.9 * MPPS), (1.5 * MPPS, 1.2 * MPPS)])


def sharp_curve(seed):
    runs = sample_campaign(REF, LOADS_3, 1.0, 10, seed)
    return LoadLossCurve.from_runs(synthetic_metadata(10, 1.0), runs)


def gradual_curve(seed):
    runs = sample_runs(GRADUAL, LOADS_3, 1.0, 10, seed)
    return LoadLossCurve.from_runs(synthetic_metadata(10, 1.0), runs)


@C3
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_c3_sharp_is_good(seed):
    v = detect_saturation(sharp_curve(seed), 0.005, 0.1)
    assert v.tir_series[0].tir < 0.1
    assert v.classification == GOOD


@C3
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_c3_gradual_is_bad(seed):
    v = detect_saturation(gradual_curve(seed), 0.005, 0.1)
    half = [p.tir for p in v.tir_series[:3]]
    assert len(half) == 3 and all(abs(t - 0.5) < 0.05 for t in half)
    assert v.classification == BAD


@C3
def test_c3_deterministic():
    for build in (sharp_curve, gradual_curve):
        a, b = build(9), build(9)
        assert runs_csv_text(a) == runs_csv_text(b)
        assert detect_saturation(a) == detect_saturation(b)


# criterion 4 ---------------------------------------------------------------

@C4
@pytest.mark.parametrize("df, table", [(29, 2.045), (49, 2.010)])
def test_c4_t_critical(df, table):
    assert abs(t_critical(df) - table) <= 1e-3


@C4
@pytest.mark.parametrize(
    "plrs",
    [[0.004, 0.006], [0.001, 0.002, 0.003, 0.004, 0.005], [0.01] * 4 + [0.02] * 26, [0.1, 0.3, 0.2]],
)
def test_c4_ci_width(plrs):
    lv = level_from_plrs(plrs)
    k = len(plrs)
    assert abs((lv.ucl95 - lv.lcl95) - 2 * t_critical(k - 1) * lv.sigma_plr / math.sqrt(k)) <= 1e-12


# criterion 5 ---------------------------------------------------------------

@C5
def test_c5_coverage():
    p, n, k, campaigns = 0.005, 10_000_000, 50, 1000
    flat = piecewise_throughput([(1.0, 1.0 - p), (1e9, (1.0 - p) * 1e9)])
    t0 = time.perf_counter()
    hits = 0
    for seed in range(campaigns):
        lv = aggregate_level(sample_runs(flat, [MPPS], n / MPPS, k, seed))
        hits += lv.lcl95 <= p <= lv.ucl95
    elapsed = time.perf_counter() - t0
    freq = hits / campaigns
    print(f"coverage {freq:.3f} over {campaigns} campaigns in {elapsed:.2f} s")
    assert 0.93 <= freq <= 0.97
    assert elapsed < 30


# criterion 6 ---------------------------------------------------------------

@C6
def test_c6_sample_campaign_bytes(tmp_path):
    def write(dst):
        runs = sample_campaign(REF, ideal_grid(0.1, 2.5), 10.0, 50, seed=7)
        write_campaign(LoadLossCurve.from_runs(synthetic_metadata(50, 10.0), runs), dst)
        return [(dst / f).read_bytes() for f in ("metadata.json", "runs.csv")]

    assert write(tmp_path / "a") == write(tmp_path / "b")


@C6
@pytest.mark.parametrize("name", sorted(p.name for p in CAMPAIGNS.iterdir()))
def test_c6_fixture_round_trip(name, tmp_path):
    src = CAMPAIGNS / name
    curve = read_campaign(src)
    write_campaign(curve, tmp_path)
    for f in ("metadata.json", "runs.csv"):
        assert (tmp_path / f).read_bytes() == (src / f).read_bytes()
    assert read_campaign(tmp_path) == curve


@C6
@pytest.mark.parametrize("name", sorted(p.name for p in CAMPAIGNS.iterdir()))
def test_c6_report_schema(name):
    curve = read_campaign(CAMPAIGNS / name)
    validate_report(json.loads(emit_report(make_bundle(curve, detect_saturation(curve), name))))


# criterion 7 ---------------------------------------------------------------

@C7
def test_c7_zero_loss_exit_4(tmp_path, monkeypatch):
    monkeypatch.setenv("PASTRAMI_NO_COLOR", "1")
    write_campaign(read_campaign(CAMPAIGNS / "zero_loss"), tmp_path)
    assert main(["analyze", str(tmp_path)]) == 4
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["classification"] == NO_SATURATION
    assert doc["sweep_exhausted"] is True and doc["pdr_load_pps"] == read_campaign(tmp_path).loads[-1]


@C7
def test_c7_first_level_over_pdr_absent():
    v = detect_saturation(read_campaign(CAMPAIGNS / "first_over"))
    assert v.pdr is None and v.pdr_load is None
    assert v.potential_sat_index == 0


@C7
def test_c7_single_run_levels():
    curve = read_campaign(CAMPAIGNS / "single_run")
    assert all(s.k == 1 and s.sigma_plr is None and s.lcl95 is None and s.ucl95 is None
               and s.delta_ucl95 is None for s in curve.stats)
    validate_report(json.loads(emit_report(make_bundle(curve, detect_saturation(curve), "k1"))))


@C7
@pytest.mark.parametrize("name", sorted(p.name for p in MALFORMED.iterdir()))
def test_c7_malformed_structured(name, capsys):
    with pytest.raises(CampaignError) as info:
        read_campaign(MALFORMED / name)
    assert info.value.rule and info.value.file
    assert main(["analyze", str(MALFORMED / name)]) == 1
    assert "violates rule" in capsys.readouterr().err
