import json
import shutil

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import CAMPAIGNS, MALFORMED, MPPS
from pastrami.curve_models import SyntheticModel, sample_campaign
from pastrami.ingest import (
    METADATA_KEYS,
    CampaignError,
    ExperimentMetadata,
    LoadLossCurve,
    read_campaign,
    synthetic_metadata,
    write_campaign,
)
from pastrami.metrics import InvalidInputError, RunObservation

VALID = sorted(p.name for p in CAMPAIGNS.iterdir())


def meta(**overrides):
    d = dict(
        experiment_class="ipv6-routing",
        testbed="cloudlab",
        environment="virtual-machine",
        kernel_version="6.8",
        cpu_pinning="pin-1-cpu",
        nic_ring_buffer="large-4096",
        runs=2,
        duration_s=10,
        packet_size_bytes=64,
        date="2024-05-01",
        version="00",
    )
    d.update(overrides)
    return ExperimentMetadata(**d)


def test_two_level_two_run(tmp_path):
    (tmp_path / "metadata.json").write_text(json.dumps(meta().to_dict()))
    (tmp_path / "runs.csv").write_text(
        "offered_load_pps,run_index,duration_s,offered_count,delivered_count\n"
        "500000,0,10,5000000,5000000\n"
        "500000,1,10,5000000,4999990\n"
        "1000000,0,10,10000000,9900000\n"
        "1000000,1,10,10000000,9800000\n"
    )
    curve = read_campaign(tmp_path)
    assert len(curve.stats) == 2
    assert curve.loads == [500_000, 1_000_000]
    assert curve.stats[1].plr == pytest.approx(0.015)
    assert curve.stats[0].k == 2
    assert curve.warnings == ()


@pytest.mark.parametrize("name", VALID)
def test_fixture_byte_round_trip(name, tmp_path):
    src = CAMPAIGNS / name
    curve = read_campaign(src)
    write_campaign(curve, tmp_path / name)
    for f in ("metadata.json", "runs.csv"):
        assert (tmp_path / name / f).read_bytes() == (src / f).read_bytes()
    assert read_campaign(tmp_path / name) == curve


def test_write_twice_identical(tmp_path):
    curve = read_campaign(CAMPAIGNS / "sharp_good")
    write_campaign(curve, tmp_path / "a")
    write_campaign(curve, tmp_path / "b")
    for f in ("metadata.json", "runs.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_k_mismatch_warning_in_notes(tmp_path):
    curve = read_campaign(CAMPAIGNS / "k_mismatch")
    assert curve.warnings == ("level 1500000 pps has 2 runs, metadata runs=4",)
    assert curve.metadata.notes == curve.warnings
    assert dict(curve.metadata.extra) == {"testbed_note": "unknown keys survive round trips"}
    assert curve.stats[-1].k == 2
    # a fresh curve with the same problem picks the note up on write
    fresh = LoadLossCurve.from_runs(synthetic_metadata(4, 1.0), curve.runs)
    write_campaign(fresh, tmp_path)
    notes = json.loads((tmp_path / "metadata.json").read_text())["notes"]
    assert notes == list(curve.warnings)


def test_metadata_key_order(tmp_path):
    write_campaign(read_campaign(CAMPAIGNS / "k_mismatch"), tmp_path)
    keys = list(json.loads((tmp_path / "metadata.json").read_text()))
    assert keys == list(METADATA_KEYS) + ["testbed_note"]


def test_runs_csv_format(tmp_path):
    write_campaign(read_campaign(CAMPAIGNS / "zero_loss"), tmp_path)
    raw = (tmp_path / "runs.csv").read_bytes()
    assert raw.startswith(b"offered_load_pps,run_index,duration_s,offered_count,delivered_count\n")
    assert b"\r" not in raw and b" \n" not in raw and b'"' not in raw
    assert raw.split(b"\n")[1] == b"100000,0,1,100000,100000"


MALFORMED_CASES = {
    "offered_zero": ("runs.csv", 4, "offered_count >= delivered_count >= 0 and > 0"),
    "delivered_gt_offered": ("runs.csv", 5, "offered_count >= delivered_count >= 0 and > 0"),
    "bad_header": ("runs.csv", 1, "header is"),
    "not_integer": ("runs.csv", 3, "offered_count is an integer"),
    "short_row": ("runs.csv", 6, "row has 5 fields"),
    "unsorted": ("runs.csv", 7, "rows sorted by (offered_load_pps, run_index)"),
    "duplicate_run": ("runs.csv", 3, "unique (offered_load_pps, run_index)"),
    "tx_mismatch": ("runs.csv", 2, "offered_count within tx_tolerance"),
    "bad_duration": ("runs.csv", 2, "duration_s > 0"),
    "missing_runs": ("runs.csv", None, "runs.csv exists"),
    "missing_metadata": ("metadata.json", None, "metadata.json exists"),
    "bad_enum": ("metadata.json", None, "metadata field constraints"),
    "bad_json": ("metadata.json", 2, "metadata.json is valid JSON"),
    "missing_key": ("metadata.json", None, "required metadata keys present"),
}


def test_every_malformed_fixture_has_a_case():
    assert sorted(MALFORMED_CASES) == sorted(p.name for p in MALFORMED.iterdir())


@pytest.mark.parametrize("name", sorted(MALFORMED_CASES))
def test_malformed_fixture(name):
    file, row, rule = MALFORMED_CASES[name]
    with pytest.raises(CampaignError) as info:
        read_campaign(MALFORMED / name)
    err = info.value
    assert err.file.endswith(file)
    assert err.row == row
    assert err.rule.startswith(rule)
    assert rule in str(err)


def test_tx_tolerance_is_configurable():
    curve = read_campaign(MALFORMED / "tx_mismatch", tx_tolerance=0.2)
    assert curve.runs[0].offered_count == 90_000


def test_not_a_directory(tmp_path):
    with pytest.raises(CampaignError, match="directory"):
        read_campaign(tmp_path / "nope")


def test_empty_runs(tmp_path):
    shutil.copy(CAMPAIGNS / "zero_loss" / "metadata.json", tmp_path)
    (tmp_path / "runs.csv").write_text("offered_load_pps,run_index,duration_s,offered_count,delivered_count\n")
    with pytest.raises(CampaignError, match="at least one run"):
        read_campaign(tmp_path)


class TestMetadata:
    def test_escapes(self):
        m = meta(experiment_class="other:srv6 end.dt4", nic_ring_buffer="custom:1024")
        assert m.to_dict()["nic_ring_buffer"] == "custom:1024"

    @pytest.mark.parametrize(
        "field, value",
        [
            ("experiment_class", "l2-bridging"),
            ("experiment_class", "other:"),
            ("environment", "cloud"),
            ("cpu_pinning", "pinned"),
            ("nic_ring_buffer", "custom:0"),
            ("nic_ring_buffer", "huge"),
            ("runs", 0),
            ("runs", 2.5),
            ("duration_s", 0),
            ("duration_s", "10"),
            ("packet_size_bytes", 0),
            ("date", "0000-00-00"),
            ("testbed", 3),
        ],
    )
    def test_invalid(self, field, value):
        with pytest.raises(InvalidInputError):
            meta(**{field: value})

    def test_notes_must_be_strings(self):
        d = meta().to_dict()
        d["notes"] = [1]
        with pytest.raises(CampaignError, match="notes"):
            ExperimentMetadata.from_dict(d)

    def test_notes_optional(self):
        d = meta().to_dict()
        del d["notes"]
        assert ExperimentMetadata.from_dict(d).notes == ()


@st.composite
def curves(draw):
    n_levels = draw(st.integers(1, 6))
    loads = sorted(draw(st.lists(st.integers(1_000, 20_000), min_size=n_levels, max_size=n_levels, unique=True)))
    duration = draw(st.sampled_from([1, 1.0, 2.5, 10]))
    k = draw(st.integers(1, 4))
    runs = []
    for load in loads:
        sent = round(load * duration)
        for _ in range(draw(st.integers(1, 4))):
            runs.append(RunObservation(load, duration, sent, draw(st.integers(0, sent))))
    notes = draw(st.lists(st.text(min_size=1, max_size=10), max_size=2))
    return LoadLossCurve.from_runs(synthetic_metadata(k, duration, notes=notes), runs)


@settings(max_examples=60, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(curves())
def test_round_trip_property(tmp_path, curve):
    write_campaign(curve, tmp_path)
    back = read_campaign(tmp_path)
    assert back == curve
    first = [(tmp_path / f).read_bytes() for f in ("metadata.json", "runs.csv")]
    write_campaign(back, tmp_path)
    assert [(tmp_path / f).read_bytes() for f in ("metadata.json", "runs.csv")] == first


def _mutate(text, line, value):
    lines = text.split("\n")
    lines[line % len(lines)] = value
    return "\n".join(lines)


@settings(max_examples=150, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 60), st.text(alphabet="0123456789,.-e x\"", max_size=40))
def test_validation_is_total(tmp_path, line, value):
    src = CAMPAIGNS / "zero_loss"
    shutil.copy(src / "metadata.json", tmp_path)
    (tmp_path / "runs.csv").write_text(_mutate((src / "runs.csv").read_text(), line, value), newline="")
    try:
        curve = read_campaign(tmp_path)
    except CampaignError as exc:
        assert exc.rule
    else:
        assert len(curve.stats) >= 1


def test_sampled_campaign_round_trip(tmp_path):
    model = SyntheticModel.ideal(MPPS)
    runs = sample_campaign(model, [250_000, 1_000_000, 1_500_000], 10, 3, seed=1)
    curve = LoadLossCurve.from_runs(synthetic_metadata(3, 10), runs)
    write_campaign(curve, tmp_path)
    assert read_campaign(tmp_path) == curve
    assert read_campaign(tmp_path).checksum() == curve.checksum()
