"""Regenerate the bundled test campaigns under tests/fixtures/.

    python3 tools/make_fixtures.py

Valid campaigns go to tests/fixtures/campaigns/, broken ones (each violating
exactly one validation rule) to tests/fixtures/malformed/.
"""

import shutil
from pathlib import Path

from pastrami.curve_models import (
    SyntheticModel,
    piecewise_throughput,
    sample_campaign,
    sample_runs,
)
from pastrami.ingest import LoadLossCurve, synthetic_metadata, write_campaign

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
MPPS = 1_000_000


def grid(start, stop, step):
    n = round((stop - start) / step)
    return [round((start + i * step) * MPPS) for i in range(n + 1)]


REF = SyntheticModel.realistic(1 * MPPS, 0.01, 1.5 * MPPS, 1 * MPPS)
IDEAL = SyntheticModel.ideal(1 * MPPS)
# 0.5 of every extra packet gets through for 5 steps after the knee
GRADUAL = piecewise_throughput([(0.9 * MPPS, 0.9 * MPPS), (1.4 * MPPS, 1.15 * MPPS)])


def campaign(name, runs, k, duration, notes=(), **meta):
    curve = LoadLossCurve.from_runs(synthetic_metadata(k, duration, notes=notes, **meta), runs)
    write_campaign(curve, ROOT / "campaigns" / name)
    return curve


def malformed(name, base, edit_runs=None, edit_meta=None, drop=None):
    dst = ROOT / "malformed" / name
    shutil.copytree(ROOT / "campaigns" / base, dst)
    if edit_runs:
        p = dst / "runs.csv"
        p.write_text(edit_runs(p.read_text()), newline="")
    if edit_meta:
        p = dst / "metadata.json"
        p.write_text(edit_meta(p.read_text()), newline="")
    if drop:
        (dst / drop).unlink()


def replace_line(n, new):
    def edit(text):
        lines = text.split("\n")
        lines[n - 1] = new
        return "\n".join(lines)
    return edit


def swap_lines(a, b):
    def edit(text):
        lines = text.split("\n")
        lines[a - 1], lines[b - 1] = lines[b - 1], lines[a - 1]
        return "\n".join(lines)
    return edit


def main():
    shutil.rmtree(ROOT, ignore_errors=True)
    campaign("sharp_good", sample_campaign(REF, grid(0.1, 2.4, 0.1), 1.0, 10, seed=11), 10, 1.0)
    campaign("gradual_bad", sample_runs(GRADUAL, grid(0.1, 2.0, 0.1), 1.0, 10, seed=12), 10, 1.0)
    campaign("zero_loss", sample_campaign(IDEAL, grid(0.1, 0.9, 0.1), 1.0, 5, seed=13), 5, 1.0)
    campaign("first_over", sample_campaign(REF, grid(1.1, 2.0, 0.1), 1.0, 5, seed=14), 5, 1.0)
    campaign("single_run", sample_campaign(IDEAL, grid(0.2, 2.0, 0.2), 1.0, 1, seed=15), 1, 1.0)
    runs = sample_campaign(IDEAL, grid(0.5, 1.5, 0.25), 1.0, 4, seed=16)
    campaign("k_mismatch", runs[:-2], 4, 1.0, testbed_note="unknown keys survive round trips")

    # line numbers count the header as line 1
    malformed("offered_zero", "zero_loss", replace_line(4, "100000,2,1,0,0"))
    malformed("delivered_gt_offered", "zero_loss", replace_line(5, "100000,3,1,100000,100001"))
    malformed("bad_header", "zero_loss", replace_line(1, "load,run,duration,sent,received"))
    malformed("not_integer", "zero_loss", replace_line(3, "100000,1,1,1e5,100000"))
    malformed("short_row", "zero_loss", replace_line(6, "100000,4,1,100000"))
    malformed("unsorted", "zero_loss", swap_lines(6, 7))
    malformed("duplicate_run", "zero_loss", replace_line(3, "100000,0,1,100000,100000"))
    malformed("tx_mismatch", "zero_loss", replace_line(2, "100000,0,1,90000,90000"))
    malformed("bad_duration", "zero_loss", replace_line(2, "100000,0,0,100000,100000"))
    malformed("missing_runs", "zero_loss", drop="runs.csv")
    malformed("missing_metadata", "zero_loss", drop="metadata.json")
    malformed("bad_enum", "zero_loss", edit_meta=lambda t: t.replace('"unpinned"', '"pin-3-cpu"'))
    malformed("bad_json", "zero_loss", edit_meta=lambda t: t.replace("{", "[", 1))
    malformed("missing_key", "zero_loss", edit_meta=lambda t: t.replace('  "testbed": "synthetic",\n', ""))


if __name__ == "__main__":
    main()
