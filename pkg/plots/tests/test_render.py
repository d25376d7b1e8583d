"""Every figure kind renders from the golden fixtures; dumps diff clean."""

import csv
import json
from pathlib import Path

import pytest

from v2nplots.cli import main
from v2nplots.figures import FigureSpec, SchemaError, render

FIXTURES = Path(__file__).parent / "fixtures"
SWEEP_CSV = FIXTURES / "sweep_tx_power_mw_golden.csv"
COMPARE_CSV = FIXTURES / "compare_tx_power_mw_golden.csv"
RUN_JSON = FIXTURES / "run_golden.json"
SNAPSHOT_JSON = FIXTURES / "snapshot_golden.json"

CSV_KINDS = {
    "latency_vs_power": SWEEP_CSV,
    "reliability_vs_power": SWEEP_CSV,
    "hop_pct": SWEEP_CSV,
    "sweep_curves": COMPARE_CSV,
}
JSON_KINDS = {
    "snr_pdf": RUN_JSON,
    "snapshot": SNAPSHOT_JSON,
}


def csv_column(path: Path, column: str, algorithm: str, mode: str) -> list[tuple[float, float]]:
    with path.open(newline="") as fh:
        rows = [
            (float(r["axis_value"]), float(r[column]))
            for r in csv.DictReader(fh)
            if r["algorithm"] == algorithm and r["mode"] == mode and r[column] != ""
        ]
    return sorted(rows)


@pytest.mark.parametrize("kind", [*CSV_KINDS, *JSON_KINDS])
def test_every_kind_renders(kind, tmp_path):
    source = CSV_KINDS.get(kind) or JSON_KINDS[kind]
    out = tmp_path / f"{kind}.png"
    spec = FigureSpec(kind=kind, input_path=str(source), output_path=str(out))
    assert render(spec) == out
    assert out.stat().st_size > 0


def test_cli_render_and_dump(tmp_path):
    out = tmp_path / "rel.png"
    dump = tmp_path / "rel.json"
    code = main(
        [
            "--kind",
            "reliability_vs_power",
            "--input",
            str(SWEEP_CSV),
            "--output",
            str(out),
            "--dump",
            str(dump),
        ]
    )
    assert code == 0
    assert out.exists() and dump.exists()


class TestDumpDiffsCleanAgainstFixture:
    def _dump(self, kind, source, tmp_path, **kw):
        out = tmp_path / f"{kind}.png"
        dump_path = tmp_path / f"{kind}_dump.json"
        render(
            FigureSpec(
                kind=kind, input_path=str(source), output_path=str(out), dump_path=str(dump_path), **kw
            )
        )
        return json.loads(dump_path.read_text())

    def test_reliability_series_match_csv(self, tmp_path):
        dump = self._dump("reliability_vs_power", SWEEP_CSV, tmp_path)
        for key, series in dump["series"].items():
            algorithm, mode = key.split("/")
            expected = csv_column(SWEEP_CSV, "reliability_pct", algorithm, mode)
            assert list(zip(series["x"], series["y"])) == expected

    def test_latency_series_match_csv(self, tmp_path):
        dump = self._dump("latency_vs_power", SWEEP_CSV, tmp_path)
        for key, series in dump["series"].items():
            algorithm, mode = key.split("/")
            expected = csv_column(SWEEP_CSV, "latency_mean_s", algorithm, mode)
            assert list(zip(series["x"], series["y"])) == expected

    def test_hop_pct_series_match_csv(self, tmp_path):
        dump = self._dump("hop_pct", SWEEP_CSV, tmp_path)
        for key, series in dump["series"].items():
            algorithm, mode = key.split("/")
            for column in ("pct_single_hop", "pct_multi_hop"):
                expected = csv_column(SWEEP_CSV, column, algorithm, mode)
                assert list(zip(series["x"], series[column])) == expected

    def test_sweep_curves_match_csv(self, tmp_path):
        dump = self._dump("sweep_curves", COMPARE_CSV, tmp_path)
        for key, series in dump["series"].items():
            algorithm, mode = key.split("/")
            rel = csv_column(COMPARE_CSV, "reliability_pct", algorithm, mode)
            lat = csv_column(COMPARE_CSV, "latency_mean_s", algorithm, mode)
            assert list(zip(series["x"], series["reliability_pct"])) == rel
            assert list(zip(series["x"], series["latency_mean_s"])) == lat

    def test_snr_pdf_normalizes_and_reflects_samples(self, tmp_path):
        dump = self._dump("snr_pdf", RUN_JSON, tmp_path, bin_width_db=0.05)
        payload = json.loads(RUN_JSON.read_text())
        samples = {
            f"{r['algorithm']}/{r['mode']}": r["summary"]["snr_samples_db"]
            for r in payload["results"]
        }
        assert dump["series"], "at least one SNR series plotted"
        for key, series in dump["series"].items():
            assert series["normalization"] == pytest.approx(1.0, rel=1e-9)
            total = sum(series["density"]) * dump["bin_width_db"]
            assert total == pytest.approx(1.0, rel=1e-9)
            assert len(series["bin_centers_db"]) == len(series["density"])
            lo = min(samples[key])
            hi = max(samples[key])
            half = dump["bin_width_db"] / 2
            assert series["bin_centers_db"][0] - half <= lo
            assert series["bin_centers_db"][-1] + half >= hi

    def test_snapshot_dump_matches_fixture(self, tmp_path):
        dump = self._dump("snapshot", SNAPSHOT_JSON, tmp_path)
        payload = json.loads(SNAPSHOT_JSON.read_text())
        hop_edges = {
            (h["tx"], h["rx"]) for p in payload["paths"] for h in p["hops"]
        }
        assert {(e["tx"], e["rx"]) for e in dump["edges_on_path"]} == hop_edges
        unreliable = sorted(p["source"] for p in payload["paths"] if p["status"] == "Unreliable")
        assert dump["unreliable_vehicles"] == unreliable
        assert dump["n_nodes"] == len(payload["nodes"])


class TestSchemaErrors:
    def test_missing_column_is_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("axis_name,axis_value,algorithm,mode\nx,1,maxsnr,SM\n")
        with pytest.raises(SchemaError, match="reliability_pct"):
            render(
                FigureSpec(
                    kind="reliability_vs_power",
                    input_path=str(bad),
                    output_path=str(tmp_path / "x.png"),
                )
            )

    def test_cli_exit_1_names_missing_column(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("axis_name,axis_value,algorithm,mode\nx,1,maxsnr,SM\n")
        code = main(
            [
                "--kind",
                "latency_vs_power",
                "--input",
                str(bad),
                "--output",
                str(tmp_path / "x.png"),
            ]
        )
        assert code == 1
        assert "latency_mean_s" in capsys.readouterr().err

    def test_snapshot_missing_field(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"nodes": []}))
        with pytest.raises(SchemaError, match="edges"):
            render(
                FigureSpec(kind="snapshot", input_path=str(bad), output_path=str(tmp_path / "s.png"))
            )
