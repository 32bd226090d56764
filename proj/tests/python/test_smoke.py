"""Smoke tests for the python bindings and the CLI surface."""

import json
import math
import os
import subprocess
import sys

import pytest

import aisdet

SCENARIO = {
    "seed": 77,
    "region": {"lat_min": 32.96, "lat_max": 33.04, "lon_min": 125.95, "lon_max": 126.05},
    "duration_s": 10800,
    "n_vessels": 11,
    "report_interval_s": 10,
    "injections": [
        {
            "kind": "spoofing",
            "center": {"lat": 33.0, "lon": 126.0},
            "radius_m": 18000,
            "window": [5400, 5420],
            "offset_east_m": 5000,
        }
    ],
}

CONFIG = {
    "bbox": {"lat_min": 32.0, "lat_max": 34.0, "lon_min": 125.0, "lon_max": 127.0}
}


def test_geodesic_distance():
    assert aisdet.geodesic_distance(33.0, 126.0, 33.0, 126.0) == 0.0
    d = aisdet.geodesic_distance(33.0, 126.0, 33.0, 127.0)
    assert math.isclose(d, 93255.69, rel_tol=1e-6)


def test_jamming_threshold():
    assert aisdet.jamming_threshold(10.0, 3.0, 60.0) == 60.0
    assert aisdet.jamming_threshold(30.0, 3.0, 60.0) == 90.0


def test_st_dbscan_labels():
    pts = [(33.0, 126.0, 60.0 * i) for i in range(6)]
    labels = aisdet.st_dbscan(pts, 10000.0, 1800.0, 5)
    assert labels == [0] * 6
    labels = aisdet.st_dbscan(pts[:4], 10000.0, 1800.0, 5)
    assert labels == [-1] * 4


def test_pipeline_round_trip(tmp_path):
    synth = aisdet.generate_scenario(json.dumps(SCENARIO), str(tmp_path / "scn"))
    assert synth["records"] > 10000
    assert synth["truth_events"] == 1

    result = aisdet.run_pipeline(
        [synth["records_path"]],
        config_json=json.dumps(CONFIG),
        out_dir=str(tmp_path / "out"),
    )
    assert result["parse_errors"] == 0
    events = result["events"]
    spoofing = [e for e in events if e["category"] == "spoofing"]
    assert len(spoofing) == 1
    assert spoofing[0]["mmsi_count"] == 11
    assert spoofing[0]["anomalous_ratio"] >= 0.6

    metrics = json.loads(
        aisdet.evaluate(str(tmp_path / "out" / "events.geojson"), synth["truth_path"])
    )
    assert metrics["per_category"]["spoofing"]["recall"] == 1.0
    assert metrics["interference_false_alarms"] == 0


def test_default_config_is_json():
    cfg = json.loads(aisdet.default_config_json())
    assert cfg["eps_s"] == 10000.0
    assert cfg["min_pts"] == 5
    assert cfg["kappa"] == 3.0


@pytest.mark.skipif("AISDET_BIN" not in os.environ, reason="CLI binary path not provided")
def test_cli_round_trip(tmp_path):
    bin_path = os.environ["AISDET_BIN"]
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps(SCENARIO))
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(CONFIG))

    subprocess.run(
        [bin_path, "synth", "--scenario", str(scenario_path), "--out", str(tmp_path / "data")],
        check=True,
    )
    subprocess.run(
        [
            bin_path, "run",
            "--input", str(tmp_path / "data" / "records.ndjson"),
            "--config", str(config_path),
            "--out", str(tmp_path / "full"),
        ],
        check=True,
    )
    subprocess.run(
        [
            bin_path, "run",
            "--input", str(tmp_path / "data" / "records.ndjson"),
            "--config", str(config_path),
            "--out", str(tmp_path / "base"),
            "--baseline",
        ],
        check=True,
    )
    subprocess.run(
        [
            bin_path, "eval",
            "--events", str(tmp_path / "full" / "events.geojson"),
            "--truth", str(tmp_path / "data" / "truth.ndjson"),
            "--baseline-events", str(tmp_path / "base" / "events.geojson"),
            "--out", str(tmp_path / "metrics.json"),
        ],
        check=True,
    )

    metrics = json.loads((tmp_path / "metrics.json").read_text())
    assert metrics["full"]["per_category"]["spoofing"]["recall"] == 1.0

    events = json.loads((tmp_path / "full" / "events.geojson").read_text())
    assert events["type"] == "FeatureCollection"
    table = (tmp_path / "full" / "stage_table.csv").read_text().splitlines()
    assert table[0] == "stage,process,cue_kind,points,mmsis,pct"
    assert len(table) > 10


GEOJSON_SCHEMA = {
    "type": "object",
    "required": ["type", "features"],
    "properties": {
        "type": {"const": "FeatureCollection"},
        "features": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type", "geometry", "properties"],
                "properties": {
                    "type": {"const": "Feature"},
                    "geometry": {
                        "type": "object",
                        "required": ["type", "coordinates"],
                        "properties": {
                            "type": {"const": "Point"},
                            "coordinates": {
                                "type": "array",
                                "minItems": 2,
                                "maxItems": 2,
                                "items": {"type": "number"},
                            },
                        },
                    },
                    "properties": {
                        "type": "object",
                        "required": [
                            "category", "cue_kind", "mmsis", "mmsi_count",
                            "t_start", "t_end", "radius_m", "anomalous_ratio", "cue_count",
                        ],
                    },
                },
            },
        },
    },
}


def test_geojson_grammar_on_a_many_event_run(tmp_path):
    """A 50+ event run must emit structurally valid GeoJSON throughout."""
    import jsonschema

    scenario = {
        "seed": 99,
        "region": {"lat_min": 32.8, "lat_max": 33.2, "lon_min": 125.7, "lon_max": 126.3},
        "duration_s": 18 * 86400,
        "n_vessels": 4,
        "report_interval_s": 10,
        "injections": [
            {
                "kind": "persistent_sensor",
                "vessel_index": v,
                "offset_east_m": 4000,
                "days": list(range(18)),
                "daily_start_s": 20000 + 7000 * v,
                "daily_duration_s": 4000,
            }
            for v in range(3)
        ],
    }
    synth = aisdet.generate_scenario(json.dumps(scenario), str(tmp_path / "scn"))
    result = aisdet.run_pipeline(
        [synth["records_path"]],
        config_json=json.dumps(CONFIG),
        out_dir=str(tmp_path / "out"),
    )
    assert len(result["events"]) >= 50

    doc = json.loads((tmp_path / "out" / "events.geojson").read_text())
    jsonschema.validate(doc, GEOJSON_SCHEMA)
    assert len(doc["features"]) >= 50
    for feature in doc["features"]:
        lon, lat = feature["geometry"]["coordinates"]
        assert -180 <= lon <= 180 and -90 <= lat <= 90


def test_cli_exit_codes(tmp_path):
    if "AISDET_BIN" not in os.environ:
        pytest.skip("CLI binary path not provided")
    bin_path = os.environ["AISDET_BIN"]
    # missing input file is fatal
    proc = subprocess.run(
        [bin_path, "run", "--input", str(tmp_path / "missing.ndjson"), "--out", str(tmp_path / "o")],
        capture_output=True,
    )
    assert proc.returncode == 1

    # a file of garbage lines completes but signals the error ratio
    bad = tmp_path / "bad.ndjson"
    bad.write_text("not json\n" * 50 + '{"mmsi":1,"t":0,"lat":33.0,"lon":126.0,"sog":1.0,"cog":0.0}\n')
    proc = subprocess.run(
        [bin_path, "run", "--input", str(bad), "--out", str(tmp_path / "o2")],
        capture_output=True,
    )
    assert proc.returncode == 2
