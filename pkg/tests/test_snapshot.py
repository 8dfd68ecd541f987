import json

import pytest

from flowdyn.binding.replay import replay
from flowdyn.evaluation.harness import build_dynamics_layer
from flowdyn.exceptions import ParseError
from flowdyn.fitting.base_fitter import BicSweepFitter
from flowdyn.run_config import RunConfig
from flowdyn.simulator.flow_scenario import builtin_scenario
from flowdyn.simulator.generator import generate
from flowdyn.snapshot import read_snapshot, snapshot_to_dict, write_snapshot


@pytest.fixture(scope="module")
def fitted():
    config = RunConfig(reservoir_capacity=50)
    layer = build_dynamics_layer(config, 1.0)
    detections = generate(builtin_scenario("unimodal").with_duration(60.0))
    replay(layer, detections, BicSweepFitter(config.fit), config.update_interval)
    return layer, config, len(detections)


class TestSnapshot:
    def test_self_describing(self, fitted):
        layer, config, count = fitted
        data = snapshot_to_dict(layer, config)
        assert data["format"] == "flowdyn-snapshot"
        assert data["version"] == 1
        assert data["units"]["theta"] == "rad"
        assert data["run_config"] == config.to_dict()
        assert data["total_seen"] == count

    def test_round_trip_is_byte_identical(self, fitted, tmp_path):
        layer, config, count = fitted
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        write_snapshot(layer, config, str(first))
        restored, restored_config = read_snapshot(str(first))
        write_snapshot(restored, restored_config, str(second))
        assert first.read_bytes() == second.read_bytes()
        assert restored_config == config
        assert restored.total_seen() == count
        assert sorted(restored.bound) == sorted(layer.bound)

    def test_not_a_snapshot_raise(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"format": "something", "version": 1}))
        with pytest.raises(ParseError, match="Not a flowdyn-snapshot v1 file"):
            read_snapshot(str(path))

    def test_malformed_json_raise(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\n  \"format\": \n")
        with pytest.raises(ParseError, match="line"):
            read_snapshot(str(path))

    def test_missing_section_raise(self, fitted, tmp_path):
        layer, config, _ = fitted
        data = snapshot_to_dict(layer, config)
        del data["graph"]
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ParseError, match="Malformed snapshot"):
            read_snapshot(str(path))
