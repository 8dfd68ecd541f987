import math

import numpy as np
import pytest

from flowdyn.binding.dynamics_layer import DynamicsLayer, cell_seed
from flowdyn.binding.stability_tracker import StabilityTracker
from flowdyn.cell_key import CellKey
from flowdyn.cylindrical_sample import CylindricalSample
from flowdyn.dynamics_cell import CellOwner
from flowdyn.exceptions import FitFailureError, ValueError
from flowdyn.fitting.base_fitter import BaseFitter, BicSweepFitter
from flowdyn.fitting.fit_config import FitConfig
from flowdyn.position import Position3
from flowdyn.scene_graph.layered_graph import Layer, LayeredGraph
from flowdyn.scene_graph.pose_event import PoseEvent

# nodes 0..3 at (1, 1), (3, 1), (1, 3), (3, 3)
BOUNDS = ((0.0, 0.0), (4.0, 4.0))


class FailingFitter(BaseFitter):
    @property
    def name(self) -> str:
        return "failing"

    def fit_model(self, samples):
        raise FitFailureError("no luck")


def new_layer(**kwargs) -> DynamicsLayer:
    graph = LayeredGraph.build_nav_layer(BOUNDS, 2.0)
    kwargs.setdefault("tracker", StabilityTracker(window=10.0))
    kwargs.setdefault("capacity", 50)
    return DynamicsLayer(graph, 1.0, **kwargs)


def feed(layer: DynamicsLayer, rng, p: Position3, n: int, mu_theta: float = 0.0) -> None:
    for theta in rng.normal(mu_theta, 0.1, n):
        layer.observe(p, CylindricalSample(theta, 1.0 + 0.05 * rng.standard_normal()))


def assert_single_ownership(layer: DynamicsLayer) -> None:
    owned = [key for _, cell in layer.bound.items() for key in cell.keys]
    assert len(owned) == len(set(owned))
    for key in owned:
        assert key not in layer.hash_cells
    for node_id, cell in layer.bound.items():
        assert cell.owner == CellOwner.node_bound(node_id)
        assert layer.graph.layer_of(node_id, dynamics=True) is Layer.DYNAMICS
        for key in cell.keys:
            assert layer.owner_of(key) == node_id


class TestDynamicsLayer:
    def test_invalid_min_fit_samples_raise(self):
        with pytest.raises(ValueError):
            new_layer(min_fit_samples=0)

    def test_observe_before_binding_goes_to_hash(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 5)
        assert layer.hash_cells.get(CellKey(0, 0, 0)).total_seen == 5
        assert layer.lookup(Position3(0.5, 0.5)) is None
        assert layer.lookup_model(Position3(0.5, 0.5)) is None

    def test_try_bind_waits_for_stability(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 5)
        assert layer.try_bind(5.0) == 0
        assert layer.bound == {}
        assert layer.try_bind(10.0) == 1
        assert list(layer.bound) == [0]

    def test_try_bind_merges_cells_of_one_node(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        feed(layer, rng, Position3(1.5, 0.5), 20)
        feed(layer, rng, Position3(3.5, 3.5), 10)
        assert layer.try_bind(10.0) == 3
        assert sorted(layer.bound) == [0, 3]
        assert layer.bound[0].total_seen == 50
        assert layer.bound[0].keys == {CellKey(0, 0, 0), CellKey(1, 0, 0)}
        assert len(layer.hash_cells) == 0
        assert_single_ownership(layer)

    def test_try_bind_is_idempotent(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        layer.try_bind(10.0)
        before = layer.to_dict()
        assert layer.try_bind(11.0) == 0
        assert layer.to_dict() == before

    def test_try_bind_without_alive_nodes(self, rng):
        layer = DynamicsLayer(LayeredGraph(), 1.0, StabilityTracker(window=1.0))
        feed(layer, rng, Position3(0.5, 0.5), 3)
        assert layer.try_bind(100.0) == 0
        assert len(layer.hash_cells) == 1

    def test_lifecycle_conserves_observations(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        feed(layer, rng, Position3(1.5, 0.5), 20)
        feed(layer, rng, Position3(3.5, 3.5), 10)
        total = layer.total_seen()
        assert total == 60

        layer.try_bind(10.0)
        assert layer.total_seen() == total

        # bound cells keep receiving observations of their boxes
        feed(layer, rng, Position3(0.2, 0.9), 1)
        total += 1
        assert layer.lookup(Position3(0.2, 0.9)) is layer.bound[0]
        assert len(layer.hash_cells) == 0

        layer.apply_event(PoseEvent.move(20.0, 0, Position3(1.5, 1.5)))
        assert layer.lookup(Position3(0.5, 0.5)) is layer.bound[0]
        assert layer.tracker.last_significant_update == 20.0
        assert layer.total_seen() == total

        layer.apply_event(PoseEvent.remove(30.0, 0))
        assert 0 not in layer.bound
        assert 0 not in layer.graph.dynamics_parents
        assert layer.lookup(Position3(0.5, 0.5)) is None
        reverted = layer.hash_cells.get(CellKey(1, 1, 0))
        assert reverted.total_seen == 51
        assert reverted.owner == CellOwner.hash_owned(CellKey(1, 1, 0))
        assert reverted.keys == {CellKey(1, 1, 0)}
        assert layer.total_seen() == total
        assert_single_ownership(layer)

        assert layer.try_bind(35.0) == 0
        assert layer.try_bind(40.0) == 1
        # (1.5, 1.5) is equally far from nodes 1 and 2
        assert sorted(layer.bound) == [1, 3]
        assert layer.bound[1].total_seen == 51
        assert layer.total_seen() == total
        assert_single_ownership(layer)

    def test_reverted_cell_rebinds_to_new_node_nearby(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        feed(layer, rng, Position3(3.5, 3.5), 10)
        layer.try_bind(10.0)
        layer.apply_event(PoseEvent.remove(20.0, 0))
        layer.apply_event(PoseEvent.add(21.0, 4, Position3(1.2, 1.4)))
        assert layer.try_bind(30.0) == 0
        assert layer.try_bind(31.0) == 1
        assert sorted(layer.bound) == [3, 4]
        assert layer.bound[4].total_seen == 30
        assert layer.bound[4].keys == {CellKey(1, 1, 0)}
        assert layer.graph.dynamics_parents == {3, 4}
        assert layer.total_seen() == 40
        assert len(layer.hash_cells) == 0
        assert_single_ownership(layer)

    def test_remove_and_readd_at_same_position_keeps_buffer(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 80)
        layer.try_bind(10.0)
        original = layer.bound[0].buffer.to_dict()
        assert len(layer.bound[0].buffer) == 50
        layer.apply_event(PoseEvent.remove(20.0, 0))
        layer.apply_event(PoseEvent.add(20.0, 4, Position3(1.0, 1.0)))
        assert layer.try_bind(30.0) == 1
        assert list(layer.bound) == [4]
        assert layer.bound[4].buffer.to_dict() == original
        assert layer.bound[4].total_seen == 80
        assert_single_ownership(layer)

    def test_bound_cell_follows_its_node(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        layer.try_bind(10.0)
        layer.update_models(BicSweepFitter(FitConfig(k_max=2)), 0.0, 10.0)
        cell = layer.bound[0]
        model = cell.model
        before = layer.to_dict()

        layer.on_node_moved(0, Position3(3.0, 3.5))
        assert layer.bound[0] is cell
        assert cell.owner == CellOwner.node_bound(0)
        assert cell.model is model
        assert layer.lookup(Position3(0.5, 0.5)) is cell
        assert layer.to_dict() == before

        layer.apply_event(PoseEvent.move(12.0, 0, Position3(3.0, 3.5)))
        assert layer.graph.node(0).position == Position3(3.0, 3.5)
        assert layer.graph.dynamics_parents == {0}
        assert layer.bound[0] is cell
        assert cell.model is model
        assert_single_ownership(layer)

        # a move of a node without dynamics changes nothing
        layer.on_node_moved(2, Position3(0.0, 0.0))
        assert list(layer.bound) == [0]

    def test_small_move_does_not_delay_binding(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 5)
        layer.apply_event(PoseEvent.move(8.0, 1, Position3(3.01, 1.0)))
        assert layer.try_bind(10.0) == 1

    def test_removed_cell_merges_with_existing_hash_cell(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        layer.try_bind(10.0)
        layer.apply_event(PoseEvent.move(11.0, 0, Position3(5.5, 5.5)))
        feed(layer, rng, Position3(5.5, 5.5), 7)
        layer.apply_event(PoseEvent.remove(12.0, 0))
        cell = layer.hash_cells.get(CellKey(5, 5, 0))
        assert cell.total_seen == 37
        assert len(layer.hash_cells) == 1

    def test_update_models_schedule(self, rng):
        layer = new_layer(min_fit_samples=10)
        fitter = BicSweepFitter(FitConfig(k_max=2))
        feed(layer, rng, Position3(0.5, 0.5), 40)
        feed(layer, rng, Position3(3.5, 3.5), 30, mu_theta=math.pi / 2)
        layer.try_bind(10.0)
        feed(layer, rng, Position3(10.5, 10.5), 3)

        assert layer.update_models(fitter, 5.0, 10.0) == 2
        assert layer.bound[0].model is not None
        assert layer.bound[0].last_fit_time == 10.0
        assert not layer.bound[0].dirty
        assert layer.hash_cells.get(CellKey(10, 10, 0)).model is None
        assert layer.lookup_model(Position3(0.5, 0.5)) is layer.bound[0].model

        assert layer.update_models(fitter, 5.0, 20.0) == 0
        feed(layer, rng, Position3(0.5, 0.5), 1)
        assert layer.update_models(fitter, 5.0, 12.0) == 0
        assert layer.update_models(fitter, 5.0, 15.0) == 1

    def test_update_models_invalid_parallelism_raise(self):
        with pytest.raises(ValueError, match="parallelism"):
            new_layer().update_models(BicSweepFitter(), 5.0, 0.0, parallelism=0)

    def test_failed_fit_keeps_previous_model(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        layer.try_bind(10.0)
        layer.update_models(BicSweepFitter(FitConfig(k_max=2)), 0.0, 10.0)
        model = layer.bound[0].model
        feed(layer, rng, Position3(0.5, 0.5), 5)
        assert layer.update_models(FailingFitter(), 0.0, 20.0) == 0
        assert layer.bound[0].model is model
        assert layer.bound[0].dirty

    def test_parallel_update_matches_serial(self):
        layers = []
        for parallelism in (1, 4):
            rng = np.random.default_rng(7)
            layer = new_layer()
            for x in (0.5, 1.5, 2.5, 3.5):
                for y in (0.5, 3.5):
                    feed(layer, rng, Position3(x, y), 25, mu_theta=x - y)
            layer.try_bind(10.0)
            feed(layer, rng, Position3(8.5, 8.5), 25)
            layer.update_models(BicSweepFitter(FitConfig(k_max=3)), 0.0, 10.0, parallelism)
            layers.append(layer)
        serial, parallel = layers
        labels = [label for label, _ in serial.cells()]
        assert labels == [label for label, _ in parallel.cells()]
        assert len(labels) == 5
        for (_, a), (_, b) in zip(serial.cells(), parallel.cells()):
            assert a.model.to_dict() == b.model.to_dict()

    def test_cell_seed(self):
        assert cell_seed(0, "node:1") == cell_seed(0, "node:1")
        assert cell_seed(0, "node:1") != cell_seed(0, "node:2")
        assert cell_seed(0, "node:1") != cell_seed(1, "node:1")

    def test_dict_round_trip(self, rng):
        layer = new_layer()
        feed(layer, rng, Position3(0.5, 0.5), 30)
        feed(layer, rng, Position3(3.5, 3.5), 20)
        layer.try_bind(10.0)
        layer.update_models(BicSweepFitter(FitConfig(k_max=2)), 0.0, 10.0)
        feed(layer, rng, Position3(9.5, 0.5), 4)
        restored = DynamicsLayer.from_dict(layer.to_dict(), layer.graph, 50, 8)
        assert restored.to_dict() == layer.to_dict()
        assert restored.lookup(Position3(0.5, 0.5)) is restored.bound[0]
        assert restored.total_seen() == layer.total_seen()
