import math

import pytest

from flowdyn.cell_key import CellKey
from flowdyn.evaluation.metrics import mlpd, mpp, uniform_mlpd
from flowdyn.evaluation.reference_mod import REFERENCE_RESOLUTION, ReferenceMoD
from flowdyn.exceptions import ValueError
from flowdyn.position import Position3
from flowdyn.simulator.flow_scenario import builtin_scenario
from flowdyn.simulator.generator import generate


@pytest.fixture(scope="module")
def train():
    return generate(builtin_scenario("bimodal").with_duration(60.0))


class TestReferenceMoD:
    def test_resolution(self):
        assert REFERENCE_RESOLUTION == 0.1

    def test_empty_train_raise(self):
        with pytest.raises(ValueError, match="non-empty"):
            ReferenceMoD.build_reference([])

    def test_invalid_resolution_raise(self):
        with pytest.raises(ValueError):
            ReferenceMoD(8, 0.0)

    def test_single_detection_point_mass(self, train):
        ref = ReferenceMoD.build_reference(train[:1])
        d = train[0]
        assert len(ref) == 1
        assert ref.grid.keys() == {CellKey(
            math.floor(d.position.x / 0.1), math.floor(d.position.y / 0.1), 0
        )}
        masses = [ref.bin_prob(d.position, b) for b in range(8)]
        assert sorted(masses) == [0.0] * 7 + [1.0]

    def test_empty_cell_is_uniform(self, train):
        ref = ReferenceMoD.build_reference(train[:1])
        far = Position3(-50.0, -50.0)
        assert ref.bin_prob(far, 3) == 0.125
        assert ref.density(far, 1.0) == pytest.approx(1 / (2 * math.pi))

    def test_reference_dominates_coarser_model(self, train):
        fine = ReferenceMoD.build_reference(train)
        coarse = ReferenceMoD.build_reference(train, resolution=1.0)
        assert fine.reference_mpp(train) >= coarse.reference_mpp(train)
        assert fine.reference_mpp(train) >= mpp(train, lambda p, b: 0.125, 8)

    def test_reference_mlpd_beats_uniform(self, train):
        ref = ReferenceMoD.build_reference(train)
        score = mlpd(train, lambda p: (lambda theta: ref.density(p, theta)))
        assert score >= uniform_mlpd()
