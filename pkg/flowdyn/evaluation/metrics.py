import math
from typing import Callable, Optional, Sequence

from ..angles import TWO_PI, direction_bin
from ..exceptions import UndefinedMetricError, ValueError
from ..position import Position3
from ..simulator.detection import Detection

__all__ = [
    "mlpd",
    "mpp",
    "coverage_fraction",
    "uniform_mlpd",
    "uniform_mpp",
    "DensityLookup",
    "BinMassLookup",
    "CONTINUOUS_DENSITY_FLOOR",
]

CONTINUOUS_DENSITY_FLOOR = 1e-300

DensityLookup = Callable[[Position3], Optional[Callable[[float], float]]]
BinMassLookup = Callable[[Position3, int], Optional[float]]


def uniform_mlpd() -> float:
    """Mean log predictive density of the uniform heading model, ``-ln(2 pi)``."""
    return -math.log(TWO_PI)


def uniform_mpp(bins: int) -> float:
    """Mean predictive probability of the uniform heading model, ``1 / bins``."""
    if bins < 1:
        raise ValueError("bins must be >= 1, got {}.".format(bins))
    return 1.0 / bins


def _check_test(test: Sequence[Detection]) -> None:
    if not test:
        raise ValueError("The test set is empty.")


def mlpd(
    test: Sequence[Detection], model_lookup: DensityLookup, uniform_fallback: bool = True
) -> float:
    """Mean log predictive density of the test headings.

    :param test: held-out detections
    :param model_lookup: the heading density covering a position, ``None`` where uncovered
    :param uniform_fallback: score uncovered points with ``1 / (2 pi)``; otherwise leave them out
    :return: mean log density in nats
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the test set is empty.
        | :exc:`UndefinedMetricError <flowdyn.exceptions.UndefinedMetricError>`: if no point is covered and ``uniform_fallback`` is off.
    """
    _check_test(test)
    terms = []
    for d in test:
        density = model_lookup(d.position)
        if density is None:
            if uniform_fallback:
                terms.append(uniform_mlpd())
            continue
        terms.append(math.log(max(density(d.theta), CONTINUOUS_DENSITY_FLOOR)))
    if not terms:
        raise UndefinedMetricError("No test point falls in a covered cell.")
    return math.fsum(terms) / len(terms)


def mpp(
    test: Sequence[Detection],
    bin_mass_lookup: BinMassLookup,
    bins: int,
    uniform_fallback: bool = True,
) -> float:
    """Mean probability assigned to the angular bin of every test heading.

    :param test: held-out detections
    :param bin_mass_lookup: probability of a bin at a position, ``None`` where uncovered
    :param bins: number of equal angular bins
    :param uniform_fallback: score uncovered points with ``1 / bins``; otherwise leave them out
    :return: mean probability in ``[0, 1]``
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the test set is empty.
        | :exc:`UndefinedMetricError <flowdyn.exceptions.UndefinedMetricError>`: if no point is covered and ``uniform_fallback`` is off.
    """
    _check_test(test)
    covered_sum = []
    uncovered = 0
    for d in test:
        mass = bin_mass_lookup(d.position, direction_bin(d.theta, bins))
        if mass is None:
            uncovered += 1
        else:
            covered_sum.append(mass)
    if uniform_fallback:
        # exact convex combination of the covered mean and 1/B
        return (math.fsum(covered_sum) + uncovered * uniform_mpp(bins)) / len(test)
    if not covered_sum:
        raise UndefinedMetricError("No test point falls in a covered cell.")
    return math.fsum(covered_sum) / len(covered_sum)


def coverage_fraction(
    test: Sequence[Detection], covered: Callable[[Position3], bool]
) -> float:
    """Share of test points whose position is covered."""
    _check_test(test)
    return sum(1 for d in test if covered(d.position)) / len(test)
