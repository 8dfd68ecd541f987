import logging
import time
from abc import ABCMeta, abstractmethod
from typing import Sequence, Tuple

from .bic import bic_sweep_fit
from .fit_config import FitConfig
from .fit_diagnostics import FitDiagnostics, FitResult
from .meanshift import meanshift_fit
from ..cylindrical_sample import CylindricalSample
from ..exceptions import ValueError
from ..sw_gmm import SwGmm

__all__ = ["BaseFitter", "BicSweepFitter", "MeanShiftFitter", "fitter_by_name"]

logger = logging.getLogger(__name__)


class BaseFitter(metaclass=ABCMeta):
    """This is an abstract class,
    and if you want to plug your own model selection into the map, you **must** implement this class.

    :param config: fit parameters, defaults to :class:`FitConfig` defaults
    """

    def __init__(self, config: FitConfig = None) -> None:
        self.config: FitConfig = config or FitConfig()

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier used in reports and on the command line."""
        pass

    @abstractmethod
    def fit_model(
        self, samples: Sequence[CylindricalSample]
    ) -> Tuple[SwGmm, FitDiagnostics]:
        """Fit a mixture to the samples.

        :param samples: the observations
        :return: the model and its diagnostics
        :raises: :exc:`FitFailureError <flowdyn.exceptions.FitFailureError>`
        """
        pass

    def with_seed(self, rng_seed: int) -> "BaseFitter":
        """The same fitter with another seed."""
        return type(self)(self.config.with_seed(rng_seed))

    def fit(self, samples: Sequence[CylindricalSample]) -> FitResult:
        """Fit a mixture and measure how long it took.

        :param samples: the observations
        :return: the fit outcome
        :raises: :exc:`FitFailureError <flowdyn.exceptions.FitFailureError>`
        """
        start = time.perf_counter()
        model, diagnostics = self.fit_model(samples)
        elapsed = time.perf_counter() - start
        logger.debug(
            "%s fit of %d samples selected K=%d in %.4fs.",
            self.name,
            len(samples),
            diagnostics.selected_k,
            elapsed,
        )
        return FitResult(model, diagnostics, elapsed)

    def __str__(self):
        return "<{cls} [name={name}, config={config}]>".format(
            cls=type(self).__name__, name=self.name, config=self.config
        )


class BicSweepFitter(BaseFitter):
    """K-means++ seeded EM for every feasible K, selected by BIC."""

    @property
    def name(self) -> str:
        return "bic"

    def fit_model(
        self, samples: Sequence[CylindricalSample]
    ) -> Tuple[SwGmm, FitDiagnostics]:
        return bic_sweep_fit(samples, self.config)


class MeanShiftFitter(BaseFitter):
    """Mean-shift modes define K, EM refines."""

    @property
    def name(self) -> str:
        return "meanshift"

    def fit_model(
        self, samples: Sequence[CylindricalSample]
    ) -> Tuple[SwGmm, FitDiagnostics]:
        return meanshift_fit(samples, self.config)


def fitter_by_name(name: str, config: FitConfig = None) -> BaseFitter:
    """Look up a fitter by its :attr:`BaseFitter.name`.

    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the name is unknown.
    """
    for cls in (BicSweepFitter, MeanShiftFitter):
        if cls(config).name == name:
            return cls(config)
    raise ValueError(
        "Unknown fitter {!r}, expected one of 'bic', 'meanshift'.".format(name)
    )
