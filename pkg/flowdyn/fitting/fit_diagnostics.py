from enum import Enum, unique
from typing import List, Optional, Tuple

from ..sw_gmm import SwGmm

__all__ = ["InitMethod", "FitDiagnostics", "FitResult"]


@unique
class InitMethod(Enum):
    """How the component count and initial labels of a fit were chosen."""

    BIC_KMEANSPP = "bic_kmeanspp"
    MEAN_SHIFT = "mean_shift"


class FitDiagnostics:
    """What a fit tried and what it selected.

    :param selected_k: chosen candidate component count
    :param bic_per_k: ``(K, BIC)`` of every evaluated candidate
    :param final_loglik: total log-likelihood of the returned model
    :param em_iters_per_k: ``(K, iterations)`` of every EM run
    :param init_method: the initializer used
    :param loglik_history_per_k: ``(K, [loglik per iteration])`` of every EM run
    :param clamped_steps: EM steps in which covariance regularization changed a matrix
    :param bandwidth: mean-shift ``(h_theta, h_rho)``, if mean-shift was used
    :param merge_radius: mean-shift mode merge radius, if mean-shift was used
    :param raw_mode_count: mean-shift modes before small modes were dissolved
    """

    def __init__(
        self,
        selected_k: int,
        bic_per_k: List[Tuple[int, float]],
        final_loglik: float,
        em_iters_per_k: List[Tuple[int, int]],
        init_method: InitMethod,
        loglik_history_per_k: List[Tuple[int, List[float]]] = None,
        clamped_steps: int = 0,
        bandwidth: Optional[Tuple[float, float]] = None,
        merge_radius: Optional[float] = None,
        raw_mode_count: Optional[int] = None,
    ) -> None:
        self.selected_k: int = selected_k
        self.bic_per_k: List[Tuple[int, float]] = list(bic_per_k)
        self.final_loglik: float = final_loglik
        self.em_iters_per_k: List[Tuple[int, int]] = list(em_iters_per_k)
        self.init_method: InitMethod = init_method
        self.loglik_history_per_k: List[Tuple[int, List[float]]] = list(
            loglik_history_per_k or []
        )
        self.clamped_steps: int = clamped_steps
        self.bandwidth: Optional[Tuple[float, float]] = bandwidth
        self.merge_radius: Optional[float] = merge_radius
        self.raw_mode_count: Optional[int] = raw_mode_count

    def to_dict(self) -> dict:
        return {
            "selected_k": self.selected_k,
            "bic_per_k": [[k, b] for k, b in self.bic_per_k],
            "final_loglik": self.final_loglik,
            "em_iters_per_k": [[k, i] for k, i in self.em_iters_per_k],
            "init_method": self.init_method.value,
            "clamped_steps": self.clamped_steps,
            "bandwidth": list(self.bandwidth) if self.bandwidth else None,
            "merge_radius": self.merge_radius,
            "raw_mode_count": self.raw_mode_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FitDiagnostics":
        bandwidth = data.get("bandwidth")
        return cls(
            selected_k=data["selected_k"],
            bic_per_k=[(k, b) for k, b in data["bic_per_k"]],
            final_loglik=data["final_loglik"],
            em_iters_per_k=[(k, i) for k, i in data["em_iters_per_k"]],
            init_method=InitMethod(data["init_method"]),
            clamped_steps=data.get("clamped_steps", 0),
            bandwidth=tuple(bandwidth) if bandwidth else None,
            merge_radius=data.get("merge_radius"),
            raw_mode_count=data.get("raw_mode_count"),
        )

    def __str__(self):
        return "<FitDiagnostics [selected_k={k}, init_method={m}, final_loglik={ll}]>".format(
            k=self.selected_k, m=self.init_method.value, ll=self.final_loglik
        )


class FitResult:
    """The outcome of :meth:`BaseFitter.fit <flowdyn.fitting.base_fitter.BaseFitter.fit>`.

    :param model: the fitted mixture
    :param diagnostics: how it was selected
    :param fit_seconds: wall-clock time of the fit, for logging only
    """

    def __init__(
        self, model: SwGmm, diagnostics: FitDiagnostics, fit_seconds: float = 0.0
    ) -> None:
        self.model: SwGmm = model
        self.diagnostics: FitDiagnostics = diagnostics
        self.fit_seconds: float = fit_seconds

    def __str__(self):
        return "<FitResult [model={model}, fit_seconds={t:.4f}]>".format(
            model=self.model, t=self.fit_seconds
        )
