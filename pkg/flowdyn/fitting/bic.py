import logging
import math
from typing import Sequence, Tuple

import numpy as np

from .em import EmRun, run_em
from .fit_config import FitConfig
from .fit_diagnostics import FitDiagnostics, InitMethod
from .kmeanspp import assign_labels, kmeanspp_centers
from .samples import as_arrays
from ..cylindrical_sample import CylindricalSample
from ..exceptions import FitFailureError, ValueError
from ..sw_gmm import SwGmm

__all__ = ["bic_sweep_fit", "bic_score", "free_parameter_count"]

logger = logging.getLogger(__name__)


def free_parameter_count(k: int) -> int:
    """Free parameters of a K-component mixture on the cylinder.

    Two mean entries, three covariance entries and one weight per component,
    minus the constraint that the weights sum to one.
    """
    if k < 1:
        raise ValueError("k must be >= 1, got {}.".format(k))
    return 6 * k - 1


def bic_score(loglik: float, k: int, n: int) -> float:
    """``BIC = k_p ln n - 2 L``."""
    return free_parameter_count(k) * math.log(n) - 2.0 * loglik


def _candidate_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


def bic_sweep_fit(
    samples: Sequence[CylindricalSample], cfg: FitConfig
) -> Tuple[SwGmm, FitDiagnostics]:
    """Fit every feasible K in ``1..k_max`` and keep the lowest BIC.

    Each candidate is seeded by K-means++ on the cylinder and refined by EM.
    Candidates are recorded under the component count that survived EM; a
    candidate collapsing onto an already evaluated count is skipped. Ties go
    to the smaller K.

    :param samples: the observations
    :param cfg: fit parameters
    :return: the selected model and the sweep diagnostics
    :raises: :exc:`FitFailureError <flowdyn.exceptions.FitFailureError>`: if no candidate K could be fitted.
    """
    n = len(samples)
    if n < cfg.min_samples_per_component:
        raise FitFailureError(
            "{} samples are fewer than the {} needed for one component.".format(
                n, cfg.min_samples_per_component
            )
        )
    theta, rho = as_arrays(samples)
    best: Tuple[int, float, EmRun] = None
    bic_per_k, iters_per_k, history_per_k = [], [], []
    clamped_steps = 0
    for k in range(1, cfg.k_max + 1):
        if n < k * cfg.min_samples_per_component:
            break
        rng = _candidate_rng(cfg.rng_seed, k)
        centers = kmeanspp_centers(theta, rho, k, rng)
        labels = assign_labels(theta, rho, theta[centers], rho[centers])
        try:
            run = run_em(theta, rho, k, labels, cfg)
        except FitFailureError as e:
            logger.debug("Candidate K=%d failed: %s", k, e)
            continue
        effective_k = run.model.k
        if any(evaluated == effective_k for evaluated, _ in bic_per_k):
            logger.debug("Candidate K=%d collapsed to an already evaluated K=%d.", k, effective_k)
            continue
        bic = bic_score(run.loglik, effective_k, n)
        bic_per_k.append((effective_k, bic))
        iters_per_k.append((effective_k, run.iters))
        history_per_k.append((effective_k, run.history))
        clamped_steps += run.clamped_steps
        if best is None or bic < best[1] or (bic == best[1] and effective_k < best[0]):
            best = (effective_k, bic, run)
    if best is None:
        raise FitFailureError("No candidate component count could be fitted.")

    selected_k, _, run = best
    diagnostics = FitDiagnostics(
        selected_k=selected_k,
        bic_per_k=bic_per_k,
        final_loglik=run.loglik,
        em_iters_per_k=iters_per_k,
        init_method=InitMethod.BIC_KMEANSPP,
        loglik_history_per_k=history_per_k,
        clamped_steps=clamped_steps,
    )
    return run.model, diagnostics
