import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from .fit_config import FitConfig
from .samples import as_arrays
from ..angles import wrap_angles
from ..cylindrical_sample import CylindricalSample
from ..exceptions import FitFailureError, ValueError
from ..sw_component import SwComponent, regularize_covariance
from ..sw_gmm import SwGmm, replica_log_pdf, replica_offsets

__all__ = ["em_fit", "EmRun", "run_em", "moment_fit", "COLLAPSE_THRESHOLD", "MONOTONICITY_SLACK"]

logger = logging.getLogger(__name__)

COLLAPSE_THRESHOLD = 1e-12
MONOTONICITY_SLACK = 1e-6


class EmRun:
    """Everything one EM run produced.

    :param model: the fitted mixture
    :param loglik: total log-likelihood of ``model`` on the samples
    :param iters: EM iterations performed
    :param history: total log-likelihood after every E-step
    :param clamped_steps: M-steps in which a covariance had to be regularized
    :param non_monotone_steps: steps where the log-likelihood fell by more than the slack
    """

    def __init__(
        self,
        model: SwGmm,
        loglik: float,
        iters: int,
        history: List[float],
        clamped_steps: int,
        non_monotone_steps: int,
    ) -> None:
        self.model: SwGmm = model
        self.loglik: float = loglik
        self.iters: int = iters
        self.history: List[float] = history
        self.clamped_steps: int = clamped_steps
        self.non_monotone_steps: int = non_monotone_steps


def _initial_components(
    theta: np.ndarray, rho: np.ndarray, labels: np.ndarray, k: int, cfg: FitConfig
) -> Tuple[List[SwComponent], bool]:
    n = theta.shape[0]
    components = []
    clamped_any = False
    for label in range(k):
        mask = labels == label
        count = int(mask.sum())
        if count == 0:
            continue
        t, r = theta[mask], rho[mask]
        mu_t = float(np.angle(np.mean(np.exp(1j * t))))
        mu_r = float(r.mean())
        dt = wrap_angles(t - mu_t)
        dr = r - mu_r
        sigma = np.array(
            [[np.mean(dt * dt), np.mean(dt * dr)], [np.mean(dt * dr), np.mean(dr * dr)]]
        )
        sigma, clamped = regularize_covariance(sigma, cfg.cov_floor, cfg.cs_epsilon)
        clamped_any = clamped_any or clamped
        components.append(SwComponent(count / n, mu_t, mu_r, sigma))
    return components, clamped_any


def moment_fit(theta: np.ndarray, rho: np.ndarray, cfg: FitConfig) -> Tuple[SwGmm, bool]:
    """One component from the circular mean and the regularized sample covariance.

    Works for any non-empty sample, even one too small for EM.

    :return: the model and whether the covariance was regularized
    """
    components, clamped = _initial_components(
        theta, rho, np.zeros(theta.shape[0], dtype=int), 1, cfg
    )
    return SwGmm(components, cfg.winding, sample_count_at_fit=theta.shape[0]), clamped


def _e_step(
    theta: np.ndarray, rho: np.ndarray, components: List[SwComponent], winding: int
) -> Tuple[float, np.ndarray]:
    # joint log of alpha_k N(z_j + 2 pi w | mu_k, sigma_k), shape (n, K, 2W+1)
    log_terms = np.stack(
        [math.log(c.weight) + replica_log_pdf(theta, rho, c, winding) for c in components],
        axis=1,
    )
    per_sample = logsumexp(log_terms, axis=(1, 2))
    resp = np.exp(log_terms - per_sample[:, None, None])
    return float(per_sample.sum()), resp


def _m_step(
    theta: np.ndarray,
    rho: np.ndarray,
    resp: np.ndarray,
    previous: List[SwComponent],
    winding: int,
    cfg: FitConfig,
) -> Tuple[List[SwComponent], bool]:
    mass = resp.sum(axis=(0, 2))
    keep = [k for k in range(resp.shape[1]) if mass[k] >= COLLAPSE_THRESHOLD]
    if not keep:
        raise FitFailureError("Every mixture component collapsed.")
    if len(keep) < resp.shape[1]:
        logger.debug("Dropping %d collapsed component(s).", resp.shape[1] - len(keep))
    total = mass[keep].sum()
    components = []
    clamped_any = False
    for k in keep:
        r = resp[:, k, :]
        nk = mass[k]
        # replicas as placed by the E-step, around the previous mean
        anchor = previous[k].mu_theta
        shifted = anchor + replica_offsets(theta, anchor, winding)
        mu_t = float((r * shifted).sum() / nk)
        r_j = r.sum(axis=1)
        mu_r = float((r_j * rho).sum() / nk)
        dt = shifted - mu_t
        dr = (rho - mu_r)[:, None]
        s_tt = float((r * dt * dt).sum() / nk)
        s_tr = float((r * dt * dr).sum() / nk)
        s_rr = float((r_j * (rho - mu_r) ** 2).sum() / nk)
        sigma, clamped = regularize_covariance(
            np.array([[s_tt, s_tr], [s_tr, s_rr]]), cfg.cov_floor, cfg.cs_epsilon
        )
        clamped_any = clamped_any or clamped
        components.append(SwComponent(nk / total, mu_t, mu_r, sigma))
    return components, clamped_any


def run_em(
    theta: np.ndarray, rho: np.ndarray, k: int, init_labels: np.ndarray, cfg: FitConfig
) -> EmRun:
    """EM on heading/speed arrays. See :func:`em_fit`."""
    n = theta.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1, got {}.".format(k))
    if n < k * cfg.min_samples_per_component:
        raise ValueError(
            "{} samples cannot support {} components (need {} per component).".format(
                n, k, cfg.min_samples_per_component
            )
        )
    init_labels = np.asarray(init_labels)
    if init_labels.shape != (n,) or np.any(init_labels < 0) or np.any(init_labels >= k):
        raise ValueError("init_labels must assign each sample to one of {} clusters.".format(k))

    components, clamped = _initial_components(theta, rho, init_labels, k, cfg)
    clamped_steps = int(clamped)
    non_monotone = 0
    history: List[float] = []
    loglik = -math.inf
    iters = 0
    for iters in range(1, cfg.em_max_iters + 1):
        loglik, resp = _e_step(theta, rho, components, cfg.winding)
        if history and loglik < history[-1] - MONOTONICITY_SLACK:
            non_monotone += 1
        history.append(loglik)
        if len(history) > 1 and abs(history[-1] - history[-2]) < cfg.em_loglik_tol:
            break
        components, clamped = _m_step(theta, rho, resp, components, cfg.winding, cfg)
        clamped_steps += int(clamped)
    else:
        # the last M-step moved the parameters; score what is returned
        loglik, _ = _e_step(theta, rho, components, cfg.winding)
        history.append(loglik)

    model = SwGmm(components, cfg.winding, sample_count_at_fit=n)
    return EmRun(model, loglik, iters, history, clamped_steps, non_monotone)


def em_fit(
    samples: Sequence[CylindricalSample], k: int, init_labels: np.ndarray, cfg: FitConfig
) -> Tuple[SwGmm, float, int]:
    """Fit a semi-wrapped mixture by EM from hard initial labels.

    The E-step normalizes responsibilities jointly over components and
    winding replicas. The M-step re-estimates weights, means (from the
    winding-shifted samples, heading re-wrapped) and regularized covariances.
    Components whose total responsibility falls below ``1e-12`` are dropped.

    :param samples: the observations
    :param k: number of components
    :param init_labels: initial cluster of every sample, in ``0..k-1``
    :param cfg: fit parameters
    :return: the model, its total log-likelihood and the iteration count
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if there are too few samples for ``k``.
        | :exc:`FitFailureError <flowdyn.exceptions.FitFailureError>`: if every component collapses.
    """
    theta, rho = as_arrays(samples)
    run = run_em(theta, rho, k, init_labels, cfg)
    return run.model, run.loglik, run.iters
