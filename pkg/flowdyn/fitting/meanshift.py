import logging
import math
from typing import List, Sequence, Tuple

import numpy as np

from .bic import bic_score
from .em import moment_fit, run_em
from .fit_config import FitConfig
from .fit_diagnostics import FitDiagnostics, InitMethod
from .samples import as_arrays, circular_linear_sq_dist
from ..angles import wrap_angles
from ..cylindrical_sample import CylindricalSample
from ..exceptions import ValueError
from ..sw_gmm import SwGmm

__all__ = [
    "meanshift_fit",
    "silverman_bandwidth",
    "meanshift_modes",
    "kernel_density",
    "ridge_ratio",
]

logger = logging.getLogger(__name__)

_DIM = 2
_RIDGE_STEPS = 16


def silverman_bandwidth(theta: np.ndarray, rho: np.ndarray, floor: float) -> Tuple[float, float]:
    """Per-dimension Silverman bandwidth on the cylinder.

    ``h_d = (4 / ((d + 2) n)) ** (1 / (d + 4)) * s_d`` with ``d = 2``, the
    circular standard deviation ``sqrt(-2 ln R)`` for the heading and the
    sample standard deviation for the speed. Both are floored at ``floor``.
    """
    n = theta.shape[0]
    factor = (4.0 / ((_DIM + 2) * n)) ** (1.0 / (_DIM + 4))
    resultant = float(np.abs(np.mean(np.exp(1j * theta))))
    s_theta = math.sqrt(-2.0 * math.log(max(resultant, 1e-12))) if resultant < 1 else 0.0
    s_rho = float(np.std(rho, ddof=1)) if n > 1 else 0.0
    return max(factor * s_theta, floor), max(factor * s_rho, floor)


def meanshift_modes(
    theta: np.ndarray, rho: np.ndarray, h_theta: float, h_rho: float, cfg: FitConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Run Gaussian-kernel mean-shift from every sample until nothing moves.

    Heading shifts use the wrapped difference, so modes may cross ``+-pi``.
    Every iteration touches all sample pairs.

    :return: converged ``(mode_theta, mode_rho)``, one per sample
    """
    m_t = theta.copy()
    m_r = rho.copy()
    for it in range(cfg.meanshift_max_iters):
        dt = wrap_angles(theta[None, :] - m_t[:, None])
        dr = rho[None, :] - m_r[:, None]
        w = np.exp(-0.5 * ((dt / h_theta) ** 2 + (dr / h_rho) ** 2))
        sw = w.sum(axis=1)
        step_t = (w * dt).sum(axis=1) / sw
        new_r = (w * rho[None, :]).sum(axis=1) / sw
        moved = max(
            float(np.max(np.abs(step_t))) / h_theta,
            float(np.max(np.abs(new_r - m_r))) / h_rho,
        )
        m_t = wrap_angles(m_t + step_t)
        m_r = new_r
        if moved < cfg.meanshift_tol:
            logger.debug("Mean-shift converged after %d iterations.", it + 1)
            break
    return m_t, m_r


def kernel_density(
    theta: np.ndarray,
    rho: np.ndarray,
    at_theta: np.ndarray,
    at_rho: np.ndarray,
    h_theta: float,
    h_rho: float,
) -> np.ndarray:
    """Unnormalized Gaussian kernel density of the samples at the query points."""
    dt = wrap_angles(theta[None, :] - np.atleast_1d(at_theta)[:, None])
    dr = rho[None, :] - np.atleast_1d(at_rho)[:, None]
    return np.exp(-0.5 * ((dt / h_theta) ** 2 + (dr / h_rho) ** 2)).mean(axis=1)


def ridge_ratio(
    theta: np.ndarray,
    rho: np.ndarray,
    a: Tuple[float, float],
    b: Tuple[float, float],
    h_theta: float,
    h_rho: float,
) -> float:
    """Lowest kernel density on the shortest path from mode ``a`` to mode ``b``,
    relative to the lower of the two mode densities.

    A ratio near one means no valley separates the modes.
    """
    steps = np.linspace(0.0, 1.0, _RIDGE_STEPS + 1)
    d_t = float(wrap_angles(b[0] - a[0]))
    path_t = a[0] + steps * d_t
    path_r = a[1] + steps * (b[1] - a[1])
    density = kernel_density(theta, rho, path_t, path_r, h_theta, h_rho)
    return float(density.min() / min(density[0], density[-1]))


def _group_modes(m_t: np.ndarray, m_r: np.ndarray, radius: float) -> Tuple[np.ndarray, int]:
    # single linkage: converged points chained within the radius share a mode
    n = m_t.shape[0]
    labels = np.full(n, -1, dtype=int)
    count = 0
    for seed in range(n):
        if labels[seed] >= 0:
            continue
        labels[seed] = count
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            near = circular_linear_sq_dist(m_t, m_r, m_t[i], m_r[i]) <= radius ** 2
            fresh = np.flatnonzero(near & (labels < 0))
            labels[fresh] = count
            frontier.extend(fresh.tolist())
        count += 1
    return labels, count


def _mode_centers(
    m_t: np.ndarray, m_r: np.ndarray, labels: np.ndarray, count: int
) -> Tuple[np.ndarray, np.ndarray]:
    c_t = np.empty(count)
    c_r = np.empty(count)
    for label in range(count):
        mask = labels == label
        c_t[label] = float(np.angle(np.mean(np.exp(1j * m_t[mask]))))
        c_r[label] = float(m_r[mask].mean())
    return c_t, c_r


def _merge_shallow_modes(
    theta: np.ndarray,
    rho: np.ndarray,
    c_t: np.ndarray,
    c_r: np.ndarray,
    h_theta: float,
    h_rho: float,
    valley_ratio: float,
) -> List[int]:
    """Parent of every mode: itself, or a denser mode it is not separated from."""
    density = kernel_density(theta, rho, c_t, c_r, h_theta, h_rho)
    # densest first, earliest mode on ties
    order = sorted(range(c_t.shape[0]), key=lambda c: (-density[c], c))
    parent = list(range(c_t.shape[0]))
    peaks: List[int] = []
    for c in order:
        for p in peaks:
            ratio = ridge_ratio(theta, rho, (c_t[p], c_r[p]), (c_t[c], c_r[c]), h_theta, h_rho)
            if ratio >= valley_ratio:
                parent[c] = p
                break
        else:
            peaks.append(c)
    return parent


def meanshift_fit(
    samples: Sequence[CylindricalSample], cfg: FitConfig
) -> Tuple[SwGmm, FitDiagnostics]:
    """Mean-shift initialization followed by EM, the batch alternative to the BIC sweep.

    Converged points chained within ``0.5 * min(h_theta, h_rho)`` of each
    other form one mode. A mode whose straight path to a denser mode never
    dips below ``meanshift_valley_ratio`` of its own kernel density is
    merged into it. Modes holding fewer than ``max(min_samples_per_component,
    meanshift_min_mode_fraction * n)`` samples are dissolved into the nearest
    surviving mode, and at most ``k_max`` of the most populated modes are kept.
    The surviving mode count is passed to EM as K. Fewer samples than
    ``min_samples_per_component`` give a single moment-matched component.

    :param samples: the observations, at least one
    :param cfg: fit parameters
    :return: the model and its diagnostics
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if there are no samples.
        | :exc:`FitFailureError <flowdyn.exceptions.FitFailureError>`: if every component collapses.
    """
    theta, rho = as_arrays(samples)
    n = theta.shape[0]
    if n == 0:
        raise ValueError("Mean-shift needs at least one sample.")
    h_t, h_r = silverman_bandwidth(theta, rho, math.sqrt(cfg.cov_floor))
    radius = 0.5 * min(h_t, h_r)
    if n < cfg.min_samples_per_component:
        model, clamped = moment_fit(theta, rho, cfg)
        loglik = model.log_likelihood(theta, rho)
        diagnostics = FitDiagnostics(
            selected_k=1,
            bic_per_k=[(1, bic_score(loglik, 1, n))],
            final_loglik=loglik,
            em_iters_per_k=[(1, 0)],
            init_method=InitMethod.MEAN_SHIFT,
            loglik_history_per_k=[(1, [loglik])],
            clamped_steps=int(clamped),
            bandwidth=(h_t, h_r),
            merge_radius=radius,
            raw_mode_count=1,
        )
        return model, diagnostics

    m_t, m_r = meanshift_modes(theta, rho, h_t, h_r, cfg)
    raw_labels, raw_count = _group_modes(m_t, m_r, radius)
    c_t, c_r = _mode_centers(m_t, m_r, raw_labels, raw_count)
    parent = _merge_shallow_modes(theta, rho, c_t, c_r, h_t, h_r, cfg.meanshift_valley_ratio)
    merged = np.array([parent[label] for label in raw_labels])

    counts = np.bincount(merged, minlength=raw_count)
    min_size = max(cfg.min_samples_per_component, math.ceil(cfg.meanshift_min_mode_fraction * n))
    peaks = [c for c in range(raw_count) if parent[c] == c]
    # most populated first, earliest mode on ties
    order = sorted(peaks, key=lambda c: (-counts[c], c))
    survivors = [c for c in order if counts[c] >= min_size][: cfg.k_max] or order[:1]
    survivors.sort()
    d2 = np.stack(
        [circular_linear_sq_dist(theta, rho, c_t[c], c_r[c]) for c in survivors], axis=1
    )
    remap = {c: i for i, c in enumerate(survivors)}
    labels = np.array([remap.get(m, int(np.argmin(d2[j]))) for j, m in enumerate(merged)])
    k = len(survivors)
    logger.debug(
        "Mean-shift found %d raw modes, %d after ridge merging, kept %d.",
        raw_count,
        len(peaks),
        k,
    )

    run = run_em(theta, rho, k, labels, cfg)
    diagnostics = FitDiagnostics(
        selected_k=run.model.k,
        bic_per_k=[(run.model.k, bic_score(run.loglik, run.model.k, n))],
        final_loglik=run.loglik,
        em_iters_per_k=[(k, run.iters)],
        init_method=InitMethod.MEAN_SHIFT,
        loglik_history_per_k=[(k, run.history)],
        clamped_steps=run.clamped_steps,
        bandwidth=(h_t, h_r),
        merge_radius=radius,
        raw_mode_count=raw_count,
    )
    return run.model, diagnostics
