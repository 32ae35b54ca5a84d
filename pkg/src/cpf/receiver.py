"""Photon-counting min/max receiver for channel position finding.

Each box is probed ``M`` times and its clicks are counted. The receiver
names the box with the most clicks when the target clicks more often than
the reference (``Max`` mode) and the fewest otherwise (``Min`` mode),
choosing uniformly among tied boxes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .channels import check_rate

CLICK_MODELS = ("exactly_one", "at_least_one")


class Mode(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class ReceiverModel:
    p_target: float
    p_reference: float
    mode: Mode

    def __post_init__(self):
        for p in (self.p_target, self.p_reference):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"click probability must lie in [0, 1], got {p}")
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.p_target > self.p_reference and mode is not Mode.MAX:
            raise ValueError("p_target > p_reference requires Max mode")
        if self.p_target < self.p_reference and mode is not Mode.MIN:
            raise ValueError("p_target < p_reference requires Min mode")

    @classmethod
    def from_probs(cls, p_target: float, p_reference: float) -> ReceiverModel:
        """Pick the decision rule from the click probabilities (Max on ties)."""
        mode = Mode.MIN if p_target < p_reference else Mode.MAX
        return cls(p_target, p_reference, mode)


@dataclass(frozen=True)
class SimResult:
    trials: int
    errors: int
    p_err_estimate: float
    std_error: float


def click_prob_coherent(gamma: float, n_bar: float = 1.0, click_model: str = "exactly_one") -> float:
    """Per-use click probability for a damped coherent state.

    ``exactly_one`` is the one-photon Poisson probability
    ``tau n_bar exp(-tau n_bar)`` (with ``n_bar = 1``: ``exp(gamma-1)(1-gamma)``);
    ``at_least_one`` is the threshold-detector value ``1 - exp(-tau n_bar)``.
    """
    tau_n = (1.0 - check_rate(gamma)) * n_bar
    if click_model == "exactly_one":
        return tau_n * math.exp(-tau_n)
    if click_model == "at_least_one":
        return -math.expm1(-tau_n)
    raise ValueError(f"click_model must be one of {CLICK_MODELS}, got {click_model!r}")


def click_prob_fock(gamma: float) -> float:
    return 1.0 - check_rate(gamma)


def _log_pmf(p: float, M: int, m: np.ndarray) -> np.ndarray:
    logc = gammaln(M + 1) - gammaln(m + 1) - gammaln(M - m + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = m * np.log(p)
        lq = (M - m) * np.log1p(-p)
    # 0 * log(0) counts as 0 so that p in {0, 1} gives point masses
    lp = np.where(m == 0, 0.0, lp)
    lq = np.where(m == M, 0.0, lq)
    return logc + lp + lq


def binomial_pmf(p: float, M: int) -> np.ndarray:
    """``p_det(p, M, m)`` for every ``m = 0..M``."""
    m = np.arange(M + 1)
    if M <= 500:
        comb = np.array([math.comb(M, k) for k in m], dtype=float)
        return comb * np.power(p, m) * np.power(1.0 - p, M - m)
    return np.exp(_log_pmf(p, M, m))


def p_det(p: float, M: int, m: int) -> float:
    """Binomial probability of ``m`` clicks in ``M`` uses."""
    if not 0 <= m <= M:
        raise ValueError(f"need 0 <= m <= M, got m={m}, M={M}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if M <= 500:
        return math.comb(M, m) * p**m * (1.0 - p) ** (M - m)
    return float(np.exp(_log_pmf(p, M, np.array(m))))


def p_cum_below(p: float, M: int, m_t: int) -> float:
    """Probability of strictly fewer than ``m_t`` clicks."""
    if not 0 <= m_t <= M:
        raise ValueError(f"need 0 <= m_t <= M, got m_t={m_t}, M={M}")
    return float(np.sum(binomial_pmf(p, M)[:m_t]))


def p_success_minmax(N: int, M: int, model: ReceiverModel) -> float:
    """Exact success probability of the min/max receiver.

    Sums over the target count ``m_T`` and the number ``r`` of boxes sharing
    it: the other ``N - r`` boxes fall strictly below, ``r - 1`` reference
    boxes tie, and the tie is broken with probability ``1/r``. Min mode is
    the same sum after the count reversal ``m -> M - m``, ``p -> 1 - p``.
    """
    if N < 2:
        raise ValueError(f"need at least 2 boxes, got {N}")
    if M < 0:
        raise ValueError(f"M must be non-negative, got {M}")
    pt, pr = model.p_target, model.p_reference
    if model.mode is Mode.MIN:
        pt, pr = 1.0 - pt, 1.0 - pr
    pmf_t = binomial_pmf(pt, M)
    pmf_r = binomial_pmf(pr, M)
    below = np.concatenate(([0.0], np.cumsum(pmf_r)[:-1]))
    total = 0.0
    for r in range(1, N + 1):
        weight = math.comb(N - 1, r - 1) / r
        total += weight * np.sum(below ** (N - r) * pmf_t * pmf_r ** (r - 1))
    return float(min(max(total, 0.0), 1.0))


def p_error_minmax(N: int, M: int, model: ReceiverModel) -> float:
    return 1.0 - p_success_minmax(N, M, model)


def _chunk_errors(N: int, M: int, model: ReceiverModel, size: int, seed: int, chunk: int) -> int:
    rng = np.random.default_rng(np.random.SeedSequence((seed, chunk)))
    counts = np.empty((size, N), dtype=np.int64)
    # box 0 holds the target; the hypotheses are symmetric under relabelling
    counts[:, 0] = rng.binomial(M, model.p_target, size=size)
    counts[:, 1:] = rng.binomial(M, model.p_reference, size=(size, N - 1))
    if model.mode is Mode.MIN:
        counts = -counts
    keys = rng.random((size, N))
    tied = counts == counts.max(axis=1, keepdims=True)
    chosen = np.argmax(np.where(tied, keys, -1.0), axis=1)
    return int(np.count_nonzero(chosen != 0))


def simulate_receiver(
    N: int,
    M: int,
    model: ReceiverModel,
    trials: int,
    seed: int,
    chunk_size: int = 1 << 16,
    workers: int | None = None,
) -> SimResult:
    """Monte Carlo estimate of the min/max receiver error probability.

    Trials are split into fixed-size chunks, each with its own generator
    keyed on ``(seed, chunk_index)``, so the result does not depend on
    ``workers``.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    sizes = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]
    jobs = [(N, M, model, size, seed, c) for c, size in enumerate(sizes)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(lambda job: _chunk_errors(*job), jobs))
    else:
        errors = sum(_chunk_errors(*job) for job in jobs)
    p_hat = errors / trials
    return SimResult(trials, errors, p_hat, math.sqrt(p_hat * (1 - p_hat) / trials))
