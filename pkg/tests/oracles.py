"""Brute-force reference computations kept independent of the library code paths."""

import itertools
import math

import numpy as np
import scipy.linalg


def random_density(dim, rng, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def fidelity_sqrtm(rho, sigma):
    """Bures fidelity via scipy's general matrix square root (Schur based)."""
    s = scipy.linalg.sqrtm(rho)
    inner = scipy.linalg.sqrtm(s @ sigma @ s)
    return float(np.trace(inner).real)


def kraus_apply(ops, rho):
    out = np.zeros_like(rho, dtype=complex)
    for k in ops:
        out += k @ rho @ k.conj().T
    return out


def binom(p, M, m):
    return math.comb(M, m) * p**m * (1 - p) ** (M - m)


def receiver_success_enumeration(N, M, p_target, p_reference, mode):
    """Success probability of the min/max receiver by summing over all (M+1)^N count outcomes.

    Box 0 is the target. Ties are split exactly: the receiver picks each
    tied box with equal probability.
    """
    total = 0.0
    pick = max if mode == "max" else min
    for counts in itertools.product(range(M + 1), repeat=N):
        prob = binom(p_target, M, counts[0])
        for c in counts[1:]:
            prob *= binom(p_reference, M, c)
        if prob == 0.0:
            continue
        best = pick(counts)
        if counts[0] == best:
            total += prob / counts.count(best)
    return total
