"""Numerical tolerances and size limits shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_DIM = 4096


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    hermitian_input: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    pure_norm: float = 1e-12
    completeness: float = 1e-10
    fidelity_clip: float = 1e-10
    coherent_tail: float = 1e-8


TOL = Tolerances()


def max_dim() -> int:
    """Dimension cap for dense matrices; ``CPF_MAX_DIM`` overrides the default."""
    raw = os.environ.get("CPF_MAX_DIM")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    value = int(raw)
    if value < 1:
        raise ValueError(f"CPF_MAX_DIM must be positive, got {value}")
    return value
