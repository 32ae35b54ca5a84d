"""Fidelities and fidelity-based error bounds for channel position finding.

Closed forms are provided for the coherent, single-photon, generic
bipartite and signal-idler biphoton sources. GHZ and idler-free biphoton
fidelities are evaluated numerically from the channel outputs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import adc, apply, check_rate, cpf_channel, identity_channel, ProductChannel
from .linalg import ComplexArray, fidelity, ket_to_dm, trace_distance
from .sources import (
    MAX_GHZ_PARTIES,
    BiphotonIF,
    BiphotonSI,
    Coherent,
    Fock,
    GenBipartite,
    Ghz,
    SourceKind,
    biphoton_bell,
    bosonic_loss,
    box_input,
    unit_input,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CpfScenario:
    """N boxes probed M times; the target box damps at ``gamma1``, the others at ``gamma0``."""

    n_boxes: int
    m_uses: int
    gamma0: float
    gamma1: float
    source: SourceKind

    def __post_init__(self):
        if self.n_boxes < 2:
            raise ValueError(f"need at least 2 boxes, got {self.n_boxes}")
        if self.m_uses < 0:
            raise ValueError(f"m_uses must be non-negative, got {self.m_uses}")
        check_rate(self.gamma0)
        check_rate(self.gamma1)
        if isinstance(self.source, BiphotonIF) and (self.n_boxes % 2 or self.n_boxes < 4):
            raise ValueError(f"even N >= 4 required for the idler-free protocol, got N={self.n_boxes}")
        if isinstance(self.source, Ghz) and self.n_boxes > MAX_GHZ_PARTIES:
            raise ValueError(f"GHZ supports at most {MAX_GHZ_PARTIES} boxes, got {self.n_boxes}")

    def replace(self, **changes) -> CpfScenario:
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class BoundsResult:
    lower: float
    upper: float
    fidelity_used: float


class AMinimum(NamedTuple):
    a_min: float
    f_min: float
    degenerate: bool = False


def bound_upper(F: float, N: int, M: int) -> float:
    """``(N-1) F^(2M)`` clamped to 1."""
    return min(1.0, (N - 1) * F ** (2 * M))


def bound_lower(F: float, N: int, M: int) -> float:
    return (N - 1) / (2 * N) * F ** (4 * M)


def _xy(gamma0: float, gamma1: float) -> tuple[float, float]:
    return math.sqrt(1 - check_rate(gamma0)), math.sqrt(1 - check_rate(gamma1))


def fidelity_coherent(gamma0: float, gamma1: float, n_bar: float = 1.0) -> float:
    x, y = _xy(gamma0, gamma1)
    return math.exp(-0.5 * n_bar * (x - y) ** 2)


def fidelity_fock(gamma0: float, gamma1: float) -> float:
    x, y = _xy(gamma0, gamma1)
    return x * y + math.sqrt(gamma0 * gamma1)


def fidelity_gen_bipartite(a: float, gamma0: float, gamma1: float) -> float:
    x, y = _xy(gamma0, gamma1)
    # 1 - x^2 is gamma0 exactly; using the rates avoids cancellation at small damping
    return (1 - a) * math.sqrt(gamma0 * gamma1) + a + x * y - a * x * y


def fidelity_biphoton_si(gamma0: float, gamma1: float) -> float:
    x, y = _xy(gamma0, gamma1)
    return 0.5 * (x * y + 1 + math.sqrt(gamma0 * gamma1))


def fidelity_biphoton_if_closed_form(gamma0: float, gamma1: float) -> float:
    """Printed alpha/beta expression for the idler-free fidelity.

    The beta bracket is read as ``beta = sqrt(bracket)``; only used as a
    diagnostic against :func:`fidelity_biphoton_if`.
    """
    g0, g1 = check_rate(gamma0), check_rate(gamma1)
    G = math.sqrt(1 - g0) * math.sqrt(1 - g1)
    alpha = 2 + 2 * G - g1 + g0 * (-3 - 2 * G + 4 * g1 + g0 * (4 - 3 * g1 + g0 * (-1 + 2 * g1)))
    bracket = (
        8 + g0**6 + 8 * G + g1 * (-8 - 4 * G + g1) + 2 * g0**5 * (-4 + 5 * g1)
        + 4 * g0**3 * (-8 - 5 * G + (15 + 5 * G - 6 * g1) * g1)
        + g0 * (-4 * (6 + 5 * G) + 2 * (17 + 10 * G - 4 * g1) * g1)
        + g0**4 * (22 + 4 * G - 8 * (4 + G) * g1 + 13 * g1**2)
        + g0**2 * (37 + 28 * G - 28 * (2 + G) * g1 + 22 * g1**2)
    )
    beta = math.sqrt(max(bracket, 0.0))
    prod = (alpha - beta) * (alpha + beta)
    return math.sqrt(max(prod, 0.0)) / (2 * math.sqrt(2))


def biphoton_if_outputs(gamma0: float, gamma1: float) -> tuple[ComplexArray, ComplexArray]:
    """Bell pair through ADC pairs ``(gamma1, gamma0)`` and ``(gamma0, gamma0)``."""
    bell = ket_to_dm(biphoton_bell())
    target = apply(ProductChannel((adc(gamma1), adc(gamma0))), bell)
    reference = apply(ProductChannel((adc(gamma0), adc(gamma0))), bell)
    return target, reference


def fidelity_biphoton_if(gamma0: float, gamma1: float) -> float:
    f = fidelity(*biphoton_if_outputs(gamma0, gamma1))
    printed = fidelity_biphoton_if_closed_form(gamma0, gamma1)
    if abs(printed - f) > 1e-8:
        logger.info(
            "idler-free closed form disagrees with numeric fidelity at gamma0=%g gamma1=%g: %.12g vs %.12g",
            gamma0, gamma1, printed, f,
        )
    return f


def _golden_section(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    c, d = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def minimize_fidelity_over_a(gamma0: float, gamma1: float, step: float = 1e-4) -> AMinimum:
    """Minimize the generic bipartite fidelity over the entanglement parameter ``a``.

    A grid scan locates the basin and golden-section search refines it. The
    interval endpoints are also compared, since the optimum may sit on the
    boundary. When the fidelity is flat (``gamma0 == gamma1``) the result is
    ``a_min = 0`` with ``degenerate=True``.
    """
    grid = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    values = np.array([fidelity_gen_bipartite(a, gamma0, gamma1) for a in grid])
    if np.ptp(values) <= 1e-12:
        return AMinimum(0.0, float(values[0]), True)
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    f = lambda a: fidelity_gen_bipartite(a, gamma0, gamma1)
    a_star = _golden_section(f, lo, hi)
    candidates = [(f(a), a) for a in (lo, a_star, hi)]
    f_min, a_min = min(candidates)
    return AMinimum(float(a_min), float(f_min), False)


def hypothesis_outputs(scenario: CpfScenario) -> tuple[ComplexArray, ComplexArray]:
    """The two states whose fidelity enters the bounds.

    Per-box outputs under the target and reference channel for product
    sources, box-pair outputs for the idler-free protocol, and whole-array
    outputs with the target at box 0 versus box 1 for GHZ.
    """
    src, g0, g1 = scenario.source, scenario.gamma0, scenario.gamma1
    if isinstance(src, Ghz):
        psi = box_input(src, scenario.n_boxes)
        return (
            apply(cpf_channel(scenario, 0), psi),
            apply(cpf_channel(scenario, 1), psi),
        )
    if isinstance(src, BiphotonIF):
        return biphoton_if_outputs(g0, g1)
    rho = unit_input(src)
    if isinstance(src, Coherent):
        channels = [bosonic_loss(g, src.n_max) for g in (g1, g0)]
    elif isinstance(src, Fock):
        channels = [adc(g) for g in (g1, g0)]
    else:
        channels = [ProductChannel((adc(g), identity_channel(2))) for g in (g1, g0)]
    return apply(channels[0], rho), apply(channels[1], rho)


def numeric_fidelity(scenario: CpfScenario) -> float:
    return fidelity(*hypothesis_outputs(scenario))


def hypothesis_trace_distance(scenario: CpfScenario) -> float:
    return trace_distance(*hypothesis_outputs(scenario))


def fidelity_ghz(scenario: CpfScenario, box_i: int = 0, box_k: int = 1) -> float:
    """Whole-array fidelity between GHZ outputs with the target at ``box_i`` and at ``box_k``."""
    if not isinstance(scenario.source, Ghz):
        raise ValueError("fidelity_ghz needs a GHZ scenario")
    if box_i == box_k:
        raise ValueError("box_i and box_k must differ")
    psi = box_input(scenario.source, scenario.n_boxes)
    return fidelity(
        apply(cpf_channel(scenario, box_i), psi),
        apply(cpf_channel(scenario, box_k), psi),
    )


def scenario_fidelity(scenario: CpfScenario) -> float:
    """Fidelity used by :func:`bounds_for_scenario`."""
    src, g0, g1 = scenario.source, scenario.gamma0, scenario.gamma1
    if isinstance(src, Coherent):
        return fidelity_coherent(g0, g1, src.n_bar)
    if isinstance(src, Fock):
        return fidelity_fock(g0, g1)
    if isinstance(src, GenBipartite):
        return fidelity_gen_bipartite(src.a, g0, g1)
    if isinstance(src, BiphotonSI):
        return fidelity_biphoton_si(g0, g1)
    if isinstance(src, BiphotonIF):
        return fidelity_biphoton_if(g0, g1)
    if isinstance(src, Ghz):
        return fidelity_ghz(scenario)
    raise ValueError(f"unsupported source {src!r}")


def bounds_from_fidelity(source: SourceKind, N: int, M: int, F: float) -> BoundsResult:
    """Apply the prefactors and exponents of ``source`` to a precomputed fidelity.

    Product sources use ``(N-1)/(2N) F^(4M)`` and ``(N-1) F^(2M)`` with the
    per-box fidelity. GHZ uses the whole-array fidelity, which already
    covers both boxes that differ between two hypotheses, so the exponents
    halve to ``2M`` and ``M``. The idler-free protocol uses the prefactor
    ``(N-2)/(2N)`` in the lower bound.
    """
    if isinstance(source, Ghz):
        lower = (N - 1) / (2 * N) * F ** (2 * M)
        upper = min(1.0, (N - 1) * F**M)
    elif isinstance(source, BiphotonIF):
        lower = (N - 2) / (2 * N) * F ** (4 * M)
        upper = bound_upper(F, N, M)
    else:
        lower = bound_lower(F, N, M)
        upper = bound_upper(F, N, M)
    if lower > upper:
        raise AssertionError(f"lower bound {lower} exceeds upper bound {upper}")
    return BoundsResult(lower, upper, F)


def bounds_for_scenario(scenario: CpfScenario) -> BoundsResult:
    """Lower and upper bounds on the CPF error probability of ``scenario``."""
    F = scenario_fidelity(scenario)
    return bounds_from_fidelity(scenario.source, scenario.n_boxes, scenario.m_uses, F)
