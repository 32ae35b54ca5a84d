"""Input states for every source family and their damped outputs.

Qubit encodings: ``|0>`` is vacuum and ``|1>`` one photon. Each biphoton
frequency mode is one such qubit, with qubit 0 the signal (or first probe)
and qubit 1 the idler (or second probe).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy.stats import poisson

from .channels import KrausChannel, check_rate
from .config import TOL
from .linalg import ComplexArray, as_pure_state, ket_to_dm

MAX_GHZ_PARTIES = 12


@dataclass(frozen=True)
class Coherent:
    n_bar: float = 1.0
    n_max: int = 30
    kind: ClassVar[str] = "coherent"

    def __post_init__(self):
        if self.n_bar < 0:
            raise ValueError(f"n_bar must be non-negative, got {self.n_bar}")
        if self.n_max < 8:
            raise ValueError(f"n_max must be at least 8, got {self.n_max}")


@dataclass(frozen=True)
class Fock:
    kind: ClassVar[str] = "fock"


@dataclass(frozen=True)
class Ghz:
    """N-qubit GHZ source; the number of parties is the scenario's box count."""

    kind: ClassVar[str] = "ghz"


@dataclass(frozen=True)
class GenBipartite:
    a: float = 0.5
    kind: ClassVar[str] = "gen_bipartite"

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"a must lie in [0, 1], got {self.a}")


@dataclass(frozen=True)
class BiphotonSI:
    kind: ClassVar[str] = "biphoton_si"


@dataclass(frozen=True)
class BiphotonIF:
    kind: ClassVar[str] = "biphoton_if"


SourceKind = Union[Coherent, Fock, Ghz, GenBipartite, BiphotonSI, BiphotonIF]

SOURCES: dict[str, type] = {
    cls.kind: cls for cls in (Coherent, Fock, Ghz, GenBipartite, BiphotonSI, BiphotonIF)
}


def make_source(name: str, **params) -> SourceKind:
    """Build a source from its kind name, e.g. ``make_source("gen_bipartite", a=0.3)``."""
    try:
        cls = SOURCES[name]
    except KeyError:
        raise ValueError(f"unknown source {name!r}; choose from {sorted(SOURCES)}") from None
    return cls(**params)


def coherent_tail(n_bar: float, n_max: int) -> float:
    """Poisson probability mass above ``n_max`` photons."""
    return float(poisson.sf(n_max, n_bar)) if n_bar > 0 else 0.0


def coherent_state(n_bar: float, n_max: int = 30) -> ComplexArray:
    """Real-amplitude coherent state truncated to ``n_max`` photons and renormalized."""
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    if coherent_tail(n_bar, n_max) > TOL.coherent_tail:
        raise ValueError(
            f"increase truncation: n_max={n_max} leaves tail above {TOL.coherent_tail} for n_bar={n_bar}"
        )
    n = np.arange(n_max + 1)
    if n_bar == 0:
        amps = (n == 0).astype(float)
    else:
        log_amp = -n_bar / 2 + n * 0.5 * math.log(n_bar) - 0.5 * np.array([math.lgamma(k + 1) for k in n])
        amps = np.exp(log_amp)
    amps = amps / np.linalg.norm(amps)
    return amps.astype(np.complex128)


def fock_one() -> ComplexArray:
    return np.array([0.0, 1.0], dtype=np.complex128)


def ghz_state(n_parties: int) -> ComplexArray:
    if not 2 <= n_parties <= MAX_GHZ_PARTIES:
        raise ValueError(f"GHZ needs 2 <= n_parties <= {MAX_GHZ_PARTIES}, got {n_parties}")
    psi = np.zeros(2**n_parties, dtype=np.complex128)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return psi


def gen_bipartite(a: float) -> ComplexArray:
    """Two-qubit pure state ``sqrt(a)|00> + sqrt(1-a)|11>`` as a density matrix."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = a
    rho[0, 3] = rho[3, 0] = np.sqrt(a * (1 - a))
    rho[3, 3] = 1 - a
    return rho


def biphoton_bell() -> ComplexArray:
    return as_pure_state(np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2))


def bosonic_loss(gamma: float, n_max: int) -> KrausChannel:
    """Pure-loss channel on the Fock space truncated at ``n_max`` photons.

    ``K_k = sum_n sqrt(C(n, k) (1-gamma)^(n-k) gamma^k) |n-k><n|``; loss never
    raises the photon number, so the truncated set is exactly complete.
    """
    gamma = check_rate(gamma)
    d = n_max + 1
    ops = []
    for k in range(d):
        K = np.zeros((d, d), dtype=np.complex128)
        for n in range(k, d):
            K[n - k, n] = math.sqrt(math.comb(n, k) * (1 - gamma) ** (n - k) * gamma**k)
        ops.append(K)
    return KrausChannel(tuple(ops))


def box_input(source: SourceKind, n_boxes: int) -> ComplexArray:
    """Density matrix fed to the whole register of one protocol use.

    Sources that factorize over boxes return the full tensor power, so the
    result always matches :func:`cpf.channels.cpf_channel`.
    """
    from .linalg import check_dim, tensor

    if isinstance(source, Ghz):
        check_dim(2**n_boxes)
        return ket_to_dm(ghz_state(n_boxes))
    unit = unit_input(source)
    reps = n_boxes // 2 if isinstance(source, BiphotonIF) else n_boxes
    return tensor(*([unit] * reps))


def unit_input(source: SourceKind) -> ComplexArray:
    """Input state of the smallest repeated unit: one box, or one box pair for idler-free."""
    if isinstance(source, Coherent):
        return ket_to_dm(coherent_state(source.n_bar, source.n_max))
    if isinstance(source, Fock):
        return ket_to_dm(fock_one())
    if isinstance(source, GenBipartite):
        return gen_bipartite(source.a)
    if isinstance(source, (BiphotonSI, BiphotonIF)):
        return ket_to_dm(biphoton_bell())
    raise ValueError(f"{source.kind} has no per-box unit state")


def fock_output(gamma: float) -> ComplexArray:
    """Damped single photon: ``gamma|0><0| + (1-gamma)|1><1|``."""
    gamma = check_rate(gamma)
    return np.diag([gamma, 1 - gamma]).astype(np.complex128)


def gen_bipartite_output(a: float, gamma: float) -> ComplexArray:
    """Output of :func:`gen_bipartite` after damping the signal qubit only."""
    gamma = check_rate(gamma)
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = a
    rho[1, 1] = (1 - a) * gamma
    rho[0, 3] = rho[3, 0] = np.sqrt(a * (1 - a) * (1 - gamma))
    rho[3, 3] = (1 - a) * (1 - gamma)
    return rho


def ghz_output(rates) -> ComplexArray:
    """Exact output of the GHZ projector after per-qubit damping ``rates``.

    Half the weight sits on ``|0...0>``, half on the damped ``|1...1>``
    (a product of ``diag(g, 1-g)``), and the only coherence is
    ``prod(sqrt(1-g))/2`` between ``|0...0>`` and ``|1...1>``.
    """
    rates = [check_rate(g) for g in rates]
    diag = np.array([1.0])
    for g in rates:
        diag = np.kron(diag, [g, 1 - g])
    rho = np.diag(0.5 * diag).astype(np.complex128)
    rho[0, 0] += 0.5
    c = 0.5 * np.prod(np.sqrt(1 - np.array(rates)))
    rho[0, -1] = rho[-1, 0] = c
    return rho
