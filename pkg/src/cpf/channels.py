"""Kraus channels, the qubit amplitude damping channel and CPF wiring.

A :class:`KrausChannel` is a dense list of Kraus operators. Channels that act
independently on many subsystems are kept as a :class:`ProductChannel`, which
applies each local channel by tensor contraction; materializing all 2^N
product Kraus operators is only done on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np
import numpy.typing as npt

from .config import TOL
from .linalg import ComplexArray, check_dim, tensor

if TYPE_CHECKING:
    from .analytics import CpfScenario


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map ``rho -> sum K rho K^dag``."""

    ops: tuple[ComplexArray, ...]

    def __post_init__(self):
        if not self.ops:
            raise ValueError("a channel needs at least one Kraus operator")
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.ops)
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ValueError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
        completeness = sum(k.conj().T @ k for k in ops)
        err = np.max(np.abs(completeness - np.eye(d)))
        if err > TOL.completeness:
            raise ValueError(f"Kraus operators are not complete (max deviation {err:.3e})")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __call__(self, rho: npt.ArrayLike) -> ComplexArray:
        return apply(self, rho)


@dataclass(frozen=True)
class ProductChannel:
    """Independent local channels, one per subsystem, in subsystem order."""

    factors: tuple[KrausChannel, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def to_kraus(self) -> KrausChannel:
        """Materialize the product as a single dense Kraus set."""
        check_dim(self.dim)
        ops = [np.eye(1, dtype=np.complex128)]
        for f in self.factors:
            ops = [np.kron(a, k) for a in ops for k in f.ops]
        return KrausChannel(tuple(ops))

    def __call__(self, rho: npt.ArrayLike) -> ComplexArray:
        return apply(self, rho)


Channel = Union[KrausChannel, ProductChannel]


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=np.complex128),))


def adc(gamma: float, dim: int = 2) -> KrausChannel:
    """Qubit amplitude damping channel with damping rate ``gamma``.

    Kraus operators ``|0><0| + sqrt(1-gamma)|1><1|`` and ``sqrt(gamma)|0><1|``.
    A detector of efficiency eta is the same channel with ``gamma = 1 - eta``.
    """
    if dim != 2:
        raise ValueError(f"qubit ADC only (dim=2), got dim={dim}")
    gamma = check_rate(gamma)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1))


def check_rate(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping rate must lie in [0, 1], got {gamma}")
    return gamma


def _apply_local(rho: np.ndarray, ch: KrausChannel, site: int, dims: Sequence[int]) -> np.ndarray:
    n = len(dims)
    t = rho.reshape(tuple(dims) * 2)
    out = np.zeros_like(t)
    for k in ch.ops:
        # K acts on ket index `site`, K^* on bra index `n + site`
        x = np.tensordot(k, t, axes=([1], [site]))
        x = np.moveaxis(x, 0, site)
        x = np.tensordot(x, k.conj(), axes=([n + site], [1]))
        out += np.moveaxis(x, -1, n + site)
    return out.reshape(rho.shape)


def apply(ch: Channel, rho: npt.ArrayLike) -> ComplexArray:
    """Apply a channel to a density matrix."""
    check_dim(ch.dim)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"dimension mismatch: channel dim {ch.dim}, state shape {rho.shape}")
    if isinstance(ch, ProductChannel):
        out = rho
        for site, f in enumerate(ch.factors):
            if len(f.ops) == 1 and np.array_equal(f.ops[0], np.eye(f.dim)):
                continue
            out = _apply_local(out, f, site, ch.dims)
        return out
    return sum(k @ rho @ k.conj().T for k in ch.ops)


def compose(*channels: KrausChannel) -> KrausChannel:
    """Sequential composition; the first argument acts first."""
    ops = [np.eye(channels[0].dim, dtype=np.complex128)]
    for ch in channels:
        ops = [k @ a for a in ops for k in ch.ops]
    return KrausChannel(tuple(ops))


def tensor_channels(*channels: KrausChannel) -> KrausChannel:
    return ProductChannel(tuple(channels)).to_kraus()


def lift(ch: KrausChannel, position: int, total_subsystems: int, subsystem_dim: int = 2) -> KrausChannel:
    """Embed a local channel on subsystem ``position`` of a register.

    Every Kraus operator is tensored with identities on the remaining
    subsystems, so completeness carries over.
    """
    if not 0 <= position < total_subsystems:
        raise ValueError(f"position {position} out of range for {total_subsystems} subsystems")
    if ch.dim != subsystem_dim:
        raise ValueError(f"channel dim {ch.dim} does not match subsystem_dim {subsystem_dim}")
    check_dim(subsystem_dim**total_subsystems)
    left = np.eye(subsystem_dim**position)
    right = np.eye(subsystem_dim ** (total_subsystems - position - 1))
    return KrausChannel(tuple(tensor(left, k, right) for k in ch.ops))


def cpf_channel(scenario: CpfScenario, target_box: int) -> ProductChannel:
    """Global channel for one use of the box array with the target in ``target_box``.

    Register layout per source kind:

    * ``fock``, ``coherent``: one subsystem per box.
    * ``gen_bipartite``, ``biphoton_si``: ``2N`` qubits, box j owns the signal
      qubit ``2j`` and the untouched idler ``2j + 1``.
    * ``biphoton_if``: ``N`` qubits, consecutive boxes ``(2j, 2j + 1)`` are
      probed by the two modes of one Bell pair.
    * ``ghz``: ``N`` qubits, one per box.
    """
    from .sources import bosonic_loss

    n = scenario.n_boxes
    if not 0 <= target_box < n:
        raise ValueError(f"target_box {target_box} out of range for N={n}")
    kind = scenario.source.kind
    if kind == "biphoton_if" and n % 2:
        raise ValueError(f"even N required for the idler-free protocol, got N={n}")
    rates = [scenario.gamma1 if j == target_box else scenario.gamma0 for j in range(n)]

    if kind == "coherent":
        n_max = scenario.source.n_max
        return ProductChannel(tuple(bosonic_loss(g, n_max) for g in rates))
    if kind in ("gen_bipartite", "biphoton_si"):
        idler = identity_channel(2)
        return ProductChannel(tuple(f for g in rates for f in (adc(g), idler)))
    if kind in ("fock", "biphoton_if", "ghz"):
        return ProductChannel(tuple(adc(g) for g in rates))
    raise ValueError(f"unknown source kind {kind!r}")

