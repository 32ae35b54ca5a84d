"""Small dense complex linear algebra for density matrices.

Density matrices and pure states are plain ``numpy`` arrays (complex128).
The helpers here validate them, build tensor products and evaluate the
Bures fidelity and trace distance.
"""

from __future__ import annotations

from functools import reduce

import numpy as np
import numpy.typing as npt

from .config import TOL, max_dim

ComplexArray = npt.NDArray[np.complex128]


def dag(m: npt.ArrayLike) -> ComplexArray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_square(m: np.ndarray) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1]


def is_hermitian(m: np.ndarray, tol: float = TOL.hermitian) -> bool:
    if not is_square(m):
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def check_dim(dim: int) -> None:
    """Raise if ``dim`` exceeds the configured dense-matrix cap."""
    limit = max_dim()
    if dim > limit:
        raise ValueError(f"dimension limit exceeded: {dim} > {limit} (set CPF_MAX_DIM)")


def as_density_matrix(m: npt.ArrayLike, *, check_psd: bool = True) -> ComplexArray:
    """Return ``m`` as a complex array after checking it is a valid state.

    Raises
    ------
    ValueError
        If ``m`` is not square, not Hermitian within 1e-12, has trace
        differing from one by more than 1e-10, or has an eigenvalue below
        -1e-10.
    """
    rho = np.asarray(m, dtype=np.complex128)
    if not is_square(rho):
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, TOL.hermitian):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TOL.trace:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    if check_psd:
        lo = np.linalg.eigvalsh(rho)[0]
        if lo < -TOL.psd:
            raise ValueError(f"density matrix is not PSD (min eigenvalue {lo:.3e})")
    return rho


def as_pure_state(v: npt.ArrayLike) -> ComplexArray:
    psi = np.asarray(v, dtype=np.complex128)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be a vector, got shape {psi.shape}")
    norm2 = np.vdot(psi, psi).real
    if abs(norm2 - 1.0) > TOL.pure_norm:
        raise ValueError(f"pure state has squared norm {norm2!r}, expected 1")
    return psi


def ket_to_dm(psi: npt.ArrayLike) -> ComplexArray:
    """Projector |psi><psi|."""
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def basis_dm(index: int, dim: int) -> ComplexArray:
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[index, index] = 1.0
    return rho


def tensor(*ops: npt.ArrayLike) -> ComplexArray:
    """Kronecker product of one or more square matrices.

    The result dimension is checked against the cap before anything is
    allocated.
    """
    if not ops:
        raise ValueError("tensor needs at least one operand")
    mats = [np.asarray(o, dtype=np.complex128) for o in ops]
    check_dim(int(np.prod([m.shape[0] for m in mats])))
    return reduce(np.kron, mats)


def _cleaned_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian PSD matrix with round-off negatives removed.

    Eigenvalues in [-1e-10, 0) are clipped to zero; eigenvalues below a
    relative floor of ``16 * dim * eps * max|w|`` are treated as exact zeros,
    since their square roots would otherwise leak ~1e-8 noise into the result.
    """
    if not is_square(m):
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if not is_hermitian(m, TOL.hermitian_input):
        raise ValueError("matrix is not Hermitian")
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    if w.size and w[0] < -TOL.psd:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    floor = 16 * m.shape[0] * np.finfo(float).eps * max(np.max(np.abs(w), initial=0.0), 1.0)
    w = np.where(w < floor, 0.0, w)
    return w, v


def sqrtm_psd(m: npt.ArrayLike) -> ComplexArray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    w, v = _cleaned_eigh(np.asarray(m, dtype=np.complex128))
    s = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def _clip_unit(x: float) -> float:
    if -TOL.fidelity_clip <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + TOL.fidelity_clip:
        return 1.0
    return x


def _check_pair(rho: np.ndarray, sigma: np.ndarray) -> None:
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")


def fidelity(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """Bures fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Computed from the eigenvalues of ``sqrt(rho) sigma sqrt(rho)``, with
    round-off negatives clipped before the square root.

    Examples
    --------
    >>> round(fidelity(np.diag([1.0, 0.0]), np.full((2, 2), 0.5)), 10)
    0.7071067812
    """
    rho = np.asarray(rho, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    _check_pair(rho, sigma)
    r = sqrtm_psd(rho)
    w, _ = _cleaned_eigh(r @ sigma @ r)
    return _clip_unit(float(np.sum(np.sqrt(w))))


def fidelity_trace_norm(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """Bures fidelity as the trace norm ``||sqrt(rho) sqrt(sigma)||_1``."""
    rho = np.asarray(rho, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    _check_pair(rho, sigma)
    a = sqrtm_psd(rho) @ sqrtm_psd(sigma)
    return _clip_unit(float(np.sum(np.linalg.svd(a, compute_uv=False))))


def trace_distance(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """Half the sum of absolute eigenvalues of ``rho - sigma``."""
    rho = np.asarray(rho, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    _check_pair(rho, sigma)
    d = rho - sigma
    w = np.linalg.eigvalsh(0.5 * (d + d.conj().T))
    return _clip_unit(0.5 * float(np.sum(np.abs(w))))
