"""Dense complex operator algebra on finite-dimensional Hilbert spaces.

Operators are plain square ``numpy`` arrays of dtype ``complex128``; state
vectors are 1-D arrays. Multi-probe spaces use lexicographic tensor ordering,
probe 1 being the most significant factor (``np.kron`` order).
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from .errors import DimensionCapError

DEFAULT_DIM_CAP = 4096
DIM_CAP_ENV = "HNLSQEC_DIM_CAP"

HERMITIAN_RTOL = 1e-12


def dim_cap(override: int | None = None) -> int:
    """Largest allowed N-probe Hilbert-space dimension.

    ``override`` wins, then the ``HNLSQEC_DIM_CAP`` environment variable, then
    the built-in default of 4096.
    """
    if override is not None:
        return int(override)
    env = os.environ.get(DIM_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_DIM_CAP


def check_dim(d: int, N: int, cap: int | None = None) -> int:
    total = d ** N
    limit = dim_cap(cap)
    if total > limit:
        raise DimensionCapError(
            f"{N} probes of dimension {d} give dimension {total} > cap {limit}")
    return total


def as_operator(A) -> np.ndarray:
    """Validate and convert ``A`` to a square, finite complex matrix."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"operator must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("operator has non-finite entries")
    return A


def as_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError(f"state vector not normalized (norm {nrm:.3e})")
    return psi


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return psi / np.linalg.norm(psi)


def dag(A: np.ndarray) -> np.ndarray:
    return A.conj().T


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def is_hermitian(A: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    A = np.asarray(A)
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    return float(np.max(np.abs(A - dag(A)), initial=0.0)) <= rtol * scale


def hermitian_part(A) -> np.ndarray:
    """Return ``(A + A^dag) / 2``."""
    A = as_operator(A)
    return (A + dag(A)) / 2


def anti_hermitian_part(A) -> np.ndarray:
    """Return ``(A - A^dag) / 2i``, which is itself Hermitian.

    ``hermitian_part(A) + 1j * anti_hermitian_part(A)`` reconstructs ``A``.
    """
    A = as_operator(A)
    return (A - dag(A)) / 2j


def hs_inner(A, B) -> float:
    """Real Hilbert-Schmidt inner product ``Re tr(A^dag B)``."""
    A = as_operator(A)
    B = as_operator(B)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return float(np.real(np.vdot(A, B)))


def operator_norm(A) -> float:
    """Largest singular value."""
    A = as_operator(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def eig_hermitian(A, rtol: float = 1e-10):
    """Eigendecomposition of a Hermitian operator.

    Returns ascending real eigenvalues and the matching orthonormal eigenvectors
    as a list of 1-D arrays. Vectors inside a degenerate cluster are an
    arbitrary orthonormal basis of that cluster.
    """
    A = as_operator(A)
    if not is_hermitian(A, rtol):
        raise ValueError("eig_hermitian needs a Hermitian operator")
    w, V = np.linalg.eigh((A + dag(A)) / 2)
    return w, [V[:, i].copy() for i in range(V.shape[1])]


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex) if np.ndim(ops[0]) == 2 else np.ones(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def tensor_power(psi, N: int) -> np.ndarray:
    """``psi`` tensored with itself ``N`` times (state vectors or operators)."""
    return kron_all([np.asarray(psi, dtype=complex)] * N)


def lift(A, n: int, N: int, cap: int | None = None) -> np.ndarray:
    """Embed a single-probe operator on probe ``n`` (1-based) of ``N``."""
    A = as_operator(A)
    if not 1 <= n <= N:
        raise ValueError(f"probe index {n} outside 1..{N}")
    d = A.shape[0]
    check_dim(d, N, cap)
    left = identity(d ** (n - 1))
    right = identity(d ** (N - n))
    return np.kron(np.kron(left, A), right)


def total_operator(A, N: int, cap: int | None = None) -> np.ndarray:
    """Sum of ``A`` lifted onto every probe."""
    return sum(lift(A, n, N, cap) for n in range(1, N + 1))


def trace_distance(rho, sigma) -> float:
    diff = np.asarray(rho) - np.asarray(sigma)
    diff = (diff + dag(diff)) / 2
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def pure_fidelity(psi, rho) -> float:
    """``<psi| rho |psi>`` for a pure reference state."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(np.vdot(psi, rho @ psi)))


# --- JSON round trip ------------------------------------------------------

def operator_to_json(A) -> dict:
    A = as_operator(A)
    return {"dim": int(A.shape[0]), "re": A.real.tolist(), "im": A.imag.tolist()}


def operator_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except KeyError as exc:
        raise ValueError(f"operator JSON missing field {exc}") from None
    if re.shape != im.shape:
        raise ValueError(f"operator JSON 're' shape {re.shape} differs from 'im' shape {im.shape}")
    A = as_operator(re + 1j * im)
    if A.shape != (dim, dim):
        raise ValueError(f"operator JSON declares dim {dim} but has shape {A.shape}")
    return A
