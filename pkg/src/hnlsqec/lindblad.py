"""Lindblad probe model and its dynamics.

Superoperators use column stacking: ``vec(rho)[i + d*j] = rho[i, j]``, so that
``vec(A X B) = (B^T kron A) vec(X)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from . import operators as ops
from .errors import NumericalError


@dataclass(frozen=True)
class LindbladModel:
    """Single-probe generator ``-i w [H, .] + sum_k D[L_k]``.

    The noise rates live in the normalization of the jump operators; ``omega``
    is supplied separately and multiplies only the Hamiltonian.
    """

    H: np.ndarray
    lindblads: tuple = ()
    label: str = ""

    def __post_init__(self):
        H = ops.as_operator(self.H)
        if not ops.is_hermitian(H):
            raise ValueError("Hamiltonian must be Hermitian")
        Ls = tuple(ops.as_operator(L) for L in self.lindblads)
        for L in Ls:
            if L.shape != H.shape:
                raise ValueError(
                    f"Lindblad operator of shape {L.shape} does not match H {H.shape}")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "lindblads", Ls)

    @property
    def d(self) -> int:
        return self.H.shape[0]

    @property
    def R(self) -> int:
        return len(self.lindblads)

    def scaled_noise(self, factor: float) -> "LindbladModel":
        """Same model with every jump-operator *rate* multiplied by ``factor``."""
        s = np.sqrt(factor)
        return LindbladModel(self.H, tuple(s * L for L in self.lindblads), self.label)

    def noiseless(self) -> "LindbladModel":
        return LindbladModel(self.H, (), self.label)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "H": ops.operator_to_json(self.H),
            "lindblads": [ops.operator_to_json(L) for L in self.lindblads],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LindbladModel":
        for key in ("d", "H"):
            if key not in obj:
                raise ValueError(f"model JSON missing field '{key}'")
        H = ops.operator_from_json(obj["H"])
        if H.shape[0] != int(obj["d"]):
            raise ValueError(f"model field 'd'={obj['d']} but H has dimension {H.shape[0]}")
        Ls = []
        for i, Lj in enumerate(obj.get("lindblads", [])):
            try:
                Ls.append(ops.operator_from_json(Lj))
            except ValueError as exc:
                raise ValueError(f"lindblads[{i}]: {exc}") from None
        return cls(H, tuple(Ls), obj.get("label", ""))


def lift_model(model: LindbladModel, N: int, cap: int | None = None) -> LindbladModel:
    """The N-probe model: total Hamiltonian and every jump operator on every probe."""
    H_tot = ops.total_operator(model.H, N, cap)
    Ls = tuple(ops.lift(L, n, N, cap) for n in range(1, N + 1) for L in model.lindblads)
    return LindbladModel(H_tot, Ls, f"{model.label} x{N}")


def check_density(rho, tol: float = 1e-10, pos_tol: float = 1e-9) -> np.ndarray:
    rho = ops.as_operator(rho)
    if not np.allclose(rho, ops.dag(rho), atol=tol, rtol=0):
        raise NumericalError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise NumericalError(f"density matrix trace {tr.real:.12g} != 1")
    lo = np.linalg.eigvalsh((rho + ops.dag(rho)) / 2)[0]
    if lo < -pos_tol:
        raise NumericalError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def liouvillian(model: LindbladModel, omega: float) -> np.ndarray:
    """Column-stacked matrix of the master-equation generator (``d^2 x d^2``)."""
    d = model.d
    eye = ops.identity(d)
    H = model.H
    Lv = -1j * omega * (np.kron(eye, H) - np.kron(H.T, eye))
    for L in model.lindblads:
        LdL = ops.dag(L) @ L
        Lv += np.kron(L.conj(), L) - 0.5 * np.kron(eye, LdL) - 0.5 * np.kron(LdL.T, eye)
    return Lv


def channel(model: LindbladModel, omega: float, t: float) -> np.ndarray:
    """Exact single-probe channel ``exp(t * liouvillian)`` as a superoperator."""
    if t < 0:
        raise ValueError("evolution time must be nonnegative")
    return la.expm(t * liouvillian(model, omega))


def apply_superop(S: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(S @ vec(rho), rho.shape[0])


def _num_probes(d: int, dim: int) -> int:
    N = int(round(np.log(dim) / np.log(d))) if d > 1 else 1
    if d ** N != dim:
        raise ValueError(f"state dimension {dim} is not a power of probe dimension {d}")
    return N


def apply_product_channel(per_probe_channel, rho_tot, N: int) -> np.ndarray:
    """Apply a single-probe superoperator to every tensor factor of ``rho_tot``.

    Equivalent to the N-fold tensor power of the channel but never builds the
    ``d^(2N)``-sized superoperator; each factor is contracted in turn.
    """
    S = np.asarray(per_probe_channel, dtype=complex)
    rho = np.asarray(rho_tot, dtype=complex)
    d = int(round(np.sqrt(S.shape[0])))
    if S.shape != (d * d, d * d):
        raise ValueError(f"superoperator shape {S.shape} is not (d^2, d^2)")
    if rho.shape != (d ** N, d ** N):
        raise ValueError(f"state shape {rho.shape} does not match {N} probes of dimension {d}")
    # column stacking: S[i' + d j', i + d j] -> S4[j', i', j, i]
    S4 = S.reshape(d, d, d, d)
    T = rho.reshape((d,) * (2 * N))
    for n in range(N):
        # contract (j, i) of S4 with (col n, row n) of T; new axes land in front
        T = np.tensordot(S4, T, axes=([2, 3], [N + n, n]))
        # T axes now: j', i', then the remaining 2N - 2 axes in original order
        rest = list(range(2, 2 * N))
        rows = rest[:N - 1]
        cols = rest[N - 1:]
        order = rows[:n] + [1] + rows[n:] + cols[:n] + [0] + cols[n:]
        T = T.transpose(order)
    return T.reshape(d ** N, d ** N)


def evolve_exact(model: LindbladModel, omega: float, rho, t: float) -> np.ndarray:
    """Integrate the master equation exactly for time ``t``.

    ``rho`` may describe one probe or ``N`` independent probes (dimension
    ``d^N``); in the latter case the channel is applied factor by factor.
    """
    rho = ops.as_operator(rho)
    if t < 0:
        raise ValueError("evolution time must be nonnegative")
    N = _num_probes(model.d, rho.shape[0])
    S = channel(model, omega, t)
    out = apply_product_channel(S, rho, N) if N > 1 else apply_superop(S, rho)
    return check_density(out)


@dataclass
class KrausSet:
    """First-order Kraus decomposition of one time slice of N probes."""

    K0: np.ndarray
    Kerr: dict = field(default_factory=dict)  # (n, k) -> operator, 1-based n and k
    dt: float = 0.0

    def operators(self) -> list:
        return [self.K0] + [self.Kerr[key] for key in sorted(self.Kerr)]

    def completeness_defect(self) -> float:
        """``|| sum_a K_a^dag K_a - 1 ||``; of order ``dt^2``."""
        total = sum(ops.dag(K) @ K for K in self.operators())
        return ops.operator_norm(total - np.eye(total.shape[0]))

    def apply(self, rho) -> np.ndarray:
        Ks = np.stack(self.operators())
        return np.einsum("aij,jk,alk->il", Ks, rho, Ks.conj(), optimize=True)


def kraus_first_order(model: LindbladModel, omega: float, N: int, dt: float,
                      cap: int | None = None) -> KrausSet:
    """Kraus set ``K0 = 1 - (i w H_tot + 1/2 sum L^dag L) dt``, ``K_(n,k) = L_k^(n) sqrt(dt)``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    dim = ops.check_dim(model.d, N, cap)
    H_tot = ops.total_operator(model.H, N, cap)
    drift = 1j * omega * H_tot
    Kerr = {}
    for n in range(1, N + 1):
        for k, L in enumerate(model.lindblads, start=1):
            Ln = ops.lift(L, n, N, cap)
            drift = drift + 0.5 * ops.dag(Ln) @ Ln
            Kerr[(n, k)] = Ln * np.sqrt(dt)
    K0 = np.eye(dim, dtype=complex) - drift * dt
    return KrausSet(K0, Kerr, dt)
