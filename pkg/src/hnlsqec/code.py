"""Ancilla-free two-dimensional codes, their Knill-Laflamme check, and recovery.

All codes here are spanned by two tensor-power states ``|a>^N`` and ``|b>^N``
with ``<a|b> = 0``. Error operators are the lifted jump operators
``L_k^(n)``; the ``sqrt(dt)`` prefactor is left out since the recovery does
not depend on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .errors import CodeConstructionError, KLViolationError
from .hnls import PerpDecomposition
from .lindblad import LindbladModel

KL_TOL = 1e-8
GRAM_CUTOFF = 1e-10
MIN_PROBES = 3


@dataclass
class CodeSpace:
    N: int
    d: int
    logical0: np.ndarray
    logical1: np.ndarray
    Pi_C: np.ndarray
    Pi_E: np.ndarray

    @property
    def dim(self) -> int:
        return self.d ** self.N

    def logical_basis(self) -> np.ndarray:
        """``dim x 2`` isometry whose columns are the logical states."""
        return np.stack([self.logical0, self.logical1], axis=1)


@dataclass
class KLReport:
    lam: dict            # (n, j) -> lambda_j^(n)
    mu: dict             # (n, m, j, k) -> mu_jk^(nm)
    cond1_residual: float
    cond2_residual: float
    signal_ok: bool
    signal_gap: float
    signal_residual: float = 0.0

    def passed(self, tol: float = KL_TOL) -> bool:
        return self.cond1_residual <= tol and self.cond2_residual <= tol and self.signal_ok

    def to_json(self) -> dict:
        def c(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "cond1_residual": f"{self.cond1_residual:.2e}",
            "cond2_residual": f"{self.cond2_residual:.2e}",
            "signal_residual": f"{self.signal_residual:.2e}",
            "signal_ok": bool(self.signal_ok),
            "signal_gap": float(f"{self.signal_gap:.12g}"),
            "lambda": {f"{n},{j}": c(v) for (n, j), v in sorted(self.lam.items())},
            "mu": {f"{n},{m},{j},{k}": c(v) for (n, m, j, k), v in sorted(self.mu.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass
class RecoveryChannel:
    kraus: list
    source: str = ""
    labels: list = field(default_factory=list)

    def stacked(self) -> np.ndarray:
        return np.stack(self.kraus)

    def apply(self, rho) -> np.ndarray:
        R = self.stacked()
        return np.einsum("aij,jk,alk->il", R, rho, R.conj(), optimize=True)

    def completeness(self) -> np.ndarray:
        return sum(ops.dag(R) @ R for R in self.kraus)


@dataclass
class EffectiveModel:
    H_eff_logical: np.ndarray
    gap: float
    H_eff_full: np.ndarray


def _tensor_power_code(a, b, N: int, min_probes: int) -> CodeSpace:
    if N < min_probes:
        raise CodeConstructionError(f"code needs at least {min_probes} probes, got N={N}")
    a = ops.normalize(a)
    b = ops.normalize(b)
    if abs(np.vdot(a, b)) > 1e-12:
        raise CodeConstructionError("single-probe code states are not orthogonal")
    d = a.shape[0]
    ops.check_dim(d, N)
    l0 = ops.tensor_power(a, N)
    l1 = ops.tensor_power(b, N)
    Pi_C = np.outer(l0, l0.conj()) + np.outer(l1, l1.conj())
    Pi_E = np.eye(d ** N, dtype=complex) - Pi_C
    return CodeSpace(N, d, l0, l1, Pi_C, Pi_E)


def build_qubit_code(perp: PerpDecomposition, N: int, min_probes: int = MIN_PROBES,
                     tol: float = 1e-9) -> CodeSpace:
    """Repetition-type code on the extremal eigenvectors of the perpendicular Hamiltonian.

    Refused when ``||H_perp|| <= tol * ||H||``, i.e. when the Hamiltonian lies in
    the Lindblad span.
    """
    h_norm = ops.operator_norm(perp.H_par + perp.H_perp)
    if perp.perp_norm <= tol * h_norm or perp.psi_plus is None:
        raise CodeConstructionError("Hamiltonian lies in the Lindblad span; no signal survives")
    if perp.psi_plus.shape[0] != 2:
        raise CodeConstructionError("the spectral code is defined for qubit probes only")
    return _tensor_power_code(perp.psi_plus, perp.psi_minus, N, min_probes)


CIRCULAR_LEFT = np.array([1, 0, 1j]) / np.sqrt(2)
CIRCULAR_RIGHT = np.array([1, 0, -1j]) / np.sqrt(2)


def build_example_code(N: int, min_probes: int = MIN_PROBES) -> CodeSpace:
    """Three-level code with logical states ``|(1,0,i)/sqrt2>^N`` and ``|(1,0,-i)/sqrt2>^N``."""
    return _tensor_power_code(CIRCULAR_LEFT, CIRCULAR_RIGHT, N, min_probes)


def _error_operators(code: CodeSpace, model: LindbladModel) -> dict:
    if model.d != code.d:
        raise ValueError(f"model dimension {model.d} does not match code probe dimension {code.d}")
    return {(n, k): ops.lift(L, n, code.N)
            for n in range(1, code.N + 1)
            for k, L in enumerate(model.lindblads, start=1)}


def check_kl(code: CodeSpace, model: LindbladModel) -> KLReport:
    """Evaluate the code-space conditions for the lifted jump operators.

    Residuals are operator norms of ``P L P - lambda P`` and
    ``P L_j^dag L_k P - mu P`` maximized over all index combinations; the signal
    check asks whether ``P H_tot P`` is proportional to ``P``.
    """
    P = code.Pi_C
    errs = _error_operators(code, model)
    # work in the 2-dim logical frame: P A P = V (V^dag A V) V^dag
    V = code.logical_basis()
    lam, mu = {}, {}
    r1 = r2 = 0.0
    eye2 = np.eye(2)
    logical = {key: ops.dag(V) @ E @ V for key, E in errs.items()}
    for (n, j), Lv in logical.items():
        lam[(n, j)] = np.trace(Lv) / 2
        r1 = max(r1, ops.operator_norm(Lv - lam[(n, j)] * eye2))
    EV = {key: E @ V for key, E in errs.items()}
    for (n, j), Aj in EV.items():
        for (m, k), Ak in EV.items():
            M = ops.dag(Aj) @ Ak
            mu[(n, m, j, k)] = np.trace(M) / 2
            r2 = max(r2, ops.operator_norm(M - mu[(n, m, j, k)] * eye2))
    eff = effective_hamiltonian(code, model)
    Hl = eff.H_eff_logical
    sig_res = ops.operator_norm(Hl - np.trace(Hl) / 2 * eye2)
    h_scale = max(1.0, ops.operator_norm(model.H) * code.N)
    signal_ok = sig_res > KL_TOL * h_scale
    return KLReport(lam, mu, r1, r2, bool(signal_ok), eff.gap, sig_res)


def error_gram(code: CodeSpace, model: LindbladModel, report: KLReport | None = None):
    """Matrix ``mu_ab - conj(lambda_a) lambda_b`` over error labels ``a = (n, k)``."""
    report = report or check_kl(code, model)
    keys = sorted(_error_operators(code, model))
    G = np.array([[report.mu[(a[0], b[0], a[1], b[1])] - np.conj(report.lam[a]) * report.lam[b]
                   for b in keys] for a in keys], dtype=complex).reshape(len(keys), len(keys))
    return keys, G


def detected_errors(code: CodeSpace, model: LindbladModel, dt: float = 1.0) -> dict:
    """``E_k^(n) = Pi_E L_k^(n) Pi_C sqrt(dt)``."""
    s = np.sqrt(dt)
    return {key: code.Pi_E @ L @ code.Pi_C * s for key, L in _error_operators(code, model).items()}


def build_recovery(code: CodeSpace, model: LindbladModel, N: int | None = None,
                   tol: float = KL_TOL) -> RecoveryChannel:
    """Knill-Laflamme recovery for single jump errors.

    The error Gram matrix is diagonalized to get orthogonal error combinations
    ``F_c``; each one spans a syndrome subspace that is mapped back by
    ``P F_c^dag / sqrt(g_c)``. ``Pi_C`` handles the no-error syndrome and an
    identity on whatever is left completes the channel.
    """
    if N is not None and N != code.N:
        raise ValueError(f"N={N} does not match code with {code.N} probes")
    report = check_kl(code, model)
    if report.cond1_residual > tol or report.cond2_residual > tol:
        raise KLViolationError(
            f"code fails KL conditions (residuals {report.cond1_residual:.2e}, "
            f"{report.cond2_residual:.2e})")
    P = code.Pi_C
    kraus, labels = [P.copy()], ["no-error"]
    covered = P.copy()
    if model.R:
        keys, G = error_gram(code, model, report)
        G = (G + ops.dag(G)) / 2
        g, U = np.linalg.eigh(G)
        E = detected_errors(code, model)
        for c in range(len(g)):
            if g[c] <= GRAM_CUTOFF:
                continue
            F = sum(U[a, c] * E[key] for a, key in enumerate(keys))
            kraus.append(P @ ops.dag(F) / np.sqrt(g[c]))
            labels.append(f"syndrome-{c}")
            covered = covered + F @ P @ ops.dag(F) / g[c]
    rest = np.eye(code.dim, dtype=complex) - covered
    rest = (rest + ops.dag(rest)) / 2
    kraus.append(rest)
    labels.append("fail")
    return RecoveryChannel(kraus, f"{len(kraus) - 2} syndrome subspaces + no-error + fail", labels)


def effective_hamiltonian(code: CodeSpace, model: LindbladModel, N: int | None = None) -> EffectiveModel:
    """Total Hamiltonian compressed to the code space."""
    if N is not None and N != code.N:
        raise ValueError(f"N={N} does not match code with {code.N} probes")
    H_tot = ops.total_operator(model.H, code.N)
    V = code.logical_basis()
    Hl = ops.dag(V) @ H_tot @ V
    Hl = (Hl + ops.dag(Hl)) / 2
    w = np.linalg.eigvalsh(Hl)
    return EffectiveModel(Hl, float(w[-1] - w[0]), code.Pi_C @ H_tot @ code.Pi_C)
