"""Lindblad span, perpendicular Hamiltonian component, and noise classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .lindblad import LindbladModel

RANK_TOL = 1e-9


@dataclass
class LindbladSpan:
    generators: list
    orthobasis: list
    labels: list

    @property
    def rank(self) -> int:
        return len(self.orthobasis)

    def project(self, A: np.ndarray) -> np.ndarray:
        A = ops.as_operator(A)
        out = np.zeros_like(A)
        for b in self.orthobasis:
            out += ops.hs_inner(b, A) * b
        return out


@dataclass
class PerpDecomposition:
    H_par: np.ndarray
    H_perp: np.ndarray
    perp_norm: float
    psi_plus: np.ndarray | None = None
    psi_minus: np.ndarray | None = None


@dataclass
class HnlsVerdict:
    holds: bool
    perp_norm: float
    rank: int


def span_generators(model: LindbladModel):
    """Identity, Hermitian and anti-Hermitian parts of each ``L_j`` and of each
    ordered product ``L_j^dag L_k``. Returns ``(generators, labels)``."""
    gens = [ops.identity(model.d)]
    labels = ["1"]
    for j, L in enumerate(model.lindblads, start=1):
        gens += [ops.hermitian_part(L), ops.anti_hermitian_part(L)]
        labels += [f"L{j}^H", f"L{j}^AH"]
    for j, Lj in enumerate(model.lindblads, start=1):
        for k, Lk in enumerate(model.lindblads, start=1):
            P = ops.dag(Lj) @ Lk
            gens += [ops.hermitian_part(P), ops.anti_hermitian_part(P)]
            labels += [f"(L{j}^dag L{k})^H", f"(L{j}^dag L{k})^AH"]
    return gens, labels


def _gram_schmidt(gens, rtol: float = RANK_TOL):
    scale = max((np.sqrt(ops.hs_inner(g, g)) for g in gens), default=1.0)
    basis = []
    for g in gens:
        v = g.copy()
        # two passes of classical Gram-Schmidt
        for _ in range(2):
            for b in basis:
                v = v - ops.hs_inner(b, v) * b
        nrm = np.sqrt(max(ops.hs_inner(v, v), 0.0))
        if nrm > rtol * scale:
            v = v / nrm
            basis.append((v + ops.dag(v)) / 2)
    return basis


def build_span(model: LindbladModel) -> LindbladSpan:
    gens, labels = span_generators(model)
    return LindbladSpan(gens, _gram_schmidt(gens), labels)


def decompose(H, span: LindbladSpan) -> PerpDecomposition:
    """Split ``H`` into its projection onto the span and the orthogonal remainder."""
    H = ops.as_operator(H)
    H_par = span.project(H)
    H_perp = H - H_par
    H_perp = (H_perp + ops.dag(H_perp)) / 2
    perp_norm = ops.operator_norm(H_perp)
    psi_plus = psi_minus = None
    if perp_norm > 0:
        _, vecs = ops.eig_hermitian(H_perp)
        psi_minus, psi_plus = vecs[0], vecs[-1]
    return PerpDecomposition(H_par, H_perp, perp_norm, psi_plus, psi_minus)


def hnls_verdict(model: LindbladModel, tol: float = 1e-9) -> HnlsVerdict:
    """Whether the Hamiltonian sticks out of the Lindblad span.

    ``holds`` iff ``||H_perp|| > tol * ||H||``. A zero Hamiltonian never holds.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    span = build_span(model)
    h_norm = ops.operator_norm(model.H)
    if h_norm == 0:
        return HnlsVerdict(False, 0.0, span.rank)
    perp = decompose(model.H, span)
    return HnlsVerdict(perp.perp_norm > tol * h_norm, perp.perp_norm, span.rank)


def is_commuting(model: LindbladModel, tol: float = 1e-9) -> bool:
    """True iff ``H`` and all ``L_j`` mutually commute (relative to operand norms)."""
    mats = [model.H, *model.lindblads]
    norms = [ops.operator_norm(A) for A in mats]
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            c = ops.operator_norm(ops.commutator(mats[a], mats[b]))
            if c > tol * norms[a] * norms[b]:
                return False
    return True
