"""Dense symmetric eigendecomposition with certified residuals, plus the
Gershgorin localization of the top eigenvalue pair.

Two backends sit behind the same contract: numpy's LAPACK path (fast, used by
default) and an mpmath high-precision path. The latter matters because the
gap between the two largest eigenvalues shrinks like (Q+m)^(1-d) and falls
below float64 resolution already for modest distances, at which point the
float eigenvectors mix the near-degenerate pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath as mp
import numpy as np

from .errors import NotApplicableError, NumericalError, UsageError
from .graph import VertexPair

RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-10
DEGENERATE_ENTRY_TOL = 1e-13


@dataclass(frozen=True)
class SpectralData:
    """Full orthonormal eigendecomposition, eigenvalues sorted descending.

    residual_norm bounds max_j ||H phi_j - lambda_j phi_j||_2; ortho_defect
    bounds max_ij |<phi_i, phi_j> - delta_ij|.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    residual_norm: float
    ortho_defect: float
    matrix: np.ndarray


@dataclass(frozen=True)
class TopPair:
    """(u, v) entries of the top two eigenvectors, sign-normalized so that
    mu1 > 0 and mu2 > 0."""

    lambda1: float
    lambda2: float
    mu1: float
    nu1: float
    mu2: float
    nu2: float
    gap: float
    degenerate_entry: bool = False


@dataclass(frozen=True)
class GershgorinSplit:
    applicable: bool
    reason: str
    n_top: int
    n_bulk: int
    top_interval: tuple
    bulk_interval: tuple
    margin: float


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-magnitude entry positive
    (first such index on ties)."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, j])))
        if out[idx, j] < 0:
            out[:, j] = -out[:, j]
    return out


def _certify(matrix: np.ndarray, evals: np.ndarray, vecs: np.ndarray, tol: float):
    resid = matrix @ vecs - vecs * evals[np.newaxis, :]
    residual_norm = float(np.max(np.linalg.norm(resid, axis=0))) if matrix.size else 0.0
    gram = vecs.T @ vecs - np.eye(len(evals))
    ortho_defect = float(np.max(np.abs(gram))) if matrix.size else 0.0
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if residual_norm > tol * scale:
        raise NumericalError(
            f"eigendecomposition residual {residual_norm:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    if ortho_defect > ORTHO_TOL:
        raise NumericalError(f"orthogonality defect {ortho_defect:.3e} exceeds {ORTHO_TOL:.1e}")
    return residual_norm, ortho_defect


def eigendecompose_symmetric(matrix, tol: float = RESIDUAL_TOL) -> SpectralData:
    """numpy backend; raises NumericalError if the residual/orthogonality
    contract cannot be certified at tolerance tol."""
    h = np.asarray(matrix, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(h - h.T))) > 1e-14 * scale:
        raise UsageError("matrix is not symmetric within 1e-14 relative")
    evals, vecs = np.linalg.eigh(h)
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    vecs = _fix_signs(vecs[:, order])
    residual_norm, ortho_defect = _certify(h, evals, vecs, tol)
    return SpectralData(
        eigenvalues=evals,
        eigenvectors=vecs,
        residual_norm=residual_norm,
        ortho_defect=ortho_defect,
        matrix=h,
    )


def eigendecompose_mp(matrix, dps: int = 60):
    """High-precision backend. Returns (eigenvalues, eigenvectors) as mpmath
    objects, eigenvalues sorted descending, columns orthonormal.

    Caller is responsible for staying inside mp.workdps(dps) when consuming
    the results at full precision.
    """
    h = np.asarray(matrix, dtype=float)
    n = h.shape[0]
    with mp.workdps(dps):
        a = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                a[i, j] = mp.mpf(float(h[i, j]))
        evals, vecs = mp.eigsy(a)
        order = sorted(range(n), key=lambda j: -evals[j])
        evals_sorted = [evals[j] for j in order]
        cols = mp.matrix(n, n)
        for new_j, j in enumerate(order):
            idx = max(range(n), key=lambda i: abs(vecs[i, j]))
            sign = 1 if vecs[idx, j] >= 0 else -1
            for i in range(n):
                cols[i, new_j] = sign * vecs[i, j]
    return evals_sorted, cols


def spectral_data_mp(matrix, dps: int = 60, tol: float = RESIDUAL_TOL) -> SpectralData:
    """SpectralData computed via the mpmath backend, cast to float64.

    Near-degenerate top pairs come out unmixed because the eigenproblem is
    solved at dps digits before rounding.
    """
    h = np.asarray(matrix, dtype=float)
    evals, cols = eigendecompose_mp(h, dps=dps)
    n = h.shape[0]
    evals_f = np.array([float(x) for x in evals])
    vecs_f = np.array([[float(cols[i, j]) for j in range(n)] for i in range(n)])
    residual_norm, ortho_defect = _certify(h, evals_f, vecs_f, tol)
    return SpectralData(
        eigenvalues=evals_f,
        eigenvectors=vecs_f,
        residual_norm=residual_norm,
        ortho_defect=ortho_defect,
        matrix=h,
    )


def spectral_data_auto(matrix, dps: int = 60, tol: float = RESIDUAL_TOL) -> SpectralData:
    """Float64 decomposition, upgraded to the mpmath backend when the top
    gap is too small for float64 to keep the pair unmixed."""
    spec = eigendecompose_symmetric(matrix, tol)
    if len(spec.eigenvalues) >= 2:
        gap = float(spec.eigenvalues[0] - spec.eigenvalues[1])
        scale = max(1.0, abs(float(spec.eigenvalues[0])))
        # float64 eigenvector mixing error grows like eps * ||H|| / gap
        if gap < 1e-5 * scale:
            return spectral_data_mp(matrix, dps=dps, tol=tol)
    return spec


def gershgorin_split(spec: SpectralData, Q: float, m: int) -> GershgorinSplit:
    """For Q > 2m: exactly two eigenvalues in [Q-m, Q+m], the rest in [-m, m].

    A violated split with Q > 2m indicates eigensolver failure, not a
    property of the instance, and raises NumericalError.
    """
    if Q <= 2 * m:
        return GershgorinSplit(
            applicable=False,
            reason=f"requires Q > 2m (Q={Q}, m={m}); the two intervals may overlap",
            n_top=0,
            n_bulk=0,
            top_interval=(Q - m, Q + m),
            bulk_interval=(-m, m),
            margin=0.0,
        )
    ev = spec.eigenvalues
    slack = 10 * max(spec.residual_norm, 1e-14)
    n_top = int(np.sum((ev >= Q - m - slack) & (ev <= Q + m + slack)))
    n_bulk = int(np.sum((ev >= -m - slack) & (ev <= m + slack)))
    if n_top != 2 or n_bulk != len(ev) - 2:
        raise NumericalError(
            f"Gershgorin split violated with Q={Q} > 2m={2*m}: "
            f"{n_top} eigenvalues near Q, {n_bulk} in the bulk (eigensolver failure)"
        )
    margin = float(min(ev[1] - m, Q - m - ev[2])) if len(ev) > 2 else float(ev[1] - m)
    return GershgorinSplit(
        applicable=True,
        reason="",
        n_top=n_top,
        n_bulk=n_bulk,
        top_interval=(Q - m, Q + m),
        bulk_interval=(-m, m),
        margin=margin,
    )


def top_pair(spec: SpectralData, pair: VertexPair) -> TopPair:
    """Extract mu1, nu1, mu2, nu2 and re-sign so mu1 > 0 and mu2 > 0."""
    if len(spec.eigenvalues) < 2:
        raise UsageError("need n >= 2 for a top eigenvalue pair")
    ev = spec.eigenvalues
    v1 = spec.eigenvectors[:, 0].copy()
    v2 = spec.eigenvectors[:, 1].copy()
    if v1[pair.u] < 0:
        v1 = -v1
    if v2[pair.u] < 0:
        v2 = -v2
    mu1, nu1 = float(v1[pair.u]), float(v1[pair.v])
    mu2, nu2 = float(v2[pair.u]), float(v2[pair.v])
    degenerate = min(abs(mu1), abs(mu2)) < DEGENERATE_ENTRY_TOL
    return TopPair(
        lambda1=float(ev[0]),
        lambda2=float(ev[1]),
        mu1=mu1,
        nu1=nu1,
        mu2=mu2,
        nu2=nu2,
        gap=float(ev[0] - ev[1]),
        degenerate_entry=degenerate,
    )


def gap_is_reliable(spec: SpectralData) -> bool:
    """True when lambda1 - lambda2 exceeds 10x the residual error bar."""
    gap = float(spec.eigenvalues[0] - spec.eigenvalues[1])
    return gap > 10 * max(spec.residual_norm, 1e-15)
