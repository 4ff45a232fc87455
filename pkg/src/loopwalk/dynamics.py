"""Hamiltonian construction and transfer dynamics: p(t), the readout time
t0 = pi / (lambda1 - lambda2), and the fidelity search.

sup_t p(t) is only ever reported as a certified lower bound (coarse grid +
golden-section refinement); the grid resolution travels with the report.
Readout-time evaluation switches to mpmath when t0 * (eigenvalue error)
would corrupt the phases, which happens as soon as the gap gets small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath as mp
import numpy as np

from .errors import NumericalError, UsageError, WorkCapExceededError
from .graph import Graph, VertexPair, max_degree
from .spectral import (
    SpectralData,
    eigendecompose_mp,
    eigendecompose_symmetric,
    gap_is_reliable,
    spectral_data_mp,
    top_pair,
    TopPair,
)

GOLDEN_REL_TOL = 1e-10
ORACLE_MAX_N = 64
ORACLE_MAX_HT = 1e4
DEFAULT_MAX_COARSE_SAMPLES = 5_000_000
_SCAN_CHUNK = 200_000


@dataclass(frozen=True)
class Hamiltonian:
    """Adjacency plus loop weight Q on the diagonal at u and v."""

    matrix: np.ndarray
    Q: float
    pair: VertexPair


@dataclass(frozen=True)
class TransferReport:
    t0: float
    p_t0: float
    gap: float
    t_star: float
    p_star: float
    grid_resolution: float
    gap_reliable: bool = True


@dataclass(frozen=True)
class PropagatorResult:
    matrix: np.ndarray  # complex U(t)
    unitarity_defect: float
    remainder_bound: float


def build_hamiltonian(g: Graph, pair: VertexPair, Q: float) -> Hamiltonian:
    if not math.isfinite(Q):
        raise UsageError(f"loop weight Q must be finite, got {Q}")
    h = np.zeros((g.n, g.n))
    for a, b in g.edges:
        h[a, b] = 1.0
        h[b, a] = 1.0
    h[pair.u, pair.u] = Q
    h[pair.v, pair.v] = Q
    return Hamiltonian(matrix=h, Q=Q, pair=pair)


def amplitude(spec: SpectralData, pair: VertexPair, t: float) -> complex:
    """U(t)_{u,v} = sum_j phi_j(u) phi_j(v) e^{i t lambda_j}."""
    if t < 0:
        raise UsageError("t must be >= 0")
    w = spec.eigenvectors[pair.u, :] * spec.eigenvectors[pair.v, :]
    return complex(np.sum(w * np.exp(1j * t * spec.eigenvalues)))


def transfer_strength(spec: SpectralData, pair: VertexPair, t: float) -> float:
    p = abs(amplitude(spec, pair, t)) ** 2
    if p > 1.0 + 1e-8:
        raise NumericalError(f"p(t) = {p} exceeds 1 beyond numerical slack")
    return min(max(p, 0.0), 1.0)


def readout_time(tp: TopPair, gap_error: float = 0.0) -> float:
    """t0 = pi / (lambda1 - lambda2); refuses when the gap is not resolved
    beyond 10x its error bar."""
    if tp.gap <= 10 * max(gap_error, 0.0) or tp.gap <= 0:
        raise NumericalError(
            f"gap {tp.gap:.3e} not reliable against error bar {gap_error:.3e}; "
            "use the high-precision readout path or treat the output as UNRELIABLE"
        )
    return math.pi / tp.gap


def _weights(spec: SpectralData, pair: VertexPair) -> np.ndarray:
    return spec.eigenvectors[pair.u, :] * spec.eigenvectors[pair.v, :]


def _p_on_grid(evals: np.ndarray, w: np.ndarray, ts: np.ndarray) -> np.ndarray:
    amp = np.exp(1j * np.outer(ts, evals)) @ w.astype(complex)
    return np.minimum(np.abs(amp) ** 2, 1.0)


def _golden_refine(f: Callable[[float], float], a: float, b: float,
                   rel_tol: float = GOLDEN_REL_TOL) -> tuple:
    """Golden-section maximization of f on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    tol = rel_tol * max(abs(a), abs(b), 1.0)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def fidelity_search(spec: SpectralData, pair: VertexPair, t_max: float,
                    max_coarse_samples: int = DEFAULT_MAX_COARSE_SAMPLES) -> TransferReport:
    """Coarse scan of p(t) on [0, t_max] at a quarter-period of the fastest
    oscillation, then golden-section refinement around the best sample.

    The readout time t0 is always evaluated and included as a candidate, so
    p_star >= p_t0 by construction. When the requested grid would exceed
    max_coarse_samples the step is widened (p_star stays a valid lower bound).
    """
    if not math.isfinite(t_max) or t_max <= 0:
        raise UsageError(f"t_max must be positive and finite, got {t_max}")
    evals = spec.eigenvalues
    w = _weights(spec, pair)
    spread = float(evals[0] - evals[-1])
    step = math.pi / (4.0 * spread) if spread > 0 else t_max / 64.0
    n_samples = int(t_max / step) + 1
    if n_samples > max_coarse_samples:
        step = t_max / max_coarse_samples
        n_samples = max_coarse_samples + 1

    reliable = gap_is_reliable(spec)
    gap = float(evals[0] - evals[1]) if len(evals) > 1 else 0.0
    if reliable and len(evals) > 1:
        t0 = math.pi / gap
        p_t0 = float(_p_on_grid(evals, w, np.array([t0]))[0])
    else:
        t0 = math.inf
        p_t0 = 0.0

    best_t, best_p = 0.0, 0.0
    start = 0
    while start < n_samples:
        stop = min(start + _SCAN_CHUNK, n_samples)
        ts = step * np.arange(start, stop)
        ps = _p_on_grid(evals, w, ts)
        j = int(np.argmax(ps))
        if ps[j] > best_p:
            best_p = float(ps[j])
            best_t = float(ts[j])
        start = stop

    def f(t: float) -> float:
        return float(_p_on_grid(evals, w, np.array([t]))[0])

    t_ref, p_ref = _golden_refine(f, max(best_t - step, 0.0), best_t + step)
    t_star, p_star = (t_ref, p_ref) if p_ref >= best_p else (best_t, best_p)
    if p_t0 > p_star:
        t_star, p_star = t0, p_t0
    return TransferReport(
        t0=t0,
        p_t0=p_t0,
        gap=gap,
        t_star=t_star,
        p_star=p_star,
        grid_resolution=step,
        gap_reliable=reliable,
    )


def propagator_oracle(h: Hamiltonian, t: float, tol: float = 1e-12) -> PropagatorResult:
    """e^{itH} by scaling-and-squaring on the complex Taylor series, with a
    rigorous remainder bound. Exists as an independent cross-check for the
    spectral path, not as a production route."""
    n = h.matrix.shape[0]
    if n > ORACLE_MAX_N:
        raise WorkCapExceededError(f"oracle capped at n <= {ORACLE_MAX_N}, got {n}")
    norm = float(np.linalg.norm(h.matrix, 2))
    if norm * abs(t) > ORACLE_MAX_HT:
        raise WorkCapExceededError(
            f"||H||*t = {norm * abs(t):.3e} exceeds oracle work cap {ORACLE_MAX_HT:.0e}"
        )
    s = max(0, math.ceil(math.log2(max(norm * abs(t), 1e-300))) + 1)
    a = (1j * t / 2 ** s) * h.matrix.astype(complex)
    theta = norm * abs(t) / 2 ** s  # ||a|| <= theta <= 1/2
    term = np.eye(n, dtype=complex)
    total = np.eye(n, dtype=complex)
    fact = 1.0
    remainder = math.inf
    j = 0
    # remainder after j terms: theta^(j+1)/(j+1)! * 1/(1 - theta/(j+2))
    while remainder > tol / (2 ** s * 4.0):
        j += 1
        term = term @ a / j
        fact *= j
        total += term
        remainder = theta ** (j + 1) / (fact * (j + 1)) / max(1.0 - theta / (j + 2), 0.5)
        if j > 60:
            break
    # squaring; error amplification folded into the tol split above
    u = total
    for _ in range(s):
        u = u @ u
    defect = float(np.linalg.norm(u @ u.conj().T - np.eye(n), 2))
    return PropagatorResult(matrix=u, unitarity_defect=defect, remainder_bound=remainder * 2 ** s)


# ---------------------------------------------------------------------------
# High-precision readout path


def readout_mp(h: Hamiltonian, dps: int = 80):
    """(gap, t0, p_t0) computed end to end in mpmath.

    Needed whenever t0 * (float eigenvalue error) is not small: the phases
    t0 * lambda_j are astronomically large while p(t0) depends on them mod
    2*pi."""
    u, v = h.pair.u, h.pair.v
    with mp.workdps(dps):
        evals, cols = eigendecompose_mp(h.matrix, dps=dps)
        gap = evals[0] - evals[1]
        if gap <= 0:
            raise NumericalError("degenerate top pair: gap <= 0 at working precision")
        t0 = mp.pi / gap
        amp = mp.mpc(0)
        for j in range(len(evals)):
            amp += cols[u, j] * cols[v, j] * mp.expj(t0 * evals[j])
        p = abs(amp) ** 2
        return float(gap), float(t0), min(float(p), 1.0)


def window_min_mp(h: Hamiltonian, delta: float, samples: int = 101, dps: int = 80) -> float:
    """Minimum of p(t) over uniform samples of the readout window
    [(pi - delta)/gap, (pi + delta)/gap], evaluated in mpmath."""
    if not 0 <= delta < math.pi:
        raise UsageError(f"delta must lie in [0, pi), got {delta}")
    u, v = h.pair.u, h.pair.v
    with mp.workdps(dps):
        evals, cols = eigendecompose_mp(h.matrix, dps=dps)
        gap = evals[0] - evals[1]
        if gap <= 0:
            raise NumericalError("degenerate top pair: gap <= 0 at working precision")
        lo = (mp.pi - delta) / gap
        hi = (mp.pi + delta) / gap
        weights = [cols[u, j] * cols[v, j] for j in range(len(evals))]
        best = mp.mpf(2)
        for i in range(samples):
            t = lo + (hi - lo) * i / (samples - 1) if samples > 1 else lo
            amp = mp.mpc(0)
            for wj, lam in zip(weights, evals):
                amp += wj * mp.expj(t * lam)
            p = abs(amp) ** 2
            if p < best:
                best = p
        return min(float(best), 1.0)


def needs_high_precision(spec: SpectralData) -> bool:
    """Float64 readout is trusted only when t0 * residual keeps phase error
    small."""
    if len(spec.eigenvalues) < 2:
        return False
    gap = float(spec.eigenvalues[0] - spec.eigenvalues[1])
    err = max(spec.residual_norm, 1e-15 * max(1.0, abs(float(spec.eigenvalues[0]))))
    if gap <= 0:
        return True
    return (math.pi / gap) * err > 1e-6


def readout_report(h: Hamiltonian) -> tuple:
    """(gap, t0, p_t0) choosing float64 or mpmath automatically."""
    spec = eigendecompose_symmetric(h.matrix)
    if needs_high_precision(spec):
        return readout_mp(h)
    gap = float(spec.eigenvalues[0] - spec.eigenvalues[1])
    t0 = math.pi / gap
    return gap, t0, transfer_strength(spec, h.pair, t0)


# ---------------------------------------------------------------------------
# Fidelity curves


@dataclass(frozen=True)
class CurveRow:
    Q: float
    gap: float
    t0: float
    p_t0: float
    t_star: float
    p_star: float
    certified: bool


def default_t_max(Q: float, m: int, d: int) -> float:
    """Readout-time cap 2*pi*(Q+m)^(d-1) plus 10% slack."""
    return 1.1 * 2.0 * math.pi * (Q + m) ** (d - 1)


def fidelity_curve(g: Graph, pair: VertexPair, q_values,
                   t_max_policy: Optional[Callable[[float, int, int], float]] = None,
                   max_coarse_samples: int = DEFAULT_MAX_COARSE_SAMPLES) -> list:
    """One TransferReport row per Q, in input order. Rows with Q <= 2m are
    marked uncertified (the Gershgorin split is unavailable there)."""
    m = max_degree(g)
    policy = t_max_policy or default_t_max
    rows = []
    for q in q_values:
        if not math.isfinite(q):
            raise UsageError(f"Q values must be finite, got {q}")
        h = build_hamiltonian(g, pair, q)
        spec = eigendecompose_symmetric(h.matrix)
        t_max = policy(q, m, pair.d)
        report = fidelity_search(spec, pair, t_max, max_coarse_samples=max_coarse_samples)
        p_t0, t0, gap = report.p_t0, report.t0, report.gap
        if needs_high_precision(spec):
            gap, t0, p_t0 = readout_mp(h)
        rows.append(
            CurveRow(
                Q=float(q),
                gap=gap,
                t0=t0,
                p_t0=p_t0,
                t_star=report.t_star,
                p_star=max(report.p_star, p_t0),
                certified=q > 2 * m,
            )
        )
    return rows


def curve_csv(rows) -> str:
    """CSV per the external contract: 17-significant-digit reals."""
    lines = ["Q,gap,t0,p_t0,t_star,p_star,certified"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    f"{r.Q:.17g}",
                    f"{r.gap:.17g}",
                    f"{r.t0:.17g}",
                    f"{r.p_t0:.17g}",
                    f"{r.t_star:.17g}",
                    f"{r.p_star:.17g}",
                    "true" if r.certified else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"
