"""Pass/fail-with-margin certificates for every quantitative bound the
library implements: the loop-weight threshold, the fidelity floor at the
readout time, the eigenvector ratio bound, mass concentration on {u, v},
the readout-time cap, and the readout window.

Also houses the inverse construction: pick an eigenvalue lambda > m first,
read Q off the 2x2 Z-matrix, and extend (mu, nu) to a full eigenvector.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DivergenceError,
    InconclusiveError,
    NotApplicableError,
    UsageError,
)
from .dynamics import build_hamiltonian, readout_mp, window_min_mp
from .graph import Graph, VertexPair, canonical_edge_list, max_degree
from .spectral import (
    SpectralData,
    eigendecompose_symmetric,
    gershgorin_split,
    spectral_data_mp,
    top_pair,
)
from .walks import INFINITY, Tunneling, classify_tunneling, cospectrality, z_value

SLACK_COEFF = 1e-9
ZERO_ENTRY_TOL = 1e-13


@dataclass(frozen=True)
class Check:
    """One inequality instance: passed iff lhs <= rhs + slack."""

    name: str
    lhs: float
    rhs: float
    passed: bool
    margin: float
    slack: float
    statement: str
    status: str = "PASS"  # PASS | FAIL | SKIPPED | INCONCLUSIVE


def make_check(name: str, lhs: float, rhs: float, statement: str) -> Check:
    slack = SLACK_COEFF * (1.0 + abs(lhs) + abs(rhs))
    passed = lhs <= rhs + slack
    return Check(
        name=name,
        lhs=lhs,
        rhs=rhs,
        passed=passed,
        margin=rhs - lhs,
        slack=slack,
        statement=statement,
        status="PASS" if passed else "FAIL",
    )


def skipped_check(name: str, statement: str, status: str = "SKIPPED") -> Check:
    return Check(
        name=name, lhs=0.0, rhs=0.0, passed=True, margin=0.0, slack=0.0,
        statement=statement, status=status,
    )


@dataclass
class CertificateReport:
    checks: list
    fingerprint: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "fingerprint": self.fingerprint,
            "all_passed": self.all_passed,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "passed": c.passed,
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                    "margin": c.margin,
                    "slack": c.slack,
                    "statement": c.statement,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def instance_fingerprint(g: Graph, pair: VertexPair, Q: Optional[float] = None,
                         epsilon: Optional[float] = None) -> dict:
    digest = hashlib.sha256(canonical_edge_list(g).encode()).hexdigest()[:16]
    fp = {"graph": digest, "u": pair.u, "v": pair.v}
    if Q is not None:
        fp["Q"] = float(Q)
    if epsilon is not None:
        fp["epsilon"] = float(epsilon)
    return fp


# ---------------------------------------------------------------------------
# Threshold arithmetic


def _exponents(c, d: int) -> tuple:
    """(eps exponent denominator, m exponent addend) with c = INFINITY taken
    as the limit (2 and 1/2)."""
    if c == INFINITY:
        return 2.0, 0.5
    span = c - d + 1
    return min(2.0, span), max(0.5, d / span)


def q_threshold(epsilon: float, m: int, c, d: int) -> float:
    """Smallest certified loop weight: 16 * eps^(-1/min(2, c-d+1)) *
    m^(1 + max(1/2, d/(c-d+1))). Only defined in the asymptotic-tunneling
    regime c >= d >= 1."""
    if not 0 < epsilon < 1:
        raise UsageError(f"epsilon must lie in (0, 1), got {epsilon}")
    if d < 1:
        raise UsageError("d must be >= 1")
    if c < d:
        raise NotApplicableError(
            f"c={c} < d={d}: partial/no-tunneling regime, no threshold exists"
        )
    a, b = _exponents(c, d)
    return 16.0 * epsilon ** (-1.0 / a) * m ** (1.0 + b)


def epsilon_prime(Q: float, m: int, c, d: int) -> float:
    """max(22 m^3 / (Q-m)^2, m^(c+1) / (Q-2m)^(c-d+1)); the second term is 0
    in the c = INFINITY limit."""
    if c < d:
        raise NotApplicableError(f"c={c} < d={d}: floor formula requires c >= d")
    if Q <= 2 * m:
        raise UsageError(f"requires Q > 2m, got Q={Q}, m={m}")
    first = 22.0 * m ** 3 / (Q - m) ** 2
    if c == INFINITY:
        second = 0.0
    else:
        second = m ** (c + 1) / (Q - 2 * m) ** (c - d + 1)
    return max(first, second)


def fidelity_floor(Q: float, m: int, c, d: int) -> float:
    return 1.0 - 8.0 * epsilon_prime(Q, m, c, d)


# ---------------------------------------------------------------------------
# Theorem-backed certificates


def _instance_params(g: Graph, pair: VertexPair):
    m = max_degree(g)
    cres = cospectrality(g, pair)
    cls = classify_tunneling(cres.c, pair.d)
    return m, cres.c, cls


def verify_fidelity_theorem(g: Graph, pair: VertexPair, epsilon: float,
                            dps: int = 80) -> CertificateReport:
    """At Q just above the threshold, check p(t0) >= 1 - 8*eps' and
    p(t0) >= 1 - epsilon. Requires the asymptotic-tunneling regime."""
    m, c, cls = _instance_params(g, pair)
    if cls is not Tunneling.ASYMPTOTIC:
        raise NotApplicableError(
            f"tunneling class is {cls.value}; the fidelity threshold requires ASYMPTOTIC"
        )
    Q = q_threshold(epsilon, m, c, pair.d) * (1.0 + 1e-6)
    h = build_hamiltonian(g, pair, Q)
    gap, t0, p_t0 = readout_mp(h, dps=dps)
    eps_p = epsilon_prime(Q, m, c, pair.d)
    checks = [
        make_check(
            "fidelity_floor",
            lhs=1.0 - 8.0 * eps_p,
            rhs=p_t0,
            statement="p(t0) >= 1 - 8*max(22 m^3/(Q-m)^2, m^(c+1)/(Q-2m)^(c-d+1))",
        ),
        make_check(
            "fidelity_target",
            lhs=1.0 - epsilon,
            rhs=p_t0,
            statement="Q above the loop-weight threshold forces p(t0) > 1 - epsilon",
        ),
    ]
    return CertificateReport(
        checks=checks,
        fingerprint=instance_fingerprint(g, pair, Q=Q, epsilon=epsilon),
    )


def verify_ratio_lemma(spec: SpectralData, pair: VertexPair, m: int, c, d: int) -> list:
    """|phi(u)/phi(v) - phi(v)/phi(u)| <= m^(c+1) / (lambda^(c-d) (lambda-m))
    for the top two eigenpairs; rhs is the limit 0 when c = INFINITY."""
    if c < d:
        raise NotApplicableError(f"ratio bound requires c >= d, got c={c}, d={d}")
    tp = top_pair(spec, pair)
    checks = []
    for tag, lam, a, b in (
        ("ratio_bound_top1", tp.lambda1, tp.mu1, tp.nu1),
        ("ratio_bound_top2", tp.lambda2, tp.mu2, tp.nu2),
    ):
        if lam <= m:
            raise UsageError(f"ratio bound needs lambda > m, got lambda={lam}, m={m}")
        if min(abs(a), abs(b)) < ZERO_ENTRY_TOL:
            checks.append(skipped_check(
                tag, "ratio undefined: an eigenvector entry at u or v is ~0",
                status="INCONCLUSIVE"))
            continue
        lhs = abs(a / b - b / a)
        if c == INFINITY:
            rhs = 0.0
        else:
            rhs = m ** (c + 1) / (lam ** (c - d) * (lam - m))
        checks.append(make_check(
            tag, lhs=lhs, rhs=rhs,
            statement="|phi(u)/phi(v) - phi(v)/phi(u)| <= m^(c+1)/(lambda^(c-d)(lambda-m))",
        ))
    return checks


def verify_mass_concentration(spec: SpectralData, pair: VertexPair, m: int) -> list:
    """phi(u)^2 + phi(v)^2 >= 1 - 22/C^2 with C = lambda / m^(3/2), for the
    top two unit eigenvectors; skipped when C <= 2."""
    tp = top_pair(spec, pair)
    checks = []
    for tag, lam, a, b in (
        ("mass_concentration_top1", tp.lambda1, tp.mu1, tp.nu1),
        ("mass_concentration_top2", tp.lambda2, tp.mu2, tp.nu2),
    ):
        big_c = lam / m ** 1.5
        if big_c <= 2.0:
            checks.append(skipped_check(
                tag, f"skipped: C = lambda/m^(3/2) = {big_c:.3g} <= 2"))
            continue
        checks.append(make_check(
            tag,
            lhs=1.0 - 22.0 / big_c ** 2,
            rhs=a * a + b * b,
            statement="phi(u)^2 + phi(v)^2 >= 1 - 22/C^2 for lambda >= C m^(3/2), C > 2",
        ))
    return checks


def verify_readout_bounds(g: Graph, pair: VertexPair, Q: float, epsilon: float,
                          delta: float, samples: int = 101,
                          dps: int = 80) -> CertificateReport:
    """(a) t0 <= 2*pi*(Q+m)^(d-1); (b) min p(t) over uniform samples of the
    window [(pi-delta)/gap, (pi+delta)/gap] is >= 1 - epsilon - 2*delta."""
    if not 0 <= delta < 1:
        raise UsageError(f"delta must lie in [0, 1), got {delta}")
    m, c, cls = _instance_params(g, pair)
    if cls is not Tunneling.ASYMPTOTIC:
        raise NotApplicableError(
            f"tunneling class is {cls.value}; readout bounds require ASYMPTOTIC"
        )
    h = build_hamiltonian(g, pair, Q)
    gap, t0, p_t0 = readout_mp(h, dps=dps)
    window_min = window_min_mp(h, delta, samples=samples, dps=dps) if delta > 0 else p_t0
    checks = [
        make_check(
            "readout_time_cap",
            lhs=t0,
            rhs=2.0 * math.pi * (Q + m) ** (pair.d - 1),
            statement="t0 <= 2*pi*(Q+m)^(d-1)",
        ),
        make_check(
            "readout_window",
            lhs=1.0 - epsilon - 2.0 * delta,
            rhs=window_min,
            statement="p(t) >= 1 - epsilon - 2*delta on t0*(1 +- delta/pi)",
        ),
    ]
    return CertificateReport(
        checks=checks,
        fingerprint=instance_fingerprint(g, pair, Q=Q, epsilon=epsilon),
    )


# ---------------------------------------------------------------------------
# Inverse construction


@dataclass(frozen=True)
class QConstruction:
    """Loop weight Q = lambda * (1 - rho) built from the 2x2 Z-matrix.

    The default branch is the Perron one (larger rho, entrywise non-negative
    (mu, nu)); the alternate branch is exposed alongside it.
    """

    lam: float
    Q: float
    mu: float
    nu: float
    rho: float
    q_alt: float
    mu_alt: float
    nu_alt: float
    rho_alt: float
    z_tail_total: float


def _unit2(x: float, y: float) -> tuple:
    norm = math.hypot(x, y)
    if norm == 0:
        return 1.0, 0.0
    x, y = x / norm, y / norm
    if (x, y) < (-x, -y):  # deterministic sign: lexicographically larger rep
        x, y = -x, -y
    return x, y


def construct_q_for_lambda(g: Graph, pair: VertexPair, lam: float,
                           rel_tol: float = 1e-12) -> QConstruction:
    """Solve the 2x2 symmetric eigenproblem of
    [[Z_uu, Z_uv], [Z_uv, Z_vv]](lambda) in closed form and set
    Q = lambda * (1 - rho)."""
    m = max_degree(g)
    if lam <= m:
        raise DivergenceError(f"construction needs lambda > m, got lambda={lam}, m={m}")
    zuu = z_value(g, pair, pair.u, pair.u, lam, rel_tol)
    zuv = z_value(g, pair, pair.u, pair.v, lam, rel_tol)
    zvv = z_value(g, pair, pair.v, pair.v, lam, rel_tol)
    a, b, cc = zuu.value, zuv.value, zvv.value
    half_diff = (a - cc) / 2.0
    disc = math.hypot(half_diff, b)
    rho_hi = (a + cc) / 2.0 + disc
    rho_lo = (a + cc) / 2.0 - disc
    tail_total = zuu.tail_bound + zvv.tail_bound + 2.0 * zuv.tail_bound
    if 2.0 * disc <= tail_total:
        raise InconclusiveError(
            f"Z tail bounds (total {tail_total:.3e}) cannot separate the 2x2 "
            f"eigenvalues (separation {2.0 * disc:.3e}); retry with rel_tol "
            f"<= {rel_tol * (2.0 * disc) / max(tail_total, 1e-300):.1e}"
        )
    if abs(b) > 1e-300:
        mu_hi, nu_hi = _unit2(b, rho_hi - a)
        mu_lo, nu_lo = _unit2(b, rho_lo - a)
    else:
        mu_hi, nu_hi = (1.0, 0.0) if a >= cc else (0.0, 1.0)
        mu_lo, nu_lo = (0.0, 1.0) if a >= cc else (1.0, 0.0)
    return QConstruction(
        lam=lam,
        Q=lam * (1.0 - rho_hi),
        mu=mu_hi,
        nu=nu_hi,
        rho=rho_hi,
        q_alt=lam * (1.0 - rho_lo),
        mu_alt=mu_lo,
        nu_alt=nu_lo,
        rho_alt=rho_lo,
        z_tail_total=tail_total,
    )


@dataclass(frozen=True)
class ExtensionResult:
    phi: np.ndarray
    Q: float
    residual: float


def extend_eigenvector(g: Graph, pair: VertexPair, lam: float, mu: float, nu: float,
                       rel_tol: float = 1e-12, Q: Optional[float] = None) -> ExtensionResult:
    """phi(u) = mu, phi(v) = nu, phi(x) = mu*Z_xu + nu*Z_xv elsewhere; the
    eigen-residual ||H phi - lambda phi|| is reported against the H built
    with Q from the inverse construction (unless Q is given)."""
    m = max_degree(g)
    if lam <= m:
        raise DivergenceError(f"extension needs lambda > m, got lambda={lam}, m={m}")
    if mu == 0.0 and nu == 0.0:
        raise UsageError("(mu, nu) must not both be zero")
    if Q is None:
        Q = construct_q_for_lambda(g, pair, lam, rel_tol).Q
    phi = np.zeros(g.n)
    phi[pair.u] = mu
    phi[pair.v] = nu
    for x in range(g.n):
        if x == pair.u or x == pair.v:
            continue
        zxu = z_value(g, pair, x, pair.u, lam, rel_tol).value
        zxv = z_value(g, pair, x, pair.v, lam, rel_tol).value
        phi[x] = mu * zxu + nu * zxv
    h = build_hamiltonian(g, pair, Q).matrix
    residual = float(np.linalg.norm(h @ phi - lam * phi))
    return ExtensionResult(phi=phi, Q=Q, residual=residual)


# ---------------------------------------------------------------------------
# Full certification bundle (used by the CLI)


def certify_instance(g: Graph, pair: VertexPair, epsilon: float,
                     delta: float = 0.05, dps: int = 80) -> CertificateReport:
    """Run every certificate at Q derived from epsilon. Raises
    NotApplicableError outside the asymptotic-tunneling regime."""
    m, c, cls = _instance_params(g, pair)
    if cls is not Tunneling.ASYMPTOTIC:
        raise NotApplicableError(
            f"tunneling class is {cls.value}; certification requires ASYMPTOTIC"
        )
    Q = q_threshold(epsilon, m, c, pair.d) * (1.0 + 1e-6)
    h = build_hamiltonian(g, pair, Q)
    spec = spectral_data_mp(h.matrix, dps=dps)
    split = gershgorin_split(spec, Q, m)
    checks = []
    checks.append(make_check(
        "gershgorin_split",
        lhs=float(split.n_top + (len(spec.eigenvalues) - 2 - split.n_bulk)),
        rhs=2.0,
        statement="exactly two eigenvalues in [Q-m, Q+m], the rest in [-m, m]",
    ))
    fid = verify_fidelity_theorem(g, pair, epsilon, dps=dps)
    checks.extend(fid.checks)
    checks.extend(verify_ratio_lemma(spec, pair, m, c, pair.d))
    checks.extend(verify_mass_concentration(spec, pair, m))
    readout = verify_readout_bounds(g, pair, Q, epsilon, delta, dps=dps)
    checks.extend(readout.checks)
    return CertificateReport(
        checks=checks,
        fingerprint=instance_fingerprint(g, pair, Q=Q, epsilon=epsilon),
    )
