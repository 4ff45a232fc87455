"""Exact counting of {u,v}-avoiding walks, truncated Z-series evaluation with
rigorous geometric tails, cospectrality, and the tunneling trichotomy.

All walk counts are Python big integers: counts grow like m^k and the
cospectrality verdict flips on a single off-by-one, so floating point is
never allowed anywhere in the counting path.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DivergenceError, UsageError, WorkCapExceededError
from .graph import Graph, VertexPair, distance, max_degree, restricted_adjacency

INFINITY = float("inf")

Z_HARD_MAX_TERMS = 1_000_000
BRUTE_FORCE_MAX_K = 14
BRUTE_FORCE_WORK_CAP = 2_000_000


def _source_vector(g: Graph, pair: VertexPair, x: int, ra) -> list:
    """Row of the full adjacency matrix at x, restricted to the interior.

    Works uniformly whether x is u, v, or an interior vertex: the first step
    of a walk of length >= 2 must land on an interior vertex.
    """
    return [1 if g.has_edge(x, w) else 0 for w in ra.interior]


def iter_walk_counts(g: Graph, pair: VertexPair, x: int, y: int):
    """Yield n_1(xy), n_2(xy), ... indefinitely (exact integers).

    n_1 comes straight from adjacency (this covers the u~v edge); for k >= 2
    the k-2 intermediate vertices live in the interior, so
    n_k = s_x . A'^(k-2) . s_y with s_* the adjacency rows restricted to the
    interior.
    """
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise UsageError(f"walk endpoints ({x}, {y}) out of range [0, {g.n})")
    ra = restricted_adjacency(g, pair)
    s_x = _source_vector(g, pair, x, ra)
    s_y = _source_vector(g, pair, y, ra)
    yield 1 if g.has_edge(x, y) else 0
    rows = ra.matrix
    vec = s_y
    while True:
        yield sum(a * b for a, b in zip(s_x, vec) if a)
        vec = [sum(r * w for r, w in zip(row, vec) if r) for row in rows]


def walk_counts(g: Graph, pair: VertexPair, x: int, y: int, K: int) -> list:
    """Exact counts n_1(xy) .. n_K(xy) of {u,v}-avoiding walks."""
    if K < 1:
        raise UsageError("K must be >= 1; length-0 walks are excluded by definition")
    it = iter_walk_counts(g, pair, x, y)
    return [next(it) for _ in range(K)]


def brute_force_walks(g: Graph, pair: VertexPair, x: int, y: int, k: int,
                      work_cap: int = BRUTE_FORCE_WORK_CAP) -> int:
    """Oracle: count length-k avoiding walks by explicit DFS enumeration.

    Deliberately independent of the interior-matrix recurrence above. Refuses
    when the m^(k-1) enumeration estimate exceeds work_cap.
    """
    if k < 1:
        raise UsageError("k must be >= 1")
    if k > BRUTE_FORCE_MAX_K:
        raise WorkCapExceededError(f"k={k} exceeds brute-force cap {BRUTE_FORCE_MAX_K}")
    m = max_degree(g)
    est = m ** (k - 1)
    if est > work_cap:
        raise WorkCapExceededError(
            f"estimated {est} walk extensions exceeds work cap {work_cap}"
        )
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise UsageError(f"walk endpoints ({x}, {y}) out of range [0, {g.n})")
    forbidden = (pair.u, pair.v)
    adj = g.adjacency

    def extend(w: int, steps: int) -> int:
        if steps == 1:
            return 1 if g.has_edge(w, y) else 0
        total = 0
        for nb in adj[w]:
            if nb != forbidden[0] and nb != forbidden[1]:
                total += extend(nb, steps - 1)
        return total

    return extend(x, k)


@dataclass(frozen=True)
class ZEstimate:
    """Truncated Z_xy(lambda) with a rigorous tail interval.

    All series terms are non-negative, so the true value lies in
    [value, value + tail_bound].
    """

    value: float
    tail_bound: float
    terms_used: int
    lam: float


def _term(count: int, lam: float, k: int) -> float:
    # count / lam^k without big-int -> float overflow; exact division when safe
    if count == 0:
        return 0.0
    if count < 2 ** 53 and k * math.log10(lam) < 300:
        return count / lam ** k
    return math.exp(math.log(count) - k * math.log(lam))


def z_value(g: Graph, pair: VertexPair, x: int, y: int, lam: float,
            rel_tol: float = 1e-12) -> ZEstimate:
    """Partial sum of Z_xy(lambda) = sum_k n_k(xy) / lambda^k with the
    geometric tail bound (m/lambda)^(K+1) / (1 - m/lambda).

    Truncation stops once the tail is below rel_tol * max(value, lambda^-d(x,y)).
    """
    if rel_tol <= 0:
        raise UsageError("rel_tol must be positive")
    m = max_degree(g)
    if lam <= m:
        raise DivergenceError(
            f"Z series converges only for lambda > max degree; got lambda={lam}, m={m}"
        )
    dxy = 0 if x == y else distance(g, x, y)
    floor = math.exp(-dxy * math.log(lam))
    ratio = m / lam
    k_cap = min(
        Z_HARD_MAX_TERMS,
        max(64, math.ceil(10 * g.n / max(math.log2(lam / m), 1e-9))),
    )
    value = 0.0
    k = 0
    for count in iter_walk_counts(g, pair, x, y):
        k += 1
        value += _term(count, lam, k)
        tail = ratio ** (k + 1) / (1.0 - ratio)
        if tail <= rel_tol * max(value, floor) or k >= k_cap:
            return ZEstimate(value=value, tail_bound=tail, terms_used=k, lam=lam)
    raise AssertionError("unreachable")


class Tunneling(enum.Enum):
    ASYMPTOTIC = "ASYMPTOTIC"
    PARTIAL = "PARTIAL"
    NONE = "NONE"


@dataclass(frozen=True)
class CospectralityResult:
    """c = co(u, v); c == INFINITY means the closed avoiding-walk counts at u
    and v agreed for every length up to the 2n decision horizon (both
    sequences satisfy a linear recurrence of order <= n-2, so agreement on 2n
    consecutive terms forces agreement forever)."""

    c: float  # non-negative int, or INFINITY
    first_mismatch: Optional[tuple]  # (t, n_t(uu), n_t(vv)) when finite

    @property
    def is_infinite(self) -> bool:
        return self.c == INFINITY


def cospectrality(g: Graph, pair: VertexPair) -> CospectralityResult:
    horizon = 2 * g.n
    counts_u = walk_counts(g, pair, pair.u, pair.u, horizon)
    counts_v = walk_counts(g, pair, pair.v, pair.v, horizon)
    for t, (a, b) in enumerate(zip(counts_u, counts_v), start=1):
        if a != b:
            return CospectralityResult(c=t - 1, first_mismatch=(t, a, b))
    return CospectralityResult(c=INFINITY, first_mismatch=None)


def classify_tunneling(c, d: int) -> Tunneling:
    """Trichotomy on cospectrality vs distance."""
    if d < 1:
        raise UsageError("d must be >= 1")
    if c >= d:
        return Tunneling.ASYMPTOTIC
    if c == d - 1:
        return Tunneling.PARTIAL
    return Tunneling.NONE


def closed_walk_crosscheck(g: Graph, pair: VertexPair) -> list:
    """Compare the avoiding-walk equality n_t(uu) == n_t(vv) against the
    global closed-walk equality (A^t)_{uu} == (A^t)_{vv}, for t <= n-1.

    The two characterizations are used interchangeably in places; we compute
    both and report every t where they disagree on equality, without picking
    a winner. Empty list = full agreement.
    """
    horizon = max(1, g.n - 1)
    counts_u = walk_counts(g, pair, pair.u, pair.u, horizon)
    counts_v = walk_counts(g, pair, pair.v, pair.v, horizon)

    # exact integer powers of the full adjacency matrix
    n = g.n
    a = [[1 if g.has_edge(i, j) else 0 for j in range(n)] for i in range(n)]
    power = [row[:] for row in a]
    disagreements = []
    for t in range(1, horizon + 1):
        if t > 1:
            power = [
                [sum(power[i][k] * a[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        avoiding_equal = counts_u[t - 1] == counts_v[t - 1]
        closed_equal = power[pair.u][pair.u] == power[pair.v][pair.v]
        if avoiding_equal != closed_equal:
            disagreements.append(
                {
                    "t": t,
                    "avoiding": (str(counts_u[t - 1]), str(counts_v[t - 1])),
                    "closed": (str(power[pair.u][pair.u]), str(power[pair.v][pair.v])),
                }
            )
    return disagreements


@dataclass(frozen=True)
class WalkTable:
    """Counts n_k for the endpoint pairs uu, uv, vv up to max_len."""

    pair: VertexPair
    max_len: int
    counts: dict  # {"uu": [...], "uv": [...], "vv": [...]} big ints

    def to_json(self) -> str:
        payload = {
            "pair": [self.pair.u, self.pair.v],
            "counts": {key: [str(c) for c in seq] for key, seq in self.counts.items()},
        }
        return json.dumps(payload, sort_keys=True)


def walk_table(g: Graph, pair: VertexPair, K: int) -> WalkTable:
    u, v = pair.u, pair.v
    return WalkTable(
        pair=pair,
        max_len=K,
        counts={
            "uu": walk_counts(g, pair, u, u, K),
            "uv": walk_counts(g, pair, u, v, K),
            "vv": walk_counts(g, pair, v, v, K),
        },
    )
