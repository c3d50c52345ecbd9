"""Explicit spherical configurations as inner-product distributions: exact
energies and design-strength checks.

Energies follow the ordered-pair convention: every unordered pair of
distinct points contributes twice. Published per-configuration formulas that
count unordered pairs are half these values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .orthopoly import gegenbauer_eval
from .potentials import Potential

STRENGTH_TOL = 1e-8


@dataclass(frozen=True)
class InnerProductDistribution:
    """Ordered-pair multiset of off-diagonal inner products of an N-point code."""

    n: int
    N: int
    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        total = sum(c for _, c in self.entries)
        if total != self.N * (self.N - 1):
            raise RangeError(
                f"pair counts sum to {total}, expected N(N-1) = {self.N * (self.N - 1)}"
            )
        for t, c in self.entries:
            if not (-1.0 <= t < 1.0):
                raise RangeError(f"inner product {t} outside [-1, 1)")
            if c <= 0:
                raise RangeError(f"nonpositive pair count {c} at t = {t}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "entries": [{"t": t, "count": c} for t, c in self.entries],
        }


def simplex(n: int) -> InnerProductDistribution:
    """Regular simplex: n+1 points, all inner products -1/n."""
    if n < 1:
        raise RangeError(f"need n >= 1, got {n}")
    N = n + 1
    return InnerProductDistribution(n=n, N=N, entries=((-1.0 / n, N * (N - 1)),))


def orthogonal_simplices(a: int, b: int) -> InnerProductDistribution:
    """Two mutually orthogonal regular simplices with a and b vertices on
    S^(a+b-3); {k,k} is the Mimura 2-design."""
    if a < 2 or b < 2:
        raise RangeError(f"simplex sizes must be >= 2, got ({a}, {b})")
    n = a + b - 2
    N = a + b
    counts: dict[float, int] = {}
    for size in (a, b):
        t = -1.0 / (size - 1)
        counts[t] = counts.get(t, 0) + size * (size - 1)
    counts[0.0] = counts.get(0.0, 0) + 2 * a * b
    entries = tuple(sorted(counts.items()))
    return InnerProductDistribution(n=n, N=N, entries=entries)


def cross_polytope(n: int) -> InnerProductDistribution:
    """2n antipodal basis points; a sharp 3-design for n >= 2."""
    if n < 1:
        raise RangeError(f"need n >= 1, got {n}")
    N = 2 * n
    entries = [(-1.0, 2 * n)]
    if n > 1:
        entries.append((0.0, 2 * n * (2 * n - 2)))
    return InnerProductDistribution(n=n, N=N, entries=tuple(entries))


def binary_embed(weight_distribution, n_bits: int) -> InnerProductDistribution:
    """Map (Hamming distance, ordered-pair count) classes to the sphere via
    t = 1 - 2d/n_bits."""
    entries = []
    total = 0
    for d, count in weight_distribution:
        if not (0 <= d <= n_bits):
            raise RangeError(f"Hamming distance {d} outside [0, {n_bits}]")
        if d == 0:
            raise RangeError("distance-0 class off the diagonal means repeated points")
        entries.append((1.0 - 2.0 * d / n_bits, int(count)))
        total += int(count)
    # recover N from the ordered-pair total
    N = (1 + math.isqrt(1 + 4 * total)) // 2
    if N * (N - 1) != total:
        raise RangeError(f"pair total {total} is not of the form N(N-1)")
    entries = tuple(sorted(entries))
    return InnerProductDistribution(n=n_bits, N=N, entries=entries)


def kerdock(l: int) -> InnerProductDistribution:
    """Spherical embedding of the Kerdock code: n = 4^l, N = n^2,
    inner products {1/sqrt(n), 0, -1/sqrt(n), -1}."""
    if l < 2:
        raise RangeError(f"need l >= 2, got {l}")
    n = 2 ** (2 * l)
    N = n * n
    a_side = 2 ** (2 * l) * (2 ** (2 * l - 1) - 1)  # weights 2^(2l-1) +- 2^(l-1)
    a_mid = 2 ** (2 * l + 1) - 2
    dist = [
        (2 ** (2 * l - 1) - 2 ** (l - 1), N * a_side),
        (2 ** (2 * l - 1), N * a_mid),
        (2 ** (2 * l - 1) + 2 ** (l - 1), N * a_side),
        (n, N * 1),
    ]
    return binary_embed(dist, n)


def energy(dist: InnerProductDistribution, h: Potential) -> float:
    """Ordered-pair energy sum of h over the distribution."""
    ts = np.array([t for t, _ in dist.entries])
    cs = np.array([c for _, c in dist.entries], dtype=float)
    vals = h.eval(ts)
    return float(np.dot(cs, vals))


def moment_sums(dist: InnerProductDistribution, j_max: int) -> np.ndarray:
    """S_j = sum over all ordered pairs (diagonal included) of P_j(<x,y>),
    for j = 0..j_max; S_j = 0 iff the degree-j moment condition holds."""
    ts = np.array([t for t, _ in dist.entries])
    cs = np.array([c for _, c in dist.entries], dtype=float)
    out = np.empty(j_max + 1)
    for j in range(j_max + 1):
        out[j] = dist.N + float(np.dot(cs, gegenbauer_eval(dist.n, j, ts)))
    return out


def strength(dist: InnerProductDistribution, max_tau: int) -> int:
    """Largest tau <= max_tau with S_j ~ 0 for 1 <= j <= tau.

    Necessary and sufficient for distance-invariant configurations; a
    necessary condition for general distributions.
    """
    s = moment_sums(dist, max_tau)
    thresh = STRENGTH_TOL * dist.N**2
    tau = 0
    for j in range(1, max_tau + 1):
        if abs(s[j]) <= thresh:
            tau = j
        else:
            break
    return tau


def distribution_from_points(points, decimals: int = 10) -> InnerProductDistribution:
    """Distribution of an explicit unit-norm point set (rows of an array);
    inner products are grouped after rounding to the given decimals."""
    pts = np.asarray(points, dtype=float)
    norms = np.linalg.norm(pts, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise RangeError("points must be unit-norm to 1e-8")
    gram = pts @ pts.T
    N = len(pts)
    vals: dict[float, int] = {}
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            t = round(float(np.clip(gram[i, j], -1.0, 1.0 - 1e-15)), decimals)
            vals[t] = vals.get(t, 0) + 1
    return InnerProductDistribution(n=pts.shape[1], N=N, entries=tuple(sorted(vals.items())))
