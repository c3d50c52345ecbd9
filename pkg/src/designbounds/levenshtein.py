"""Delsarte-Goethals-Seidel cardinality bounds, Levenshtein bound functions,
and the associated quadrature rules for (n, tau, N) triples.

The quadrature rule pairs a node at t = 1 with weight 1/N against interior
nodes alpha_i / beta_i and weights rho_i / gamma_i, and integrates the
normalized sphere weight exactly for polynomials of degree <= tau.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import special
from scipy.optimize import brentq

from . import orthopoly as op
from .errors import ConvergenceError, InternalConsistencyError, RangeError

MAX_K = 30


def _tol() -> float:
    return float(os.environ.get("DEB_TOL", "1e-9"))


def dgs_bound(n: int, tau: int) -> int:
    """Minimum-cardinality bound D(n, tau) for strength-tau designs (exact)."""
    if n < 2 or tau < 0:
        raise RangeError(f"need n >= 2 and tau >= 0, got ({n}, {tau})")
    if tau % 2 == 1:
        k = (tau + 1) // 2
        return 2 * math.comb(n + k - 2, n - 1)
    k = tau // 2
    return math.comb(n + k - 1, n - 1) + math.comb(n + k - 2, n - 1)


def interval(n: int, m: int) -> tuple[float, float]:
    """Endpoints of the m-th branch interval of the Levenshtein bound."""
    if m < 1:
        raise RangeError(f"branch index must be >= 1, got {m}")
    k = (m + 1) // 2
    if m % 2 == 1:
        return op.adjacent_largest_zero(n, 1, 1, k - 1), op.adjacent_largest_zero(n, 1, 0, k)
    return op.adjacent_largest_zero(n, 1, 0, k), op.adjacent_largest_zero(n, 1, 1, k)


def lev_bound_m(n: int, m: int, s: float) -> float:
    """Levenshtein bound L_m(n, s) on a forced branch m."""
    if s >= 1:
        raise RangeError(f"s must be < 1, got {s}")
    k = (m + 1) // 2
    if m % 2 == 1:
        Pk = op.gegenbauer_eval(n, k, s)
        Pk1 = op.gegenbauer_eval(n, k - 1, s)
        return math.comb(k + n - 3, k - 1) * (
            (2 * k + n - 3) / (n - 1) - (Pk1 - Pk) / ((1 - s) * Pk)
        )
    Pk = op.gegenbauer_eval(n, k, s)
    Pk1 = op.gegenbauer_eval(n, k + 1, s)
    return math.comb(k + n - 2, k) * (
        (2 * k + n - 1) / (n - 1) - (1 + s) * (Pk - Pk1) / ((1 - s) * (Pk + Pk1))
    )


def branch_of(n: int, s: float) -> int:
    """Branch index m with s in the m-th interval."""
    if s >= 1:
        raise RangeError(f"s must be < 1, got {s}")
    m = 1
    while True:
        lo, hi = interval(n, m)
        if s <= hi + 1e-14:
            return m
        m += 1
        if (m + 1) // 2 > op.MAX_DEGREE:
            raise RangeError(f"s = {s} beyond supported branch range")


def lev_bound(n: int, s: float) -> float:
    """Piecewise Levenshtein bound L(n, s); continuous in s."""
    return lev_bound_m(n, branch_of(n, s), s)


def solve_cardinality(n: int, tau: int, N: float) -> float:
    """Unique s on the tau-th interval with L_tau(n, s) = N."""
    lo_card, hi_card = dgs_bound(n, tau), dgs_bound(n, tau + 1)
    if not (lo_card <= N <= hi_card):
        raise RangeError(
            f"N = {N} outside admissible interval [{lo_card}, {hi_card}] for (n={n}, tau={tau})"
        )
    lo, hi = interval(n, tau)
    if N == lo_card:
        return lo
    if N == hi_card:
        return hi
    if tau == 1:
        return -1.0 / (N - 1)
    f = lambda s: lev_bound_m(n, tau, s) - N
    s = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16)
    return float(s)


def _jacobi_monomial(alpha: float, beta: float, k: int) -> np.ndarray:
    """Monomial coefficients (constant first) of P_k^(alpha,beta)."""
    c = special.jacobi(k, alpha, beta).coefficients  # highest first
    return np.asarray(c[::-1], dtype=float)


def _polish_roots(raw, f, df):
    out = []
    for r in sorted(raw):
        out.append(op._newton_polish(f, df, r, -1.0, 1.0))
    return np.array(out)


def _kernel_roots(a: float, b: float, k: int, s: float) -> np.ndarray:
    """All k roots, ascending, of P_k(t) P_{k-1}(s) - P_k(s) P_{k-1}(t) for the
    Jacobi (a, b) system; t = s is always among them and is pinned exactly."""
    Pk_s = float(op.jacobi_eval(a, b, k, s))
    Pk1_s = float(op.jacobi_eval(a, b, k - 1, s))
    ker = npoly.polysub(Pk1_s * _jacobi_monomial(a, b, k), Pk_s * _jacobi_monomial(a, b, k - 1))

    def f(t):
        return float(op.jacobi_eval(a, b, k, t)) * Pk1_s - Pk_s * float(
            op.jacobi_eval(a, b, k - 1, t)
        )

    def df(t):
        return float(op.jacobi_derivative(a, b, k, t)) * Pk1_s - Pk_s * float(
            op.jacobi_derivative(a, b, k - 1, t)
        )

    raw = np.roots(ker[::-1])
    raw = np.real(raw[np.abs(np.imag(raw)) < 1e-8])
    if len(raw) != k:
        raise ConvergenceError(f"kernel equation returned {len(raw)} real roots, expected {k}")
    roots = _polish_roots(raw, f, df)
    roots[np.argmin(np.abs(roots - s))] = s
    return roots


def _odd_nodes(n: int, k: int, s: float) -> np.ndarray:
    """Nodes alpha_0 < ... < alpha_{k-1} = s for the odd rule, from the
    (1, 0)-adjacent Jacobi kernel."""
    if k == 1:
        return np.array([s])
    return _kernel_roots((n - 1) / 2.0, (n - 3) / 2.0, k, s)


def _even_interior_nodes(n: int, k: int, s: float) -> np.ndarray:
    """Interior double nodes beta_1 < ... < beta_{k-1}, from the
    (1, 1)-adjacent Jacobi kernel (the root at s is beta_k, not interior)."""
    if k == 1:
        return np.empty(0)
    roots = _kernel_roots((n - 1) / 2.0, (n - 1) / 2.0, k, s)
    return roots[roots != s]


@dataclass(frozen=True)
class DesignSpec:
    n: int
    tau: int
    N: float

    @property
    def k(self) -> int:
        return (self.tau + 1) // 2

    def to_json(self) -> dict:
        N = self.N
        return {"n": self.n, "tau": self.tau, "N": int(N) if float(N).is_integer() else N}


@dataclass(frozen=True)
class QuadratureRule:
    spec: DesignSpec
    s: float
    nodes: np.ndarray
    weights: np.ndarray
    parity: str  # "odd" | "even"
    exactness_residuals: np.ndarray
    boundary: bool
    condition: float

    def apply(self, f) -> float:
        """1/N f(1) + sum_i w_i f(node_i)."""
        vals = np.array([float(f(t)) for t in self.nodes])
        return float(f(1.0)) / self.spec.N + float(np.dot(self.weights, vals))

    def to_json(self) -> dict:
        d = self.spec.to_json()
        d.update(
            s=self.s,
            nodes=list(self.nodes),
            weights=list(self.weights),
            parity=self.parity,
            exactness_residuals=list(self.exactness_residuals),
            boundary=self.boundary,
        )
        return d


def _solve_weights(n: int, N: float, nodes: np.ndarray) -> tuple[np.ndarray, float]:
    """Weights from exactness on the Gegenbauer basis P_0..P_{len-1}."""
    m = len(nodes)
    V = np.array([op.gegenbauer_eval(n, j, nodes) for j in range(m)])
    rhs = -1.0 / N * np.ones(m)
    rhs[0] += 1.0
    return np.linalg.solve(V, rhs), float(np.linalg.cond(V))


def _residuals(n: int, tau: int, N: float, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    res = []
    for j in range(tau + 1):
        target = 1.0 if j == 0 else 0.0
        val = 1.0 / N + float(np.dot(weights, op.gegenbauer_eval(n, j, nodes)))
        res.append(val - target)
    return np.array(res)


def quadrature_rule(n: int, tau: int, N: float) -> QuadratureRule:
    """Levenshtein quadrature for the (n, tau, N) triple, exact to degree tau."""
    if N <= 1:
        raise RangeError(f"N must exceed 1, got {N}")
    k = (tau + 1) // 2
    if k > MAX_K:
        raise RangeError(f"k = {k} exceeds cap {MAX_K}")
    s = solve_cardinality(n, tau, N)
    boundary = N in (dgs_bound(n, tau), dgs_bound(n, tau + 1))
    if tau % 2 == 1:
        nodes = _odd_nodes(n, k, s)
        parity = "odd"
    else:
        inner = _even_interior_nodes(n, k, s)
        nodes = np.concatenate(([-1.0], inner, [s]))
        parity = "even"
    weights, cond = _solve_weights(n, N, nodes)
    if np.any(np.diff(nodes) <= 0):
        raise InternalConsistencyError(f"nodes not strictly increasing: {nodes}")
    wmin = weights.min()
    if wmin <= 0 and not (boundary and wmin > -1e-12):
        raise InternalConsistencyError(f"nonpositive quadrature weight: {weights}")
    res = _residuals(n, tau, N, nodes, weights)
    if np.max(np.abs(res)) > _tol():
        raise InternalConsistencyError(
            f"exactness check failed for (n={n}, tau={tau}, N={N}): residuals {res}"
        )
    return QuadratureRule(
        spec=DesignSpec(n=n, tau=tau, N=N),
        s=s,
        nodes=nodes,
        weights=weights,
        parity=parity,
        exactness_residuals=res,
        boundary=boundary,
        condition=cond,
    )


def levenshtein_polynomial(n: int, tau: int, N: float) -> op.Poly:
    """Monic polynomial with the rule's nodes at their stated multiplicities."""
    rule = quadrature_rule(n, tau, N)
    if rule.parity == "odd":
        mults = [(t, 2) for t in rule.nodes[:-1]] + [(rule.nodes[-1], 1)]
    else:
        mults = [(rule.nodes[0], 1), (rule.nodes[-1], 1)] + [(t, 2) for t in rule.nodes[1:-1]]
    return op.poly_from_roots(mults)


def gamma0_times_N(n: int, k: int, N: float) -> float:
    """gamma_0 * N for the even rule; 0 and 1 exactly at the interval ends."""
    lo, hi = dgs_bound(n, 2 * k), dgs_bound(n, 2 * k + 1)
    if not (lo <= N <= hi):
        raise RangeError(f"N = {N} outside [{lo}, {hi}] for (n={n}, k={k})")
    if N == lo:
        return 0.0
    if N == hi:
        return 1.0
    rule = quadrature_rule(n, 2 * k, N)
    return float(rule.weights[0] * N)
