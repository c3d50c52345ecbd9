"""Admissible inner-product ranges [lo, hi] for designs of given (n, N, tau)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InfeasibleRange, RangeError
from .levenshtein import dgs_bound, quadrature_rule
from .orthopoly import poly_from_roots

OPEN_UPPER_EPS = 1e-9


def u_bound(n: int, N: float, tau: int) -> float:
    """Largest admissible inner product for 2- and 4-designs."""
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    if tau == 2:
        if not (n + 1 <= N <= 2 * n):
            raise RangeError(f"N = {N} outside [{n + 1}, {2 * n}] for tau = 2")
        return (N - 2) / n - 1.0
    if tau == 4:
        lo, hi = n * (n + 3) // 2, n * (n + 1)
        if not (lo <= N <= hi):
            raise RangeError(f"N = {N} outside [{lo}, {hi}] for tau = 4")
        return 2.0 * (3.0 + math.sqrt((n - 1) * ((n + 2) * N - 3 * (n + 3)))) / (n * (n + 2)) - 1.0
    raise RangeError(f"u_bound supports tau in (2, 4), got {tau}")


def l_bound(n: int, N: float, tau: int) -> float:
    """Smallest admissible inner product for 2- and 4-designs."""
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    if tau == 2:
        if not (n + 1 <= N < 2 * n):
            raise RangeError(f"N = {N} outside [{n + 1}, {2 * n}) for tau = 2")
        return 1.0 - N / n
    if tau == 4:
        lo, hi = n * (n + 3) // 2, n * (n + 1)
        if not (lo <= N < hi):
            raise RangeError(f"N = {N} outside [{lo}, {hi}) for tau = 4")
        return 1.0 - (2.0 / n) * (1.0 + math.sqrt((n - 1) * (N - 2) / (n + 2)))
    raise RangeError(f"l_bound supports tau in (2, 4), got {tau}")


def even_range(n: int, N: float, k: int) -> tuple[float, float]:
    """Smallest/largest roots (xi, eta) of f(t) = gamma_0 N f(-1), where f is
    the squared interior-node polynomial of the even quadrature rule."""
    lo, hi = dgs_bound(n, 2 * k), dgs_bound(n, 2 * k + 1)
    if not (lo < N < hi):
        raise RangeError(f"N = {N} must lie strictly inside ({lo}, {hi}) for k = {k}")
    rule = quadrature_rule(n, 2 * k, N)
    betas = rule.nodes[1:]  # beta_1 .. beta_k
    f = poly_from_roots([(b, 2) for b in betas])
    target = float(rule.weights[0] * N * f(-1.0))
    g = lambda t: float(f(t)) - target
    xi = brentq(g, -1.0, betas[0], xtol=1e-15)
    eta = brentq(g, betas[-1], 1.0, xtol=1e-15)
    return float(xi), float(eta)


@dataclass(frozen=True)
class InnerProductRange:
    lo: float
    hi: float
    lo_source: str
    hi_source: str

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_source": self.lo_source, "hi_source": self.hi_source}


def best_range(
    n: int,
    N: float,
    tau: int,
    user_u: float | None = None,
    user_l: float | None = None,
) -> InnerProductRange:
    """Intersection of all applicable inner-product bounds plus user overrides."""
    lo, lo_src = -1.0, "trivial"
    hi, hi_src = 1.0 - OPEN_UPPER_EPS, "trivial"
    if tau in (2, 4):
        try:
            u = u_bound(n, N, tau)
            if u < hi:
                hi, hi_src = u, f"closed-form-u(tau={tau})"
        except RangeError:
            pass
        try:
            l = l_bound(n, N, tau)
            if l > lo:
                lo, lo_src = l, f"closed-form-l(tau={tau})"
        except RangeError:
            pass
    if tau % 2 == 0 and tau >= 2:
        k = tau // 2
        try:
            xi, eta = even_range(n, N, k)
            if xi > lo:
                lo, lo_src = xi, "even-root-xi"
            if eta < hi:
                hi, hi_src = eta, "even-root-eta"
        except RangeError:
            pass
    if user_l is not None and user_l > lo:
        lo, lo_src = float(user_l), "user"
    if user_u is not None and user_u < hi:
        hi, hi_src = float(user_u), "user"
    if lo > hi:
        raise InfeasibleRange(lo, hi, lo_src, hi_src)
    return InnerProductRange(lo=lo, hi=hi, lo_source=lo_src, hi_source=hi_src)
