"""Gegenbauer/Jacobi polynomial evaluation, zeros, sphere-weight quadrature
and Gegenbauer expansions.

Conventions: Gegenbauer polynomials P_i are normalized so P_i(1) = 1 for the
dimension-n sphere weight (1-t^2)^((n-3)/2); the weight itself is normalized
to total mass 1, so the degree-0 expansion coefficient of a polynomial equals
its weighted mean.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import special
from scipy.optimize import brentq

from .errors import ConvergenceError, RangeError

MAX_DEGREE = 60
CONDITIONING_DEGREE = 30


@dataclass(frozen=True)
class Poly:
    """Real polynomial in the monomial basis, constant term first."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        c = npoly.polytrim(c, tol=0.0)
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))

    @property
    def degree(self) -> int:
        # the zero polynomial has degree 0 by convention
        return max(len(self.coeffs) - 1, 0)

    def __call__(self, t):
        return npoly.polyval(np.asarray(t, dtype=float), self.coeffs)

    def deriv(self, order: int = 1) -> "Poly":
        return Poly(npoly.polyder(self.coeffs, order)) if order else self

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(npoly.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(npoly.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return Poly(npoly.polymul(self.coeffs, other.coeffs))
        return Poly(np.asarray(self.coeffs) * float(other))

    __rmul__ = __mul__

    def to_json(self) -> list[float]:
        return list(self.coeffs)


def poly_eval(p: Poly, t):
    return p(t)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_from_roots(roots) -> Poly:
    """Monic polynomial from (root, multiplicity) pairs or a flat root list."""
    flat = []
    for r in roots:
        if np.isscalar(r):
            flat.append(float(r))
        else:
            t, mult = r
            flat.extend([float(t)] * int(mult))
    if not flat:
        return Poly([1.0])
    return Poly(npoly.polyfromroots(flat))


def _check_dimension(n: int) -> None:
    if n < 2:
        raise RangeError(f"dimension n must be >= 2, got {n}")


def _check_degree(i: int) -> None:
    if i > MAX_DEGREE:
        raise RangeError(f"degree {i} exceeds cap {MAX_DEGREE}")
    if i > CONDITIONING_DEGREE:
        warnings.warn(
            f"degree {i} > {CONDITIONING_DEGREE}: double-precision conditioning degrades",
            stacklevel=3,
        )


def gegenbauer_eval(n: int, i: int, t):
    """P_i at t for dimension n via the three-term recurrence; P_i(1) = 1."""
    return gegenbauer_derivative(n, i, t, 0)


def gegenbauer_derivative(n: int, i: int, t, order: int):
    """Order-th derivative of P_i at t, by differentiating the recurrence."""
    _check_dimension(n)
    if i < 0:
        raise RangeError(f"degree must be >= 0, got {i}")
    if order < 0:
        raise RangeError(f"derivative order must be >= 0, got {order}")
    _check_degree(i)
    t = np.asarray(t, dtype=float)
    if order > i:
        return np.zeros_like(t) if t.ndim else 0.0
    # d[m] holds the m-th derivative of P_deg at t as deg advances
    one, zero = np.ones_like(t), np.zeros_like(t)
    prev = [one] + [zero] * order          # P_0 and derivatives
    if i == 0:
        out = prev[order]
        return out if t.ndim else float(out)
    cur = [t, one] + [zero] * max(order - 1, 0)  # P_1 = t
    cur = cur[: order + 1]
    for deg in range(1, i):
        nxt = []
        a, b = 2 * deg + n - 2, deg + n - 2
        for m in range(order + 1):
            term = t * cur[m] + (m * cur[m - 1] if m >= 1 else 0.0)
            nxt.append((a * term - deg * prev[m]) / b)
        prev, cur = cur, nxt
    out = cur[order]
    return out if t.ndim else float(out)


def gegenbauer_poly(n: int, i: int) -> Poly:
    """Monomial-basis coefficients of P_i for dimension n."""
    _check_dimension(n)
    _check_degree(i)
    if i == 0:
        return Poly([1.0])
    prev, cur = Poly([1.0]), Poly([0.0, 1.0])
    for deg in range(1, i):
        a, b = 2 * deg + n - 2, deg + n - 2
        shifted = npoly.polymul([0.0, 1.0], cur.coeffs)
        cur, prev = Poly(npoly.polysub(a / b * np.asarray(shifted), deg / b * np.asarray(prev.coeffs))), cur
    return cur


def jacobi_eval(alpha: float, beta: float, k: int, t):
    """Standard Jacobi polynomial P_k^(alpha,beta), P_k(1) = binom(k+alpha, k)."""
    if alpha <= -1 or beta <= -1:
        raise RangeError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    if k < 0:
        raise RangeError(f"degree must be >= 0, got {k}")
    return special.eval_jacobi(k, alpha, beta, np.asarray(t, dtype=float))


def jacobi_derivative(alpha: float, beta: float, k: int, t):
    if k == 0:
        t = np.asarray(t, dtype=float)
        return np.zeros_like(t)
    return 0.5 * (k + alpha + beta + 1) * jacobi_eval(alpha + 1, beta + 1, k - 1, t)


_BISECT_WIDTH = 1e-6
_NEWTON_TOL = 1e-13


def _newton_polish(f, df, x0, lo, hi):
    x = x0
    for _ in range(100):
        fx = f(x)
        d = df(x)
        if d == 0.0:
            break
        step = fx / d
        xn = x - step
        if not (lo - 1e-12 <= xn <= hi + 1e-12):
            xn = 0.5 * (x + (hi if step < 0 else lo))
        if abs(xn - x) < _NEWTON_TOL:
            return xn
        x = xn
    if abs(f(x)) < 1e-10:
        return x
    raise ConvergenceError(f"Newton polish failed near {x0}")


def jacobi_zeros(alpha: float, beta: float, k: int) -> np.ndarray:
    """All k zeros of P_k^(alpha,beta), ascending, via interlacing brackets."""
    if alpha <= -1 or beta <= -1:
        raise RangeError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")
    zeros = np.empty(0)
    for deg in range(1, k + 1):
        f = lambda t, d=deg: float(jacobi_eval(alpha, beta, d, t))
        df = lambda t, d=deg: float(jacobi_derivative(alpha, beta, d, t))
        brackets = np.concatenate(([-1.0], zeros, [1.0]))
        new = []
        for lo, hi in zip(brackets[:-1], brackets[1:]):
            a, b = lo + 1e-14, hi - 1e-14
            fa, fb = f(a), f(b)
            if fa * fb > 0:
                raise ConvergenceError(
                    f"interlacing bracket [{lo}, {hi}] lost the zero of degree {deg}"
                )
            x = brentq(f, a, b, xtol=_BISECT_WIDTH)
            new.append(_newton_polish(f, df, x, lo, hi))
        zeros = np.array(new)
    return zeros


def adjacent_largest_zero(n: int, a: int, b: int, k: int) -> float:
    """Largest zero t_k^{a,b} of the adjacent Jacobi polynomial; t_0^{1,1} = -1."""
    if a not in (0, 1) or b not in (0, 1):
        raise RangeError(f"a, b must be 0 or 1, got ({a}, {b})")
    if k == 0:
        if (a, b) == (1, 1):
            return -1.0
        raise RangeError("k = 0 is only defined for (a, b) = (1, 1)")
    _check_dimension(n)
    alpha = a + (n - 3) / 2.0
    beta = b + (n - 3) / 2.0
    return float(jacobi_zeros(alpha, beta, k)[-1])


def weight_moment(n: int, j: int) -> float:
    """Exact monomial moment of the normalized sphere weight (Beta function)."""
    if j % 2 == 1:
        return 0.0
    return float(special.beta((j + 1) / 2.0, (n - 1) / 2.0) / special.beta(0.5, (n - 1) / 2.0))


@dataclass(frozen=True)
class WeightRule:
    """Gauss rule for the normalized weight (1-t^2)^((n-3)/2); mass 1."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def weight_rule(n: int, m: int) -> WeightRule:
    """m-point Gauss rule, exact on polynomials of degree <= 2m-1."""
    _check_dimension(n)
    if m < 1:
        raise RangeError(f"node count must be >= 1, got {m}")
    lam = (n - 3) / 2.0
    nodes = jacobi_zeros(lam, lam, m)
    # collocation on the Gegenbauer basis: sum_i w_i P_j(x_i) = delta_j0
    V = np.array([gegenbauer_eval(n, j, nodes) for j in range(m)])
    rhs = np.zeros(m)
    rhs[0] = 1.0
    weights = np.linalg.solve(V, rhs)
    if np.any(weights <= 0):
        raise ConvergenceError("nonpositive Gauss weight; node solve failed")
    return WeightRule(n=n, nodes=nodes, weights=weights)


@dataclass(frozen=True)
class GegExpansion:
    """Coefficients of a polynomial over the Gegenbauer basis for dimension n."""

    n: int
    coeffs: tuple[float, ...]

    def reconstruct(self) -> Poly:
        out = Poly([0.0])
        for i, c in enumerate(self.coeffs):
            if c != 0.0:
                out = out + c * gegenbauer_poly(self.n, i)
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for i, c in enumerate(self.coeffs):
            if c != 0.0:
                acc = acc + c * gegenbauer_eval(self.n, i, t)
        return acc

    def to_json(self) -> list[float]:
        return list(self.coeffs)


def gegenbauer_norm2(n: int, i: int, rule: WeightRule | None = None) -> float:
    """Weighted L2 norm squared of P_i under the normalized weight."""
    if rule is None or len(rule.nodes) * 2 - 1 < 2 * i:
        rule = weight_rule(n, i + 1)
    return rule.integrate(lambda t: gegenbauer_eval(n, i, t) ** 2)


def gegenbauer_expand(n: int, p: Poly) -> GegExpansion:
    """Exact-degree expansion of p over the Gegenbauer basis by projection."""
    _check_dimension(n)
    d = p.degree
    rule = weight_rule(n, d + 1)
    coeffs = []
    for i in range(d + 1):
        num = rule.integrate(lambda t: p(t) * gegenbauer_eval(n, i, t))
        den = gegenbauer_norm2(n, i, rule)
        coeffs.append(num / den)
    return GegExpansion(n=n, coeffs=tuple(coeffs))
