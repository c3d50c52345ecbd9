"""Potential functions h(t) on [-1, 1) with derivative access.

All evaluators accept scalars or numpy arrays. Built-in families (Riesz,
log, Gauss, polynomial) have closed-form derivatives of every order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError
from .orthopoly import Poly

# additive constant applied to the log kernel so h(-1) = 0 (the raw kernel
# -(1/2)log(2(1-t)) is negative near t = -1); shifts every energy by
# N(N-1)*log(2), reported via the potential's params
LOG_OFFSET = math.log(2.0)


@dataclass(frozen=True)
class Potential:
    """Potential h with derivatives up to max_order (None = unbounded)."""

    name: str
    params: dict = field(default_factory=dict)
    max_order: int | None = None
    _derivative: callable = None

    def eval(self, t):
        return self._derivative(np.asarray(t, dtype=float), 0)

    def derivative(self, t, order: int):
        if order < 0:
            raise RangeError(f"derivative order must be >= 0, got {order}")
        if self.max_order is not None and order > self.max_order:
            raise RangeError(f"{self.name} supports derivatives up to order {self.max_order}")
        return self._derivative(np.asarray(t, dtype=float), order)

    def __call__(self, t):
        return self.eval(t)

    def spec_string(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}:{inner}"


def make_riesz(s: float) -> Potential:
    """h(t) = (2(1-t))^(-s/2), the Riesz s-potential in the inner product."""
    if s <= 0:
        raise RangeError(f"Riesz exponent must be positive, got {s}")

    def deriv(t, order):
        # each differentiation of (1-t)^(-s/2) brings down (s/2 + j)
        factor = 2.0 ** (-s / 2.0) * math.prod(s / 2.0 + j for j in range(order))
        return factor * (1.0 - t) ** (-s / 2.0 - order)

    return Potential(name="riesz", params={"s": s}, _derivative=deriv)


def make_log() -> Potential:
    """h(t) = (1/2) log(2/(1-t)); the log kernel shifted so h(-1) = 0."""

    def deriv(t, order):
        if order == 0:
            return 0.5 * np.log(2.0 / (1.0 - t))
        return 0.5 * math.factorial(order - 1) * (1.0 - t) ** (-order)

    return Potential(name="log", params={"offset": LOG_OFFSET}, _derivative=deriv)


def make_gauss(c: float) -> Potential:
    """h(t) = exp(c t)."""
    if c <= 0:
        raise RangeError(f"Gaussian parameter must be positive, got {c}")

    def deriv(t, order):
        return c**order * np.exp(c * t)

    return Potential(name="gauss", params={"c": c}, _derivative=deriv)


def make_poly(p: Poly) -> Potential:
    """Polynomial potential; flags negativity on [-1, 1) without rejecting."""
    grid = np.linspace(-1.0, 1.0 - 1e-9, 2001)
    negative = bool(np.min(p(grid)) < 0)

    def deriv(t, order):
        return p.deriv(order)(t) if order <= p.degree else np.zeros_like(t)

    return Potential(
        name="poly",
        params={"coeffs": list(p.coeffs), "negative_on_interval": negative},
        _derivative=deriv,
    )


def parse_potential(spec: str) -> Potential:
    """Parse CLI syntax: riesz:s=3, log, gauss:c=1, poly:1,0,2."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "riesz":
        kv = dict(item.split("=") for item in rest.split(",") if item)
        return make_riesz(float(kv["s"]))
    if name == "log":
        return make_log()
    if name == "gauss":
        kv = dict(item.split("=") for item in rest.split(",") if item)
        return make_gauss(float(kv["c"]))
    if name == "poly":
        coeffs = [float(x) for x in rest.split(",") if x.strip()]
        if not coeffs:
            raise RangeError("poly potential needs at least one coefficient")
        return make_poly(Poly(coeffs))
    raise RangeError(f"unknown potential spec {spec!r}")


@dataclass(frozen=True)
class MonotonicityReport:
    max_order: int
    grid_size: int
    min_per_order: tuple[float, ...]
    passes: bool

    def to_json(self) -> dict:
        return {
            "max_order": self.max_order,
            "grid_size": self.grid_size,
            "min_per_order": list(self.min_per_order),
            "passes_sampled_check": self.passes,
        }


def check_abs_monotone(p: Potential, max_order: int, grid_size: int = 2001) -> MonotonicityReport:
    """Sampled absolute-monotonicity check on [-1, 1 - 1e-6]; not a proof."""
    grid = np.linspace(-1.0, 1.0 - 1e-6, grid_size)
    mins = tuple(float(np.min(p.derivative(grid, m))) for m in range(max_order + 1))
    return MonotonicityReport(
        max_order=max_order,
        grid_size=grid_size,
        min_per_order=mins,
        passes=all(m >= 0.0 for m in mins),
    )
