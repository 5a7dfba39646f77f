"""Smooth scalar functions with closed-form derivative stacks.

Each catalog entry knows its k-th derivative for every k >= 0, so the
monotonicity test used to certify derivative ranges (sign of the next
derivative) is always available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import SupportInterval
from .errors import DomainMismatch, SpecParseError

GRID_POINTS = 4097
SAFETY_MARGIN = 1e-6


@dataclass(frozen=True)
class PhiModel:
    """A scalar function with derivatives of all orders.

    ``domain`` is the open interval on which the function is smooth; ranges
    and sup-norms may be asked for on its closure, where derivatives can be
    infinite.
    """

    name: str
    params: tuple
    domain: SupportInterval
    convexity: str
    derivative: Callable[[int, np.ndarray], np.ndarray] = field(compare=False, repr=False)

    def deriv(self, k: int, x):
        """k-th derivative, vectorised in x (k = 0 is the function itself)."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self.derivative(k, np.asarray(x, dtype=float))
        return out if np.ndim(out) else float(out)

    def __call__(self, x):
        return self.deriv(0, x)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.params)

    def negated(self) -> "PhiModel":
        flip = {"convex": "concave", "concave": "convex"}.get(self.convexity, self.convexity)
        inner = self.derivative
        return PhiModel("-" + self.name, self.params, self.domain, flip,
                        lambda k, x: -inner(k, x))


@dataclass(frozen=True)
class HessianRange:
    m: float
    M: float
    certified: bool


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_REAL_LINE = SupportInterval(-math.inf, math.inf)
_POSITIVE = SupportInterval(0.0, math.inf)


def exp_scaled(t: float = 1.0) -> PhiModel:
    """x -> exp(t x)."""
    t = float(t)
    return PhiModel("exp_scaled", (("t", t),), _REAL_LINE, "convex",
                    lambda k, x: t**k * np.exp(t * x))


def neg_exp() -> PhiModel:
    """x -> exp(-x)."""
    return PhiModel("neg_exp", (), _REAL_LINE, "convex",
                    lambda k, x: (-1.0) ** k * np.exp(-x))


def neg_log() -> PhiModel:
    """y -> -ln y on (0, inf)."""

    def d(k, y):
        if k == 0:
            return -np.log(y)
        return (-1.0) ** k * math.factorial(k - 1) / y**k

    return PhiModel("neg_log", (), _POSITIVE, "convex", d)


def log1p_snr(rho: float = 1.0) -> PhiModel:
    """x -> ln(1 + rho x) on (-1/rho, inf); concave."""
    rho = float(rho)
    if not rho > 0:
        raise ValueError("rho must be positive")

    def d(k, x):
        if k == 0:
            return np.log1p(rho * x)
        return (-1.0) ** (k - 1) * math.factorial(k - 1) * rho**k / (1.0 + rho * x) ** k

    return PhiModel("log1p", (("rho", rho),), SupportInterval(-1.0 / rho, math.inf), "concave", d)


def square() -> PhiModel:
    """x -> x^2."""

    def d(k, x):
        if k == 0:
            return x * x
        if k == 1:
            return 2.0 * x
        if k == 2:
            return np.full_like(x, 2.0)
        return np.zeros_like(x)

    return PhiModel("square", (), _REAL_LINE, "convex", d)


def xlogx() -> PhiModel:
    """x -> x ln x on (0, inf), extended by 0 at the origin."""

    def d(k, x):
        if k == 0:
            return np.where(x == 0, 0.0, x * np.log(np.where(x == 0, 1.0, x)))
        if k == 1:
            return np.log(x) + 1.0
        # x^-1, -x^-2, 2 x^-3, -6 x^-4, ...
        return (-1.0) ** k * math.factorial(k - 2) / x ** (k - 1)

    return PhiModel("xlogx", (), _POSITIVE, "convex", d)


def reciprocal() -> PhiModel:
    """x -> 1/x on (0, inf)."""
    return PhiModel("reciprocal", (), _POSITIVE, "convex",
                    lambda k, x: (-1.0) ** k * math.factorial(k) / x ** (k + 1))


_BUILDERS = {
    "exp_scaled": (exp_scaled, ("t",)),
    "neg_exp": (neg_exp, ()),
    "neg_log": (neg_log, ()),
    "log1p": (log1p_snr, ("rho",)),
    "log1p_snr": (log1p_snr, ("rho",)),
    "square": (square, ()),
    "xlogx": (xlogx, ()),
    "reciprocal": (reciprocal, ()),
}


def builtin_catalog() -> list[PhiModel]:
    """One instance of every catalog function, with default parameters."""
    return [exp_scaled(1.0), neg_exp(), neg_log(), log1p_snr(1.0), square(), xlogx(), reciprocal()]


def parse_phi(spec: str) -> PhiModel:
    """Parse ``name`` or ``name:key=value`` (e.g. ``log1p:rho=10``)."""
    name, _, args = spec.strip().partition(":")
    if name not in _BUILDERS:
        raise SpecParseError(f"unknown function {name!r}; choose from {sorted(_BUILDERS)}")
    builder, allowed = _BUILDERS[name]
    kwargs = {}
    for item in filter(None, (a.strip() for a in args.split(","))):
        key, eq, value = item.partition("=")
        if not eq or key not in allowed:
            raise SpecParseError(f"bad parameter {item!r} for {name}")
        try:
            kwargs[key] = float(value)
        except ValueError as exc:
            raise SpecParseError(f"bad value in {item!r}") from exc
    try:
        return builder(**kwargs)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Derivative ranges
# ---------------------------------------------------------------------------


def _as_interval(interval) -> SupportInterval:
    if isinstance(interval, SupportInterval):
        return interval
    lo, hi = interval
    return SupportInterval(float(lo), float(hi))


def _check_inside(phi: PhiModel, iv: SupportInterval) -> None:
    if not (iv.bounded):
        raise DomainMismatch(f"interval [{iv.lo}, {iv.hi}] must be finite (truncate first)")
    if iv.lo < phi.domain.lo or iv.hi > phi.domain.hi:
        raise DomainMismatch(
            f"[{iv.lo}, {iv.hi}] leaves the domain ({phi.domain.lo}, {phi.domain.hi}) of {phi.name}"
        )


def deriv_range(phi: PhiModel, k: int, interval) -> HessianRange:
    """Range of the k-th derivative over a closed interval.

    When the (k+1)-th derivative keeps one sign on the probe grid the k-th
    is monotone and the endpoint values are returned (certified).  Otherwise
    the grid min/max is widened by a relative safety margin and marked
    uncertified.
    """
    iv = _as_interval(interval)
    _check_inside(phi, iv)
    if iv.lo == iv.hi:
        v = phi.deriv(k, iv.lo)
        return HessianRange(v, v, True)
    grid = np.linspace(iv.lo, iv.hi, GRID_POINTS)
    slope = np.asarray(phi.deriv(k + 1, grid))
    finite = slope[np.isfinite(slope)]
    if np.all(finite >= 0) or np.all(finite <= 0):
        ends = np.array([phi.deriv(k, iv.lo), phi.deriv(k, iv.hi)], dtype=float)
        ends = np.where(np.isnan(ends), _limit_at(phi, k, iv), ends)
        return HessianRange(float(ends.min()), float(ends.max()), True)
    vals = np.asarray(phi.deriv(k, grid))
    lo, hi = float(np.nanmin(vals)), float(np.nanmax(vals))
    pad = SAFETY_MARGIN * max(abs(lo), abs(hi), hi - lo)
    return HessianRange(lo - pad, hi + pad, False)


def _limit_at(phi, k, iv):
    # nan at an endpoint comes from 0 * inf type forms; approach from inside
    eps = 1e-12 * max(1.0, iv.width)
    return np.array([phi.deriv(k, iv.lo + eps), phi.deriv(k, iv.hi - eps)], dtype=float)


def hessian_range(phi: PhiModel, interval) -> HessianRange:
    """(m, M) with m <= phi'' <= M on the interval."""
    return deriv_range(phi, 2, interval)


def deriv_sup_norm(phi: PhiModel, order: int, interval) -> float:
    """sup |phi^(order)| over the interval."""
    r = deriv_range(phi, order, interval)
    return max(abs(r.m), abs(r.M))
