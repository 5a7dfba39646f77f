"""Refinements of Jensen's inequality as pure functions returning BoundReport.

Conventions
-----------
``target`` says what a report bounds or estimates: ``"gap"`` for
J(phi, X) = E[phi(X)] - phi(E[X]), ``"expectation"`` for E[phi(X)] itself.
``certified`` is False whenever an input came from a grid search rather than
an analytic endpoint, or when an unbounded support had to be truncated.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .distributions import Distribution, PartitionSpec, SupportInterval
from .errors import DomainMismatch, NonConvex, NonFiniteMoment
from .functions import (GRID_POINTS, SAFETY_MARGIN, PhiModel, deriv_range,
                        hessian_range)
from .quadrature import integrate

KERNEL_GRID = 10_000


@dataclass(frozen=True)
class BoundReport:
    method: str
    target: str
    lower: float | None = None
    upper: float | None = None
    estimate: float | None = None
    error_radius: float | None = None
    certified: bool = True
    applicable: bool = True
    note: str = ""
    inputs: dict = field(default_factory=dict)
    terms: tuple = ()

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"{self.method}: lower {self.lower} exceeds upper {self.upper}")
        if self.error_radius is not None and not self.error_radius >= 0:
            raise ValueError(f"{self.method}: negative error radius")

    def contains(self, truth: float, slack: float = 0.0) -> bool:
        """Does the report's claim hold for ``truth``?"""
        ok = True
        if self.lower is not None:
            ok &= truth >= self.lower - slack
        if self.upper is not None:
            ok &= truth <= self.upper + slack
        if self.estimate is not None and self.error_radius is not None:
            ok &= abs(truth - self.estimate) <= self.error_radius + slack
        return bool(ok)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["terms"] = list(self.terms)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        d = dict(d)
        d["terms"] = tuple(d.get("terms", ()))
        return cls(**d)


def not_applicable(method: str, target: str, reason: str) -> BoundReport:
    return BoundReport(method, target, certified=False, applicable=False, note=reason)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _support(dist: Distribution) -> tuple[SupportInterval, bool]:
    """Effective (finite) support and whether it is exact (no truncation)."""
    return dist.effective_support(), dist.support.bounded


def _half(coef: float, var: float) -> float:
    # coef may be infinite; a zero variance still makes the term vanish
    return 0.0 if var == 0 else 0.5 * coef * var


def _times(coef: float, moment: float) -> float:
    return 0.0 if moment == 0 else coef * moment


def _moments(dist: Distribution):
    m = dist.moments()
    if not all(math.isfinite(v) for v in (m.mu, m.sigma2)):
        raise NonFiniteMoment("mean or variance diverges")
    return m


def _convex_orientation(phi: PhiModel) -> tuple[PhiModel, float]:
    if phi.convexity == "convex":
        return phi, 1.0
    if phi.convexity == "concave":
        return phi.negated(), -1.0
    raise NonConvex(f"{phi.label} is neither convex nor concave")


def _flip(report: BoundReport, sign: float) -> BoundReport:
    if sign > 0:
        return report
    neg = lambda v: None if v is None else -v
    return replace(report, lower=neg(report.upper), upper=neg(report.lower),
                   estimate=neg(report.estimate))


# ---------------------------------------------------------------------------
# classical and variance bounds
# ---------------------------------------------------------------------------


def jensen_bound(phi: PhiModel, dist: Distribution) -> BoundReport:
    """phi(mu): a lower bound on E[phi(X)] for convex phi, upper for concave."""
    mu = _moments(dist).mu
    v = float(phi(mu))
    if phi.convexity == "convex":
        return BoundReport("jensen", "expectation", lower=v, estimate=v)
    if phi.convexity == "concave":
        return BoundReport("jensen", "expectation", upper=v, estimate=v)
    return BoundReport("jensen", "expectation", estimate=v, certified=False,
                       note="phi is neither convex nor concave; phi(mu) is only an estimate")


def variance_sandwich(phi: PhiModel, dist: Distribution) -> BoundReport:
    """m sigma^2 / 2 <= J <= M sigma^2 / 2 with m <= phi'' <= M on the support."""
    m = _moments(dist)
    iv, exact = _support(dist)
    hr = hessian_range(phi, iv)
    return BoundReport(
        "variance_sandwich", "gap",
        lower=_half(hr.m, m.sigma2), upper=_half(hr.M, m.sigma2),
        certified=hr.certified and exact,
        inputs={"m": hr.m, "M": hr.M, "sigma2": m.sigma2},
    )


def partitioned_sandwich(phi: PhiModel, dist: Distribution,
                         part: PartitionSpec | Sequence[float]) -> BoundReport:
    """Within-cell curvature bounds plus the between-cell term phi(mu_k) - phi(mu)."""
    if not isinstance(part, PartitionSpec):
        part = PartitionSpec(tuple(part))
    m = _moments(dist)
    iv, exact = _support(dist)
    phi_mu = float(phi(m.mu))
    lows, highs, cells = [], [], []
    certified = exact
    for cell in dist.cell_stats(part):
        if not cell.defined:
            cells.append({"lo": cell.lo, "hi": cell.hi, "p": cell.p, "empty": True})
            continue
        lo, hi = max(cell.lo, iv.lo), min(cell.hi, iv.hi)
        hr = hessian_range(phi, (lo, hi))
        certified &= hr.certified
        between = float(phi(cell.mu)) - phi_mu
        lows.append(cell.p * (_half(hr.m, cell.sigma2) + between))
        highs.append(cell.p * (_half(hr.M, cell.sigma2) + between))
        cells.append({"lo": cell.lo, "hi": cell.hi, "p": cell.p, "mu": cell.mu,
                      "sigma2": cell.sigma2, "m": hr.m, "M": hr.M})
    return BoundReport(
        "partitioned_sandwich", "gap",
        lower=math.fsum(lows), upper=math.fsum(highs), certified=certified,
        inputs={"cuts": list(part.cut_points), "cells": cells},
    )


def gruss_second_order(phi: PhiModel, dist: Distribution) -> BoundReport:
    """J ~ phi''(mu) sigma^2 / 2 with radius ||phi'''|| E|X - mu|^3 / 6."""
    m = _moments(dist)
    abs3 = m.abs_central[3]
    if not math.isfinite(abs3):
        raise NonFiniteMoment("E|X - mu|^3 diverges")
    iv, exact = _support(dist)
    r3 = deriv_range(phi, 3, iv)
    sup3 = max(abs(r3.m), abs(r3.M))
    return BoundReport(
        "gruss_second_order", "gap",
        estimate=_half(float(phi.deriv(2, m.mu)), m.sigma2),
        error_radius=_times(sup3, abs3) / 6.0,
        certified=r3.certified and exact,
        inputs={"sup_phi3": sup3, "abs_central3": abs3, "sigma2": m.sigma2},
    )


# ---------------------------------------------------------------------------
# Green-kernel representation
# ---------------------------------------------------------------------------


def green_kernel(dist: Distribution, t):
    """K(t) = (E|X - t| - |mu - t|) / 2, vectorised in t.

    Equals E[(t - X)+] left of the mean and E[(X - t)+] right of it, which is
    how it is evaluated (no cancellation between the two absolute values).
    """
    mu = dist.mean
    if not math.isfinite(mu):
        raise NonFiniteMoment("mean diverges")
    t_arr = np.asarray(t, dtype=float)
    k = np.where(t_arr <= mu, dist.lower_partial(t_arr), dist.upper_partial(t_arr))
    return float(k) if np.ndim(k) == 0 else k


def green_gap(phi: PhiModel, dist: Distribution, tol: float = 1e-11) -> BoundReport:
    """J = int phi''(t) K(t) dt over the (effective) support."""
    iv, exact = _support(dist)
    if iv.lo == iv.hi:
        return BoundReport("green_gap", "gap", estimate=0.0, error_radius=0.0)
    hessian_range(phi, iv)  # domain check

    def integrand(t):
        return phi.deriv(2, t) * green_kernel(dist, t)

    r = integrate(integrand, iv.lo, iv.hi, breakpoints=dist.breakpoints(), rtol=1e-10, atol=tol)
    return BoundReport("green_gap", "gap", estimate=r.value, error_radius=r.error,
                       certified=exact, inputs={"panels": r.panels})


def green_gruss_refinement(phi: PhiModel, dist: Distribution) -> BoundReport:
    """Average-curvature estimate of J with a Grüss radius on the kernel covariance."""
    if not dist.support.bounded:
        raise DomainMismatch("unbounded support; pass dist.truncated() explicitly")
    a, b = dist.support
    m = _moments(dist)
    if a == b:
        return BoundReport("green_gruss", "gap", estimate=0.0, error_radius=0.0)
    hr = hessian_range(phi, (a, b))
    width = b - a
    mean_curv = (float(phi.deriv(1, b)) - float(phi.deriv(1, a))) / width
    if not math.isfinite(mean_curv):
        raise NonFiniteMoment(f"phi'' of {phi.label} is not integrable on [{a}, {b}]")
    # int_a^b K = sigma^2 / 2 whenever X lives in [a, b]
    mean_kernel = 0.5 * m.sigma2 / width
    grid = np.append(np.linspace(a, b, KERNEL_GRID), m.mu)
    k_max = float(np.max(green_kernel(dist, grid)))
    spread = hr.M - hr.m
    radius = 0.0 if spread == 0 or k_max == 0 else 0.25 * width * k_max * spread
    return BoundReport(
        "green_gruss", "gap",
        estimate=width * mean_kernel * mean_curv, error_radius=radius,
        certified=hr.certified,
        inputs={"mean_kernel": mean_kernel, "mean_curvature": mean_curv,
                "k_max": k_max, "k_min": 0.0, "m": hr.m, "M": hr.M},
    )


# ---------------------------------------------------------------------------
# Chebysev functional
# ---------------------------------------------------------------------------


class ChebysevResult(NamedTuple):
    T: float
    gruss_bound: float
    pre_gruss_bound: float
    certified: bool


def _value_range(f, a: float, b: float) -> tuple[float, float, bool]:
    if isinstance(f, PhiModel):
        r = deriv_range(f, 0, (a, b))
        return r.m, r.M, r.certified
    if isinstance(f, np.polynomial.Polynomial):
        crit = [z.real for z in f.deriv().roots() if abs(z.imag) < 1e-12 and a < z.real < b]
        v = f(np.array([a, b, *crit]))
        return float(v.min()), float(v.max()), True
    v = np.asarray(f(np.linspace(a, b, GRID_POINTS)), dtype=float)
    lo, hi = float(v.min()), float(v.max())
    pad = SAFETY_MARGIN * max(abs(lo), abs(hi), hi - lo)
    return lo - pad, hi + pad, False


def chebysev_gruss(f: Callable, g: Callable, interval) -> ChebysevResult:
    """T(f, g) on [a, b] with its Grüss and pre-Grüss bounds."""
    a, b = (interval.lo, interval.hi) if isinstance(interval, SupportInterval) else interval
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DomainMismatch("Chebysev functional needs a finite interval a < b")
    w = b - a

    def avg(h):
        return integrate(h, a, b, rtol=1e-12, atol=1e-15).value / w

    fbar, gbar = avg(f), avg(g)
    fc = lambda x: np.asarray(f(x), dtype=float) - fbar
    gc = lambda x: np.asarray(g(x), dtype=float) - gbar
    t_fg = avg(lambda x: fc(x) * gc(x))
    t_ff = max(avg(lambda x: fc(x) ** 2), 0.0)
    t_gg = max(avg(lambda x: gc(x) ** 2), 0.0)
    flo, fhi, fcert = _value_range(f, a, b)
    glo, ghi, gcert = _value_range(g, a, b)
    return ChebysevResult(t_fg, 0.25 * (fhi - flo) * (ghi - glo), math.sqrt(t_ff * t_gg),
                          fcert and gcert)


# ---------------------------------------------------------------------------
# Fourth-order moment expansion
# ---------------------------------------------------------------------------


def _expansion_terms(phi: PhiModel, m) -> list[float]:
    return [
        float(phi(m.mu)),
        _half(float(phi.deriv(2, m.mu)), m.sigma2),
        _times(float(phi.deriv(3, m.mu)), m.central(3)) / 6.0,
        _times(float(phi.deriv(4, m.mu)), m.central(4)) / 24.0,
    ]


def fourth_order(phi: PhiModel, dist: Distribution) -> BoundReport:
    """E[phi(X)] to fourth order in the central moments, radius ||phi^(5)|| E|X-mu|^5 / 120."""
    m = _moments(dist)
    abs5 = m.abs_central[5]
    if not (math.isfinite(abs5) and math.isfinite(m.gamma4)):
        raise NonFiniteMoment("fifth absolute central moment diverges")
    iv, exact = _support(dist)
    r5 = deriv_range(phi, 5, iv)
    sup5 = max(abs(r5.m), abs(r5.M))
    terms = _expansion_terms(phi, m)
    return BoundReport(
        "fourth_order", "expectation",
        estimate=math.fsum(terms), error_radius=_times(sup5, abs5) / 120.0,
        certified=r5.certified and exact,
        inputs={"mu": m.mu, "sigma2": m.sigma2, "gamma3": m.gamma3, "gamma4": m.gamma4,
                "sup_phi5": sup5, "abs_central5": abs5},
        terms=tuple(terms),
    )


def signed_refinement(phi: PhiModel, dist: Distribution) -> BoundReport:
    """Skewness-corrected lower bound on E[phi(X)] when the sign conditions hold.

    Certified only when the kurtosis term alone dominates the fifth-order
    remainder radius, which makes dropping both of them provably safe.
    """
    m = _moments(dist)
    d3, d4 = float(phi.deriv(3, m.mu)), float(phi.deriv(4, m.mu))
    if not (d3 * m.gamma3 >= 0 and d4 * m.gamma4 >= 0):
        return not_applicable(
            "signed_refinement", "expectation",
            f"sign condition fails: phi'''(mu)*gamma3={d3 * m.gamma3:.3g}, "
            f"phi''''(mu)*gamma4={d4 * m.gamma4:.3g}",
        )
    full = fourth_order(phi, dist)
    terms = full.terms
    lower = math.fsum(terms[:3])
    return BoundReport(
        "signed_refinement", "expectation", lower=lower,
        certified=full.certified and terms[3] >= full.error_radius,
        inputs={"kurtosis_term": terms[3], "remainder_radius": full.error_radius},
        terms=terms[:3],
    )


# ---------------------------------------------------------------------------
# Tangency and Jensen-Mercer
# ---------------------------------------------------------------------------


def tangent_bound(phi: PhiModel, dist: Distribution, c: float) -> float:
    """phi(c) + phi'(c)(mu - c): expectation of the tangent line at c."""
    if not phi.domain.lo < c < phi.domain.hi:
        raise DomainMismatch(f"c={c} outside the domain of {phi.label}")
    mu = _moments(dist).mu
    return float(phi(c)) + float(phi.deriv(1, c)) * (mu - c)


class TangencyResult(NamedTuple):
    c_star: float
    bound: float


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def optimize_tangency(phi: PhiModel, dist: Distribution,
                      strong_m: float | None = None) -> TangencyResult:
    """Best tangent-line (or strongly convex parabola) lower bound on E[phi(X)].

    Golden-section search over the effective support.
    """
    if phi.convexity != "convex":
        raise NonConvex(f"{phi.label} is not convex")
    m = _moments(dist)
    iv, _ = _support(dist)
    lo, hi = max(iv.lo, phi.domain.lo), min(iv.hi, phi.domain.hi)
    extra = 0.0 if strong_m is None else float(strong_m)

    def objective(c: float) -> float:
        base = float(phi(c)) + float(phi.deriv(1, c)) * (m.mu - c)
        return base + 0.5 * extra * (m.sigma2 + (m.mu - c) ** 2)

    if lo == hi:
        return TangencyResult(lo, objective(lo))
    c_star = _golden_max(objective, lo, hi, xtol=1e-12 * max(1.0, hi - lo))
    return TangencyResult(c_star, objective(c_star))


class MercerResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def jensen_mercer(phi: PhiModel, a: float, b: float, points: Sequence[float],
                  weights: Sequence[float]) -> MercerResult:
    """phi(a + b - sum w x) <= phi(a) + phi(b) - sum w phi(x) for convex phi on [a, b]."""
    x = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    if x.shape != w.shape or x.ndim != 1 or len(x) == 0:
        raise ValueError("points and weights must be equal-length 1-d sequences")
    if np.any(w < 0) or abs(math.fsum(w.tolist()) - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    if np.any(x < a) or np.any(x > b):
        raise DomainMismatch("a point lies outside [a, b]")
    if a < phi.domain.lo or b > phi.domain.hi:
        raise DomainMismatch(f"[{a}, {b}] leaves the domain of {phi.label}")
    lhs = float(phi(a + b - math.fsum((w * x).tolist())))
    rhs = float(phi(a)) + float(phi(b)) - math.fsum((w * np.asarray(phi(x))).tolist())
    return MercerResult(lhs, rhs, lhs <= rhs + 1e-12)


# ---------------------------------------------------------------------------
# Covariance and MGF
# ---------------------------------------------------------------------------


def covariance_bound(phi: PhiModel, dist: Distribution) -> BoundReport:
    """inf(phi'') sigma^2 / 2 <= J <= Cov(X, phi'(X)) for convex phi.

    Concave phi are negated, bounded, and flipped back.
    """
    psi, sign = _convex_orientation(phi)
    m = _moments(dist)
    iv, exact = _support(dist)
    hr = hessian_range(psi, iv)
    if m.sigma2 == 0:
        cov, err = 0.0, 0.0
    else:
        r = dist.expect(lambda x: (x - m.mu) * psi.deriv(1, x))
        cov, err = r.value, r.error
    if not math.isfinite(cov):
        raise NonFiniteMoment(f"Cov(X, phi'(X)) diverges for {phi.label}")
    report = BoundReport(
        "covariance", "gap", lower=_half(hr.m, m.sigma2), upper=cov,
        certified=hr.certified and exact,
        inputs={"inf_phi2": hr.m, "sigma2": m.sigma2, "cov_x_dphi": cov, "quad_error": err},
    )
    return _flip(report, sign)


def mgf_bounds(dist: Distribution, t: float) -> BoundReport:
    """Curvature sandwich for E[exp(tX)] on a bounded support [a, b]."""
    if not dist.support.bounded:
        raise DomainMismatch("MGF bounds need a bounded support; pass dist.truncated()")
    a, b = dist.support
    m = _moments(dist)
    base = math.exp(t * m.mu)
    lo_curv, hi_curv = sorted((t * t * math.exp(t * a), t * t * math.exp(t * b)))
    return BoundReport(
        "mgf", "expectation",
        lower=base + _half(lo_curv, m.sigma2), upper=base + _half(hi_curv, m.sigma2),
        inputs={"t": t, "a": a, "b": b, "mu": m.mu, "sigma2": m.sigma2},
    )
