"""Univariate probability laws and the moment queries the bounds need.

Every law answers three primitive questions: ``cdf(t)``, the lower partial
expectation ``E[(t - X)+]`` and the upper partial expectation ``E[(X - t)+]``.
Mean absolute deviations, the Green kernel and conditional cell statistics
are all built from those.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import NonFiniteMoment, SpecParseError
from .quadrature import integrate

TAIL_MASS = 1e-12
EMPTY_CELL_MASS = 1e-14


@dataclass(frozen=True)
class SupportInterval:
    """Closed hull of a law's support; endpoints may be infinite.

    ``lo == hi`` is only produced for a one-atom FiniteDiscrete law.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"support needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __iter__(self):
        return iter((self.lo, self.hi))


@dataclass(frozen=True)
class MomentSummary:
    mu: float
    sigma2: float
    gamma3: float
    gamma4: float
    abs_central: dict = field(default_factory=dict)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def central(self, k: int) -> float:
        """Signed central moment E[(X - mu)^k] for k <= 4."""
        if k == 0:
            return 1.0
        if k == 1:
            return 0.0
        if k == 2:
            return self.sigma2
        if k == 3:
            return self.gamma3 * self.sigma**3
        if k == 4:
            return self.gamma4 * self.sigma2**2
        raise ValueError("only central moments up to order 4 are stored")


@dataclass(frozen=True)
class PartitionSpec:
    cut_points: tuple = ()

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cut_points)
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing")
        object.__setattr__(self, "cut_points", cuts)

    def cells(self, support: SupportInterval) -> list[tuple[float, float]]:
        for c in self.cut_points:
            if not support.lo < c < support.hi:
                raise ValueError(f"cut point {c} is not interior to the support")
        edges = [support.lo, *self.cut_points, support.hi]
        return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class CellStats:
    lo: float
    hi: float
    p: float
    mu: float | None
    sigma2: float | None

    @property
    def defined(self) -> bool:
        return self.mu is not None




def _standardise(mu, var, c3, c4, abs_central) -> MomentSummary:
    var = max(var, 0.0)
    if var == 0.0:
        # a point mass; the (0, 1) convention keeps gamma4 >= gamma3^2 + 1
        return MomentSummary(mu, 0.0, 0.0, 1.0, abs_central)
    return MomentSummary(mu, var, c3 / var**1.5, c4 / var**2, abs_central)


class Distribution:
    """Base class for all laws.  Subclasses are frozen dataclasses."""

    #: True when the law has a Lebesgue density.
    has_density = True

    # -- primitives ---------------------------------------------------------
    @property
    def support(self) -> SupportInterval:
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def lower_partial(self, t):
        """E[(t - X)+], vectorised in t."""
        raise NotImplementedError

    def upper_partial(self, t):
        """E[(X - t)+], vectorised in t."""
        raise NotImplementedError

    def moments(self) -> MomentSummary:
        return _cached_moments(self)

    def _compute_moments(self) -> MomentSummary:
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def ppf(self, q: float) -> float:
        raise NotImplementedError

    # -- derived ------------------------------------------------------------
    @property
    def mean(self) -> float:
        return self.moments().mu

    def breakpoints(self) -> tuple:
        """Points where integrands built from this law may have kinks."""
        return (self.mean,)

    def effective_support(self) -> SupportInterval:
        """Support with infinite ends replaced by 1e-12 tail quantiles."""
        s = self.support
        lo = s.lo if math.isfinite(s.lo) else float(self.ppf(TAIL_MASS))
        hi = s.hi if math.isfinite(s.hi) else float(self.ppf(1.0 - TAIL_MASS))
        return SupportInterval(lo, hi)

    @property
    def density_singular(self) -> bool:
        """True when the density is unbounded at an endpoint of the support."""
        return False

    def expect(self, g: Callable, rtol: float = 1e-10, atol: float = 1e-13):
        """Quadrature of E[g(X)] against the density.  Returns QuadResult.

        Laws with an unbounded density are integrated in the quantile domain,
        E[g(X)] = int_0^1 g(F^-1(u)) du, where the integrand stays bounded.
        """
        s = self.support
        if self.density_singular and s.bounded:
            cuts = [float(self.cdf(b)) for b in self.breakpoints() if s.lo < b < s.hi]

            def in_u(u):
                with np.errstate(all="ignore"):
                    return np.asarray(g(self.ppf(u)), dtype=float)

            return integrate(in_u, 0.0, 1.0, breakpoints=cuts, rtol=rtol, atol=atol)
        eff = self.effective_support()

        def integrand(x):
            w = self.pdf(x)
            with np.errstate(all="ignore"):
                v = np.asarray(g(x), dtype=float) * w
            return np.where(w > 0, v, 0.0)

        return integrate(integrand, s.lo, s.hi,
                         breakpoints=(*self.breakpoints(), eff.lo, eff.hi),
                         rtol=rtol, atol=atol)

    def mean_abs_dev_at(self, t: float) -> float:
        """E|X - t|."""
        if not math.isfinite(t):
            raise ValueError("t must be finite")
        return float(self.lower_partial(t) + self.upper_partial(t))

    def abs_central_moment(self, k: float) -> float:
        """E|X - mu|^k by quadrature split at the mean."""
        mu = self.mean
        r = self.expect(lambda x: np.abs(x - mu) ** k)
        if not math.isfinite(r.value):
            raise NonFiniteMoment(f"E|X-mu|^{k} diverges")
        return r.value

    def truncated(self, mass: float = TAIL_MASS) -> "Distribution":
        """Condition an unbounded law on its effective support.

        Bounded laws are returned unchanged.
        """
        if self.support.bounded:
            return self
        s = self.support
        lo = s.lo if math.isfinite(s.lo) else float(self.ppf(mass))
        hi = s.hi if math.isfinite(s.hi) else float(self.ppf(1.0 - mass))
        return Truncated(self, lo, hi)

    def restrict(self, lo: float, hi: float) -> "Distribution":
        """Conditional law of X given lo <= X <= hi (used for partition cells)."""
        return Truncated(self, lo, hi)

    def cell_stats(self, part: PartitionSpec) -> list[CellStats]:
        out = []
        for lo, hi in part.cells(self.support):
            p = float(self.cdf(hi) - self.cdf(lo))
            if p < EMPTY_CELL_MASS:
                out.append(CellStats(lo, hi, p, None, None))
                continue
            m = self.restrict(lo, hi).moments()
            out.append(CellStats(lo, hi, p, m.mu, m.sigma2))
        return out

    def _abs_central_pair(self) -> dict:
        # requires a closed-form ``mean`` on the subclass (no recursion into moments)
        return {k: self.abs_central_moment(k) for k in (3, 5)}


# ---------------------------------------------------------------------------
# Analytic families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError("Uniform needs finite a < b")

    @property
    def support(self):
        return SupportInterval(self.a, self.b)

    @property
    def _w(self):
        return self.b - self.a

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / self._w, 0.0)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / self._w, 0.0, 1.0)

    def ppf(self, q):
        return self.a + q * self._w

    def lower_partial(self, t):
        t = np.asarray(t, dtype=float)
        mu = 0.5 * (self.a + self.b)
        inside = (t - self.a) ** 2 / (2 * self._w)
        return np.where(t <= self.a, 0.0, np.where(t >= self.b, t - mu, inside))

    def upper_partial(self, t):
        t = np.asarray(t, dtype=float)
        mu = 0.5 * (self.a + self.b)
        inside = (self.b - t) ** 2 / (2 * self._w)
        return np.where(t >= self.b, 0.0, np.where(t <= self.a, mu - t, inside))

    def _compute_moments(self):
        w = self._w
        return MomentSummary(
            mu=0.5 * (self.a + self.b),
            sigma2=w * w / 12.0,
            gamma3=0.0,
            gamma4=9.0 / 5.0,
            abs_central=self._abs_central_pair(),
        )

    def sample(self, rng, n):
        return rng.uniform(self.a, self.b, n)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("Exponential needs rate > 0")

    @property
    def support(self):
        return SupportInterval(0.0, math.inf)

    @property
    def mean(self):
        return 1.0 / self.rate

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore"):
            return np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0, 0.0, -np.expm1(-self.rate * np.maximum(x, 0.0)))

    def ppf(self, q):
        return -np.log1p(-np.asarray(q, dtype=float)) / self.rate

    def lower_partial(self, t):
        t = np.asarray(t, dtype=float)
        lam = self.rate
        tp = np.maximum(t, 0.0)
        return np.where(t <= 0, 0.0, (lam * tp + np.expm1(-lam * tp)) / lam)

    def upper_partial(self, t):
        t = np.asarray(t, dtype=float)
        lam = self.rate
        return np.where(t <= 0, 1.0 / lam - t, np.exp(-lam * np.maximum(t, 0.0)) / lam)

    def _compute_moments(self):
        return MomentSummary(
            mu=1.0 / self.rate,
            sigma2=1.0 / self.rate**2,
            gamma3=2.0,
            gamma4=9.0,
            abs_central=self._abs_central_pair(),
        )

    def sample(self, rng, n):
        return rng.exponential(1.0 / self.rate, n)


@dataclass(frozen=True)
class Normal(Distribution):
    mean_: float
    sd: float

    def __post_init__(self):
        if not self.sd > 0:
            raise ValueError("Normal needs sd > 0")

    @property
    def support(self):
        return SupportInterval(-math.inf, math.inf)

    @property
    def mean(self):
        return self.mean_

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.mean_) / self.sd

    def pdf(self, x):
        z = self._z(x)
        return np.exp(-0.5 * z * z) / (self.sd * math.sqrt(2 * math.pi))

    def cdf(self, x):
        return special.ndtr(self._z(x))

    def ppf(self, q):
        return self.mean_ + self.sd * special.ndtri(q)

    def lower_partial(self, t):
        z = self._z(t)
        dens = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        return self.sd * (z * special.ndtr(z) + dens)

    def upper_partial(self, t):
        z = self._z(t)
        dens = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        return self.sd * (dens - z * special.ndtr(-z))

    def _compute_moments(self):
        return MomentSummary(float(self.mean_), float(self.sd) ** 2, 0.0, 3.0, self._abs_central_pair())

    def sample(self, rng, n):
        return rng.normal(self.mean_, self.sd, n)


@dataclass(frozen=True)
class Beta(Distribution):
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("Beta needs alpha, beta > 0")

    @property
    def support(self):
        return SupportInterval(0.0, 1.0)

    @property
    def density_singular(self) -> bool:
        return self.alpha < 1 or self.beta < 1

    @property
    def mean(self):
        return self.alpha / (self.alpha + self.beta)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.alpha, self.beta
        inside = (x > 0) & (x < 1)
        xc = np.clip(x, 1e-300, 1 - 1e-16)
        with np.errstate(all="ignore"):
            logp = (a - 1) * np.log(xc) + (b - 1) * np.log1p(-xc) - special.betaln(a, b)
        return np.where(inside, np.exp(logp), 0.0)

    def cdf(self, x):
        return special.betainc(self.alpha, self.beta, np.clip(np.asarray(x, dtype=float), 0, 1))

    def ppf(self, q):
        return special.betaincinv(self.alpha, self.beta, q)

    def lower_partial(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.alpha, self.beta
        mu = a / (a + b)
        tc = np.clip(t, 0.0, 1.0)
        inside = tc * special.betainc(a, b, tc) - mu * special.betainc(a + 1, b, tc)
        return np.where(t <= 0, 0.0, np.where(t >= 1, t - mu, inside))

    def upper_partial(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.alpha, self.beta
        mu = a / (a + b)
        tc = np.clip(t, 0.0, 1.0)
        inside = mu * special.betaincc(a + 1, b, tc) - tc * special.betaincc(a, b, tc)
        return np.where(t >= 1, 0.0, np.where(t <= 0, mu - t, inside))

    def _compute_moments(self):
        a, b = self.alpha, self.beta
        s = a + b
        mu = a / s
        var = a * b / (s * s * (s + 1))
        skew = 2 * (b - a) * math.sqrt(s + 1) / ((s + 2) * math.sqrt(a * b))
        excess = 6 * ((a - b) ** 2 * (s + 1) - a * b * (s + 2)) / (a * b * (s + 2) * (s + 3))
        return MomentSummary(mu, var, skew, 3.0 + excess, self._abs_central_pair())

    def sample(self, rng, n):
        return rng.beta(self.alpha, self.beta, n)


@dataclass(frozen=True)
class Truncated(Distribution):
    """Law of ``base`` conditioned on ``lo <= X <= hi``."""

    base: Distribution
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("Truncated needs lo < hi")
        if not self.base.has_density:
            raise ValueError("only laws with a density can be truncated this way")
        if not self._mass > 0:
            raise ValueError("truncation interval carries no probability mass")

    @property
    def _mass(self) -> float:
        return float(self.base.cdf(self.hi) - self.base.cdf(self.lo))

    @property
    def support(self):
        s = self.base.support
        return SupportInterval(max(self.lo, s.lo), min(self.hi, s.hi))

    @property
    def density_singular(self) -> bool:
        return self.base.density_singular

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), self.base.pdf(x) / self._mass, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        return np.clip((self.base.cdf(x) - self.base.cdf(self.lo)) / self._mass, 0.0, 1.0)

    def ppf(self, q):
        flo = float(self.base.cdf(self.lo))
        return np.clip(self.base.ppf(flo + np.asarray(q, dtype=float) * self._mass), self.lo, self.hi)

    def lower_partial(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        tc = np.clip(t, lo, hi)
        b = self.base
        if math.isfinite(lo):
            inside = b.lower_partial(tc) - b.lower_partial(lo) - (tc - lo) * b.cdf(lo)
        else:
            inside = b.lower_partial(tc)
        inside = inside / self._mass
        return np.where(t <= lo, 0.0, np.where(t >= hi, t - self.mean, inside))

    def upper_partial(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        tc = np.clip(t, lo, hi)
        b = self.base
        if math.isfinite(hi):
            inside = b.upper_partial(tc) - b.upper_partial(hi) - (hi - tc) * (1.0 - b.cdf(hi))
        else:
            inside = b.upper_partial(tc)
        inside = inside / self._mass
        return np.where(t >= hi, 0.0, np.where(t <= lo, self.mean - t, inside))

    def breakpoints(self):
        return (*self.base.breakpoints(), self.lo, self.hi)

    def _compute_moments(self):
        return _moments_by_quadrature(self)

    def sample(self, rng, n):
        # inverse-CDF sampling through the base law's quantile function
        return self.ppf(rng.uniform(0.0, 1.0, n))


@functools.lru_cache(maxsize=512)
def _cached_moments(dist: Distribution) -> MomentSummary:
    return dist._compute_moments()


def _moments_by_quadrature(dist: Distribution) -> MomentSummary:
    mu = dist.expect(lambda x: x).value
    var = dist.expect(lambda x: (x - mu) ** 2).value
    c3 = dist.expect(lambda x: (x - mu) ** 3).value
    c4 = dist.expect(lambda x: (x - mu) ** 4).value
    a3 = dist.expect(lambda x: np.abs(x - mu) ** 3).value
    a5 = dist.expect(lambda x: np.abs(x - mu) ** 5).value
    for name, v in (("mean", mu), ("variance", var), ("fourth central moment", c4)):
        if not math.isfinite(v):
            raise NonFiniteMoment(f"{name} diverges")
    return _standardise(mu, var, c3, c4, {3: a3, 5: a5})


# ---------------------------------------------------------------------------
# Atomic laws
# ---------------------------------------------------------------------------


class _Atomic(Distribution):
    has_density = False
    values: np.ndarray
    probs: np.ndarray

    @property
    def support(self):
        return SupportInterval(float(self.values.min()), float(self.values.max()))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip(np.sum(self.probs * (self.values <= x[..., None]), axis=-1), 0.0, 1.0)

    def ppf(self, q):
        order = np.argsort(self.values)
        c = np.cumsum(self.probs[order])
        return float(self.values[order][np.searchsorted(c, q)])

    def lower_partial(self, t):
        t = np.asarray(t, dtype=float)
        return np.sum(self.probs * np.maximum(t[..., None] - self.values, 0.0), axis=-1)

    def upper_partial(self, t):
        t = np.asarray(t, dtype=float)
        return np.sum(self.probs * np.maximum(self.values - t[..., None], 0.0), axis=-1)

    def weighted_sum(self, y) -> float:
        return math.fsum(np.asarray(self.probs * np.asarray(y, dtype=float)).tolist())

    def _compute_moments(self):
        mu = self.weighted_sum(self.values)
        d = self.values - mu
        abs_central = {3: self.weighted_sum(np.abs(d) ** 3), 5: self.weighted_sum(np.abs(d) ** 5)}
        scale = float(np.max(np.abs(d)))
        if scale == 0.0:
            return _standardise(mu, 0.0, 0.0, 0.0, abs_central)
        # skewness and kurtosis are scale-free; rescale so tiny spreads do not underflow
        z = d / scale
        v = self.weighted_sum(z**2)
        if v == 0.0:
            return _standardise(mu, 0.0, 0.0, 0.0, abs_central)
        return MomentSummary(mu, v * scale * scale, self.weighted_sum(z**3) / v**1.5,
                             self.weighted_sum(z**4) / v**2, abs_central)

    def abs_central_moment(self, k):
        mu = self.mean
        return self.weighted_sum(np.abs(self.values - mu) ** k)

    def expect(self, g, rtol=0.0, atol=0.0):
        from .quadrature import QuadResult

        with np.errstate(all="ignore"):
            y = np.asarray(g(self.values), dtype=float)
        v = self.weighted_sum(y)
        return QuadResult(v, float(4 * np.finfo(float).eps * math.fsum(np.abs(self.probs * y))), 0)

    def breakpoints(self):
        return (self.mean, *self.values.tolist())

    def effective_support(self):
        return self.support

    def truncated(self, mass=TAIL_MASS):
        return self

    def restrict(self, lo, hi):
        keep = (self.values >= lo) & (self.values <= hi)
        p = self.probs[keep]
        return FiniteDiscrete(tuple(zip(self.values[keep].tolist(), (p / p.sum()).tolist())))

    def cell_stats(self, part):
        out = []
        cells = part.cells(self.support)
        for i, (lo, hi) in enumerate(cells):
            # half-open cells (lo, hi], first cell closed, so each atom lands once
            keep = (self.values <= hi) & ((self.values > lo) if i else (self.values >= lo))
            p = math.fsum(self.probs[keep].tolist())
            if p < EMPTY_CELL_MASS:
                out.append(CellStats(lo, hi, p, None, None))
                continue
            w = self.probs[keep] / p
            x = self.values[keep]
            mu = math.fsum((w * x).tolist())
            out.append(CellStats(lo, hi, p, mu, math.fsum((w * (x - mu) ** 2).tolist())))
        return out

    def sample(self, rng, n):
        return rng.choice(self.values, size=n, p=self.probs)


@dataclass(frozen=True, eq=False)
class FiniteDiscrete(_Atomic):
    """Finitely many atoms ``(value, probability)``."""

    points: tuple

    def __post_init__(self):
        pts = tuple((float(v), float(p)) for v, p in self.points)
        if not pts:
            raise ValueError("FiniteDiscrete needs at least one atom")
        vals = np.array([v for v, _ in pts])
        probs = np.array([p for _, p in pts])
        if np.any(probs <= 0):
            raise ValueError("FiniteDiscrete probabilities must be strictly positive")
        if abs(math.fsum(probs.tolist()) - 1.0) > 1e-12:
            raise ValueError("FiniteDiscrete probabilities must sum to 1")
        if not np.all(np.isfinite(vals)):
            raise ValueError("atoms must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "probs", probs)

    def __eq__(self, other):
        return isinstance(other, FiniteDiscrete) and self.points == other.points

    def __hash__(self):
        return hash(self.points)


@dataclass(frozen=True, eq=False)
class Empirical(_Atomic):
    """Plug-in law of a sample; moments use denominator n."""

    samples: tuple

    def __post_init__(self):
        xs = tuple(float(x) for x in self.samples)
        if len(xs) < 2:
            raise ValueError("Empirical needs at least 2 samples")
        vals = np.array(xs)
        if not np.all(np.isfinite(vals)):
            raise ValueError("samples must be finite")
        if vals.min() == vals.max():
            raise ValueError("all samples are equal; use FiniteDiscrete for a point mass")
        object.__setattr__(self, "samples", xs)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "probs", np.full(len(xs), 1.0 / len(xs)))

    def __eq__(self, other):
        return isinstance(other, Empirical) and self.samples == other.samples

    def __hash__(self):
        return hash(self.samples)

    def breakpoints(self):
        # thousands of atoms would swamp the panel budget; the mean is enough
        # for the kink-free integrands evaluated against samples
        return (self.mean,) if len(self.samples) > 256 else super().breakpoints()


# ---------------------------------------------------------------------------
# Text specs
# ---------------------------------------------------------------------------

_FAMILIES = {
    "uniform": (Uniform, 2),
    "exp": (Exponential, 1),
    "exponential": (Exponential, 1),
    "normal": (Normal, 2),
    "beta": (Beta, 2),
}


def parse_distribution(spec: str) -> Distribution:
    """Parse ``family:param,param`` (e.g. ``uniform:0,2``, ``exp:1``).

    Discrete laws use ``discrete:value@prob,value@prob``.  A trailing
    ``|trunc`` conditions an unbounded law on its effective support.
    """
    text = spec.strip()
    truncate = False
    if text.endswith("|trunc"):
        truncate, text = True, text[: -len("|trunc")]
    family, _, args = text.partition(":")
    family = family.strip().lower()
    try:
        if family == "discrete":
            pts = []
            for item in args.split(","):
                v, _, p = item.partition("@")
                pts.append((float(v), float(p)))
            dist = FiniteDiscrete(tuple(pts))
        elif family in _FAMILIES:
            cls, nargs = _FAMILIES[family]
            params = [float(x) for x in args.split(",")] if args.strip() else []
            if len(params) != nargs:
                raise SpecParseError(f"{family} takes {nargs} parameter(s), got {len(params)}")
            dist = cls(*params)
        else:
            raise SpecParseError(f"unknown distribution family {family!r}")
    except SpecParseError:
        raise
    except ValueError as exc:
        raise SpecParseError(f"bad distribution spec {spec!r}: {exc}") from exc
    return dist.truncated() if truncate else dist


def read_samples(path) -> Empirical:
    """One numeric sample per line; blank lines and ``#`` comments skipped."""
    xs = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                xs.append(float(row[0]))
            except ValueError as exc:
                raise SpecParseError(f"{path}: not a number: {row[0]!r}") from exc
    try:
        return Empirical(tuple(xs))
    except ValueError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc


# Public function-style API -------------------------------------------------


def moments(dist: Distribution) -> MomentSummary:
    return dist.moments()


def mean_abs_dev_at(dist: Distribution, t: float) -> float:
    return dist.mean_abs_dev_at(t)


def cdf(dist: Distribution, x: float) -> float:
    return float(dist.cdf(x))


def cell_stats(dist: Distribution, part: PartitionSpec | Sequence[float]) -> list[CellStats]:
    if not isinstance(part, PartitionSpec):
        part = PartitionSpec(tuple(part))
    return dist.cell_stats(part)
