"""Reference values for E[phi(X)] and the Jensen gap.

Three independent channels: adaptive quadrature against the density, exact
weighted sums for atomic laws, and seeded Monte Carlo.  A fourth routine
evaluates the gap through the nested Taylor-remainder integral so that the
integral identity itself can be checked against the direct value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, Empirical, FiniteDiscrete
from .errors import DomainMismatch, QuadratureFailure
from .functions import PhiModel
from .quadrature import integrate

DEFAULT_TOL = 1e-9
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class GapOracle:
    expectation: float
    gap: float
    abs_error_estimate: float
    method: str
    phi_at_mean: float
    mc_seed: int | None = None
    mc_samples: int | None = None


def _check_domain(dist: Distribution, phi: PhiModel) -> None:
    s, d = dist.support, phi.domain
    if s.lo < d.lo or s.hi > d.hi:
        raise DomainMismatch(
            f"support [{s.lo}, {s.hi}] is not inside the domain of {phi.label}"
        )


def expect(dist: Distribution, phi: PhiModel, tol: float = DEFAULT_TOL) -> GapOracle:
    """E[phi(X)] and J(phi, X) with an absolute error estimate <= tol."""
    if not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    _check_domain(dist, phi)
    mu = dist.mean
    phi_mu = float(phi(mu))

    if isinstance(dist, Empirical):
        y = np.asarray(phi(dist.values), dtype=float)
        value = math.fsum(y.tolist()) / len(y)
        se = float(np.std(y) / math.sqrt(len(y)))
        return GapOracle(value, value - phi_mu, se, "exact_sum", phi_mu)
    if isinstance(dist, FiniteDiscrete):
        r = dist.expect(phi)
        return GapOracle(r.value, r.value - phi_mu, r.error, "exact_sum", phi_mu)

    r = dist.expect(phi, rtol=1e-9, atol=1e-12)
    if not r.error <= tol:
        r = dist.expect(phi, rtol=0.0, atol=tol)
    if not math.isfinite(r.value):
        raise QuadratureFailure(f"E[{phi.label}(X)] is not finite")
    return GapOracle(r.value, r.value - phi_mu, r.error, "quadrature", phi_mu)


def _chunk_moments(dist, phi, seed, index, size):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))
    y = np.asarray(phi(dist.sample(rng, size)), dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainMismatch(f"{phi.label} is not finite at a sampled point")
    return math.fsum(y.tolist()), math.fsum((y * y).tolist())


def expect_mc(
    dist: Distribution,
    phi: PhiModel,
    n: int,
    seed: int,
    workers: int = 1,
    chunk: int = MC_CHUNK,
) -> GapOracle:
    """Monte Carlo E[phi(X)] from ``n`` draws.

    Chunk ``i`` draws from its own Philox stream keyed by ``(seed, i)`` and
    chunk sums are combined in index order, so the result is bit-identical
    for any ``workers``.
    """
    if n < 1000:
        raise ValueError("Monte Carlo needs n >= 1000")
    _check_domain(dist, phi)
    sizes = [chunk] * (n // chunk) + ([n % chunk] if n % chunk else [])
    jobs = [(dist, phi, seed, i, size) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _chunk_moments(*a), jobs))
    else:
        parts = [_chunk_moments(*a) for a in jobs]
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1)
    phi_mu = float(phi(dist.mean))
    return GapOracle(mean, mean - phi_mu, math.sqrt(var / n), "monte_carlo", phi_mu,
                     mc_seed=seed, mc_samples=n)


def integral_remainder_gap(dist: Distribution, phi: PhiModel, tol: float = 1e-10) -> float:
    """E[int_mu^X (X - t) phi''(t) dt] by nested quadrature."""
    _check_domain(dist, phi)
    mu = dist.mean

    def inner(x: float) -> float:
        if x == mu:
            return 0.0
        r = integrate(lambda t: (x - t) * phi.deriv(2, t), mu, x, rtol=1e-11, atol=tol * 1e-2)
        return r.value

    if isinstance(dist, (FiniteDiscrete, Empirical)):
        return dist.weighted_sum([inner(float(x)) for x in dist.values])

    outer = np.vectorize(inner, otypes=[float])
    eff = dist.effective_support()

    def integrand(x):
        w = dist.pdf(x)
        return np.where(w > 0, outer(x) * w, 0.0)

    r = integrate(integrand, eff.lo, eff.hi, breakpoints=dist.breakpoints(), rtol=1e-10, atol=tol)
    return r.value
