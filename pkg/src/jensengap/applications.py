"""Entropy, divergence and fading-capacity analyses built on the bounds.

All information quantities are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np
from scipy import special

from .bounds import fourth_order
from .distributions import Distribution, Empirical, Exponential, FiniteDiscrete
from .errors import NoDensity, SupportMismatch, ZeroProbability
from .functions import log1p_snr
from .oracle import expect


@dataclass(frozen=True)
class EntropyReport:
    energy: float
    renyi2_bound: float
    gap_estimate: float
    entropy_oracle: float


@dataclass(frozen=True)
class DivergenceReport:
    kl: float
    chi2_q_p: float
    inf_ratio: float
    bound: float
    holds: bool


@dataclass(frozen=True)
class CapacityReport:
    snr: float
    jensen_upper: float
    fourth_order_approx: float
    oracle: float
    terms: tuple
    remainder_radius: float


def entropy_bounds(dist: Distribution) -> EntropyReport:
    """Rényi-2 lower bound -ln E[f(X)] on the (differential) entropy.

    ``gap_estimate`` is the second-order refinement for phi = -ln about
    E[Y] with Y = f(X): phi''(E Y) Var(Y) / 2 = Var(f(X)) / (2 E^2).
    """
    if isinstance(dist, Empirical):
        raise NoDensity("an empirical sample has no density")
    if isinstance(dist, FiniteDiscrete):
        p = dist.probs
        energy = math.fsum((p * p).tolist())
        third = math.fsum((p**3).tolist())
        entropy = -math.fsum((p * np.log(p)).tolist())
    else:
        energy = dist.expect(dist.pdf).value
        third = dist.expect(lambda x: dist.pdf(x) ** 2).value
        entropy = -dist.expect(lambda x: special.xlogy(1.0, dist.pdf(x))).value
    var_y = max(third - energy * energy, 0.0)
    return EntropyReport(energy, -math.log(energy), var_y / (2.0 * energy * energy), entropy)


def _aligned(P, Q) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(P, FiniteDiscrete) and isinstance(Q, FiniteDiscrete):
        pmap, qmap = dict(P.points), dict(Q.points)
        if len(pmap) != len(P.points) or len(qmap) != len(Q.points) or set(pmap) != set(qmap):
            raise SupportMismatch("P and Q must put mass on exactly the same atoms")
        keys = sorted(pmap)
        return np.array([pmap[k] for k in keys]), np.array([qmap[k] for k in keys])
    p, q = np.asarray(P, dtype=float), np.asarray(Q, dtype=float)
    if p.shape != q.shape:
        raise SupportMismatch("P and Q have different numbers of atoms")
    if np.any(p <= 0) or np.any(q <= 0):
        raise ZeroProbability("every atom needs positive probability under P and Q")
    return p, q


def reverse_pinsker(P, Q) -> DivergenceReport:
    """KL(P||Q) >= (inf P/Q)^2 chi^2(Q||P) / 2.

    P and Q are FiniteDiscrete laws on the same atoms, or aligned
    probability vectors.
    """
    p, q = _aligned(P, Q)
    kl = math.fsum((p * np.log(p / q)).tolist())
    chi2 = math.fsum(((q - p) ** 2 / p).tolist())
    ratio = float(np.min(p / q))
    bound = 0.5 * ratio * ratio * chi2
    return DivergenceReport(kl, chi2, ratio, bound, kl >= bound - 1e-12)


def exponential_central_moment(k: int, rate: Fraction = Fraction(1)) -> Fraction:
    """Exact E[(X - 1/rate)^k] for X ~ Exp(rate)."""
    mean = 1 / Fraction(rate)
    return sum((comb(k, j) * Fraction(factorial(j)) / Fraction(rate) ** j * (-mean) ** (k - j)
                for j in range(k + 1)), Fraction(0))


def capacity_expansion_coefficients() -> tuple[Fraction, Fraction, Fraction]:
    """Exact coefficients of r^2, r^3, r^4 (r = rho / (1 + rho)) in the
    fourth-order expansion of E[ln(1 + rho X)], X ~ Exp(1).

    The k-th derivative of ln(1 + rho x) at x = 1 is (-1)^(k-1) (k-1)! r^k,
    and it multiplies E[(X - 1)^k] / k!.
    """
    out = []
    for k in (2, 3, 4):
        deriv_coef = (-1) ** (k - 1) * factorial(k - 1)
        out.append(Fraction(deriv_coef) * exponential_central_moment(k) / factorial(k))
    return tuple(out)


def rayleigh_capacity(snr: float, tol: float = 1e-10) -> CapacityReport:
    """Ergodic capacity E[ln(1 + snr * g)], g ~ Exp(1): Jensen, expansion, oracle."""
    if not snr > 0:
        raise ValueError("snr must be positive")
    gain = Exponential(1.0)
    phi = log1p_snr(snr)
    approx = fourth_order(phi, gain)
    truth = expect(gain, phi, tol=tol)
    return CapacityReport(
        snr=float(snr),
        jensen_upper=math.log1p(snr),
        fourth_order_approx=approx.estimate,
        oracle=truth.expectation,
        terms=approx.terms,
        remainder_radius=approx.error_radius,
    )


def high_snr_correction() -> Fraction:
    """Limit of the three correction terms as r -> 1."""
    return sum(capacity_expansion_coefficients(), Fraction(0))
