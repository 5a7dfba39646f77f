"""Globally adaptive Gauss-Kronrod (7, 15) quadrature.

Panels are bisected worst-error-first until the summed error estimate meets
``max(atol, rtol * |I|)``.  Infinite endpoints are handled by mapping the
half-line onto ``[0, 1)`` with ``x = a + t / (1 - t)``.  Callers pass kinks
(the mean, cut points, atoms) as ``breakpoints`` so that no panel straddles a
derivative discontinuity.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .errors import QuadratureFailure

# QUADPACK qk15 abscissae (non-negative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss-7 nodes are the odd-indexed Kronrod nodes.
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
GAUSS_WEIGHTS[7] = _WG[3]

MAX_PANELS = 10_000


class QuadResult(NamedTuple):
    value: float
    error: float
    panels: int


def _panel(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * NODES
    with np.errstate(all="ignore"):
        y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        return math.nan, math.inf
    kronrod = half * float(KRONROD_WEIGHTS @ y)
    gauss = half * float(GAUSS_WEIGHTS @ y)
    return kronrod, abs(kronrod - gauss)


def _mapped(f, a: float, b: float):
    """Return (g, lo, hi) with ``int_lo^hi g = int_a^b f`` and lo, hi finite."""
    if math.isfinite(a) and math.isfinite(b):
        return f, a, b
    if math.isfinite(a):
        def g(t):
            s = 1.0 - t
            return f(a + t / s) / (s * s)
        return g, 0.0, 1.0
    if math.isfinite(b):
        def g(t):
            s = 1.0 - t
            return f(b - t / s) / (s * s)
        return g, 0.0, 1.0
    raise ValueError("doubly infinite panel must be split at a breakpoint first")


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    rtol: float = 1e-9,
    atol: float = 1e-12,
    max_panels: int = MAX_PANELS,
) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[a, b]``.

    Raises QuadratureFailure when the error target cannot be met within
    ``max_panels`` panels or when the integrand is not finite somewhere on
    an unsplittable panel (typically a divergent integral).
    """
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    if a > b:
        r = integrate(f, b, a, breakpoints, rtol, atol, max_panels)
        return QuadResult(-r.value, r.error, r.panels)

    cuts = sorted({float(p) for p in breakpoints if a < p < b})
    if not math.isfinite(a) and not math.isfinite(b) and not cuts:
        cuts = [0.0]
    edges = [a, *cuts, b]

    heap: list[tuple[float, int, float, float, float, Callable]] = []
    counter = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        g, tlo, thi = _mapped(f, lo, hi)
        val, err = _panel(g, tlo, thi)
        heapq.heappush(heap, (-err, counter, tlo, thi, val, g))
        counter += 1

    def totals():
        return math.fsum(p[4] for p in heap), math.fsum(-p[0] for p in heap)

    value, error = totals()
    while not (error <= max(atol, rtol * abs(value))):
        if len(heap) >= max_panels:
            raise QuadratureFailure(
                f"no convergence on [{a}, {b}] within {max_panels} panels "
                f"(estimate {value!r}, error {error!r}); the integral may diverge"
            )
        neg_err, _, lo, hi, val, g = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 4 * np.finfo(float).eps * max(1.0, abs(mid)):
            raise QuadratureFailure(
                f"panel [{lo}, {hi}] cannot be refined further; the integrand is "
                "singular or not finite there"
            )
        children = [(plo, phi_, *_panel(g, plo, phi_)) for plo, phi_ in ((lo, mid), (mid, hi))]
        for plo, phi_, v, e in children:
            heapq.heappush(heap, (-e, counter, plo, phi_, v, g))
            counter += 1
        # running sums drift (and stick at nan/inf), so resync periodically
        if counter % 64 < 2 or not math.isfinite(error):
            value, error = totals()
        else:
            value += children[0][2] + children[1][2] - val
            error += children[0][3] + children[1][3] + neg_err
    value, error = totals()
    return QuadResult(value, error, len(heap))
