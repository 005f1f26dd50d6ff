"""Quadrature of quantile functionals on the open unit interval.

Integrands are products of quantile functions: smooth inside (0, 1) but
with algebraic branch points at both endpoints (q ~ u^(1/d) at 0, and
heavy-tailed laws diverge as u -> 1). The scheme is:

  * fixed-order Gauss-Legendre on the middle [0.02, 0.98], split at any
    quantile breakpoints (step laws integrate exactly);
  * exponential-map panels on both tails, extended adaptively until the
    contribution is negligible; the upper tail is evaluated through
    dedicated upper-tail quantiles q(1-w) parameterized by w, so no
    precision is lost to cancellation near u = 1.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

EDGE = 0.02           # width of each transformed tail region
_S_MAX = 690.0        # deeper tail would underflow w = EDGE * exp(-s)
_REL_TOL = 5e-15

_default_nodes = 256


def set_default_nodes(n: int) -> None:
    """Set the Gauss-Legendre order used on the middle region."""
    global _default_nodes
    if n < 8:
        raise ValueError("need at least 8 quadrature nodes")
    _default_nodes = int(n)


def default_nodes() -> int:
    return _default_nodes


@lru_cache(maxsize=32)
def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _gl_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    x, w = _gl(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.sum(w * f(mid + half * x)))


def _gl_panels_vec(f: Callable[[np.ndarray], np.ndarray],
                   panels: list[tuple[float, float]], n: int) -> float:
    """Sum of GL integrals over many panels with one batched evaluation."""
    x, w = _gl(n)
    lo = np.array([p[0] for p in panels])
    hi = np.array([p[1] for p in panels])
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = f(u).reshape(len(panels), n)
    return float(np.sum(half * (vals @ w)))


def _split_panels(edges: Sequence[float], inner: np.ndarray) -> list[tuple[float, float]]:
    pts = np.unique(np.concatenate([np.asarray(edges, dtype=float), inner]))
    return list(zip(pts[:-1], pts[1:]))


def _tail_integral(g: Callable[[np.ndarray], np.ndarray], breaks_s: np.ndarray,
                   reference: float) -> float:
    """EDGE * integral over s in (0, inf) of g(EDGE * e^-s) e^-s ds, adaptively."""
    total = 0.0
    s_lo = 0.0
    width = 1.0
    small_streak = 0
    while s_lo < _S_MAX:
        s_hi = min(s_lo + width, _S_MAX)
        cuts = breaks_s[(breaks_s > s_lo) & (breaks_s < s_hi)]
        part = 0.0
        for p_lo, p_hi in _split_panels((s_lo, s_hi), cuts):
            part += _gl_panel(lambda s: g(EDGE * np.exp(-s)) * np.exp(-s), p_lo, p_hi, 48)
        total += EDGE * part
        scale = max(abs(total), abs(reference), 1e-300)
        if abs(EDGE * part) <= _REL_TOL * scale:
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
        s_lo = s_hi
        width = min(2.0 * width, 16.0)
    return total


def integrate_unit(f: Callable[[np.ndarray], np.ndarray],
                   f_upper: Callable[[np.ndarray], np.ndarray],
                   breakpoints: np.ndarray | None = None,
                   nodes: int | None = None) -> float:
    """Integral over (0,1) of f(u) du.

    f is evaluated at u in (0, 1-EDGE]; f_upper(w) must equal f(1-w) and is
    evaluated at small w directly. `breakpoints` are interior u values where
    the integrand kinks or steps.
    """
    n = nodes if nodes is not None else _default_nodes
    bps = np.asarray(breakpoints, dtype=float) if breakpoints is not None else np.empty(0)
    bps = bps[(bps > 0.0) & (bps < 1.0)]

    # middle region, split at breakpoints
    mid_bps = bps[(bps > EDGE) & (bps < 1.0 - EDGE)]
    if mid_bps.size == 0:
        middle = _gl_panel(f, EDGE, 1.0 - EDGE, n)
    else:
        order = 16 if mid_bps.size > 16 else 64
        middle = _gl_panels_vec(f, _split_panels((EDGE, 1.0 - EDGE), mid_bps), order)

    # lower tail: u = EDGE * e^-s
    lo_bps = bps[bps < EDGE]
    with np.errstate(divide="ignore"):
        lo_s = np.log(EDGE / lo_bps) if lo_bps.size else np.empty(0)
    lower = _tail_integral(f, lo_s[np.isfinite(lo_s)], middle)

    # upper tail: w = 1-u = EDGE * e^-s
    hi_bps = 1.0 - bps[bps > 1.0 - EDGE]
    with np.errstate(divide="ignore"):
        hi_s = np.log(EDGE / hi_bps) if hi_bps.size else np.empty(0)
    upper = _tail_integral(f_upper, hi_s[np.isfinite(hi_s)], middle)

    return lower + middle + upper


def quantile_product_integral(laws, nodes: int | None = None) -> float:
    """Integral over (0,1) of the product of the laws' quantile functions."""
    laws = tuple(laws)

    def f(u: np.ndarray) -> np.ndarray:
        out = laws[0].quantile(u)
        for law in laws[1:]:
            out = out * law.quantile(u)
        return out

    def f_upper(w: np.ndarray) -> np.ndarray:
        out = laws[0].upper_quantile(w)
        for law in laws[1:]:
            out = out * law.upper_quantile(w)
        return out

    bps = [law.breakpoints() for law in laws]
    bps = [b for b in bps if b.size]
    merged = np.unique(np.concatenate(bps)) if bps else None
    return integrate_unit(f, f_upper, breakpoints=merged, nodes=nodes)
