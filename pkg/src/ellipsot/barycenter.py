"""W2 barycenters for families with a common correlation structure.

For elliptical components sharing one scale root (or simplicial ones
sharing a dimension) the barycenter problem collapses to one dimension:
the fixed-point operator G replaces the radial law with the weighted
quantile mixture of the component radials and is idempotent, so the
closed-form barycenter is available in one step. The Student-t utilities
cover the common-covariance experiment: standardize t radials so all
components carry equal covariance, then search for the degrees of
freedom whose (standardized) t law is W2-closest to the barycenter
radial.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import EllipticalDist, SimplicialDist
from .errors import SpecError, UnsupportedPairError
from .radial import (
    RadialLaw,
    TRadialLaw,
    ScaledLaw,
    quantile_mixture,
    radial_w2_squared,
    scaled_law,
    t_radial_law,
)
from .transport import w2_squared

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class BarycenterProblem:
    """Weighted list of same-family distributions."""

    components: tuple
    weights: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        w = tuple(float(x) for x in self.weights)
        if not comps or len(comps) != len(w):
            raise SpecError("need matching, nonempty components and weights")
        if any(x <= 0.0 for x in w):
            raise SpecError("weights must be positive")
        if abs(sum(w) - 1.0) > 1e-12:
            raise SpecError("weights must sum to 1 within 1e-12")
        elliptical = all(isinstance(c, EllipticalDist) for c in comps)
        simplicial = all(isinstance(c, SimplicialDist) for c in comps)
        if not (elliptical or simplicial):
            raise UnsupportedPairError(
                "components must be all elliptical or all simplicial")
        if any(c.dim != comps[0].dim for c in comps):
            raise SpecError("components must share one dimension")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", w)

    @property
    def is_elliptical(self) -> bool:
        return isinstance(self.components[0], EllipticalDist)


def _require_common_scale(problem: BarycenterProblem, extra: EllipticalDist | None = None):
    """Common scale root for the closed-form path (1e-10 absolute-entry gap)."""
    ref = problem.components[0].scale_root
    scale = max(float(np.max(np.abs(ref.entries))), 1e-300)
    members = list(problem.components) + ([extra] if extra is not None else [])
    for c in members:
        gap = float(np.max(np.abs(c.scale_root.entries - ref.entries)))
        if gap > 1e-10 * scale:
            raise UnsupportedPairError(
                "closed-form barycenter needs a common scale root across components; "
                "heterogeneous scale matrices are not supported")
    if extra is not None and problem.is_elliptical:
        if float(np.max(np.abs(extra.mean - problem.components[0].mean))) > 0.0:
            raise UnsupportedPairError("closed-form barycenter assumes a common mean")
    return ref


def barycentric_cost(problem: BarycenterProblem, candidate) -> float:
    """Weighted sum of squared W2 distances from the components to candidate."""
    return float(sum(w * w2_squared(c, candidate)
                     for w, c in zip(problem.weights, problem.components)))


def common_correlation_barycenter(problem: BarycenterProblem):
    """Closed-form barycenter: same scale root (or dimension), quantile-mixture radial."""
    mix = quantile_mixture([c.radial for c in problem.components], problem.weights)
    first = problem.components[0]
    if problem.is_elliptical:
        scale = _require_common_scale(problem)
        return EllipticalDist(dim=first.dim, mean=first.mean, scale_root=scale, radial=mix)
    return SimplicialDist(dim=first.dim, radial=mix)


def fixed_point_step(problem: BarycenterProblem, current):
    """One application of the fixed-point operator G.

    Pushing `current` through the weighted average of its maps to the
    components yields the quantile-mixture radial regardless of
    `current`'s own radial law, so G converges in a single step.
    """
    first = problem.components[0]
    if problem.is_elliptical:
        if not isinstance(current, EllipticalDist):
            raise SpecError("current iterate must be elliptical")
        _require_common_scale(problem, extra=current)
    else:
        if not isinstance(current, SimplicialDist) or current.dim != first.dim:
            raise SpecError("current iterate must be simplicial with matching dimension")
    return common_correlation_barycenter(problem)


def descent_check(problem: BarycenterProblem, mu) -> tuple[float, float, float]:
    """(V(mu), V(G(mu)), W2^2(mu, G(mu))); V must not increase under G."""
    g_mu = fixed_point_step(problem, mu)
    return (barycentric_cost(problem, mu),
            barycentric_cost(problem, g_mu),
            w2_squared(mu, g_mu))


# ---------------------------------------------------------------------------
# Student-t standardization and degrees-of-freedom fit
# ---------------------------------------------------------------------------

def standardized_t_radial(dim: int, dof: float, convention: str = "rooted") -> ScaledLaw:
    """t radial scaled so the elliptical with A = I has unit covariance.

    'rooted' multiplies the radial by sqrt((dof-2)/dof), which makes
    E[radial^2] = dim exactly. 'unrooted' multiplies by (dof-2)/dof; it
    does not equalize covariances but is the coefficient the reference
    t-barycenter experiment is reproducible with (see fit_t_degrees).
    """
    if convention == "rooted":
        factor = np.sqrt((dof - 2.0) / dof)
    elif convention == "unrooted":
        factor = (dof - 2.0) / dof
    else:
        raise SpecError("convention must be 'rooted' or 'unrooted'")
    return scaled_law(float(factor), t_radial_law(dim, dof))


def golden_minimize(f, lo: float, hi: float, tol: float = 1e-3) -> tuple[float, float]:
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def fit_t_degrees(target: RadialLaw, dim: int,
                  nu_range: tuple[float, float] = (2.05, 200.0),
                  standardized: bool = True,
                  tol: float = 1e-3) -> tuple[float, float]:
    """Degrees of freedom whose t radial is W2-closest to `target`.

    Candidates are covariance-standardized (rooted) by default. Returns
    (nu_star, squared distance); warns and returns the boundary when the
    minimum is not interior.
    """
    lo, hi = float(nu_range[0]), float(nu_range[1])
    if not (2.0 < lo < hi):
        raise SpecError("nu_range must satisfy 2 < lo < hi")

    def objective(nu: float) -> float:
        cand = standardized_t_radial(dim, nu) if standardized else t_radial_law(dim, nu)
        return radial_w2_squared(target, cand)

    nu_star, dist = golden_minimize(objective, lo, hi, tol=tol)
    if nu_star - lo < 2.0 * tol or hi - nu_star < 2.0 * tol:
        warnings.warn("fit_t_degrees: minimum at the search boundary", RuntimeWarning)
        edge = lo if nu_star - lo < hi - nu_star else hi
        return edge, objective(edge)
    return nu_star, dist


def t_barycenter_radial(dofs, weights, dim: int = 2,
                        convention: str = "unrooted") -> RadialLaw:
    """Radial law of the common-covariance t barycenter.

    Components are t radials standardized per `convention` and mixed by
    quantile. The 'unrooted' default is the convention under which the
    reference experiment's fitted degrees of freedom are reproduced.
    """
    comps = [standardized_t_radial(dim, nu, convention) for nu in dofs]
    return quantile_mixture(comps, weights)
