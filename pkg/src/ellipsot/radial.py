"""One-dimensional nonnegative radial laws.

These are the scalar factors of the stochastic representations: the norm
of a standard Gaussian (chi), the t-radial factor, point masses, scaled
laws, weighted quantile mixtures, and empirical samples. Every law
exposes quantile/cdf plus `upper_quantile(w) = quantile(1-w)` evaluated
directly in w so deep-tail work keeps full precision, and `breakpoints()`
listing probability levels where the quantile steps or kinks (the moment
quadrature splits its panels there).

Moments are quantile integrals on (0,1), cached per instance; laws are
immutable, so cached values are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InfiniteMomentError, SpecError
from .quadrature import integrate_unit, quantile_product_integral
from .special import (
    betainc,
    betainc_inv,
    gammainc_lower,
    gammainc_lower_inv,
    gammainc_upper_inv,
)

# composed CDF levels are clamped into this range before quantile evaluation
# so atoms follow the right-continuous convention and targets stay finite
_LEVEL_LO = 1e-300
_LEVEL_HI = 1.0 - 2.2e-16


def _as_prob(u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise SpecError("probability level must lie strictly inside (0, 1)")
    return arr, scalar


def _as_radius(r) -> tuple[np.ndarray, bool]:
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0.0) or np.any(~np.isfinite(arr)):
        raise SpecError("radius must be finite and nonnegative")
    return arr, scalar


class RadialLaw:
    """Abstract base; subclasses implement _quantile, _cdf and tail access."""

    bounded_above: bool = True

    def quantile(self, u):
        arr, scalar = _as_prob(u)
        out = self._quantile(arr)
        return float(out[0]) if scalar else out

    def cdf(self, r):
        arr, scalar = _as_radius(r)
        out = self._cdf(arr)
        return float(out[0]) if scalar else out

    def upper_quantile(self, w):
        """quantile(1 - w), evaluated stably for small w."""
        arr = np.atleast_1d(np.asarray(w, dtype=float))
        out = self._upper_quantile(arr)
        return float(out[0]) if np.ndim(w) == 0 else out

    def breakpoints(self) -> np.ndarray:
        return np.empty(0)

    def _quantile(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _cdf(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _upper_quantile(self, w: np.ndarray) -> np.ndarray:
        return self._quantile(1.0 - w)

    @cached_property
    def mean(self) -> float:
        return quantile_product_integral([self])

    @cached_property
    def second_moment(self) -> float:
        return quantile_product_integral([self, self])


@dataclass(frozen=True)
class ChiLaw(RadialLaw):
    """Norm of a d-dimensional standard Gaussian (chi with d degrees of freedom)."""

    dim: int

    bounded_above = False

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise SpecError("chi law needs an integer dimension >= 1")
        object.__setattr__(self, "dim", int(self.dim))

    def _quantile(self, u):
        return np.sqrt(2.0 * gammainc_lower_inv(self.dim / 2.0, u))

    def _cdf(self, r):
        return gammainc_lower(self.dim / 2.0, 0.5 * r * r)

    def _upper_quantile(self, w):
        return np.sqrt(2.0 * gammainc_upper_inv(self.dim / 2.0, w))


@dataclass(frozen=True)
class TRadialLaw(RadialLaw):
    """Radial factor of a d-dimensional multivariate t: sqrt(d W), W ~ F(d, dof).

    The squared radius over d follows a Fisher-Snedecor F law with numerator
    d and denominator dof degrees of freedom.
    """

    dim: int
    dof: float

    bounded_above = False

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise SpecError("t radial law needs an integer dimension >= 1")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "dof", float(self.dof))
        if not self.dof > 2.0:
            raise InfiniteMomentError(
                "t radial law needs dof > 2 for a finite second moment")

    def _cdf(self, q):
        x = q * q / (q * q + self.dof)
        return betainc(self.dim / 2.0, self.dof / 2.0, x)

    def _quantile(self, u):
        a, b, nu = self.dim / 2.0, self.dof / 2.0, self.dof
        out = np.empty_like(u)
        lo = u <= 0.5
        if lo.any():
            x = betainc_inv(a, b, u[lo])
            out[lo] = np.sqrt(nu * x / (1.0 - x))
        hi = ~lo
        if hi.any():
            y = betainc_inv(b, a, 1.0 - u[hi])
            out[hi] = np.sqrt(nu * (1.0 - y) / y)
        return out

    def _upper_quantile(self, w):
        a, b, nu = self.dim / 2.0, self.dof / 2.0, self.dof
        y = betainc_inv(b, a, w)
        return np.sqrt(nu * (1.0 - y) / y)


@dataclass(frozen=True)
class DiracLaw(RadialLaw):
    """Point mass at a nonnegative radius."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if self.value < 0.0 or not np.isfinite(self.value):
            raise SpecError("dirac radius must be finite and nonnegative")

    def _quantile(self, u):
        return np.full_like(u, self.value)

    def _cdf(self, r):
        return (r >= self.value).astype(float)

    def _upper_quantile(self, w):
        return np.full_like(w, self.value)


@dataclass(frozen=True)
class ScaledLaw(RadialLaw):
    """Base law scaled by a positive factor."""

    factor: float
    base: RadialLaw

    def __post_init__(self):
        object.__setattr__(self, "factor", float(self.factor))
        if not self.factor > 0.0 or not np.isfinite(self.factor):
            raise SpecError("scale factor must be finite and positive")

    @property
    def bounded_above(self) -> bool:  # type: ignore[override]
        return self.base.bounded_above

    def _quantile(self, u):
        return self.factor * self.base._quantile(u)

    def _cdf(self, r):
        return self.base._cdf(r / self.factor)

    def _upper_quantile(self, w):
        return self.factor * self.base._upper_quantile(w)

    def breakpoints(self):
        return self.base.breakpoints()


@dataclass(frozen=True, eq=False)
class EmpiricalLaw(RadialLaw):
    """Law of a finite sample: left-continuous generalized-inverse quantile,
    right-continuous empirical CDF."""

    samples: np.ndarray
    source: str | None = None

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float).ravel())
        if s.size == 0:
            raise SpecError("empirical law needs at least one sample")
        if np.any(s < 0.0) or np.any(~np.isfinite(s)):
            raise SpecError("empirical samples must be finite and nonnegative")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __eq__(self, other):
        return (isinstance(other, EmpiricalLaw)
                and np.array_equal(self.samples, other.samples))

    def _quantile(self, u):
        n = self.samples.size
        idx = np.clip(np.ceil(n * u).astype(int) - 1, 0, n - 1)
        return self.samples[idx]

    def _cdf(self, r):
        return np.searchsorted(self.samples, r, side="right") / self.samples.size

    def _upper_quantile(self, w):
        n = self.samples.size
        idx = np.clip(n - np.floor(n * w).astype(int) - 1, 0, n - 1)
        return self.samples[idx]

    def breakpoints(self):
        n = self.samples.size
        return np.arange(1, n) / n


@dataclass(frozen=True, eq=False)
class QuantileMixtureLaw(RadialLaw):
    """Law whose quantile function is the weighted sum of component quantiles."""

    weights: tuple
    components: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        comps = tuple(self.components)
        if len(w) != len(comps) or not comps:
            raise SpecError("quantile mixture needs matching, nonempty weights and components")
        if any(x <= 0.0 for x in w):
            raise SpecError("quantile mixture weights must be positive")
        if abs(sum(w) - 1.0) > 1e-9:
            raise SpecError("quantile mixture weights must sum to 1 within 1e-9")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)

    def __eq__(self, other):
        return (isinstance(other, QuantileMixtureLaw)
                and self.weights == other.weights
                and self.components == other.components)

    @property
    def bounded_above(self) -> bool:  # type: ignore[override]
        return all(c.bounded_above for c in self.components)

    def _quantile(self, u):
        out = np.zeros_like(u)
        for w, comp in zip(self.weights, self.components):
            out += w * comp._quantile(u)
        return out

    def _upper_quantile(self, w_arg):
        out = np.zeros_like(w_arg)
        for w, comp in zip(self.weights, self.components):
            out += w * comp._upper_quantile(w_arg)
        return out

    def _cdf(self, r):
        # bisection on the monotone summed quantile; 80 halvings exhaust
        # double resolution in u
        lo = np.zeros_like(r)
        hi = np.ones_like(r)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = self._quantile(mid) <= r
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def breakpoints(self):
        bps = [c.breakpoints() for c in self.components]
        bps = [b for b in bps if b.size]
        return np.unique(np.concatenate(bps)) if bps else np.empty(0)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def quantile(law: RadialLaw, u):
    return law.quantile(u)


def cdf(law: RadialLaw, r):
    return law.cdf(r)


def mean(law: RadialLaw) -> float:
    return law.mean


def second_moment(law: RadialLaw) -> float:
    return law.second_moment


def cross_moment(law_r: RadialLaw, law_s: RadialLaw) -> float:
    """E[RS] under the comonotone (equal-quantile) coupling."""
    if law_r is law_s or law_r == law_s:
        return law_r.second_moment
    return quantile_product_integral([law_r, law_s])


def radial_quantile_map(law_r: RadialLaw, law_s: RadialLaw, r):
    """Monotone map sending quantiles of law_r to quantiles of law_s."""
    arr, scalar = _as_radius(r)
    level = np.clip(law_r._cdf(arr), _LEVEL_LO, _LEVEL_HI)
    out = law_s._quantile(level)
    return float(out[0]) if scalar else out


def quantile_mixture(laws, weights) -> QuantileMixtureLaw:
    return QuantileMixtureLaw(weights=tuple(weights), components=tuple(laws))


def chi_law(dim: int) -> ChiLaw:
    return ChiLaw(dim=dim)


def t_radial_law(dim: int, dof: float) -> TRadialLaw:
    return TRadialLaw(dim=dim, dof=dof)


def dirac_law(value: float) -> DiracLaw:
    return DiracLaw(value=value)


def scaled_law(factor: float, base: RadialLaw) -> ScaledLaw:
    return ScaledLaw(factor=factor, base=base)


def empirical_law(samples, source: str | None = None) -> EmpiricalLaw:
    return EmpiricalLaw(samples=np.asarray(samples, dtype=float), source=source)


def radial_w2_squared(law_a: RadialLaw, law_b: RadialLaw) -> float:
    """Squared 1-D Wasserstein-2 distance between two radial laws."""
    if law_a is law_b or law_a == law_b:
        return 0.0

    def f(u):
        return (law_a._quantile(u) - law_b._quantile(u)) ** 2

    def f_upper(w):
        return (law_a._upper_quantile(w) - law_b._upper_quantile(w)) ** 2

    bps = [b for b in (law_a.breakpoints(), law_b.breakpoints()) if b.size]
    merged = np.unique(np.concatenate(bps)) if bps else None
    return max(integrate_unit(f, f_upper, breakpoints=merged), 0.0)


# ---------------------------------------------------------------------------
# JSON law specs
# ---------------------------------------------------------------------------

def law_from_spec(obj, base_dir: str | Path | None = None) -> RadialLaw:
    """Build a law from its JSON spec dict."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("law spec must be an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "chi":
            return ChiLaw(dim=obj["d"])
        if kind == "t_radial":
            return TRadialLaw(dim=obj["d"], dof=obj["nu"])
        if kind == "dirac":
            return DiracLaw(value=obj["c"])
        if kind == "scaled":
            return ScaledLaw(factor=obj["c"], base=law_from_spec(obj["base"], base_dir))
        if kind == "quantile_mixture":
            comps = tuple(law_from_spec(c, base_dir) for c in obj["components"])
            return QuantileMixtureLaw(weights=tuple(obj["weights"]), components=comps)
        if kind == "empirical":
            path = Path(obj["samples_file"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            try:
                samples = np.loadtxt(path, delimiter=",").ravel()
            except OSError as exc:
                raise SpecError(f"cannot read samples file {path}: {exc}") from exc
            return EmpiricalLaw(samples=samples, source=str(obj["samples_file"]))
    except KeyError as exc:
        raise SpecError(f"law spec of kind '{kind}' is missing field {exc}") from exc
    raise SpecError(f"unknown law kind '{kind}'")


def law_to_spec(law: RadialLaw) -> dict:
    """JSON spec dict for a law."""
    if isinstance(law, ChiLaw):
        return {"kind": "chi", "d": law.dim}
    if isinstance(law, TRadialLaw):
        return {"kind": "t_radial", "d": law.dim, "nu": law.dof}
    if isinstance(law, DiracLaw):
        return {"kind": "dirac", "c": law.value}
    if isinstance(law, ScaledLaw):
        return {"kind": "scaled", "c": law.factor, "base": law_to_spec(law.base)}
    if isinstance(law, QuantileMixtureLaw):
        return {"kind": "quantile_mixture", "weights": list(law.weights),
                "components": [law_to_spec(c) for c in law.components]}
    if isinstance(law, EmpiricalLaw):
        if law.source is None:
            raise SpecError("empirical law built in memory has no samples_file to reference")
        return {"kind": "empirical", "samples_file": law.source}
    raise SpecError(f"cannot serialize law of type {type(law).__name__}")
