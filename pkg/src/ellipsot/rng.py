"""Seedable, splittable random streams.

Streams are Philox counter-based generators keyed by (seed, stream index),
so parallel consumers get reproducible, non-overlapping draws. Gaussian
variates use an explicit Box-Muller transform of the uniform stream for
bit-identical results across platforms.
"""

from __future__ import annotations

import numpy as np

# Uniform draws are clipped into this open interval before any quantile
# evaluation; quantile(1.0) is infinite for unbounded laws.
U_LO = 1e-16
U_HI = 1.0 - 1e-16


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for stream `index` of the root `seed`."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(seq))


def uniform_open(gen: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms in the open interval (0, 1)."""
    return np.clip(gen.random(n), U_LO, U_HI)


def standard_normals(gen: np.random.Generator, n: int) -> np.ndarray:
    """n standard normals via Box-Muller on the uniform stream."""
    m = (n + 1) // 2
    u1 = 1.0 - gen.random(m)  # in (0, 1]
    u2 = gen.random(m)
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    z = np.concatenate([rad * np.cos(ang), rad * np.sin(ang)])
    return z[:n]
