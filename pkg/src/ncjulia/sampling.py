"""Seeded random generators for matrices, half-plane points and function families.

Every sample draws from its own generator, keyed by ``(master_seed,
index)`` through :class:`numpy.random.SeedSequence`, so results do not
depend on execution order.
"""

from __future__ import annotations

import numpy as np

from .hermitian import adjoint
from .ncfunction import LoewnerFunction, Moebius, NCFunction, NevanlinnaPick
from .realization import random_realization

FAMILIES = ("moebius", "nevanlinna_pick", "loewner_realization")


def _seq(master_seed: int, keys) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in keys))


def sample_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Generator for the sample addressed by ``keys`` (usually just its index)."""
    return np.random.default_rng(_seq(master_seed, keys))


def sample_seed(master_seed: int, *keys: int) -> int:
    """A 64-bit integer identifying one sample (recorded in reports)."""
    return int(_seq(master_seed, keys).generate_state(1, dtype=np.uint64)[0])


def complex_gaussian(rng, shape) -> np.ndarray:
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2)


def random_hermitian(rng, n: int) -> np.ndarray:
    g = complex_gaussian(rng, (n, n))
    return (g + adjoint(g)) / 2


def random_positive(rng, n: int) -> np.ndarray:
    """``I + G G* / n`` with ``G`` complex Gaussian; condition numbers stay moderate."""
    g = complex_gaussian(rng, (n, n))
    return np.eye(n) + g @ adjoint(g) / n


def random_half_plane_point(rng, n: int) -> np.ndarray:
    return random_hermitian(rng, n) + 1j * random_positive(rng, n)


def random_moebius(rng) -> Moebius:
    while True:
        a, b, c, d = rng.normal(size=4)
        det = a * d - b * c
        if abs(det) > 0.1:
            break
    if det < 0:
        a, b = -a, -b
    return Moebius(a, b, c, d)


def random_nevanlinna_pick(rng, max_poles: int = 3) -> NevanlinnaPick:
    k = int(rng.integers(1, max_poles + 1))
    t = float(rng.uniform(0.0, 2.0)) if rng.random() < 0.7 else 0.0
    poles = tuple(2.0 * rng.normal(size=k))
    weights = tuple(np.exp(rng.normal(size=k)))
    return NevanlinnaPick(float(rng.normal()), t, poles, weights)


def random_loewner_function(rng) -> LoewnerFunction:
    return LoewnerFunction(random_realization(rng, n_vars=int(rng.integers(1, 3))))


def random_function(rng, family: str) -> NCFunction:
    if family == "moebius":
        return random_moebius(rng)
    if family == "nevanlinna_pick":
        return random_nevanlinna_pick(rng)
    if family == "loewner_realization":
        return random_loewner_function(rng)
    raise ValueError(f"no sampler for family {family!r}")


def random_invertible(rng, n: int, max_cond: float = 1e3) -> np.ndarray:
    while True:
        t = complex_gaussian(rng, (n, n)) + np.eye(n)
        if np.linalg.cond(t) <= max_cond:
            return t


def random_unit_vectors(rng, n: int, count: int) -> np.ndarray:
    x = complex_gaussian(rng, (count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
