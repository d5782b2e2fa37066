"""Noncommutative functions on matrix levels and their block-difference operators.

Every family here is evaluated by the same formula at every level, so the
direct-sum and similarity axioms hold by construction; the test-suite is
what verifies them numerically.  The first and second order difference
operators are read off upper-triangular block evaluations::

    f([[a, b], [0, c]])          = [[f(a), Δf(a,c)(b)], [0, f(c)]]
    f([[a, b, 0], [0, c, d], [0, 0, e]])[0, 2] = Δ²f(a,c,e)(b,d)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .errors import DimensionError
from .hermitian import (as_cmatrix, guarded_inv, herm_inv_sqrt, imag_part,
                        min_eig, op_norm)
from .realization import LoewnerRealization

HALF_PLANE = "half_plane_self_map"
TEST_ONLY = "test_only"


class NCFunction:
    family: ClassVar[str]
    domain_kind: ClassVar[str] = HALF_PLANE

    def __call__(self, a) -> np.ndarray:
        a = as_cmatrix(a)
        if a.ndim != 2:
            raise DimensionError("evaluate one matrix at a time")
        return self._eval(a)

    def _eval(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scalar(self, z: complex) -> complex:
        """Level-one value by plain complex arithmetic (independent of the matrix path)."""
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_descriptor(self) -> dict:
        return {"family": self.family, "params": self.params()}

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


@dataclass(frozen=True, repr=False)
class Moebius(NCFunction):
    """``x -> (a x + b)(c x + d)^-1`` with real coefficients, normalized to det 1."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    family: ClassVar[str] = "moebius"

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not det > 0:
            raise ValueError(f"Moebius coefficients need ad - bc > 0, got {det}")
        k = 1.0 / np.sqrt(det)
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)) * k)

    def _eval(self, x):
        eye = np.eye(x.shape[0])
        den = self.c * x + self.d * eye
        return (self.a * x + self.b * eye) @ guarded_inv(den, "Moebius denominator")

    def scalar(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def params(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True, repr=False)
class NevanlinnaPick(NCFunction):
    """``x -> s + t x + sum_k w_k (r_k - x)^-1`` with ``t >= 0`` and ``w_k > 0``."""

    s: float = 0.0
    t: float = 1.0
    poles: tuple = ()
    weights: tuple = ()
    family: ClassVar[str] = "nevanlinna_pick"

    def __post_init__(self):
        poles = tuple(float(r) for r in self.poles)
        weights = tuple(float(w) for w in self.weights)
        if len(poles) != len(weights):
            raise ValueError("poles and weights differ in length")
        if self.t < 0 or any(w <= 0 for w in weights):
            raise ValueError("need t >= 0 and positive weights")
        if self.t + sum(weights) <= 0:
            raise ValueError("constant function does not map into the open half-plane")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "t", float(self.t))

    def _eval(self, x):
        eye = np.eye(x.shape[0])
        out = self.s * eye + self.t * x
        for r, w in zip(self.poles, self.weights):
            out = out + w * guarded_inv(r * eye - x, f"resolvent at pole {r}")
        return out

    def scalar(self, z):
        out = self.s + self.t * z
        for r, w in zip(self.poles, self.weights):
            out += w / (r - z)
        return out

    def params(self):
        return {"s": self.s, "t": self.t, "poles": list(self.poles), "weights": list(self.weights)}


@dataclass(frozen=True, repr=False)
class Polynomial(NCFunction):
    """``x -> sum_k coefficients[k] x^k``.

    Only for closed-form oracles, except that degree-one polynomials with
    positive real slope and a constant in the closed upper half-plane are
    genuine half-plane self-maps and are flagged as such.
    """

    coefficients: tuple = (0.0, 1.0)
    family: ClassVar[str] = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))

    @property
    def domain_kind(self):
        co = self.coefficients
        if len(co) == 2 and co[1].imag == 0 and co[1].real > 0 and co[0].imag >= 0:
            return HALF_PLANE
        return TEST_ONLY

    def _eval(self, x):
        out = np.zeros_like(x)
        eye = np.eye(x.shape[0])
        for c in reversed(self.coefficients):
            out = out @ x + c * eye
        return out

    def scalar(self, z):
        out = 0j
        for c in reversed(self.coefficients):
            out = out * z + c
        return out

    def params(self):
        return {"coefficients": [[c.real, c.imag] for c in self.coefficients]}


@dataclass(frozen=True, repr=False)
class LoewnerFunction(NCFunction):
    """One-variable nc function ``x -> h(x, ..., x)`` induced by a realization."""

    realization: LoewnerRealization
    family: ClassVar[str] = "loewner_realization"

    def _eval(self, x):
        return self.realization.evaluate([x] * self.realization.n_vars)

    def scalar(self, z):
        return complex(self._eval(np.array([[z]], dtype=complex))[0, 0])

    def params(self):
        return self.realization.to_json()


def identity() -> Moebius:
    return Moebius(1.0, 0.0, 0.0, 1.0)


def inversion() -> Moebius:
    """``z -> -1/z``."""
    return Moebius(0.0, -1.0, 1.0, 0.0)


def from_descriptor(desc) -> NCFunction:
    if isinstance(desc, str):
        desc = json.loads(desc)
    fam, p = desc["family"], desc.get("params", {})
    if fam == "moebius":
        return Moebius(p["a"], p["b"], p["c"], p["d"])
    if fam == "nevanlinna_pick":
        return NevanlinnaPick(p.get("s", 0.0), p.get("t", 0.0), p.get("poles", ()), p.get("weights", ()))
    if fam == "polynomial":
        co = [complex(*c) if isinstance(c, (list, tuple)) else complex(c) for c in p["coefficients"]]
        return Polynomial(tuple(co))
    if fam == "loewner_realization":
        return LoewnerFunction(LoewnerRealization.from_json(p))
    raise ValueError(f"unknown function family {fam!r}")


def _normalized_norm(a, c, b) -> float:
    """``||(Im a)^-1/2 b (Im c)^-1/2||``; raises DomainError off the half-plane."""
    return op_norm(herm_inv_sqrt(imag_part(a)) @ b @ herm_inv_sqrt(imag_part(c)))


def _block_scale(f: NCFunction, pairs) -> float:
    """Default ε for block extraction; also validates the points of half-plane maps."""
    if f.domain_kind == TEST_ONLY:
        return 1.0
    return 1.0 / (1.0 + sum(_normalized_norm(a, c, b) for a, c, b in pairs))


def _rect(b, rows, cols):
    b = np.asarray(b, dtype=complex)
    if b.ndim == 0:
        b = b.reshape(1, 1)
    if b.shape != (rows, cols):
        raise DimensionError(f"direction has shape {b.shape}, expected {(rows, cols)}")
    return b


def delta_f(f: NCFunction, a, c, b, eps: float | None = None) -> np.ndarray:
    """First difference-differential ``Δf(a, c)(b)``.

    ``eps`` scales ``b`` so the block argument sits strictly inside the
    half-plane; the default is ``1 / (1 + ||(Im a)^-1/2 b (Im c)^-1/2||)``.
    For half-plane maps ``a`` and ``c`` must lie in the half-plane
    (DomainError otherwise); test-only polynomials use ``eps = 1``.
    """
    a, c = as_cmatrix(a), as_cmatrix(c)
    n, m = a.shape[0], c.shape[0]
    b = _rect(b, n, m)
    scale = _block_scale(f, [(a, c, b)])
    eps = scale if eps is None else eps
    block = np.block([[a, eps * b], [np.zeros((m, n)), c]])
    return f(block)[:n, n:] / eps


def derivative(f: NCFunction, a, b, eps: float | None = None) -> np.ndarray:
    """Fréchet derivative ``f'(a)(b) = Δf(a, a)(b)``."""
    return delta_f(f, a, a, b, eps)


def delta2_f(f: NCFunction, a, c, e, b, d, eps: float | None = None) -> np.ndarray:
    """Second difference-differential ``Δ²f(a, c, e)(b, d)``."""
    a, c, e = as_cmatrix(a), as_cmatrix(c), as_cmatrix(e)
    n, m, p = a.shape[0], c.shape[0], e.shape[0]
    b, d = _rect(b, n, m), _rect(d, m, p)
    scale = _block_scale(f, [(a, c, b), (c, e, d)])
    eps = scale if eps is None else eps
    Z = np.zeros
    block = np.block([[a, eps * b, Z((n, p))],
                      [Z((m, n)), c, eps * d],
                      [Z((p, n)), Z((p, m)), e]])
    return f(block)[:n, n + m:] / eps ** 2


def block_in_half_plane(a, c, b, tol: float = 0.0) -> bool:
    """Direct test that ``[[a, b], [0, c]]`` has positive definite imaginary part."""
    a, c = as_cmatrix(a), as_cmatrix(c)
    b = _rect(b, a.shape[0], c.shape[0])
    block = np.block([[a, b], [np.zeros((c.shape[0], a.shape[0])), c]])
    return min_eig(imag_part(block)) > tol


def direct_sum(*mats) -> np.ndarray:
    mats = [as_cmatrix(x) for x in mats]
    size = sum(x.shape[0] for x in mats)
    out = np.zeros((size, size), complex)
    i = 0
    for x in mats:
        k = x.shape[0]
        out[i:i + k, i:i + k] = x
        i += k
    return out


def amplify(x, p: int) -> np.ndarray:
    """``x (x) 1_p`` laid out as the p-fold direct sum of x."""
    return np.kron(np.eye(p), as_cmatrix(x))

