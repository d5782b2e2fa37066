"""Loewner operatorial realizations of several-variable Pick functions.

A realization is stored as a selfadjoint ``A`` acting on the ``M`` summand,
a partition of the standard basis of ``C^(dim_n + dim_m)`` (one block of
indices per variable, so the projections are exactly orthogonal), a unit
vector ``v`` and a real shift ``s``.  Evaluation at level ``k`` replaces
``z_1 P_1 + ... + z_n P_n`` by ``sum_j P_j (x) a_j`` with ``a_j`` in
``M_k(C)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .hermitian import (DEFAULT_TOL, adjoint, as_cmatrix, hermitize, imag_part,
                        matrix_from_json, matrix_to_json, min_eig)


@dataclass(frozen=True)
class LoewnerRealization:
    dim_n: int
    dim_m: int
    A: np.ndarray
    partition: tuple
    v: np.ndarray
    s: float = 0.0
    check_positivity: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.dim_n < 0 or self.dim_m < 0 or self.dim_n + self.dim_m == 0:
            raise DimensionError("realization needs a nonzero total dimension")
        A = np.asarray(self.A, dtype=complex).reshape(self.dim_m, self.dim_m)
        object.__setattr__(self, "A", hermitize(A))
        d = self.dim
        parts = tuple(tuple(int(i) for i in p) for p in self.partition)
        flat = sorted(i for p in parts for i in p)
        if flat != list(range(d)):
            raise ValueError(f"partition {parts} is not a partition of range({d})")
        object.__setattr__(self, "partition", parts)
        v = np.asarray(self.v, dtype=complex).reshape(d)
        nv = np.linalg.norm(v)
        if nv == 0:
            raise ValueError("state vector must be nonzero")
        object.__setattr__(self, "v", v / nv)
        object.__setattr__(self, "s", float(self.s))

    @property
    def dim(self) -> int:
        return self.dim_n + self.dim_m

    @property
    def n_vars(self) -> int:
        return len(self.partition)

    def projections(self) -> list[np.ndarray]:
        out = []
        for part in self.partition:
            P = np.zeros((self.dim, self.dim))
            P[list(part), list(part)] = 1.0
            out.append(P)
        return out

    def _blocks(self):
        N, m, d = self.dim_n, self.dim_m, self.dim
        D = np.zeros((d, d), complex)
        D[:N, :N] = np.eye(N)
        D[N:, N:] = self.A
        E = np.zeros((d, d), complex)
        E[N:, N:] = np.eye(m)
        J = np.zeros((d, d), complex)
        J[:N, :N] = -1j * np.eye(N)
        J[N:, N:] = np.eye(m) - 1j * self.A
        return D, E, J

    def operator(self, points: Sequence) -> np.ndarray:
        """The amplified ``M(a_1, ..., a_n)`` acting on ``C^dim (x) C^k``."""
        if len(points) != self.n_vars:
            raise DimensionError(f"expected {self.n_vars} matrix variables, got {len(points)}")
        pts = [as_cmatrix(a) for a in points]
        k = pts[0].shape[0]
        if any(a.shape != (k, k) for a in pts):
            raise DimensionError("all variables must share one level")
        I = np.eye(k)
        D, E, J = (np.kron(X, I) for X in self._blocks())
        Z = sum(np.kron(P, a) for P, a in zip(self.projections(), pts))
        middle = D - Z @ E
        sv = np.linalg.svd(middle, compute_uv=False)
        if sv[-1] <= 1e-12 * max(1.0, sv[0]):
            raise DomainError("realization resolvent is singular",
                              smallest_singular_value=float(sv[-1]))
        return J @ np.linalg.solve(middle, Z @ D + E) @ np.linalg.inv(J)

    def evaluate(self, points: Sequence, tol: float = DEFAULT_TOL) -> np.ndarray:
        """``s (x) 1_k + (phi_v (x) Id_k)(M(a))``."""
        M = self.operator(points)
        k = M.shape[0] // self.dim
        if self.check_positivity:
            lam = min_eig(imag_part(M))
            if lam <= -tol * max(1.0, float(np.abs(M).max())):
                raise DomainError(f"Im M(a) is not positive (min eig {lam:.3e})", min_eigenvalue=lam)
        V = np.kron(self.v[:, None], np.eye(k))
        return self.s * np.eye(k) + adjoint(V) @ M @ V

    def to_json(self) -> dict:
        return {
            "dim_n": self.dim_n,
            "dim_m": self.dim_m,
            "A": matrix_to_json(self.A) if self.dim_m else {"n": 0, "entries": []},
            "partition": [list(p) for p in self.partition],
            "v": [[float(z.real), float(z.imag)] for z in self.v],
            "s": self.s,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LoewnerRealization":
        A = matrix_from_json(obj["A"]) if int(obj["dim_m"]) else np.zeros((0, 0), complex)
        v = np.array([complex(re, im) for re, im in obj["v"]])
        return cls(int(obj["dim_n"]), int(obj["dim_m"]), A, obj["partition"], v, obj.get("s", 0.0))


def random_realization(rng: np.random.Generator, max_dim_n: int = 2, max_dim_m: int = 2,
                       n_vars: int = 1) -> LoewnerRealization:
    dim_n = int(rng.integers(0, max_dim_n + 1))
    dim_m = int(rng.integers(1 if dim_n == 0 else 0, max_dim_m + 1))
    d = dim_n + dim_m
    G = rng.normal(size=(dim_m, dim_m)) + 1j * rng.normal(size=(dim_m, dim_m))
    A = (G + adjoint(G)) / 2
    labels = rng.integers(0, n_vars, size=d)
    labels[:n_vars] = np.arange(min(n_vars, d))
    partition = [[i for i in range(d) if labels[i] == j] for j in range(n_vars)]
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return LoewnerRealization(dim_n, dim_m, A, partition, v, float(rng.normal()))
