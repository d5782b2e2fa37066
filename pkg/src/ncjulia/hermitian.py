"""Complex Hermitian matrix primitives.

All functions accept a single ``(n, n)`` array; the elementwise ones
(:func:`imag_part`, :func:`real_part`, :func:`op_norm`, :func:`min_eig`,
:func:`herm_sqrt`, :func:`herm_inv_sqrt`) also broadcast over leading
stack axes, which the sampling suites rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DimensionError, DomainError, NumericError

DEFAULT_TOL = 1e-10
MAX_COND = 1e12


def adjoint(x: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(x, -1, -2))


def as_cmatrix(b) -> np.ndarray:
    """Coerce to a finite square complex array (stacks allowed)."""
    b = np.asarray(b, dtype=complex)
    if b.ndim == 0:
        b = b.reshape(1, 1)
    if b.ndim < 2 or b.shape[-1] != b.shape[-2]:
        raise DimensionError(f"expected a square matrix, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise DomainError("matrix has non-finite entries")
    return b


def hermitize(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return (x + adjoint(x)) / 2


def imag_part(b) -> np.ndarray:
    """``(b - b*) / 2i``, Hermitian by construction."""
    b = as_cmatrix(b)
    return hermitize((b - adjoint(b)) / 2j)


def real_part(b) -> np.ndarray:
    """``(b + b*) / 2``."""
    b = as_cmatrix(b)
    return hermitize((b + adjoint(b)) / 2)


def op_norm(b):
    """Largest singular value (operator 2-norm)."""
    b = np.asarray(b, dtype=complex)
    if b.ndim < 2:
        b = np.atleast_2d(b)
    out = np.linalg.norm(b, ord=2, axis=(-2, -1))
    return float(out) if np.ndim(out) == 0 else out


def _eigh(x):
    try:
        return np.linalg.eigh(hermitize(x))
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(x) if np.ndim(x) == 2 else None
        raise NumericError(f"Hermitian eigensolver failed (cond={cond}): {exc}") from exc


def min_eig(x):
    """Smallest eigenvalue of the Hermitian part of ``x``."""
    try:
        w = np.linalg.eigvalsh(hermitize(x))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc
    out = w[..., 0]
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PosdefCertificate:
    is_positive: bool
    min_eigenvalue: float
    tolerance_used: float
    route: str = "eig"

    def __post_init__(self):
        object.__setattr__(self, "is_positive", bool(self.is_positive))
        object.__setattr__(self, "min_eigenvalue", float(self.min_eigenvalue))
        object.__setattr__(self, "tolerance_used", float(self.tolerance_used))

    def __bool__(self):
        return self.is_positive


def is_positive_definite(x, tol: float = DEFAULT_TOL) -> PosdefCertificate:
    """Strict positivity test ``min eig(x) > tol * max(1, ||x||)``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    x = hermitize(as_cmatrix(x))
    w, _ = _eigh(x)
    lam = float(w[0])
    used = tol * max(1.0, float(np.max(np.abs(w))))
    return PosdefCertificate(lam > used, lam, used)


def _checked_spectrum(x, *, strict: bool, tol: float, what: str):
    x = as_cmatrix(x)
    w, V = _eigh(x)
    scale = np.maximum(1.0, np.max(np.abs(w), axis=-1))
    lo = w[..., 0]
    if strict:
        if np.any(lo <= 0):
            bad = float(np.min(lo))
            raise DomainError(f"{what}: matrix is not positive definite (min eig {bad:.3e})",
                              min_eigenvalue=bad)
        cond = w[..., -1] / lo
        if np.any(cond > MAX_COND):
            c = float(np.max(cond))
            raise ConditioningError(f"{what}: condition number {c:.3e} exceeds {MAX_COND:.0e}",
                                    condition_number=c, min_eigenvalue=float(np.min(lo)))
    elif np.any(lo < -tol * scale):
        bad = float(np.min(lo))
        raise DomainError(f"{what}: matrix is not positive semidefinite (min eig {bad:.3e})",
                          min_eigenvalue=bad)
    return w, V


def _spectral(w, V, fn):
    return hermitize((V * fn(w)[..., None, :]) @ adjoint(V))


def herm_sqrt(x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive square root; small negative eigenvalues (within tol) are clipped."""
    w, V = _checked_spectrum(x, strict=False, tol=tol, what="herm_sqrt")
    return _spectral(w, V, lambda t: np.sqrt(np.clip(t, 0.0, None)))


def herm_inv_sqrt(x) -> np.ndarray:
    w, V = _checked_spectrum(x, strict=True, tol=0.0, what="herm_inv_sqrt")
    return _spectral(w, V, lambda t: 1.0 / np.sqrt(t))


def herm_inv(x) -> np.ndarray:
    """Inverse of a positive definite matrix, with the conditioning guard."""
    w, V = _checked_spectrum(x, strict=True, tol=0.0, what="herm_inv")
    return _spectral(w, V, lambda t: 1.0 / t)


def guarded_inv(x, what: str = "inverse") -> np.ndarray:
    """General inverse refusing matrices with cond > 1e12."""
    x = as_cmatrix(x)
    s = np.linalg.svd(x, compute_uv=False)
    smin, smax = float(s[..., -1].min()), float(s[..., 0].max())
    if smin == 0.0 or smax / smin > MAX_COND:
        cond = np.inf if smin == 0.0 else smax / smin
        raise ConditioningError(f"{what}: singular or ill-conditioned matrix (cond {cond:.3e})",
                                condition_number=cond, smallest_singular_value=smin)
    return np.linalg.inv(x)


def block2_is_positive(u, v, w, tol: float = DEFAULT_TOL, route: str = "schur_w") -> PosdefCertificate:
    """Strict positivity of the block matrix ``[[u, v], [v*, w]]``.

    ``route="schur_w"`` tests ``u, w > 0`` and ``u - v w^-1 v* > 0``;
    ``"schur_u"`` uses ``w - v* u^-1 v`` instead; ``"direct"`` eigensolves
    the assembled block.  A Schur route whose pivot is too ill-conditioned to
    invert falls back to the direct eigensolve.
    """
    u, w = hermitize(as_cmatrix(u)), hermitize(as_cmatrix(w))
    v = np.asarray(v, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1, 1)
    if v.shape != (u.shape[0], w.shape[0]):
        raise DimensionError(f"block shapes {u.shape}, {v.shape}, {w.shape} do not fit")
    block = np.block([[u, v], [adjoint(v), w]])
    used = tol * max(1.0, op_norm(block))
    if route == "direct":
        lam = min_eig(block)
        return PosdefCertificate(lam > used, lam, used, "direct")
    if route not in ("schur_w", "schur_u"):
        raise ValueError(f"unknown route {route!r}")
    lu, lw = min_eig(u), min_eig(w)
    if lu <= used or lw <= used:
        lam = min(lu, lw)
        return PosdefCertificate(False, lam, used, route)
    try:
        if route == "schur_w":
            schur = u - v @ herm_inv(w) @ adjoint(v)
        else:
            schur = w - adjoint(v) @ herm_inv(u) @ v
    except ConditioningError:
        lam = min_eig(block)
        return PosdefCertificate(lam > used, lam, used, "direct")
    lam = min(lu, lw, min_eig(schur))
    return PosdefCertificate(lam > used, lam, used, route)


def loewner_leq(x, y, tol: float = DEFAULT_TOL) -> bool:
    """``x <= y`` in the Loewner order, up to ``tol * max(1, ||y - x||)``."""
    d = hermitize(np.asarray(y, dtype=complex) - np.asarray(x, dtype=complex))
    return min_eig(d) >= -tol * max(1.0, op_norm(d))


@dataclass(frozen=True)
class HalfPlanePoint:
    """A matrix with strictly positive definite imaginary part."""

    value: np.ndarray
    im_margin: float

    @classmethod
    def from_matrix(cls, value, tol: float = 0.0) -> "HalfPlanePoint":
        value = as_cmatrix(value)
        if value.ndim != 2:
            raise DimensionError("HalfPlanePoint wants a single matrix")
        lam = min_eig(imag_part(value))
        if lam <= tol:
            raise DomainError(f"Im part not positive definite (min eig {lam:.3e})", min_eigenvalue=lam)
        value = value.copy()
        value.setflags(write=False)
        return cls(value, lam)

    @property
    def level(self) -> int:
        return self.value.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.value if dtype is None else self.value.astype(dtype)


def matrix_to_json(b) -> dict:
    b = as_cmatrix(b)
    if b.ndim != 2:
        raise DimensionError("only single matrices serialize")
    return {"n": int(b.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in b.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, str):
        obj = json.loads(obj)
    n = int(obj["n"])
    entries = obj["entries"]
    if len(entries) != n * n:
        raise DimensionError(f"expected {n * n} entries, got {len(entries)}")
    out = np.array([complex(re, im) for re, im in entries], dtype=complex).reshape(n, n)
    return as_cmatrix(out)


def dumps_matrix(b) -> str:
    return json.dumps(matrix_to_json(b))


def loads_matrix(s: str) -> np.ndarray:
    return matrix_from_json(json.loads(s))
