"""Signed margins for the contraction inequalities of half-plane self-maps.

For a self-map ``f`` of the matrix upper half-plane, ``a, c`` in the
half-plane and any direction ``b``::

    ||(Im f(a))^-1/2 Δf(a,c)(b) (Im f(c))^-1/2|| <= ||(Im a)^-1/2 b (Im c)^-1/2||

Each function returns a :class:`ContractionMargin` whose ``margin`` is
nonnegative exactly when the inequality holds.  Operator inequalities are
scored by the smallest eigenvalue of ``RHS - LHS``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConditioningError, PreconditionError
from .hermitian import (adjoint, as_cmatrix, herm_inv, herm_inv_sqrt, hermitize,
                        imag_part, min_eig, op_norm)
from .ncfunction import TEST_ONLY, NCFunction, delta2_f, delta_f


class MarginForm(str, Enum):
    NORM = "norm"
    EST = "est"
    EST_PRIME = "est_prime"
    EST_DOUBLE_PRIME = "est_double_prime"
    EST_TRIPLE_PRIME = "est_triple_prime"
    SECOND_ORDER = "second_order"


ORDER_FORMS = (MarginForm.EST, MarginForm.EST_PRIME,
               MarginForm.EST_DOUBLE_PRIME, MarginForm.EST_TRIPLE_PRIME)


@dataclass(frozen=True)
class ContractionMargin:
    """``margin == rhs - lhs``; ``scale`` is the size used for tolerances.

    For operator forms ``lhs`` is the norm of the left-hand operator and
    ``rhs = lhs + min eig(RHS - LHS)``.  With the scalar right-hand sides of
    ``est`` and ``est'`` that makes ``rhs`` exactly the squared norm bound.
    """

    lhs: float
    rhs: float
    margin: float
    form: MarginForm
    scale: float

    def holds(self, tol: float = 1e-8) -> bool:
        return self.margin >= -tol * (1.0 + self.scale)


def _imag_f(f: NCFunction, x, fx=None):
    fx = f(x) if fx is None else fx
    im = imag_part(fx)
    lam = min_eig(im)
    if lam < 1e-12 * max(1.0, op_norm(fx)):
        raise ConditioningError(f"Im f is nearly singular (min eig {lam:.3e})", min_eigenvalue=lam)
    return im


def _check_self_map(f: NCFunction):
    if f.domain_kind == TEST_ONLY:
        raise PreconditionError(f"{f.family} is not a half-plane self-map")


class _Pieces:
    """Shared intermediate quantities for one ``(f, a, c, b)`` sample."""

    def __init__(self, f, a, c, b):
        _check_self_map(f)
        a, c = as_cmatrix(a), as_cmatrix(c)
        b = np.asarray(b, dtype=complex).reshape(a.shape[0], c.shape[0])
        self.ia_is, self.ic_is = herm_inv_sqrt(imag_part(a)), herm_inv_sqrt(imag_part(c))
        self.ifa, self.ifc = _imag_f(f, a), _imag_f(f, c)
        self.delta = delta_f(f, a, c, b)
        self.k = op_norm(self.ia_is @ b @ self.ic_is) ** 2
        self.x = herm_inv_sqrt(self.ifa) @ self.delta @ herm_inv_sqrt(self.ifc)


def contraction_margin(f: NCFunction, a, c, b) -> ContractionMargin:
    """Norm form: ``||(Im a)^-1/2 b (Im c)^-1/2|| - ||(Im f(a))^-1/2 Δf(a,c)(b) (Im f(c))^-1/2||``."""
    p = _Pieces(f, a, c, b)
    rhs = float(np.sqrt(p.k))
    lhs = op_norm(p.x)
    return ContractionMargin(lhs, rhs, rhs - lhs, MarginForm.NORM, rhs)


def _order_from_pieces(p: _Pieces, form: MarginForm) -> ContractionMargin:
    d = p.delta
    if form == MarginForm.EST:
        L, R = adjoint(p.x) @ p.x, p.k * np.eye(p.x.shape[1])
    elif form == MarginForm.EST_PRIME:
        L, R = p.x @ adjoint(p.x), p.k * np.eye(p.x.shape[0])
    elif form == MarginForm.EST_DOUBLE_PRIME:
        L, R = adjoint(d) @ herm_inv(p.ifa) @ d, p.k * p.ifc
    elif form == MarginForm.EST_TRIPLE_PRIME:
        L, R = d @ herm_inv(p.ifc) @ adjoint(d), p.k * p.ifa
    else:
        raise ValueError(f"{form} is not an operator-order form")
    L, R = hermitize(L), hermitize(R)
    margin = min_eig(R - L)
    lhs = op_norm(L)
    return ContractionMargin(lhs, lhs + margin, margin, form, op_norm(R))


def order_margin(f: NCFunction, a, c, b, form) -> ContractionMargin:
    return _order_from_pieces(_Pieces(f, a, c, b), MarginForm(form))


def all_margins(f: NCFunction, a, c, b) -> dict:
    """Norm form plus the four operator forms, sharing one evaluation."""
    p = _Pieces(f, a, c, b)
    rhs = float(np.sqrt(p.k))
    lhs = op_norm(p.x)
    out = {MarginForm.NORM: ContractionMargin(lhs, rhs, rhs - lhs, MarginForm.NORM, rhs)}
    for form in ORDER_FORMS:
        out[form] = _order_from_pieces(p, form)
    return out


@dataclass(frozen=True)
class SecondOrderTerms:
    lhs_matrix: np.ndarray
    rhs_matrix: np.ndarray
    e11: np.ndarray
    e12: np.ndarray
    e22: np.ndarray
    d23: np.ndarray
    d34: np.ndarray
    d2: np.ndarray
    norm_factor: float


def second_order_terms(f: NCFunction, a2, a3, a4, c, b, cross_term: str = "e11") -> SecondOrderTerms:
    """Both sides of the second-order estimate built from the block-inverse entries.

    ``c`` connects ``a2`` to ``a3`` and ``b`` connects ``a3`` to ``a4``.
    ``cross_term`` selects the middle term: ``"e11"`` is what the 2x2
    block inversion yields, ``"e12"`` evaluates ``e12`` in its place.
    """
    _check_self_map(f)
    a2, a3, a4 = (as_cmatrix(x) for x in (a2, a3, a4))
    n2, n3, n4 = a2.shape[0], a3.shape[0], a4.shape[0]
    c = np.asarray(c, dtype=complex).reshape(n2, n3)
    b = np.asarray(b, dtype=complex).reshape(n3, n4)
    ia3, ia4 = imag_part(a3), imag_part(a4)
    schur_arg = hermitize(ia3 - b @ herm_inv(ia4) @ adjoint(b) / 4)
    if min_eig(schur_arg) <= 0:
        raise PreconditionError("[[a3, b], [0, a4]] is not in the upper half-plane")
    if2, if3, if4 = _imag_f(f, a2), _imag_f(f, a3), _imag_f(f, a4)
    d23 = delta_f(f, a2, a3, c)
    d34 = delta_f(f, a3, a4, b)
    d2 = delta2_f(f, a2, a3, a4, c, b)
    if4_inv = herm_inv(if4)
    e11 = herm_inv(hermitize(if3 - d34 @ if4_inv @ adjoint(d34) / 4))
    e12 = e11 @ (d34 / -2j) @ if4_inv
    e22 = herm_inv(hermitize(if4 - adjoint(d34) @ herm_inv(if3) @ d34 / 4))
    mid = {"e11": e11, "e12": e12}[cross_term]
    cross = d23 @ mid @ d34 @ if4_inv @ adjoint(d2)
    lhs = d23 @ e11 @ adjoint(d23) - imag_part(cross) + d2 @ e22 @ adjoint(d2)
    ia2_is = herm_inv_sqrt(imag_part(a2))
    factor = op_norm(ia2_is @ c @ herm_inv(schur_arg) @ adjoint(c) @ ia2_is)
    return SecondOrderTerms(hermitize(lhs), factor * if2, e11, e12, e22, d23, d34, d2, factor)


def second_order_margin(f: NCFunction, a2, a3, a4, c, b, cross_term: str = "e11") -> ContractionMargin:
    t = second_order_terms(f, a2, a3, a4, c, b, cross_term)
    margin = min_eig(t.rhs_matrix - t.lhs_matrix)
    lhs = op_norm(t.lhs_matrix)
    return ContractionMargin(lhs, lhs + margin, margin, MarginForm.SECOND_ORDER, op_norm(t.rhs_matrix))
