"""Recovering an ambient system and form from several reductions.

All solves are pointwise: stacked projection differentials recover the field,
stacked contraction maps recover the form, and the corresponding kernel /
annihilator intersections certify uniqueness beforehand.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .calculus import ChartMap, DifferentialForm, MultiVectorField, pullback
from .errors import IncompatibleReductionsError
from .exterior import (
    COVARIANT,
    AlternatingTensor,
    contraction_matrix_for_multivector,
    matrix_rank,
    null_space,
)

CONSISTENCY_TOL = 1e-6


def _projection_map(p) -> ChartMap:
    return p.projection if hasattr(p, "projection") else p


def kernel_intersection_dim(projections, g) -> int:
    """dim of the intersection of ker T_g(pi_i) over the given projections."""
    g = np.asarray(g, dtype=float)
    stacked = np.vstack([_projection_map(p).d(g) for p in projections])
    return null_space(stacked).shape[1]


def reconstruct_field(projected, projections, g):
    """Solve T_g(pi_i) X(g) = X^i(pi_i(g)) for the ambient field value.

    Returns (value, residual); requires a trivial kernel intersection and
    consistent reduced data.
    """
    g = np.asarray(g, dtype=float)
    if kernel_intersection_dim(projections, g) != 0:
        raise IncompatibleReductionsError(
            f"kernel intersection nontrivial at {g}: field not determined")
    rows, rhs = [], []
    for Xi, p in zip(projected, projections):
        pm = _projection_map(p)
        rows.append(pm.d(g))
        rhs.append(np.asarray(Xi(pm(g)), dtype=float))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ x - b)))
    if residual > CONSISTENCY_TOL:
        raise IncompatibleReductionsError(
            f"reductions incompatible at {g}: residual {residual:.3e}")
    return x, residual


def annihilator_intersection_dim(multivectors: Sequence[MultiVectorField],
                                 ell: int, g) -> int:
    """dim of the intersection of the ell-annihilators of the Z_i at g."""
    g = np.asarray(g, dtype=float)
    stacked = np.vstack([contraction_matrix_for_multivector(Z(g), ell)
                         for Z in multivectors])
    return null_space(stacked).shape[1]


def reconstruct_form(invariants, ell: int, g):
    """Solve iota_{Z_i(g)} Theta(g) = (pi_i^* Theta^i)(g) for Theta(g).

    ``invariants`` is a list of (reduced form, multivector Z_i, projection).
    Returns (AlternatingTensor(ell), residual).
    """
    g = np.asarray(g, dtype=float)
    multivectors = [Z for _, Z, _ in invariants]
    if annihilator_intersection_dim(multivectors, ell, g) != 0:
        raise IncompatibleReductionsError(
            f"annihilator intersection nontrivial at {g}: form not determined")
    rows, rhs = [], []
    n = None
    for form_i, Z, p in invariants:
        pm = _projection_map(p)
        n = pm.source.dim
        rows.append(contraction_matrix_for_multivector(Z(g), ell))
        rhs.append(pullback(pm, form_i)(g).coeffs)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    if matrix_rank(A) < A.shape[1]:
        raise IncompatibleReductionsError(
            f"insufficient reductions at {g}: stacked system rank-deficient")
    c, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ c - b)))
    return AlternatingTensor(n, ell, COVARIANT, c), residual
