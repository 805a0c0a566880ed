"""Lie-algebra analysis of finite families of vector fields.

Structure constants are fitted numerically by stacked least squares over
sample points; unimodularity, dual coframes, invariant volume forms, and
Casimir tensors are derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import Chart, DiffBackend, DifferentialForm, VectorField, lie_bracket
from .errors import DegenerateFrameError, NotClosedError
from .exterior import COVARIANT, AlternatingTensor

HALF_INT_TOL = 1e-9


class FieldFamily:
    """Ordered basis of vector fields on a common chart."""

    def __init__(self, chart: Chart, fields: Sequence[VectorField], name=""):
        self.chart = chart
        self.fields = list(fields)
        self.name = name

    def __len__(self):
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)

    def __getitem__(self, i):
        return self.fields[i]

    def component_matrix(self, x) -> np.ndarray:
        """n x r matrix whose columns are the field values at x."""
        return np.column_stack([X(x) for X in self.fields])


@dataclass
class StructureConstants:
    """c[alpha][beta][gamma] with [X_a, X_b] = sum_g c^g_{ab} X_g."""

    r: int
    c: np.ndarray  # (r, r, r), rounded to half-integers when that close
    raw: np.ndarray  # unrounded least-squares values
    residual: float  # worst pointwise fit error

    def jacobi_residual(self) -> float:
        c = self.c
        # sum over cyclic permutations of c^e_{ab} c^d_{ec}
        term = np.einsum("abe,ecd->abcd", c, c)
        cyc = term + np.transpose(term, (1, 2, 0, 3)) + np.transpose(term, (2, 0, 1, 3))
        return float(np.max(np.abs(cyc)))

    def adjoint_traces(self) -> np.ndarray:
        """traces[a] = Tr ad_{X_a} = sum_b c^b_{ab}."""
        return np.einsum("abb->a", self.c)


@dataclass
class LieSystem:
    """Time-dependent field X_t = sum_a b_a(t) X_a over a fixed basis."""

    basis: FieldFamily
    coefficients: list  # callables b_a(t)
    name: str = ""

    def __post_init__(self):
        if len(self.coefficients) != len(self.basis):
            raise ValueError(
                f"{len(self.coefficients)} coefficients for {len(self.basis)} fields")

    def rhs(self, t: float, x: np.ndarray) -> np.ndarray:
        return sum(b(t) * X(x) for b, X in zip(self.coefficients, self.basis))

    def field_at(self, t: float) -> VectorField:
        """Frozen-time vector field (with jacobian when the basis has them)."""
        bs = [float(b(t)) for b in self.coefficients]
        jac = None
        if all(X.has_jacobian for X in self.basis):
            jac = lambda x: sum(c * X.jacobian(x) for c, X in zip(bs, self.basis))
        return VectorField(
            self.basis.chart,
            lambda x: sum(c * X(x) for c, X in zip(bs, self.basis)),
            jac,
            name=f"{self.name}@t={t}",
        )


def _round_half_integers(values: np.ndarray) -> np.ndarray:
    doubled = 2.0 * values
    snapped = np.round(doubled)
    out = values.copy()
    mask = np.abs(doubled - snapped) < 2 * HALF_INT_TOL
    out[mask] = snapped[mask] / 2.0
    return out


def structure_constants(family: FieldFamily, samples, backend: DiffBackend = DiffBackend(),
                        closure_tol: float = 1e-6) -> StructureConstants:
    """Fit [X_a, X_b] = sum_g c^g_{ab} X_g by stacked least squares."""
    r = len(family)
    n = family.chart.dim
    samples = [np.asarray(x, float) for x in samples]
    # design matrix: field values stacked over samples
    M = np.vstack([family.component_matrix(x) for x in samples])  # (n*s, r)
    raw = np.zeros((r, r, r))
    worst = 0.0
    worst_pair = None
    for a in range(r):
        for b in range(a + 1, r):
            Z = lie_bracket(family[a], family[b], backend)
            rhs = np.concatenate([Z(x) for x in samples])
            coef, *_ = np.linalg.lstsq(M, rhs, rcond=None)
            err = float(np.max(np.abs(M @ coef - rhs)))
            if err > worst:
                worst, worst_pair = err, (a + 1, b + 1)
            raw[a, b] = coef
            raw[b, a] = -coef
    if worst > closure_tol:
        raise NotClosedError(
            f"family {family.name!r} not closed under bracket: "
            f"pair {worst_pair} leaves residual {worst:.3e}")
    return StructureConstants(r=r, c=_round_half_integers(raw), raw=raw, residual=worst)


def is_unimodular(sc: StructureConstants, tol: float = 1e-9):
    traces = sc.adjoint_traces()
    return bool(np.all(np.abs(traces) < tol)), traces


def is_locally_automorphic(family: FieldFamily, samples, det_tol: float = 1e-9):
    """True iff r = n and the frame determinant stays away from zero."""
    if len(family) != family.chart.dim:
        return False, 0.0
    dets = [abs(np.linalg.det(family.component_matrix(x))) for x in samples]
    min_det = float(min(dets))
    return min_det > det_tol, min_det


def dual_coframe(family: FieldFamily, x) -> list[AlternatingTensor]:
    """One-forms eta_a with eta_a(X_b) = delta_ab at x."""
    A = family.component_matrix(x)
    if A.shape[0] != A.shape[1] or abs(np.linalg.det(A)) < 1e-12:
        raise DegenerateFrameError(f"frame degenerate at {x}")
    rows = np.linalg.inv(A)
    n = family.chart.dim
    return [AlternatingTensor(n, 1, COVARIANT, rows[a]) for a in range(len(family))]


def invariant_volume(family: FieldFamily) -> DifferentialForm:
    """Wedge of the dual coframe: (1/det A(x)) dx^1 ^ ... ^ dx^n.

    Carries an analytic gradient (via the derivative of the determinant)
    whenever every field in the family has an analytic jacobian.
    """
    n = family.chart.dim
    if len(family) != n:
        raise DegenerateFrameError(
            f"invariant volume needs r = n, got r={len(family)}, n={n}")

    def det_at(x):
        d = np.linalg.det(family.component_matrix(x))
        if abs(d) < 1e-12:
            raise DegenerateFrameError(f"frame degenerate at {x}")
        return d

    def coeffs(x):
        return AlternatingTensor(n, n, COVARIANT, np.array([1.0 / det_at(x)]))

    grad = None
    if all(X.has_jacobian for X in family):

        def grad(x):
            A = family.component_matrix(x)
            Ainv = np.linalg.inv(A)
            jacs = [X.jacobian(x) for X in family]
            c = 1.0 / np.linalg.det(A)
            out = np.zeros((n, 1))
            for j in range(n):
                dA = np.column_stack([J[:, j] for J in jacs])
                out[j, 0] = -c * np.trace(Ainv @ dA)
            return out

    return DifferentialForm(family.chart, n, coeffs, grad,
                            name=f"vol({family.name})")


def adjoint_trace_identity(family: FieldFamily, sc: StructureConstants, samples,
                           backend: DiffBackend = DiffBackend()) -> float:
    """max_a,x || (L_{X_a} vol)(x) + Tr(ad_{X_a}) vol(x) ||."""
    from .calculus import lie_derivative_form

    vol = invariant_volume(family)
    traces = sc.adjoint_traces()
    worst = 0.0
    for a, X in enumerate(family):
        lie = lie_derivative_form(X, vol, backend)
        for x in samples:
            res = (lie(x) + vol(x) * traces[a]).norm()
            worst = max(worst, res)
    return worst


def lie_symmetry_residual(Y: VectorField, family: FieldFamily, samples,
                          backend: DiffBackend = DiffBackend()) -> float:
    """max_a,x || [X_a, Y](x) ||; small values certify Y as a symmetry."""
    worst = 0.0
    for X in family:
        Z = lie_bracket(X, Y, backend)
        for x in samples:
            worst = max(worst, float(np.max(np.abs(Z(x)))))
    return worst


def casimir_tensor(family: FieldFamily, samples,
                   backend: DiffBackend = DiffBackend()):
    """Symmetric tensor G = X1 (x) X3 + X3 (x) X1 - 2 X2 (x) X2 on a plane.

    Requires the sl(2) bracket pattern [X1,X2]=X1, [X1,X3]=2X2, [X2,X3]=X3;
    returns (matrix_fn, det_fn) evaluating G and det G pointwise.
    """
    if family.chart.dim != 2 or len(family) != 3:
        raise DegenerateFrameError("Casimir tensor needs 3 fields on a 2-dim chart")
    sc = structure_constants(family, samples, backend)
    expected = {(0, 1): [1.0, 0.0, 0.0], (0, 2): [0.0, 2.0, 0.0], (1, 2): [0.0, 0.0, 1.0]}
    for (a, b), want in expected.items():
        if np.max(np.abs(sc.c[a, b] - np.array(want))) > 1e-6:
            raise NotClosedError(
                f"bracket [X{a+1},X{b+1}] = {sc.c[a, b]} breaks the sl(2) pattern")

    def matrix_fn(x):
        v1, v2, v3 = (family[i](x) for i in range(3))
        return np.outer(v1, v3) + np.outer(v3, v1) - 2.0 * np.outer(v2, v2)

    def det_fn(x):
        return float(np.linalg.det(matrix_fn(x)))

    return matrix_fn, det_fn
