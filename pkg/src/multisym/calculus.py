"""Differential calculus on a single coordinate chart.

Vector fields, differential forms, and multivector fields are immutable
wrappers around evaluation closures.  Every object may carry analytic first
derivatives (jacobian for fields, coefficient gradient for forms); operations
propagate them by the product rule so that residual checks reach machine
precision with the analytic backend.  Central differences are the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ChartMismatchError, DegreeError, DimensionMismatchError
from .exterior import (
    CONTRAVARIANT,
    COVARIANT,
    AlternatingTensor,
    index_position,
    interior,
    multi_indices,
    wedge_all,
)

ANALYTIC = "analytic"
CENTRAL = "central-difference"


@dataclass(frozen=True)
class DiffBackend:
    """Differentiation strategy: analytic closures or central differences."""

    mode: str = ANALYTIC
    step: float = 1e-5

    def __post_init__(self):
        if self.mode not in (ANALYTIC, CENTRAL):
            raise ValueError(f"unknown backend mode {self.mode!r}")
        if not 1e-7 <= self.step <= 1e-3:
            raise ValueError(f"step must be in [1e-7, 1e-3], got {self.step}")


@dataclass(frozen=True)
class Chart:
    """Coordinate chart: dimension, admissible region, and a sampling box."""

    dim: int
    label: str = ""
    predicate: Callable[[np.ndarray], bool] = lambda x: True
    margin: Optional[Callable[[np.ndarray], float]] = None
    box: Optional[tuple] = None  # ((lo1, hi1), ..., (lon, hin))

    def contains(self, x) -> bool:
        return bool(self.predicate(np.asarray(x, dtype=float)))

    def sample(self, rng: np.random.Generator, count: int) -> list[np.ndarray]:
        """Uniform points from the box, rejecting the excluded loci."""
        if self.box is None:
            raise ValueError(f"chart {self.label!r} has no sampling box")
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        points = []
        attempts = 0
        while len(points) < count:
            x = lo + (hi - lo) * rng.random(self.dim)
            attempts += 1
            if self.contains(x):
                points.append(x)
            if attempts > 1000 * count:
                raise RuntimeError(f"sampling box for {self.label!r} rejects too often")
        return points


def _check_same_chart(*objs):
    charts = {id(o.chart) for o in objs}
    if len(charts) > 1:
        labels = [o.chart.label for o in objs]
        if len({o.chart.dim for o in objs}) > 1 or len(set(labels)) > 1:
            raise ChartMismatchError(f"objects live on different charts: {labels}")


class VectorField:
    """Smooth vector field: component map with optional analytic jacobian."""

    def __init__(self, chart, components, jacobian=None, name=""):
        self.chart = chart
        self._components = components
        self._jacobian = jacobian
        self.name = name

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self._components(np.asarray(x, dtype=float)), dtype=float)

    @property
    def has_jacobian(self):
        return self._jacobian is not None

    def jacobian(self, x, backend: DiffBackend = DiffBackend()) -> np.ndarray:
        """d(components)/dx, analytic when available under the analytic mode."""
        x = np.asarray(x, dtype=float)
        if self._jacobian is not None and backend.mode == ANALYTIC:
            return np.asarray(self._jacobian(x), dtype=float)
        return central_jacobian(self.__call__, x, backend.step)

    def as_tensor(self, x) -> AlternatingTensor:
        return AlternatingTensor.from_vector(self(x))

    def __add__(self, other):
        _check_same_chart(self, other)
        jac = None
        if self.has_jacobian and other.has_jacobian:
            jac = lambda x: self.jacobian(x) + other.jacobian(x)
        return VectorField(
            self.chart,
            lambda x: self(x) + other(x),
            jac,
            name=f"({self.name}+{other.name})",
        )

    def __mul__(self, scalar):
        scalar = float(scalar)
        jac = (lambda x: scalar * self.jacobian(x)) if self.has_jacobian else None
        return VectorField(self.chart, lambda x: scalar * self(x), jac, name=f"{scalar}*{self.name}")

    __rmul__ = __mul__


def central_jacobian(fn, x, step):
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        cols.append((np.asarray(fn(x + e), float) - np.asarray(fn(x - e), float)) / (2 * step))
    return np.array(cols).T


def combine_fields(fields: Sequence[VectorField], coeffs: Sequence[float], name="") -> VectorField:
    """Constant-coefficient linear combination of vector fields."""
    fields = list(fields)
    coeffs = [float(c) for c in coeffs]
    chart = fields[0].chart
    jac = None
    if all(f.has_jacobian for f in fields):
        jac = lambda x: sum(c * f.jacobian(x) for f, c in zip(fields, coeffs))
    return VectorField(
        chart,
        lambda x: sum(c * f(x) for f, c in zip(fields, coeffs)),
        jac,
        name=name or "+".join(f"{c}*{f.name}" for f, c in zip(fields, coeffs)),
    )


class DifferentialForm:
    """Differential k-form: coefficient map, optional analytic gradient.

    ``coeffs(x)`` returns the covariant AlternatingTensor at x;
    ``grad(x)`` (when present) returns the (n, C(n, k)) array of coordinate
    derivatives of the coefficient vector.
    """

    def __init__(self, chart, degree, coeffs, grad=None, name=""):
        self.chart = chart
        self.degree = degree
        self._coeffs = coeffs
        self._grad = grad
        self.name = name

    @classmethod
    def from_scalar_volume(cls, chart, scalar, scalar_grad=None, name=""):
        """f(x) dx^1 ^ ... ^ dx^n given f and optionally its gradient."""
        n = chart.dim

        def coeffs(x):
            return AlternatingTensor(n, n, COVARIANT, np.array([scalar(x)]))

        grad = None
        if scalar_grad is not None:
            grad = lambda x: np.asarray(scalar_grad(x), float).reshape(n, 1)
        return cls(chart, n, coeffs, grad, name=name)

    @classmethod
    def constant(cls, chart, tensor: AlternatingTensor, name=""):
        n = chart.dim
        return cls(
            chart,
            tensor.degree,
            lambda x, t=tensor: t.copy(),
            lambda x, t=tensor: np.zeros((n, t.coeffs.size)),
            name=name,
        )

    def __call__(self, x) -> AlternatingTensor:
        return self._coeffs(np.asarray(x, dtype=float))

    @property
    def has_grad(self):
        return self._grad is not None

    def grad(self, x, backend: DiffBackend = DiffBackend()) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self._grad is not None and backend.mode == ANALYTIC:
            return np.asarray(self._grad(x), dtype=float)
        return central_jacobian(lambda y: self(y).coeffs, x, backend.step).T

    def __add__(self, other):
        _check_same_chart(self, other)
        if self.degree != other.degree:
            raise DegreeError(f"degree {self.degree} vs {other.degree}")
        grad = None
        if self.has_grad and other.has_grad:
            grad = lambda x: self.grad(x) + other.grad(x)
        return DifferentialForm(
            self.chart, self.degree, lambda x: self(x) + other(x), grad,
            name=f"({self.name}+{other.name})",
        )

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, scalar):
        scalar = float(scalar)
        grad = (lambda x: scalar * self.grad(x)) if self.has_grad else None
        return DifferentialForm(
            self.chart, self.degree, lambda x: self(x) * scalar, grad,
            name=f"{scalar}*{self.name}",
        )

    __rmul__ = __mul__

    def max_norm(self, samples) -> float:
        return max(self(x).norm() for x in samples)


class MultiVectorField:
    """Multivector field, decomposable (ordered factors) or dense."""

    def __init__(self, chart, degree, coeffs=None, factors=None, name=""):
        self.chart = chart
        self.degree = degree
        self.factors = list(factors) if factors is not None else None
        if coeffs is None:
            if self.factors is None:
                raise ValueError("need coeffs or factors")
            coeffs = self._wedge_factors
        self._coeffs = coeffs
        self.name = name

    @classmethod
    def from_fields(cls, fields: Sequence[VectorField], name=""):
        fields = list(fields)
        _check_same_chart(*fields)
        return cls(fields[0].chart, len(fields), factors=fields,
                   name=name or "^".join(f.name for f in fields))

    def _wedge_factors(self, x):
        return wedge_all([f.as_tensor(x) for f in self.factors])

    def __call__(self, x) -> AlternatingTensor:
        t = self._coeffs(np.asarray(x, dtype=float))
        if t.variance != CONTRAVARIANT:
            raise DimensionMismatchError("multivector coefficients must be contravariant")
        return t

    @property
    def has_grad(self):
        return self.factors is not None and all(f.has_jacobian for f in self.factors)

    def grad(self, x, backend: DiffBackend = DiffBackend()) -> np.ndarray:
        """(n, C(n, p)) coordinate derivatives of the coefficient vector."""
        x = np.asarray(x, dtype=float)
        if self.has_grad and backend.mode == ANALYTIC:
            vals = [f.as_tensor(x) for f in self.factors]
            jacs = [f.jacobian(x) for f in self.factors]
            n = self.chart.dim
            rows = []
            for j in range(n):
                total = None
                for i in range(len(self.factors)):
                    terms = list(vals)
                    terms[i] = AlternatingTensor.from_vector(jacs[i][:, j])
                    w = wedge_all(terms)
                    total = w if total is None else total + w
                rows.append(total.coeffs)
            return np.array(rows)
        return central_jacobian(lambda y: self(y).coeffs, x, backend.step).T


def as_multivector(obj) -> MultiVectorField:
    if isinstance(obj, MultiVectorField):
        return obj
    if isinstance(obj, VectorField):
        return MultiVectorField.from_fields([obj])
    raise TypeError(f"cannot interpret {type(obj)} as a multivector field")


# ---------------------------------------------------------------------------
# operations


def lie_bracket(X: VectorField, Y: VectorField, backend: DiffBackend = DiffBackend()) -> VectorField:
    """[X, Y] = (DY) X - (DX) Y.  The result has no analytic jacobian."""
    _check_same_chart(X, Y)

    def components(x):
        return Y.jacobian(x, backend) @ X(x) - X.jacobian(x, backend) @ Y(x)

    return VectorField(X.chart, components, name=f"[{X.name},{Y.name}]")


def exterior_derivative(omega: DifferentialForm, backend: DiffBackend = DiffBackend()) -> DifferentialForm:
    """Antisymmetrised coefficient derivatives; no analytic gradient on output."""
    n = omega.chart.dim
    k = omega.degree
    if k >= n:
        raise DegreeError(f"cannot take d of a degree-{k} form on a {n}-dim chart")
    pos_k = index_position(n, k)
    idx_out = multi_indices(n, k + 1)

    def coeffs(x):
        g = omega.grad(x, backend)  # (n, C(n,k))
        out = np.zeros(comb(n, k + 1))
        for r, J in enumerate(idx_out):
            total = 0.0
            for m, jm in enumerate(J):
                rest = J[:m] + J[m + 1:]
                total += (-1) ** m * g[jm - 1, pos_k[rest]]
            out[r] = total
        return AlternatingTensor(n, k + 1, COVARIANT, out)

    return DifferentialForm(omega.chart, k + 1, coeffs, name=f"d({omega.name})")


def contract_field(W, omega: DifferentialForm) -> DifferentialForm:
    """Pointwise interior product iota_W omega; propagates analytic gradients."""
    W = as_multivector(W)
    _check_same_chart(W, omega)
    if W.degree > omega.degree:
        raise DegreeError(f"multivector degree {W.degree} exceeds form degree {omega.degree}")
    n = omega.chart.dim
    k_out = omega.degree - W.degree

    def coeffs(x):
        return interior(W(x), omega(x))

    grad = None
    if W.has_grad and omega.has_grad:

        def grad(x):
            wv, ov = W(x), omega(x)
            gw, go = W.grad(x), omega.grad(x)
            rows = []
            for j in range(n):
                dw = AlternatingTensor(n, W.degree, CONTRAVARIANT, gw[j])
                do = AlternatingTensor(n, omega.degree, COVARIANT, go[j])
                rows.append((interior(dw, ov) + interior(wv, do)).coeffs)
            return np.array(rows)

    return DifferentialForm(omega.chart, k_out, coeffs, grad,
                            name=f"i_{{{W.name}}}{omega.name}")


def lie_derivative_form(X: VectorField, omega: DifferentialForm,
                        backend: DiffBackend = DiffBackend()) -> DifferentialForm:
    """Cartan formula  L_X omega = iota_X d omega + d iota_X omega."""
    _check_same_chart(X, omega)
    parts = []
    if omega.degree < omega.chart.dim:
        parts.append(contract_field(X, exterior_derivative(omega, backend)))
    if omega.degree > 0:
        parts.append(exterior_derivative(contract_field(X, omega), backend))
    else:
        # L_X f = X(f) for scalars; d(f) handled above, contraction below.
        pass
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return DifferentialForm(omega.chart, omega.degree, out._coeffs,
                            name=f"L_{{{X.name}}}{omega.name}")


def lie_derivative_multivector(X: VectorField, W: MultiVectorField,
                               backend: DiffBackend = DiffBackend()) -> MultiVectorField:
    """Leibniz expansion for decomposable W, flow transport otherwise."""
    _check_same_chart(X, W)
    n = X.chart.dim
    if W.factors is not None:
        brackets = [lie_bracket(X, F, backend) for F in W.factors]

        def coeffs(x):
            vals = [f.as_tensor(x) for f in W.factors]
            total = None
            for i, B in enumerate(brackets):
                terms = list(vals)
                terms[i] = B.as_tensor(x)
                w = wedge_all(terms)
                total = w if total is None else total + w
            return total

        return MultiVectorField(X.chart, W.degree, coeffs, name=f"L_{{{X.name}}}{W.name}")

    from .integrate import flow  # local import: integrate depends on calculus

    step = 1e-4

    def coeffs(x):
        def transported(s):
            y = flow(X, x, s)
            A = central_jacobian(lambda z: flow(X, z, -s), y, 1e-5)
            wv = W(y)
            out = np.zeros_like(wv.coeffs)
            pos = index_position(n, W.degree)
            for K in multi_indices(n, W.degree):
                acc = 0.0
                for I, ci in zip(multi_indices(n, W.degree), wv.coeffs):
                    if ci == 0.0:
                        continue
                    sub = A[np.ix_([k - 1 for k in K], [i - 1 for i in I])]
                    acc += np.linalg.det(sub) * ci
                out[pos[K]] = acc
            return out

        d = (transported(step) - transported(-step)) / (2 * step)
        return AlternatingTensor(n, W.degree, CONTRAVARIANT, d)

    return MultiVectorField(X.chart, W.degree, coeffs, name=f"L_{{{X.name}}}{W.name}")


@dataclass(frozen=True)
class ChartMap:
    """Smooth map between charts with an analytic differential."""

    source: Chart
    target: Chart
    func: Callable[[np.ndarray], np.ndarray]
    differential: Callable[[np.ndarray], np.ndarray]  # (target.dim, source.dim)
    name: str = ""

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def d(self, x):
        return np.asarray(self.differential(np.asarray(x, dtype=float)), dtype=float)


def pullback(phi: ChartMap, omega: DifferentialForm) -> DifferentialForm:
    """phi^* omega via minors of the differential of phi."""
    n_src = phi.source.dim
    n_tgt = phi.target.dim
    if omega.chart.dim != n_tgt:
        raise DimensionMismatchError(
            f"form lives on a {omega.chart.dim}-dim chart, map targets {n_tgt}")
    k = omega.degree
    if k > n_src:
        raise DegreeError(f"degree-{k} form cannot pull back to a {n_src}-dim chart")
    idx_src = multi_indices(n_src, k)
    idx_tgt = multi_indices(n_tgt, k)

    def coeffs(x):
        A = phi.d(x)
        w = omega(phi(x))
        out = np.zeros(comb(n_src, k))
        for r, J in enumerate(idx_src):
            total = 0.0
            for I, ci in zip(idx_tgt, w.coeffs):
                if ci == 0.0:
                    continue
                sub = A[np.ix_([i - 1 for i in I], [j - 1 for j in J])]
                total += ci * np.linalg.det(sub)
            out[r] = total
        return AlternatingTensor(n_src, k, COVARIANT, out)

    return DifferentialForm(phi.source, k, coeffs, name=f"{phi.name}^*{omega.name}")
