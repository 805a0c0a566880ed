"""Momentum maps, reduction-scheme certification, and reduced systems.

Quotients are explicit coordinate projections with sections.  Reduced forms
are defined through the section; well-definedness is certified numerically by
recomputing through sections shifted along the fiber flows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .calculus import (
    Chart,
    ChartMap,
    DiffBackend,
    DifferentialForm,
    MultiVectorField,
    VectorField,
    central_jacobian,
    contract_field,
    exterior_derivative,
    lie_derivative_form,
    pullback,
)
from .errors import NotBasicError, NotProjectableError
from .exterior import AlternatingTensor
from .liealg import FieldFamily, LieSystem, is_unimodular, structure_constants
from .msys import MultisymplecticLieSystem, Report, one_nondegenerate_at

FIBER_SHIFTS = (0.3, -0.3)
FIBER_TOL = 1e-6


@dataclass
class QuotientChart:
    """Coordinate projection pi: total -> base with a section and fiber flows."""

    total: Chart
    base: Chart
    projection: ChartMap  # total -> base
    section: ChartMap  # base -> total
    fiber_flows: list = field(default_factory=list)
    name: str = ""

    def shifted_section(self, F: VectorField, s: float) -> ChartMap:
        """Section composed with the time-s flow of a fiber field."""
        from .integrate import flow

        def func(y):
            return flow(F, self.section(y), s, tol=1e-12)

        return ChartMap(self.base, self.total, func,
                        lambda y: central_jacobian(func, y, 1e-4),
                        name=f"{self.name}.shift({F.name},{s})")


@dataclass
class ReductionScheme:
    symmetry_family: FieldFamily
    w: MultiVectorField
    theta: DifferentialForm
    quotient: QuotientChart
    name: str = ""


def momentum_map(x, w: MultiVectorField, theta: DifferentialForm) -> AlternatingTensor:
    """(iota_w theta)(x)."""
    return contract_field(w, theta)(x)


def verify_reduction_scheme(scheme: ReductionScheme, samples, base_samples,
                            backend: DiffBackend = DiffBackend(),
                            tol: float = 1e-7) -> Report:
    """Hypothesis checks: contraction vanishing, invariance, closedness,
    unimodular symmetries, and 1-nondegeneracy of the reduced tensor."""
    report = Report()
    mu = contract_field(scheme.w, scheme.theta)

    sc = structure_constants(scheme.symmetry_family, samples, backend)
    uni, traces = is_unimodular(sc)
    report.add("symmetry_unimodular", float(np.max(np.abs(traces))), 1e-9)

    for i, Y in enumerate(scheme.symmetry_family, start=1):
        if mu.degree >= 1:
            res = max(contract_field(Y, mu)(x).norm() for x in samples)
            report.add(f"contraction_vanishes_Y{i}", res, tol)
        res = max(lie_derivative_form(Y, mu, backend)(x).norm() for x in samples)
        report.add(f"momentum_invariant_Y{i}", res, tol)

    if mu.degree < scheme.theta.chart.dim:
        d_mu = exterior_derivative(mu, backend)
        report.add("momentum_closed", max(d_mu(x).norm() for x in samples), tol)
    else:
        report.add("momentum_closed", 0.0, tol)

    reduced = reduce_form(scheme, base_samples=None)
    bad = sum(0 if one_nondegenerate_at(reduced, y) else 1 for y in base_samples)
    report.add("reduced_1_nondegenerate", float(bad), 0.5)
    return report


def reduce_form(scheme: ReductionScheme, base_samples=None,
                fiber_tol: float = FIBER_TOL) -> DifferentialForm:
    """Reduced form: pull iota_w theta back through the section.

    When base_samples are given, the value is recomputed through sections
    shifted along each fiber flow; disagreement beyond fiber_tol means the
    momentum form is not basic and raises an error.
    """
    mu = contract_field(scheme.w, scheme.theta)
    q = scheme.quotient
    reduced = pullback(q.section, mu)
    reduced.name = f"reduced({scheme.name})"
    if base_samples:
        for F in q.fiber_flows:
            for s in FIBER_SHIFTS:
                shifted = pullback(q.shifted_section(F, s), mu)
                worst = max((reduced(y) - shifted(y)).norm() for y in base_samples)
                if worst > fiber_tol:
                    raise NotBasicError(
                        f"momentum form of {scheme.name!r} varies along fiber "
                        f"{F.name} by {worst:.3e}")
    return reduced


def fiber_residual(scheme: ReductionScheme, base_samples) -> float:
    """Worst disagreement of the reduced form across fiber-shifted sections."""
    mu = contract_field(scheme.w, scheme.theta)
    q = scheme.quotient
    reduced = pullback(q.section, mu)
    worst = 0.0
    for F in q.fiber_flows:
        for s in FIBER_SHIFTS:
            shifted = pullback(q.shifted_section(F, s), mu)
            worst = max(worst, max((reduced(y) - shifted(y)).norm()
                                   for y in base_samples))
    return worst


def project_field(X: VectorField, q: QuotientChart, base_samples=None,
                  tol: float = FIBER_TOL):
    """Push X down through pi: X~(y) = Dpi(S(y)) X(S(y)).

    Returns (reduced field, well-definedness residual across fiber shifts).
    """
    from .integrate import flow

    def components(y):
        p = q.section(y)
        return q.projection.d(p) @ X(p)

    residual = 0.0
    if base_samples:
        for y in base_samples:
            base_val = components(y)
            p0 = q.section(y)
            for F in q.fiber_flows:
                for s in FIBER_SHIFTS:
                    p = flow(F, p0, s, tol=1e-12)
                    val = q.projection.d(p) @ X(p)
                    residual = max(residual, float(np.max(np.abs(val - base_val))))
        if residual > tol:
            raise NotProjectableError(
                f"field {X.name!r} does not project: fiber residual {residual:.3e}")
    reduced = VectorField(q.base, components, name=f"proj({X.name})")
    return reduced, residual


def reduce_system(m: MultisymplecticLieSystem, scheme: ReductionScheme,
                  base_samples, zero_tol: float = 1e-9) -> MultisymplecticLieSystem:
    """Project the basis fields and the form; drop fields that project to zero."""
    q = scheme.quotient
    kept_fields, kept_coeffs = [], []
    for X, b in zip(m.system.basis, m.system.coefficients):
        Xr, _ = project_field(X, q, base_samples)
        if max(float(np.max(np.abs(Xr(y)))) for y in base_samples) < zero_tol:
            continue
        kept_fields.append(Xr)
        kept_coeffs.append(b)
    theta_r = reduce_form(scheme, base_samples)
    family = FieldFamily(q.base, kept_fields, name=f"reduced({m.system.basis.name})")
    system = LieSystem(family, kept_coeffs, name=f"reduced({m.system.name})")
    return MultisymplecticLieSystem(system, theta_r, name=f"reduced({m.name})")


def relative_equilibria(X: VectorField, guesses, tol: float = 1e-12,
                        max_iter: int = 50,
                        backend: DiffBackend = DiffBackend("central-difference")):
    """Newton search for zeros of X; reports linearization eigenvalues.

    Returns a list of dicts {point, eigenvalues, converged, residual}.
    """
    results = []
    for guess in guesses:
        y = np.asarray(guess, dtype=float).copy()
        converged = False
        for _ in range(max_iter):
            f = X(y)
            if np.max(np.abs(f)) < tol:
                converged = True
                break
            J = X.jacobian(y, backend)
            try:
                y = y - np.linalg.solve(J, f)
            except np.linalg.LinAlgError:
                break
        J = X.jacobian(y, backend)
        eigs = np.sort_complex(np.linalg.eigvals(J))
        results.append({
            "point": y,
            "eigenvalues": eigs,
            "converged": converged,
            "residual": float(np.max(np.abs(X(y)))),
        })
    return results
