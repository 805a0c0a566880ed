"""Multisymplectic Lie systems: Hamiltonianity checks and form brackets.

A multisymplectic Lie system pairs a Lie system with a closed, 1-nondegenerate
k-form preserved by every basis field.  Checks return residuals; the report
helpers aggregate them into the machine-readable structure shared with the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calculus import (
    DiffBackend,
    DifferentialForm,
    VectorField,
    contract_field,
    exterior_derivative,
    lie_bracket,
    lie_derivative_form,
)
from .errors import DegreeError
from .exterior import contraction_matrix_for_form, matrix_rank
from .liealg import FieldFamily, LieSystem, structure_constants

ANALYTIC_TOL = 1e-7
CENTRAL_TOL = 1e-4


def default_tol(backend: DiffBackend) -> float:
    return ANALYTIC_TOL if backend.mode == "analytic" else CENTRAL_TOL


@dataclass
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tol

    def as_dict(self):
        return {"name": self.name, "residual": self.residual,
                "tol": self.tol, "pass": self.passed}


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, residual, tol):
        self.checks.append(Check(name, float(residual), float(tol)))

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dicts(self):
        return [c.as_dict() for c in self.checks]


@dataclass
class MultisymplecticLieSystem:
    system: LieSystem
    theta: DifferentialForm
    name: str = ""

    @property
    def basis(self) -> FieldFamily:
        return self.system.basis


@dataclass
class HamiltonianPair:
    """A field together with its Hamiltonian (k-2)-form: d(ham_form) = iota_X theta."""

    field: VectorField
    ham_form: DifferentialForm


def locally_hamiltonian_residual(X: VectorField, theta: DifferentialForm, samples,
                                 backend: DiffBackend = DiffBackend()) -> float:
    lie = lie_derivative_form(X, theta, backend)
    return max(lie(x).norm() for x in samples)


def verify_hamiltonian_form(pair: HamiltonianPair, theta: DifferentialForm, samples,
                            backend: DiffBackend = DiffBackend()) -> float:
    """max || d(ham_form) - iota_X theta || over the samples."""
    if pair.ham_form.degree != theta.degree - 2:
        raise DegreeError(
            f"Hamiltonian form degree {pair.ham_form.degree} "
            f"does not match theta degree {theta.degree}")
    d_ham = exterior_derivative(pair.ham_form, backend)
    contracted = contract_field(pair.field, theta)
    return max((d_ham(x) - contracted(x)).norm() for x in samples)


def bracket_hamiltonian_forms(pX: HamiltonianPair, pY: HamiltonianPair,
                              theta: DifferentialForm) -> DifferentialForm:
    """{Y_X, Y_Y} := iota_Y iota_X theta, a (k-2)-form."""
    return contract_field(pY.field, contract_field(pX.field, theta))


def bracket_hamiltonian_k1_forms(X: VectorField, Y: VectorField, theta: DifferentialForm,
                                 backend: DiffBackend = DiffBackend()) -> DifferentialForm:
    """Bracket of the (k-1)-forms iota_X theta, iota_Y theta: iota_{[Y,X]} theta."""
    return contract_field(lie_bracket(Y, X, backend), theta)


def one_nondegenerate_at(theta: DifferentialForm, x) -> bool:
    mat = contraction_matrix_for_form(theta(x), 1)
    return matrix_rank(mat) == mat.shape[1]


def validate_system(m: MultisymplecticLieSystem, samples,
                    backend: DiffBackend = DiffBackend(),
                    tol: float = None) -> Report:
    """Closure, closedness of theta, 1-nondegeneracy, per-field invariance."""
    if tol is None:
        tol = default_tol(backend)
    report = Report()

    sc = structure_constants(m.basis, samples, backend)
    report.add("bracket_closure", sc.residual, 1e-6)
    report.add("jacobi_identity", sc.jacobi_residual(), 1e-8)

    if m.theta.degree < m.theta.chart.dim:
        d_theta = exterior_derivative(m.theta, backend)
        report.add("theta_closed", max(d_theta(x).norm() for x in samples), 1e-6)
    else:
        report.add("theta_closed", 0.0, 1e-6)  # top-degree forms are closed

    degenerate = sum(0 if one_nondegenerate_at(m.theta, x) else 1 for x in samples)
    report.add("theta_1_nondegenerate", float(degenerate), 0.5)

    for i, X in enumerate(m.basis, start=1):
        res = locally_hamiltonian_residual(X, m.theta, samples, backend)
        report.add(f"locally_hamiltonian_X{i}", res, tol)
    return report
