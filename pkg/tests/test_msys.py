"""Hamiltonianity checks, form brackets, and report plumbing."""

import numpy as np
import pytest

from multisym import (
    DegreeError,
    DifferentialForm,
    Report,
    bracket_hamiltonian_forms,
    bracket_hamiltonian_k1_forms,
    contract_field,
    exterior_derivative,
    lie_bracket,
    locally_hamiltonian_residual,
    one_nondegenerate_at,
    validate_system,
    verify_hamiltonian_form,
)
from multisym.msys import HamiltonianPair


def test_report_pass_fail():
    r = Report()
    r.add("a", 1e-10, 1e-8)
    assert r.passed
    r.add("b", 1.0, 1e-8)
    assert not r.passed
    d = r.as_dicts()
    assert d[0] == {"name": "a", "residual": 1e-10, "tol": 1e-8, "pass": True}
    assert d[1]["pass"] is False


def test_validate_system_passes_gallery(schwarz):
    rng = np.random.default_rng(0)
    report = validate_system(schwarz.system, schwarz.samples(rng, 10))
    assert report.passed
    names = {c.name for c in report.checks}
    assert {"bracket_closure", "jacobi_identity", "theta_closed",
            "theta_1_nondegenerate"} <= names


def test_validate_system_rejects_corrupted_form(schwarz):
    from multisym.cli import _corrupted_theta
    from multisym.msys import MultisymplecticLieSystem

    bad = MultisymplecticLieSystem(schwarz.system.system,
                                   _corrupted_theta(schwarz))
    rng = np.random.default_rng(1)
    report = validate_system(bad, schwarz.samples(rng, 10))
    failing = [c.name for c in report.checks if not c.passed]
    assert any(name.startswith("locally_hamiltonian") for name in failing)


def test_locally_hamiltonian_residual_zero(schwarz):
    rng = np.random.default_rng(2)
    samples = schwarz.samples(rng, 8)
    for X in schwarz.basis:
        assert locally_hamiltonian_residual(X, schwarz.theta, samples) < 1e-12


def test_hamiltonian_forms_verify(schwarz):
    rng = np.random.default_rng(3)
    samples = schwarz.samples(rng, 8)
    for pair in schwarz.hamiltonian_pairs:
        assert verify_hamiltonian_form(pair, schwarz.theta, samples) < 1e-12


def test_hamiltonian_form_degree_mismatch(schwarz):
    pair = HamiltonianPair(schwarz.basis[0], schwarz.theta)
    with pytest.raises(DegreeError):
        verify_hamiltonian_form(pair, schwarz.theta, [np.array([0, 1, 0.0])])


def test_bracket_identity(schwarz):
    # d{Y_X, Y_Y} = iota_{[Y, X]} theta for Hamiltonian pairs
    rng = np.random.default_rng(4)
    samples = schwarz.samples(rng, 6)
    pairs = schwarz.hamiltonian_pairs
    theta = schwarz.theta
    for pX in pairs:
        for pY in pairs:
            br = bracket_hamiltonian_forms(pX, pY, theta)
            lhs = exterior_derivative(br)
            rhs = contract_field(lie_bracket(pY.field, pX.field), theta)
            worst = max((lhs(x) - rhs(x)).norm() for x in samples)
            assert worst < 1e-8


def test_bracket_k1_forms(schwarz):
    rng = np.random.default_rng(5)
    x = schwarz.samples(rng, 1)[0]
    X, Y = schwarz.basis[0], schwarz.basis[2]
    br = bracket_hamiltonian_k1_forms(X, Y, schwarz.theta)
    direct = contract_field(lie_bracket(Y, X), schwarz.theta)
    assert np.allclose(br(x).coeffs, direct(x).coeffs)


def test_one_nondegenerate(schwarz):
    assert one_nondegenerate_at(schwarz.theta, np.array([0.0, 1.0, 0.0]))

    zero = DifferentialForm.constant(
        schwarz.chart, schwarz.theta(np.array([0, 1.0, 0])) * 0.0)
    assert not one_nondegenerate_at(zero, np.array([0.0, 1.0, 0.0]))
