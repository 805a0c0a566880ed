"""Integrator, time coefficients, CSV output, symmetry-flow machinery."""

import csv

import numpy as np
import pytest

from multisym import (
    Chart,
    DomainExitError,
    FieldFamily,
    LieSystem,
    TimeCoefficients,
    VectorField,
    closed_form_schwarz_reduced,
    flow,
    integrate,
    monitor_invariant,
    symmetry_flow_test,
    write_csv,
)


def rotation_system():
    chart = Chart(dim=2, label="plane", box=((-2, 2), (-2, 2)))
    R = VectorField(chart, lambda x: np.array([-x[1], x[0]]),
                    lambda x: np.array([[0.0, -1.0], [1.0, 0.0]]), name="rot")
    return LieSystem(FieldFamily(chart, [R]), [lambda t: 1.0], name="rotation")


def test_coefficient_presets():
    c = TimeCoefficients.constant(2.0)
    assert c(3.7) == 2.0
    s = TimeCoefficients.sinusoid(2.0, 3.0, 0.5)
    assert s(0.1) == pytest.approx(2.0 * np.sin(0.8))
    p = TimeCoefficients.polynomial([1.0, 0.0, 2.0])
    assert p(2.0) == pytest.approx(9.0)
    pw = TimeCoefficients.piecewise_constant([1.0, 2.0], [5.0, -1.0, 3.0])
    assert pw(0.5) == 5.0 and pw(1.5) == -1.0 and pw(2.5) == 3.0


def test_from_spec_round_trip():
    spec = [{"type": "constant", "c": 1.5},
            {"type": "sin", "A": 2.0, "omega": 1.0},
            {"type": "poly", "coeffs": [0.0, 1.0]},
            {"type": "piecewise", "breaks": [1.0], "values": [0.0, 1.0]}]
    coeffs = TimeCoefficients.from_spec(spec)
    assert len(coeffs) == 4
    assert coeffs.entries[0](0.0) == 1.5
    assert coeffs.entries[3](2.0) == 1.0
    assert coeffs.breakpoints(0.0, 3.0) == [1.0]
    with pytest.raises(ValueError):
        TimeCoefficients.from_spec([{"type": "mystery"}])
    with pytest.raises(ValueError):
        TimeCoefficients.piecewise_constant([1.0], [1.0])


def test_integrate_rotation_exact():
    system = rotation_system()
    traj = integrate(system, None, np.array([1.0, 0.0]), (0.0, 2 * np.pi))
    assert np.allclose(traj.states[-1], [1.0, 0.0], atol=1e-8)
    assert monitor_invariant(traj, lambda x: x[0] ** 2 + x[1] ** 2) < 1e-8


def test_integrate_convergence():
    # tighter tolerances give a strictly better endpoint
    system = rotation_system()
    end = np.array([np.cos(1.0), np.sin(1.0)])
    errs = []
    for rtol in (1e-5, 1e-8, 1e-11):
        traj = integrate(system, None, np.array([1.0, 0.0]), (0.0, 1.0),
                         rel_tol=rtol, abs_tol=rtol * 1e-2)
        errs.append(np.max(np.abs(traj.states[-1] - end)))
    assert errs[0] > errs[1] > errs[2]


def test_piecewise_coefficients_integrated_per_segment():
    chart = Chart(dim=1, label="line")
    X = VectorField(chart, lambda x: np.array([1.0]), lambda x: np.zeros((1, 1)))
    system = FieldFamily(chart, [X])
    coeffs = TimeCoefficients([
        TimeCoefficients.piecewise_constant([1.0], [2.0, -1.0])])
    traj = integrate(system, coeffs, np.array([0.0]), (0.0, 2.0))
    # integral of b(t): 2 on [0,1], then -1 on [1,2] -> 1
    assert traj.states[-1][0] == pytest.approx(1.0, abs=1e-9)


def test_domain_exit_carries_partial_trajectory():
    chart = Chart(dim=1, label="half",
                  predicate=lambda x: x[0] > 0.0,
                  margin=lambda x: x[0] - 0.0,
                  box=((0.1, 1.0),))
    X = VectorField(chart, lambda x: np.array([-1.0]))
    system = FieldFamily(chart, [X])
    coeffs = TimeCoefficients.constants([1.0])
    with pytest.raises(DomainExitError) as err:
        integrate(system, coeffs, np.array([0.5]), (0.0, 2.0))
    traj = err.value.trajectory
    assert traj.exited
    assert traj.exit_time == pytest.approx(0.5, abs=1e-6)
    assert traj.times[-1] <= 0.5 + 1e-9


def test_initial_point_outside_domain():
    chart = Chart(dim=1, label="half", predicate=lambda x: x[0] > 0.0)
    X = VectorField(chart, lambda x: np.array([1.0]))
    with pytest.raises(DomainExitError):
        integrate(FieldFamily(chart, [X]), TimeCoefficients.constants([1.0]),
                  np.array([-1.0]), (0.0, 1.0))


def test_coefficient_count_mismatch():
    system = rotation_system()
    with pytest.raises(ValueError):
        integrate(system, TimeCoefficients.constants([1.0, 2.0]),
                  np.array([1.0, 0.0]), (0.0, 1.0))


def test_flow_inverse():
    chart = Chart(dim=2, label="plane")
    X = VectorField(chart, lambda x: np.array([x[1], -np.sin(x[0])]))
    x0 = np.array([0.3, 0.1])
    y = flow(X, x0, 0.7)
    back = flow(X, y, -0.7)
    assert np.allclose(back, x0, atol=1e-9)
    assert np.allclose(flow(X, x0, 0.0), x0)


def test_closed_form_families_solve_reduced_equations():
    # each family satisfies dx/dt = 1 - x a, da/dt = (a^2 - 1)/2
    t = np.linspace(0.0, 3.0, 300)
    dt = t[1] - t[0]
    for regime, c1, c2 in [("inside", 0.1, 0.3), ("outside", 0.2, 0.1),
                           ("boundaryPlus", 0.0, 0.4),
                           ("boundaryMinus", 0.0, 0.4)]:
        x, a = closed_form_schwarz_reduced(c1, c2, regime, t)
        dx = np.gradient(x, dt)
        da = np.gradient(a, dt)
        interior = slice(2, -2)
        fx = 1 - x * a
        fa = 0.5 * (a ** 2 - 1)
        # relative check: finite-difference error grows with the solution size
        assert np.max(np.abs(dx - fx)[interior] / (1 + np.abs(fx))[interior]) < 1e-3
        assert np.max(np.abs(da - fa)[interior] / (1 + np.abs(fa))[interior]) < 1e-3
    with pytest.raises(ValueError):
        closed_form_schwarz_reduced(0.0, 0.0, "nowhere", t)


def test_symmetry_flow_rotation():
    system = rotation_system()
    # rotations commute with themselves
    Y = system.basis[0]
    d = symmetry_flow_test(system, None, Y, np.array([1.0, 0.0]), 0.5, (0.0, 3.0))
    assert d < 1e-8


def test_write_csv_format(tmp_path):
    system = rotation_system()
    traj = integrate(system, None, np.array([1.0, 0.0]), (0.0, 1.0),
                     t_eval=np.linspace(0, 1, 5))
    path = tmp_path / "traj.csv"
    write_csv(traj, path, invariants=[("r2", lambda x: x[0] ** 2 + x[1] ** 2)])
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["t", "x1", "x2", "inv_r2"]
    assert len(rows) == 6
    # 17 significant digits round-trip exactly
    assert float(rows[1][1]) == traj.states[0][0]
    assert float(rows[-1][3]) == pytest.approx(1.0, abs=1e-9)
