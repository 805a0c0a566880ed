"""Acceptance gate: ten end-to-end criteria with pinned tolerances.

Each test prints a single PASS/FAIL line so the gate can be read off the
pytest -s output directly.
"""

import numpy as np
import pytest

from multisym import (
    EXAMPLE_IDS,
    MultiVectorField,
    TimeCoefficients,
    annihilator_intersection_dim,
    casimir_tensor,
    closed_form_schwarz_reduced,
    contract_field,
    integrate,
    kernel_intersection_dim,
    lie_symmetry_residual,
    load_example,
    locally_hamiltonian_residual,
    monitor_invariant,
    nondegeneracy_order,
    reconstruct_field,
    reconstruct_form,
    reduce_form,
    reduced_system,
    relative_equilibria,
    structure_constants,
    symmetry_flow_test,
    verify_hamiltonian_form,
)
from multisym.liealg import invariant_volume
from multisym.reduction import fiber_residual, project_field

SEED = 42


def _verdict(label, residual, tol):
    status = "PASS" if residual < tol else "FAIL"
    print(f"ACCEPTANCE {label}: {status} (residual={residual:.3e}, tol={tol:.0e})")
    assert residual < tol, f"{label}: {residual:.3e} >= {tol:.0e}"


def test_criterion_01_structure_constants():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for example_id in EXAMPLE_IDS:
        bundle = load_example(example_id)
        samples = bundle.samples(rng, 50)
        sc = structure_constants(bundle.basis, samples)
        worst = max(worst, sc.residual,
                    float(np.max(np.abs(sc.c
                                        - bundle.golden["structure_constants"]))))
    _verdict("01 structure-constant recovery", worst, 1e-9)


def test_criterion_02_hamiltonianity():
    rng = np.random.default_rng(SEED)
    worst_inv = 0.0
    for example_id in EXAMPLE_IDS:
        bundle = load_example(example_id)
        samples = bundle.samples(rng, 100)
        for X in bundle.basis:
            worst_inv = max(worst_inv,
                            locally_hamiltonian_residual(X, bundle.theta, samples))
    _verdict("02a form invariance L_X theta", worst_inv, 1e-7)

    schwarz = load_example("schwarz")
    samples = schwarz.samples(rng, 100)
    worst_ham = max(verify_hamiltonian_form(p, schwarz.theta, samples)
                    for p in schwarz.hamiltonian_pairs)
    red = reduced_system(schwarz, "y2")
    red_pairs = schwarz.golden["reduced"]["y2"]["hamiltonian_pairs"]
    red_samples = red.system.basis.chart.sample(rng, 100)
    worst_ham = max(worst_ham,
                    max(verify_hamiltonian_form(p, red.theta, red_samples)
                        for p in red_pairs))
    _verdict("02b Hamiltonian forms d(theta_i) = i_X theta", worst_ham, 1e-8)


def test_criterion_03_invariant_volumes():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for example_id in ("schwarz", "control5", "dqho", "osc_spin"):
        bundle = load_example(example_id)
        vol = invariant_volume(bundle.basis)
        want = bundle.golden["theta_coeff"]
        for x in bundle.samples(rng, 50):
            worst = max(worst, abs(vol(x).coeffs[0] - want(x)))
    _verdict("03 invariant-volume construction", worst, 1e-9)


def test_criterion_04_reduction_goldens():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    worst_fiber = 0.0
    for example_id in ("schwarz", "control5", "dqho", "osc_spin"):
        bundle = load_example(example_id)
        for name, scheme in bundle.schemes.items():
            golden = bundle.golden["reduced"][name]
            base_samples = scheme.quotient.base.sample(rng, 10)
            reduced = reduce_form(scheme)
            worst = max(worst, max((reduced(y) - golden["theta"](y)).norm()
                                   for y in base_samples))
            for i, gold in enumerate(golden["fields"]):
                proj, _ = project_field(bundle.basis[i], scheme.quotient)
                for y in base_samples:
                    want = gold(y) if gold is not None else 0.0
                    worst = max(worst, float(np.max(np.abs(proj(y) - want))))
            worst_fiber = max(worst_fiber,
                              fiber_residual(scheme, base_samples[:3]))
    _verdict("04a reduction goldens", worst, 1e-8)
    _verdict("04b fiber well-definedness", worst_fiber, 1e-6)


def test_criterion_05_equilibria():
    schwarz = load_example("schwarz")
    red = reduced_system(schwarz, "y2")
    X = red.system.field_at(0.0)
    results = relative_equilibria(X, [np.array([0.8, 0.8]),
                                      np.array([-0.8, -0.8])])
    worst_pt = 0.0
    worst_res = 0.0
    worst_eig = 0.0
    expect = {(1, 1), (-1, -1)}
    found = set()
    for r in results:
        worst_res = max(worst_res, r["residual"])
        key = tuple(int(np.round(v)) for v in r["point"])
        found.add(key)
        worst_pt = max(worst_pt, float(np.max(np.abs(r["point"]
                                                     - np.array(key, float)))))
        worst_eig = max(worst_eig,
                        float(np.max(np.abs(np.sort_complex(r["eigenvalues"])
                                            - np.array([-1.0, 1.0])))))
    assert found == expect
    _verdict("05a equilibrium residual |X|", worst_res, 1e-12)
    _verdict("05b linearization eigenvalues {-1,+1}",
             max(worst_eig, worst_pt), 1e-6)


def test_criterion_06_closed_form_match():
    schwarz = load_example("schwarz")
    red = reduced_system(schwarz, "y2")
    t = np.linspace(0.0, 3.0, 61)
    worst = 0.0
    for regime, c1, c2 in [("inside", 0.1, 0.3), ("outside", 0.2, 0.1),
                           ("boundaryPlus", 0.0, 0.4),
                           ("boundaryMinus", 0.0, 0.4)]:
        x, a = closed_form_schwarz_reduced(c1, c2, regime, t)
        traj = integrate(red.system, None, np.array([x[0], a[0]]), (0.0, 3.0),
                         t_eval=t, rel_tol=1e-9)
        worst = max(worst,
                    float(np.max(np.abs(traj.states[:, 0] - x))),
                    float(np.max(np.abs(traj.states[:, 1] - a))))
    _verdict("06 closed-form trajectory match", worst, 1e-6)


def test_criterion_07_conservation():
    schwarz = load_example("schwarz")
    red = reduced_system(schwarz, "y2")
    h = schwarz.golden["reduced_hamiltonian"]
    traj = integrate(red.system, None, np.array([0.2, 0.3]), (0.0, 10.0))
    drift = monitor_invariant(traj, h)
    _verdict("07a reduced Hamiltonian drift", drift, 1e-8)

    worst_std = 0.0
    runs = [("schwarz", np.array([0.0, 1.0, 1.0])),
            ("dqho", np.array([0.1, 0.2, 0.1, 0.3, 0.2, 0.1]))]
    for example_id, x0 in runs:
        bundle = load_example(example_id)
        w = MultiVectorField.from_fields(list(bundle.basis))
        noether = contract_field(w, bundle.theta)
        traj = integrate(bundle.system.system, None, x0, (0.0, 5.0))
        values = np.array([noether(x).coeffs[0] for x in traj.states])
        assert abs(abs(values[0]) - 1.0) < 1e-9  # top contraction is +-1
        worst_std = max(worst_std, float(np.std(values)))
    _verdict("07b Noether top-contraction constancy (std)", worst_std, 1e-9)


def test_criterion_08_symmetry_flow():
    cases = {
        "schwarz": (TimeCoefficients([TimeCoefficients.sinusoid(0.1, 1.0),
                                      TimeCoefficients.constant(0.1),
                                      TimeCoefficients.constant(0.1)]),
                    np.array([0.0, 1.0, 0.0])),
        "control5": (None, np.array([0.1, 0.1, 0.1, 0.1, 0.1])),
        "dqho": (None, np.array([0.1, 0.1, 0.1, 0.1, 0.1, 0.1])),
        "osc_spin": (None, np.array([0.1, 0.2, 0.1, 0.3, 0.2, 0.3])),
        "r8_volume": (None, np.zeros(8)),
    }
    worst = 0.0
    for example_id, (coeffs, x0) in cases.items():
        bundle = load_example(example_id)
        for Y in bundle.symmetries:
            d = symmetry_flow_test(bundle.system.system, coeffs, Y, x0,
                                   0.5, (0.0, 5.0))
            worst = max(worst, d)
    _verdict("08a symmetry-flow discrepancy", worst, 1e-6)

    control5 = load_example("control5")
    bad = symmetry_flow_test(control5.system.system, None, control5.basis[0],
                             cases["control5"][1], 0.5, (0.0, 5.0))
    status = "PASS" if bad > 1e-3 else "FAIL"
    print(f"ACCEPTANCE 08b negative control: {status} "
          f"(discrepancy={bad:.3e}, required > 1e-03)")
    assert bad > 1e-3


def test_criterion_09_reconstruction():
    rng = np.random.default_rng(SEED)
    osc = load_example("osc_spin")
    names = ("sl123", "so456")
    schemes = [osc.schemes[n] for n in names]
    projs = [s.quotient for s in schemes]
    points = osc.samples(rng, 50)
    assert all(kernel_intersection_dim(projs, g) == 0 for g in points)
    goldens = [osc.golden["reduced"][n]["fields"] for n in names]
    worst = 0.0
    for g in points[:5]:
        for i in range(len(osc.basis)):
            reduced = [fields[i] if fields[i] is not None
                       else (lambda y: np.zeros(3)) for fields in goldens]
            val, _ = reconstruct_field(reduced, projs, g)
            worst = max(worst, float(np.max(np.abs(val - osc.basis[i](g)))))
    invariants = [(reduce_form(s), s.w, s.quotient) for s in schemes]
    for g in points[:5]:
        T, _ = reconstruct_form(invariants, 6, g)
        worst = max(worst, float(np.max(np.abs(T.coeffs - osc.theta(g).coeffs))))
    _verdict("09a field/form reconstruction (osc_spin)", worst, 1e-8)

    r8 = load_example("r8_volume")
    Zs = [r8.schemes[k].w for k in ("za", "zb", "zc")]
    g = r8.samples(rng, 1)[0]
    assert annihilator_intersection_dim(Zs[:1], 6, g) == 13
    assert annihilator_intersection_dim(Zs, 6, g) == 0
    invariants = [(reduce_form(r8.schemes[k]), r8.schemes[k].w,
                   r8.schemes[k].quotient) for k in ("za", "zb", "zc")]
    worst8 = 0.0
    for g in r8.samples(rng, 5):
        T, _ = reconstruct_form(invariants, 6, g)
        worst8 = max(worst8, float(np.max(np.abs(T.coeffs
                                                 - r8.theta(g).coeffs))))
        assert nondegeneracy_order(T, 3) == 3
    _verdict("09b volume-form recovery (R^8)", worst8, 1e-12)


def test_criterion_10_casimir():
    schwarz = load_example("schwarz")
    red = reduced_system(schwarz, "y2")
    rng = np.random.default_rng(SEED)
    samples = red.system.basis.chart.sample(rng, 10)
    _, det_fn = casimir_tensor(red.system.basis, samples)
    grid = np.linspace(-2.0, 2.0, 10)
    worst = max(abs(det_fn(np.array([u, v])) + 4.0)
                for u in grid for v in grid)
    _verdict("10 Casimir determinant det G = -4", worst, 1e-10)
