"""Built-in example bundles with golden regression data.

Each bundle wires a chart, a basis of vector fields with analytic jacobians,
a multisymplectic form with analytic coefficient gradients, Lie symmetries,
reduction schemes, and the expected (golden) values the regression driver
checks against.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .calculus import (
    Chart,
    ChartMap,
    DiffBackend,
    DifferentialForm,
    MultiVectorField,
    VectorField,
    combine_fields,
)
from .errors import UnknownExampleError
from .exterior import COVARIANT, AlternatingTensor
from .integrate import TimeCoefficients
from .liealg import (
    FieldFamily,
    LieSystem,
    invariant_volume,
    is_unimodular,
    lie_symmetry_residual,
    structure_constants,
)
from .msys import (
    HamiltonianPair,
    MultisymplecticLieSystem,
    Report,
    locally_hamiltonian_residual,
    validate_system,
    verify_hamiltonian_form,
)
from .reduction import QuotientChart, ReductionScheme, fiber_residual, project_field, reduce_form

EXAMPLE_IDS = ("schwarz", "dbh", "control5", "dqho", "osc_spin", "r8_volume")

DEFAULT_SEED = 42


@dataclass
class ExampleBundle:
    id: str
    system: MultisymplecticLieSystem
    symmetries: Optional[FieldFamily] = None
    hamiltonian_pairs: list = dc_field(default_factory=list)
    schemes: dict = dc_field(default_factory=dict)
    golden: dict = dc_field(default_factory=dict)

    @property
    def chart(self) -> Chart:
        return self.system.system.basis.chart

    @property
    def basis(self) -> FieldFamily:
        return self.system.system.basis

    @property
    def theta(self) -> DifferentialForm:
        return self.system.theta

    def samples(self, rng, count):
        return self.chart.sample(rng, count)


def _sc_table(r, entries):
    """(r, r, r) array from 1-based {(a, b): {g: value}} with a < b."""
    c = np.zeros((r, r, r))
    for (a, b), row in entries.items():
        for g, v in row.items():
            c[a - 1, b - 1, g - 1] = v
            c[b - 1, a - 1, g - 1] = -v
    return c


def _vf(chart, comps, jac, name):
    return VectorField(chart, comps, jac, name=name)


def _zeros(n):
    return np.zeros((n, n))


def _coordinate_projection(total: Chart, base: Chart, keep, name):
    """Projection keeping the listed 0-based coordinates, with zero section."""
    keep = list(keep)
    D = np.zeros((base.dim, total.dim))
    for row, col in enumerate(keep):
        D[row, col] = 1.0
    S = D.T.copy()

    def proj(x):
        return x[keep]

    def sect(y):
        return S @ y

    return (
        ChartMap(total, base, proj, lambda x: D, name=name),
        ChartMap(base, total, sect, lambda y: S, name=f"{name}^-1"),
    )


# ---------------------------------------------------------------------------
# Schwarz


def _build_schwarz() -> ExampleBundle:
    chart = Chart(
        dim=3, label="schwarz",
        predicate=lambda x: abs(x[1]) > 1e-3,
        margin=lambda x: abs(x[1]) - 1e-3,
        box=((-1.0, 1.0), (0.2, 1.2), (-1.0, 1.0)),
    )

    X1 = _vf(chart, lambda x: np.array([0.0, 0.0, 2 * x[1]]),
             lambda x: np.array([[0, 0, 0], [0, 0, 0], [0, 2.0, 0]]), "X1")
    X2 = _vf(chart, lambda x: np.array([0.0, x[1], 2 * x[2]]),
             lambda x: np.array([[0, 0, 0], [0, 1.0, 0], [0, 0, 2.0]]), "X2")
    X3 = _vf(chart, lambda x: np.array([x[1], x[2], 1.5 * x[2] ** 2 / x[1]]),
             lambda x: np.array([[0, 1.0, 0], [0, 0, 1.0],
                                 [0, -1.5 * x[2] ** 2 / x[1] ** 2, 3.0 * x[2] / x[1]]]),
             "X3")

    Y1 = _vf(chart, lambda x: np.array([1.0, 0.0, 0.0]), lambda x: _zeros(3), "Y1")
    Y2 = _vf(chart, lambda x: x.copy(), lambda x: np.eye(3), "Y2")
    Y3 = _vf(chart,
             lambda x: np.array([x[0] ** 2, 2 * x[1] * x[0],
                                 2 * (x[2] * x[0] + x[1] ** 2)]),
             lambda x: np.array([[2 * x[0], 0, 0],
                                 [2 * x[1], 2 * x[0], 0],
                                 [2 * x[2], 4 * x[1], 2 * x[0]]]), "Y3")

    # volume (1/(2 v^3)) da ^ dv ^ dx = -(1/(2 v^3)) dx ^ dv ^ da
    theta = DifferentialForm.from_scalar_volume(
        chart,
        lambda x: -0.5 / x[1] ** 3,
        lambda x: np.array([0.0, 1.5 / x[1] ** 4, 0.0]),
        name="theta_S",
    )

    def form1(chart, coeffs, grad, name):
        return DifferentialForm(chart, 1, coeffs, grad, name=name)

    th1 = form1(chart,
                lambda x: AlternatingTensor(3, 1, COVARIANT,
                                            np.array([-1.0 / x[1], 0.0, 0.0])),
                lambda x: np.array([[0.0, 0, 0], [1.0 / x[1] ** 2, 0, 0], [0, 0, 0]]),
                "theta1")
    th2 = form1(chart,
                lambda x: AlternatingTensor(3, 1, COVARIANT,
                                            np.array([-0.5 * x[2] / x[1] ** 2,
                                                      0.5 / x[1], 0.0])),
                lambda x: np.array([
                    [0.0, 0.0, 0.0],
                    [x[2] / x[1] ** 3, -0.5 / x[1] ** 2, 0.0],
                    [-0.5 / x[1] ** 2, 0.0, 0.0]]),
                "theta2")
    th3 = form1(chart,
                lambda x: AlternatingTensor(3, 1, COVARIANT,
                                            np.array([-0.25 * x[2] ** 2 / x[1] ** 3,
                                                      x[2] / x[1] ** 2,
                                                      -0.5 / x[1]])),
                lambda x: np.array([
                    [0.0, 0.0, 0.0],
                    [0.75 * x[2] ** 2 / x[1] ** 4, -2.0 * x[2] / x[1] ** 3,
                     0.5 / x[1] ** 2],
                    [-0.5 * x[2] / x[1] ** 3, 1.0 / x[1] ** 2, 0.0]]),
                "theta3")

    base = Chart(dim=2, label="schwarz_reduced", box=((-2.0, 2.0), (-2.0, 2.0)))
    proj = ChartMap(chart, base,
                    lambda x: np.array([x[0] / x[1], x[2] / x[1]]),
                    lambda x: np.array([[1 / x[1], -x[0] / x[1] ** 2, 0],
                                        [0, -x[2] / x[1] ** 2, 1 / x[1]]]),
                    name="pi_y2")
    sect = ChartMap(base, chart,
                    lambda y: np.array([y[0], 1.0, y[1]]),
                    lambda y: np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]),
                    name="sect_y2")
    quotient = QuotientChart(chart, base, proj, sect, fiber_flows=[Y2], name="y2")
    scheme = ReductionScheme(
        FieldFamily(chart, [Y2], name="G2"),
        MultiVectorField.from_fields([Y2]),
        theta, quotient, name="schwarz/y2")

    Xr1 = _vf(base, lambda y: np.array([0.0, 2.0]), lambda y: _zeros(2), "Xr1")
    Xr2 = _vf(base, lambda y: np.array([-y[0], y[1]]),
              lambda y: np.diag([-1.0, 1.0]), "Xr2")
    Xr3 = _vf(base, lambda y: np.array([1.0 - y[0] * y[1], 0.5 * y[1] ** 2]),
              lambda y: np.array([[-y[1], -y[0]], [0.0, y[1]]]), "Xr3")
    theta_r = DifferentialForm.constant(
        base, AlternatingTensor(2, 2, COVARIANT, np.array([0.5])), name="theta_bar")

    red_pairs = [
        HamiltonianPair(Xr1, DifferentialForm(
            base, 0, lambda y: AlternatingTensor.scalar(2, -y[0]),
            lambda y: np.array([[-1.0], [0.0]]), name="h1")),
        HamiltonianPair(Xr2, DifferentialForm(
            base, 0, lambda y: AlternatingTensor.scalar(2, -0.5 * y[0] * y[1]),
            lambda y: np.array([[-0.5 * y[1]], [-0.5 * y[0]]]), name="h2")),
        HamiltonianPair(Xr3, DifferentialForm(
            base, 0,
            lambda y: AlternatingTensor.scalar(2, 0.5 * (y[1] - 0.5 * y[0] * y[1] ** 2)),
            lambda y: np.array([[-0.25 * y[1] ** 2],
                                [0.5 * (1.0 - y[0] * y[1])]]), name="h3")),
    ]

    family = FieldFamily(chart, [X1, X2, X3], name="schwarz")
    coeffs = TimeCoefficients.constants([-0.25, 0.0, 1.0])
    system = LieSystem(family, coeffs.entries, name="schwarz")

    golden = {
        "structure_constants": _sc_table(3, {
            (1, 2): {1: 1.0}, (1, 3): {2: 2.0}, (2, 3): {3: 1.0}}),
        "symmetry_constants": _sc_table(3, {
            (1, 2): {1: 1.0}, (1, 3): {2: 2.0}, (2, 3): {3: 1.0}}),
        "unimodular": True,
        "theta_coeff": lambda x: -0.5 / x[1] ** 3,
        "reduced": {"y2": {
            "theta": theta_r,
            "fields": [Xr1, Xr2, Xr3],
            "hamiltonian_pairs": red_pairs,
            "coefficients": [-0.25, 0.0, 1.0],
        }},
        "equilibria": [np.array([1.0, 1.0]), np.array([-1.0, -1.0])],
        "equilibrium_eigenvalues": np.array([-1.0, 1.0]),
        "relative_equilibrium_lifts": [np.array([1.0, 1.0, 1.0]),
                                       np.array([-1.0, 1.0, -1.0])],
        "casimir_det": -4.0,
        "reduced_hamiltonian":
            lambda y: 0.5 * y[1] - 0.25 * y[0] * y[1] ** 2 + 0.25 * y[0],
        "noether_top": -1.0,
    }

    return ExampleBundle(
        id="schwarz",
        system=MultisymplecticLieSystem(system, theta, name="schwarz"),
        symmetries=FieldFamily(chart, [Y1, Y2, Y3], name="schwarz_sym"),
        hamiltonian_pairs=[HamiltonianPair(X1, th1), HamiltonianPair(X2, th2),
                           HamiltonianPair(X3, th3)],
        schemes={"y2": scheme},
        golden=golden,
    )


# ---------------------------------------------------------------------------
# Darboux-Brioschi-Halphen


def _build_dbh(alpha=(0.0, 0.0, 0.0)) -> ExampleBundle:
    a1, a2, a3 = (float(a) ** 2 for a in alpha)
    chart = Chart(
        dim=3, label="dbh",
        predicate=lambda w: min(abs(w[0] - w[1]), abs(w[1] - w[2]),
                                abs(w[0] - w[2])) > 1e-3,
        margin=lambda w: min(abs(w[0] - w[1]), abs(w[1] - w[2]),
                             abs(w[0] - w[2])) - 1e-3,
        box=((0.0, 0.8), (1.0, 1.8), (2.0, 2.8)),
    )

    def tau2(w):
        return (a1 * (w[0] - w[1]) * (w[2] - w[0])
                + a2 * (w[1] - w[2]) * (w[0] - w[1])
                + a3 * (w[2] - w[0]) * (w[1] - w[2]))

    def dtau2(w):
        return np.array([
            a1 * ((w[2] - w[0]) - (w[0] - w[1])) + (a2 - a3) * (w[1] - w[2]),
            -a1 * (w[2] - w[0]) + a2 * ((w[0] - w[1]) - (w[1] - w[2]))
            + a3 * (w[2] - w[0]),
            (a1 - a2) * (w[0] - w[1]) + a3 * ((w[1] - w[2]) - (w[2] - w[0])),
        ])

    X1 = _vf(chart, lambda w: np.ones(3), lambda w: _zeros(3), "X1")
    X2 = _vf(chart, lambda w: w.copy(), lambda w: np.eye(3), "X2")

    def x3_comps(w):
        t2 = tau2(w)
        return np.array([
            -(w[1] * w[2] - w[0] * (w[1] + w[2]) + t2),
            -(w[0] * w[2] - w[1] * (w[0] + w[2]) + t2),
            -(w[0] * w[1] - w[2] * (w[0] + w[1]) + t2),
        ])

    def x3_jac(w):
        dt = dtau2(w)
        return np.array([
            [w[1] + w[2] - dt[0], w[0] - w[2] - dt[1], w[0] - w[1] - dt[2]],
            [w[1] - w[2] - dt[0], w[0] + w[2] - dt[1], w[1] - w[0] - dt[2]],
            [w[2] - w[1] - dt[0], w[2] - w[0] - dt[1], w[0] + w[1] - dt[2]],
        ])

    X3 = _vf(chart, x3_comps, x3_jac, "X3")

    family = FieldFamily(chart, [X1, X2, X3], name="dbh")
    theta = invariant_volume(family)  # no closed form given; built numerically
    coeffs = TimeCoefficients.constants([0.0, 0.0, -1.0])
    system = LieSystem(family, coeffs.entries, name="dbh")

    golden = {
        "structure_constants": _sc_table(3, {
            (1, 2): {1: 1.0}, (1, 3): {2: 2.0}, (2, 3): {3: 1.0}}),
        "unimodular": True,
        "alpha": tuple(alpha),
    }

    return ExampleBundle(
        id="dbh",
        system=MultisymplecticLieSystem(system, theta, name="dbh"),
        golden=golden,
    )


# ---------------------------------------------------------------------------
# five-dimensional control system


def _build_control5() -> ExampleBundle:
    chart = Chart(dim=5, label="control5", box=tuple(((-1.0, 1.0),) * 5))

    X1 = _vf(chart, lambda x: np.eye(5)[0].copy(), lambda x: _zeros(5), "X1")

    def x2_comps(x):
        return np.array([0.0, 1.0, x[0], x[0] ** 2, 2 * x[0] * x[1]])

    def x2_jac(x):
        J = _zeros(5)
        J[2, 0] = 1.0
        J[3, 0] = 2 * x[0]
        J[4, 0] = 2 * x[1]
        J[4, 1] = 2 * x[0]
        return J

    X2 = _vf(chart, x2_comps, x2_jac, "X2")

    def x3_comps(x):
        return np.array([0.0, 0.0, 1.0, 2 * x[0], 2 * x[1]])

    def x3_jac(x):
        J = _zeros(5)
        J[3, 0] = 2.0
        J[4, 1] = 2.0
        return J

    X3 = _vf(chart, x3_comps, x3_jac, "X3")
    X4 = _vf(chart, lambda x: np.eye(5)[3].copy(), lambda x: _zeros(5), "X4")
    X5 = _vf(chart, lambda x: np.eye(5)[4].copy(), lambda x: _zeros(5), "X5")

    def y1_comps(x):
        return np.array([1.0, 0.0, x[1], 2 * x[2], x[1] ** 2])

    def y1_jac(x):
        J = _zeros(5)
        J[2, 1] = 1.0
        J[3, 2] = 2.0
        J[4, 1] = 2 * x[1]
        return J

    Y1 = _vf(chart, y1_comps, y1_jac, "Y1")

    def y2_comps(x):
        return np.array([0.0, 1.0, 0.0, 0.0, 2 * x[2]])

    def y2_jac(x):
        J = _zeros(5)
        J[4, 2] = 2.0
        return J

    Y2 = _vf(chart, y2_comps, y2_jac, "Y2")
    Y3 = _vf(chart, lambda x: np.eye(5)[2].copy(), lambda x: _zeros(5), "Y3")
    Y4 = _vf(chart, lambda x: np.eye(5)[3].copy(), lambda x: _zeros(5), "Y4")
    Y5 = _vf(chart, lambda x: np.eye(5)[4].copy(), lambda x: _zeros(5), "Y5")

    theta = DifferentialForm.from_scalar_volume(
        chart, lambda x: 1.0, lambda x: np.zeros(5), name="theta_B")

    base = Chart(dim=3, label="control5_reduced", box=tuple(((-1.0, 1.0),) * 3))
    proj, sect = _coordinate_projection(chart, base, [0, 1, 2], "pi_45")
    quotient = QuotientChart(chart, base, proj, sect,
                             fiber_flows=[Y4, Y5], name="y45")
    scheme = ReductionScheme(
        FieldFamily(chart, [Y4, Y5], name="y45"),
        MultiVectorField.from_fields([Y4, Y5]),
        theta, quotient, name="control5/y45")

    Xr1 = _vf(base, lambda y: np.eye(3)[0].copy(), lambda y: _zeros(3), "Xt1")

    def xr2_jac(y):
        J = _zeros(3)
        J[2, 0] = 1.0
        return J

    Xr2 = _vf(base, lambda y: np.array([0.0, 1.0, y[0]]), xr2_jac, "Xt2")
    Xr3 = _vf(base, lambda y: np.eye(3)[2].copy(), lambda y: _zeros(3), "Xt3")
    theta_r = DifferentialForm.from_scalar_volume(
        base, lambda y: 1.0, lambda y: np.zeros(3), name="theta_45")

    family = FieldFamily(chart, [X1, X2, X3, X4, X5], name="control5")
    coeffs = TimeCoefficients([
        TimeCoefficients.constant(1.0), TimeCoefficients.sinusoid(1.0, 1.0),
        TimeCoefficients.constant(0.0), TimeCoefficients.constant(0.0),
        TimeCoefficients.constant(0.0)])
    system = LieSystem(family, coeffs.entries, name="control5")

    golden = {
        "structure_constants": _sc_table(5, {
            (1, 2): {3: 1.0}, (1, 3): {4: 2.0}, (2, 3): {5: 2.0}}),
        "symmetry_constants": _sc_table(5, {
            (1, 2): {3: -1.0}, (1, 3): {4: -2.0}, (2, 3): {5: -2.0}}),
        "unimodular": True,
        "theta_coeff": lambda x: 1.0,
        "eta4": lambda x: np.array([0.0, x[0] ** 2, -2 * x[0], 1.0, 0.0]),
        "reduced": {"y45": {
            "theta": theta_r,
            "fields": [Xr1, Xr2, Xr3, None, None],
        }},
        "noether_top": 1.0,
    }

    return ExampleBundle(
        id="control5",
        system=MultisymplecticLieSystem(system, theta, name="control5"),
        symmetries=FieldFamily(chart, [Y1, Y2, Y3, Y4, Y5], name="control5_sym"),
        schemes={"y45": scheme},
        golden=golden,
    )


# ---------------------------------------------------------------------------
# dissipative quantum harmonic oscillator group (sl2 (+) h3)


def _build_dqho() -> ExampleBundle:
    chart = Chart(dim=6, label="dqho", box=tuple(((-1.0, 1.0),) * 6))

    def x1_comps(v):
        return np.array([1.0, 0, 0, v[4], 0, -0.5 * v[4] ** 2])

    def x1_jac(v):
        J = _zeros(6)
        J[3, 4] = 1.0
        J[5, 4] = -v[4]
        return J

    X1 = _vf(chart, x1_comps, x1_jac, "X1")

    def x2_comps(v):
        return np.array([v[0], 1.0, 0, 0.5 * v[3], -0.5 * v[4], 0])

    def x2_jac(v):
        J = _zeros(6)
        J[0, 0] = 1.0
        J[3, 3] = 0.5
        J[4, 4] = -0.5
        return J

    X2 = _vf(chart, x2_comps, x2_jac, "X2")

    def x3_comps(v):
        return np.array([v[0] ** 2, 2 * v[0], np.exp(v[1]), 0, -v[3],
                         0.5 * v[3] ** 2])

    def x3_jac(v):
        J = _zeros(6)
        J[0, 0] = 2 * v[0]
        J[1, 0] = 2.0
        J[2, 1] = np.exp(v[1])
        J[4, 3] = -1.0
        J[5, 3] = v[3]
        return J

    X3 = _vf(chart, x3_comps, x3_jac, "X3")
    X4 = _vf(chart, lambda v: np.eye(6)[3].copy(), lambda v: _zeros(6), "X4")

    def x5_comps(v):
        return np.array([0, 0, 0, 0, 1.0, -v[3]])

    def x5_jac(v):
        J = _zeros(6)
        J[5, 3] = -1.0
        return J

    X5 = _vf(chart, x5_comps, x5_jac, "X5")
    X6 = _vf(chart, lambda v: np.eye(6)[5].copy(), lambda v: _zeros(6), "X6")

    # left-invariant fields (these commute with the basis)
    def l1_comps(v):
        return np.array([np.exp(v[1]), 2 * v[2], v[2] ** 2, 0, 0, 0])

    def l1_jac(v):
        J = _zeros(6)
        J[0, 1] = np.exp(v[1])
        J[1, 2] = 2.0
        J[2, 2] = 2 * v[2]
        return J

    L1 = _vf(chart, l1_comps, l1_jac, "XL1")

    def l2_comps(v):
        return np.array([0, 1.0, v[2], 0, 0, 0])

    def l2_jac(v):
        J = _zeros(6)
        J[2, 2] = 1.0
        return J

    L2 = _vf(chart, l2_comps, l2_jac, "XL2")
    L3 = _vf(chart, lambda v: np.eye(6)[2].copy(), lambda v: _zeros(6), "XL3")

    def l4_comps(v):
        e = np.exp(-0.5 * v[1])
        f4 = e * (np.exp(v[1]) - v[0] * v[2])
        return np.array([0, 0, 0, f4, -e * v[2], -f4 * v[4]])

    def l4_jac(v):
        e = np.exp(-0.5 * v[1])
        ep = np.exp(0.5 * v[1])
        f4 = ep - v[0] * v[2] * e
        J = _zeros(6)
        J[3, 0] = -v[2] * e
        J[3, 1] = 0.5 * ep + 0.5 * v[0] * v[2] * e
        J[3, 2] = -v[0] * e
        J[4, 1] = 0.5 * v[2] * e
        J[4, 2] = -e
        J[5, 0] = -v[4] * J[3, 0]
        J[5, 1] = -v[4] * J[3, 1]
        J[5, 2] = -v[4] * J[3, 2]
        J[5, 4] = -f4
        return J

    L4 = _vf(chart, l4_comps, l4_jac, "XL4")

    def l5_comps(v):
        e = np.exp(-0.5 * v[1])
        return np.array([0, 0, 0, v[0] * e, e, -v[0] * v[4] * e])

    def l5_jac(v):
        e = np.exp(-0.5 * v[1])
        J = _zeros(6)
        J[3, 0] = e
        J[3, 1] = -0.5 * v[0] * e
        J[4, 1] = -0.5 * e
        J[5, 0] = -v[4] * e
        J[5, 1] = 0.5 * v[0] * v[4] * e
        J[5, 4] = -v[0] * e
        return J

    L5 = _vf(chart, l5_comps, l5_jac, "XL5")
    L6 = _vf(chart, lambda v: np.eye(6)[5].copy(), lambda v: _zeros(6), "XL6")

    theta = DifferentialForm.from_scalar_volume(
        chart, lambda v: np.exp(-v[1]),
        lambda v: np.array([0, -np.exp(-v[1]), 0, 0, 0, 0]),
        name="theta_do")

    base = Chart(dim=3, label="dqho_reduced", box=tuple(((-1.0, 1.0),) * 3))
    proj, sect = _coordinate_projection(chart, base, [3, 4, 5], "pi_sl")
    quotient = QuotientChart(chart, base, proj, sect,
                             fiber_flows=[L1, L2, L3], name="sl")
    scheme = ReductionScheme(
        FieldFamily(chart, [L1, L2, L3], name="sl_left"),
        MultiVectorField.from_fields([L1, L2, L3]),
        theta, quotient, name="dqho/sl")

    def r1_jac(y):
        J = _zeros(3)
        J[0, 1] = 1.0
        J[2, 1] = -y[1]
        return J

    R1 = _vf(base, lambda y: np.array([y[1], 0, -0.5 * y[1] ** 2]), r1_jac, "Xsl1")
    R2 = _vf(base, lambda y: np.array([0.5 * y[0], -0.5 * y[1], 0]),
             lambda y: np.diag([0.5, -0.5, 0.0]), "Xsl2")

    def r3_jac(y):
        J = _zeros(3)
        J[1, 0] = -1.0
        J[2, 0] = y[0]
        return J

    R3 = _vf(base, lambda y: np.array([0, -y[0], 0.5 * y[0] ** 2]), r3_jac, "Xsl3")
    R4 = _vf(base, lambda y: np.eye(3)[0].copy(), lambda y: _zeros(3), "Xsl4")

    def r5_jac(y):
        J = _zeros(3)
        J[2, 0] = -1.0
        return J

    R5 = _vf(base, lambda y: np.array([0, 1.0, -y[0]]), r5_jac, "Xsl5")
    R6 = _vf(base, lambda y: np.eye(3)[2].copy(), lambda y: _zeros(3), "Xsl6")

    theta_r = DifferentialForm.from_scalar_volume(
        base, lambda y: 1.0, lambda y: np.zeros(3), name="theta_sl")

    sc = _sc_table(6, {
        (1, 2): {1: 1.0}, (1, 3): {2: 2.0}, (2, 3): {3: 1.0},
        (2, 4): {4: -0.5}, (3, 4): {5: 1.0},
        (1, 5): {4: -1.0}, (2, 5): {5: 0.5}, (4, 5): {6: -1.0},
    })

    family = FieldFamily(chart, [X1, X2, X3, X4, X5, X6], name="dqho")
    coeffs = TimeCoefficients.constants([1.0, 0.0, 0.0, 1.0, 1.0, 0.0])
    system = LieSystem(family, coeffs.entries, name="dqho")

    golden = {
        "structure_constants": sc,
        "symmetry_constants": -sc,
        "unimodular": True,
        "theta_coeff": lambda v: np.exp(-v[1]),
        "eta4_at_zero": np.array([0, 0, 0, 1.0, 0, 0]),
        "reduced": {"sl": {
            "theta": theta_r,
            "fields": [R1, R2, R3, R4, R5, R6],
            "constants": sc,  # projection preserves the full table
        }},
    }

    return ExampleBundle(
        id="dqho",
        system=MultisymplecticLieSystem(system, theta, name="dqho"),
        symmetries=FieldFamily(chart, [L1, L2, L3, L4, L5, L6], name="dqho_left"),
        schemes={"sl": scheme},
        golden=golden,
    )


# ---------------------------------------------------------------------------
# oscillator with spin-magnetic term (sl2 x so3)


def _build_osc_spin() -> ExampleBundle:
    chart = Chart(
        dim=6, label="osc_spin",
        predicate=lambda v: abs(np.cos(v[4])) > 1e-2,
        margin=lambda v: abs(np.cos(v[4])) - 1e-2,
        box=((-1.0, 1.0),) * 4 + ((-1.2, 1.2), (-1.0, 1.0)),
    )

    X1 = _vf(chart, lambda v: np.eye(6)[0].copy(), lambda v: _zeros(6), "X1")

    def x2_jac(v):
        J = _zeros(6)
        J[0, 0] = 1.0
        return J

    X2 = _vf(chart, lambda v: np.array([v[0], 1.0, 0, 0, 0, 0]), x2_jac, "X2")

    def x3_comps(v):
        return np.array([v[0] ** 2, 2 * v[0], np.exp(v[1]), 0, 0, 0])

    def x3_jac(v):
        J = _zeros(6)
        J[0, 0] = 2 * v[0]
        J[1, 0] = 2.0
        J[2, 1] = np.exp(v[1])
        return J

    X3 = _vf(chart, x3_comps, x3_jac, "X3")
    X4 = _vf(chart, lambda v: np.eye(6)[3].copy(), lambda v: _zeros(6), "X4")

    def so3_field(chart6, sign_idx, name):
        """X5-type (sin-leading) or X6-type (cos-leading) rotation field."""

        def comps(v):
            s4, c4 = np.sin(v[3]), np.cos(v[3])
            t5, sec5 = np.tan(v[4]), 1.0 / np.cos(v[4])
            if sign_idx == 5:
                lead, other = s4, c4
            else:
                lead, other = c4, -s4
            return np.array([0, 0, 0, lead * t5, other, lead * sec5])

        def jac(v):
            s4, c4 = np.sin(v[3]), np.cos(v[3])
            t5, sec5 = np.tan(v[4]), 1.0 / np.cos(v[4])
            J = _zeros(6)
            if sign_idx == 5:
                lead, dlead, dother = s4, c4, -s4
            else:
                lead, dlead, dother = c4, -s4, -c4
            J[3, 3] = dlead * t5
            J[3, 4] = lead * sec5 ** 2
            J[4, 3] = dother
            J[5, 3] = dlead * sec5
            J[5, 4] = lead * sec5 * t5
            return J

        return _vf(chart6, comps, jac, name)

    X5 = so3_field(chart, 5, "X5")
    X6 = so3_field(chart, 6, "X6")

    def y1_comps(v):
        return np.array([np.exp(v[1]), 2 * v[2], v[2] ** 2, 0, 0, 0])

    def y1_jac(v):
        J = _zeros(6)
        J[0, 1] = np.exp(v[1])
        J[1, 2] = 2.0
        J[2, 2] = 2 * v[2]
        return J

    Y1 = _vf(chart, y1_comps, y1_jac, "Y1")

    def y2_jac(v):
        J = _zeros(6)
        J[2, 2] = 1.0
        return J

    Y2 = _vf(chart, lambda v: np.array([0, 1.0, v[2], 0, 0, 0]), y2_jac, "Y2")
    Y3 = _vf(chart, lambda v: np.eye(6)[2].copy(), lambda v: _zeros(6), "Y3")

    def so3_left_field(chart6, sign_idx, name):
        """Y4-type (cos v6-leading) or Y5-type (sin v6-leading) left field."""

        def comps(v):
            s6, c6 = np.sin(v[5]), np.cos(v[5])
            t5, sec5 = np.tan(v[4]), 1.0 / np.cos(v[4])
            if sign_idx == 4:
                lead, mid = c6, -s6
            else:
                lead, mid = s6, c6
            return np.array([0, 0, 0, lead * sec5, mid, lead * t5])

        def jac(v):
            s6, c6 = np.sin(v[5]), np.cos(v[5])
            t5, sec5 = np.tan(v[4]), 1.0 / np.cos(v[4])
            J = _zeros(6)
            if sign_idx == 4:
                lead, dlead, dmid = c6, -s6, -c6
            else:
                lead, dlead, dmid = s6, c6, -s6
            J[3, 4] = lead * sec5 * t5
            J[3, 5] = dlead * sec5
            J[4, 5] = dmid
            J[5, 4] = lead * sec5 ** 2
            J[5, 5] = dlead * t5
            return J

        return _vf(chart6, comps, jac, name)

    Y4 = so3_left_field(chart, 4, "Y4")
    Y5 = so3_left_field(chart, 5, "Y5")
    Y6 = _vf(chart, lambda v: np.eye(6)[5].copy(), lambda v: _zeros(6), "Y6")

    theta = DifferentialForm.from_scalar_volume(
        chart, lambda v: np.exp(-v[1]) * np.cos(v[4]),
        lambda v: np.array([0, -np.exp(-v[1]) * np.cos(v[4]), 0, 0,
                            -np.exp(-v[1]) * np.sin(v[4]), 0]),
        name="theta_os")

    base_so = Chart(dim=3, label="osc_spin_so3",
                    predicate=lambda y: abs(np.cos(y[1])) > 1e-2,
                    margin=lambda y: abs(np.cos(y[1])) - 1e-2,
                    box=((-1.0, 1.0), (-1.2, 1.2), (-1.0, 1.0)))
    proj123, sect123 = _coordinate_projection(chart, base_so, [3, 4, 5], "pi_123")
    quot123 = QuotientChart(chart, base_so, proj123, sect123,
                            fiber_flows=[Y1, Y2, Y3], name="sl123")
    scheme123 = ReductionScheme(
        FieldFamily(chart, [Y1, Y2, Y3], name="sl123"),
        MultiVectorField.from_fields([Y1, Y2, Y3]),
        theta, quot123, name="osc_spin/sl123")

    base_sl = Chart(dim=3, label="osc_spin_sl2", box=((-1.0, 1.0),) * 3)
    proj456, sect456 = _coordinate_projection(chart, base_sl, [0, 1, 2], "pi_456")
    quot456 = QuotientChart(chart, base_sl, proj456, sect456,
                            fiber_flows=[Y4, Y5, Y6], name="so456")
    scheme456 = ReductionScheme(
        FieldFamily(chart, [Y4, Y5, Y6], name="so456"),
        MultiVectorField.from_fields([Y4, Y5, Y6]),
        theta, quot456, name="osc_spin/so456")

    # golden reduced fields on the two bases
    S4 = _vf(base_so, lambda y: np.eye(3)[0].copy(), lambda y: _zeros(3), "Xso4")

    def sred(sign_idx, name):
        def comps(y):
            s4, c4 = np.sin(y[0]), np.cos(y[0])
            t5, sec5 = np.tan(y[1]), 1.0 / np.cos(y[1])
            if sign_idx == 5:
                lead, other = s4, c4
            else:
                lead, other = c4, -s4
            return np.array([lead * t5, other, lead * sec5])

        def jac(y):
            s4, c4 = np.sin(y[0]), np.cos(y[0])
            t5, sec5 = np.tan(y[1]), 1.0 / np.cos(y[1])
            J = _zeros(3)
            if sign_idx == 5:
                lead, dlead, dother = s4, c4, -s4
            else:
                lead, dlead, dother = c4, -s4, -c4
            J[0, 0] = dlead * t5
            J[0, 1] = lead * sec5 ** 2
            J[1, 0] = dother
            J[2, 0] = dlead * sec5
            J[2, 1] = lead * sec5 * t5
            return J

        return _vf(base_so, comps, jac, name)

    S5 = sred(5, "Xso5")
    S6 = sred(6, "Xso6")

    T1 = _vf(base_sl, lambda y: np.eye(3)[0].copy(), lambda y: _zeros(3), "Xsl1")

    def t2_jac(y):
        J = _zeros(3)
        J[0, 0] = 1.0
        return J

    T2 = _vf(base_sl, lambda y: np.array([y[0], 1.0, 0]), t2_jac, "Xsl2")

    def t3_jac(y):
        J = _zeros(3)
        J[0, 0] = 2 * y[0]
        J[1, 0] = 2.0
        J[2, 1] = np.exp(y[1])
        return J

    T3 = _vf(base_sl, lambda y: np.array([y[0] ** 2, 2 * y[0], np.exp(y[1])]),
             t3_jac, "Xsl3")

    theta_123 = DifferentialForm.from_scalar_volume(
        base_so, lambda y: np.cos(y[1]),
        lambda y: np.array([0.0, -np.sin(y[1]), 0.0]), name="theta_123")
    theta_456 = DifferentialForm.from_scalar_volume(
        base_sl, lambda y: -np.exp(-y[1]),
        lambda y: np.array([0.0, np.exp(-y[1]), 0.0]), name="theta_456")

    sc = _sc_table(6, {
        (1, 2): {1: 1.0}, (1, 3): {2: 2.0}, (2, 3): {3: 1.0},
        (4, 5): {6: 1.0}, (4, 6): {5: -1.0}, (5, 6): {4: 1.0},
    })

    family = FieldFamily(chart, [X1, X2, X3, X4, X5, X6], name="osc_spin")
    coeffs = TimeCoefficients.constants([1.0, 0.0, 0.0, 1.0, 0.0, 0.0])
    system = LieSystem(family, coeffs.entries, name="osc_spin")

    golden = {
        "structure_constants": sc,
        "symmetry_constants": -sc,
        "unimodular": True,
        "theta_coeff": lambda v: np.exp(-v[1]) * np.cos(v[4]),
        "reduced": {
            "sl123": {"theta": theta_123, "fields": [None, None, None, S4, S5, S6]},
            "so456": {"theta": theta_456, "fields": [T1, T2, T3, None, None, None]},
        },
        "reconstructible": ("sl123", "so456"),
    }

    return ExampleBundle(
        id="osc_spin",
        system=MultisymplecticLieSystem(system, theta, name="osc_spin"),
        symmetries=FieldFamily(chart, [Y1, Y2, Y3, Y4, Y5, Y6], name="osc_spin_sym"),
        schemes={"sl123": scheme123, "so456": scheme456},
        golden=golden,
    )


# ---------------------------------------------------------------------------
# R^8 with the sum-of-all-six-forms multisymplectic structure


def _build_r8() -> ExampleBundle:
    chart = Chart(dim=8, label="r8_volume", box=tuple(((-1.0, 1.0),) * 8))

    fields = [
        _vf(chart, (lambda i: lambda x: np.eye(8)[i].copy())(i),
            lambda x: _zeros(8), f"X{i + 1}")
        for i in range(8)
    ]

    omega = DifferentialForm.constant(
        chart,
        AlternatingTensor(8, 6, COVARIANT, np.ones(28)),
        name="omega_S")

    def pair_scheme(i, j, keep, name):
        base = Chart(dim=6, label=f"r8_base_{name}", box=tuple(((-1.0, 1.0),) * 6))
        proj, sect = _coordinate_projection(chart, base, keep, f"pi_{name}")
        quot = QuotientChart(chart, base, proj, sect,
                             fiber_flows=[fields[i], fields[j]], name=name)
        return ReductionScheme(
            FieldFamily(chart, [fields[i], fields[j]], name=name),
            MultiVectorField.from_fields([fields[i], fields[j]]),
            omega, quot, name=f"r8/{name}")

    schemes = {
        "za": pair_scheme(0, 1, [2, 3, 4, 5, 6, 7], "za"),
        "zb": pair_scheme(3, 4, [0, 1, 2, 5, 6, 7], "zb"),
        "zc": pair_scheme(6, 7, [0, 1, 2, 3, 4, 5], "zc"),
    }

    family = FieldFamily(chart, fields, name="r8_volume")
    coeffs = TimeCoefficients.constants([1.0] * 8)
    system = LieSystem(family, coeffs.entries, name="r8_volume")

    golden = {
        "structure_constants": np.zeros((8, 8, 8)),
        "unimodular": True,
        "annihilator_dim_single": 13,  # C(8,6) - C(6,4)
        "nondegeneracy_order": 3,
        "reconstructible": ("za", "zb", "zc"),
    }

    return ExampleBundle(
        id="r8_volume",
        system=MultisymplecticLieSystem(system, omega, name="r8_volume"),
        symmetries=FieldFamily(chart, fields, name="r8_sym"),
        schemes=schemes,
        golden=golden,
    )


# ---------------------------------------------------------------------------


_BUILDERS = {
    "schwarz": _build_schwarz,
    "dbh": _build_dbh,
    "control5": _build_control5,
    "dqho": _build_dqho,
    "osc_spin": _build_osc_spin,
    "r8_volume": _build_r8,
}


def load_example(example_id: str, **kwargs) -> ExampleBundle:
    if example_id not in _BUILDERS:
        raise UnknownExampleError(
            f"unknown example {example_id!r}; choose from {EXAMPLE_IDS}")
    return _BUILDERS[example_id](**kwargs)


def reduced_system(bundle: ExampleBundle, scheme_name: str) -> MultisymplecticLieSystem:
    """Golden reduced bundle (analytic fields/form) as a validated system."""
    data = bundle.golden["reduced"][scheme_name]
    fields = [f for f in data["fields"] if f is not None]
    kept = [b for f, b in zip(data["fields"], bundle.system.system.coefficients)
            if f is not None]
    base = fields[0].chart
    family = FieldFamily(base, fields, name=f"{bundle.id}_{scheme_name}_reduced")
    system = LieSystem(family, kept, name=f"{bundle.id}_{scheme_name}_reduced")
    return MultisymplecticLieSystem(system, data["theta"],
                                    name=f"{bundle.id}/{scheme_name}")


def golden_check(example_id: str, seed: int = DEFAULT_SEED, n_samples: int = 25,
                 backend: DiffBackend = DiffBackend()) -> Report:
    """Regression driver: run every applicable check against golden data."""
    bundle = load_example(example_id)
    rng = np.random.default_rng(seed)
    samples = bundle.samples(rng, n_samples)
    report = Report()

    sc = structure_constants(bundle.basis, samples, backend)
    report.add("structure_constants_fit", sc.residual, 1e-9)
    report.add("structure_constants_match",
               float(np.max(np.abs(sc.c - bundle.golden["structure_constants"]))),
               1e-9)
    uni, traces = is_unimodular(sc)
    if bundle.golden.get("unimodular"):
        report.add("unimodular", float(np.max(np.abs(traces))), 1e-9)

    report.extend(validate_system(bundle.system, samples, backend))

    if "theta_coeff" in bundle.golden:
        vol = invariant_volume(bundle.basis)
        res = max(abs(vol(x).coeffs[0] - bundle.golden["theta_coeff"](x))
                  for x in samples)
        report.add("invariant_volume_match", res, 1e-9)

    for i, pair in enumerate(bundle.hamiltonian_pairs, start=1):
        res = verify_hamiltonian_form(pair, bundle.theta, samples, backend)
        report.add(f"hamiltonian_form_{i}", res, 1e-8)

    if bundle.symmetries is not None:
        sym_sc = structure_constants(bundle.symmetries, samples, backend)
        report.add("symmetry_closure", sym_sc.residual, 1e-6)
        if "symmetry_constants" in bundle.golden:
            report.add("symmetry_constants_match",
                       float(np.max(np.abs(sym_sc.c
                                           - bundle.golden["symmetry_constants"]))),
                       1e-9)
        worst = max(lie_symmetry_residual(Y, bundle.basis, samples, backend)
                    for Y in bundle.symmetries)
        report.add("symmetry_certification", worst, 1e-7)

    for name, scheme in bundle.schemes.items():
        data = bundle.golden.get("reduced", {}).get(name)
        if data is None:
            continue
        base_samples = scheme.quotient.base.sample(rng, min(n_samples, 10))
        reduced = reduce_form(scheme)
        res = max((reduced(y) - data["theta"](y)).norm() for y in base_samples)
        report.add(f"reduced_form_{name}", res, 1e-8)
        for i, gold in enumerate(data["fields"], start=1):
            proj, _ = project_field(bundle.basis[i - 1], scheme.quotient)
            if gold is None:
                res = max(float(np.max(np.abs(proj(y)))) for y in base_samples)
            else:
                res = max(float(np.max(np.abs(proj(y) - gold(y))))
                          for y in base_samples)
            report.add(f"projected_field_{name}_{i}", res, 1e-8)
        report.add(f"fiber_residual_{name}",
                   fiber_residual(scheme, base_samples[:3]), 1e-6)
    return report
