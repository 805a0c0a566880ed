"""Non-autonomous integration of Lie systems and solution-mapping tests.

Wraps scipy's adaptive embedded Runge-Kutta 5(4) solver; piecewise
coefficients are integrated segment by segment, and leaving the chart domain
halts integration with the partial trajectory attached to the error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .calculus import VectorField
from .errors import DomainExitError
from .liealg import FieldFamily, LieSystem

REL_TOL = 1e-9
ABS_TOL = 1e-11


@dataclass(frozen=True)
class CoeffFn:
    """One time-coefficient b(t) with optional breakpoints (piecewise case)."""

    fn: Callable[[float], float]
    breaks: tuple = ()
    label: str = ""

    def __call__(self, t):
        return float(self.fn(t))


class TimeCoefficients:
    """Ordered list of b_alpha(t) built from the standard presets."""

    def __init__(self, entries: Sequence[CoeffFn]):
        self.entries = list(entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def breakpoints(self, t0, tf):
        pts = sorted({b for e in self.entries for b in e.breaks if t0 < b < tf})
        return pts

    @staticmethod
    def constant(c):
        return CoeffFn(lambda t: c, label=f"const({c})")

    @staticmethod
    def sinusoid(A, omega, phi=0.0):
        return CoeffFn(lambda t: A * np.sin(omega * t + phi),
                       label=f"sin(A={A},w={omega},phi={phi})")

    @staticmethod
    def polynomial(coeffs):
        p = np.polynomial.Polynomial(list(coeffs))
        return CoeffFn(lambda t: p(t), label=f"poly{tuple(coeffs)}")

    @staticmethod
    def piecewise_constant(breaks, values):
        breaks = tuple(float(b) for b in breaks)
        values = [float(v) for v in values]
        if len(values) != len(breaks) + 1:
            raise ValueError("piecewise needs len(values) == len(breaks) + 1")

        def fn(t):
            return values[int(np.searchsorted(breaks, t, side="right"))]

        return CoeffFn(fn, breaks=breaks, label="piecewise")

    @classmethod
    def from_spec(cls, spec: list) -> "TimeCoefficients":
        """Build from [{"type": "constant", "c": 1.0}, ...] dictionaries."""
        entries = []
        for item in spec:
            kind = item.get("type")
            if kind == "constant":
                entries.append(cls.constant(item["c"]))
            elif kind == "sin":
                entries.append(cls.sinusoid(item["A"], item["omega"], item.get("phi", 0.0)))
            elif kind == "poly":
                entries.append(cls.polynomial(item["coeffs"]))
            elif kind == "piecewise":
                entries.append(cls.piecewise_constant(item["breaks"], item["values"]))
            else:
                raise ValueError(f"unknown coefficient type {kind!r}")
        return cls(entries)

    @classmethod
    def constants(cls, values) -> "TimeCoefficients":
        return cls([cls.constant(v) for v in values])


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), n)
    stats: dict = field(default_factory=dict)
    exited: bool = False
    exit_time: Optional[float] = None

    def __len__(self):
        return len(self.times)


def _resolve(system, coeffs):
    if isinstance(system, LieSystem):
        basis = system.basis
        fns = list(coeffs) if coeffs is not None else list(system.coefficients)
    else:
        basis = system
        fns = list(coeffs)
    if len(fns) != len(basis):
        raise ValueError(f"{len(fns)} coefficients for {len(basis)} basis fields")
    return basis, fns


def integrate(system, coeffs, x0, t_span, t_eval=None,
              rel_tol=REL_TOL, abs_tol=ABS_TOL, num=201) -> Trajectory:
    """Integrate dx/dt = sum_a b_a(t) X_a(x) with RK5(4).

    Raises DomainExitError (with the partial trajectory attached) when the
    chart's margin function crosses zero.
    """
    basis, fns = _resolve(system, coeffs)
    chart = basis.chart
    x0 = np.asarray(x0, dtype=float)
    if not chart.contains(x0):
        raise DomainExitError(f"initial point {x0} outside chart {chart.label!r}")
    t0, tf = float(t_span[0]), float(t_span[1])
    if t_eval is None:
        t_eval = np.linspace(t0, tf, num)
    t_eval = np.asarray(t_eval, dtype=float)

    def make_rhs(lo, hi):
        # clamp piecewise coefficients strictly inside the segment so the
        # solver's endpoint evaluations never read past a breakpoint
        hi_in = np.nextafter(hi, lo)
        lo_in = np.nextafter(lo, hi)

        def rhs(t, y):
            total = np.zeros_like(y)
            for b, X in zip(fns, basis):
                tb = min(max(t, lo_in), hi_in) if getattr(b, "breaks", ()) else t
                total = total + b(tb) * X(y)
            return total

        return rhs

    events = None
    if chart.margin is not None:
        def exit_event(t, y):
            return chart.margin(y)
        exit_event.terminal = True
        events = [exit_event]

    breaks = []
    if coeffs is not None and isinstance(coeffs, TimeCoefficients):
        breaks = coeffs.breakpoints(t0, tf)
    edges = [t0] + breaks + [tf]

    times, states = [], []
    nfev = 0
    y = x0
    for lo, hi in zip(edges[:-1], edges[1:]):
        seg_eval = t_eval[(t_eval >= lo - 1e-14) & (t_eval <= hi + 1e-14)]
        seg_eval = np.unique(np.clip(seg_eval, lo, hi))
        sol = solve_ivp(make_rhs(lo, hi), (lo, hi), y, method="RK45",
                        t_eval=seg_eval if seg_eval.size else None,
                        rtol=rel_tol, atol=abs_tol, events=events, dense_output=True)
        nfev += sol.nfev
        if sol.t.size:
            for t, col in zip(sol.t, sol.y.T):
                if times and abs(t - times[-1]) < 1e-14:
                    continue
                times.append(t)
                states.append(col)
        if sol.status == 1:  # terminated by the domain-exit event
            t_exit = float(sol.t_events[0][0])
            traj = Trajectory(np.array(times), np.array(states),
                              stats={"nfev": nfev, "rel_tol": rel_tol, "abs_tol": abs_tol},
                              exited=True, exit_time=t_exit)
            raise DomainExitError(
                f"left chart {chart.label!r} at t = {t_exit:.6g}", trajectory=traj)
        if not sol.success:
            raise RuntimeError(f"integration failed: {sol.message}")
        y = sol.sol(hi) if sol.sol is not None else sol.y[:, -1]
    return Trajectory(np.array(times), np.array(states),
                      stats={"nfev": nfev, "rel_tol": rel_tol, "abs_tol": abs_tol})


def flow(X: VectorField, x0, s: float, tol: float = 1e-11):
    """Time-s flow of an autonomous field."""
    x0 = np.asarray(x0, dtype=float)
    if s == 0.0:
        return x0.copy()
    sol = solve_ivp(lambda t, y: X(y), (0.0, s), x0, method="RK45",
                    rtol=tol, atol=tol * 1e-2)
    if not sol.success:
        raise RuntimeError(f"flow integration failed: {sol.message}")
    return sol.y[:, -1]


def monitor_invariant(traj: Trajectory, f) -> float:
    """Maximum drift of f along the trajectory relative to its initial value."""
    base = f(traj.states[0])
    return max(abs(f(x) - base) for x in traj.states)


def symmetry_flow_test(system, coeffs, Y: VectorField, x0, sigma: float,
                       t_span, num=26) -> float:
    """How far the flow of Y is from mapping solutions to solutions.

    Compares Phi_sigma(x(t)) with the solution started from Phi_sigma(x0);
    returns the sup-norm discrepancy over the evaluation grid.
    """
    t_eval = np.linspace(t_span[0], t_span[1], num)
    base = integrate(system, coeffs, x0, t_span, t_eval=t_eval)
    shifted_x0 = flow(Y, x0, sigma)
    shifted = integrate(system, coeffs, shifted_x0, t_span, t_eval=t_eval)
    worst = 0.0
    for xa, xb in zip(base.states, shifted.states):
        worst = max(worst, float(np.max(np.abs(flow(Y, xa, sigma) - xb))))
    return worst


def closed_form_schwarz_reduced(c1: float, c2: float, regime: str, t):
    """Closed-form planar solutions of dx/dt = 1 - x a, da/dt = (a^2 - 1)/2.

    Regimes: 'inside' (|a| < 1, hyperbolic), 'outside' (|a| > 1, exponential),
    'boundaryPlus' / 'boundaryMinus' (a = +-1).
    """
    t = np.asarray(t, dtype=float)
    u = t + 2.0 * c1
    if regime == "inside":
        x = (2 * c2 - 1) * (1 + np.cosh(u)) + np.sinh(u)
        a = (1 - np.exp(u)) / (np.exp(u) + 1)
    elif regime == "outside":
        x = -1 - 2 * c2 + np.exp(u) * c2 + np.exp(-u) * (1 + c2)
        a = (1 + np.exp(u)) / (1 - np.exp(u))
    elif regime == "boundaryPlus":
        x = 1 + np.exp(-t) * c2
        a = np.ones_like(t)
    elif regime == "boundaryMinus":
        x = -1 + np.exp(t) * c2
        a = -np.ones_like(t)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return x, a


def write_csv(traj: Trajectory, path, invariants=None):
    """Write `t,x1,...,xn[,inv_<name>...]` rows at 17 significant digits."""
    invariants = invariants or []
    n = traj.states.shape[1] if len(traj) else 0
    header = ["t"] + [f"x{i}" for i in range(1, n + 1)]
    header += [f"inv_{name}" for name, _ in invariants]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, x in zip(traj.times, traj.states):
            row = [f"{t:.17g}"] + [f"{v:.17g}" for v in x]
            row += [f"{fn(x):.17g}" for _, fn in invariants]
            writer.writerow(row)
