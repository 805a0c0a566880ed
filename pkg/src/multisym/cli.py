"""Command-line driver: validate, reduce, integrate, reconstruct, equilibria.

Every subcommand writes a JSON report (and figures unless --no-plot) into the
output directory and exits 0 on success, 1 when a check fails, 2 on usage
errors, and 3 when a trajectory leaves the chart domain (the partial CSV is
still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .calculus import DifferentialForm  # noqa: E402
from .errors import DomainExitError, MultisymError, UnknownExampleError  # noqa: E402
from .gallery import DEFAULT_SEED, EXAMPLE_IDS, load_example, reduced_system  # noqa: E402
from .integrate import TimeCoefficients, integrate, write_csv  # noqa: E402
from .msys import Report, validate_system, verify_hamiltonian_form  # noqa: E402
from .liealg import lie_symmetry_residual, structure_constants  # noqa: E402
from .reconstruction import (  # noqa: E402
    annihilator_intersection_dim,
    kernel_intersection_dim,
    reconstruct_field,
    reconstruct_form,
)
from .reduction import (  # noqa: E402
    fiber_residual,
    project_field,
    reduce_form,
    relative_equilibria,
    verify_reduction_scheme,
)
from .exterior import nondegeneracy_order  # noqa: E402

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _write_report(args, command, report: Report, artifacts, extra=None):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "command": command,
        "example": args.example,
        "seed": args.seed,
        "checks": report.as_dicts(),
        "artifacts": [str(a) for a in artifacts],
    }
    if extra:
        payload.update(extra)
    path = out / "report.json"
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(json.dumps(payload, indent=2))
    return path


def _residual_figure(report: Report, path):
    names = [c.name for c in report.checks]
    residuals = [max(c.residual, 1e-18) for c in report.checks]
    tols = [c.tol for c in report.checks]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.3 * len(names))))
    y = np.arange(len(names))
    colors = ["tab:green" if c.passed else "tab:red" for c in report.checks]
    ax.barh(y, residuals, color=colors)
    ax.scatter(tols, y, marker="|", color="black", s=120, label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("residual")
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _trajectory_figure(traj, path, title=""):
    fig, ax = plt.subplots(figsize=(7, 4))
    for i in range(traj.states.shape[1]):
        ax.plot(traj.times, traj.states[:, i], label=f"x{i + 1}")
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(fontsize=7, ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _corrupted_theta(bundle) -> DifferentialForm:
    """Deliberately wrong volume coefficient (negative-control hook)."""
    chart = bundle.chart
    return DifferentialForm.from_scalar_volume(
        chart,
        lambda x: -0.5 / x[1] ** 2,
        lambda x: np.array([0.0, 1.0 / x[1] ** 3, 0.0]),
        name="theta_corrupt")


def cmd_validate(args):
    bundle = load_example(args.example)
    rng = np.random.default_rng(args.seed)
    samples = bundle.samples(rng, args.samples)
    report = Report()

    theta = bundle.theta
    if args.corrupt_theta:
        if args.example != "schwarz":
            print("--corrupt-theta only applies to the schwarz example",
                  file=sys.stderr)
            return EXIT_USAGE
        theta = _corrupted_theta(bundle)
        bundle.system.theta = theta

    sc = structure_constants(bundle.basis, samples)
    report.add("structure_constants_fit", sc.residual, 1e-9)
    report.extend(validate_system(bundle.system, samples))
    for i, pair in enumerate(bundle.hamiltonian_pairs, start=1):
        report.add(f"hamiltonian_form_{i}",
                   verify_hamiltonian_form(pair, theta, samples), 1e-8)
    if bundle.symmetries is not None:
        worst = max(lie_symmetry_residual(Y, bundle.basis, samples)
                    for Y in bundle.symmetries)
        report.add("symmetry_certification", worst, 1e-7)

    artifacts = []
    if not args.no_plot:
        fig = Path(args.out) / f"validate_{args.example}.png"
        Path(args.out).mkdir(parents=True, exist_ok=True)
        _residual_figure(report, fig)
        artifacts.append(fig)
    artifacts.insert(0, _write_report(args, "validate", report, artifacts))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_reduce(args):
    bundle = load_example(args.example)
    if not bundle.schemes:
        print(f"example {args.example!r} has no reduction schemes", file=sys.stderr)
        return EXIT_USAGE
    names = [args.scheme] if args.scheme else list(bundle.schemes)
    for name in names:
        if name not in bundle.schemes:
            print(f"unknown scheme {name!r}; choose from {list(bundle.schemes)}",
                  file=sys.stderr)
            return EXIT_USAGE

    rng = np.random.default_rng(args.seed)
    report = Report()
    for name in names:
        scheme = bundle.schemes[name]
        samples = bundle.samples(rng, args.samples)
        base_samples = scheme.quotient.base.sample(rng, args.samples)
        sub = verify_reduction_scheme(scheme, samples, base_samples)
        for c in sub.checks:
            report.add(f"{name}/{c.name}", c.residual, c.tol)
        report.add(f"{name}/fiber_residual",
                   fiber_residual(scheme, base_samples[:3]), 1e-6)
        golden = bundle.golden.get("reduced", {}).get(name)
        if golden is not None:
            reduced = reduce_form(scheme)
            res = max((reduced(y) - golden["theta"](y)).norm()
                      for y in base_samples)
            report.add(f"{name}/reduced_form_match", res, 1e-8)
            for i, gold in enumerate(golden["fields"], start=1):
                proj, _ = project_field(bundle.basis[i - 1], scheme.quotient)
                if gold is None:
                    res = max(float(np.max(np.abs(proj(y)))) for y in base_samples)
                else:
                    res = max(float(np.max(np.abs(proj(y) - gold(y))))
                              for y in base_samples)
                report.add(f"{name}/projected_field_{i}", res, 1e-8)

    artifacts = []
    if not args.no_plot:
        fig = Path(args.out) / f"reduce_{args.example}.png"
        Path(args.out).mkdir(parents=True, exist_ok=True)
        _residual_figure(report, fig)
        artifacts.append(fig)
    artifacts.insert(0, _write_report(args, "reduce", report, artifacts))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _load_coeffs(path, r):
    spec = json.loads(Path(path).read_text())
    coeffs = TimeCoefficients.from_spec(spec["b"])
    if len(coeffs) != r:
        raise ValueError(f"{len(coeffs)} coefficients for {r} basis fields")
    return coeffs


def _named_invariants(bundle):
    """Conserved quantities monitored along ambient trajectories."""
    if bundle.id == "schwarz":
        h = bundle.golden["reduced_hamiltonian"]
        proj = bundle.schemes["y2"].quotient.projection
        return [("h", lambda x: h(proj(x)))]
    return []


def cmd_integrate(args):
    bundle = load_example(args.example)
    system = bundle.system.system
    coeffs = None
    if args.coeffs:
        coeffs = _load_coeffs(args.coeffs, len(system.basis))
    if args.x0:
        x0 = np.array([float(v) for v in args.x0.split(",")])
    else:
        rng = np.random.default_rng(args.seed)
        x0 = bundle.samples(rng, 1)[0]
    t_eval = np.arange(args.t0, args.tmax + 0.5 * args.dt_out, args.dt_out)

    invariants = _named_invariants(bundle) if args.invariants else []
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"trajectory_{args.example}.csv"

    report = Report()
    exited = False
    try:
        traj = integrate(system, coeffs, x0, (args.t0, args.tmax), t_eval=t_eval)
    except DomainExitError as err:
        traj = err.trajectory
        exited = True
        if traj is None:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_USAGE
    write_csv(traj, csv_path, invariants=invariants)
    artifacts = [csv_path]
    report.add("domain_exit", 1.0 if exited else 0.0, 0.5)
    for name, fn in invariants:
        base = fn(traj.states[0])
        drift = max(abs(fn(x) - base) for x in traj.states)
        report.add(f"invariant_drift_{name}", drift, 1e-8)

    if not args.no_plot:
        fig = out / f"trajectory_{args.example}.png"
        _trajectory_figure(traj, fig, title=f"{args.example} trajectory")
        artifacts.append(fig)
    _write_report(args, "integrate", report, artifacts,
                  extra={"exited": exited,
                         "exit_time": traj.exit_time,
                         "x0": [float(v) for v in x0]})
    if exited:
        return EXIT_DOMAIN
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_reconstruct(args):
    bundle = load_example(args.example)
    names = bundle.golden.get("reconstructible")
    if not names:
        print(f"example {args.example!r} has no reconstruction data",
              file=sys.stderr)
        return EXIT_USAGE
    rng = np.random.default_rng(args.seed)
    g = bundle.samples(rng, 1)[0]
    schemes = [bundle.schemes[n] for n in names]
    report = Report()

    if args.example == "osc_spin":
        projs = [s.quotient for s in schemes]
        report.add("kernel_intersection_dim",
                   float(kernel_intersection_dim(projs, g)), 0.5)
        worst = 0.0
        goldens = [bundle.golden["reduced"][n]["fields"] for n in names]
        for i in range(len(bundle.basis)):
            reduced = []
            for fields, s in zip(goldens, schemes):
                gold = fields[i]
                if gold is None:
                    dim = s.quotient.base.dim
                    reduced.append(lambda y, d=dim: np.zeros(d))
                else:
                    reduced.append(gold)
            val, _ = reconstruct_field(reduced, projs, g)
            worst = max(worst, float(np.max(np.abs(val - bundle.basis[i](g)))))
        report.add("field_reconstruction", worst, 1e-8)
    else:
        Zs = [s.w for s in schemes]
        report.add("single_annihilator_dim",
                   float(annihilator_intersection_dim(Zs[:1], 6, g)
                         - bundle.golden["annihilator_dim_single"]), 0.5)
        report.add("joint_annihilator_dim",
                   float(annihilator_intersection_dim(Zs, 6, g)), 0.5)
        invariants = [(reduce_form(s), s.w, s.quotient) for s in schemes]
        T, _ = reconstruct_form(invariants, 6, g)
        report.add("form_reconstruction",
                   float(np.max(np.abs(T.coeffs - bundle.theta(g).coeffs))), 1e-12)
        order = nondegeneracy_order(T, 3)
        report.add("nondegeneracy_order",
                   float(abs(order - bundle.golden["nondegeneracy_order"])), 0.5)

    artifacts = []
    if not args.no_plot:
        fig = Path(args.out) / f"reconstruct_{args.example}.png"
        Path(args.out).mkdir(parents=True, exist_ok=True)
        _residual_figure(report, fig)
        artifacts.append(fig)
    artifacts.insert(0, _write_report(args, "reconstruct", report, artifacts))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_equilibria(args):
    bundle = load_example(args.example)
    if "equilibria" not in bundle.golden:
        print(f"example {args.example!r} ships no equilibrium data",
              file=sys.stderr)
        return EXIT_USAGE
    red = reduced_system(bundle, args.scheme or next(iter(bundle.schemes)))
    X = red.system.field_at(0.0)
    if args.guess:
        guesses = [np.array([float(v) for v in g.split(",")]) for g in args.guess]
    else:
        guesses = [0.9 * p for p in bundle.golden["equilibria"]]
    results = relative_equilibria(X, guesses)

    report = Report()
    found = []
    for i, r in enumerate(results, start=1):
        report.add(f"equilibrium_{i}_residual", r["residual"], 1e-12)
        found.append({"point": [float(v) for v in r["point"]],
                      "eigenvalues": [[float(e.real), float(e.imag)]
                                      for e in r["eigenvalues"]],
                      "converged": bool(r["converged"])})
    want = bundle.golden.get("equilibrium_eigenvalues")
    if want is not None and results:
        worst = max(float(np.max(np.abs(np.sort_complex(r["eigenvalues"])
                                        - np.sort_complex(want.astype(complex)))))
                    for r in results)
        report.add("eigenvalue_match", worst, 1e-6)

    artifacts = []
    out = Path(args.out)
    if not args.no_plot and X.chart.dim == 2:
        out.mkdir(parents=True, exist_ok=True)
        fig_path = out / f"equilibria_{args.example}.png"
        g = np.linspace(-2, 2, 24)
        U = np.zeros((24, 24))
        V = np.zeros((24, 24))
        for i, yi in enumerate(g):
            for j, xj in enumerate(g):
                v = X(np.array([xj, yi]))
                U[i, j], V[i, j] = v[0], v[1]
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.streamplot(g, g, U, V, density=1.2, linewidth=0.6)
        for r in results:
            ax.plot(*r["point"], "ro")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        fig.tight_layout()
        fig.savefig(fig_path, dpi=120)
        plt.close(fig)
        artifacts.append(fig_path)
    artifacts.insert(0, _write_report(args, "equilibria", report, artifacts,
                                      extra={"equilibria": found}))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multisym",
        description="Lie systems with compatible multisymplectic forms")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("example", choices=EXAMPLE_IDS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", default="multisym_out")
        p.add_argument("--no-plot", action="store_true",
                       help="skip rendering figures")

    p = sub.add_parser("validate", help="structural and Hamiltonianity checks")
    common(p)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--corrupt-theta", action="store_true",
                   help="negative control: deliberately wrong volume form")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="certify and compare reduction schemes")
    common(p)
    p.add_argument("--scheme", help="restrict to one scheme")
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("integrate", help="integrate the time-dependent system")
    common(p)
    p.add_argument("--coeffs", help="JSON file with {'b': [...]} coefficient spec")
    p.add_argument("--x0", help="comma-separated initial point")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--dt-out", type=float, default=0.05)
    p.add_argument("--invariants", action="store_true",
                   help="append conserved-quantity columns to the CSV")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("reconstruct",
                       help="rebuild the ambient system from its reductions")
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("equilibria", help="equilibria of the reduced system")
    common(p)
    p.add_argument("--scheme", help="reduction scheme providing the quotient")
    p.add_argument("--guess", action="append",
                   help="comma-separated starting guess (repeatable)")
    p.set_defaults(func=cmd_equilibria)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnknownExampleError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except MultisymError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
