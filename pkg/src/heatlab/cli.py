"""Command-line experiment runner.

    heatlab <subcommand> [--key value]...

Every run prints a JSON report and writes CSV/JSON artifacts into
``--output``.  Exit status: 0 all checks pass, 1 a check failed, 2 usage
error, 3 resource budget exceeded.
"""
import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import chain as ch
from . import fourier as fo
from . import heat as ht
from . import io
from . import martingale as mg
from .exceptions import HeatlabError, ResourceError
from .grid import CircleGrid, GridFunction, calculus_identity_residuals
from .presets import get_preset

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _require(cond, message):
    if not cond:
        raise UsageError(message)


# --- subcommands -------------------------------------------------------------
# each returns (results, checks, artifacts)


def run_mix(args, out):
    N, n_max = args.N, args.n_max
    _require(N >= 2, "N >= 2")
    _require(n_max >= 1, "n-max >= 1")
    exact = N <= 9
    c = ch.CyclicChain(N)
    general = ch.MixingBound(N, ch.GENERAL)
    odd = ch.MixingBound(N, ch.ODD) if N % 2 else None
    rows, ok_eps, ok_delta = [], True, True
    for n in range(1, n_max + 1):
        gap = ch.tv_gap(c, n, exact=exact)
        e = general(n)
        d = odd(n) if odd else None
        if exact:
            ok_eps &= general.holds_exact(gap, n)
            ok_delta &= odd.holds_exact(gap, n) if odd else True
        else:
            ok_eps &= gap <= e
            ok_delta &= gap <= d if odd else True
        rows.append((n, repr(float(gap)), repr(e), "" if d is None else repr(d)))
    artifacts = []
    if args.format in ("csv", "both"):
        artifacts.append(io.write_csv(out / "mix.csv", ["n", "tv_gap", "eps_n", "delta_n"], rows))
    checks = {"gap_le_eps": bool(ok_eps)}
    if odd:
        checks["gap_le_delta"] = bool(ok_delta)
    results = {"N": N, "n_max": n_max, "exact": exact, "final_gap": float(rows[-1][1])}
    if args.eps is not None:
        n_star = ch.steps_to_equilibrium(N, args.eps)
        gap = ch.tv_gap(c, n_star, exact=exact)
        checks["gap_at_threshold_le_eps"] = bool(gap <= (Fraction(repr(args.eps)) if exact else args.eps))
        results["eps"] = args.eps
        results["steps_to_equilibrium"] = n_star
        results["gap_at_threshold"] = float(gap)
    return results, checks, artifacts


def run_couple(args, out):
    N = args.N
    _require(2 <= N <= ch.MAX_COUPLING_STATES, f"2 <= N <= {ch.MAX_COUPLING_STATES}")
    _require(args.n_max >= 1, "n-max >= 1")
    _require(args.trials >= 1, "trials >= 1")
    exact = ch.coupling_tail_exact(N, args.n_max, start=args.start)
    mc = ch.simulate_meeting_time(N, args.trials, args.seed, n_max=args.n_max, start=args.start)
    m = ch.MixingBound(N).block_m
    rho = ch.MixingBound(N).rho
    rows, within, geometric = [], True, True
    for n in range(args.n_max + 1):
        p = float(exact[n])
        sigma = math.sqrt(p * (1 - p) / args.trials)
        within &= abs(mc[n] - p) <= 4 * sigma + 1e-15
        bound = ""
        if n % m == 0:
            bound_val = (1 - rho) ** (n // m)
            geometric &= exact[n] <= bound_val
            bound = repr(float(bound_val))
        rows.append((n, repr(p), repr(float(mc[n])), repr(sigma), bound))
    monotone = all(a >= b for a, b in zip(exact.tail, exact.tail[1:]))
    artifacts = []
    if args.format in ("csv", "both"):
        artifacts.append(io.write_csv(out / "couple.csv", ["n", "exact_tail", "mc_tail", "sigma", "geometric_bound"], rows))
    checks = {"nonincreasing": monotone, "geometric_bound": bool(geometric), "mc_within_4_sigma": bool(within)}
    return {"N": N, "n_max": args.n_max, "trials": args.trials, "seed": args.seed, "start": args.start}, checks, artifacts


def _parse_initial(text, eta):
    if text in ("delta", "uniform"):
        return get_preset(text).distribution(eta)
    try:
        values = [Fraction(v.strip()) for v in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"initial must be 'delta', 'uniform' or comma-separated rationals: {exc}") from None
    _require(len(values) == eta, f"initial vector length {len(values)} must equal eta={eta}")
    _require(all(v >= 0 for v in values), "initial entries must be nonnegative")
    return values


def run_martingale(args, out):
    eta, nu = args.eta, args.nu
    _require(eta >= 2, "eta >= 2")
    _require(nu >= 1, "nu >= 1")
    initial = _parse_initial(args.initial, eta)
    P = mg.build_process(initial, eta, nu)
    A = mg.build_association(eta, nu)
    E = mg.extend_process(P, A)
    mart = mg.verify_reverse_martingale(E)
    dist_ok = all(mg.verify_distribution_equality(P, E, t).passed for t in range(nu + 1))
    checks = {
        "adapted": mart.adapted,
        "one_step": mart.one_step,
        "all_pairs": mart.all_pairs,
        "distribution_equality": dist_ok,
        "counting_lemma": mg.counting_lemma_holds(A),
        "mass_identity": mg.mass_identity_holds(P, E),
    }
    artifacts = []
    if args.format in ("json", "both"):
        artifacts.append(io.write_json(out / "martingale_process.json", io.process_to_json(E)))
    if args.format in ("csv", "both"):
        artifacts.append(io.write_association(out / "martingale_association.csv", A))
    results = {
        "eta": eta,
        "nu": nu,
        "initial": [str(v) for v in initial],
        "equilibrium_deviation": str(P.equilibrium_deviation()),
        "violations": [list(map(str, v)) for v in mart.violations],
    }
    return results, checks, artifacts


def run_calculus(args, out):
    eta = args.eta
    _require(eta >= 2, "eta >= 2")
    _require(args.trials >= 1, "trials >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, eta]))
    grid = CircleGrid(eta)
    worst = {}
    for _ in range(args.trials):
        g, h = (GridFunction(grid, rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size)) for _ in range(2))
        for k, v in calculus_identity_residuals(g, h).items():
            worst[k] = max(worst.get(k, 0.0), v)
    artifacts = []
    if args.format in ("csv", "both"):
        artifacts.append(io.write_csv(out / "calculus.csv", ["identity", "max_residual"], [(k, repr(v)) for k, v in worst.items()]))
    checks = {k: v <= args.tol for k, v in worst.items()}
    return {"eta": eta, "trials": args.trials, "tol": args.tol, "residuals": worst}, checks, artifacts


def run_fourier(args, out):
    eta = args.eta
    _require(eta >= 2 and eta % 2 == 0, "eta even and >= 2")
    preset = get_preset(args.g)
    f = preset.grid_function(eta)
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, eta]))
    r = GridFunction(CircleGrid(eta), rng.normal(size=2 * eta) + 1j * rng.normal(size=2 * eta))
    c = fo.fourier_coeffs(f)
    roundtrip = max((fo.inverse(fo.fourier_coeffs(x)) - x).sup() for x in (f, r))
    deriv = fo.derivative_coeff_identity_check(r)
    restricted = fo.restricted_coeff_identity_check(r)
    decay = fo.decay_report(f)
    theta_err = abs(fo.theta(eta, 1) + 1)
    checks = {
        "roundtrip": roundtrip <= 1e-10,
        "first_derivative": deriv["first"].passed,
        "second_derivative": deriv["second"].passed,
        "restricted_second_derivative": restricted.passed,
        "decay": decay.passed,
        "theta_limit": theta_err <= math.pi**2 / (3 * eta**2),
    }
    artifacts = []
    if args.format in ("csv", "both"):
        artifacts.append(io.write_fourier_coeffs(out / "fourier_coeffs.csv", c))
    results = {
        "eta": eta,
        "g": args.g,
        "roundtrip": roundtrip,
        "first_residual": deriv["first"].residual,
        "second_residual": deriv["second"].residual,
        "restricted_residual": restricted.residual,
        "decay_F": decay.F_const,
        "decay_violations": len(decay.violations),
        "theta_error": theta_err,
    }
    return results, checks, artifacts


def _smooth_preset(name):
    preset = get_preset(name)
    _require(preset.smooth, f"preset {name!r} is not a smooth function; choose cos, cos+halfcos2, expcos or uniform")
    return preset


def run_heat(args, out):
    preset = _smooth_preset(args.g)
    params = ht.SchemeParams(args.eta, args.nu)
    _require(params.stable, "stability: eta**2 <= 2 pi**2 nu")
    _require(args.t >= 0, "t >= 0")
    report = ht.comparison_report(preset.func, params, args.t, M_max=args.M_max, timing=args.timing)
    artifacts = []
    if args.format in ("json", "both"):
        artifacts.append(io.write_json(out / "heat_report.json", report))
    if args.format in ("csv", "both"):
        f = preset.grid_function(args.eta)
        F = ht.solve_spectral(f, params, args.t)
        artifacts.append(io.write_snapshots(out / "heat_snapshots.csv", f.grid, [0.0, args.t], [f.values, F.values]))
    return report, {"sup_error_below_tol": report["sup_error"] < args.tol}, artifacts


def run_equilibrium(args, out):
    preset = _smooth_preset(args.g)
    params = ht.SchemeParams(args.eta, args.nu)
    _require(params.stable, "stability: eta**2 <= 2 pi**2 nu")
    _require(args.t >= 0, "t >= 0")
    f = preset.grid_function(args.eta)
    gap = ht.equilibrium_gap(f, params, args.t)
    results = {"eta": args.eta, "nu": args.nu, "t": args.t, "g": args.g, "equilibrium_gap": gap}
    artifacts = []
    if args.format in ("json", "both"):
        artifacts.append(io.write_json(out / "equilibrium_report.json", results))
    return results, {"gap_below_tol": gap <= args.tol}, artifacts


def run_equivalence(args, out):
    _require(args.eta >= 2 and args.eta % 2 == 0, "eta even and >= 2")
    _require(args.n_steps >= 0, "n-steps >= 0")
    rep = ht.markov_equivalence_check(args.eta, args.n_steps, seed=args.seed)
    results = rep.as_dict()
    results["markov_nu"] = ht.markov_equivalent_nu(args.eta)
    results["full_horizon_steps"] = ht.markov_step_count(args.eta)
    artifacts = []
    if args.format in ("json", "both"):
        artifacts.append(io.write_json(out / "equivalence_report.json", results))
    return results, {"heat_equals_chain": rep.passed}, artifacts


COMMANDS = {
    "mix": run_mix,
    "couple": run_couple,
    "martingale": run_martingale,
    "calculus": run_calculus,
    "fourier": run_fourier,
    "heat": run_heat,
    "equilibrium": run_equilibrium,
    "equivalence": run_equivalence,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="heatlab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default="heatlab-out", help="artifact directory")
    common.add_argument("--format", choices=["csv", "json", "both"], default="both")
    common.add_argument("--timing", action="store_true", help="record runtime_ms (makes output non-reproducible)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("mix", parents=[common], help="exact TV gap vs mixing bounds")
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--eps", type=float, default=None, help="also report steps_to_equilibrium(N, eps)")

    p = sub.add_parser("couple", parents=[common], help="coupling meeting-time tail, exact and Monte Carlo")
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int, default=0, help="initial state of the first copy")

    p = sub.add_parser("martingale", parents=[common], help="reverse-martingale extension, exact")
    p.add_argument("--eta", type=int, default=2)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--initial", default="delta", help="'delta', 'uniform' or e.g. 1,0 or 1/2,1/3,0")

    p = sub.add_parser("calculus", parents=[common], help="discrete derivative / summation-by-parts identities")
    p.add_argument("--eta", type=int, default=16)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("fourier", parents=[common], help="inversion, derivative symbols, coefficient decay")
    p.add_argument("--eta", type=int, default=64)
    p.add_argument("--g", default="expcos")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("heat", parents=[common], help="discrete heat solution vs classical")
    p.add_argument("--g", default="cos")
    p.add_argument("--eta", type=int, default=64)
    p.add_argument("--nu", type=int, default=256)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--M-max", dest="M_max", type=int, default=64)
    p.add_argument("--tol", type=float, default=5e-3)

    p = sub.add_parser("equilibrium", parents=[common], help="distance to the mean at large t")
    p.add_argument("--g", default="cos")
    p.add_argument("--eta", type=int, default=64)
    p.add_argument("--nu", type=int, default=256)
    p.add_argument("--t", type=float, default=20.0)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("equivalence", parents=[common], help="weight-1/3 heat stepping vs the cyclic chain")
    p.add_argument("--eta", type=int, default=16)
    p.add_argument("--n-steps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(args):
    """Execute one parsed configuration; returns ``(report, exit_code)``."""
    out = Path(args.output)
    start = time.perf_counter()
    results, checks, artifacts = COMMANDS[args.subcommand](args, out)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "timing")}
    passed = all(checks.values())
    report = {
        "subcommand": args.subcommand,
        "config": config,
        "checks": checks,
        "passed": passed,
        "results": results,
        "runtime_ms": (time.perf_counter() - start) * 1e3 if args.timing else None,
        "artifacts": sorted(Path(a).name for a in artifacts),
    }
    if args.format in ("json", "both"):
        io.write_json(out / f"{args.subcommand}_run.json", report)
    return report, EXIT_OK if passed else EXIT_FAIL


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = run(args)
    except UsageError as exc:
        print(f"heatlab {args.subcommand}: usage error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"heatlab {args.subcommand}: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except HeatlabError as exc:
        print(f"heatlab {args.subcommand}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(io.dumps(report))
    for name, ok in report["checks"].items():
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
