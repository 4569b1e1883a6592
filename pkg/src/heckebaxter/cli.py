"""Command-line verification suite with JSON reports and pass/fail exits.

Every subcommand echoes its full configuration (seed included), evaluates a
set of comparisons, and emits a report whose rows carry the estimate, its
standard error, the reference value and a z-score verdict.  Exit status: 0
when every row passes, 1 on any failure, 2 on configuration errors.

Reports are byte-identical for identical configurations; wall-clock timing
is only included when asked for (--timing).  Optional side outputs: --csv
for a delimited results table and --figure for a rendered comparison plot.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .errors import HeckeBaxterError
from .exterior import delta_w, delta_w_batch, epsilon_spherical
from .fourier import (
    feynman_phase_check,
    fourier_numeric_1d,
    verify_modified_gaussian_identity,
)
from .lfactors import (
    gamma_integral_oracle,
    gl_c_l_factor,
    gl_c_l_factor_duplication_oracle,
    l_factor,
    legendre_duplication_residual,
    log_gamma,
)
from .matrices import cartan_decompose, iwasawa_decompose
from .montecarlo import (
    RandomStream,
    compact_convolution,
    sample_orthogonal,
    schur_orthogonality_check,
    schur_orthogonality_reference,
)
from .operators import (
    RadialProfile,
    cartan_eigenvalue_estimate,
    eigenvalue_check,
    ramified_convolution_check,
    spherical_function,
)
from .params import Signature, SpectralParams, graded_dimension

DEFAULT_SAMPLES = 1_000_000
MIN_STOCHASTIC_SAMPLES = 1000
SEED_ENV_VAR = "HECKEBAXTER_SEED"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    """Bad command-line configuration; maps to exit status 2."""


# ----------------------------------------------------------------------
# parsing helpers


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def parse_matrix(text: str) -> np.ndarray:
    """Row-major comma-separated entries of a square matrix."""
    try:
        entries = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"matrix: could not parse entries: {exc}") from exc
    n = math.isqrt(len(entries))
    if n * n != len(entries) or n == 0:
        raise ConfigError(f"matrix: {len(entries)} entries do not form a square matrix")
    return np.asarray(entries, dtype=float).reshape(n, n)


def load_matrix_file(path: str) -> np.ndarray:
    """Plain-text matrix, one row per line, entries separated by comma or space."""
    rows = []
    try:
        with open(path) as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                rows.append([float(x) for x in line.replace(",", " ").split()])
    except OSError as exc:
        raise ConfigError(f"matrix-file: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"matrix-file: could not parse entries: {exc}") from exc
    mat = np.asarray(rows, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"matrix-file: shape {mat.shape} is not square")
    return mat


def _parse_gamma(text: str, n: int) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"gamma: could not parse: {exc}") from exc
    if len(values) != n:
        raise ConfigError(f"gamma: expected {n} values for ell={n - 1}, got {len(values)}")
    return values


def _parse_epsilon(text: str, n: int) -> Signature:
    try:
        eps = Signature.from_string(text)
    except ValueError as exc:
        raise ConfigError(f"epsilon: {exc}") from exc
    if len(eps) != n:
        raise ConfigError(f"epsilon: expected {n} bits for ell={n - 1}, got {len(eps)}")
    return eps


def spectral_from_args(args) -> SpectralParams:
    n = args.ell + 1
    if args.ell < 0:
        raise ConfigError("ell: must be non-negative")
    gamma = _parse_gamma(args.gamma, n)
    epsilon = _parse_epsilon(args.epsilon, n)
    try:
        return SpectralParams(
            s=complex(args.s_re, args.s_im), c=args.c, gamma=gamma, epsilon=epsilon
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _check_samples(samples: int) -> int:
    if samples < MIN_STOCHASTIC_SAMPLES:
        raise ConfigError(
            f"samples: stochastic commands need at least {MIN_STOCHASTIC_SAMPLES}, got {samples}"
        )
    return samples


def default_evaluation_points(n: int) -> list[np.ndarray]:
    """Three fixed well-conditioned points: identity, positive diagonal,
    and a generic dense perturbation of the identity."""
    diag_pattern = [1.6, 0.75, 1.3, 0.9, 1.45, 0.8, 1.15, 0.95]
    p2 = np.diag(diag_pattern[:n])
    p3 = 1.1 * np.eye(n) + 0.25 * np.tri(n, k=-1) + 0.15 * (np.tri(n, k=0).T - np.eye(n))
    return [np.eye(n), p2, p3]


# ----------------------------------------------------------------------
# report rows


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def make_row(
    point,
    estimate,
    *,
    stderr=None,
    reference=None,
    z_score=None,
    passed=True,
    tolerance=None,
) -> dict:
    row = {
        "point": point,
        "estimate": _cplx(estimate),
        "stderr": None if stderr is None else float(stderr),
        "reference": None if reference is None else _cplx(reference),
        "z_score": None if z_score is None else float(z_score),
        "pass": bool(passed),
    }
    if tolerance is not None:
        row["tolerance"] = float(tolerance)
    return row


def _estimate_row(point, est, reference, tol_sigma) -> dict:
    z = est.z_score(reference)
    return make_row(
        point,
        est.mean,
        stderr=est.stderr,
        reference=reference,
        z_score=z,
        passed=z <= tol_sigma,
    )


def _matrix_label(mat: np.ndarray) -> str:
    return "[" + "; ".join(",".join(f"{x:g}" for x in row) for row in mat) + "]"


# ----------------------------------------------------------------------
# command handlers; each returns (config_echo, results, extras)


def cmd_lfactor(args):
    p = spectral_from_args(args)
    value = l_factor(p).value
    config = _spectral_config(args)
    return config, [make_row("L(s,c|eps,gamma)", value, stderr=0.0)], {}


def _decomposition_rows(g, factors, kind):
    scale = float(np.linalg.norm(g))
    recon_tol = 1e-12 * max(scale, 1e-30)
    residual = factors.residual(g)
    rows = [
        make_row(
            "reconstruction",
            residual,
            tolerance=recon_tol,
            passed=residual <= recon_tol,
        )
    ]
    if kind == "iwasawa":
        ortho = float(np.linalg.norm(factors.k.T @ factors.k - np.eye(g.shape[0])))
        rows.append(make_row("k orthogonality", ortho, tolerance=1e-12, passed=ortho <= 1e-12))
        extras = {
            "k": factors.k.tolist(),
            "a": factors.a.tolist(),
            "n": factors.n_factor.tolist(),
        }
    else:
        o1 = float(np.linalg.norm(factors.k1.T @ factors.k1 - np.eye(g.shape[0])))
        o2 = float(np.linalg.norm(factors.k2.T @ factors.k2 - np.eye(g.shape[0])))
        rows.append(make_row("k1 orthogonality", o1, tolerance=1e-12, passed=o1 <= 1e-12))
        rows.append(make_row("k2 orthogonality", o2, tolerance=1e-12, passed=o2 <= 1e-12))
        extras = {
            "k1": factors.k1.tolist(),
            "a": factors.a.tolist(),
            "k2": factors.k2.tolist(),
        }
    return rows, {"factors": extras}


def _matrix_from_args(args, required=True):
    if getattr(args, "matrix", None):
        return parse_matrix(args.matrix)
    if getattr(args, "matrix_file", None):
        return load_matrix_file(args.matrix_file)
    if required:
        raise ConfigError("matrix: supply --matrix or --matrix-file")
    return None


def cmd_iwasawa(args):
    g = _matrix_from_args(args)
    rows, extras = _decomposition_rows(g, iwasawa_decompose(g), "iwasawa")
    return {"matrix": g.tolist(), "seed": args.seed}, rows, extras


def cmd_cartan(args):
    g = _matrix_from_args(args)
    rows, extras = _decomposition_rows(g, cartan_decompose(g), "cartan")
    return {"matrix": g.tolist(), "seed": args.seed}, rows, extras


def _spectral_config(args) -> dict:
    return {
        "ell": args.ell,
        "s": {"re": args.s_re, "im": args.s_im},
        "c": args.c,
        "gamma": [float(x) for x in args.gamma.split(",")],
        "epsilon": args.epsilon,
        "seed": args.seed,
        "samples": getattr(args, "samples", None),
        "tol_sigma": getattr(args, "tol_sigma", None),
        "workers": getattr(args, "workers", 1),
    }


def _evaluation_points(args, n):
    points = []
    for text in args.point or []:
        points.append(parse_matrix(text))
    for path in args.point_file or []:
        points.append(load_matrix_file(path))
    if not points:
        points = default_evaluation_points(n)
    for i, pt in enumerate(points):
        if pt.shape != (n, n):
            raise ConfigError(f"point {i}: shape {pt.shape} does not match ell+1={n}")
    return points


def cmd_eigencheck(args):
    p = spectral_from_args(args)
    samples = _check_samples(args.samples)
    points = _evaluation_points(args, p.n)
    report = eigenvalue_check(
        p,
        points,
        samples,
        RandomStream(args.seed),
        tol_sigma=args.tol_sigma,
        workers=args.workers,
    )
    rows = [
        _estimate_row(_matrix_label(pt), est, report.reference.value, args.tol_sigma)
        for pt, est in zip(report.points, report.ratios)
    ]
    config = _spectral_config(args)
    config["points"] = [pt.tolist() for pt in points]
    return config, rows, {"reference": _cplx(report.reference.value)}


def cmd_cartancheck(args):
    p = spectral_from_args(args)
    samples = _check_samples(args.samples)
    est = cartan_eigenvalue_estimate(
        p, samples, RandomStream(args.seed), workers=args.workers
    )
    reference = l_factor(p).value
    rows = [_estimate_row("polar-coordinates estimate", est, reference, args.tol_sigma)]
    return _spectral_config(args), rows, {"reference": _cplx(reference)}


def cmd_sphfun(args):
    p = spectral_from_args(args)
    samples = _check_samples(args.samples)
    g = _matrix_from_args(args, required=False)
    if g is None:
        g = np.eye(p.n)
    if g.shape != (p.n, p.n):
        raise ConfigError(f"matrix: shape {g.shape} does not match ell+1={p.n}")
    est = spherical_function(p, g, samples, RandomStream(args.seed), workers=args.workers)
    at_identity = np.allclose(g, np.eye(p.n))
    config = _spectral_config(args)
    config["matrix"] = g.tolist()
    if at_identity:
        reference = 1.0 / graded_dimension(p.n, p.epsilon.weight)
        row = _estimate_row(_matrix_label(g), est, reference, args.tol_sigma)
        # one-dimensional grades evaluate exactly; accept the roundoff floor
        if not row["pass"] and abs(est.mean - reference) < 1e-12:
            row["pass"] = True
        return config, [row], {}
    return config, [make_row(_matrix_label(g), est.mean, stderr=est.stderr)], {}


def cmd_schur(args):
    n = args.n
    if n < 1:
        raise ConfigError("n: must be at least 1")
    samples = _check_samples(args.samples)
    stream = RandomStream(args.seed)
    rows = []
    if args.sweep:
        cases = []
        for k1 in range(n + 1):
            for k2 in range(n + 1):
                rep1 = Signature.of((1,) * k1 + (0,) * (n - k1))
                rep2 = Signature.of((1,) * k2 + (0,) * (n - k2))
                cases.append((k1, k2, rep1, rep1, rep2, rep2))
        # a same-grade, different-signature case exercises the vector pairings
        if n >= 2:
            a = Signature.of((1,) + (0,) * (n - 1))
            b = Signature.of((0,) * (n - 1) + (1,))
            cases.append((1, 1, a, a, b, b))
    else:
        e1 = _parse_epsilon(args.e1, n)
        e1p = _parse_epsilon(args.e1p, n)
        e2 = _parse_epsilon(args.e2, n)
        e2p = _parse_epsilon(args.e2p, n)
        cases = [(e1.weight, e2.weight, e1, e1p, e2, e2p)]
    for i, (k1, k2, e1, e1p, e2, e2p) in enumerate(cases):
        est = schur_orthogonality_check(
            k1, k2, e1, e1p, e2, e2p, samples, stream.substream(i), workers=args.workers
        )
        reference = schur_orthogonality_reference(k1, k2, e1, e1p, e2, e2p)
        label = f"grades ({k1},{k2}) e1={e1} e1p={e1p} e2={e2} e2p={e2p}"
        rows.append(_estimate_row(label, est, reference, args.tol_sigma))
    config = {
        "n": n,
        "sweep": bool(args.sweep),
        "seed": args.seed,
        "samples": samples,
        "tol_sigma": args.tol_sigma,
        "workers": args.workers,
    }
    return config, rows, {}


def cmd_projector(args):
    n = args.n
    if n < 1:
        raise ConfigError("n: must be at least 1")
    samples = _check_samples(args.samples)
    stream = RandomStream(args.seed)
    point_stream = RandomStream(args.seed, stream_id=999)
    points = [np.eye(n)] + [sample_orthogonal(n, point_stream) for _ in range(args.points - 1)]
    rows = []
    for i, k_eval in enumerate(points):
        est = compact_convolution(
            delta_w_batch,
            delta_w_batch,
            k_eval,
            samples,
            stream.substream(i),
            workers=args.workers,
        )
        reference = delta_w(k_eval)
        row = _estimate_row(_matrix_label(k_eval), est, reference, args.tol_sigma)
        # points where the minor sum vanishes identically compare two
        # roundoff-level zeros; accept the machine-noise floor there
        if not row["pass"] and abs(est.mean - reference) < 1e-12:
            row["pass"] = True
        rows.append(row)
    config = {
        "n": n,
        "points": args.points,
        "seed": args.seed,
        "samples": samples,
        "tol_sigma": args.tol_sigma,
        "workers": args.workers,
    }
    return config, rows, {}


def cmd_ramified(args):
    n = args.n
    samples = _check_samples(args.samples)
    e1 = _parse_epsilon(args.e1, n)
    e1p = _parse_epsilon(args.e1p, n)
    e2 = _parse_epsilon(args.e2, n)
    e2p = _parse_epsilon(args.e2p, n)
    g = _matrix_from_args(args, required=False)
    if g is None:
        g = default_evaluation_points(n)[2]
    profile_f = RadialProfile(det_power=args.f_power, rate=args.f_rate)
    profile_g = RadialProfile(det_power=args.g_power, rate=args.g_rate)
    report = ramified_convolution_check(
        profile_f,
        profile_g,
        e1,
        e1p,
        e2,
        e2p,
        g,
        samples,
        RandomStream(args.seed),
        tol_sigma=args.tol_sigma,
        workers=args.workers,
    )
    rows = [
        make_row(
            "graded convolution vs predicted",
            report.left.mean,
            stderr=report.combined_sigma,
            reference=report.predicted,
            z_score=report.z_score,
            passed=report.passed,
        ),
        make_row("scalar convolution", report.scalar.mean, stderr=report.scalar.stderr),
    ]
    config = {
        "n": n,
        "e1": str(e1),
        "e1p": str(e1p),
        "e2": str(e2),
        "e2p": str(e2p),
        "f_power": args.f_power,
        "f_rate": args.f_rate,
        "g_power": args.g_power,
        "g_rate": args.g_rate,
        "matrix": g.tolist(),
        "seed": args.seed,
        "samples": samples,
        "tol_sigma": args.tol_sigma,
        "workers": args.workers,
    }
    extras = {
        "coefficient": report.coefficient,
        "wedge_at_eval": report.wedge_at_eval,
        "ratio": None if report.ratio is None else _cplx(report.ratio),
    }
    return config, rows, extras


def cmd_fourier(args):
    rows = []
    for n in range(1, args.max_dim + 1):
        err = verify_modified_gaussian_identity(n)
        rows.append(make_row(f"coefficients n={n}", err, tolerance=1e-12, passed=err <= 1e-12))
    for y in (0.0, 0.3, 0.7, 1.1):
        got = fourier_numeric_1d("gaussian", y)
        want = math.exp(-math.pi * y * y)
        err = abs(got - want)
        rows.append(make_row(f"self-duality y={y}", err, tolerance=1e-6, passed=err <= 1e-6))
        got = fourier_numeric_1d("x_gaussian", y)
        want = 1j * y * math.exp(-math.pi * y * y)
        err = abs(got - want)
        rows.append(make_row(f"monomial y={y}", err, tolerance=1e-6, passed=err <= 1e-6))
    return {"max_dim": args.max_dim, "seed": args.seed}, rows, {}


def cmd_feynman(args):
    if args.n == 1:
        points = [np.array([[0.0]]), np.array([[0.4]]), np.array([[0.9]])]
    elif args.n == 2:
        points = [
            np.zeros((2, 2)),
            np.array([[0.5, 0.2], [-0.3, 0.7]]),
            np.array([[1.0, 0.0], [0.4, 0.6]]),
        ]
    else:
        raise ConfigError("n: numeric phase check supports n in {1, 2}")
    report = feynman_phase_check(args.n, args.eps_reg, points)
    rows = [
        make_row(
            _matrix_label(pt),
            err,
            tolerance=args.tol,
            passed=err <= args.tol,
        )
        for pt, err in zip(report.points, report.errors)
    ]
    config = {"n": args.n, "eps_reg": args.eps_reg, "tol": args.tol, "seed": args.seed}
    extras = {
        "phase": _cplx(report.phase),
        "extrapolated_errors": list(report.extrapolated_errors),
        "tail_bound": report.tail_bound,
    }
    return config, rows, extras


def cmd_identities(args):
    rng = RandomStream(args.seed).generator()
    c = args.c
    rows = []
    worst = 0.0
    for _ in range(args.trials):
        s = complex(rng.uniform(0.5, 10.0), rng.uniform(-3.0, 3.0))
        worst = max(worst, legendre_duplication_residual(s))
    rows.append(make_row("legendre duplication", worst, tolerance=1e-12, passed=worst <= 1e-12))
    worst = 0.0
    for _ in range(args.trials):
        s = complex(rng.uniform(0.5, 10.0), rng.uniform(-3.0, 3.0))
        gamma = tuple(rng.uniform(-2.0, 2.0) for _ in range(2))
        got = gl_c_l_factor(s, c, gamma)
        want = gl_c_l_factor_duplication_oracle(s, c, gamma)
        worst = max(worst, abs(got / want - 1.0))
    rows.append(make_row("complex-group product", worst, tolerance=1e-12, passed=worst <= 1e-12))
    worst = 0.0
    for re in np.arange(0.5, 6.01, 0.5):
        for im in (-3.0, -1.5, 0.0, 1.5, 3.0):
            x = complex(re, im)
            got = gamma_integral_oracle(x, c)
            want = 0.5 * np.exp(log_gamma(x / 2.0) - (x / 2.0) * math.log(c))
            worst = max(worst, abs(got - want) / abs(want))
    rows.append(make_row("radial integral vs log-gamma", worst, tolerance=1e-8, passed=worst <= 1e-8))
    config = {"trials": args.trials, "c": c, "seed": args.seed}
    return config, rows, {}


# ----------------------------------------------------------------------
# wiring


def _add_output_options(sub):
    sub.add_argument("--output", help="write the JSON report to this path")
    sub.add_argument("--csv", help="also write the results table as CSV")
    sub.add_argument("--figure", help="also render the report as a figure file")
    sub.add_argument("--timing", action="store_true", help="include elapsed_seconds in the report")
    sub.add_argument("--seed", type=int, default=_default_seed(), help="random seed (default from $HECKEBAXTER_SEED or 0)")
    sub.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads (does not change results)")


def _add_spectral_options(sub):
    sub.add_argument("--ell", type=int, required=True, help="rank; matrices are (ell+1) x (ell+1)")
    sub.add_argument("--s-re", type=float, default=2.0, help="Re(s)")
    sub.add_argument("--s-im", type=float, default=0.0, help="Im(s)")
    sub.add_argument("--c", type=float, default=1.0, help="Gaussian rate c > 0")
    sub.add_argument("--gamma", required=True, help="comma-separated gamma_j, length ell+1")
    sub.add_argument("--epsilon", required=True, help="signature bits, e.g. 01 or 0,1")


def _add_sampling_options(sub, default_samples=DEFAULT_SAMPLES):
    sub.add_argument("--samples", type=lambda x: int(float(x)), default=default_samples, help="Monte Carlo sample count")
    sub.add_argument("--tol-sigma", type=float, default=4.0, help="pass threshold in standard errors")


def _add_matrix_options(sub):
    sub.add_argument("--matrix", help="row-major comma-separated entries")
    sub.add_argument("--matrix-file", help="plain-text matrix file, one row per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckebaxter",
        description="Verification suite for L-factor convolution operators on GL(n,R).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("lfactor", help="evaluate the closed-form L-factor")
    _add_spectral_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_lfactor)

    sub = commands.add_parser("iwasawa", help="triangular decomposition of a matrix")
    _add_matrix_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_iwasawa)

    sub = commands.add_parser("cartan", help="polar decomposition of a matrix")
    _add_matrix_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_cartan)

    sub = commands.add_parser("eigencheck", help="convolution eigenvalue vs the L-factor")
    _add_spectral_options(sub)
    _add_sampling_options(sub)
    sub.add_argument("--point", action="append", help="evaluation matrix, row-major (repeatable)")
    sub.add_argument("--point-file", action="append", help="evaluation matrix file (repeatable)")
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_eigencheck)

    sub = commands.add_parser("cartancheck", help="polar-coordinates eigenvalue vs the L-factor")
    _add_spectral_options(sub)
    _add_sampling_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_cartancheck)

    sub = commands.add_parser("sphfun", help="spherical-type matrix coefficient")
    _add_spectral_options(sub)
    _add_sampling_options(sub)
    _add_matrix_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_sphfun)

    sub = commands.add_parser("schur", help="orthogonality of wedge matrix elements")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--sweep", action="store_true", help="run every grade pair with canonical signatures")
    sub.add_argument("--e1", help="signature bits")
    sub.add_argument("--e1p", help="signature bits")
    sub.add_argument("--e2", help="signature bits")
    sub.add_argument("--e2p", help="signature bits")
    _add_sampling_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_schur)

    sub = commands.add_parser("projector", help="idempotence of the minor-sum convolution")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--points", type=int, default=3, help="number of evaluation points")
    _add_sampling_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_projector)

    sub = commands.add_parser("ramified", help="graded convolution law for radial profiles")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--e1", required=True)
    sub.add_argument("--e1p", required=True)
    sub.add_argument("--e2", required=True)
    sub.add_argument("--e2p", required=True)
    sub.add_argument("--f-power", type=float, default=None, help="determinant power of the first profile (default n)")
    sub.add_argument("--f-rate", type=float, default=1.0)
    sub.add_argument("--g-power", type=float, default=None, help="determinant power of the second profile (default n)")
    sub.add_argument("--g-rate", type=float, default=1.3)
    _add_matrix_options(sub)
    _add_sampling_options(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_ramified)

    sub = commands.add_parser("fourier", help="exact and numeric Gaussian transform identities")
    sub.add_argument("--max-dim", type=int, default=4)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_fourier)

    sub = commands.add_parser("feynman", help="imaginary-Gaussian transform phase check")
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--eps-reg", type=float, default=1e-3)
    sub.add_argument("--tol", type=float, default=1e-2)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_feynman)

    sub = commands.add_parser("identities", help="closed-form Gamma identities and the radial oracle")
    sub.add_argument("--trials", type=int, default=20)
    sub.add_argument("--c", type=float, default=1.0)
    _add_output_options(sub)
    sub.set_defaults(handler=cmd_identities)

    return parser


def _write_csv(rows, path):
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["point", "estimate_re", "estimate_im", "stderr", "reference_re", "reference_im", "z_score", "pass"]
        )
        for row in rows:
            ref = row.get("reference")
            writer.writerow(
                [
                    row["point"],
                    row["estimate"]["re"],
                    row["estimate"]["im"],
                    row.get("stderr"),
                    ref["re"] if ref else None,
                    ref["im"] if ref else None,
                    row.get("z_score"),
                    row["pass"],
                ]
            )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the message; normalize the exit status
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_PASS

    started = time.perf_counter()
    try:
        if getattr(args, "f_power", "absent") is None:
            args.f_power = float(args.n)
        if getattr(args, "g_power", "absent") is None:
            args.g_power = float(args.n)
        config, results, extras = args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HeckeBaxterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    passed = all(row["pass"] for row in results)
    report = {"command": args.command, "config": config, "results": results, "passed": passed}
    report.update(extras)
    if args.timing:
        report["elapsed_seconds"] = time.perf_counter() - started

    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text + "\n")
        for row in results:
            verdict = "PASS" if row["pass"] else "FAIL"
            print(f"{verdict}  {row['point']}")
        print(f"report written to {args.output}")
    else:
        print(text)
    if args.csv:
        _write_csv(results, args.csv)
    if args.figure:
        from .figures import render_report

        render_report(report, args.figure)
    return EXIT_PASS if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
