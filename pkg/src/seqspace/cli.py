"""Command-line front end.

Every subcommand is a thin adapter over the library: it parses a
:class:`RunConfig`, calls one core function and serializes the result.
Exit codes: 0 success, 1 precondition or usage error, 2 ``GrowthDetected``
from ``dual-check``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .basis import basis_element, reconstruct, reconstruct_c
from .duality import DEFAULT_CAP, DEFAULT_SLOPE_TOL, DualVerdict, dual_membership
from .io import GRAMMAR, dumps, matrix_to_csv, matrix_to_json, parse_spec, resolve_sequence, sequence_to_csv
from .kernel import DTYPE
from .matrices import (
    WeightSequence,
    build_B_tau,
    build_B_tau_inv,
    build_delta,
    build_delta_inv,
    build_euler_riesz,
    build_euler_riesz_inv,
    identity_tolerance,
    mat_mul,
    max_identity_defect,
)
from .paranorm import classify, exponent_stats, paranorm_g
from .transforms import backward, forward, forward_matrix, inverse_matrix


@dataclass
class RunConfig:
    tau: float = 0.0
    weights: str = "constant:1"
    exponents: str = "constant:1"
    N: int | None = None
    tol: float = 1e-6
    horizon: int | None = None
    B_samples: tuple = field(default=(2.0, 4.0, 8.0))

    def __post_init__(self):
        if not self.tau >= 0:
            raise ValueError(f"--tau must be >= 0, got {self.tau}")
        if not self.tol > 0:
            raise ValueError(f"--tol must be positive, got {self.tol}")
        if self.N is not None and self.N < 1:
            raise ValueError(f"-N must be >= 1, got {self.N}")
        if self.horizon is not None and self.N is not None and self.horizon > self.N:
            raise ValueError(f"--horizon {self.horizon} exceeds N={self.N}")
        if any(not b > 1 for b in self.B_samples):
            raise ValueError(f"--B samples must all exceed 1, got {self.B_samples}")

    def weight_sequence(self, N):
        return WeightSequence(parse_spec(self.weights, N=N, positive=True).generate())

    def exponent_values(self, N):
        return parse_spec(self.exponents, N=N, positive=True).generate()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n{GRAMMAR}\n")
        raise SystemExit(1)


def _B_list(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


MATRIX_OPS = ("delta", "delta-inv", "euler-riesz", "euler-riesz-inv", "Btau", "Btau-inv")


def build_parser():
    parser = _Parser(prog="seqspace", description="Fractional Euler-Riesz difference sequence spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, exponents=False, n=False):
        p.add_argument("--tau", type=float, default=0.0, help="fractional order (>= 0)")
        p.add_argument("--weights", default="constant:1", help="Riesz weight spec")
        if exponents:
            p.add_argument("--exponents", default="constant:1", help="Maddox exponent spec")
        if n:
            p.add_argument("-N", type=int, help="truncation length")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("build-matrix", help="export an operator matrix")
    common(p, n=True)
    p.add_argument("--op", choices=MATRIX_OPS, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("transform", help="apply the forward or inverse transform")
    common(p, n=True)
    p.add_argument("--direction", choices=("fwd", "bwd"), required=True)
    p.add_argument("--input", required=True, help="sequence file or spec")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--compensated", action="store_true")

    p = sub.add_parser("inverse-check", help="identity defect of matrix times closed-form inverse")
    common(p, n=True)
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--random", action="store_true", help="also run random round-trip vectors")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("paranorm", help="paranorm of a sequence")
    common(p, exponents=True, n=True)
    p.add_argument("--input", required=True)

    p = sub.add_parser("classify", help="finite-horizon space membership")
    common(p, exponents=True, n=True)
    p.add_argument("--input", required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("basis", help="emit one basis element")
    common(p, n=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("reconstruct", help="partial basis expansion and residual")
    common(p, exponents=True, n=True)
    p.add_argument("--coeffs", required=True, help="coefficient file or spec")
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--limit", type=float, help="use the convergent-space expansion with this limit")

    p = sub.add_parser("dual-check", help="evaluate an alpha/beta/gamma dual condition")
    common(p, exponents=True, n=True)
    p.add_argument("--space", choices=("c0", "c", "linf"), required=True)
    p.add_argument("--dual", choices=("alpha", "beta", "gamma"), required=True)
    p.add_argument("--a", required=True, help="multiplier sequence file or spec")
    p.add_argument("--B", type=_B_list, default=(2.0, 4.0, 8.0), help="comma-separated samples, e.g. 2,4,8")
    p.add_argument("--horizon", type=int)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--cap", type=float, default=DEFAULT_CAP)
    p.add_argument("--slope-tol", type=float, default=DEFAULT_SLOPE_TOL)
    return parser


def _config(args):
    return RunConfig(
        tau=args.tau,
        weights=args.weights,
        exponents=getattr(args, "exponents", "constant:1"),
        N=getattr(args, "N", None),
        tol=getattr(args, "tol", 1e-6),
        horizon=getattr(args, "horizon", None),
        B_samples=getattr(args, "B", (2.0, 4.0, 8.0)),
    )


def _require_N(cfg):
    if cfg.N is None:
        raise ValueError("-N is required for this command")
    return cfg.N


def _input(text, cfg):
    values = resolve_sequence(text, N=cfg.N)
    return values


def _header(command, cfg, N):
    return {"command": command, "tau": cfg.tau, "weights": cfg.weights, "N": N}


def cmd_build_matrix(args, cfg):
    N = _require_N(cfg)
    op = args.op
    if op == "delta":
        A = build_delta(cfg.tau, N)
    elif op == "delta-inv":
        A = build_delta_inv(cfg.tau, N)
    else:
        w = cfg.weight_sequence(N)
        A = {
            "euler-riesz": lambda: build_euler_riesz(w, N),
            "euler-riesz-inv": lambda: build_euler_riesz_inv(w, N),
            "Btau": lambda: build_B_tau(cfg.tau, w, N),
            "Btau-inv": lambda: build_B_tau_inv(cfg.tau, w, N),
        }[op]()
    if args.format == "csv":
        return matrix_to_csv(A), 0
    return matrix_to_json(A, op=op, tau=cfg.tau, weights=cfg.weights), 0


def cmd_transform(args, cfg):
    x = _input(args.input, cfg)
    w = cfg.weight_sequence(len(x))
    fn = forward if args.direction == "fwd" else backward
    y = fn(cfg.tau, w, x, compensated=args.compensated)
    if args.format == "csv":
        return sequence_to_csv(y), 0
    return dumps(list(y)), 0


def cmd_inverse_check(args, cfg):
    N = _require_N(cfg)
    w = cfg.weight_sequence(N)
    B, Binv = forward_matrix(cfg.tau, w, N), inverse_matrix(cfg.tau, w, N)
    D, Dinv = build_delta(cfg.tau, N), build_delta_inv(cfg.tau, N)
    doc = _header("inverse-check", cfg, N)
    defect = max_identity_defect(mat_mul(B, Binv))
    tol = identity_tolerance(B, Binv, args.rtol)
    d_defect = max_identity_defect(mat_mul(D, Dinv))
    d_tol = identity_tolerance(D, Dinv, args.rtol)
    doc.update(
        defect=defect,
        tolerance=tol,
        passed=bool(defect <= tol),
        delta_defect=d_defect,
        delta_tolerance=d_tol,
        delta_passed=bool(d_defect <= d_tol),
    )
    ok = defect <= tol and d_defect <= d_tol
    if args.random:
        rng = np.random.default_rng(args.seed)
        factor = 1 + Binv.norm_inf()
        errs = []
        for _ in range(args.samples):
            x = rng.uniform(-1, 1, N).astype(DTYPE)
            errs.append(np.abs(backward(cfg.tau, w, forward(cfg.tau, w, x)) - x).max())
        rt_tol = DTYPE(1e-7) * factor
        doc.update(
            seed=args.seed,
            samples=args.samples,
            roundtrip_max_error=max(errs),
            roundtrip_tolerance=rt_tol,
            roundtrip_passed=bool(max(errs) <= rt_tol),
        )
        ok = ok and max(errs) <= rt_tol
    return dumps(doc), 0 if ok else 1


def cmd_paranorm(args, cfg):
    x = _input(args.input, cfg)
    N = len(x)
    p = cfg.exponent_values(N)
    h, H, M = exponent_stats(p)
    doc = _header("paranorm", cfg, N)
    doc.update(exponents=cfg.exponents, g=paranorm_g(cfg.tau, cfg.weight_sequence(N), p, x), h=h, H=H, M=M)
    return dumps(doc), 0


def cmd_classify(args, cfg):
    x = _input(args.input, cfg)
    N = len(x)
    report = classify(cfg.tau, cfg.weight_sequence(N), cfg.exponent_values(N), x, horizon=cfg.horizon, tol=cfg.tol)
    doc = _header("classify", cfg, N)
    doc["exponents"] = cfg.exponents
    doc.update(report.to_dict())
    return dumps(doc), 0


def cmd_basis(args, cfg):
    N = _require_N(cfg)
    b = basis_element(cfg.tau, cfg.weight_sequence(N), args.k, N)
    if args.format == "csv":
        return sequence_to_csv(b.values), 0
    doc = _header("basis", cfg, N)
    doc.update(k=b.k, values=b.values)
    return dumps(doc), 0


def cmd_reconstruct(args, cfg):
    mu = _input(args.coeffs, cfg)
    N = len(mu)
    w = cfg.weight_sequence(N)
    p = cfg.exponent_values(N)
    if args.limit is None:
        partial = reconstruct(cfg.tau, w, mu, args.s)
        full = backward(cfg.tau, w, mu)
    else:
        partial = reconstruct_c(cfg.tau, w, mu, args.limit, args.s)
        full = reconstruct_c(cfg.tau, w, mu, args.limit, N)
    doc = _header("reconstruct", cfg, N)
    doc.update(
        exponents=cfg.exponents,
        s=args.s,
        limit=args.limit,
        residual=paranorm_g(cfg.tau, w, p, full - partial),
        partial=partial,
    )
    return dumps(doc), 0


def cmd_dual_check(args, cfg):
    a = _input(args.a, cfg)
    N = len(a)
    result = dual_membership(
        args.space,
        args.dual,
        a,
        cfg.tau,
        cfg.weight_sequence(N),
        p=cfg.exponent_values(N),
        horizon=cfg.horizon,
        B_samples=cfg.B_samples,
        cap=args.cap,
        slope_tol=args.slope_tol,
        tol=cfg.tol,
    )
    doc = _header("dual-check", cfg, N)
    doc["exponents"] = cfg.exponents
    doc.update(result.to_dict())
    return dumps(doc), 2 if result.verdict is DualVerdict.GROWTH else 0


COMMANDS = {
    "build-matrix": cmd_build_matrix,
    "transform": cmd_transform,
    "inverse-check": cmd_inverse_check,
    "paranorm": cmd_paranorm,
    "classify": cmd_classify,
    "basis": cmd_basis,
    "reconstruct": cmd_reconstruct,
    "dual-check": cmd_dual_check,
}


def run_command(argv=None):
    """Run one subcommand; returns ``(exit_code, text)``.

    With ``--out`` the artifact is written to that path and also returned.
    Usage errors raise ``SystemExit(1)`` after printing the spec grammar.
    """
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        text, code = COMMANDS[args.command](args, cfg)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
    except (ValueError, ArithmeticError, OSError) as exc:
        return 1, f"error: {exc}\n"
    return code, text


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        code, text = run_command(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if text.startswith("error:"):
        sys.stderr.write(text)
    elif not any(a == "--out" or a.startswith("--out=") for a in argv):
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
