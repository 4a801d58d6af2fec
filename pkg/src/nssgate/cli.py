"""Command-line front end: solve gates, sweep scaling tables, verify, identities.

Single-invocation batch tool.  All artifacts are JSON (or CSV for tabular
output), embed schema/version/seed/tolerances, and are written atomically when
--out is given.  Exit codes: 0 success, 1 usage/validation error, 2 infeasible
(no root found), 3 identity/verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from . import __version__
from .determinants import NodeSet, dense_det, exact_det, gapped_vandermonde, spoly_matrix, vandermonde_S, vandermonde_power
from .fock_oracle import FACTORIAL_CAP, SignalState, apply_gate, fidelity, target_state
from .gate_solver import PRECISION_CAP, SearchConfig
from .optimizer import scan_nodes, sweep
from .polynomials import (
    gapped_binomial_expand,
    oneq_coefficient,
    spoly_eval,
    spoly_eval_exact,
    spoly_recursion_step,
    symmetric_s,
)

IDENTITY_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nssgate-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(command: str, seed: int, cfg: SearchConfig, payload: dict) -> dict:
    art = {
        "schema": 1,
        "version": __version__,
        "command": command,
        "seed": seed,
        "tolerances": {
            "det_tol": cfg.det_tol,
            "bisect_tol": cfg.bisect_tol,
            "identity_tol": IDENTITY_TOL,
        },
        "config": asdict(cfg),
    }
    art.update(payload)
    return art


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _parse_nodes(text: str) -> NodeSet:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"invalid node list {text!r}") from None
    return NodeSet(vals)  # NodeSet rejects duplicates/negatives/disorder


def cmd_solve(args) -> int:
    cfg = SearchConfig(complex_search=args.complex_search)
    if args.nodes is not None:
        nodes = _parse_nodes(args.nodes)
        if len(nodes) != args.n:
            print(f"error: --nodes has {len(nodes)} entries, --n is {args.n}", file=sys.stderr)
            return 1
    else:
        nodes = NodeSet.minimal(args.n)
    if args.n > PRECISION_CAP:
        print(f"error: N={args.n} exceeds the double-precision cap {PRECISION_CAP}", file=sys.stderr)
        return 1
    report = scan_nodes(nodes, cfg)
    if report.best is None:
        payload = _envelope("solve", args.seed, cfg, {"scan": report.to_dict(), "solution": None})
        _emit(_json_dump(payload), args.out)
        return 2
    sol = report.best.solution
    solution = {
        "N": sol.N,
        "nodes": list(sol.nodes),
        "T_re": complex(sol.T).real,
        "T_im": complex(sol.T).imag,
        "p": sol.p,
        "alphas": [[complex(a).real, complex(a).imag] for a in sol.alphas],
        "gammas": list(sol.gammas),
        "det_residual": sol.det_residual,
        "row_used": sol.row_used,
    }
    if args.format == "csv":
        lines = ["N,T_re,T_im,p,det_residual"]
        lines.append(
            ",".join(
                [str(sol.N)]
                + [_fmt(v) for v in (complex(sol.T).real, complex(sol.T).imag, sol.p, sol.det_residual)]
            )
        )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_json_dump(_envelope("solve", args.seed, cfg, {"scan": report.to_dict(), "solution": solution})), args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.n_min < 1 or args.n_min > args.n_max:
        print("error: need 1 <= n-min <= n-max", file=sys.stderr)
        return 1
    if args.n_max > PRECISION_CAP:
        print(f"error: n-max exceeds the double-precision cap {PRECISION_CAP}", file=sys.stderr)
        return 1
    cfg = SearchConfig()
    rows = sweep(args.n_min, args.n_max, search=cfg)
    if args.format == "csv":
        lines = ["N,T,p,residual"]
        for r in rows:
            lines.append(",".join([str(r.N), _fmt(complex(r.T).real), _fmt(r.p), _fmt(r.det_residual)]))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        payload = {
            "rows": [
                {"N": r.N, "T_re": complex(r.T).real, "T_im": complex(r.T).imag, "p": r.p, "residual": r.det_residual}
                for r in rows
            ]
        }
        _emit(_json_dump(_envelope("sweep", args.seed, cfg, payload)), args.out)
    return 0


def cmd_verify(args) -> int:
    N = args.n
    if N < 1:
        print("error: need N >= 1", file=sys.stderr)
        return 1
    if 2 * N - 1 > FACTORIAL_CAP:
        print(f"error: N={N} needs photon sectors beyond the cap {FACTORIAL_CAP}", file=sys.stderr)
        return 1
    if N > PRECISION_CAP:
        print(f"error: N={N} exceeds the double-precision cap {PRECISION_CAP}", file=sys.stderr)
        return 1
    cfg = SearchConfig()
    report = scan_nodes(NodeSet.minimal(N), cfg)
    if report.best is None:
        print("error: no gate found", file=sys.stderr)
        return 2
    sol = report.best.solution
    rng = np.random.default_rng(args.seed)
    max_fid_err = 0.0
    max_p_err = 0.0
    for _ in range(args.trials):
        c = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
        c /= np.linalg.norm(c)
        signal = SignalState(tuple(c))
        out, prob, _lam = apply_gate(signal, sol)
        max_fid_err = max(max_fid_err, 1.0 - fidelity(out, target_state(signal)))
        max_p_err = max(max_p_err, abs(prob - 1.0 / N**2))
    ok = max_fid_err <= 1e-8 and max_p_err <= 1e-8
    payload = {
        "N": N,
        "trials": args.trials,
        "T_re": complex(sol.T).real,
        "max_fidelity_error": max_fid_err,
        "max_prob_error": max_p_err,
        "pass": ok,
    }
    _emit(_json_dump(_envelope("verify", args.seed, cfg, payload)), args.out)
    return 0 if ok else 3


def _rand_x(rng, lo=-0.95, hi=0.95, avoid_zero=True) -> Fraction:
    """Random rational sample point (exact, reproducible)."""
    while True:
        v = int(rng.integers(int(lo * 1000), int(hi * 1000) + 1))
        if avoid_zero and v == 0:
            continue
        return Fraction(v, 1000)


def _suite_a(rng) -> list:
    """Three-term recursion, including the boundary parameters x = 0, +-1."""
    results = []
    worst = 0.0
    count = 0
    xs = [Fraction(0), Fraction(1), Fraction(-1)] + [_rand_x(rng) for _ in range(100)]
    for x in xs:
        n = int(rng.integers(0, 31))
        for k in range(2, 21):
            ref = float(spoly_eval_exact(k, x, n))
            s1 = float(spoly_eval_exact(k - 1, x, n))
            s2 = float(spoly_eval_exact(k - 2, x, n))
            got = spoly_recursion_step(k, float(x), n, s1, s2)
            denom = max(abs(ref), 1e-30)
            worst = max(worst, abs(got - ref) / denom)
            count += 1
    results.append({"identity": "three_term_recursion", "instances": count, "max_residual": worst, "pass": worst <= IDENTITY_TOL})
    return results


def _suite_b(rng) -> list:
    """Binomial expansions over the S-basis (gap-free and one-gap forms)."""
    results = []

    worst = 0.0
    for _ in range(100):
        N = int(rng.integers(1, 9))
        p = int(rng.integers(0, N + 1))
        l = int(rng.integers(0, 2 * N + 1))
        x = float(_rand_x(rng))
        lhs = (x * x - 1.0) ** N * math.comb(l, p)
        rhs = sum((-1) ** (N - j) * symmetric_s(x, p, j, N) * spoly_eval(j, x, l) for j in range(N + 1))
        worst = max(worst, abs(lhs - rhs))
    results.append({"identity": "binomial_over_S_basis", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})

    worst = 0.0
    for _ in range(100):
        N = int(rng.integers(1, 9))
        j = int(rng.integers(0, N + 1))
        x = float(_rand_x(rng))
        got = symmetric_s(x, N, j, N)
        want = math.comb(N, j) * x ** (2 * (N - j))
        worst = max(worst, abs(got - want))
    results.append({"identity": "p_equals_N_specialization", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})

    worst = 0.0
    for _ in range(100):
        N = int(rng.integers(1, 9))
        q = int(rng.integers(0, N + 1))
        l = int(rng.integers(0, 2 * N + 3))
        x = float(_rand_x(rng))
        lhs = (x * x - 1.0) ** N * gapped_binomial_expand(N + 1, q, l)
        rhs = sum((-1) ** (N - j) * oneq_coefficient(x, q, j, N) * spoly_eval(j, x, l) for j in range(N + 1))
        worst = max(worst, abs(lhs - rhs))
    results.append({"identity": "one_gap_binomial_over_S_basis", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})

    worst = 0.0
    for _ in range(100):
        p = int(rng.integers(1, 9))
        q = int(rng.integers(0, p))
        l = int(rng.integers(-3, 2 * p + 3))
        got = gapped_binomial_expand(p, q, l)
        prod = 1.0
        for k in range(p):
            if k != q:
                prod *= l - k
        worst = max(worst, abs(got - prod / math.factorial(p)))
    results.append({"identity": "gap_expansion_product_form", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})
    return results


def _suite_c(rng) -> list:
    """Gapped Vandermondians (exact) and the S-basis product rule."""
    results = []

    worst = 0
    count = 0
    for N in range(2, 11):
        for gap in range(N):
            nodes = NodeSet(tuple(v for v in range(N) if v != gap))
            got = vandermonde_power(nodes)
            want = gapped_vandermonde(N, gap).power
            worst = max(worst, abs(got - want))
            count += 1
    results.append({"identity": "gapped_vandermonde_power_exact", "instances": count, "max_residual": float(worst), "pass": worst == 0})

    worst = 0.0
    for _ in range(100):
        N = int(rng.integers(2, 11))
        gap = int(rng.integers(0, N))
        x = _rand_x(rng)
        nodes = NodeSet(tuple(v for v in range(N) if v != gap))
        det = float(exact_det(spoly_matrix(nodes, x, exact=True)))
        want = gapped_vandermonde(N, gap).s_basis(float(x))
        worst = max(worst, abs(det - want) / max(abs(want), 1e-300))
    results.append({"identity": "gapped_vandermonde_S_basis", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})

    worst = 0.0
    for _ in range(100):
        N = int(rng.integers(1, 11))
        vals = sorted(rng.choice(np.arange(0, 2 * N + 2), size=N, replace=False).tolist())
        nodes = NodeSet(tuple(int(v) for v in vals))
        x = _rand_x(rng)
        det = float(exact_det(spoly_matrix(nodes, x, exact=True)))
        want = vandermonde_S(nodes, float(x))
        worst = max(worst, abs(det - want) / max(abs(want), 1e-300))
    results.append({"identity": "S_basis_product_rule", "instances": 100, "max_residual": worst, "pass": worst <= IDENTITY_TOL})
    return results


def cmd_identities(args) -> int:
    suites = {"a": _suite_a, "b": _suite_b, "c": _suite_c}
    selected = list(suites) if args.suite == "all" else [args.suite]
    report = {}
    all_ok = True
    for name in selected:
        rng = np.random.default_rng(args.seed)
        res = suites[name](rng)
        report[name] = res
        all_ok = all_ok and all(r["pass"] for r in res)
    payload = {"suites": report, "pass": all_ok}
    _emit(_json_dump(_envelope("identities", args.seed, SearchConfig(), payload)), args.out)
    return 0 if all_ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nssgate", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, help="output path (atomic write); default stdout")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve the gate for one node set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nodes", default=None, help="comma-separated photon numbers (default 0..N-1)")
    p.add_argument("--complex-search", action="store_true", help="also scan complex T (slow)")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="scaling table over a range of N")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="end-to-end Fock-space verification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="run the polynomial/determinant identity suites")
    p.add_argument("--suite", choices=["a", "b", "c", "all"], default="all")
    common(p)
    p.set_defaults(func=cmd_identities)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
