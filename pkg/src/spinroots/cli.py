"""Command line interface: ``spinroots companion|measure|multipole|verify``.

Coefficients given with ``--coeffs`` are written highest power first, e.g.
``--coeffs 1,-6,11,-6`` for ``x^3 - 6x^2 + 11x - 6``.

Exit codes: 0 success, 1 verification failure, 2 not all zeros real (or the
chain left the supported class), 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .companion import (
    DEFAULT_CLAMP_TOL,
    ChainError,
    DegreeAnomaly,
    NegativeD,
    build_companion,
    identity_residuals,
    run_mea,
    sample_points,
)
from .measurement import (
    DEFAULT_EIG_TOL,
    default_max_shots,
    eigenvalues_tridiagonal,
    reconstruct_product,
    run_parallel,
    run_search,
    substream,
)
from .multipole import expand, multipole_basis, reconstruct
from .oracle import find_roots, frobenius_roots, real_roots_only
from .parser import ParseError, parse
from .poly import DEFAULT_ZERO_TOL, FLOAT, RATIONAL, Polynomial, evaluate, monic_normalize, to_expr

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NOT_REAL = 2
EXIT_USAGE = 3

IDENTITY_TOL = 1e-8
ORACLE_TOL = 1e-8
ROUNDTRIP_TOL = 1e-12
PARSEVAL_TOL = 1e-10
GRAM_TOL = 1e-12


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    poly: str | None = None
    coeffs: str | None = None
    mode: str | None = None
    seed: int = 0
    shots: int | None = None
    parallel: int = 0
    workers: int = 1
    zero_tol: float = DEFAULT_ZERO_TOL
    clamp_tol: float = DEFAULT_CLAMP_TOL
    eig_tol: float = DEFAULT_EIG_TOL
    cluster_tol: float | None = None
    format: str = "text"


def load_polynomial(cfg: ExperimentConfig) -> tuple[Polynomial, str]:
    """Input polynomial made monic, and the arithmetic mode it runs in."""
    if (cfg.poly is None) == (cfg.coeffs is None):
        raise UsageError("give exactly one of --poly or --coeffs")
    if cfg.poly is not None:
        p = parse(cfg.poly)
    else:
        parts = [s.strip() for s in cfg.coeffs.split(",") if s.strip()]
        if not parts:
            raise UsageError("empty coefficient list")
        try:
            vals = [Fraction(s) for s in parts]
        except ValueError:
            try:
                vals = [float(s) for s in parts]
            except ValueError as exc:
                raise UsageError(f"bad coefficient list: {exc}") from None
        p = Polynomial(list(reversed(vals)))
    mode = cfg.mode or p.mode
    if not all(math.isfinite(float(c)) for c in p.coeffs):
        raise UsageError("non-finite coefficient")
    p = p.as_mode(mode)
    if p.degree < 1:
        raise UsageError("polynomial must have degree at least 1")
    return monic_normalize(p), mode


def _f(x) -> float:
    return float(x)


def _input_section(cfg: ExperimentConfig, p: Polynomial) -> dict:
    return {
        "source": cfg.poly if cfg.poly is not None else cfg.coeffs,
        "monic": to_expr(p),
        "coefficients_descending": [_f(c) for c in reversed(p.coeffs)],
        "degree": p.degree,
    }


def _chain_section(chain=None, err: ChainError | None = None) -> dict:
    d = list(chain.d) if chain else (err.d if err else [])
    q0 = list(chain.q0) if chain else (err.q0 if err else [])
    out = {
        "d": [_f(v) for v in d],
        "q0": [_f(v) for v in q0],
        "flags": list(chain.degenerate) if chain else [],
    }
    if any(isinstance(v, Fraction) for v in d + q0):
        out["d_exact"] = [str(v) for v in d]
        out["q0_exact"] = [str(v) for v in q0]
    if chain is not None:
        out["warnings"] = list(chain.warnings)
    return out


def _verdict(err: ChainError) -> dict:
    if isinstance(err, NegativeD):
        return {
            "error": "NegativeD",
            "verdict": "not all zeros real",
            "k": err.k,
            "d_k": _f(err.d_k),
        }
    assert isinstance(err, DegreeAnomaly)
    return {
        "error": "DegreeAnomaly",
        "verdict": "input outside supported class",
        "k": err.k,
        "quotient_degree": err.quotient_degree,
    }


def _pipeline(cfg: ExperimentConfig):
    p, mode = load_polynomial(cfg)
    report = {"command": None, "input": _input_section(cfg, p), "mode": mode}
    try:
        chain = run_mea(p, zero_tol=cfg.zero_tol, clamp_tol=cfg.clamp_tol)
    except ChainError as err:
        report["chain"] = _chain_section(err=err)
        report["verdict"] = _verdict(err)
        return p, report, None, None
    matrix = build_companion(chain)
    report["chain"] = _chain_section(chain)
    report["matrix"] = {"diag": list(matrix.diag), "offdiag": list(matrix.offdiag)}
    return p, report, chain, matrix


def cmd_companion(cfg: ExperimentConfig) -> tuple[dict, int]:
    p, report, chain, matrix = _pipeline(cfg)
    report["command"] = "companion"
    if chain is None:
        return report, EXIT_NOT_REAL
    pts = sample_points(matrix.gershgorin_bound())
    res = identity_residuals(matrix, p, pts)
    report["identity"] = {"points": list(pts), "residuals": res, "max_residual": max(res)}
    return report, EXIT_OK


def _resolve_seed(seed: int) -> int:
    if seed == 0:
        return int(np.random.SeedSequence().entropy) & (2**64 - 1) or 1
    return seed


def cmd_measure(cfg: ExperimentConfig) -> tuple[dict, int]:
    p, report, chain, matrix = _pipeline(cfg)
    report["command"] = "measure"
    seed = _resolve_seed(cfg.seed)
    for key in ("matrix", "spectrum", "shots", "histogram", "roots", "residuals"):
        report.setdefault(key, None)
    report["seed"] = seed
    if chain is None:
        return report, EXIT_NOT_REAL

    spec = eigenvalues_tridiagonal(matrix, cfg.eig_tol)
    report["spectrum"] = {
        "eigenvalues": list(spec.eigenvalues),
        "values": list(spec.values),
        "multiplicities": list(spec.multiplicities),
    }
    cluster_tol = cfg.cluster_tol if cfg.cluster_tol is not None else spec.default_cluster_tol()
    pf = p.as_mode(FLOAT)
    if cfg.parallel > 0:
        record = run_parallel(spec, cfg.parallel, seed, workers=cfg.workers)
        found: list[float] = []
        for v in record.outcomes():
            if all(abs(v - u) > cluster_tol for u in found):
                found.append(v)
        found.sort()
        shots_used = len(record.shots)
        complete = len(found) == len(spec.values)
        mult = dict(zip(spec.values, spec.multiplicities))
        recon = reconstruct_product([v for v in found for _ in range(mult.get(v, 1))])
        report["protocol"] = {"kind": "parallel", "apparatus": cfg.parallel}
    else:
        max_shots = cfg.shots if cfg.shots is not None else default_max_shots(p.degree)
        result = run_search(spec, max_shots, cluster_tol, substream(seed, 0), poly=p, seed=seed)
        record = result.record
        found = list(result.distinct_outcomes)
        shots_used, complete, recon = result.shots_used, result.complete, result.reconstructed_poly
        report["protocol"] = {"kind": "sequential", "max_shots": max_shots}

    report["shots"] = shots_used
    report["outcomes"] = [[s.index, s.apparatus, s.value] for s in record.shots]
    report["histogram"] = [{"value": v, "count": c} for v, c in record.histogram().items()]
    report["roots"] = found
    report["residuals"] = [abs(float(evaluate(pf, v))) for v in found]
    report["complete"] = complete
    report["reconstructed_descending"] = [float(c) for c in reversed(recon.coeffs)]
    return report, EXIT_OK


def _multipole_data(matrix):
    basis = multipole_basis(matrix.n)
    exp = expand(matrix, basis)
    dense = matrix.dense()
    fro = np.linalg.norm(dense)
    recon_err = float(np.linalg.norm(reconstruct(exp) - dense) / (fro if fro else 1.0))
    c = np.asarray(exp.coefficients)
    target = float(np.trace(dense @ dense) / matrix.n)
    parseval = float(abs(np.sum(c**2) - target) / (target if target else 1.0))
    gram_dev = float(np.max(np.abs(basis.gram() - np.eye(matrix.n**2))))
    return basis, exp, recon_err, parseval, gram_dev


def cmd_multipole(cfg: ExperimentConfig) -> tuple[dict, int]:
    p, report, chain, matrix = _pipeline(cfg)
    report["command"] = "multipole"
    if chain is None:
        return report, EXIT_NOT_REAL
    basis, exp, recon_err, parseval, gram_dev = _multipole_data(matrix)
    report["spin"] = (matrix.n - 1) / 2
    report["coefficients"] = [
        {"index": i, "word": w or "I", "c": c}
        for i, (w, c) in enumerate(zip(basis.words, exp.coefficients))
    ]
    report["residuals"] = {
        "gram_max_deviation": gram_dev,
        "reconstruction_relative": recon_err,
        "parseval_relative": parseval,
        "max_imaginary": exp.max_imag,
    }
    return report, EXIT_OK


def _group_means(values, multiplicities) -> list[float]:
    out, i = [], 0
    for m in multiplicities:
        out.append(float(np.mean(values[i : i + m])))
        i += m
    return out


def cmd_verify(cfg: ExperimentConfig) -> tuple[dict, int]:
    p, report, chain, matrix = _pipeline(cfg)
    report["command"] = "verify"
    checks: list[dict] = []
    report["checks"] = checks

    def check(name, value, tol):
        checks.append({"name": name, "value": value, "tolerance": tol, "passed": bool(value <= tol)})

    rs = find_roots(p)
    real = real_roots_only(rs) if rs.converged else None
    report["oracle"] = {
        "converged": rs.converged,
        "iterations": rs.iterations,
        "roots_real": [z.real for z in rs.roots],
        "roots_imag": [z.imag for z in rs.roots],
        "complex_present": real is None,
    }

    if chain is None:
        consistent = rs.converged and real is None
        checks.append({"name": "chain_oracle_verdict", "passed": consistent})
        if not consistent:
            report["failed"] = "chain_oracle_verdict"
            return report, EXIT_VERIFY_FAILED
        return report, EXIT_NOT_REAL

    spec = eigenvalues_tridiagonal(matrix, cfg.eig_tol)
    radius = max(abs(v) for v in spec.eigenvalues)
    res = identity_residuals(matrix, p, sample_points(radius))
    check("characteristic_identity", max(res), IDENTITY_TOL)

    if real is None:
        checks.append({"name": "oracle_real_roots", "passed": False})
    else:
        eig_means = _group_means(np.asarray(spec.eigenvalues), spec.multiplicities)
        scale = 1.0 + max(abs(v) for v in real)
        dev = max(abs(a - b) for a, b in zip(eig_means, _group_means(np.asarray(real), spec.multiplicities)))
        check("spectrum_vs_oracle", dev / scale, ORACLE_TOL)
        frob = np.sort(frobenius_roots(p).real)
        fdev = max(abs(a - b) for a, b in zip(eig_means, _group_means(frob, spec.multiplicities)))
        check("spectrum_vs_frobenius", fdev / scale, ORACLE_TOL)

    _, _, recon_err, parseval, gram_dev = _multipole_data(matrix)
    check("multipole_gram", gram_dev, GRAM_TOL)
    check("multipole_roundtrip", recon_err, ROUNDTRIP_TOL)
    check("parseval", parseval, PARSEVAL_TOL)

    failed = [c["name"] for c in checks if not c["passed"]]
    if failed:
        report["failed"] = failed[0]
        return report, EXIT_VERIFY_FAILED
    return report, EXIT_OK


COMMANDS = {
    "companion": cmd_companion,
    "measure": cmd_measure,
    "multipole": cmd_multipole,
    "verify": cmd_verify,
}


def _encode(obj) -> str:
    """JSON with floats written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        if not any(ch in text for ch in ".e"):
            text += ".0"
        return text
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, np.generic):
        return _encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _fmt_list(values, digits: int = 10) -> str:
    return "[" + ", ".join(f"{v:.{digits}g}" for v in values) + "]"


def render_text(report: dict) -> str:
    lines = [f"input      : {report['input']['monic']}  (degree {report['input']['degree']}, {report['mode']})"]
    chain = report.get("chain") or {}
    if "d_exact" in chain:
        lines.append(f"d_k        : {', '.join(chain['d_exact'])}")
        lines.append(f"q_k(0)     : {', '.join(chain['q0_exact'])}")
    elif chain:
        lines.append(f"d_k        : {_fmt_list(chain['d'])}")
        lines.append(f"q_k(0)     : {_fmt_list(chain['q0'])}")
    if chain.get("flags"):
        lines.append(f"degenerate : {chain['flags']}")
    for w in chain.get("warnings", []):
        lines.append(f"warning    : {w}")
    if "verdict" in report:
        v = report["verdict"]
        detail = f"d_{v['k']} = {v['d_k']:g}" if "d_k" in v else f"deg q_{v['k']} = {v['quotient_degree']}"
        lines.append(f"verdict    : {v['verdict']} ({v['error']}: {detail})")
    if report.get("matrix"):
        lines.append(f"diag       : {_fmt_list(report['matrix']['diag'])}")
        lines.append(f"offdiag    : {_fmt_list(report['matrix']['offdiag'])}")
    if "identity" in report:
        lines.append(f"identity   : max residual {report['identity']['max_residual']:.3g}")
    if report["command"] == "measure" and report.get("spectrum"):
        lines.append(f"seed       : {report['seed']}")
        lines.append(f"shots      : {report['shots']}  complete={report['complete']}")
        for h in report["histogram"]:
            lines.append(f"  {h['value']:+.12g}  x{h['count']}")
        lines.append(f"roots      : {_fmt_list(report['roots'], 15)}")
        lines.append(f"|P(root)|  : {_fmt_list(report['residuals'], 3)}")
        lines.append(f"product    : {_fmt_list(report['reconstructed_descending'])}")
    if report["command"] == "multipole" and "coefficients" in report:
        lines.append(f"spin s     : {report['spin']:g}")
        for c in report["coefficients"]:
            if abs(c["c"]) > 1e-12:
                lines.append(f"  T[{c['index']}] ({c['word']}) : {c['c']:.15g}")
        for k, v in report["residuals"].items():
            lines.append(f"{k:<26}: {v:.3g}")
    if report["command"] == "verify":
        for c in report["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            extra = f" {c['value']:.3g} <= {c['tolerance']:g}" if "value" in c else ""
            lines.append(f"{mark} {c['name']}{extra}")
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinroots", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--poly", help="polynomial expression, e.g. '(x-1)*(x-2)'")
        src.add_argument("--coeffs", help="coefficients, highest power first, comma separated")
        sp.add_argument("--mode", choices=[RATIONAL, FLOAT])
        sp.add_argument("--seed", type=_u64, default=0, help="0 derives a seed and reports it")
        sp.add_argument("--shots", type=int)
        sp.add_argument("--parallel", type=int, default=0, metavar="M")
        sp.add_argument("--workers", type=int, default=1, help="threads for --parallel")
        sp.add_argument("--tol-zero", type=float, default=DEFAULT_ZERO_TOL, dest="zero_tol")
        sp.add_argument("--tol-eig", type=float, default=DEFAULT_EIG_TOL, dest="eig_tol")
        sp.add_argument("--tol-cluster", type=float, default=None, dest="cluster_tol")
        sp.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def run(argv=None) -> tuple[str, int]:
    """Run one command; returns the rendered report and the exit code."""
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        poly=args.poly,
        coeffs=args.coeffs,
        mode=args.mode,
        seed=args.seed,
        shots=args.shots,
        parallel=args.parallel,
        workers=args.workers,
        zero_tol=args.zero_tol,
        eig_tol=args.eig_tol,
        cluster_tol=args.cluster_tol,
        format=args.format,
    )
    if cfg.shots is not None and cfg.shots < 1 or cfg.parallel < 0 or cfg.workers < 1:
        raise UsageError("--shots and --workers must be positive, --parallel nonnegative")
    report, code = COMMANDS[args.command](cfg)
    text = _encode(report) if cfg.format == "json" else render_text(report)
    return text, code


def main(argv=None) -> int:
    try:
        text, code = run(argv)
    except (ParseError, UsageError) as exc:
        print(f"spinroots: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
