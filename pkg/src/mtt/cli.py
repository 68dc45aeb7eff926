"""``mtt`` command line: analyze, certify, verify, generate.

Exit codes: 0 ok, 1 unreadable input, 2 not UET (with ``--decompose`` or
``certify``), 3 undetermined, 4 certificate rejected.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field

from . import jsonio
from .antilinear import Anticonjugation, Conjugation
from .canonical import decompose_canonical
from .commutant import hermitian_commutant
from .errors import InvalidMatrix, MttError, NotUET, Undetermined
from .gallery import KINDS, GeneratorSpec, generate
from .intertwiner import NO, UNDETERMINED, YES, is_uecsm, is_ueasm, is_uet, verify_certificate
from .linalg import DEFAULT_TOL, ToleranceConfig

EXIT_OK, EXIT_PARSE, EXIT_NOT_UET, EXIT_UNDETERMINED, EXIT_BAD_CERT = 0, 1, 2, 3, 4
MARGIN_WARNING = 2.0  # decades between kept and dropped singular values

KIND_ALIASES = {"asm": "asm_irreducible", "csm": "random_csm"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


@dataclass
class AnalysisReport:
    input_digest: str
    decisions: dict
    irreducible: bool
    commutant_dim: int
    tolerances_used: ToleranceConfig
    decomposition: dict | None = None
    warnings: list = field(default_factory=list)
    error: str | None = None

    def to_json(self) -> dict:
        out = {
            "input_digest": self.input_digest,
            "decisions": self.decisions,
            "irreducible": self.irreducible,
            "commutant_dim": self.commutant_dim,
            "decomposition": self.decomposition,
            "tolerances_used": self.tolerances_used.to_dict(),
            "warnings": self.warnings,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_text(self) -> str:
        lines = [f"input sha256: {self.input_digest}"]
        for name, d in self.decisions.items():
            lines.append(f"{name}: {d['verdict']}  ({d['evidence']})")
        lines.append(f"irreducible: {'yes' if self.irreducible else 'no'} (commutant dimension {self.commutant_dim})")
        if self.decomposition is not None:
            kinds = ", ".join(f"{s['kind']}({s['size']})" for s in self.decomposition["summands"])
            lines.append(f"decomposition: {kinds}  residual {self.decomposition['residual']:.2e}")
        if self.error:
            lines.append(f"error: {self.error}")
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


def _decision_summary(decision) -> dict:
    return {
        "verdict": decision.verdict,
        "evidence": decision.evidence,
        "violating_word": decision.violating_word,
        "kernel_dim": decision.kernel_dim,
        "certificate": jsonio.certificate_to_json(decision.certificate) if decision.certificate else None,
    }


def _tolerances(args) -> ToleranceConfig:
    overrides = {}
    for flag, name in (("tol", "eps_residual"), ("eps_rank", "eps_rank"), ("eps_cluster", "eps_cluster"),
                       ("max_iter", "max_iter"), ("restarts", "restarts"), ("seed", "seed")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[name] = value
    return DEFAULT_TOL.replace(**overrides)


def _read_matrix(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise InvalidMatrix(f"{path}: not valid JSON ({exc})") from exc
    return jsonio.matrix_from_json(obj), hashlib.sha256(raw).hexdigest()


def cmd_analyze(args) -> int:
    tol = _tolerances(args)
    t, digest = _read_matrix(args.path)
    decisions = {
        "uet": is_uet(t, tol, args.budget),
        "uecsm": is_uecsm(t, tol, args.budget),
        "ueasm": is_ueasm(t, tol, args.budget),
    }
    basis = hermitian_commutant(t, tol)
    warnings = []
    for name, d in decisions.items():
        if d.cutoff_margin < MARGIN_WARNING:
            warnings.append(f"{name}: kernel rank cutoff margin only {d.cutoff_margin:.2f} decades")
    if basis.cutoff_margin < MARGIN_WARNING:
        warnings.append(f"commutant rank cutoff margin only {basis.cutoff_margin:.2f} decades")
    report = AnalysisReport(
        input_digest=digest,
        decisions={k: _decision_summary(d) for k, d in decisions.items()},
        irreducible=basis.dim_real == 1,
        commutant_dim=basis.dim_real,
        tolerances_used=tol,
        warnings=warnings,
    )
    code = EXIT_UNDETERMINED if decisions["uet"].verdict == UNDETERMINED else EXIT_OK
    if args.decompose:
        try:
            dec = decompose_canonical(t, tol, args.budget)
            report.decomposition = jsonio.decomposition_to_json(dec)
            report.decomposition["residual"] = dec.residual
            if any(s.provisional for s in dec.summands):
                warnings.append("decomposition contains provisional type III summands")
        except NotUET as exc:
            report.error, code = f"not UET: {exc}", EXIT_NOT_UET
        except Undetermined as exc:
            report.error, code = f"undetermined: {exc}", EXIT_UNDETERMINED
        except MttError as exc:
            report.error, code = f"decomposition failed ({type(exc).__name__}): {exc}", EXIT_UNDETERMINED
    print(jsonio.dumps(report.to_json()) if args.json else report.to_text())
    if report.error:
        print(report.error, file=sys.stderr)
    return code


def cmd_certify(args) -> int:
    tol = _tolerances(args)
    t, _ = _read_matrix(args.path)
    decider = {"uet": is_uet, "uecsm": is_uecsm, "ueasm": is_ueasm}[args.kind]
    decision = decider(t, tol, args.budget)
    if decision.verdict == YES:
        print(jsonio.dumps(jsonio.certificate_to_json(decision.certificate)))
        return EXIT_OK
    print(f"{args.kind}: {decision.verdict} ({decision.evidence})", file=sys.stderr)
    return EXIT_NOT_UET if decision.verdict == NO else EXIT_UNDETERMINED


def cmd_verify(args) -> int:
    """Direct multiplication only: unitarity, residual, symmetry class, alpha."""
    tol = _tolerances(args)
    t, _ = _read_matrix(args.matrix)
    try:
        cert = jsonio.certificate_from_json(jsonio.load_file(args.certificate), t)
    except ValueError as exc:
        raise InvalidMatrix(f"{args.certificate}: {exc}") from exc
    problems = verify_certificate(t, cert, tol)
    if problems:
        for p in problems:
            print(f"violated: {p}", file=sys.stderr)
        return EXIT_BAD_CERT
    print(f"ok: {cert.kind} certificate holds (residual {cert.residual:.2e}, witness {cert.symmetry_class})")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.spec:
        spec = jsonio.spec_from_json(jsonio.load_file(args.spec))
    else:
        if args.kind is None:
            raise MttError("give a generator kind or --spec")
        kind = args.kind.replace("-", "_")
        kind = KIND_ALIASES.get(kind, kind)
        spec = GeneratorSpec(kind=kind, d=args.d, n=args.n, seed=args.seed if args.seed is not None else 0)
    out = generate(spec)
    if isinstance(out, (Conjugation, Anticonjugation)):
        print(jsonio.dumps(jsonio.antilinear_to_json(out)))
    else:
        print(jsonio.dumps(jsonio.matrix_to_json(out)))
    return EXIT_OK


def _tolerance_flags(p):
    p.add_argument("--tol", type=float, help="residual tolerance eps_residual")
    p.add_argument("--eps-rank", type=float, help="relative singular-value cutoff")
    p.add_argument("--eps-cluster", type=float, help="eigenvalue clustering radius")
    p.add_argument("--max-iter", type=int, help="iterations per unitary-search restart")
    p.add_argument("--restarts", type=int, help="unitary-search restarts")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--budget", type=int, help="maximum trace-word length")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mtt", description="Unitary equivalence to the transpose: decide, certify, decompose.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="run all deciders on a matrix file")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--decompose", action="store_true", help="also run the canonical decomposition")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="print a certificate JSON if the matrix passes")
    p.add_argument("path")
    p.add_argument("--kind", choices=("uet", "uecsm", "ueasm"), default="uet")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="check a certificate by direct multiplication")
    p.add_argument("matrix")
    p.add_argument("certificate")
    _tolerance_flags(p)
    p.set_defaults(func=cmd_verify)

    kinds = sorted(set(KINDS) | {k.replace("_", "-") for k in KINDS} | set(KIND_ALIASES))
    p = sub.add_parser("generate", help="print a gallery matrix as JSON")
    p.add_argument("kind", nargs="?", choices=kinds)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--spec", help="GeneratorSpec JSON file (needed for direct_sum / scrambled)")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        return args.func(args)
    except (OSError, MttError, ValueError) as exc:
        print(f"mtt: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
