"""Command-line front end.

Every subcommand reads a JSON session file, runs one computation and prints a
JSON report on stdout.  Exit codes: 0 success, 1 mathematical negative
(non-member, infeasible, failed verification), 2 usage or input error, 3
resource bound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import traceback
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .certifier import Certificate, certify, verify_certificate
from .errors import LinkageError, ResourceBound, SplitRejected
from .groebner import (
    IdealPresentation,
    buchberger,
    colon_ideal,
    dimension,
    divide_with_quotients,
    homogeneous_closure,
    ideal_subset,
    is_groebner_basis,
    membership_certificate,
    quotient,
    radical_membership,
    saturation,
)
from .hilbert import hilbert_data
from .noetherian import (
    GenericityError,
    JacobianData,
    adjugate_identity_holds,
    build_noetherian_system,
    noetherian_membership,
)
from .parsing import ParseError, parse_polynomial
from .poly import MonomialOrder, Polynomial
from .resolution import compose, minimalize, regularity, schreyer_resolution
from .serialize import (
    SCHEMA_VERSION,
    Session,
    SessionError,
    complex_to_json,
    context_from_json,
    context_to_json,
    hilbert_to_json,
    load_session,
    matrix_from_json,
    parse_c_inf,
    poly_from_json,
    poly_to_json,
    polys_from_json,
    polys_to_json,
    system_to_json,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{args.command} needs --{name.replace('_', '-')}")
    return value


def _order(args) -> MonomialOrder:
    return MonomialOrder(args.order)


def _ideal_and_poly(session: Session, args, need_poly: bool):
    ideal = session.ideal(_require(args, "ideal"))
    poly = None
    if need_poly:
        poly = parse_polynomial(_require(args, "poly"), session.ctx)
    ctx = session.ring_for(ideal, *([poly] if poly is not None else []))
    ideal = ideal.to_context(ctx)
    if poly is not None:
        poly = poly.to_context(ctx)
    return ctx, ideal, poly


def _projective_ideal(session: Session, args) -> IdealPresentation:
    """The ideal itself if it lives in the projective ring, else its closure."""
    ideal = session.ideal(_require(args, "ideal"))
    if session.uses_hom(*ideal.generators):
        if not ideal.is_homogeneous():
            raise UsageError("an ideal using the homogenizing variable must be homogeneous")
        return ideal
    return homogeneous_closure(ideal, session.ctx.hom_index)


# ---------------------------------------------------------------------------
# subcommands; each returns (status, outputs, exit code, context)

def cmd_gb(session, args):
    ctx, ideal, _ = _ideal_and_poly(session, args, False)
    gb = buchberger(ideal, _order(args))
    return "ok", {
        "basis": polys_to_json(gb.elements, gb.order),
        "leading_monomials": [list(m) for m in gb.leading_monomials()],
        "order": args.order,
    }, EXIT_OK, ctx


def cmd_nf(session, args):
    ctx, ideal, p = _ideal_and_poly(session, args, True)
    gb = buchberger(ideal, _order(args))
    quots, rem = divide_with_quotients(p, gb)
    return "ok", {
        "basis": polys_to_json(gb.elements, gb.order),
        "quotients": polys_to_json(quots),
        "normal_form": poly_to_json(rem),
        "order": args.order,
    }, EXIT_OK, ctx


def cmd_member(session, args):
    ctx, ideal, p = _ideal_and_poly(session, args, True)
    cof = membership_certificate(p, ideal)
    if cof is None:
        return "non-member", {"member": False, "certificate": None}, EXIT_NEGATIVE, ctx
    return "member", {"member": True, "certificate": polys_to_json(cof)}, EXIT_OK, ctx


def cmd_radical_member(session, args):
    ctx, ideal, p = _ideal_and_poly(session, args, True)
    ok = radical_membership(p, ideal)
    return ("member" if ok else "non-member"), {"radical_member": ok}, (EXIT_OK if ok else EXIT_NEGATIVE), ctx


def cmd_quotient(session, args):
    if args.by is not None:
        ideal = session.ideal(_require(args, "ideal"))
        other = session.ideal(args.by)
        ctx = session.ctx if session.uses_hom(*ideal.generators, *other.generators) else session.affine_ctx
        res = colon_ideal(ideal.to_context(ctx), other.to_context(ctx))
        divisor = {"ideal": args.by}
    else:
        ctx, ideal, p = _ideal_and_poly(session, args, True)
        res = quotient(ideal, p)
        divisor = {"poly": poly_to_json(p)}
    return "ok", {"generators": polys_to_json(res.generators), "divisor": divisor}, EXIT_OK, ctx


def cmd_saturate(session, args):
    ctx, ideal, p = _ideal_and_poly(session, args, True)
    res = saturation(ideal, p)
    return "ok", {"generators": polys_to_json(res.generators)}, EXIT_OK, ctx


def cmd_dim(session, args):
    ctx, ideal, _ = _ideal_and_poly(session, args, False)
    d = dimension(ideal)
    return "ok", {"dimension": d, "codimension": ctx.nvars - d if d >= 0 else None}, EXIT_OK, ctx


def cmd_closure(session, args):
    ideal = session.ideal(_require(args, "ideal"))
    if session.uses_hom(*ideal.generators):
        raise UsageError("closure expects an affine ideal")
    res = homogeneous_closure(ideal, session.ctx.hom_index)
    return "ok", {"generators": polys_to_json(res.generators)}, EXIT_OK, session.ctx


def cmd_hilbert(session, args):
    X = _projective_ideal(session, args)
    return "ok", {"closure": polys_to_json(X.generators), "hilbert": hilbert_to_json(hilbert_data(X))}, EXIT_OK, session.ctx


def _resolution_outputs(X: IdealPresentation):
    res = schreyer_resolution(X)
    mres = minimalize(res)
    return {
        "closure": polys_to_json(X.generators),
        "regularity": regularity(mres),
        "regularity_nonminimal": regularity(res),
        "minimal": complex_to_json(mres),
        "nonminimal_twists": res.twists(),
    }


def cmd_resolve(session, args):
    return "ok", _resolution_outputs(_projective_ideal(session, args)), EXIT_OK, session.ctx


cmd_reg = cmd_resolve


def cmd_noetherian(session, args):
    ctx, ideal, _ = _ideal_and_poly(session, args, False)
    sys_ = build_noetherian_system(ideal, seed=args.seed)
    out = {"system": system_to_json(sys_)}
    status, code = "ok", EXIT_OK
    if args.poly is not None:
        phi = parse_polynomial(args.poly, session.ctx).to_context(ctx)
        rep = noetherian_membership(sys_, phi)
        out["membership"] = {
            "poly": poly_to_json(phi),
            "member": rep.member,
            "checks": [{"multiplier": i, "alpha": list(a), "passed": ok} for i, a, ok in rep.checks],
            "witness": None if rep.witness is None else {
                "multiplier": rep.witness[0], "alpha": list(rep.witness[1]), "image": poly_to_json(rep.witness[2])},
        }
        if not rep.member:
            status, code = "non-member", EXIT_NEGATIVE
    return status, out, code, ctx


def cmd_certify(session, args):
    name = _require(args, "instance")
    inst = session.problem(name, args.nu, args.c_inf)
    seed = args.seed if args.seed is not None else int(session.instances[name].get("seed", 0))
    r = certify(inst, seed=seed, rho=args.rho, hom_name=session.ctx.hom_name)
    hyp = r.hypothesis
    b = r.bound
    out = {
        "instance": {
            "name": name,
            "J_V": polys_to_json(inst.J_V.generators),
            "radical_generators": polys_to_json(inst.radical_ideal().generators),
            "F": polys_to_json(inst.F),
            "Phi": poly_to_json(inst.Phi),
            "nu": inst.nu,
            "c_inf": inst.c_inf,
            "seed": seed,
        },
        "projective_context": context_to_json(r.closure.ctx),
        "closure": polys_to_json(r.closure.generators),
        "resolution": complex_to_json(r.minimal_resolution),
        "regularity": r.reg,
        "regularity_nonminimal": r.reg_nonminimal,
        "hilbert_X": hilbert_to_json(r.hilbert_X),
        "hilbert_X_red": hilbert_to_json(r.hilbert_X_red),
        "noetherian": system_to_json(r.system),
        "hypothesis": {
            "passed": hyp.passed,
            "checks": [{"multiplier": i, "alpha": list(a), "passed": ok} for i, a, ok in hyp.checks],
            "first_failure": None if hyp.first_failure is None else {
                "multiplier": hyp.first_failure[0], "alpha": list(hyp.first_failure[1]),
                "image": poly_to_json(hyp.first_failure[2])},
            "note": "sufficient membership test; a failure is inconclusive",
        },
        "bound": {
            "rho": b.rho, "entry_infinity": b.entry_infinity, "entry_cohomology": b.entry_cohomology,
            "reg": b.reg, "deg_X_red": b.deg_X_red, "n": b.n, "c_inf": b.c_inf, "d": b.d, "m": b.m,
        },
        "rho_used": r.certificate.rho if r.certificate else (args.rho if args.rho is not None else b.rho),
        "certificate": None if r.certificate is None else {
            "Q": polys_to_json(r.certificate.Q),
            "residual": polys_to_json(r.certificate.residual),
            "rho": r.certificate.rho,
            "max_degree": r.certificate.max_degree,
            "within_bound": r.certificate.within_bound,
        },
        "homogeneous_check": r.homogeneous_check,
        "result": r.status,
    }
    code = EXIT_NEGATIVE if r.certificate is None else EXIT_OK
    return r.status, out, code, inst.ctx


# ---------------------------------------------------------------------------
# verification

def _check_gb(report, session, ctx, problems):
    out = report["outputs"]
    basis = polys_from_json(out["basis"], ctx)
    order = MonomialOrder(out["order"])
    if not is_groebner_basis(basis, order):
        problems.append("basis fails the S-pair criterion")
    lms = out.get("leading_monomials")
    if lms is not None and [list(b.leading_monomial(order)) for b in basis] != lms:
        problems.append("leading monomials do not match the basis")
    gb = _trusted_basis(ctx, basis, order)
    ideal = session.ideal(report["arguments"]["ideal"]).to_context(ctx)
    if any(gb.normal_form(g) for g in ideal.generators):
        problems.append("a session generator does not reduce to zero")
    # the other inclusion: every basis element lies in the ideal
    if basis and ideal.generators and not ideal_subset(IdealPresentation(ctx, tuple(basis)), ideal):
        problems.append("basis element outside the ideal")
    return gb


def _trusted_basis(ctx, basis, order):
    from .groebner import GroebnerBasis
    return GroebnerBasis(ctx, tuple(basis), order, True, (), ())


def _verify(report: dict, session: Session) -> List[str]:
    problems: List[str] = []
    if report.get("schema_version") != SCHEMA_VERSION:
        problems.append("unsupported report schema_version")
        return problems
    if report["inputs_digest"] != _digest({"session": session.raw, "arguments": report["arguments"]}):
        problems.append("inputs digest does not match the session and arguments")
    if report.get("exit_code") not in (EXIT_OK, EXIT_NEGATIVE):
        return problems
    cmd = report["command"]
    ctx = context_from_json(report["context"])
    out = report["outputs"]
    args = report["arguments"]
    if cmd == "gb":
        _check_gb(report, session, ctx, problems)
    elif cmd == "nf":
        gb = _check_gb(report, session, ctx, problems)
        p = parse_polynomial(args["poly"], session.ctx).to_context(ctx)
        quots = polys_from_json(out["quotients"], ctx)
        rem = poly_from_json(out["normal_form"], ctx)
        total = rem
        for q, b in zip(quots, gb.elements):
            total = total + q * b
        if len(quots) != len(gb.elements) or total != p:
            problems.append("division identity fails")
        if rem and gb.normal_form(rem) != rem:
            problems.append("remainder is not reduced")
    elif cmd == "member" and out["member"]:
        p = parse_polynomial(args["poly"], session.ctx).to_context(ctx)
        ideal = session.ideal(args["ideal"]).to_context(ctx)
        cof = polys_from_json(out["certificate"], ctx)
        total = Polynomial.zero(ctx)
        for h, g in zip(cof, ideal.generators):
            total = total + h * g
        if len(cof) != len(ideal.generators) or total != p:
            problems.append("membership certificate does not expand to the polynomial")
    elif cmd == "quotient":
        ideal = session.ideal(args["ideal"]).to_context(ctx)
        gens = polys_from_json(out["generators"], ctx)
        if args.get("by") is not None:
            divisors = session.ideal(args["by"]).to_context(ctx).generators
        else:
            divisors = (poly_from_json(out["divisor"]["poly"], ctx),)
        prods = tuple(g * f for g in gens for f in divisors)
        if prods and not ideal_subset(IdealPresentation(ctx, prods), ideal):
            problems.append("quotient generator times divisor is outside the ideal")
    elif cmd in ("resolve", "reg"):
        _check_complex(out["minimal"], out["regularity"], ctx, problems)
    elif cmd == "noetherian":
        _check_system(out["system"], ctx, problems)
    elif cmd == "certify":
        _check_certify(report, session, problems)
    return problems


def _check_complex(cj, reg, ctx, problems):
    mats = [matrix_from_json(M, ctx) for M in cj["differentials"]]
    for k in range(len(mats) - 1):
        C = compose(mats[k], mats[k + 1], ctx)
        if any(e for row in C for e in row):
            problems.append(f"d_{k + 1} * d_{k + 2} is not zero")
    twists = cj["twists"]
    for k, M in enumerate(mats):
        for j, col_deg in enumerate(twists[k + 1]):
            for i, row_deg in enumerate(twists[k]):
                e = M[i][j] if i < len(M) and j < len(M[i]) else Polynomial.zero(ctx)
                if e and (not e.is_homogeneous() or e.degree() != col_deg - row_deg):
                    problems.append(f"entry ({i}, {j}) of d_{k + 1} has the wrong degree")
    inner = [d - k for k, tw in enumerate(twists) if k > 0 for d in tw]
    if (max(inner) + 1 if inner else 1) != reg:
        problems.append("regularity does not match the twists")


def _check_system(sj, ctx, problems):
    idx = {n: i for i, n in enumerate(ctx.names)}
    g = polys_from_json(sj["g"], ctx)
    jac = tuple(tuple(gi.diff(idx[v]) for v in sj["eta"]) for gi in g)
    if jac != tuple(tuple(r) for r in matrix_from_json(sj["jacobian"], ctx)):
        problems.append("stored Jacobian does not match g")
    data = JacobianData(poly_from_json(sj["H"], ctx),
                        tuple(tuple(r) for r in matrix_from_json(sj["Gamma"], ctx)), jac)
    if g and not adjugate_identity_holds(data, ctx):
        problems.append("Gamma * J != H * I")


def _check_certify(report, session, problems):
    args = report["arguments"]
    out = report["outputs"]
    inst = session.problem(args["instance"], args.get("nu"), args.get("c_inf"))
    ctx = inst.ctx
    _check_complex(out["resolution"], out["regularity"], context_from_json(out["projective_context"]), problems)
    b = out["bound"]
    if b["rho"] != max(b["entry_infinity"], b["entry_cohomology"]):
        problems.append("rho is not the maximum of the two entries")
    cj = out["certificate"]
    if cj is None:
        return
    cert = Certificate(tuple(polys_from_json(cj["Q"], ctx)), tuple(polys_from_json(cj["residual"], ctx)),
                       cj["rho"], cj["max_degree"])
    if not verify_certificate(inst, cert):
        problems.append("certificate identity fails")
    if cert.max_degree > cert.rho:
        problems.append("certificate exceeds its degree bound")


def verify_report(report_path: str, session_path: Optional[str] = None) -> Tuple[bool, List[str]]:
    with open(report_path, encoding="utf-8") as fh:
        try:
            report = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed report: {exc}") from None
    for key in ("command", "arguments", "context", "outputs", "inputs_digest"):
        if key not in report:
            raise ValueError(f"malformed report: missing {key!r}")
    session = load_session(session_path or report["arguments"]["session"])
    try:
        problems = _verify(report, session)
    except (KeyError, TypeError, IndexError, ParseError) as exc:
        raise ValueError(f"malformed report: {exc!r}") from None
    return not problems, problems


def cmd_verify(session, args):
    ok, problems = verify_report(_require(args, "report"), args.session)
    return ("verified" if ok else "rejected"), {"verified": ok, "problems": problems}, \
        (EXIT_OK if ok else EXIT_NEGATIVE), None


COMMANDS: Dict[str, Callable] = {
    "gb": cmd_gb,
    "nf": cmd_nf,
    "member": cmd_member,
    "radical-member": cmd_radical_member,
    "quotient": cmd_quotient,
    "saturate": cmd_saturate,
    "dim": cmd_dim,
    "hilbert": cmd_hilbert,
    "closure": cmd_closure,
    "resolve": cmd_resolve,
    "reg": cmd_reg,
    "noetherian": cmd_noetherian,
    "certify": cmd_certify,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--session", required=True, metavar="FILE")
    common.add_argument("--ideal", metavar="NAME")
    common.add_argument("--poly", metavar="EXPR")
    common.add_argument("--by", metavar="NAME", help="colon by a second session ideal")
    common.add_argument("--instance", metavar="NAME")
    common.add_argument("--rho", type=int, metavar="K")
    common.add_argument("--nu", type=int, metavar="K")
    common.add_argument("--c-inf", dest="c_inf", metavar="{none|bound|K}")
    common.add_argument("--seed", type=int, metavar="K")
    common.add_argument("--order", choices=["lex", "grevlex"], default="grevlex")
    common.add_argument("--report", metavar="FILE", help="report to check (verify only)")
    common.add_argument("--out", metavar="FILE")
    parser = _Parser(prog="noethercert", description="Exact ideal computations and membership certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _arguments_echo(args) -> dict:
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "command") and v is not None}
    if "c_inf" in echo:
        echo["c_inf"] = parse_c_inf(echo["c_inf"])
    return echo


def run_subcommand(argv: Sequence[str]) -> Tuple[dict, int]:
    """Run one invocation; return the report dict and the exit code."""
    start = time.perf_counter()
    command = argv[0] if argv else None
    report = {"schema_version": SCHEMA_VERSION, "command": command, "arguments": {}}
    try:
        args = build_parser().parse_args(list(argv))
        if args.command != "certify" and args.seed is None:
            args.seed = 0
        if args.c_inf is not None:
            parse_c_inf(args.c_inf)
        report["command"] = args.command
        report["arguments"] = echo = _arguments_echo(args)
        session = load_session(args.session)
        report["inputs_digest"] = _digest({"session": session.raw, "arguments": echo})
        status, outputs, code, ctx = COMMANDS[args.command](session, args)
        report["context"] = None if ctx is None else context_to_json(ctx)
        report["outputs"] = outputs
        report["status"] = status
    except (UsageError, SessionError, ParseError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        if isinstance(exc, (LinkageError, SplitRejected, GenericityError)):
            status, code = "failed", EXIT_NEGATIVE
        else:
            status, code = "usage error", EXIT_USAGE
        report.update(status=status, error=str(exc), outputs=None)
    except ResourceBound as exc:
        code = EXIT_RESOURCE
        report.update(status="resource bound", error=str(exc), outputs=None)
    except RecursionError as exc:
        code = EXIT_RESOURCE
        report.update(status="resource bound", error=f"recursion limit: {exc}", outputs=None)
    except Exception as exc:  # noqa: BLE001 - a crash is reported, never passed off as a negative
        traceback.print_exc(file=sys.stderr)
        code = EXIT_USAGE
        report.update(status="internal error", error=repr(exc), outputs=None)
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report, code


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help(sys.stderr)
        return EXIT_OK if argv else EXIT_USAGE
    report, code = run_subcommand(argv)
    if "error" in report:
        print(f"noethercert: {report['error']}", file=sys.stderr)
    text = dumps(report)
    sys.stdout.write(text)
    out = _out_path(argv)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def _out_path(argv: Sequence[str]) -> Optional[str]:
    for i, a in enumerate(argv):
        if a == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--out="):
            return a.split("=", 1)[1]
    return None


if __name__ == "__main__":
    sys.exit(main())
