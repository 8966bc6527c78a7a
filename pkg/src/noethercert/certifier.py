"""Degree-bounded membership certificates Phi = sum F_j Q_j + J_V.

The pipeline computes the projective closure X of V, its regularity and
reduced degree, a Noetherian system for J_V, a membership-based surrogate
for the size hypothesis, the degree bound

    rho = max(deg Phi + nu * d^c_inf * deg X_red, (d - 1) * min(m, n + 1) + reg X),

and finally solves for Q_j with deg(F_j Q_j) <= rho by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import DEFAULT_LIMITS, Limits, ResourceBound
from .groebner import (
    IdealPresentation,
    buchberger,
    contains,
    homogeneous_closure,
    membership_certificate,
    power_ideal,
    sum_ideal,
)
from .hilbert import HilbertData, hilbert_data
from .linalg import solve
from .noetherian import NoetherianSystem, apply_operator, build_noetherian_system
from .poly import GREVLEX, Polynomial, VariableContext, monomials_up_to
from .resolution import GradedComplex, minimalize, regularity, schreyer_resolution

CInf = Union[str, int]


@dataclass(frozen=True)
class ProblemInstance:
    J_V: IdealPresentation
    F: Tuple[Polynomial, ...]
    Phi: Polynomial
    nu: int = 1
    c_inf: CInf = "bound"  # "bound", "none" or an explicit integer

    def __post_init__(self):
        object.__setattr__(self, "F", tuple(self.F))
        ctx = self.J_V.ctx
        if ctx.hom_index is not None:
            raise ValueError("problem instances live in an affine context")
        if any(f.ctx != ctx for f in self.F) or self.Phi.ctx != ctx:
            raise ValueError("instance polynomials must share the ideal's context")
        if not self.F:
            raise ValueError("need at least one F_j")
        if self.d < 1:
            raise ValueError("max deg F_j must be at least 1")
        if self.nu < 1:
            raise ValueError("nu must be a positive integer")
        if not (self.c_inf in ("bound", "none") or (isinstance(self.c_inf, int) and self.c_inf >= 0)):
            raise ValueError(f"bad c_inf mode {self.c_inf!r}")

    @property
    def ctx(self) -> VariableContext:
        return self.J_V.ctx

    @property
    def d(self) -> int:
        return max(f.degree() for f in self.F)

    @property
    def m(self) -> int:
        return len(self.F)

    @property
    def deg_phi(self) -> int:
        return max(self.Phi.degree(), 0)

    def radical_ideal(self) -> IdealPresentation:
        if not self.J_V.generators:
            return IdealPresentation(self.ctx, ())
        if self.J_V.radical_generators is None:
            raise ValueError("the instance's ideal has no radical generators")
        return self.J_V.radical_ideal()


@dataclass(frozen=True)
class DegreeBoundReport:
    rho: int
    entry_infinity: int
    entry_cohomology: int
    reg: int
    deg_X_red: int
    n: int
    c_inf: Optional[int]
    d: int
    m: int


@dataclass(frozen=True)
class Certificate:
    Q: Tuple[Polynomial, ...]
    residual: Tuple[Polynomial, ...]  # coefficients of the J_V generators
    rho: int
    max_degree: int

    @property
    def within_bound(self) -> bool:
        return self.max_degree <= self.rho


@dataclass
class HypothesisVerdict:
    passed: bool
    checks: List[Tuple[int, Tuple[int, ...], bool]]
    first_failure: Optional[Tuple[int, Tuple[int, ...], Polynomial]] = None


@dataclass
class CertifyResult:
    instance: ProblemInstance
    closure: IdealPresentation
    resolution: GradedComplex
    minimal_resolution: GradedComplex
    reg: int
    reg_nonminimal: int
    hilbert_X: HilbertData
    hilbert_X_red: HilbertData
    system: NoetherianSystem
    hypothesis: HypothesisVerdict
    bound: DegreeBoundReport
    certificate: Optional[Certificate]
    homogeneous_check: Optional[bool]
    status: str
    extra: Dict[str, object] = field(default_factory=dict)


def degree_bound(instance: ProblemInstance, reg: int, hd: HilbertData) -> DegreeBoundReport:
    """Evaluate the two-entry bound; ``hd`` describes X_red in projective space."""
    d, m = instance.d, instance.m
    n = hd.projective_dimension
    if instance.c_inf == "none":
        c = None
        entry_inf = instance.deg_phi
    else:
        c = min(m, n) if instance.c_inf == "bound" else int(instance.c_inf)
        entry_inf = instance.deg_phi + instance.nu * d**c * hd.projective_degree
    entry_coh = (d - 1) * min(m, n + 1) + reg
    return DegreeBoundReport(max(entry_inf, entry_coh), entry_inf, entry_coh, reg,
                             hd.projective_degree, n, c, d, m)


def hypothesis_check(instance: ProblemInstance, sys: NoetherianSystem,
                     limits: Limits = DEFAULT_LIMITS) -> HypothesisVerdict:
    """Each Ltilde_alpha(a_i Phi) must lie in (F)^nu + radical(J_V).

    This is stronger than the size condition it stands in for: a pass
    licenses the bound, a failure is inconclusive.
    """
    ctx = instance.ctx
    target = sum_ideal(power_ideal(instance.F, instance.nu, ctx), instance.radical_ideal())
    checks = []
    first = None
    for i, a in enumerate(sys.multipliers):
        aphi = a * instance.Phi
        for alpha in sys.family.alphas():
            img = apply_operator(sys.family.operators[alpha], aphi)
            ok = contains(target, img, limits)
            checks.append((i, alpha, ok))
            if not ok and first is None:
                first = (i, alpha, img)
    return HypothesisVerdict(first is None, checks, first)


def solve_bounded(instance: ProblemInstance, rho: int,
                  limits: Limits = DEFAULT_LIMITS) -> Optional[Certificate]:
    """Find Q_j with deg Q_j <= rho - deg F_j and Phi - sum F_j Q_j in J_V."""
    ctx = instance.ctx
    if rho < instance.d:
        raise ValueError(f"rho = {rho} is below max deg F_j = {instance.d}")
    J = instance.J_V
    gb = buchberger(J, GREVLEX, limits=limits) if J.generators else None
    nf = (lambda p: gb.normal_form(p)) if gb is not None else (lambda p: p)
    unknowns = []
    columns = []
    for j, F in enumerate(instance.F):
        for mono in monomials_up_to(ctx.nvars, rho - F.degree()):
            unknowns.append((j, mono))
            columns.append(nf(F.mul_monomial(mono)))
    target = nf(instance.Phi)
    rows_index: Dict[tuple, int] = {}
    for p in columns + [target]:
        for m in p.monomials():
            rows_index.setdefault(m, len(rows_index))
    nrows, ncols = len(rows_index), len(columns)
    if nrows * (ncols + 1) > limits.max_matrix_cells:
        raise ResourceBound(f"linear system {nrows}x{ncols} exceeds the size cap")
    A = [[Fraction(0)] * ncols for _ in range(nrows)]
    for c, p in enumerate(columns):
        for m, v in p.items():
            A[rows_index[m]][c] = v
    b = [Fraction(0)] * nrows
    for m, v in target.items():
        b[rows_index[m]] = v
    x = solve(A, b, limits) if nrows else [Fraction(0)] * ncols
    if x is None:
        return None
    Q = [dict() for _ in instance.F]
    for (j, mono), v in zip(unknowns, x):
        if v:
            Q[j][mono] = v
    Qs = tuple(Polynomial(ctx, q) for q in Q)
    residual_poly = instance.Phi - sum((F * q for F, q in zip(instance.F, Qs)), Polynomial.zero(ctx))
    res = membership_certificate(residual_poly, J, limits)
    if res is None:
        raise AssertionError("solver returned Q whose residual is not in J_V")
    max_deg = max((F.degree() + q.degree() for F, q in zip(instance.F, Qs) if q), default=-1)
    cert = Certificate(Qs, tuple(res), rho, max_deg)
    assert verify_certificate(instance, cert)
    return cert


def verify_certificate(instance: ProblemInstance, cert: Certificate) -> bool:
    """Exact expansion of Phi == sum F_j Q_j + sum r_k J_k, plus the degree audit."""
    ctx = instance.ctx
    if len(cert.Q) != instance.m or len(cert.residual) != len(instance.J_V.generators):
        return False
    total = Polynomial.zero(ctx)
    for F, q in zip(instance.F, cert.Q):
        total = total + F * q
    for g, r in zip(instance.J_V.generators, cert.residual):
        total = total + g * r
    if total != instance.Phi:
        return False
    max_deg = max((F.degree() + q.degree() for F, q in zip(instance.F, cert.Q) if q), default=-1)
    return max_deg == cert.max_degree


def projective_context(ctx: VariableContext, hom_name: str = "x0") -> VariableContext:
    return ctx.with_hom(hom_name)


def homogeneous_equivalence_check(instance: ProblemInstance, cert: Certificate, rho: int,
                                  closure: Optional[IdealPresentation] = None,
                                  hom_name: str = "x0", limits: Limits = DEFAULT_LIMITS) -> bool:
    """Is sum f_j q_j - x0^(rho - deg Phi) phi in the ideal of the closure X?"""
    P = closure.ctx if closure is not None else projective_context(instance.ctx, hom_name)
    h = P.hom_index
    if closure is None:
        closure = homogeneous_closure(instance.J_V.to_context(P), h, limits)
    d = instance.d
    lhs = Polynomial.zero(P)
    for F, q in zip(instance.F, cert.Q):
        if not q:
            continue
        Fp, qp = F.to_context(P), q.to_context(P)
        if F.degree() + q.degree() > rho:
            return False
        if q.degree() <= rho - d:
            lhs = lhs + Fp.homogenize(d, h) * qp.homogenize(rho - d, h)
        else:
            # deg F_j < d: pad the product instead of the factors
            lhs = lhs + Fp.homogenize(F.degree(), h) * qp.homogenize(rho - F.degree(), h)
    phi = instance.Phi.to_context(P)
    rhs = phi
    if phi:
        dphi = phi.degree()
        if dphi > rho:
            return False
        rhs = phi.homogenize(dphi, h) * Polynomial.var(P, h) ** (rho - dphi)
    return contains(closure, lhs - rhs, limits)


def certify(instance: ProblemInstance, seed: int = 0, rho: Optional[int] = None,
            hom_name: str = "x0", limits: Limits = DEFAULT_LIMITS) -> CertifyResult:
    """Run the whole pipeline; ``rho`` overrides the computed bound when given."""
    ctx = instance.ctx
    P = projective_context(ctx, hom_name)
    h = P.hom_index
    closure = homogeneous_closure(instance.J_V.to_context(P), h, limits)
    res = schreyer_resolution(closure, limits=limits)
    mres = minimalize(res)
    reg = regularity(mres)
    hd_X = hilbert_data(closure, limits)
    red_closure = homogeneous_closure(instance.radical_ideal().to_context(P), h, limits)
    hd_red = hilbert_data(red_closure, limits)
    sys = build_noetherian_system(instance.J_V, seed=seed, limits=limits)
    hyp = hypothesis_check(instance, sys, limits)
    bound = degree_bound(instance, reg, hd_red)
    target_rho = bound.rho if rho is None else rho
    cert = solve_bounded(instance, max(target_rho, instance.d), limits)
    hom_ok = None
    if cert is not None:
        hom_ok = homogeneous_equivalence_check(instance, cert, cert.rho, closure, limits=limits)
    if cert is None:
        status = "infeasible"
    elif hyp.passed:
        status = "certified"
    else:
        status = "unconditional solve"
    return CertifyResult(instance, closure, res, mres, reg, regularity(res), hd_X, hd_red,
                         sys, hyp, bound, cert, hom_ok, status)
