"""Noetherian operators for unmixed ideals.

Given an unmixed ideal J with radical generators, pick p = codim J generic
combinations g of the radical generators, a coordinate split x = (zeta, eta)
with Jacobian determinant H = det dg/deta not vanishing on any component of
{g = 0}, and the adjugate Gamma of dg/deta.  The first-order operators

    D_i = sum_k Gamma[k][i] / H * d/d eta_k

are the coordinate fields d/dw_i of the local chart w = g(zeta, eta), so they
commute, and

    Ltilde_alpha = H^(2|alpha|) D^alpha,   alpha <= m,

have polynomial coefficients.  With gamma = (g_j^(m_j + 1)) and link
multipliers a_i generating (gamma : J), a polynomial phi lies in J exactly
when every Ltilde_alpha(a_i phi) vanishes on {g = 0}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DEFAULT_LIMITS, Limits, LinkageError, ResourceBound, SplitRejected
from .groebner import (
    IdealPresentation,
    buchberger,
    codimension,
    colon_ideal,
    contains,
    dimension,
    exact_quotient,
    radical_membership,
    same_ideal,
)
from .poly import Polynomial, VariableContext

MultiIndex = Tuple[int, ...]


class GenericityError(ValueError):
    """No acceptable generic combination was found within the retry cap."""


@dataclass(frozen=True)
class CoordinateSplit:
    eta: Tuple[int, ...]
    zeta: Tuple[int, ...]


@dataclass(frozen=True)
class JacobianData:
    H: Polynomial
    Gamma: Tuple[Tuple[Polynomial, ...], ...]
    jacobian: Tuple[Tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class DiffOperator:
    """sum over beta of coeff_beta * d^beta, with polynomial coefficients."""

    ctx: VariableContext
    terms: Tuple[Tuple[MultiIndex, Polynomial], ...]

    @classmethod
    def from_dict(cls, ctx, d: Dict[MultiIndex, Polynomial]) -> "DiffOperator":
        return cls(ctx, tuple(sorted(((b, c) for b, c in d.items() if c), key=lambda t: (sum(t[0]), t[0]))))

    @classmethod
    def identity(cls, ctx) -> "DiffOperator":
        return cls(ctx, (((0,) * ctx.nvars, Polynomial.one(ctx)),))

    def as_dict(self) -> Dict[MultiIndex, Polynomial]:
        return dict(self.terms)

    @property
    def order(self) -> int:
        return max((sum(b) for b, _ in self.terms), default=0)

    @property
    def coefficient_degree(self) -> int:
        return max((c.degree() for _, c in self.terms), default=-1)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_operator(self, p)

    def __str__(self):
        parts = []
        for beta, c in self.terms:
            d = "*".join(
                f"d{self.ctx.names[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(beta) if e
            )
            parts.append(f"({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class OperatorFamily:
    ctx: VariableContext
    g: Tuple[Polynomial, ...]
    m_powers: MultiIndex
    split: CoordinateSplit
    jac: JacobianData
    operators: Dict[MultiIndex, DiffOperator] = field(compare=False)

    def alphas(self) -> List[MultiIndex]:
        return sorted(self.operators, key=lambda a: (sum(a), a))


@dataclass(frozen=True)
class NoetherianSystem:
    ideal: IdealPresentation
    family: OperatorFamily
    multipliers: Tuple[Polynomial, ...]
    gamma: IdealPresentation

    @property
    def g_ideal(self) -> IdealPresentation:
        return IdealPresentation(self.ideal.ctx, self.family.g)


@dataclass
class MembershipReport:
    member: bool
    checks: List[Tuple[int, MultiIndex, bool]]
    witness: Optional[Tuple[int, MultiIndex, Polynomial]] = None


# ---------------------------------------------------------------------------
# small polynomial matrix helpers

def determinant(M: Sequence[Sequence[Polynomial]], ctx: VariableContext) -> Polynomial:
    n = len(M)
    if n == 0:
        return Polynomial.one(ctx)
    if n == 1:
        return M[0][0]
    total = Polynomial.zero(ctx)
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * determinant(minor, ctx)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(M: Sequence[Sequence[Polynomial]], ctx: VariableContext) -> List[List[Polynomial]]:
    n = len(M)
    if n == 1:
        return [[Polynomial.one(ctx)]]
    adj = [[Polynomial.zero(ctx)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1 :] for r, row in enumerate(M) if r != j]
            c = determinant(minor, ctx)
            adj[i][j] = c if (i + j) % 2 == 0 else -c
    return adj


def _matmul(A, B, ctx):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = Polynomial.zero(ctx)
            for t in range(k):
                if A[i][t] and B[t][j]:
                    s = s + A[i][t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def adjugate_identity_holds(jac: JacobianData, ctx: VariableContext) -> bool:
    """Gamma * (dG/deta) == H * Id."""
    p = len(jac.jacobian)
    prod_ = _matmul([list(r) for r in jac.Gamma], [list(r) for r in jac.jacobian], ctx)
    return all(prod_[i][j] == (jac.H if i == j else Polynomial.zero(ctx)) for i in range(p) for j in range(p))


# ---------------------------------------------------------------------------
# construction steps

def _affine_indices(ctx: VariableContext) -> List[int]:
    return [i for i in range(ctx.nvars) if i != ctx.hom_index]


def jacobian_data(g: Sequence[Polynomial], split: CoordinateSplit,
                  limits: Limits = DEFAULT_LIMITS) -> JacobianData:
    """H = det(dg/deta) and its adjugate; rejects H vanishing on a component of {g = 0}."""
    if len(split.eta) != len(g):
        raise ValueError("need as many eta variables as combinations")
    if not g:
        raise ValueError("empty combination list")
    ctx = g[0].ctx
    jac = [[gi.diff(v) for v in split.eta] for gi in g]
    H = determinant(jac, ctx)
    if not H:
        raise SplitRejected("Jacobian determinant is identically zero")
    Gamma = adjugate(jac, ctx)
    gI = IdealPresentation(ctx, tuple(g))
    if dimension(IdealPresentation(ctx, tuple(g) + (H,)), limits) >= dimension(gI, limits):
        raise SplitRejected(f"H = {H} vanishes on a whole component of the zero set")
    data = JacobianData(H, tuple(tuple(r) for r in Gamma), tuple(tuple(r) for r in jac))
    assert adjugate_identity_holds(data, ctx)
    return data


def find_split(g: Sequence[Polynomial], ctx: Optional[VariableContext] = None,
               limits: Limits = DEFAULT_LIMITS) -> Optional[Tuple[CoordinateSplit, JacobianData]]:
    """First accepted split, scanning eta-subsets in lexicographic order."""
    if ctx is None:
        ctx = g[0].ctx
    variables = _affine_indices(ctx)
    for eta in combinations(variables, len(g)):
        split = CoordinateSplit(tuple(eta), tuple(v for v in variables if v not in eta))
        try:
            return split, jacobian_data(g, split, limits)
        except SplitRejected:
            continue
    return None


def choose_generic_combinations(radical_gens: Sequence[Polynomial], p: int, seed: int = 0,
                                ctx: Optional[VariableContext] = None, retries: int = 25,
                                limits: Limits = DEFAULT_LIMITS) -> List[Polynomial]:
    """p random integer combinations of the radical generators, certified a posteriori.

    Accepted when the combinations cut out a codimension-p set on which some
    coordinate split has a Jacobian determinant vanishing on no component.
    """
    if ctx is None:
        ctx = radical_gens[0].ctx
    nvars = len(_affine_indices(ctx))
    if p > nvars:
        raise ValueError(f"codimension {p} exceeds the ambient dimension {nvars}")
    if p == 0:
        return []
    rad = IdealPresentation(ctx, tuple(radical_gens))
    if codimension(rad, limits) != p:
        raise ValueError(f"radical generators do not define a codimension-{p} set")
    rng = random.Random(seed)
    tried = []

    def acceptable(g):
        gI = IdealPresentation(ctx, tuple(g))
        if any(not x for x in g) or codimension(gI, limits) != p:
            return False
        return find_split(g, ctx, limits) is not None

    if len(rad.generators) == p and acceptable(list(rad.generators)):
        return list(rad.generators)
    for _ in range(retries):
        coeffs = [[rng.randint(-3, 3) for _ in rad.generators] for _ in range(p)]
        g = [sum((c * r for c, r in zip(row, rad.generators)), Polynomial.zero(ctx)) for row in coeffs]
        if acceptable(g):
            return g
        tried.append(coeffs)
    raise GenericityError(
        f"no acceptable combination of {len(rad.generators)} generators in {retries} tries "
        f"(last coefficients {tried[-1] if tried else None})"
    )


def minimal_powers(g: Sequence[Polynomial], J: IdealPresentation, cap: int = 16,
                   limits: Limits = DEFAULT_LIMITS) -> MultiIndex:
    """Smallest m_j with g_j^(m_j + 1) in J."""
    out = []
    for gj in g:
        if not radical_membership(gj, J, limits):
            raise ValueError(f"{gj} does not vanish on the variety of J")
        power = gj
        for m in range(cap + 1):
            if contains(J, power, limits):
                out.append(m)
                break
            power = power * gj
        else:
            raise ResourceBound(f"power cap {cap} exceeded for {gj}")
    return tuple(out)


# rational operators: (numerators by derivative multi-index, exponent K of the H denominator)
_RatOp = Tuple[Dict[MultiIndex, Polynomial], int]


def _apply_D_left(i: int, op: _RatOp, split: CoordinateSplit, jac: JacobianData) -> _RatOp:
    """D_i composed on the left of sum_beta c_beta / H^K d^beta."""
    nums, K = op
    H = jac.H
    out: Dict[MultiIndex, Polynomial] = {}

    def acc(beta, val):
        if val:
            cur = out.get(beta)
            val = val if cur is None else cur + val
            if val:
                out[beta] = val
            else:
                out.pop(beta, None)

    for kk, v in enumerate(split.eta):
        G = jac.Gamma[kk][i]
        if not G:
            continue
        dH = H.diff(v)
        for beta, c in nums.items():
            acc(beta, G * (c.diff(v) * H - c * dH * K))
            b2 = list(beta)
            b2[v] += 1
            acc(tuple(b2), G * c * H)
    K += 2
    # cancel common powers of H when every numerator allows it
    while K > 0 and out:
        try:
            out = {b: exact_quotient(c, H) for b, c in out.items()}
        except ArithmeticError:
            break
        K -= 1
    if not out:
        K = 0
    return out, K


def build_operator_family(g: Sequence[Polynomial], m: MultiIndex, split: CoordinateSplit,
                          jac: JacobianData, ctx: Optional[VariableContext] = None) -> OperatorFamily:
    """Ltilde_alpha = H^(2|alpha|) (Gamma/H d_eta)^alpha for all alpha <= m."""
    if ctx is None:
        ctx = g[0].ctx if g else jac.H.ctx
    n = ctx.nvars
    p = len(g)
    zero_beta = (0,) * n
    rat: Dict[MultiIndex, _RatOp] = {(0,) * p: ({zero_beta: Polynomial.one(ctx)}, 0)}
    alphas = sorted(product(*[range(mi + 1) for mi in m]), key=lambda a: (sum(a), a))
    for alpha in alphas:
        if alpha in rat:
            continue
        i = next(k for k, a in enumerate(alpha) if a)
        prev = list(alpha)
        prev[i] -= 1
        rat[alpha] = _apply_D_left(i, rat[tuple(prev)], split, jac)
    ops: Dict[MultiIndex, DiffOperator] = {}
    for alpha in alphas:
        nums, K = rat[alpha]
        need = 2 * sum(alpha)
        if K > need:
            raise ArithmeticError(f"coefficients of operator {alpha} do not clear to polynomials")
        scale = jac.H ** (need - K)
        ops[alpha] = DiffOperator.from_dict(ctx, {b: c * scale for b, c in nums.items()})
    return OperatorFamily(ctx, tuple(g), tuple(m), split, jac, ops)


def apply_operator(op: DiffOperator, p: Polynomial) -> Polynomial:
    out = Polynomial.zero(p.ctx)
    if not p:
        return out
    for beta, c in op.terms:
        q = p
        for v, e in enumerate(beta):
            if e:
                q = q.diff(v, e)
                if not q:
                    break
        if q:
            out = out + c * q
    return out


def link_multipliers(J: IdealPresentation, gamma: IdealPresentation,
                     limits: Limits = DEFAULT_LIMITS) -> List[Polynomial]:
    """Generators of (gamma : J), after checking gamma : (gamma : J) == J."""
    for gen in gamma.generators:
        if not contains(J, gen, limits):
            raise LinkageError("gamma is not contained in J")
    link = colon_ideal(gamma, J, limits)
    back = colon_ideal(gamma, link, limits)
    if not same_ideal(back, J, limits):
        raise LinkageError("double link does not return J (J is not unmixed, or gamma is unsuitable)")
    return list(link.generators)


def noetherian_membership(sys: NoetherianSystem, phi: Polynomial, stop_early: bool = True,
                          limits: Limits = DEFAULT_LIMITS) -> MembershipReport:
    """phi in J iff Ltilde_alpha(a_i phi) vanishes on {g = 0} for every i and alpha <= m."""
    g_ideal = sys.g_ideal
    gb = buchberger(g_ideal, limits=limits) if g_ideal.generators else None
    checks = []
    witness = None
    for i, a in enumerate(sys.multipliers):
        aphi = a * phi
        for alpha in sys.family.alphas():
            img = apply_operator(sys.family.operators[alpha], aphi)
            if not img:
                ok = True
            elif gb is not None and gb.contains(img):
                ok = True
            else:
                ok = radical_membership(img, g_ideal, limits)
            checks.append((i, alpha, ok))
            if not ok and witness is None:
                witness = (i, alpha, img)
                if stop_early:
                    return MembershipReport(False, checks, witness)
    return MembershipReport(witness is None, checks, witness)


def _binom(alpha: MultiIndex, gamma: MultiIndex) -> int:
    out = 1
    for a, c in zip(alpha, gamma):
        out *= comb(a, c)
    return out


def leibniz_companions(family: OperatorFamily, alpha: MultiIndex) -> Dict[MultiIndex, Tuple[int, DiffOperator]]:
    """gamma -> (binom(alpha, gamma), Ltilde_(alpha - gamma)) for gamma <= alpha."""
    out = {}
    for gamma in product(*[range(a + 1) for a in alpha]):
        rest = tuple(a - c for a, c in zip(alpha, gamma))
        out[gamma] = (_binom(alpha, gamma), family.operators[rest])
    return out


def leibniz_holds(family: OperatorFamily, alpha: MultiIndex, p: Polynomial, q: Polynomial) -> bool:
    lhs = apply_operator(family.operators[alpha], p * q)
    rhs = Polynomial.zero(p.ctx)
    for gamma, (c, M) in leibniz_companions(family, alpha).items():
        rhs = rhs + apply_operator(family.operators[gamma], p) * apply_operator(M, q) * c
    return lhs == rhs


def apply_first_order(family: OperatorFamily, i: int, f: Tuple[Polynomial, int]) -> Tuple[Polynomial, int]:
    """D_i applied to the rational function f[0] / H^f[1]; returns numerator and H-exponent."""
    num, K = f
    H = family.jac.H
    out = Polynomial.zero(num.ctx)
    for kk, v in enumerate(family.split.eta):
        G = family.jac.Gamma[kk][i]
        if G:
            out = out + G * (num.diff(v) * H - num * H.diff(v) * K)
    return out, K + 2


def commutator_vanishes(family: OperatorFamily, i: int, j: int, f: Polynomial) -> bool:
    """[D_i, D_j] f == 0 as rational functions."""
    a = apply_first_order(family, i, apply_first_order(family, j, (f, 0)))
    b = apply_first_order(family, j, apply_first_order(family, i, (f, 0)))
    return a[1] == b[1] and a[0] == b[0]


def build_noetherian_system(J: IdealPresentation, seed: int = 0, power_cap: int = 16,
                            retries: int = 25, limits: Limits = DEFAULT_LIMITS) -> NoetherianSystem:
    ctx = J.ctx
    if J.generators and buchberger(J, limits=limits).is_unit():
        raise ValueError("the unit ideal has no Noetherian operators")
    if not J.generators:
        split = CoordinateSplit((), tuple(_affine_indices(ctx)))
        jac = JacobianData(Polynomial.one(ctx), (), ())
        fam = build_operator_family([], (), split, jac, ctx)
        return NoetherianSystem(J, fam, (Polynomial.one(ctx),), IdealPresentation(ctx, ()))
    if J.radical_generators is None:
        raise ValueError("Noetherian operators need radical generators for the ideal")
    p = codimension(J, limits)
    g = choose_generic_combinations(list(J.radical_generators), p, seed, ctx, retries, limits)
    found = find_split(g, ctx, limits)
    if found is None:
        raise GenericityError("no coordinate split accepted")
    split, jac = found
    m = minimal_powers(g, J, power_cap, limits)
    fam = build_operator_family(g, m, split, jac, ctx)
    gamma = IdealPresentation(ctx, tuple(gj ** (mj + 1) for gj, mj in zip(g, m)))
    multipliers = link_multipliers(J, gamma, limits)
    return NoetherianSystem(J, fam, tuple(multipliers), gamma)
