"""Buchberger's algorithm and the ideal toolkit built on it.

Everything downstream (operator validation, Hilbert data, resolutions,
certificates) asks this module the exact questions: normal forms,
membership with cofactors, radical membership, colon ideals, saturation,
elimination and dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DEFAULT_LIMITS, Limits, ResourceBound
from .poly import GREVLEX, Monomial, MonomialOrder, Polynomial, VariableContext

Terms = Dict[Monomial, Fraction]


@dataclass(frozen=True)
class IdealPresentation:
    ctx: VariableContext
    generators: Tuple[Polynomial, ...]
    radical_generators: Optional[Tuple[Polynomial, ...]] = None

    def __post_init__(self):
        gens = tuple(g for g in self.generators if g)
        for g in gens:
            if g.ctx != self.ctx:
                raise ValueError("generator outside the ideal's context")
        object.__setattr__(self, "generators", gens)
        if self.radical_generators is not None:
            rad = tuple(g for g in self.radical_generators if g)
            object.__setattr__(self, "radical_generators", rad)

    @classmethod
    def of(cls, gens: Sequence[Polynomial], ctx: Optional[VariableContext] = None, radical=None):
        if ctx is None:
            ctx = gens[0].ctx
        return cls(ctx, tuple(gens), None if radical is None else tuple(radical))

    def radical_ideal(self) -> "IdealPresentation":
        if self.radical_generators is None:
            raise ValueError("no radical generators supplied")
        return IdealPresentation(self.ctx, self.radical_generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def to_context(self, ctx: VariableContext) -> "IdealPresentation":
        rad = self.radical_generators
        return IdealPresentation(
            ctx,
            tuple(g.to_context(ctx) for g in self.generators),
            None if rad is None else tuple(g.to_context(ctx) for g in rad),
        )


@dataclass(frozen=True)
class GroebnerBasis:
    ctx: VariableContext
    elements: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True
    # cofactors[k][i]: coefficient of input generator i in elements[k]
    cofactors: Optional[Tuple[Tuple[Polynomial, ...], ...]] = field(default=None, compare=False)
    generators: Optional[Tuple[Polynomial, ...]] = field(default=None, compare=False)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.elements)

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return not normal_form(p, self)


# ---------------------------------------------------------------------------
# raw dict kernels

def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quo(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _axpy(p: Terms, coef: Fraction, shift: Monomial, g: Terms):
    """p += coef * x^shift * g, in place."""
    for m, c in g.items():
        mm = tuple(x + y for x, y in zip(m, shift))
        s = p.get(mm, 0) + coef * c
        if s:
            p[mm] = s
        else:
            p.pop(mm, None)


def _divide(f: Terms, basis: Sequence[Terms], lms: Sequence[Monomial], key, want_quotients=False):
    """Full multivariate division; returns (remainder, quotients)."""
    p = dict(f)
    r: Terms = {}
    quots = [dict() for _ in basis] if want_quotients else None
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, lm in enumerate(lms):
            if _divides(lm, m):
                shift = _quo(m, lm)
                coef = -c / basis[i][lm]
                _axpy(p, coef, shift, basis[i])
                if quots is not None:
                    quots[i][shift] = quots[i].get(shift, 0) - coef
                break
        else:
            r[m] = c
            del p[m]
    return r, quots


def _spoly(f: Terms, g: Terms, lf: Monomial, lg: Monomial):
    lcm = _lcm(lf, lg)
    sf, sg = _quo(lcm, lf), _quo(lcm, lg)
    cf, cg = 1 / f[lf], -1 / g[lg]
    out: Terms = {}
    _axpy(out, cf, sf, f)
    _axpy(out, cg, sg, g)
    return out, (cf, sf), (cg, sg)


def _rep_axpy(rep: List[Terms], coef, shift, other: List[Terms]):
    for a, b in zip(rep, other):
        _axpy(a, coef, shift, b)


# ---------------------------------------------------------------------------
# Buchberger

def _update(pairs, polys, lms, active, h):
    """Gebauer-Moeller pair update after appending polys[h]."""
    lh = lms[h]
    cands = [i for i in active]
    kept = []
    for idx, i in enumerate(cands):
        l_ih = _lcm(lms[i], lh)
        if _coprime(lms[i], lh):
            kept.append(i)
            continue
        rest = cands[idx + 1 :]
        if any(_divides(_lcm(lms[j], lh), l_ih) for j in rest):
            continue
        if any(_divides(_lcm(lms[j], lh), l_ih) for j in kept):
            continue
        kept.append(i)
    new_pairs = [(i, h) for i in kept if not _coprime(lms[i], lh)]
    old = []
    for (i, j) in pairs:
        l_ij = _lcm(lms[i], lms[j])
        if _divides(lh, l_ij) and _lcm(lms[i], lh) != l_ij and _lcm(lms[j], lh) != l_ij:
            continue
        old.append((i, j))
    active = [i for i in active if not _divides(lh, lms[i])] + [h]
    return old + new_pairs, active


def _buchberger_raw(gens: Sequence[Terms], nvars: int, order: MonomialOrder, track: bool, limits: Limits):
    key = order.key
    polys: List[Terms] = []
    lms: List[Monomial] = []
    reps: List[List[Terms]] = []
    active: List[int] = []
    pairs: List[Tuple[int, int]] = []
    ngens = len(gens)

    def add(f: Terms, rep):
        lm = max(f, key=key)
        lc = f[lm]
        f = {m: c / lc for m, c in f.items()}
        if rep is not None:
            rep = [{m: c / lc for m, c in r.items()} for r in rep]
        if sum(lm) > limits.max_degree:
            raise ResourceBound(f"Groebner basis degree exceeded {limits.max_degree}")
        polys.append(f)
        lms.append(lm)
        reps.append(rep)
        return len(polys) - 1

    # inter-reduce inputs against each other as they come in
    for k, g in enumerate(gens):
        rep = None
        if track:
            rep = [dict() for _ in range(ngens)]
            rep[k] = {(0,) * nvars: Fraction(1)}
        f, quots = _divide(g, [polys[i] for i in active], [lms[i] for i in active], key, track)
        if not f:
            continue
        if track:
            for q, i in zip(quots, active):
                for shift, c in q.items():
                    _rep_axpy(rep, -c, shift, reps[i])
        h = add(f, rep)
        pairs, active = _update(pairs, polys, lms, active, h)

    steps = 0
    while pairs:
        steps += 1
        if steps > limits.max_steps:
            raise ResourceBound(f"Buchberger exceeded {limits.max_steps} S-pair steps")
        best = min(
            range(len(pairs)),
            key=lambda t: (sum(_lcm(lms[pairs[t][0]], lms[pairs[t][1]])),
                           key(_lcm(lms[pairs[t][0]], lms[pairs[t][1]])), pairs[t]),
        )
        i, j = pairs.pop(best)
        s, (ci, si), (cj, sj) = _spoly(polys[i], polys[j], lms[i], lms[j])
        if not s:
            continue
        red = [polys[a] for a in active]
        f, quots = _divide(s, red, [lms[a] for a in active], key, track)
        if not f:
            continue
        rep = None
        if track:
            rep = [dict() for _ in range(ngens)]
            _rep_axpy(rep, ci, si, reps[i])
            _rep_axpy(rep, cj, sj, reps[j])
            for q, a in zip(quots, active):
                for shift, c in q.items():
                    _rep_axpy(rep, -c, shift, reps[a])
        h = add(f, rep)
        pairs, active = _update(pairs, polys, lms, active, h)

    # minimal basis, then tail-reduce
    minimal = []
    for i in sorted(active, key=lambda a: key(lms[a])):
        if not any(_divides(lms[j], lms[i]) for j in minimal):
            minimal.append(i)
    out_polys, out_reps = [], []
    for i in minimal:
        others = [j for j in minimal if j != i]
        f, quots = _divide(polys[i], [polys[j] for j in others], [lms[j] for j in others], key, track)
        rep = None
        if track:
            rep = [dict(r) for r in reps[i]]
            for q, j in zip(quots, others):
                for shift, c in q.items():
                    _rep_axpy(rep, -c, shift, reps[j])
        out_polys.append(f)
        out_reps.append(rep)
    # tail reduction against the original minimal set keeps leading terms fixed
    perm = sorted(range(len(out_polys)), key=lambda a: key(max(out_polys[a], key=key)), reverse=True)
    return [out_polys[a] for a in perm], [out_reps[a] for a in perm]


@lru_cache(maxsize=512)
def _cached_gb(gens: Tuple[Polynomial, ...], order: MonomialOrder, track: bool, limits: Limits):
    ctx = gens[0].ctx
    raw = [g._terms for g in gens]
    polys, reps = _buchberger_raw(raw, ctx.nvars, order, track, limits)
    elements = tuple(Polynomial._raw(ctx, f) for f in polys)
    cof = None
    if track:
        cof = tuple(tuple(Polynomial._raw(ctx, {m: c for m, c in r.items() if c}) for r in rep) for rep in reps)
    return GroebnerBasis(ctx, elements, order, True, cof, gens)


def buchberger(ideal, order: MonomialOrder = GREVLEX, *, track: bool = False,
               limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
    """Reduced Groebner basis of an ideal (or a sequence of generators).

    With ``track=True`` the basis carries cofactors expressing every element
    in the input generators.
    """
    if isinstance(ideal, IdealPresentation):
        gens, ctx = ideal.generators, ideal.ctx
    else:
        gens = tuple(g for g in ideal if g)
        ctx = ideal[0].ctx if ideal else None
    gens = tuple(gens)
    if not gens:
        return GroebnerBasis(ctx, (), order, True, (), ())
    return _cached_gb(gens, order, track, limits)


def groebner_basis(ideal, order: MonomialOrder = GREVLEX, **kw) -> GroebnerBasis:
    return buchberger(ideal, order, **kw)


def normal_form(p: Polynomial, basis: GroebnerBasis) -> Polynomial:
    if basis.ctx is not None and p.ctx != basis.ctx:
        raise ValueError("context mismatch")
    if not basis.elements:
        return p
    key = basis.order.key
    lms = [g.leading_monomial(basis.order) for g in basis.elements]
    r, _ = _divide(p._terms, [g._terms for g in basis.elements], lms, key)
    return Polynomial._raw(p.ctx, r)


def divide_with_quotients(p: Polynomial, basis: GroebnerBasis):
    """Return ``(quotients, remainder)`` of division by the basis elements."""
    key = basis.order.key
    lms = [g.leading_monomial(basis.order) for g in basis.elements]
    r, quots = _divide(p._terms, [g._terms for g in basis.elements], lms, key, True)
    return [Polynomial._raw(p.ctx, q) for q in quots], Polynomial._raw(p.ctx, r)


def is_groebner_basis(elements: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    elems = [g for g in elements if g]
    if not elems:
        return True
    key = order.key
    raw = [g._terms for g in elems]
    lms = [max(f, key=key) for f in raw]
    for i, j in combinations(range(len(raw)), 2):
        if _coprime(lms[i], lms[j]):
            continue
        s, _, _ = _spoly(raw[i], raw[j], lms[i], lms[j])
        r, _ = _divide(s, raw, lms, key)
        if r:
            return False
    return True


def is_reduced_basis(basis: GroebnerBasis) -> bool:
    order = basis.order
    lms = basis.leading_monomials()
    for k, g in enumerate(basis.elements):
        if g.leading_coeff(order) != 1:
            return False
        for m in g.monomials():
            if any(j != k and _divides(lj, m) for j, lj in enumerate(lms)):
                return False
    return True


# ---------------------------------------------------------------------------
# ideal operations

def membership_certificate(p: Polynomial, ideal: IdealPresentation,
                           limits: Limits = DEFAULT_LIMITS) -> Optional[List[Polynomial]]:
    """Cofactors ``h`` with ``p == sum(h[i] * gens[i])``, or ``None`` if p is not a member."""
    gens = ideal.generators
    if not p:
        return [Polynomial.zero(ideal.ctx) for _ in gens]
    if not gens:
        return None
    gb = buchberger(ideal, GREVLEX, track=True, limits=limits)
    quots, rem = divide_with_quotients(p, gb)
    if rem:
        return None
    h = [Polynomial.zero(ideal.ctx) for _ in gens]
    for q, cof in zip(quots, gb.cofactors):
        if not q:
            continue
        for i, c in enumerate(cof):
            if c:
                h[i] = h[i] + q * c
    total = Polynomial.zero(ideal.ctx)
    for hi, g in zip(h, gens):
        total = total + hi * g
    assert total == p, "cofactor tracking produced an invalid certificate"
    return h


def contains(ideal: IdealPresentation, p: Polynomial, limits: Limits = DEFAULT_LIMITS) -> bool:
    if not p:
        return True
    if not ideal.generators:
        return False
    return buchberger(ideal, limits=limits).contains(p)


def is_unit_ideal(ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    return bool(ideal.generators) and buchberger(ideal, limits=limits).is_unit()


def ideal_subset(I: IdealPresentation, J: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    return all(contains(J, g, limits) for g in I.generators)


def same_ideal(I: IdealPresentation, J: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    return ideal_subset(I, J, limits) and ideal_subset(J, I, limits)


def reduced(ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """Same ideal, generated by its reduced grevlex basis."""
    gb = buchberger(ideal, limits=limits)
    return IdealPresentation(ideal.ctx, gb.elements, ideal.radical_generators)


def eliminate(gens: Sequence[Polynomial], ctx_ext: VariableContext, drop: Sequence[int],
              ctx: VariableContext, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """Intersect the ideal of ``gens`` (in ``ctx_ext``) with the subring without ``drop``."""
    drop = list(drop)
    keep = [i for i in range(ctx_ext.nvars) if i not in drop]
    order = MonomialOrder("grevlex", perm=drop + keep, elim=len(drop))
    gb = buchberger(tuple(gens), order, limits=limits)
    out = [g.to_context(ctx) for g in gb.elements if not any(g.uses_variable(i) for i in drop)]
    return reduced(IdealPresentation(ctx, tuple(out)), limits)


def intersect(I: IdealPresentation, J: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    ctx = I.ctx
    if not I.generators or not J.generators:
        return IdealPresentation(ctx, ())
    t = ctx.fresh_name("t")
    ext = ctx.extend(t)
    T = Polynomial.var(ext, ext.nvars - 1)
    gens = [T * g.to_context(ext) for g in I.generators]
    gens += [(1 - T) * g.to_context(ext) for g in J.generators]
    return eliminate(gens, ext, [ext.nvars - 1], ctx, limits)


def exact_quotient(p: Polynomial, f: Polynomial) -> Polynomial:
    """p / f, raising if f does not divide p."""
    order = GREVLEX
    lm = f.leading_monomial(order)
    r, quots = _divide(p._terms, [f._terms], [lm], order.key, True)
    if r:
        raise ArithmeticError(f"{f} does not divide {p}")
    return Polynomial._raw(p.ctx, quots[0])


def quotient(I: IdealPresentation, f: Polynomial, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """(I : f) = {p : p*f in I}."""
    if not f:
        raise ValueError("quotient by the zero polynomial")
    ctx = I.ctx
    if contains(I, f, limits):
        return IdealPresentation(ctx, (Polynomial.one(ctx),))
    inter = intersect(I, IdealPresentation(ctx, (f,)), limits)
    gens = tuple(exact_quotient(g, f) for g in inter.generators)
    return reduced(IdealPresentation(ctx, gens), limits)


def colon_ideal(I: IdealPresentation, J: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """(I : J) as the intersection of (I : f) over the generators f of J."""
    if not J.generators:
        raise ValueError("colon by the zero ideal")
    result = None
    for f in J.generators:
        q = quotient(I, f, limits)
        result = q if result is None else intersect(result, q, limits)
    return result


def saturation(I: IdealPresentation, f: Polynomial, limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """(I : f^infinity), by eliminating t from I + (1 - t f)."""
    if not f:
        raise ValueError("saturation by the zero polynomial")
    ctx = I.ctx
    t = ctx.fresh_name("t")
    ext = ctx.extend(t)
    T = Polynomial.var(ext, ext.nvars - 1)
    gens = [g.to_context(ext) for g in I.generators] + [1 - T * f.to_context(ext)]
    return eliminate(gens, ext, [ext.nvars - 1], ctx, limits)


def radical_membership(p: Polynomial, ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Rabinowitsch: p lies in the radical iff 1 is in I + (1 - t p)."""
    ctx = ideal.ctx
    t = ctx.fresh_name("t")
    ext = ctx.extend(t)
    T = Polynomial.var(ext, ext.nvars - 1)
    gens = tuple(g.to_context(ext) for g in ideal.generators) + (1 - T * p.to_context(ext),)
    gb = buchberger(tuple(g for g in gens if g), limits=limits)
    return gb.is_unit()


def sum_ideal(*ideals: IdealPresentation) -> IdealPresentation:
    ctx = ideals[0].ctx
    return IdealPresentation(ctx, tuple(g for I in ideals for g in I.generators))


def power_ideal(F: Sequence[Polynomial], nu: int, ctx: VariableContext) -> IdealPresentation:
    """Generators of (F)^nu: all products of nu generators."""
    from itertools import combinations_with_replacement

    if nu == 0:
        return IdealPresentation(ctx, (Polynomial.one(ctx),))
    gens = []
    for combo in combinations_with_replacement(range(len(F)), nu):
        p = Polynomial.one(ctx)
        for i in combo:
            p = p * F[i]
        gens.append(p)
    return IdealPresentation(ctx, tuple(gens))


def independent_sets(lms: Sequence[Monomial], nvars: int, variables: Optional[Sequence[int]] = None):
    """Largest variable subsets U such that no monomial is supported inside U."""
    from itertools import combinations as comb

    variables = list(range(nvars)) if variables is None else list(variables)
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(len(variables), -1, -1):
        found = [set(U) for U in comb(variables, size)
                 if not any(s <= set(U) for s in supports)]
        if found:
            return size, found
    return -1, []


def dimension(ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> int:
    """Krull dimension of the quotient ring; -1 for the unit ideal."""
    ctx = ideal.ctx
    if not ideal.generators:
        return ctx.nvars
    gb = buchberger(ideal, limits=limits)
    if gb.is_unit():
        return -1
    size, _ = independent_sets(gb.leading_monomials(), ctx.nvars)
    return size


def codimension(ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> int:
    return ideal.ctx.nvars - dimension(ideal, limits)


def homogeneous_closure(J: IdealPresentation, hom_var: Optional[int] = None,
                        limits: Limits = DEFAULT_LIMITS) -> IdealPresentation:
    """Ideal of the projective closure: homogenize a degree-compatible basis.

    ``J`` must live in a context containing the homogenizing variable without
    using it.
    """
    ctx = J.ctx
    h = ctx.hom_index if hom_var is None else hom_var
    if h is None:
        raise ValueError("context has no homogenizing variable")
    if any(g.uses_variable(h) for g in J.generators):
        raise ValueError("homogenizing variable occurs in the affine ideal")
    if not J.generators:
        return IdealPresentation(ctx, ())
    gb = buchberger(J, GREVLEX, limits=limits)
    gens = tuple(g.homogenize(g.degree(), h) for g in gb.elements)
    return IdealPresentation(ctx, gens)
