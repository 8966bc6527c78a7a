"""Graded free resolutions of S/J by Schreyer's algorithm.

Module elements are dicts ``(component, exponents) -> Fraction``.  The
syzygies of a Groebner basis, read off from the division of its
S-polynomials, form a Groebner basis for the induced Schreyer order, so
the whole resolution is obtained without any further Buchberger runs.
Generators are sorted lexicographically by leading monomial at every step,
which forces the resolution to stop after at most ``nvars`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import DEFAULT_LIMITS, Limits, ResourceBound
from .groebner import IdealPresentation, buchberger
from .hilbert import hilbert_numerator, series_coefficients
from .linalg import rank
from .poly import GREVLEX, Monomial, MonomialOrder, Polynomial, monomials_of_degree

ModMono = Tuple[int, Monomial]
ModElem = Dict[ModMono, Fraction]
Matrix = List[List[Polynomial]]


@dataclass(frozen=True)
class GradedFreeModule:
    twists: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)


@dataclass(frozen=True)
class GradedComplex:
    """F_0 <- F_1 <- ... ; ``differentials[k-1]`` is the matrix of F_k -> F_{k-1}.

    Column j of a differential holds the image of the j-th basis vector.
    """

    ctx: object
    modules: Tuple[GradedFreeModule, ...]
    differentials: Tuple[Tuple[Tuple[Polynomial, ...], ...], ...]

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def twists(self) -> List[List[int]]:
        return [list(M.twists) for M in self.modules]

    def betti_numbers(self) -> List[int]:
        return [M.rank for M in self.modules]

    def betti_table(self) -> Dict[Tuple[int, int], int]:
        """(k, d) -> number of summands S(-d) in F_k."""
        table: Dict[Tuple[int, int], int] = {}
        for k, M in enumerate(self.modules):
            for d in M.twists:
                table[(k, d)] = table.get((k, d), 0) + 1
        return table


# ---------------------------------------------------------------------------
# Schreyer

def _elem_lead(f: ModElem, key):
    return max(f, key=key)


def _module_divide(f: ModElem, basis: Sequence[ModElem], leads: Sequence[ModMono], key):
    """Division in a free module; returns (remainder, quotients as exps->coef dicts)."""
    p = dict(f)
    quots: List[Dict[Monomial, Fraction]] = [dict() for _ in basis]
    rem: ModElem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        comp, e = m
        for i, (lc_comp, le) in enumerate(leads):
            if lc_comp == comp and all(a <= b for a, b in zip(le, e)):
                shift = tuple(a - b for a, b in zip(e, le))
                coef = c / basis[i][(lc_comp, le)]
                for (gc, ge), gcoef in basis[i].items():
                    mm = (gc, tuple(a + b for a, b in zip(ge, shift)))
                    s = p.get(mm, 0) - coef * gcoef
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
                quots[i][shift] = quots[i].get(shift, 0) + coef
                break
        else:
            rem[m] = c
            del p[m]
    return rem, quots


def _make_key(prev_key, leads: Sequence[ModMono]):
    cache = {}

    def key(m: ModMono):
        k = cache.get(m)
        if k is None:
            i, e = m
            c, le = leads[i]
            k = (prev_key((c, tuple(a + b for a, b in zip(le, e)))), -i)
            cache[m] = k
        return k

    return key


def _syzygies(gens: List[ModElem], key_prev, twists: List[int], nvars: int):
    """Schreyer syzygies of a module Groebner basis (already sorted)."""
    leads = [_elem_lead(g, key_prev) for g in gens]
    key = _make_key(key_prev, leads)
    syz: List[ModElem] = []
    syz_twists: List[int] = []
    for i in range(len(gens)):
        ci, ei = leads[i]
        cands: List[Tuple[Monomial, int]] = []
        for j in range(i + 1, len(gens)):
            cj, ej = leads[j]
            if cj != ci:
                continue
            lcm = tuple(max(a, b) for a, b in zip(ei, ej))
            cands.append((tuple(a - b for a, b in zip(lcm, ei)), j))
        # keep pairs whose leading monomial m_ij e_i is minimal under divisibility
        kept: List[Tuple[Monomial, int]] = []
        for mij, j in sorted(cands, key=lambda t: (sum(t[0]), t[1])):
            if any(all(a <= b for a, b in zip(mk, mij)) for mk, _ in kept):
                continue
            kept.append((mij, j))
        for mij, j in sorted(kept, key=lambda t: t[1]):
            cj, ej = leads[j]
            lcm = tuple(a + b for a, b in zip(ei, mij))
            mji = tuple(a - b for a, b in zip(lcm, ej))
            ai = 1 / gens[i][leads[i]]
            aj = 1 / gens[j][leads[j]]
            s: ModElem = {}
            for (gc, ge), gcoef in gens[i].items():
                mm = (gc, tuple(a + b for a, b in zip(ge, mij)))
                s[mm] = s.get(mm, 0) + ai * gcoef
            for (gc, ge), gcoef in gens[j].items():
                mm = (gc, tuple(a + b for a, b in zip(ge, mji)))
                v = s.get(mm, 0) - aj * gcoef
                if v:
                    s[mm] = v
                else:
                    s.pop(mm, None)
            rem, quots = _module_divide(s, gens, leads, key_prev)
            if rem:
                raise AssertionError("input to the syzygy step is not a Groebner basis")
            vec: ModElem = {(i, mij): ai, (j, mji): -aj}
            for l, q in enumerate(quots):
                for e, c in q.items():
                    v = vec.get((l, e), 0) - c
                    if v:
                        vec[(l, e)] = v
                    else:
                        vec.pop((l, e), None)
            syz.append(vec)
            syz_twists.append(twists[i] + sum(mij))
    return syz, syz_twists, key


def _sort_for_schreyer(gens: List[ModElem], twists: List[int], key):
    """Order by component of the leading term, then lex-descending exponents."""
    leads = [_elem_lead(g, key) for g in gens]
    idx = sorted(range(len(gens)), key=lambda a: (leads[a][0], tuple(-x for x in leads[a][1])))
    return [gens[a] for a in idx], [twists[a] for a in idx]


def _to_matrix(elems: List[ModElem], nrows: int, ctx) -> Matrix:
    cols = []
    for f in elems:
        col = [dict() for _ in range(nrows)]
        for (c, e), coef in f.items():
            col[c][e] = coef
        cols.append([Polynomial._raw(ctx, d) for d in col])
    return [[cols[j][i] for j in range(len(elems))] for i in range(nrows)]


def _freeze(mats: List[Matrix]):
    return tuple(tuple(tuple(row) for row in M) for M in mats)


def schreyer_resolution(J: IdealPresentation, order: MonomialOrder = GREVLEX,
                        limits: Limits = DEFAULT_LIMITS) -> GradedComplex:
    """Graded free resolution of S/J (generally not minimal)."""
    if not J.is_homogeneous():
        raise ValueError("resolution needs a homogeneous ideal")
    ctx = J.ctx
    n = ctx.nvars
    if not J.generators:
        return GradedComplex(ctx, (GradedFreeModule((0,)),), ())
    gb = buchberger(J, order, limits=limits)
    if gb.is_unit():
        raise ValueError("resolution of the unit ideal")
    base = order.key
    key0 = lambda m: base(m[1])
    level = [{(0, e): c for e, c in g.items()} for g in gb.elements]
    twists = [g.degree() for g in gb.elements]
    key = key0
    modules = [GradedFreeModule((0,))]
    mats: List[Matrix] = []
    nrows = 1
    while level:
        if len(modules) > limits.max_resolution_length:
            raise ResourceBound("resolution length cap exceeded")
        level, twists = _sort_for_schreyer(level, twists, key)
        modules.append(GradedFreeModule(tuple(twists)))
        mats.append(_to_matrix(level, nrows, ctx))
        nrows = len(level)
        level, twists, key = _syzygies(level, key, twists, n)
    return GradedComplex(ctx, tuple(modules), _freeze(mats))


# ---------------------------------------------------------------------------
# minimalization and regularity

def _find_unit(mats: List[Matrix]):
    for k, M in enumerate(mats):
        ncols = len(M[0]) if M else 0
        for j in range(ncols):
            for i in range(len(M)):
                e = M[i][j]
                if e and e.is_constant():
                    return k, i, j
    return None


def minimalize(c: GradedComplex) -> GradedComplex:
    """Cancel unit entries pairwise until no differential entry is a nonzero constant."""
    ctx = c.ctx
    twists = [list(M.twists) for M in c.modules]
    mats: List[Matrix] = [[list(row) for row in M] for M in c.differentials]
    while True:
        hit = _find_unit(mats)
        if hit is None:
            break
        k, i, j = hit
        M = mats[k]
        unit = M[i][j].constant_value()
        col_j = [M[r][j] for r in range(len(M))]
        row_i = M[i]
        new = []
        for r in range(len(M)):
            if r == i:
                continue
            row = []
            for s in range(len(row_i)):
                if s == j:
                    continue
                e = M[r][s]
                if col_j[r] and row_i[s]:
                    e = e - col_j[r] * row_i[s] * (1 / unit)
                row.append(e)
            new.append(row)
        mats[k] = new
        if k + 1 < len(mats):
            mats[k + 1] = [row for r, row in enumerate(mats[k + 1]) if r != j]
        if k >= 1:
            mats[k - 1] = [[e for s, e in enumerate(row) if s != i] for row in mats[k - 1]]
        del twists[k + 1][j]
        del twists[k][i]
        # a matrix with zero rows still records its column count via the twist list
    while len(twists) > 1 and not twists[-1]:
        twists.pop()
        mats.pop()
    mats = [_pad(M, len(twists[k]), len(twists[k + 1]), ctx) for k, M in enumerate(mats)]
    return GradedComplex(ctx, tuple(GradedFreeModule(tuple(t)) for t in twists), _freeze(mats))


def _pad(M: Matrix, nrows: int, ncols: int, ctx) -> Matrix:
    if len(M) == nrows and all(len(r) == ncols for r in M):
        return M
    zero = Polynomial.zero(ctx)
    return [[zero] * ncols for _ in range(nrows)] if not M or not M[0] else M


def regularity(c: GradedComplex) -> int:
    """max over k >= 1 of (twist - k) + 1; 1 when the complex has no F_1."""
    vals = [d - k for k, M in enumerate(c.modules) if k >= 1 for d in M.twists]
    return (max(vals) if vals else 0) + 1


def minimal_resolution(J: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> GradedComplex:
    return minimalize(schreyer_resolution(J, limits=limits))


# ---------------------------------------------------------------------------
# checks

def compose(A: Sequence[Sequence[Polynomial]], B: Sequence[Sequence[Polynomial]], ctx) -> Matrix:
    rows = len(A)
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            s = Polynomial.zero(ctx)
            for k in range(inner):
                if A[i][k] and B[k][j]:
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def is_complex(c: GradedComplex) -> bool:
    """Consecutive differentials compose to zero."""
    for A, B in zip(c.differentials, c.differentials[1:]):
        if any(e for row in compose(A, B, c.ctx) for e in row):
            return False
    return True


def twists_consistent(c: GradedComplex) -> bool:
    """Entry (i, j) of d_k is homogeneous of degree d_k^j - d_{k-1}^i, or zero."""
    for k, M in enumerate(c.differentials, start=1):
        src, dst = c.modules[k].twists, c.modules[k - 1].twists
        for i, row in enumerate(M):
            for j, e in enumerate(row):
                if e and (not e.is_homogeneous() or e.degree() != src[j] - dst[i]):
                    return False
    return True


def euler_numerator(c: GradedComplex) -> List[int]:
    """sum_k (-1)^k sum_i t^(d_k^i): the Hilbert-series numerator the complex predicts."""
    top = max((d for M in c.modules for d in M.twists), default=0)
    out = [0] * (top + 1)
    for k, M in enumerate(c.modules):
        for d in M.twists:
            out[d] += (-1) ** k
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _graded_piece(M: Sequence[Sequence[Polynomial]], src: Sequence[int], dst: Sequence[int], t: int, n: int):
    rows_index = {}
    for i, d in enumerate(dst):
        if t - d >= 0:
            for m in monomials_of_degree(n, t - d):
                rows_index[(i, m)] = len(rows_index)
    cols = []
    for j, d in enumerate(src):
        if t - d < 0:
            continue
        for m in monomials_of_degree(n, t - d):
            col = {}
            for i in range(len(dst)):
                e = M[i][j]
                if e:
                    for mm, coef in e.mul_monomial(m).items():
                        col[rows_index[(i, mm)]] = coef
            cols.append(col)
    return cols, len(rows_index)


def _rank_of_columns(cols, nrows: int) -> int:
    if not cols or not nrows:
        return 0
    rows = [[col.get(r, 0) for r in range(nrows)] for col in cols]
    return rank(rows, nrows)


def check_exactness(c: GradedComplex, J: IdealPresentation, max_degree: int) -> bool:
    """Rank-nullity in every internal degree up to ``max_degree``.

    Confirms im(d_1) = J degreewise and ker(d_k) = im(d_{k+1}) for k >= 1.
    """
    n = c.ctx.nvars
    lms = buchberger(J).leading_monomials() if J.generators else []
    hf = series_coefficients(hilbert_numerator(lms, n), n, max_degree)
    mods = [M.twists for M in c.modules]
    for t in range(max_degree + 1):
        ranks = []
        for k, M in enumerate(c.differentials, start=1):
            cols, nrows = _graded_piece(M, mods[k], mods[k - 1], t, n)
            ranks.append(_rank_of_columns(cols, nrows))
        ranks.append(0)
        dim_S = len(list(monomials_of_degree(n, t)))
        image_of_d1 = ranks[0] if c.differentials else 0
        if image_of_d1 != dim_S - hf[t]:
            return False
        for k in range(1, len(mods)):
            dim_Fk = sum(len(list(monomials_of_degree(n, t - d))) for d in mods[k] if t >= d)
            if dim_Fk - ranks[k - 1] != ranks[k]:
                return False
    return True
