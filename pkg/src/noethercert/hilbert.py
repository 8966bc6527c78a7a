"""Hilbert series and Hilbert polynomials from initial monomial ideals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import List, Sequence, Tuple

from .errors import DEFAULT_LIMITS, Limits
from .groebner import IdealPresentation, buchberger
from .poly import GREVLEX, Monomial


@dataclass(frozen=True)
class HilbertData:
    hilbert_polynomial: Tuple[Fraction, ...]  # ascending coefficients in the degree variable
    projective_dimension: int
    projective_degree: int
    numerator: Tuple[int, ...]  # HS(S/I) = numerator(t) / (1 - t)^nvars
    nvars: int

    @property
    def krull_dimension(self) -> int:
        return self.projective_dimension + 1

    def evaluate(self, s: int) -> Fraction:
        return sum((c * s**k for k, c in enumerate(self.hilbert_polynomial)), Fraction(0))


def _minimalize(gens: Sequence[Monomial]) -> List[Monomial]:
    out: List[Monomial] = []
    for m in sorted(set(gens), key=sum):
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return out


def _poly_sub(a: List[int], b: List[int]) -> List[int]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def hilbert_numerator(gens: Sequence[Monomial], nvars: int) -> List[int]:
    """K(t) with HS(S/M) = K(t)/(1-t)^nvars for the monomial ideal M = (gens)."""
    memo = {}

    def rec(ms: Tuple[Monomial, ...]) -> List[int]:
        if ms in memo:
            return memo[ms]
        if not ms:
            return [1]
        # pairwise coprime generators: product formula
        supports = [{i for i, e in enumerate(m) if e} for m in ms]
        if all(not (supports[i] & supports[j]) for i in range(len(ms)) for j in range(i)):
            res = [1]
            for m in ms:
                d = sum(m)
                res = _poly_mul(res, [1] + [0] * (d - 1) + [-1] if d else [0])
            memo[ms] = res
            return res
        last, rest = ms[-1], ms[:-1]
        colon = tuple(_minimalize([tuple(max(a - b, 0) for a, b in zip(m, last)) for m in rest]))
        shifted = [0] * sum(last) + rec(colon)
        res = _poly_sub(rec(rest), shifted)
        memo[ms] = res
        return res

    mins = _minimalize(gens)
    # larger generators last keeps colon ideals small
    mins.sort(key=lambda m: (sum(m), m))
    return rec(tuple(mins))


def series_coefficients(numerator: Sequence[int], nvars: int, upto: int) -> List[int]:
    """Coefficients of numerator(t)/(1-t)^nvars up to t^upto."""
    out = []
    for t in range(upto + 1):
        total = 0
        for i, c in enumerate(numerator):
            if c and i <= t:
                total += c * comb(t - i + nvars - 1, nvars - 1) if nvars else (c if i == t else 0)
        out.append(total)
    return out


def _binomial_poly(shift: int, k: int) -> List[Fraction]:
    """Coefficients of C(s + shift, k) as a polynomial in s."""
    res = [Fraction(1)]
    for r in range(k):
        lin = [Fraction(shift - r), Fraction(1)]
        nxt = [Fraction(0)] * (len(res) + 1)
        for i, a in enumerate(res):
            nxt[i] += a * lin[0]
            nxt[i + 1] += a * lin[1]
        res = nxt
    f = factorial(k)
    return [c / f for c in res]


def hilbert_data_from_monomials(lms: Sequence[Monomial], nvars: int) -> HilbertData:
    K = hilbert_numerator(lms, nvars)
    if all(c == 0 for c in K):
        return HilbertData((), -1, 0, tuple(K), nvars)
    Q = list(K)
    D = nvars
    while D > 0 and sum(Q) == 0:
        # synthetic division by (1 - t)
        q = []
        acc = 0
        for c in Q[:-1]:
            acc += c
            q.append(acc)
        Q = q
        D -= 1
    degree = sum(Q)
    hp = [Fraction(0)] * max(D, 1)
    if D >= 1:
        for i, qi in enumerate(Q):
            if qi:
                for k, c in enumerate(_binomial_poly(D - 1 - i, D - 1)):
                    hp[k] += qi * c
    while len(hp) > 1 and hp[-1] == 0:
        hp.pop()
    return HilbertData(tuple(hp), D - 1, degree, tuple(K), nvars)


def hilbert_data(ideal: IdealPresentation, limits: Limits = DEFAULT_LIMITS) -> HilbertData:
    if not ideal.is_homogeneous():
        raise ValueError("Hilbert data needs a homogeneous ideal")
    n = ideal.ctx.nvars
    if not ideal.generators:
        return hilbert_data_from_monomials([], n)
    gb = buchberger(ideal, GREVLEX, limits=limits)
    return hilbert_data_from_monomials(gb.leading_monomials(), n)
