"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is a map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, tied to a :class:`VariableContext`.
Values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


class ContextError(ValueError):
    """Operands live in different variable contexts."""


@dataclass(frozen=True)
class VariableContext:
    names: Tuple[str, ...]
    hom_index: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if self.hom_index is not None and not 0 <= self.hom_index < len(self.names):
            raise ValueError(f"hom_index {self.hom_index} out of range")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    @property
    def hom_name(self) -> Optional[str]:
        return None if self.hom_index is None else self.names[self.hom_index]

    def affine(self) -> "VariableContext":
        """The context with the homogenizing variable removed."""
        if self.hom_index is None:
            return self
        names = self.names[: self.hom_index] + self.names[self.hom_index + 1 :]
        return VariableContext(names)

    def with_hom(self, name: str = "x0") -> "VariableContext":
        """Prepend a homogenizing variable (index 0)."""
        if self.hom_index is not None:
            return self
        while name in self.names:
            name += "_"
        return VariableContext((name,) + self.names, 0)

    def extend(self, *names: str) -> "VariableContext":
        """Append fresh variables; used for Rabinowitsch and elimination tricks."""
        return VariableContext(self.names + tuple(names), self.hom_index)

    def fresh_name(self, base: str = "t") -> str:
        name = base
        while name in self.names:
            name += "_"
        return name


class MonomialOrder:
    """A monomial order given as a sort key (larger key = larger monomial).

    ``perm`` lists variable indices from most to least significant.  When
    ``elim`` is positive the total degree in the first ``elim`` variables of
    ``perm`` is compared first, which makes the order an elimination order
    for those variables.
    """

    KINDS = ("lex", "grevlex", "deglex")

    def __init__(self, kind: str = "grevlex", perm: Optional[Sequence[int]] = None, elim: int = 0):
        if kind == "graded-lex":
            kind = "deglex"
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.perm = None if perm is None else tuple(perm)
        self.elim = elim
        self.key = self._build_key()

    def _build_key(self):
        perm = self.perm
        kind = self.kind
        if perm is None:
            if kind == "lex":
                base = lambda e: e
            elif kind == "deglex":
                base = lambda e: (sum(e), e)
            else:
                base = lambda e: (sum(e), tuple(-x for x in reversed(e)))
        else:
            rev = perm[::-1]
            if kind == "lex":
                base = lambda e: tuple(e[i] for i in perm)
            elif kind == "deglex":
                base = lambda e: (sum(e), tuple(e[i] for i in perm))
            else:
                base = lambda e: (sum(e), tuple(-e[i] for i in rev))
        if not self.elim:
            return base
        block = list(range(self.elim)) if perm is None else list(perm[: self.elim])
        return lambda e: (sum(e[i] for i in block), base(e))

    @property
    def graded(self) -> bool:
        return self.kind != "lex" and not self.elim

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.kind, self.perm, self.elim) == (other.kind, other.perm, other.elim)
        )

    def __hash__(self):
        return hash((self.kind, self.perm, self.elim))

    def __repr__(self):
        extra = ""
        if self.perm is not None:
            extra += f", perm={self.perm}"
        if self.elim:
            extra += f", elim={self.elim}"
        return f"MonomialOrder({self.kind!r}{extra})"


GREVLEX = MonomialOrder("grevlex")


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``m1`` is smaller, equal or larger than ``m2``."""
    if len(m1) != len(m2):
        raise ContextError("monomials of different length")
    return order.compare(m1, m2)


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VariableContext, terms: Optional[Dict[Monomial, Scalar]] = None):
        self.ctx = ctx
        clean = {}
        if terms:
            n = ctx.nvars
            for m, c in terms.items():
                if c:
                    m = tuple(m)
                    if len(m) != n or any(e < 0 for e in m):
                        raise ValueError(f"bad exponent vector {m} for {n} variables")
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx: VariableContext, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.ctx = ctx
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls._raw(ctx, {})

    @classmethod
    def constant(cls, ctx, c: Scalar):
        return cls(ctx, {(0,) * ctx.nvars: c})

    @classmethod
    def one(cls, ctx):
        return cls.constant(ctx, 1)

    @classmethod
    def var(cls, ctx, v: Union[int, str]):
        i = ctx.index(v) if isinstance(v, str) else v
        e = [0] * ctx.nvars
        e[i] = 1
        return cls._raw(ctx, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ctx, exps: Sequence[int], coeff: Scalar = 1):
        return cls(ctx, {tuple(exps): coeff})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def monomials(self) -> Iterable[Monomial]:
        return self._terms.keys()

    def coeff(self, m: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.ctx.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def uses_variable(self, i: int) -> bool:
        return any(m[i] for m in self._terms)

    def variables_used(self) -> set:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        return self * (1 / self.leading_coeff(order))

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ctx != other.ctx:
            raise ContextError(f"context mismatch: {self.ctx.names} vs {other.ctx.names}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ctx, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.ctx)
            return Polynomial._raw(self.ctx, {m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _add_exp(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Monomial, coeff: Scalar = 1) -> "Polynomial":
        coeff = Fraction(coeff)
        if not coeff:
            return Polynomial.zero(self.ctx)
        return Polynomial._raw(self.ctx, {_add_exp(m, exps): c * coeff for m, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ctx, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and projective bookkeeping -----------------------------
    def diff(self, var: Union[int, str], times: int = 1) -> "Polynomial":
        i = self.ctx.index(var) if isinstance(var, str) else var
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e < times:
                continue
            f = 1
            for k in range(times):
                f *= e - k
            mm = list(m)
            mm[i] = e - times
            out[tuple(mm)] = c * f
        return Polynomial._raw(self.ctx, out)

    def homogenize(self, target_deg: int, hom_var: Optional[int] = None) -> "Polynomial":
        h = self.ctx.hom_index if hom_var is None else hom_var
        if h is None:
            raise ValueError("no homogenizing variable")
        if self.uses_variable(h):
            raise ValueError("homogenizing variable already occurs in the polynomial")
        if target_deg < self.degree():
            raise ValueError(f"target degree {target_deg} below degree {self.degree()}")
        out = {}
        for m, c in self._terms.items():
            mm = list(m)
            mm[h] = target_deg - sum(m)
            out[tuple(mm)] = c
        return Polynomial._raw(self.ctx, out)

    def dehomogenize(self, hom_var: Optional[int] = None) -> "Polynomial":
        h = self.ctx.hom_index if hom_var is None else hom_var
        if h is None:
            raise ValueError("no homogenizing variable")
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            mm = list(m)
            mm[h] = 0
            mm = tuple(mm)
            s = out.get(mm, 0) + c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return Polynomial._raw(self.ctx, out)

    def to_context(self, ctx: VariableContext) -> "Polynomial":
        """Re-express in another context, matching variables by name."""
        if ctx == self.ctx:
            return self
        idx = []
        for i, name in enumerate(self.ctx.names):
            if name in ctx.names:
                idx.append(ctx.names.index(name))
            elif self.uses_variable(i):
                raise ContextError(f"variable {name!r} not present in target context")
            else:
                idx.append(None)
        out = {}
        for m, c in self._terms.items():
            mm = [0] * ctx.nvars
            for i, e in enumerate(m):
                if e:
                    mm[idx[i]] = e
            out[tuple(mm)] = c
        return Polynomial._raw(ctx, out)

    def substitute(self, values: Dict[int, Scalar]) -> "Polynomial":
        """Substitute numbers for some variables (result stays in this context)."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            mm = list(m)
            for i, v in values.items():
                if mm[i]:
                    c = c * Fraction(v) ** mm[i]
                    mm[i] = 0
            mm = tuple(mm)
            s = out.get(mm, 0) + c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return Polynomial._raw(self.ctx, out)

    # -- printing --------------------------------------------------------
    def to_expr(self, order: MonomialOrder = GREVLEX) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.ctx.names, m) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"Polynomial({self.to_expr()!r})"


# Functional spellings of the core operations.

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def homogenize(p: Polynomial, target_deg: int, hom_var: int) -> Polynomial:
    return p.homogenize(target_deg, hom_var)


def dehomogenize(p: Polynomial, hom_var: int) -> Polynomial:
    return p.dehomogenize(hom_var)


def partial_derivative(p: Polynomial, var: Union[int, str]) -> Polynomial:
    return p.diff(var)


def monomials_of_degree(nvars: int, deg: int, allowed: Optional[Sequence[int]] = None):
    """All exponent vectors of total degree ``deg`` (support restricted to ``allowed``)."""
    idx = list(range(nvars)) if allowed is None else list(allowed)

    def rec(k, remaining):
        if k == len(idx) - 1:
            yield (remaining,)
            return
        for e in range(remaining, -1, -1):
            for rest in rec(k + 1, remaining - e):
                yield (e,) + rest

    if not idx:
        if deg == 0:
            yield (0,) * nvars
        return
    for part in rec(0, deg):
        m = [0] * nvars
        for i, e in zip(idx, part):
            m[i] = e
        yield tuple(m)


def monomials_up_to(nvars: int, deg: int, allowed: Optional[Sequence[int]] = None):
    for d in range(deg + 1):
        yield from monomials_of_degree(nvars, d, allowed)
