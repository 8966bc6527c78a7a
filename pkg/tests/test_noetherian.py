"""Noetherian operators: construction, holomorphy, linkage and membership."""

import random
from itertools import product

import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import P, ideal, poly_strategy, ring
from corpus import NOETHER_CORPUS
from oracles import monomials_upto, sympy_symbols, to_sympy
from noethercert.errors import LinkageError, SplitRejected
from noethercert.groebner import contains, radical_membership
from noethercert.noetherian import (
    CoordinateSplit,
    DiffOperator,
    adjugate_identity_holds,
    apply_operator,
    build_noetherian_system,
    build_operator_family,
    choose_generic_combinations,
    commutator_vanishes,
    find_split,
    jacobian_data,
    leibniz_companions,
    leibniz_holds,
    link_multipliers,
    minimal_powers,
    noetherian_membership,
)
from noethercert.poly import Polynomial

R2 = ring("x", "y")
R3 = ring("x", "y", "t")
X = ring("x")


# -- generic combinations, powers, splits --------------------------------------

def test_regular_sequence_kept_unchanged():
    assert choose_generic_combinations([P(R2, "x"), P(R2, "y")], 2) == [P(R2, "x"), P(R2, "y")]


def test_principal_combination_has_codimension_one():
    g = choose_generic_combinations([P(R2, "x*(y-1)"), P(R2, "x*(y+1)")], 1, seed=3)
    assert len(g) == 1 and contains(ideal(R2, ["x"]), g[0])


def test_too_large_codimension_rejected():
    with pytest.raises(ValueError):
        choose_generic_combinations([P(R2, "x"), P(R2, "y")], 3)


def test_combinations_are_seeded():
    R = ring("x", "y", "z")
    rad = [P(R, s) for s in ["x^2 - y", "x*y - z", "y^2 - x*z"]]
    a = choose_generic_combinations(rad, 2, seed=7)
    assert a == choose_generic_combinations(rad, 2, seed=7)
    assert all(contains(ideal(R, ["x^2 - y", "x*y - z", "y^2 - x*z"]), g) for g in a)


@pytest.mark.parametrize("g,J,expected", [
    (["x"], ["x^2"], (1,)),
    (["x", "y"], ["x^2", "x*y", "y^2"], (1, 1)),
    (["x"], ["x"], (0,)),
    (["x"], ["x^4", "y*x"], (3,)),
])
def test_minimal_powers(g, J, expected):
    assert minimal_powers([P(R2, s) for s in g], ideal(R2, J)) == expected


def test_jacobian_identity_split():
    jac = jacobian_data([P(R2, "x"), P(R2, "y")], CoordinateSplit((0, 1), ()))
    assert jac.H == Polynomial.one(R2)
    assert jac.Gamma == ((Polynomial.one(R2), Polynomial.zero(R2)), (Polynomial.zero(R2), Polynomial.one(R2)))


def test_jacobian_parabola_accepted():
    g = [P(R3, "x^2 - t"), P(R3, "y")]
    jac = jacobian_data(g, CoordinateSplit((0, 1), (2,)))
    assert jac.H == P(R3, "2*x")
    assert jac.Gamma == ((P(R3, "1"), P(R3, "0")), (P(R3, "0"), P(R3, "2*x")))
    assert adjugate_identity_holds(jac, R3)


def test_jacobian_rejects_h_vanishing_on_component():
    with pytest.raises(SplitRejected):
        jacobian_data([P(R2, "x^2"), P(R2, "y")], CoordinateSplit((0, 1), ()))


def test_find_split_scans_lexicographically():
    split, jac = find_split([P(R3, "x^2 - t")], R3)
    assert split.eta == (0,)   # eta = x works: H = 2x avoids the component
    split, _ = find_split([P(R3, "t - x*y")], R3)
    assert split.eta == (0,)


# -- operator families -----------------------------------------------------------

def test_first_order_family_over_x():
    g = [P(X, "x")]
    split, jac = find_split(g, X)
    fam = build_operator_family(g, (1,), split, jac)
    assert fam.operators[(0,)] == DiffOperator.identity(X)
    assert fam.operators[(1,)].as_dict() == {(1,): Polynomial.one(X)}


def test_parabola_family():
    g = [P(R3, "x^2 - t"), P(R3, "y")]
    split, jac = find_split(g, R3)
    fam = build_operator_family(g, (1, 1), split, jac)
    expected = {
        (0, 0): {(0, 0, 0): "1"},
        (1, 0): {(1, 0, 0): "2*x"},
        (0, 1): {(0, 1, 0): "4*x^2"},
        (1, 1): {(1, 1, 0): "8*x^3"},
    }
    for alpha, terms in expected.items():
        op = fam.operators[alpha]
        assert {b: c for b, c in op.as_dict().items()} == {b: P(R3, c) for b, c in terms.items()}
        assert op.order == sum(alpha)


@pytest.mark.parametrize("op_terms,p,expected", [
    ({(1, 0, 0): "1"}, "x^2*y", "2*x*y"),
    ({(1, 0, 0): "2*x"}, "x^2 - t", "4*x^2"),
    ({(1, 1, 0): "8*x^3", (0, 0, 0): "t"}, "0", "0"),
])
def test_apply_operator(op_terms, p, expected):
    op = DiffOperator.from_dict(R3, {b: P(R3, c) for b, c in op_terms.items()})
    assert apply_operator(op, P(R3, p)) == P(R3, expected)


def _sympy_operator_images(family, f):
    """H^(2|alpha|) D^alpha f via sympy rational functions."""
    ctx = family.ctx
    syms = sympy_symbols(ctx)
    eta = [syms[i] for i in family.split.eta]
    G = sp.Matrix([[to_sympy(gi, syms) for gi in family.g]]).T.jacobian(eta) if family.g else sp.Matrix()
    H = G.det() if family.g else sp.Integer(1)
    Gamma = G.adjugate() if family.g else sp.Matrix()
    D = [lambda e, i=i: sum(Gamma[k, i] / H * sp.diff(e, eta[k]) for k in range(len(eta)))
         for i in range(len(eta))]
    out = {}
    for alpha in family.alphas():
        e = to_sympy(f, syms)
        for i in reversed(range(len(alpha))):
            for _ in range(alpha[i]):
                e = D[i](e)
        out[alpha] = sp.cancel(H ** (2 * sum(alpha)) * e)
    return out, syms


SYSTEMS = [(name, ring(*v), J, rad) for name, v, J, rad in NOETHER_CORPUS]
SYSTEMS.append(("twisted_ci", ring("x", "y", "z"), ["x^2 - y", "x*y - z", "y^2 - x*z"],
                ["x^2 - y", "x*y - z", "y^2 - x*z"]))


@pytest.fixture(scope="module", params=SYSTEMS, ids=[s[0] for s in SYSTEMS])
def system(request):
    name, ctx, J, rad = request.param
    return build_noetherian_system(ideal(ctx, J, rad), seed=0)


def test_operators_match_sympy_rational_expansion(system):
    fam = system.family
    ctx = fam.ctx
    rng = random.Random(1)
    samples = [Polynomial.monomial(ctx, m) for m in monomials_upto(ctx.nvars, 3)]
    samples += [Polynomial(ctx, {m: rng.randint(-4, 4) for m in monomials_upto(ctx.nvars, 4)}) for _ in range(3)]
    for f in samples:
        expected, syms = _sympy_operator_images(fam, f)
        for alpha, op in fam.operators.items():
            val = expected[alpha]
            assert val.is_polynomial(*syms)
            assert sp.expand(to_sympy(apply_operator(op, f), syms) - val) == 0


def test_system_invariants(system):
    fam = system.family
    ctx = fam.ctx
    J = system.ideal
    assert all(contains(J, g ** (m + 1)) for g, m in zip(fam.g, fam.m_powers))
    if fam.g:
        assert adjugate_identity_holds(fam.jac, ctx)
    for alpha, op in fam.operators.items():
        assert op.order == sum(alpha)
    assert all(set(beta[v] for v in fam.split.zeta) <= {0}
               for op in fam.operators.values() for beta, _ in op.terms)


def test_first_order_operators_commute(system):
    fam = system.family
    for i, j in product(range(len(fam.g)), repeat=2):
        for m in monomials_upto(fam.ctx.nvars, 4):
            assert commutator_vanishes(fam, i, j, Polynomial.monomial(fam.ctx, m))


def test_membership_agrees_with_groebner(system):
    ctx, J = system.ideal.ctx, system.ideal
    top = max(g.degree() for g in J.generators) + 2
    for m in monomials_upto(ctx.nvars, top):
        phi = Polynomial.monomial(ctx, m)
        assert noetherian_membership(system, phi).member == contains(J, phi), phi


def test_members_pass_every_check(system):
    J = system.ideal
    rng = random.Random(5)
    ctx = J.ctx
    for _ in range(5):
        phi = sum((Polynomial(ctx, {m: rng.randint(-3, 3) for m in monomials_upto(ctx.nvars, 2)}) * g
                   for g in J.generators), Polynomial.zero(ctx))
        rep = noetherian_membership(system, phi, stop_early=False)
        assert rep.member and all(ok for _, _, ok in rep.checks)


def test_leibniz_on_random_pairs(system):
    fam = system.family
    rng = random.Random(11)
    mons = monomials_upto(fam.ctx.nvars, 3)
    for _ in range(10):
        p = Polynomial(fam.ctx, {m: rng.randint(-3, 3) for m in rng.sample(mons, 4)})
        q = Polynomial(fam.ctx, {m: rng.randint(-3, 3) for m in rng.sample(mons, 4)})
        for alpha in fam.alphas():
            assert leibniz_holds(fam, alpha, p, q)


# -- linkage and membership examples ----------------------------------------------------

def test_link_multipliers_examples():
    J = ideal(R2, ["x^2", "x*y", "y^2"])
    a = link_multipliers(J, ideal(R2, ["x^2", "y^2"]))
    assert set(a) == {P(R2, "x"), P(R2, "y")}
    assert link_multipliers(ideal(R2, ["x^2", "y^2"]), ideal(R2, ["x^2", "y^2"])) == [P(R2, "1")]


def test_mixed_ideal_fails_linkage():
    # (x^2, xy) = (x) cap (x^2, y) has an embedded point
    with pytest.raises(LinkageError):
        link_multipliers(ideal(R2, ["x^2", "x*y"]), ideal(R2, ["x^2"]))


def test_membership_examples():
    sys1 = build_noetherian_system(ideal(R2, ["x^2"], ["x"]))
    rep = noetherian_membership(sys1, P(R2, "x*y"))
    assert not rep.member and rep.witness[1] == (1,) and rep.witness[2] == P(R2, "y")
    assert not radical_membership(rep.witness[2], ideal(R2, ["x"]))

    sys2 = build_noetherian_system(ideal(R2, ["x^2", "x*y", "y^2"], ["x", "y"]))
    assert not noetherian_membership(sys2, P(R2, "x")).member
    assert noetherian_membership(sys2, P(R2, "x^2")).member
    assert noetherian_membership(sys2, Polynomial.zero(R2)).member


def test_zero_ideal_system():
    s = build_noetherian_system(ideal(R2, []))
    assert s.multipliers == (Polynomial.one(R2),)
    assert noetherian_membership(s, Polynomial.zero(R2)).member
    assert not noetherian_membership(s, P(R2, "x")).member


def test_leibniz_examples():
    fam_x = build_noetherian_system(ideal(X, ["x^2"], ["x"])).family
    p, q = P(X, "x^3 + 2"), P(X, "x - 5")
    assert leibniz_holds(fam_x, (1,), p, q)
    g = [P(R3, "x^2 - t"), P(R3, "y")]
    split, jac = find_split(g, R3)
    fam = build_operator_family(g, (1, 1), split, jac)
    assert leibniz_holds(fam, (1, 1), P(R3, "x"), P(R3, "y"))
    comp = leibniz_companions(fam, (1, 1))
    assert comp[(1, 1)] == (1, fam.operators[(0, 0)])


@given(poly_strategy(R3, max_deg=3), poly_strategy(R3, max_deg=3))
@settings(max_examples=30)
def test_leibniz_property_on_parabola(p, q):
    g = [P(R3, "x^2 - t"), P(R3, "y")]
    split, jac = find_split(g, R3)
    fam = build_operator_family(g, (1, 1), split, jac)
    assert all(leibniz_holds(fam, alpha, p, q) for alpha in fam.alphas())
