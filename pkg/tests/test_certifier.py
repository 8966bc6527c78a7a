"""Degree bounds, the hypothesis surrogate, bounded solving and the homogeneous check."""

import pytest

from conftest import P, ideal, ring
from corpus import CERT_CORPUS, make_instance
from noethercert.certifier import (
    Certificate,
    ProblemInstance,
    certify,
    degree_bound,
    homogeneous_equivalence_check,
    hypothesis_check,
    solve_bounded,
    verify_certificate,
)
from noethercert.groebner import contains, sum_ideal, IdealPresentation
from noethercert.hilbert import HilbertData
from noethercert.noetherian import build_noetherian_system
from noethercert.poly import Polynomial

XY = ring("x", "y")


def _hd(degree, n):
    return HilbertData((), n, degree, (), n + 1)


def _instance(J, rad, F, Phi, nu=1, c_inf="bound", ctx=XY):
    return ProblemInstance(ideal(ctx, J, rad), tuple(P(ctx, f) for f in F), P(ctx, Phi), nu, c_inf)


def test_degree_bound_override():
    inst = _instance(["x^2"], ["x"], ["x^2", "y^2"], "x^3", nu=2, c_inf=1)
    b = degree_bound(inst, 2, _hd(2, 1))
    assert (b.entry_infinity, b.entry_cohomology, b.rho) == (11, 4, 11)


def test_degree_bound_none_mode():
    inst = _instance(["x^2"], ["x"], ["x^2", "y^2"], "x^3", nu=2, c_inf="none")
    b = degree_bound(inst, 2, _hd(2, 1))
    assert (b.entry_infinity, b.entry_cohomology, b.rho) == (3, 4, 4)


def test_degree_bound_default_uses_min_m_n():
    inst = _instance(["x^2"], ["x"], ["x^2", "y^2", "x*y"], "1", nu=1)
    b = degree_bound(inst, 2, _hd(1, 1))
    assert b.c_inf == 1
    assert b.entry_infinity == 0 + 1 * 2 ** 1 * 1


@pytest.mark.parametrize("n,d,phi", [(1, 2, "1"), (2, 2, "x^3"), (2, 3, "x*y")])
def test_macaulay_shape(n, d, phi):
    ctx = ring(*"xyz"[:n])
    F = [f"x^{d}"] + [f"{v}^{d}" for v in "yz"[:n - 1]] + [f"(1 + x)^{d}"]
    inst = ProblemInstance(ideal(ctx, [], []), tuple(P(ctx, f) for f in F), P(ctx, phi), 1, "none")
    b = degree_bound(inst, 1, _hd(1, n))
    assert b.rho == max(P(ctx, phi).degree(), (d - 1) * (n + 1) + 1)


def test_hypothesis_examples():
    inst = make_instance("product")
    v = hypothesis_check(inst, build_noetherian_system(inst.J_V))
    assert v.passed and len(v.checks) == 2

    inst = make_instance("nss_double_line")
    assert hypothesis_check(inst, build_noetherian_system(inst.J_V)).passed

    inst = make_instance("size_fails")
    v = hypothesis_check(inst, build_noetherian_system(inst.J_V))
    assert not v.passed
    assert v.first_failure[2] == P(XY, "y")


def test_hypothesis_requires_radical_generators():
    inst = ProblemInstance(IdealPresentation(XY, (P(XY, "x^2"),)), (P(XY, "y"),), P(XY, "1"))
    with pytest.raises(ValueError):
        hypothesis_check(inst, build_noetherian_system(ideal(XY, ["x^2"], ["x"])))


def test_solve_examples():
    cert = solve_bounded(make_instance("d1_line"), 1)
    assert [str(q) for q in cert.Q] == ["1", "1"] and cert.max_degree == 1

    cert = solve_bounded(make_instance("product"), 2)
    assert cert.Q == (P(XY, "x"),)

    for rho in (1, 2, 4):
        assert solve_bounded(make_instance("nonmember"), rho) is None


def test_solve_rejects_rho_below_d():
    with pytest.raises(ValueError):
        solve_bounded(make_instance("macaulay_p1"), 1)


def test_certify_examples():
    r = certify(make_instance("nss_double_line"))
    assert r.status == "certified"
    assert r.certificate.max_degree <= max(r.bound.entry_infinity, r.bound.entry_cohomology)

    r = certify(make_instance("d1_line"))
    assert r.status == "certified" and r.certificate.rho == 1

    r = certify(make_instance("nonmember"))
    assert r.status == "infeasible" and not r.hypothesis.passed
    assert r.hypothesis.first_failure[1:] == ((1,), P(XY, "1"))


def test_unconditional_solve_label():
    # the surrogate fails for Phi = x*y^2 against (y^3), yet a certificate exists
    inst = make_instance("thick_member", Phi="x*y^2 + y^3", nu=2)
    r = certify(inst)
    assert not r.hypothesis.passed
    assert r.status == "unconditional solve" and r.certificate is not None


def test_homogeneous_check_examples():
    inst = make_instance("d1_line")
    cert = solve_bounded(inst, 1)
    assert homogeneous_equivalence_check(inst, cert, 1)

    inst = make_instance("product")
    cert = solve_bounded(inst, 2)
    assert homogeneous_equivalence_check(inst, cert, 2)

    bad = Certificate((cert.Q[0] + 1,), cert.residual, cert.rho, cert.max_degree)
    assert not homogeneous_equivalence_check(inst, bad, 2)
    assert not verify_certificate(inst, bad)


PASSING = [n for n in CERT_CORPUS if n not in ("nonmember", "size_fails")]


@pytest.mark.parametrize("name", sorted(CERT_CORPUS))
def test_corpus_pipeline(name):
    inst = make_instance(name)
    r = certify(inst)
    if r.hypothesis.passed:
        assert r.certificate is not None, "bound conformance"
        assert r.certificate.rho == r.bound.rho
    if r.certificate is not None:
        cert = r.certificate
        assert verify_certificate(inst, cert)
        assert cert.within_bound
        assert r.homogeneous_check
        for rho in range(cert.rho + 1, cert.rho + 3):
            later = solve_bounded(inst, rho)
            assert later is not None and homogeneous_equivalence_check(inst, later, rho)


@pytest.mark.parametrize("name", PASSING)
def test_surrogate_is_a_membership_statement(name):
    inst = make_instance(name)
    sys = build_noetherian_system(inst.J_V)
    target = sum_ideal(IdealPresentation(inst.ctx, inst.F), inst.radical_ideal())
    v = hypothesis_check(inst, sys)
    for (i, alpha, ok) in v.checks:
        img = sys.family.operators[alpha](sys.multipliers[i] * inst.Phi)
        assert ok == contains(target, img)


@pytest.mark.parametrize("name,phi", [
    ("macaulay_p1", "1"), ("macaulay_p1", "x^3 - 2*x + 5"),
    ("macaulay_p2", "1"), ("macaulay_p2", "x^3 + x*y^2 - 7*y"),
])
def test_macaulay_reproduction(name, phi):
    inst = make_instance(name, Phi=phi)
    n = inst.ctx.nvars
    rho = max(inst.deg_phi, (inst.d - 1) * (n + 1) + 1)
    r = certify(inst)
    assert r.reg == 1 and r.bound.rho == rho
    assert r.certificate is not None and r.certificate.max_degree <= rho
    assert r.homogeneous_check


def test_certificate_identity_by_expansion():
    inst = make_instance("double_circle")
    cert = certify(inst).certificate
    total = sum((f * q for f, q in zip(inst.F, cert.Q)), Polynomial.zero(inst.ctx))
    total = total + sum((g * r for g, r in zip(inst.J_V.generators, cert.residual)), Polynomial.zero(inst.ctx))
    assert total == inst.Phi


@pytest.mark.parametrize("kwargs", [
    dict(F=()),
    dict(F=(Polynomial.one(XY),)),
    dict(nu=0),
    dict(c_inf="sometimes"),
])
def test_instance_validation(kwargs):
    base = dict(J_V=ideal(XY, ["x^2"], ["x"]), F=(P(XY, "y"),), Phi=P(XY, "1"), nu=1, c_inf="bound")
    base.update(kwargs)
    with pytest.raises(ValueError):
        ProblemInstance(**base)
