"""Session files and JSON encodings of the core objects."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .certifier import ProblemInstance
from .groebner import IdealPresentation
from .hilbert import HilbertData
from .noetherian import NoetherianSystem
from .parsing import parse_polynomial
from .poly import GREVLEX, MonomialOrder, Polynomial, VariableContext
from .resolution import GradedComplex

SCHEMA_VERSION = 1


class SessionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials

def poly_to_json(p: Polynomial, order: MonomialOrder = GREVLEX) -> dict:
    return {
        "expr": p.to_expr(order),
        "terms": [[list(m), str(c)] for m, c in p.sorted_terms(order)],
    }


def poly_from_json(obj, ctx: VariableContext) -> Polynomial:
    if isinstance(obj, str):
        return parse_polynomial(obj, ctx)
    if "terms" in obj:
        p = Polynomial(ctx, {tuple(m): Fraction(c) for m, c in obj["terms"]})
        if "expr" in obj and parse_polynomial(obj["expr"], ctx) != p:
            raise SessionError(f"expression {obj['expr']!r} disagrees with its term list")
        return p
    return parse_polynomial(obj["expr"], ctx)


def polys_to_json(ps: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> List[dict]:
    return [poly_to_json(p, order) for p in ps]


def polys_from_json(objs, ctx) -> List[Polynomial]:
    return [poly_from_json(o, ctx) for o in objs]


def context_to_json(ctx: VariableContext) -> dict:
    return {"variables": list(ctx.names), "hom_variable": ctx.hom_name}


def context_from_json(obj) -> VariableContext:
    names = tuple(obj["variables"])
    hom = obj.get("hom_variable")
    return VariableContext(names, names.index(hom) if hom is not None else None)


def matrix_to_json(M) -> List[List[dict]]:
    return [[poly_to_json(e) for e in row] for row in M]


def matrix_from_json(obj, ctx) -> List[List[Polynomial]]:
    return [[poly_from_json(e, ctx) for e in row] for row in obj]


def complex_to_json(c: GradedComplex) -> dict:
    return {
        "twists": c.twists(),
        "betti_numbers": c.betti_numbers(),
        "differentials": [matrix_to_json(M) for M in c.differentials],
    }


def hilbert_to_json(hd: HilbertData) -> dict:
    return {
        "hilbert_polynomial": [str(c) for c in hd.hilbert_polynomial],
        "projective_dimension": hd.projective_dimension,
        "projective_degree": hd.projective_degree,
        "series_numerator": list(hd.numerator),
        "nvars": hd.nvars,
    }


def system_to_json(sys: NoetherianSystem) -> dict:
    fam = sys.family
    names = fam.ctx.names
    ops = []
    for alpha in fam.alphas():
        op = fam.operators[alpha]
        ops.append({
            "alpha": list(alpha),
            "order": op.order,
            "coefficient_degree": op.coefficient_degree,
            "terms": [{"derivative": list(beta), "coefficient": poly_to_json(c)} for beta, c in op.terms],
        })
    return {
        "g": polys_to_json(fam.g),
        "m_powers": list(fam.m_powers),
        "eta": [names[i] for i in fam.split.eta],
        "zeta": [names[i] for i in fam.split.zeta],
        "H": poly_to_json(fam.jac.H),
        "Gamma": matrix_to_json(fam.jac.Gamma),
        "jacobian": matrix_to_json(fam.jac.jacobian),
        "operators": ops,
        "multipliers": polys_to_json(sys.multipliers),
        "gamma": polys_to_json(sys.gamma.generators),
    }


# ---------------------------------------------------------------------------
# sessions

@dataclass
class Session:
    raw: dict
    ctx: VariableContext  # all variables, homogenizing variable included
    ideals: Dict[str, IdealPresentation]
    instances: Dict[str, dict]

    @property
    def affine_ctx(self) -> VariableContext:
        return self.ctx.affine()

    def ideal(self, name: str) -> IdealPresentation:
        try:
            return self.ideals[name]
        except KeyError:
            raise SessionError(f"no ideal named {name!r}") from None

    def uses_hom(self, *polys: Polynomial) -> bool:
        h = self.ctx.hom_index
        return any(p.uses_variable(h) for p in polys)

    def ring_for(self, ideal: IdealPresentation, *polys: Polynomial) -> VariableContext:
        """Affine ring unless the homogenizing variable actually occurs."""
        rad = ideal.radical_generators or ()
        if self.uses_hom(*ideal.generators, *rad, *polys):
            return self.ctx
        return self.affine_ctx

    def problem(self, name: str, nu: Optional[int] = None,
                c_inf: Optional[Union[str, int]] = None) -> ProblemInstance:
        try:
            entry = self.instances[name]
        except KeyError:
            raise SessionError(f"no instance named {name!r}") from None
        A = self.affine_ctx
        J = self.ideal(entry["ideal"])
        if self.uses_hom(*J.generators):
            raise SessionError("instance ideals must be affine")
        J = J.to_context(A)
        F = tuple(parse_polynomial(s, A) for s in entry["F"])
        Phi = parse_polynomial(str(entry["Phi"]), A)
        mode = entry.get("c_inf", "bound") if c_inf is None else c_inf
        return ProblemInstance(J, F, Phi, int(entry.get("nu", 1) if nu is None else nu), parse_c_inf(mode))


def parse_c_inf(value) -> Union[str, int]:
    if isinstance(value, int):
        return value
    value = str(value)
    if value in ("none", "bound"):
        return value
    try:
        return int(value)
    except ValueError:
        raise SessionError(f"c_inf must be 'none', 'bound' or an integer, not {value!r}") from None


def session_from_dict(raw: dict) -> Session:
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SessionError(f"unsupported session schema_version {version}")
    names = list(raw["variables"])
    hom = raw.get("hom_variable") or "x0"
    if hom not in names:
        names = [hom] + names
    ctx = VariableContext(tuple(names), names.index(hom))
    ideals = {}
    for name, entry in raw.get("ideals", {}).items():
        if isinstance(entry, list):
            gens, rad = entry, None
        else:
            gens, rad = entry.get("generators", []), entry.get("radical_generators")
        ideals[name] = IdealPresentation(
            ctx,
            tuple(parse_polynomial(s, ctx) for s in gens),
            None if rad is None else tuple(parse_polynomial(s, ctx) for s in rad),
        )
    instances = dict(raw.get("instances", {}))
    for name, entry in instances.items():
        if entry.get("ideal") not in ideals:
            raise SessionError(f"instance {name!r} refers to unknown ideal {entry.get('ideal')!r}")
    return Session(raw, ctx, ideals, instances)


def load_session(path: Union[str, Path]) -> Session:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return session_from_dict(raw)
