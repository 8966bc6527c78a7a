import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

from noethercert.groebner import IdealPresentation  # noqa: E402
from noethercert.parsing import parse_polynomial  # noqa: E402
from noethercert.poly import VariableContext  # noqa: E402


def ring(*names, hom=None):
    return VariableContext(tuple(names), names.index(hom) if hom else None)


def P(ctx, text):
    return parse_polynomial(text, ctx)


def ideal(ctx, gens, radical=None):
    return IdealPresentation(ctx, tuple(P(ctx, g) for g in gens),
                             None if radical is None else tuple(P(ctx, g) for g in radical))


@pytest.fixture
def xyz():
    return ring("x", "y", "z")


@pytest.fixture
def xy():
    return ring("x", "y")


from fractions import Fraction  # noqa: E402

from hypothesis import strategies as st  # noqa: E402

from noethercert.poly import Polynomial  # noqa: E402


def poly_strategy(ctx, max_deg=4, max_terms=5, coeff=st.integers(-5, 5)):
    @st.composite
    def mono(draw):
        budget, exps = max_deg, []
        for _ in range(ctx.nvars):
            e = draw(st.integers(0, budget))
            exps.append(e)
            budget -= e
        return tuple(draw(st.permutations(exps)))

    terms = st.dictionaries(mono(), coeff.map(Fraction), max_size=max_terms)
    return terms.map(lambda t: Polynomial(ctx, t))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
