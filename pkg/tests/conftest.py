import json
import os

import pytest
import sympy as sp

from qfold.cartan import load_datum

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "qfold", "data")
FROZEN = os.path.join(os.path.dirname(__file__), "data", "frozen.json")
q = sp.Symbol("q")


def datum(name):
    return load_datum(os.path.join(DATA, name + ".json"))


def aut_path(name):
    return os.path.join(DATA, name + ".aut.json")


@pytest.fixture(scope="session")
def frozen():
    with open(FROZEN) as fh:
        return json.load(fh)


def to_sympy(x):
    """LaurentPoly or RatFunc -> sympy expression."""
    if hasattr(x, "num"):
        return to_sympy(x.num) / to_sympy(x.den)
    return sum((c * q ** e for e, c in x.terms().items()), sp.Integer(0))


def same_rational(x, text: str) -> bool:
    return sp.simplify(to_sympy(x) - sp.sympify(text, locals={"q": q})) == 0


def aut(name):
    from qfold.cartan import DiagramAut
    with open(aut_path(name)) as fh:
        return DiagramAut(json.load(fh)["perm"])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
