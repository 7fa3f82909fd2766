from fractions import Fraction
from itertools import product

from hypothesis import settings, strategies as st

from mahavier import FiniteRelation

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def all_relations(k):
    pairs = list(product(range(k), repeat=2))
    for mask in range(2 ** len(pairs)):
        edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
        yield FiniteRelation.from_edges(edges, points=range(k))


@st.composite
def finite_relations(draw, max_points=4, min_points=1):
    k = draw(st.integers(min_points, max_points))
    pairs = list(product(range(k), repeat=2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    return FiniteRelation.from_edges(edges, points=range(k))


def rationals(lo=0, hi=1, max_denominator=64):
    lo, hi = Fraction(lo), Fraction(hi)
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_denominator)


@st.composite
def intervals(draw, lo=0, hi=1):
    a = draw(rationals(lo, hi))
    b = draw(rationals(lo, hi))
    return (min(a, b), max(a, b))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            for name, value in rep.user_properties:
                if name == "acceptance":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
