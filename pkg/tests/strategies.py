from hypothesis import strategies as st

from ckdyn.af import AfElement, level_basis
from ckdyn.graph import graph_from_edges
from ckdyn.psys import make_system
from ckdyn.scalar import ExactScalar


@st.composite
def graphs(draw, max_vertices=4, max_edges=6):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=max_edges))
    return graph_from_edges(vs, [(f"e{j}", s, d) for j, (s, d) in enumerate(pairs)])


@st.composite
def scalars(draw, roots=(2, 3, 6)):
    terms = {1: draw(st.fractions(min_value=-5, max_value=5, max_denominator=6))}
    for d in draw(st.lists(st.sampled_from(roots), max_size=2, unique=True)):
        terms[d] = draw(st.fractions(min_value=-3, max_value=3, max_denominator=4))
    return ExactScalar(terms)


@st.composite
def elements(draw, E, max_level=2, max_terms=4):
    N = draw(st.integers(0, max_level))
    basis = level_basis(E, N)
    units = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=max_terms, unique=True))
    return AfElement(E, {u: draw(scalars()) for u in units}, N)


@st.composite
def systems(draw, max_points=6, well_positioned=True):
    n = draw(st.integers(1, max_points))
    pts = [f"x{i}" for i in range(n)]
    dom = draw(st.lists(st.sampled_from(pts), unique=True))
    mapping = {x: draw(st.sampled_from(pts)) for x in dom}
    Y = set(draw(st.lists(st.sampled_from(pts), unique=True)))
    if well_positioned:
        Y |= set(pts) - set(mapping.values())
    return make_system(pts, mapping, Y)
