from hypothesis import strategies as st

from cashift.laurent import LaurentPoly


def polys(p=2, d=2, max_terms=5, span=3):
    exps = st.tuples(*[st.integers(-span, span)] * d)
    return st.dictionaries(exps, st.integers(0, p - 1), max_size=max_terms).map(
        lambda t: LaurentPoly(p, d, t))


def phis(p=2, d=2, span=2):
    """Nonzero Phi with at least two terms and no time variable."""
    space = st.tuples(*[st.integers(-span, span)] * (d - 1)).map(lambda n: n + (0,))
    return st.dictionaries(space, st.integers(1, p - 1), min_size=2, max_size=4).map(
        lambda t: LaurentPoly(p, d, t))
