import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qrr.series import LaurentPoly, QSeries, SignedMonomial

settings.register_profile(
    "qrr", max_examples=1000, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "qrr"))


def laurent(max_terms=3, span=3, mag=5):
    return st.dictionaries(st.integers(-span, span), st.integers(-mag, mag), max_size=max_terms).map(LaurentPoly)


@st.composite
def series(draw, scale=None, max_terms=6, max_order=20, lead_unit=False, vmin=(-3, 3), span=3):
    """Small random truncated series (at most ``max_terms`` nonzero terms)."""
    d = draw(st.sampled_from([1, 2, 3])) if scale is None else scale
    order = draw(st.integers(0, max_order))
    lo = draw(st.integers(vmin[0], min(vmin[1], order)))
    terms = draw(st.dictionaries(st.integers(lo, order), laurent(span=span), max_size=max_terms))
    if lead_unit:
        terms[lo] = LaurentPoly({draw(st.integers(-span, span)): draw(st.sampled_from([1, -1]))})
    return QSeries.from_dict(terms, order, d)


@st.composite
def monomials(draw, max_den=3, span=3):
    p = draw(st.fractions(min_value=-3, max_value=3, max_denominator=max_den))
    return SignedMonomial(draw(st.sampled_from([1, -1])), draw(st.integers(-span, span)), p)
