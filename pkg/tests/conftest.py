from fractions import Fraction

from hypothesis import strategies as st

from norlund.weights import weight_sequence


def rationals(min_num=-20, max_num=20, max_den=6):
    return st.builds(Fraction, st.integers(min_num, max_num), st.integers(1, max_den))


@st.composite
def weight_sequences(draw, horizon):
    first = draw(rationals(1, 9, 4))
    rest = draw(st.lists(rationals(0, 9, 4), min_size=horizon, max_size=horizon))
    return weight_sequence([first] + rest)


@st.composite
def real_sequences(draw, horizon):
    return tuple(draw(st.lists(rationals(), min_size=horizon + 1, max_size=horizon + 1)))
