import random

from hypothesis import strategies as st

from oracles import SIGNATURES, random_structure


@st.composite
def structures(draw, max_size=5, sigs=tuple(SIGNATURES)):
    name = draw(st.sampled_from(sigs))
    size = draw(st.integers(1, max_size))
    seed = draw(st.integers(0, 10 ** 6))
    return random_structure(SIGNATURES[name], random.Random(seed), size)


@st.composite
def structure_and_subset(draw, max_size=5, sigs=tuple(SIGNATURES)):
    s = draw(structures(max_size, sigs))
    elems = sorted(s.elements)
    sub = draw(st.sets(st.sampled_from(elems), max_size=len(elems)))
    return s, sub
