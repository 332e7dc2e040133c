import pytest
from hypothesis import given, strategies as st

from fliplab.surface import SignatureError, SurfaceSig, complexity, parse_signature, same_type


@pytest.mark.parametrize("sig, d", [
    (SurfaceSig(1, 1), 3),
    (SurfaceSig(0, 0, (5,)), 2),
    (SurfaceSig(0, 0, (1, 1)), 2),
    (SurfaceSig(0, 3), 3),
    (SurfaceSig(0, 1, (3,)), 3),
    (SurfaceSig(0, 0, (4,)), 1),
])
def test_complexity(sig, d):
    assert complexity(sig) == d


def test_same_type():
    assert same_type(SurfaceSig(0, 0, (1, 2)), SurfaceSig(0, 0, (2, 1)))
    assert not same_type(SurfaceSig(1, 1), SurfaceSig(0, 3))
    assert same_type(SurfaceSig(0, 0, (5,)), SurfaceSig(0, 0, (5,)))
    assert SurfaceSig(0, 0, (1, 2)) == SurfaceSig(0, 0, (2, 1))


@pytest.mark.parametrize("kwargs", [
    dict(genus=2, interior_marks=0),
    dict(genus=0, interior_marks=1, boundary_marks=(0,)),
    dict(genus=-1, interior_marks=1),
])
def test_invalid_signatures(kwargs):
    with pytest.raises(SignatureError):
        SurfaceSig(**kwargs)


@pytest.mark.parametrize("text, sig", [
    ("S_{1,1}", SurfaceSig(1, 1)),
    ("S_{0,0,(5)}", SurfaceSig(0, 0, (5,))),
    ("S_{0,0,(2,1)}", SurfaceSig(0, 0, (1, 2))),
    (" S_{ 0, 1, (3) } ", SurfaceSig(0, 1, (3,))),
])
def test_parse(text, sig):
    assert parse_signature(text) == sig
    assert parse_signature(str(sig)) == sig


@pytest.mark.parametrize("text", ["S_{1}", "T_{1,1}", "S_{0,0,(a)}", "S_{2,0}"])
def test_parse_errors(text):
    with pytest.raises(SignatureError):
        parse_signature(text)


sigs = st.builds(SurfaceSig, st.integers(0, 4), st.integers(1, 6),
                 st.lists(st.integers(1, 6), max_size=4).map(tuple))


@given(sigs)
def test_interior_mark_adds_three(sig):
    fewer = SurfaceSig(sig.genus, sig.interior_marks - 1, sig.boundary_marks) \
        if sig.interior_marks - 1 + sum(sig.boundary_marks) > 0 else None
    if fewer is not None:
        assert complexity(sig) - complexity(fewer) == 3
