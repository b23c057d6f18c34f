import pytest
from conftest import reps
from hypothesis import given
from hypothesis import strategies as st
from oracles import ext_dim as oracle_ext_dim
from oracles import hom_dim as oracle_hom_dim
from oracles import raw

from idemext.exactlin import PrimeField
from idemext.quiverrep import (
    NotIsomorphic,
    Quiver,
    Rep,
    RepMorphism,
    cocycle_to_ses,
    direct_sum,
    ext_add,
    ext_space,
    hom_basis,
    hom_dim,
    image_subrep,
    iso_find,
    pullback,
    pushforward,
    ses_to_cocycle,
)

A2, A3 = Quiver.linear(2), Quiver.linear(3)
F2, F3 = PrimeField(2), PrimeField(3)
settings_cases = st.sampled_from([(A2, F2), (A2, F3), (A3, F2)])


def test_cyclic_quiver_rejected():
    with pytest.raises(ValueError, match="cycle"):
        Quiver(2, ((0, 1), (1, 0)))


def test_simple_ext():
    s0, s1 = Rep.simple(A2, F2, 0), Rep.simple(A2, F2, 1)
    assert ext_space(s0, s1).dim == 1
    assert ext_space(s1, s0).dim == 0
    assert hom_dim(s0, s1) == 0


def test_noncommuting_morphism_rejected():
    p = Rep.build(A2, F2, [1, 1], [[[1]]])
    with pytest.raises(ValueError, match="commute"):
        RepMorphism(p, p, (F2.matrix([[1]]), F2.matrix([[0]])))


@st.composite
def pair(draw, max_dim=2):
    q, f = draw(settings_cases)
    md = 1 if q.vertices == 3 and f.p == 3 else max_dim
    return q, f, draw(reps(q, f, md)), draw(reps(q, f, md))


@given(pair())
def test_hom_dim_matches_oracle(data):
    q, f, m, n = data
    assert hom_dim(m, n) == oracle_hom_dim(raw(m), raw(n), f.p)
    for b in hom_basis(m, n):
        assert b.src == m and b.dst == n


@given(pair())
def test_ext_dim_matches_oracle(data):
    q, f, m, n = data
    assert ext_space(m, n).dim == oracle_ext_dim(raw(m), raw(n), f.p)


@given(pair(), st.data())
def test_ses_roundtrip(data, d):
    q, f, m, n = data
    sp = ext_space(m, n)
    xi = sp.from_coords(d.draw(st.lists(st.integers(0, f.p - 1), min_size=sp.dim, max_size=sp.dim)))
    conf = cocycle_to_ses(xi)
    assert conf.mid.dims == tuple(a + b for a, b in zip(m.dims, n.dims))
    assert sp.same_class(ses_to_cocycle(conf.x, conf.y), xi)


@given(pair(), st.data())
def test_push_pull_functorial(data, d):
    q, f, m, n = data
    sp = ext_space(m, n)
    xi = sp.from_coords(d.draw(st.lists(st.integers(0, f.p - 1), min_size=sp.dim, max_size=sp.dim)))
    ends = [b for b in hom_basis(n, n)] or [n.identity()]
    starts = [b for b in hom_basis(m, m)] or [m.identity()]
    a1, a2 = ends[0], ends[-1]
    c1, c2 = starts[0], starts[-1]
    assert sp.same_class(pushforward(a1, pushforward(a2, xi)), pushforward(a1 @ a2, xi))
    assert sp.same_class(pullback(c2, pullback(c1, xi)), pullback(c1 @ c2, xi))
    assert sp.same_class(pushforward(a1, pullback(c1, xi)), pullback(c1, pushforward(a1, xi)))
    assert sp.same_class(pushforward(n.identity(), xi), xi)


@given(pair(), st.data())
def test_baer_sum_is_blockwise(data, d):
    q, f, m, n = data
    sp = ext_space(m, n)
    draw = lambda: sp.from_coords(d.draw(st.lists(st.integers(0, f.p - 1), min_size=sp.dim, max_size=sp.dim)))  # noqa: E731
    xi, eta = draw(), draw()
    assert sp.same_class(ext_add(xi, eta), xi + eta)


@given(st.sampled_from([(A2, F2), (A2, F3)]), st.data())
def test_iso_find_on_conjugate(case, d):
    q, f = case
    m = d.draw(reps(q, f, 2))
    assert iso_find(m, m).is_iso()
    s = direct_sum([m, Rep.simple(q, f, 0)])
    with pytest.raises(NotIsomorphic):
        iso_find(m, s)


@given(pair())
def test_image_factorization(data):
    q, f, m, n = data
    for b in hom_basis(m, n)[:3]:
        im, inc, co = image_subrep(b)
        assert inc @ co == b
        assert im.dims == tuple(b.ranks())
