from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_reduction.affine import AffineElement, alcove_length
from affine_reduction.classes import affine_layers
from affine_reduction.errors import ConfigurationError
from affine_reduction.rootdata import dot

from .conftest import group


def elements_up_to(G, n):
    taus = G.omega_elements(1)
    return [G.multiply(x, t) for layer in affine_layers(G, n) for x in layer for t in taus]


def test_multiplication_examples(A1):
    s0 = A1.by_label[0].element
    s1 = A1.by_label[1].element
    assert A1.mul(s0, s0) == A1.identity
    assert A1.mul(s0, s1, s0) == AffineElement((2,), 1)
    assert A1.mul(s1, A1.translation((1,))) == AffineElement((-1,), 1)
    assert s0 == AffineElement((1,), 1)


def test_length_examples(A1):
    assert A1.length(A1.translation((1,))) == 2
    assert A1.length(AffineElement((2,), 1)) == 3
    assert A1.length(AffineElement((-2,), 1)) == 5
    assert A1.length(A1.identity) == 0


@pytest.mark.parametrize("label,iso", [("A1", None), ("A2", None), ("A2", "ad"), ("C2", "ad"),
                                       ("G2", None), ("GL2", None), ("GL3", None), ("B3", None)])
def test_length_matches_alcove_count(label, iso):
    G = group(label, iso)
    bound = 2 if G.rank <= 2 else 1
    for lam in product(range(-bound, bound + 1), repeat=G.rank):
        for u in range(len(G.W0)):
            w = AffineElement(lam, u)
            assert G.length(w) == alcove_length(G, w)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([("A2", None), ("C2", "ad"), ("G2", None)]), st.data())
def test_length_matches_alcove_count_random(key, data):
    G = group(*key)
    lam = tuple(data.draw(st.integers(-6, 6)) for _ in range(G.rank))
    u = data.draw(st.integers(0, len(G.W0) - 1))
    w = AffineElement(lam, u)
    assert G.length(w) == alcove_length(G, w)


@pytest.mark.parametrize("label,iso", [("A1", None), ("A2", None)])
def test_length_laws_exhaustive(label, iso):
    G = group(label, iso)
    els = elements_up_to(G, 8)
    for w in els:
        lw = G.length(w)
        assert G.length(G.inverse(w)) == lw
        for s in G.simple_reflections:
            assert abs(G.length(G.multiply(s.element, w)) - lw) == 1
    small = elements_up_to(G, 4)
    for v in small:
        for w in small:
            assert G.length(G.multiply(v, w)) <= G.length(v) + G.length(w)


@pytest.mark.parametrize("label,iso", [("A2", None), ("C2", "ad"), ("GL3", None)])
def test_translation_length(label, iso):
    G = group(label, iso)
    d = G.datum
    for lam in product(range(-2, 3), repeat=G.rank):
        dom = d.dominant_rep(lam)[0]
        assert G.length(G.translation(lam)) == dot(dom, d.two_rho)


@pytest.mark.parametrize("label,iso,mu", [("A1", None, (1,)), ("A2", None, (1, 1)), ("A2", None, (2, 3)),
                                          ("C2", "ad", (1, 1)), ("G2", None, (3, 5)), ("GL3", None, (2, 1, 0))])
def test_regular_translation_identities(label, iso, mu):
    G = group(label, iso)
    assert G.datum.is_regular(mu)
    t = G.translation(mu)
    for z in range(len(G.W0)):
        lz = G.W0.length(z)
        assert G.length(G.multiply(t, G.finite(z))) == G.length(t) - lz
        assert G.length(G.multiply(G.finite(z), t)) == G.length(t) + lz


def test_simple_reflections():
    A1 = group("A1")
    assert [s.element for s in A1.simple_reflections] == [AffineElement((1,), 1), AffineElement((0,), 1)]
    A2 = group("A2")
    assert len(A2.simple_reflections) == 3
    s0 = A2.simple_reflections[0]
    assert s0.element.t == A2.datum.positive_coroots[s0.root] == (1, 1)  # theta^vee
    assert len(group("GL2").simple_reflections) == 2
    for key in [("A1", None), ("A2", None), ("B3", None), ("G2", None), ("GL3", None), ("C2", "ad")]:
        G = group(*key)
        for s in G.simple_reflections:
            assert G.length(s.element) == 1
            assert G.multiply(s.element, s.element) == G.identity


def test_simple_reflections_generate_affine_group():
    G = group("A2")
    # each element is a reduced word in simple reflections times a length-zero element
    for w in elements_up_to(G, 5):
        labels, tau = G.reduced_word(w)
        assert len(labels) == G.length(w)
        assert G.length(tau) == 0
        assert G.multiply(G.from_word(labels), tau) == w


def test_omega_elements():
    assert group("A1").omega_elements(1) == [group("A1").identity]
    gl = group("GL2")
    om = gl.omega_elements(1)
    assert AffineElement((1, 0), 1) in om
    assert gl.length(AffineElement((1, 0), 1)) == 0
    ad = group("A2", "ad")
    om = ad.omega_elements(1)
    assert len(om) == 3
    assert {ad.datum.pi1_class(w.t) for w in om} == {(0,), (1,), (2,)}
    rot = [w for w in om if w != ad.identity][0]
    assert ad.power(rot, 3) == ad.identity


def test_omega_elements_box_too_small():
    from affine_reduction.errors import ResourceError
    with pytest.raises(ResourceError):
        group("A2", "ad").omega_elements(0)


def test_decompose_examples(A1):
    s1 = A1.W0.simple[0]
    d = A1.decompose_xmuy(AffineElement((2,), s1))
    assert (d.x, d.mu, d.y, d.eta) == (A1.W0.identity, (2,), s1, s1)
    d = A1.decompose_xmuy(AffineElement((-2,), s1))
    assert (d.x, d.mu, d.y, d.eta) == (s1, (2,), A1.W0.identity, s1)
    d = A1.decompose_xmuy(A1.translation((3,)))
    assert (d.x, d.y, d.eta) == (0, 0, 0)


@pytest.mark.parametrize("label,iso", [("A2", None), ("C2", "ad"), ("GL3", None)])
def test_decompose_roundtrip(label, iso):
    G = group(label, iso)
    for w in elements_up_to(G, 5):
        d = G.decompose_xmuy(w)
        assert G.xmuy(d.x, d.mu, d.y) == w
        assert G.datum.is_dominant(d.mu)
        assert G.is_min_in_left_coset(G.multiply(G.translation(d.mu), G.finite(d.y)))
        assert d.eta == G.W0.mul(d.y, d.x)


def test_json_and_word_encodings(A2):
    w = A2.parse_word("0,1,2,1")
    assert A2.from_json(A2.to_json(w)) == w
    assert A2.parse_word("") == A2.identity
    with pytest.raises(ConfigurationError):
        A2.parse_word("0,7")
    with pytest.raises(ConfigurationError):
        A2.parse_word("a,b")
    with pytest.raises(ConfigurationError):
        A2.from_json({"t": [1, 0], "w": [], "extra": 1})
    with pytest.raises(ConfigurationError):
        A2.from_json({"t": [1], "w": []})
    with pytest.raises(ConfigurationError):
        A2.from_json({"t": [1, 0], "w": [3]})


def test_semidirect_laws(A2):
    els = elements_up_to(A2, 3)
    for a in els[:12]:
        assert A2.multiply(a, A2.inverse(a)) == A2.identity
        for b in els[:12]:
            for c in els[:6]:
                assert A2.mul(A2.mul(a, b), c) == A2.mul(a, A2.mul(b, c))
