import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlab import fixtures
from twistlab.errors import (InvalidAction, InvalidFactorSet, InvalidGroupTable)
from twistlab.groups import (ExtensionGroup, FiniteTableGroup, FreeGroup,
                             IntLattice, reduce_word)


def test_finite_table_validates():
    with pytest.raises(InvalidGroupTable):
        FiniteTableGroup([[0, 1], [1, 1]])  # not a latin square
    with pytest.raises(InvalidGroupTable):
        FiniteTableGroup([[1, 0], [0, 1]])  # identity not at index 0


def test_s3_group_axioms(s3):
    els = s3.elements()
    assert len(els) == 6
    for a in els:
        assert s3.compose(a, s3.invert(a)) == s3.identity()
        for b in els:
            for c in els:
                assert (s3.compose(s3.compose(a, b), c)
                        == s3.compose(a, s3.compose(b, c)))


def test_quaternion_relations(q8):
    # labels (sign, unit); check i^2 = j^2 = k^2 = ijk = -1
    i = q8.index_of_label((1, "i"))
    j = q8.index_of_label((1, "j"))
    k = q8.index_of_label((1, "k"))
    minus = q8.index_of_label((-1, "1"))
    assert q8.compose(i, i) == minus
    assert q8.compose(j, j) == minus
    assert q8.compose(k, k) == minus
    assert q8.compose(q8.compose(i, j), k) == minus
    assert q8.compose(i, j) == k
    assert q8.compose(j, i) == q8.index_of_label((-1, "k"))


def test_free_group_reduction_and_inverse(f2):
    x, y = f2.generator(1), f2.generator(2)
    w = f2.compose(x, f2.compose(y, f2.invert(y)))
    assert w == x
    assert reduce_word([1, 2, -2, -1]) == ()
    assert f2.compose(w, f2.invert(w)) == ()


def test_free_ball_sizes_shortlex(f2):
    # |B_r| = 2 * 3^r - 1 on the 4-regular tree
    for r in range(5):
        ball = f2.enumerate_ball(r)
        assert len(ball) == 2 * 3**r - 1
        keys = [f2.sort_key(g) for g in ball]
        assert keys == sorted(keys)
    assert f2.enumerate_ball(1) == [(), (1,), (-1,), (2,), (-2,)]


def test_free_word_string_roundtrip(f2):
    w = (1, 2, -1, -1, 2)
    s = f2.element_to_json(w)
    assert s == "x1 x2 x1^-1 x1^-1 x2"
    assert f2.element_from_json(s) == w
    assert f2.element_from_json("") == ()


def test_lattice_ball_l1():
    z2 = IntLattice(2)
    assert len(z2.enumerate_ball(0)) == 1
    assert len(z2.enumerate_ball(1)) == 5
    assert len(z2.enumerate_ball(2)) == 13
    assert z2.compose((1, 2), (3, -1)) == (4, 1)
    assert z2.word_length((2, -3)) == 5


def test_extension_builds_and_inverts():
    for name, ext in fixtures.standard_extensions().items():
        e = ext.identity()
        for g in ext.elements():
            assert ext.compose(g, ext.invert(g)) == e, name
            assert ext.compose(ext.invert(g), g) == e, name


def test_extension_rejects_broken_factor_set():
    ext = fixtures.q8_extension()
    broken = dict(ext.factor_set)
    key = next(k for k in broken if broken[k] != 0)
    broken[key] = (broken[key] + 1) % ext.K.order
    with pytest.raises(InvalidFactorSet):
        ExtensionGroup(ext.K, ext.quotient, ext.action, broken)


def test_extension_rejects_broken_action():
    ext = fixtures.s4_v4_extension()
    action = {h: list(p) for h, p in ext.action.items()}
    h = next(h for h in action if h != ext.quotient.identity())
    action[h][1], action[h][2] = action[h][2], action[h][1]
    with pytest.raises((InvalidAction, InvalidFactorSet)):
        ExtensionGroup(ext.K, ext.quotient, action, ext.factor_set)


def test_q8_extension_is_q8(q8):
    ext = fixtures.q8_extension()
    src = ext.source
    assert src.order == 8
    table = {(a, b): src.compose(a, b) for a in range(8) for b in range(8)}
    # the extension multiplication must realize the same group via its
    # element bijection
    pairs = ext.elements()
    assert len(pairs) == 8
    # bijection: match by order statistics of the regular action
    from collections import Counter

    def profile(G, els, comp):
        out = Counter()
        for g in els:
            n, p = 1, g
            while p != els[0]:
                p = comp(p, g)
                n += 1
            out[n] += 1
        return out

    assert (profile(src, list(range(8)), src.compose)
            == profile(ext, pairs, ext.compose))


def test_extension_section_and_quotient_map():
    ext = fixtures.s4_v4_extension()
    L = ext.quotient
    for h in L.elements():
        s = ext.section(h)
        assert ext.quotient_map(s) == h
    assert ext.section(L.identity()) == ext.identity()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-2, 2).filter(lambda v: v != 0), max_size=12),
       st.lists(st.integers(-2, 2).filter(lambda v: v != 0), max_size=12))
def test_free_compose_matches_reduce_oracle(u, v):
    f2 = FreeGroup(2)
    a, b = reduce_word(u), reduce_word(v)
    assert f2.compose(a, b) == reduce_word(list(a) + list(b))


def test_element_json_roundtrip_all_backends(s3, f2):
    z2 = IntLattice(2)
    ext = fixtures.q8_extension()
    cases = [(s3, 4), (f2, (1, -2, 1)), (z2, (3, -1)), (ext, ext.elements()[5])]
    for G, g in cases:
        assert G.element_from_json(G.element_to_json(g)) == g
