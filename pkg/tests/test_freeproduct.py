import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from groupoids.errors import CommutationFailure
from groupoids.freeproduct import (
    EMPTY_WORD,
    GroupFamily,
    Word,
    reduce_in_random_order,
    sliced_factorization,
)
from groupoids.group import cyclic_group


@pytest.fixture
def z2z2():
    return GroupFamily({1: cyclic_group(2), 2: cyclic_group(2)})


def test_reduce_square_cancels(z2z2):
    assert z2z2.reduce([(1, "1"), (1, "1")]) == EMPTY_WORD


def test_reduce_cascading(z2z2):
    w = z2z2.reduce([(1, "1"), (2, "1"), (2, "1"), (1, "1")])
    assert w == EMPTY_WORD


def test_reduce_already_reduced(z2z2):
    w = z2z2.reduce([(1, "1"), (2, "1"), (1, "1")])
    assert w.letters == ((1, "1"), (2, "1"), (1, "1"))
    assert z2z2.is_reduced(w.letters)


def test_multiply_and_cancel(z2z2):
    w1 = z2z2.word((1, "1"), (2, "1"))
    w2 = z2z2.word((2, "1"), (1, "1"))
    assert z2z2.multiply(w1, w2) == EMPTY_WORD


def test_invert_is_two_sided_inverse(z2z2):
    w = z2z2.word((1, "1"), (2, "1"), (1, "1"))
    assert z2z2.multiply(w, z2z2.invert(w)) == EMPTY_WORD
    assert z2z2.multiply(z2z2.invert(w), w) == EMPTY_WORD


def test_injection_identity_is_empty(z2z2):
    assert z2z2.injection(1, "0") == EMPTY_WORD


def test_injection_distributes():
    fam = GroupFamily({1: cyclic_group(4)})
    for g in "0123":
        for h in "0123":
            gh = cyclic_group(4).op(g, h)
            assert fam.multiply(fam.injection(1, g), fam.injection(1, h)) == fam.injection(1, gh)


def all_words_up_to(family, length):
    letters = [(i, g) for i, grp in family.factors.items() for g in grp.elements if g != grp.identity]
    words = [EMPTY_WORD]
    for n in range(1, length + 1):
        for combo in itertools.product(letters, repeat=n):
            if family.is_reduced(combo):
                words.append(Word(tuple(combo)))
    return words


def test_group_laws_exhaustive_z2z2(z2z2):
    words = all_words_up_to(z2z2, 4)
    for w in words:
        assert z2z2.multiply(w, EMPTY_WORD) == w
        assert z2z2.multiply(EMPTY_WORD, w) == w
        assert z2z2.multiply(w, z2z2.invert(w)) == EMPTY_WORD
    for w1 in words[:20]:
        for w2 in words[:20]:
            for w3 in words[:10]:
                left = z2z2.multiply(z2z2.multiply(w1, w2), w3)
                right = z2z2.multiply(w1, z2z2.multiply(w2, w3))
                assert left == right


def test_confluence_randomized(z2z2):
    rng = random.Random(7)
    letters_pool = [(1, "0"), (1, "1"), (2, "0"), (2, "1")]
    for _ in range(1000):
        letters = [letters_pool[rng.randrange(4)] for _ in range(rng.randrange(8))]
        expected = z2z2.reduce(letters)
        assert reduce_in_random_order(z2z2, letters, rng) == expected


@settings(max_examples=200)
@given(st.lists(st.tuples(st.sampled_from([1, 2]), st.sampled_from(["0", "1", "2"])), max_size=8), st.integers(0, 2**32 - 1))
def test_confluence_hypothesis(letters, seed):
    fam = GroupFamily({1: cyclic_group(3), 2: cyclic_group(3)})
    assert reduce_in_random_order(fam, letters, random.Random(seed)) == fam.reduce(letters)


def test_induced_hom_trivial_maps():
    fam = GroupFamily({1: cyclic_group(2), 2: cyclic_group(2)})
    target = cyclic_group(2)
    phi = {1: {"0": "0", "1": "0"}, 2: {"0": "0", "1": "0"}}
    h = fam.induced_hom(target, phi)
    assert h(fam.word((1, "1"), (2, "1"))) == "0"


def test_induced_hom_identity_maps(z2z2):
    target = cyclic_group(2)
    phi = {1: {"0": "0", "1": "1"}, 2: {"0": "0", "1": "1"}}
    h = z2z2.induced_hom(target, phi)
    # (1,a)(2,b)(1,a) evaluates to a+b+a = b
    assert h(z2z2.word((1, "1"), (2, "1"), (1, "1"))) == "1"


def test_induced_hom_single_factor():
    fam = GroupFamily({1: cyclic_group(4)})
    phi = {1: {g: g for g in "0123"}}
    h = fam.induced_hom(cyclic_group(4), phi)
    for g in "0123":
        assert h(fam.injection(1, g)) == g


def test_induced_hom_is_homomorphism_randomized(z2z2):
    target = cyclic_group(2)
    phi = {1: {"0": "0", "1": "1"}, 2: {"0": "0", "1": "1"}}
    h = z2z2.induced_hom(target, phi)
    rng = random.Random(11)
    pool = all_words_up_to(z2z2, 3)
    for _ in range(300):
        w1, w2 = rng.choice(pool), rng.choice(pool)
        assert h(z2z2.multiply(w1, w2)) == target.op(h(w1), h(w2))


def test_induced_hom_rejects_non_hom(z2z2):
    bad = {1: {"0": "0", "1": "0"}, 2: {"0": "1", "1": "0"}}
    with pytest.raises(CommutationFailure):
        z2z2.induced_hom(cyclic_group(2), bad)


def test_sliced_factorization_identity_slice():
    fam = GroupFamily({1: cyclic_group(2)})
    h = cyclic_group(2)
    phi = {1: {"0": "0", "1": "1"}}
    xi = phi
    out = sliced_factorization(fam, h, phi, h, xi, {g: g for g in "01"}, [fam.injection(1, "1")])
    assert out(fam.injection(1, "1")) == "1"


def test_sliced_factorization_rejects_bad_xi():
    fam = GroupFamily({1: cyclic_group(2)})
    h = cyclic_group(2)
    r4 = cyclic_group(4)
    phi = {1: {"0": "0", "1": "1"}}
    xi = {1: {"0": "0", "1": "2"}}  # r(2) = 0 != 1
    r = {g: str(int(g) % 2) for g in "0123"}
    with pytest.raises(CommutationFailure):
        sliced_factorization(fam, h, phi, r4, xi, r)


def test_sliced_factorization_order_two_element():
    # no lift exists through Z/4 -> Z/2 (it does not split); use Z/2 x Z/2
    from groupoids.group import direct_product_group

    fam = GroupFamily({1: cyclic_group(2)})
    h = cyclic_group(2)
    r_group = direct_product_group(cyclic_group(2), cyclic_group(2))
    phi = {1: {"0": "0", "1": "1"}}
    xi = {1: {"0": "(0,0)", "1": "(1,0)"}}
    r = {"(0,0)": "0", "(0,1)": "0", "(1,0)": "1", "(1,1)": "1"}
    out = sliced_factorization(fam, h, phi, r_group, xi, r, [fam.word((1, "1"), (1, "1"))])
    assert out(fam.word((1, "1"), (1, "1"))) == "(0,0)"
