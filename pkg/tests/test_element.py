"""Tests for element module."""

import pytest
from sympy import primefactors

from agr.element import (
    Element,
    Order,
    Unbounded,
    commutator,
    conjugate,
    equals,
    fixes_word,
    identity,
    image,
    insert,
    inv,
    mul,
    order_bounded,
    power,
    root_decompose,
    section_at,
    states,
)
from agr.errors import AlphabetMismatch, BadAlphabet, LetterOutOfRange
from agr.mealy import parse_machine

from tests.oracles import action_table, random_element, random_word, same_action, trivial_on

ADDING_MACHINE = """\
mealy p=2 states=2
s | 2:e 1:s
e | 1:e 2:e
"""


class TestArithmetic:
    """Tests for products, inverses and the identity."""

    def test_identity_acts_trivially(self):
        assert trivial_on(identity(2), 10)

    def test_identity_equals_state_e(self, gens):
        assert gens["e"] == identity(2)

    def test_identity_needs_two_letters(self):
        with pytest.raises(BadAlphabet):
            identity(1)

    def test_identity_law(self, grig, rng):
        for _ in range(50):
            g = random_element(rng, grig, 6)
            assert mul(identity(2), g) == g
            assert mul(g, identity(2)) == g

    def test_a_squared(self, gens):
        assert mul(gens["a"], gens["a"]).is_trivial()

    def test_klein_four_group(self, gens):
        """{1, b, c, d} is closed: bc = d and cd = b."""
        b, c, d = gens["b"], gens["c"], gens["d"]
        assert mul(b, c) == d
        assert mul(c, d) == b
        assert same_action(mul(b, c), d, 10)
        for x in (b, c, d):
            assert mul(x, x).is_trivial()

    def test_inverse_of_product(self, grig, rng):
        for _ in range(100):
            g, h = random_element(rng, grig, 6), random_element(rng, grig, 6)
            assert inv(mul(g, h)) == mul(inv(h), inv(g))

    def test_left_to_right_action(self, grig, rng):
        """w^(gh) = (w^g)^h"""
        for _ in range(100):
            g, h = random_element(rng, grig, 5), random_element(rng, grig, 5)
            word = random_word(rng, 2, 10)
            assert image(mul(g, h), word) == image(h, image(g, word))

    def test_power(self, gens):
        ad = mul(gens["a"], gens["d"])
        assert power(ad, 4).is_trivial()
        assert not power(ad, 2).is_trivial()
        assert power(ad, -1) == inv(ad)
        assert power(ad, 0).is_trivial()

    def test_operators(self, gens):
        a, b = gens["a"], gens["b"]
        assert (a * a).is_trivial()
        assert ~b == b
        assert (a * b) ** 2 == mul(mul(a, b), mul(a, b))

    def test_alphabet_mismatch(self, gens, gs):
        with pytest.raises(AlphabetMismatch):
            mul(gens["a"], gs.element("a"))


class TestConjugationAndCommutators:
    """Tests for g^h and [g,h]."""

    def test_conjugate_by_identity(self, grig, rng):
        for _ in range(20):
            g = random_element(rng, grig, 6)
            assert conjugate(g, identity(2)) == g

    def test_conjugate_definition(self, gens):
        a, b = gens["a"], gens["b"]
        assert conjugate(b, a) == mul(mul(a, b), a)

    def test_conjugate_preserves_order(self, grig, rng):
        for _ in range(30):
            g, h = random_element(rng, grig, 5), random_element(rng, grig, 5)
            assert order_bounded(conjugate(g, h)) == order_bounded(g)

    def test_commutator_with_itself(self, grig, rng):
        for _ in range(20):
            g = random_element(rng, grig, 6)
            assert commutator(g, g).is_trivial()

    def test_commutator_antisymmetry(self, grig, rng):
        for _ in range(50):
            g, h = random_element(rng, grig, 5), random_element(rng, grig, 5)
            assert commutator(g, h) == inv(commutator(h, g))

    def test_x_is_ab_squared(self, gens):
        """With a and b involutions, [a,b] = (ab)^2."""
        a, b = gens["a"], gens["b"]
        x = commutator(a, b)
        assert not x.is_trivial()
        assert x == power(mul(a, b), 2)


class TestSections:
    """Tests for root decomposition, sections and insertions."""

    def test_d_decomposition(self, gens):
        decomposition = root_decompose(gens["d"])
        assert decomposition.pi == (1, 2)
        assert decomposition.sections == (identity(2), gens["b"])

    def test_a_decomposition(self, gens):
        decomposition = root_decompose(gens["a"])
        assert decomposition.pi == (2, 1)
        assert all(s.is_trivial() for s in decomposition.sections)

    def test_identity_decomposition(self):
        decomposition = root_decompose(identity(3))
        assert decomposition.pi == (1, 2, 3)
        assert all(s.is_trivial() for s in decomposition.sections)

    def test_b_sections(self, gens):
        assert section_at(gens["b"], (1,)) == gens["a"]
        assert section_at(gens["b"], (2, 2, 2)) == gens["b"]

    def test_empty_section(self, gens):
        assert section_at(gens["c"], ()) == gens["c"]

    def test_ad_sections(self, gens):
        ad = mul(gens["a"], gens["d"])
        assert section_at(ad, (1,)) == gens["b"]
        assert section_at(ad, (2,)).is_trivial()

    def test_section_letter_out_of_range(self, gens):
        with pytest.raises(LetterOutOfRange):
            section_at(gens["b"], (3,))

    def test_decomposition_reassembles(self, grig, rng):
        for _ in range(100):
            g = random_element(rng, grig, 6)
            decomposition = root_decompose(g)
            word = random_word(rng, 2, 10)
            assert decomposition.apply(word) == image(g, word)

    def test_section_composition(self, grig, rng):
        """(g@v)@w = g@(vw)"""
        for _ in range(300):
            g = random_element(rng, grig, 8)
            v, w = random_word(rng, 2, 6), random_word(rng, 2, 6)
            assert section_at(section_at(g, v), w) == section_at(g, v + w)

    def test_cocycle_rule(self, grig, rng):
        """(vw)^g = v^g w^(g@v)"""
        for _ in range(300):
            g = random_element(rng, grig, 8)
            v, w = random_word(rng, 2, 6), random_word(rng, 2, 6)
            assert image(g, v + w) == image(g, v) + image(section_at(g, v), w)

    def test_root_homomorphism(self, grig, rng):
        for _ in range(100):
            g, h = random_element(rng, grig, 5), random_element(rng, grig, 5)
            pg, ph = g.root_permutation(), h.root_permutation()
            expected = tuple(ph[pg[x] - 1] for x in range(2))
            assert root_decompose(mul(g, h)).pi == expected

    def test_insert_12_d(self, gens):
        """12*d has seven states and acts as d below 12 only."""
        g = insert((1, 2), gens["d"])
        assert g.size() == 7
        for word, result in action_table(g, 6).items():
            if word[:2] == (1, 2):
                assert result == (1, 2) + image(gens["d"], word[2:])
            else:
                assert result == word

    def test_insert_empty_word(self, gens):
        assert insert((), gens["b"]) == gens["b"]

    def test_insert_then_section(self, grig, rng):
        """(v*g)@v = g and v*g fixes every other word of length |v|."""
        for _ in range(300):
            g = random_element(rng, grig, 6)
            v = random_word(rng, 2, 5)
            inserted = insert(v, g)
            assert section_at(inserted, v) == g
            if len(v) <= 4:
                for other, result in action_table(inserted, len(v)).items():
                    assert result == other

    def test_insert_composes(self, grig, rng):
        for _ in range(50):
            g = random_element(rng, grig, 5)
            v1, v2 = random_word(rng, 2, 3), random_word(rng, 2, 3)
            assert insert(v1 + v2, g) == insert(v1, insert(v2, g))

    def test_twist_identity(self, grig, rng):
        """(v*g)^h = v^h * g^(h@v)"""
        for _ in range(300):
            g, h = random_element(rng, grig, 6), random_element(rng, grig, 6)
            v = random_word(rng, 2, 5)
            left = conjugate(insert(v, g), h)
            right = insert(image(h, v), conjugate(g, section_at(h, v)))
            assert left == right

    def test_twist_identity_gupta_sidki(self, gs, rng):
        for _ in range(100):
            g, h = random_element(rng, gs, 4), random_element(rng, gs, 4)
            v = random_word(rng, 3, 3)
            assert conjugate(insert(v, g), h) == insert(image(h, v), conjugate(g, section_at(h, v)))


class TestEquality:
    """Tests for equals and canonical forms."""

    def test_bc_equals_d(self, gens):
        assert equals(mul(gens["b"], gens["c"]), gens["d"])

    def test_a_is_not_d(self, gens):
        assert not equals(gens["a"], gens["d"])

    def test_coinductive_mode_agrees(self, grig, rng):
        for _ in range(200):
            g, h = random_element(rng, grig, 4), random_element(rng, grig, 4)
            assert equals(g, h) == equals(g, h, coinductive=True)

    def test_agrees_with_action_oracle(self, grig, rng):
        for _ in range(60):
            g, h = random_element(rng, grig, 3), random_element(rng, grig, 3)
            if equals(g, h):
                assert same_action(g, h, 10)
            else:
                assert not same_action(g, h, 10)

    def test_canonical_serialization(self, gens):
        assert mul(gens["b"], gens["c"]).compact() == gens["d"].compact()
        assert identity(2).compact() == "1:0,2:0"

    def test_hash_follows_equality(self, gens):
        assert len({mul(gens["b"], gens["c"]), gens["d"], mul(gens["c"], gens["b"])}) == 1

    def test_mismatched_alphabets(self, gens, gs):
        with pytest.raises(AlphabetMismatch):
            equals(gens["a"], gs.element("a"))


class TestStatesAndWords:
    """Tests for the smaller helpers."""

    def test_states_of_b(self, gens):
        found = states(gens["b"])
        assert len(found) == 5
        assert found[0] == gens["b"]
        assert set(found) == {gens[name] for name in "abcde"}

    def test_fixes_word(self, gens):
        assert fixes_word(gens["d"], (1, 2, 2))
        assert not fixes_word(gens["a"], (1,))

    def test_size(self, gens):
        assert gens["a"].size() == 2
        assert identity(2).size() == 1


class TestOrder:
    """Tests for order_bounded."""

    def test_generators(self, gens):
        for name in "abcd":
            assert order_bounded(gens[name]) == Order(2)

    def test_ad_has_order_four(self, gens):
        assert order_bounded(mul(gens["a"], gens["d"])) == Order(4)

    def test_identity(self):
        assert order_bounded(identity(2)) == Order(1)

    def test_gupta_sidki_generators(self, gs):
        assert order_bounded(gs.element("a")) == Order(3)
        assert order_bounded(gs.element("t")) == Order(3)

    def test_adding_machine_is_unbounded(self):
        s = Element.of(parse_machine(ADDING_MACHINE), "s")
        assert isinstance(order_bounded(s), Unbounded)

    def test_small_budget(self, gens):
        g = mul(mul(gens["a"], gens["b"]), mul(gens["a"], gens["d"]))
        result = order_bounded(g, limit=1)
        assert isinstance(result, (Order, Unbounded))

    def test_limit_must_be_positive(self, gens):
        with pytest.raises(ValueError):
            order_bounded(gens["a"], limit=0)

    def test_soundness(self, grig, rng):
        """g^k = 1 and g^(k/q) != 1 for every prime q dividing k."""
        for _ in range(60):
            g = random_element(rng, grig, 8)
            result = order_bounded(g)
            assert isinstance(result, Order)
            k = result.value
            assert power(g, k).is_trivial()
            for q in primefactors(k):
                assert not power(g, k // q).is_trivial()
