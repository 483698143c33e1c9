"""Tests for quotients module."""

import pytest

from agr import quotients
from agr.config import Limits
from agr.element import commutator, conjugate, identity, inv, mul
from agr.errors import LevelTooLarge, QuotientLimitExceeded
from agr.groups import grig_K_generators
from agr.quotients import (
    BranchSubgroup,
    Membership,
    branch_subgroup,
    element_image,
    grigorchuk_K,
    gupta_sidki_commutator,
    k_membership,
    level_quotient,
)

from tests.oracles import random_element


class TestLevelQuotient:
    """Tests for images in Sym(X^m)."""

    def test_grigorchuk_level_one(self, grig):
        quotient = level_quotient(grig, 1)
        assert quotient.order == 2
        assert quotient.points == 2

    def test_grigorchuk_level_two(self, grig):
        """The image on four points is the dihedral group of order 8."""
        assert level_quotient(grig, 2).order == 8

    def test_gupta_sidki_level_one(self, gs):
        assert level_quotient(gs, 1).order == 3

    def test_generator_permutations(self, grig):
        quotient = level_quotient(grig, 1)
        assert quotient.perms["a"].array_form == [1, 0]
        assert quotient.perms["d"].array_form == [0, 1]

    def test_level_too_large(self, grig):
        with pytest.raises(LevelTooLarge):
            level_quotient(grig, 20)

    def test_level_must_be_positive(self, grig):
        with pytest.raises(ValueError):
            element_image(grig.element("a"), 0)

    def test_image_is_homomorphic(self, grig, rng):
        """Permutations compose left to right like the elements."""
        for _ in range(30):
            g, h = random_element(rng, grig, 5), random_element(rng, grig, 5)
            assert element_image(mul(g, h), 4) == element_image(g, 4) * element_image(h, 4)


class TestGrigorchukK:
    """Tests for membership in K."""

    def test_stable_level(self):
        K = grigorchuk_K()
        assert K.stable_level == 3
        assert K.image_index(K.stable_level) == 16

    def test_index_stays_after_stabilizing(self):
        K = grigorchuk_K()
        assert K.image_index(K.stable_level + 1) == 16

    def test_generators_belong(self):
        for g in grig_K_generators():
            assert k_membership(g) is Membership.IN_K

    def test_identity_belongs(self):
        assert grigorchuk_K().contains(identity(2))

    @pytest.mark.parametrize("name", ["a", "b"])
    def test_generators_do_not_belong(self, gens, name):
        assert k_membership(gens[name]) is Membership.NOT_IN_K

    def test_closed_under_products_and_conjugation(self, grig, gens, rng):
        x, xc, xca = grig_K_generators()
        K = grigorchuk_K()
        assert K.contains(mul(x, xc))
        assert K.contains(mul(xca, x))
        for _ in range(20):
            g = random_element(rng, grig, 5)
            assert K.contains(conjugate(x, g))

    def test_random_samples_are_closed(self, grig, gens, rng):
        """Seeded products of conjugated K generators stay in K under products and inverses."""
        generators = grig_K_generators()
        K = grigorchuk_K()
        samples = []
        for _ in range(100):
            g = identity(2)
            for _ in range(rng.randint(1, 4)):
                k = rng.choice(generators)
                if rng.random() < 0.5:
                    k = inv(k)
                g = mul(g, conjugate(k, random_element(rng, grig, 3)))
            samples.append(g)
        for g, h in zip(samples, samples[1:] + samples[:1]):
            assert K.contains(g)
            assert K.contains(inv(g))
            assert K.contains(mul(g, h))
            assert not K.contains(mul(g, gens["a"]))

    def test_membership_values(self):
        assert Membership.IN_K.value == "in-K"
        assert Membership.NOT_IN_K.value == "not-in-K"

    def test_lookup_by_group(self, grig, gs):
        assert branch_subgroup(grig) is grigorchuk_K()
        assert branch_subgroup(gs) is gupta_sidki_commutator()


class TestGuptaSidkiCommutator:
    """Tests for the commutator subgroup of the Gupta-Sidki group."""

    def test_index_nine(self):
        subgroup = gupta_sidki_commutator()
        assert subgroup.stable_level == 2
        assert subgroup.image_index(2) == 9

    def test_commutators_belong(self, gs, rng):
        subgroup = gupta_sidki_commutator()
        for _ in range(10):
            g, h = random_element(rng, gs, 3), random_element(rng, gs, 3)
            assert subgroup.contains(commutator(g, h))

    def test_generator_does_not_belong(self, gs):
        assert not gupta_sidki_commutator().contains(gs.element("t"))


class TestBranchSubgroup:
    """Tests for the generic subgroup machinery."""

    def test_index_never_reached(self, grig):
        subgroup = BranchSubgroup(grig, grig_K_generators(), index=1000, limits=Limits(max_level_points=16))
        with pytest.raises(QuotientLimitExceeded):
            subgroup.stable_level

    def test_images_are_cached(self, grig, mocker):
        subgroup = BranchSubgroup(grig, grig_K_generators(), index=16)
        spy = mocker.spy(quotients, "level_quotient")
        subgroup.images(2)
        calls = spy.call_count
        subgroup.images(2)
        assert spy.call_count == calls
