"""Finite quotients by level stabilizers and branch-subgroup membership."""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

from sympy.combinatorics import Permutation, PermutationGroup

from .config import DEFAULT_LIMITS, Limits
from .element import Element, commutator
from .errors import LevelTooLarge, QuotientLimitExceeded
from .groups import GroupPresentation, grig_K_generators, grigorchuk, gupta_sidki
from .mealy import level_permutation

logger = logging.getLogger(__name__)


class Membership(Enum):
    """Outcome of a branch-subgroup membership test."""
    IN_K = "in-K"
    NOT_IN_K = "not-in-K"


@dataclass(frozen=True)
class LevelQuotient:
    """Image of a group in Sym(X^m)."""
    level: int
    perms: dict[str, Permutation]
    group: PermutationGroup
    order: int

    @property
    def points(self) -> int:
        return self.group.degree


def _check_level(p: int, level: int, limits: Limits) -> None:
    if level < 1:
        raise ValueError("level must be at least 1")
    if p ** level > limits.max_level_points:
        raise LevelTooLarge(
            f"level {level} has {p ** level} points, limit is {limits.max_level_points}"
        )


def element_image(g: Element, level: int, limits: Limits = DEFAULT_LIMITS) -> Permutation:
    _check_level(g.p, level, limits)
    return Permutation(level_permutation(g.canonical, level))


def level_quotient(G: GroupPresentation, level: int, limits: Limits = DEFAULT_LIMITS) -> LevelQuotient:
    """Permutations of X^level induced by the generators, with the group order."""
    _check_level(G.p, level, limits)
    perms = {name: element_image(G.element(name), level, limits) for name in G.generators}
    group = PermutationGroup(list(perms.values()))
    order = int(group.order())
    logger.debug("%s level %d: %d points, image order %d", G.name, level, group.degree, order)
    return LevelQuotient(level=level, perms=perms, group=group, order=order)


class BranchSubgroup:
    """
    A normal subgroup given by generators and its known index.

    At each level the image of the subgroup is the normal closure of the
    generators' images. Once that image has the declared index, the level
    stabilizer lies inside the subgroup and membership is decided there.
    """

    def __init__(
        self,
        group: GroupPresentation,
        generators: Sequence[Element],
        index: int,
        name: str = "K",
        limits: Limits = DEFAULT_LIMITS,
    ):
        self.group = group
        self.generators = tuple(generators)
        self.index = index
        self.name = name
        self.limits = limits
        self._images: dict[int, tuple[PermutationGroup, PermutationGroup]] = {}
        self._stable_level: Optional[int] = None

    def images(self, level: int) -> tuple[PermutationGroup, PermutationGroup]:
        """(image of the group, image of the subgroup) at a level."""
        if level not in self._images:
            quotient = level_quotient(self.group, level, self.limits)
            sub = PermutationGroup([element_image(k, level, self.limits) for k in self.generators])
            closure = quotient.group.normal_closure(sub)
            self._images[level] = (quotient.group, closure)
        return self._images[level]

    def image_index(self, level: int) -> int:
        whole, sub = self.images(level)
        return int(whole.order()) // int(sub.order())

    @property
    def stable_level(self) -> int:
        """Least level where the image index reaches the declared index."""
        if self._stable_level is None:
            level = 1
            while self.group.p ** level <= self.limits.max_level_points:
                index = self.image_index(level)
                logger.debug("%s: index of %s at level %d is %d", self.group.name, self.name, level, index)
                if index == self.index:
                    self._stable_level = level
                    logger.info("%s: %s has index %d from level %d", self.group.name, self.name, index, level)
                    break
                level += 1
            else:
                raise QuotientLimitExceeded(
                    f"index of {self.name} never reached {self.index} within "
                    f"{self.limits.max_level_points} points"
                )
        return self._stable_level

    def contains(self, g: Element) -> bool:
        level = self.stable_level
        _, sub = self.images(level)
        return bool(sub.contains(element_image(g, level, self.limits)))

    def membership(self, g: Element) -> Membership:
        return Membership.IN_K if self.contains(g) else Membership.NOT_IN_K


@lru_cache(maxsize=None)
def grigorchuk_K() -> BranchSubgroup:
    """K = <x, x^c, x^ca> with x = [a,b]; index 16."""
    return BranchSubgroup(grigorchuk(), grig_K_generators(), index=16, name="K")


@lru_cache(maxsize=None)
def gupta_sidki_commutator() -> BranchSubgroup:
    """The commutator subgroup, normal closure of [a,t]; index 9."""
    G = gupta_sidki()
    return BranchSubgroup(G, (commutator(G.element("a"), G.element("t")),), index=9, name="[G,G]")


BUILTIN_BRANCH_SUBGROUPS = {
    "grigorchuk": grigorchuk_K,
    "gupta-sidki": gupta_sidki_commutator,
}


def branch_subgroup(G: GroupPresentation) -> Optional[BranchSubgroup]:
    factory = BUILTIN_BRANCH_SUBGROUPS.get(G.name)
    return factory() if factory else None


def k_membership(g: Element) -> Membership:
    """Membership in the branch subgroup K of the Grigorchuk group."""
    return grigorchuk_K().membership(g)
