"""Group elements as canonical pointed machines.

An Element always holds a minimized, trimmed machine numbered in BFS order
from its start state, so equality of transformations is equality of tables.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from sympy.combinatorics import Permutation

from .config import DEFAULT_LIMITS
from .errors import AlphabetMismatch, BadAlphabet
from .mealy import (
    MealyMachine,
    PointedMachine,
    Word,
    act,
    bisimilar,
    canonical_relabel,
    follow,
    insert_path,
    invert,
    minimize,
    product,
)

logger = logging.getLogger(__name__)

# Python's own recursion limit sits above this
MAX_ORDER_DEPTH = 800


@dataclass(frozen=True, eq=False)
class Element:
    """A group element: a pointed machine already in canonical form."""
    canonical: PointedMachine
    _key: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        machine = self.canonical.machine
        key = (machine.p, machine.outputs, machine.targets)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    @classmethod
    def from_machine(cls, m: PointedMachine) -> "Element":
        return cls(minimize(m))

    @classmethod
    def of(cls, machine: MealyMachine, state: Union[str, int]) -> "Element":
        """The element defined by one state of a machine."""
        index = machine.state_index(state) if isinstance(state, str) else state
        return cls.from_machine(machine.at(index))

    @property
    def p(self) -> int:
        return self.canonical.machine.p

    @property
    def key(self) -> tuple:
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Element") -> "Element":
        return mul(self, other)

    def __invert__(self) -> "Element":
        return inv(self)

    def __pow__(self, exponent: int) -> "Element":
        return power(self, exponent)

    def __repr__(self) -> str:
        return f"Element(p={self.p}, states={self.size()}, {self.compact()})"

    def size(self) -> int:
        """State count of the canonical machine (the complexity measure)."""
        return self.canonical.machine.num_states

    def is_trivial(self) -> bool:
        machine = self.canonical.machine
        return machine.num_states == 1 and machine.outputs[0] == tuple(range(machine.p))

    def root_permutation(self) -> tuple[int, ...]:
        """Images of the letters 1..p under the element, 1-based."""
        machine = self.canonical.machine
        return tuple(y + 1 for y in machine.outputs[self.canonical.start])

    def fixes_letters(self) -> bool:
        """True when the root permutation is trivial."""
        machine = self.canonical.machine
        return machine.outputs[self.canonical.start] == tuple(range(machine.p))

    def compact(self) -> str:
        """One-line canonical encoding: 'out:next' per letter, ';' between states."""
        machine = self.canonical.machine
        return ";".join(
            ",".join(f"{out + 1}:{target}" for out, target in zip(row, nexts))
            for row, nexts in zip(machine.outputs, machine.targets)
        )


@dataclass(frozen=True)
class RootDecomposition:
    """Wreath recursion of an element: root permutation and one section per letter."""
    pi: tuple[int, ...]
    sections: tuple[Element, ...]

    def apply(self, word: Sequence[int]) -> Word:
        """(x w)^g = x^pi . w^(g@x)"""
        if not word:
            return ()
        first, rest = word[0], tuple(word[1:])
        return (self.pi[first - 1],) + image(self.sections[first - 1], rest)


@dataclass(frozen=True)
class Order:
    value: int


@dataclass(frozen=True)
class Unbounded:
    reason: str


OrderResult = Union[Order, Unbounded]


def _same_alphabet(g: Element, h: Element) -> None:
    if g.p != h.p:
        raise AlphabetMismatch(f"elements over {g.p} and {h.p} letters")


def identity(p: int) -> Element:
    if p < 2:
        raise BadAlphabet(f"alphabet size must be at least 2, got {p}")
    return _identity(p)


@lru_cache(maxsize=None)
def _identity(p: int) -> Element:
    machine = MealyMachine(p=p, names=("e",), outputs=(tuple(range(p)),), targets=((0,) * p,))
    return Element(machine.at(0))


@lru_cache(maxsize=1 << 16)
def _mul(g: Element, h: Element) -> Element:
    return Element.from_machine(product(g.canonical, h.canonical))


@lru_cache(maxsize=1 << 14)
def _inv(g: Element) -> Element:
    return Element.from_machine(invert(g.canonical))


def mul(g: Element, h: Element) -> Element:
    """Product g*h: apply g first, then h."""
    _same_alphabet(g, h)
    if g.is_trivial():
        return h
    if h.is_trivial():
        return g
    return _mul(g, h)


def inv(g: Element) -> Element:
    return _inv(g)


def power(g: Element, n: int) -> Element:
    """g^n by binary powering; negative exponents go through the inverse."""
    if n < 0:
        g, n = inv(g), -n
    result = identity(g.p)
    base = g
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def conjugate(g: Element, h: Element) -> Element:
    """g^h = h^-1 g h"""
    return mul(mul(inv(h), g), h)


def commutator(g: Element, h: Element) -> Element:
    """[g,h] = g^-1 h^-1 g h"""
    return mul(mul(inv(g), inv(h)), mul(g, h))


def image(g: Element, word: Sequence[int]) -> Word:
    return act(g.canonical, word)


def section_at(g: Element, word: Sequence[int]) -> Element:
    """g@v. States of a minimal machine stay pairwise inequivalent, so a
    relabel is enough to make the section canonical."""
    if not word:
        return g
    return Element(canonical_relabel(follow(g.canonical, word)))


def root_decompose(g: Element) -> RootDecomposition:
    return RootDecomposition(
        pi=g.root_permutation(),
        sections=tuple(section_at(g, (x,)) for x in range(1, g.p + 1)),
    )


def insert(word: Sequence[int], g: Element) -> Element:
    """v*g: acts as g below v and trivially elsewhere."""
    if not word:
        return g
    return Element.from_machine(insert_path(word, g.canonical))


def fixes_word(g: Element, word: Sequence[int]) -> bool:
    return image(g, word) == tuple(word)


def states(g: Element) -> list[Element]:
    """Every state of g's canonical machine, read as an element."""
    machine = g.canonical.machine
    return [Element(canonical_relabel(machine.at(q))) for q in range(machine.num_states)]


def equals(g: Element, h: Element, coinductive: bool = False) -> bool:
    """Equality as transformations; the coinductive mode cross-checks by bisimulation."""
    _same_alphabet(g, h)
    if coinductive:
        return bisimilar(g.canonical, h.canonical)
    return g.key == h.key


def permutation_order(pi: Sequence[int]) -> int:
    """Order of a 1-based permutation given as a tuple of images."""
    return Permutation([y - 1 for y in pi]).order()


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------

_ORDER_CACHE: dict[Element, int] = {}


class _Unbounded(Exception):
    pass


class _OrderSolver:
    """
    Recursive order computation.

    trivial -> 1; g fixing X -> lcm of section orders; root permutation of
    order m -> m * order(g^m). Revisiting an element that is still on the
    stack means the recursion loops: if a multiplication by m happened since,
    the order cannot be finite; otherwise the loop adds nothing to the lcm.
    """

    def __init__(self, limit: int):
        self.remaining = limit
        self.stack: dict[Element, int] = {}
        self.multiplications = 0

    def visit(self, g: Element) -> tuple[int, frozenset]:
        if g.is_trivial():
            return 1, frozenset()
        cached = _ORDER_CACHE.get(g)
        if cached is not None:
            return cached, frozenset()
        if g in self.stack:
            if self.multiplications > self.stack[g]:
                raise _Unbounded("recursion returns to an element after a root multiplication")
            return 1, frozenset((g,))

        self.remaining -= 1
        if self.remaining < 0:
            raise _Unbounded("order budget exhausted")
        if len(self.stack) >= MAX_ORDER_DEPTH:
            raise _Unbounded("recursion too deep")

        self.stack[g] = self.multiplications
        try:
            m = permutation_order(g.root_permutation())
            if m == 1:
                value, assumed = 1, frozenset()
                for section in dict.fromkeys(root_decompose(g).sections):
                    order, depends = self.visit(section)
                    value = math.lcm(value, order)
                    assumed |= depends
            else:
                self.multiplications += 1
                try:
                    order, assumed = self.visit(power(g, m))
                finally:
                    self.multiplications -= 1
                value = m * order
        finally:
            del self.stack[g]

        assumed = assumed - {g}
        if not assumed:
            _ORDER_CACHE[g] = value
        return value, assumed


def order_bounded(g: Element, limit: int = DEFAULT_LIMITS.order_budget) -> OrderResult:
    """
    Order of g, or Unbounded when the recursion loops through a root
    multiplication or the budget of visited elements runs out.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    try:
        value, _ = _OrderSolver(limit).visit(g)
    except _Unbounded as exc:
        logger.debug("order search gave up: %s", exc)
        return Unbounded(str(exc))
    return Order(value)
