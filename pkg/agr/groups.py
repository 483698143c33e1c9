"""Built-in automaton groups, ball enumeration and contraction estimates."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from .config import DEFAULT_LIMITS, Limits
from .element import Element, commutator, conjugate, identity, inv, mul, power, section_at
from .errors import BallTooLarge, UnknownGenerator, UnknownGroup
from .mealy import MealyMachine, Word, parse_machine

logger = logging.getLogger(__name__)


# The first-level recursions: a swaps, b=(a,c), c=(a,d), d=(1,b)
GRIGORCHUK_MAF = """\
mealy p=2 states=5
a | 2:e 1:e
b | 1:a 2:c
c | 1:a 2:d
d | 1:e 2:b
e | 1:e 2:e
"""

# a cycles 1->2->3, t=(a, a^-1, t); upper case names are inverses
GUPTA_SIDKI_MAF = """\
mealy p=3 states=5
a | 2:e 3:e 1:e
A | 3:e 1:e 2:e
t | 1:a 2:A 3:t
T | 1:A 2:a 3:T
e | 1:e 2:e 3:e
"""


@dataclass(frozen=True)
class GroupPresentation:
    """A machine and the states that generate the group."""
    name: str
    machine: MealyMachine
    generators: tuple[str, ...]
    # set when the group is known to be a q-group for this prime q
    torsion_prime: Optional[int] = None
    _elements: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        for generator in self.generators:
            self.machine.state_index(generator)

    @property
    def p(self) -> int:
        return self.machine.p

    def element(self, name: str) -> Element:
        if name not in self.generators:
            raise UnknownGenerator(name)
        if name not in self._elements:
            self._elements[name] = Element.of(self.machine, name)
        return self._elements[name]

    def environment(self) -> dict[str, Element]:
        """Generator names bound to their elements, for expression evaluation."""
        return {name: self.element(name) for name in self.generators}

    def identity(self) -> Element:
        return identity(self.p)

    def symmetric_generators(self) -> list[Element]:
        """Distinct non-trivial generators and their inverses, in a fixed order."""
        seen: dict[Element, None] = {}
        for name in self.generators:
            g = self.element(name)
            for candidate in (g, inv(g)):
                if not candidate.is_trivial():
                    seen.setdefault(candidate, None)
        return list(seen)


@lru_cache(maxsize=None)
def grigorchuk() -> GroupPresentation:
    return GroupPresentation(
        name="grigorchuk",
        machine=parse_machine(GRIGORCHUK_MAF),
        generators=("a", "b", "c", "d"),
        torsion_prime=2,
    )


@lru_cache(maxsize=None)
def gupta_sidki() -> GroupPresentation:
    return GroupPresentation(
        name="gupta-sidki",
        machine=parse_machine(GUPTA_SIDKI_MAF),
        generators=("a", "A", "t", "T"),
        torsion_prime=3,
    )


BUILTIN_GROUPS = {
    "grigorchuk": grigorchuk,
    "gupta-sidki": gupta_sidki,
}


def load_group(selector: str) -> GroupPresentation:
    """
    Resolve a built-in group name or a MAF file path.

    A group read from a file is generated by all of its states.
    """
    key = selector.strip().lower().replace("_", "-")
    if key in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[key]()

    path = Path(selector)
    if not path.is_file():
        raise UnknownGroup(
            f"'{selector}' is neither a built-in group ({', '.join(BUILTIN_GROUPS)}) nor a file"
        )
    machine = parse_machine(path.read_text(encoding="utf-8"))
    logger.info("loaded %d-state machine over %d letters from %s", machine.num_states, machine.p, path)
    return GroupPresentation(name=path.stem, machine=machine, generators=machine.names)


# ---------------------------------------------------------------------------
# Distinguished elements and tuples
# ---------------------------------------------------------------------------

def grig_K_generators() -> tuple[Element, Element, Element]:
    """x = [a,b] together with x^c and x^(ca); their normal closure is K."""
    G = grigorchuk()
    a, b, c = G.element("a"), G.element("b"), G.element("c")
    x = commutator(a, b)
    return x, conjugate(x, c), conjugate(x, mul(c, a))


@dataclass(frozen=True)
class PeriodicData:
    """A start tuple whose difference recursion returns to itself below ``word``."""
    group: str
    A0: tuple[Element, ...]
    period: int
    word: Word


def grigorchuk_lemma_tuple() -> PeriodicData:
    """A quadruple in K with period 9 below 111112."""
    G = grigorchuk()
    a, b, c = G.element("a"), G.element("b"), G.element("c")
    x2 = power(commutator(a, b), 2)
    x2ca = conjugate(x2, mul(c, a))
    x2cab = conjugate(x2, mul(mul(c, a), b))
    A0 = (
        mul(inv(x2), x2ca),
        mul(mul(inv(x2ca), x2), x2cab),
        mul(inv(x2cab), inv(x2)),
        x2,
    )
    return PeriodicData(group="grigorchuk", A0=A0, period=9, word=(1, 1, 1, 1, 1, 2))


def gupta_sidki_lemma_tuple() -> PeriodicData:
    """A triple of commutators with period 4 below 122."""
    G = gupta_sidki()
    a, t = G.element("a"), G.element("t")
    A0 = (
        commutator(inv(a), t),
        conjugate(commutator(a, t), a),
        commutator(inv(t), inv(a)),
    )
    return PeriodicData(group="gupta-sidki", A0=A0, period=4, word=(1, 2, 2))


BUILTIN_PERIODIC_DATA = {
    "grigorchuk": grigorchuk_lemma_tuple,
    "gupta-sidki": gupta_sidki_lemma_tuple,
}


def periodic_data(G: GroupPresentation) -> Optional[PeriodicData]:
    factory = BUILTIN_PERIODIC_DATA.get(G.name)
    return factory() if factory else None


# ---------------------------------------------------------------------------
# Balls and contraction
# ---------------------------------------------------------------------------

def ball(G: GroupPresentation, radius: int, limits: Limits = DEFAULT_LIMITS) -> list[list[Element]]:
    """
    Spheres of the Cayley graph up to ``radius``, by BFS over canonical forms.

    Layer i holds the elements of geodesic length exactly i.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius > limits.max_ball_radius:
        raise BallTooLarge(f"radius {radius} exceeds limit {limits.max_ball_radius}")

    steps = G.symmetric_generators()
    layers = [[G.identity()]]
    seen = {G.identity()}
    for depth in range(1, radius + 1):
        layer = []
        for g in layers[-1]:
            for s in steps:
                h = mul(g, s)
                if h not in seen:
                    seen.add(h)
                    layer.append(h)
        if len(seen) > limits.max_ball_size:
            raise BallTooLarge(f"ball of radius {depth} has more than {limits.max_ball_size} elements")
        logger.debug("ball layer %d: %d elements", depth, len(layer))
        if not layer:
            break
        layers.append(layer)
    return layers


@dataclass(frozen=True)
class ContractionEstimate:
    eta_hat: Fraction
    C_hat: Fraction
    sample_radius: int
    samples: int = 0
    skipped: int = 0


def eta_grid(p: int) -> list[Fraction]:
    """{i/p^k : k=1..3, 1<=i<=p^k} in increasing order."""
    return sorted({Fraction(i, p ** k) for k in range(1, 4) for i in range(1, p ** k + 1)})


def _required_constant(samples: list[tuple[int, int]], eta: Fraction) -> Fraction:
    return max((Fraction(short) - eta * long for long, short in samples), default=Fraction(0))


def estimate_contraction(
    G: GroupPresentation,
    radius: int,
    limits: Limits = DEFAULT_LIMITS,
) -> ContractionEstimate:
    """
    Estimate eta and C in len(g@x) <= eta*len(g) + C over the ball of ``radius``.

    For each eta on the grid the least covering C is computed twice, over the
    whole ball and over the half-radius ball; the estimate is the first eta
    whose constant has stopped growing. Sections outside the ball are skipped.
    """
    layers = ball(G, radius, limits)
    length = {g: depth for depth, layer in enumerate(layers) for g in layer}

    samples: list[tuple[int, int]] = []
    skipped = 0
    for g, n in length.items():
        for x in range(1, G.p + 1):
            s = section_at(g, (x,))
            if s in length:
                samples.append((n, length[s]))
            else:
                skipped += 1
    inner = [(n, m) for n, m in samples if n <= radius // 2]

    grid = eta_grid(G.p)
    eta = grid[-1]
    for candidate in grid:
        if _required_constant(samples, candidate) <= _required_constant(inner, candidate):
            eta = candidate
            break
    C = _required_constant(samples, eta)
    logger.info("contraction over radius %d: eta=%s C=%s (%d samples, %d skipped)",
                radius, eta, C, len(samples), skipped)
    return ContractionEstimate(
        eta_hat=eta, C_hat=C, sample_radius=radius, samples=len(samples), skipped=skipped
    )
