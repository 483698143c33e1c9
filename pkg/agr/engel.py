"""Engel words, the tuple graph and its decision modes, periodic witnesses.

The tuple graph has n-tuples of elements as vertices. From a vertex the
cyclic differences g_i^-1 g_(i+1) are formed; when all of them fix the first
level the vertex steps to their p sections, otherwise to the differences
themselves. A pair (g, h) with h^n = 1 is Engel exactly when every path from
(g, g^h, ..., g^(h^(n-1))) ends in the trivial tuple.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import networkx as nx

from .config import DEFAULT_BUDGET, DEFAULT_LIMITS, EngelBudget, Limits
from .element import (
    Element,
    Order,
    commutator,
    conjugate,
    fixes_word,
    identity,
    insert,
    inv,
    mul,
    order_bounded,
    power,
    section_at,
    states,
)
from .errors import (
    BadTupleLength,
    BallTooLarge,
    BudgetExceeded,
    NoOrbit,
    OrderMismatch,
    OrderNotMultiple,
)
from .groups import GroupPresentation, PeriodicData, ball, periodic_data
from .mealy import Word, level_permutation
from .quotients import BranchSubgroup, branch_subgroup, grigorchuk_K

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Engel words
# ---------------------------------------------------------------------------

def engel_sequence(g: Element, h: Element, max_states: Optional[int] = None) -> Iterator[Element]:
    """E_0 = g, E_c = [E_(c-1), h], without end."""
    current = g
    c = 0
    while True:
        if max_states is not None and current.size() > max_states:
            raise BudgetExceeded(max_states, current.size())
        logger.debug("E_%d has %d states", c, current.size())
        yield current
        current = commutator(current, h)
        c += 1


def engel_iterate(g: Element, h: Element, c: int, max_states: Optional[int] = None) -> Element:
    if c < 0:
        raise ValueError("depth must be non-negative")
    return next(itertools.islice(engel_sequence(g, h, max_states), c, None))


def engel_profile(g: Element, h: Element, cmax: int, max_states: Optional[int] = None) -> list[int]:
    """Canonical machine sizes of E_0 .. E_cmax."""
    return [E.size() for E in itertools.islice(engel_sequence(g, h, max_states), cmax + 1)]


# ---------------------------------------------------------------------------
# Tuple graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TupleVertex:
    entries: tuple[Element, ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_trivial(self) -> bool:
        return all(e.is_trivial() for e in self.entries)

    def sizes(self) -> tuple[int, ...]:
        return tuple(e.size() for e in self.entries)


def differences(entries: Sequence[Element]) -> tuple[Element, ...]:
    """(g_1^-1 g_2, ..., g_n^-1 g_1)"""
    n = len(entries)
    return tuple(mul(inv(entries[i]), entries[(i + 1) % n]) for i in range(n))


def start_tuple(g: Element, h: Element, n: int) -> TupleVertex:
    """(g, g^h, ..., g^(h^(n-1))); requires p | n and h^n = 1."""
    if n <= 0 or n % g.p:
        raise BadTupleLength(f"tuple length {n} is not a positive multiple of {g.p}")
    if not power(h, n).is_trivial():
        raise OrderMismatch(f"h^{n} is not trivial")
    entries = [g]
    for _ in range(n - 1):
        entries.append(conjugate(entries[-1], h))
    return TupleVertex(tuple(entries))


def step_tuple(t: TupleVertex) -> tuple[list[TupleVertex], bool]:
    """Successors of a vertex and whether the step descended into sections."""
    diffs = differences(t.entries)
    if all(d.fixes_letters() for d in diffs):
        p = diffs[0].p
        successors = [
            TupleVertex(tuple(section_at(d, (letter,)) for d in diffs))
            for letter in range(1, p + 1)
        ]
        return successors, True
    return [TupleVertex(diffs)], False


@dataclass(frozen=True)
class EngelYes:
    c: int


@dataclass(frozen=True)
class EngelNo:
    cycle: tuple[TupleVertex, ...]


@dataclass(frozen=True)
class ResourceExceeded:
    reason: str


Verdict = Union[EngelYes, EngelNo, ResourceExceeded]


@dataclass
class ExploreReport:
    """Reachable part of the tuple graph, its cycles and the resulting verdict."""
    vertices: list[TupleVertex]
    edges: list[tuple[int, int, bool]]
    cycles: list[list[int]]
    hit_fail: bool
    verdict: Verdict
    failed: list[int] = field(default_factory=list)

    def cycle_vertices(self, k: int) -> list[TupleVertex]:
        return [self.vertices[i] for i in self.cycles[k]]


def _graph(vertex_count: int, edges: Sequence[tuple[int, int, bool]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(vertex_count))
    for src, dst, descended in edges:
        graph.add_edge(src, dst, descended=descended)
    return graph


def _cycles(graph: nx.DiGraph, vertices: Sequence[TupleVertex]) -> list[list[int]]:
    """One closed path per non-trivial strongly connected component."""
    found = []
    for component in nx.strongly_connected_components(graph):
        first = min(component)
        if len(component) == 1 and not graph.has_edge(first, first):
            continue
        if len(component) == 1 and vertices[first].is_trivial():
            continue
        edges = nx.find_cycle(graph.subgraph(component), source=first)
        cycle = [src for src, _ in edges]
        pivot = cycle.index(min(cycle))
        found.append(cycle[pivot:] + cycle[:pivot])
    found.sort()
    return found


def explore(t0: TupleVertex, budget: EngelBudget = DEFAULT_BUDGET) -> ExploreReport:
    """
    Breadth-first closure of ``t0`` under step_tuple.

    A vertex with an entry over ``max_states`` is not expanded, and no vertex
    beyond ``max_vertices`` is created; either event counts as reaching fail.
    Cycles are read off the strongly connected components of the final graph,
    so they do not depend on visiting order.
    """
    index = {t0: 0}
    vertices = [t0]
    edges: list[tuple[int, int, bool]] = []
    seen_edges: set[tuple[int, int]] = set()
    failed: list[int] = []
    hit_fail = False

    i = 0
    while i < len(vertices):
        t = vertices[i]
        src = i
        i += 1
        if max(t.sizes()) > budget.max_states:
            hit_fail = True
            failed.append(src)
            continue
        successors, descended = step_tuple(t)
        for s in successors:
            dst = index.get(s)
            if dst is None:
                if len(vertices) >= budget.max_vertices:
                    hit_fail = True
                    continue
                dst = index[s] = len(vertices)
                vertices.append(s)
            if (src, dst) not in seen_edges:
                seen_edges.add((src, dst))
                edges.append((src, dst, descended))
        if i % 1000 == 0:
            logger.debug("explored %d vertices, %d pending", i, len(vertices) - i)

    graph = _graph(len(vertices), edges)
    cycles = _cycles(graph, vertices)

    if cycles:
        verdict: Verdict = EngelNo(tuple(vertices[k] for k in cycles[0]))
    elif hit_fail:
        verdict = ResourceExceeded(
            f"budget reached (max_states={budget.max_states}, max_vertices={budget.max_vertices})"
        )
    elif t0.is_trivial():
        verdict = EngelYes(0)
    else:
        dag = graph.copy()
        dag.remove_edges_from(list(nx.selfloop_edges(dag)))
        verdict = EngelYes(nx.dag_longest_path_length(dag))

    logger.info("explored %d vertices and %d edges: %s", len(vertices), len(edges), type(verdict).__name__)
    return ExploreReport(
        vertices=vertices,
        edges=edges,
        cycles=cycles,
        hit_fail=hit_fail,
        verdict=verdict,
        failed=failed,
    )


def descent_run_length(report: ExploreReport) -> float:
    """Longest run of consecutive non-descending edges; inf if such edges form a cycle."""
    graph = nx.DiGraph()
    graph.add_edges_from((src, dst) for src, dst, descended in report.edges if not descended)
    if graph.number_of_edges() == 0:
        return 0
    if not nx.is_directed_acyclic_graph(graph):
        return math.inf
    return nx.dag_longest_path_length(graph)


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------

def decide_engel_pair_with_report(
    g: Element,
    h: Element,
    budget: EngelBudget = DEFAULT_BUDGET,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[Verdict, Optional[ExploreReport]]:
    """Like decide_engel_pair, also returning the explored graph when one was built."""
    order = order_bounded(h, limits.order_budget)
    if not isinstance(order, Order):
        return ResourceExceeded(f"order of h not determined: {order.reason}"), None

    for c, E in enumerate(engel_sequence(g, h)):
        if E.is_trivial():
            logger.info("E_%d(g,h) is trivial", c)
            return EngelYes(c), None
        if c >= budget.max_c or E.size() > budget.max_states:
            logger.debug("direct iteration stopped at c=%d with %d states", c, E.size())
            break

    n = math.lcm(order.value, g.p)
    report = explore(start_tuple(g, h, n), budget)
    return report.verdict, report


def decide_engel_pair(
    g: Element,
    h: Element,
    budget: EngelBudget = DEFAULT_BUDGET,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """
    Decide whether E_c(g,h) = 1 for some c.

    Direct iteration runs first; the tuple graph is explored only when it
    does not reach the identity within the budget.
    """
    verdict, _ = decide_engel_pair_with_report(g, h, budget, limits)
    return verdict


@dataclass
class SurveyReport:
    """Result of a finite sweep; the parameters are part of the answer."""
    n: int
    radius: int
    tuples: int
    resource_exceeded: int
    cycles: list[list[TupleVertex]]
    # start tuples whose exploration reached a non-trivial cycle
    flagged: list[TupleVertex] = field(default_factory=list)


def exponent_survey(
    G: GroupPresentation,
    n: int,
    radius: int,
    budget: EngelBudget = DEFAULT_BUDGET,
    limits: Limits = DEFAULT_LIMITS,
    seeds: Sequence[TupleVertex] = (),
) -> SurveyReport:
    """Explore from every n-tuple over the ball of ``radius`` (plus seeds) and
    collect the distinct non-trivial cycles."""
    if n <= 0 or n % G.p:
        raise BadTupleLength(f"tuple length {n} is not a positive multiple of {G.p}")
    elements = [g for layer in ball(G, radius, limits) for g in layer]
    count = len(elements) ** n
    if count > limits.max_survey_tuples:
        raise BallTooLarge(f"{count} tuples exceed the survey limit {limits.max_survey_tuples}")

    starts = [TupleVertex(entries) for entries in itertools.product(elements, repeat=n)]
    starts.extend(seeds)

    cycles: list[list[TupleVertex]] = []
    flagged: list[TupleVertex] = []
    seen: set[frozenset] = set()
    exceeded = 0
    for t0 in starts:
        report = explore(t0, budget)
        if report.hit_fail:
            exceeded += 1
        if report.cycles:
            flagged.append(t0)
        for k in range(len(report.cycles)):
            cycle = report.cycle_vertices(k)
            key = frozenset(cycle)
            if key not in seen:
                seen.add(key)
                cycles.append(cycle)
    logger.info("survey n=%d r=%d: %d tuples, %d cycles, %d over budget",
                n, radius, len(starts), len(cycles), exceeded)
    return SurveyReport(n=n, radius=radius, tuples=len(starts), resource_exceeded=exceeded,
                        cycles=cycles, flagged=flagged)


@dataclass(frozen=True)
class CertifiedNotEngel:
    n: int


@dataclass(frozen=True)
class NotCertified:
    reason: str


def branch_certificate(
    cycle: Sequence[TupleVertex],
    n: int,
    subgroup: Optional[BranchSubgroup] = None,
) -> Union[CertifiedNotEngel, NotCertified]:
    """
    A cycle through a non-trivial tuple of branch-subgroup elements shows
    that no element whose order is a multiple of n is Engel.

    The cycle may come from explore() or from periodic_cycle().
    """
    subgroup = subgroup or grigorchuk_K()
    if not cycle:
        return NotCertified("empty cycle")
    for vertex in cycle:
        if vertex.is_trivial():
            continue
        if all(subgroup.contains(e) for e in vertex.entries):
            return CertifiedNotEngel(n)
    return NotCertified(f"no non-trivial cycle vertex lies in {subgroup.name}^{n}")


# ---------------------------------------------------------------------------
# Periodic certificates and witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntryCheck:
    fixes_word: bool
    nontrivial: bool
    returns: bool

    @property
    def ok(self) -> bool:
        return self.fixes_word and self.nontrivial and self.returns


@dataclass(frozen=True)
class PeriodicCertificate:
    A0: tuple[Element, ...]
    period: int
    word: Word
    checked: bool
    entries: tuple[EntryCheck, ...] = ()
    sizes: tuple[int, ...] = ()


def lemma_check(A0: Sequence[Element], period: int, word: Sequence[int]) -> PeriodicCertificate:
    """
    Iterate the cyclic difference recursion ``period`` times and check that
    every resulting entry fixes ``word``, is non-trivial and has section
    A_0,i at ``word``.
    """
    A0 = tuple(A0)
    if len(A0) < 2:
        raise BadTupleLength("a periodic certificate needs at least two entries")
    A = A0
    for step in range(period):
        A = differences(A)
        logger.debug("A_%d sizes %s", step + 1, [e.size() for e in A])

    checks = []
    for start, final in zip(A0, A):
        fixed = fixes_word(final, word)
        checks.append(EntryCheck(
            fixes_word=fixed,
            nontrivial=not final.is_trivial(),
            returns=fixed and section_at(final, word) == start,
        ))
    return PeriodicCertificate(
        A0=A0,
        period=period,
        word=tuple(word),
        checked=all(check.ok for check in checks),
        entries=tuple(checks),
        sizes=tuple(e.size() for e in A),
    )


def check_periodic_data(data: PeriodicData) -> PeriodicCertificate:
    return lemma_check(data.A0, data.period, data.word)


def periodic_cycle(certificate: PeriodicCertificate) -> list[TupleVertex]:
    """
    The tuples A_0, ..., A_(period-1) of a checked certificate.

    Taking sections at the certificate word after the last difference closes
    the walk at A_0, so the list is a cycle for branch_certificate. Sections
    are deferred rather than taken as soon as every entry fixes the root, so
    explore() does not meet this cycle; an unchecked certificate gives [].
    """
    if not certificate.checked:
        return []
    cycle = []
    A = certificate.A0
    for _ in range(certificate.period):
        cycle.append(TupleVertex(A))
        A = differences(A)
    return cycle


@dataclass
class Witness:
    """g built from an orbit of h, with the checks made while building it."""
    g: Element
    orbit: list[Word]
    level: int
    chain: list[Element]
    cocycle_ok: bool
    commutator_ok: bool


def _word_at(index: int, p: int, level: int) -> Word:
    letters = []
    for _ in range(level):
        index, digit = divmod(index, p)
        letters.append(digit + 1)
    return tuple(reversed(letters))


def _full_orbit(h: Element, order: int, limits: Limits) -> tuple[int, list[Word]]:
    """Smallest level with an orbit of length ``order``, labelled v_1..v_N with v_(i+1)^h = v_i."""
    p = h.p
    for level in range(1, limits.witness_max_level + 1):
        if p ** level > limits.max_level_points:
            break
        perm = level_permutation(h.canonical, level)
        starts = []
        seen: set[int] = set()
        for point in range(len(perm)):
            if point in seen:
                continue
            orbit = [point]
            while perm[orbit[-1]] != point:
                orbit.append(perm[orbit[-1]])
            seen.update(orbit)
            if len(orbit) == order:
                starts.extend(orbit)
        if not starts:
            continue
        starts.sort()
        words = [_word_at(point, p, level) for point in starts]
        first = next((w for w in words if section_at(h, w).is_trivial()), words[0])

        inverse = [0] * len(perm)
        for point, image in enumerate(perm):
            inverse[image] = point
        point = starts[words.index(first)]
        labelled = []
        for _ in range(order):
            labelled.append(_word_at(point, p, level))
            point = inverse[point]
        return level, labelled
    raise NoOrbit(f"no orbit of length {order} up to level {limits.witness_max_level}")


def build_witness(
    h: Element,
    A0: Sequence[Element],
    limits: Limits = DEFAULT_LIMITS,
) -> Witness:
    """
    Build g = prod_i v_i * (A_0,(i-1)%k)^(h_i) over an orbit v_1..v_N of h.

    h_i = (h@v_1)^-1 ... (h@v_i)^-1, so that h_i (h@v_i) = h_(i-1) and
    [g,h] = prod_i v_i * (A_1,(i-1)%k)^(h_i).
    """
    order = order_bounded(h, limits.order_budget)
    if not isinstance(order, Order):
        raise NoOrbit(f"order of h not determined: {order.reason}")
    k = len(A0)
    if order.value % k:
        raise OrderNotMultiple(f"order {order.value} of h is not a multiple of {k}")

    level, orbit = _full_orbit(h, order.value, limits)
    N = len(orbit)
    one = identity(h.p)

    chain = []
    current = one
    for v in orbit:
        current = mul(current, inv(section_at(h, v)))
        chain.append(current)
    cocycle_ok = chain[-1].is_trivial() and all(
        mul(chain[i], section_at(h, orbit[i])) == (chain[i - 1] if i else one) for i in range(N)
    )

    g = one
    for i, v in enumerate(orbit):
        g = mul(g, insert(v, conjugate(A0[i % k], chain[i])))

    A1 = differences(A0)
    expected = one
    for i, v in enumerate(orbit):
        expected = mul(expected, insert(v, conjugate(A1[i % k], chain[i])))
    commutator_ok = commutator(g, h) == expected

    logger.info("witness over level %d orbit of length %d: %d states", level, N, g.size())
    return Witness(g=g, orbit=orbit, level=level, chain=chain,
                   cocycle_ok=cocycle_ok, commutator_ok=commutator_ok)


@dataclass(frozen=True)
class WitnessCheck:
    m: int
    vertex: Word
    ok: bool


def verify_witness(
    witness: Witness,
    h: Element,
    data: PeriodicData,
    repeats: Sequence[int] = (0, 1),
    max_states: Optional[int] = None,
) -> list[WitnessCheck]:
    """
    Check E_(period*m)(g,h) @ (v word^m) against the expected entry of A0,
    at v = v_1 and at v = v_N.
    """
    k = len(data.A0)
    N = len(witness.orbit)
    targets = (
        (witness.orbit[0], conjugate(data.A0[0], witness.chain[0])),
        (witness.orbit[-1], conjugate(data.A0[(N - 1) % k], witness.chain[-1])),
    )
    wanted = {data.period * m: m for m in repeats}
    results = []
    for c, E in enumerate(engel_sequence(witness.g, h, max_states)):
        if c in wanted:
            m = wanted.pop(c)
            for vertex, expected in targets:
                path = tuple(vertex) + tuple(data.word) * m
                ok = fixes_word(E, path) and section_at(E, path) == expected and not expected.is_trivial()
                results.append(WitnessCheck(m=m, vertex=tuple(vertex), ok=ok))
        if not wanted:
            break
    return results


# ---------------------------------------------------------------------------
# Heuristics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    c: int
    period: int
    states: tuple[Element, ...]
    in_subgroup: bool = False

    @property
    def total_size(self) -> int:
        return sum(s.size() for s in self.states)


def periodic_state_search(
    g: Element,
    h: Element,
    cmax: int,
    pmax: int,
    max_states: int = DEFAULT_BUDGET.max_states,
    growth_constant: int = DEFAULT_LIMITS.growth_constant,
    subgroup: Optional[BranchSubgroup] = None,
) -> list[Candidate]:
    """
    Look for non-trivial elements that are states of both E_c and E_(c+period).

    States of g and h, and states shared by every E_c with c >= 1, are left
    out; candidates with a state in ``subgroup`` come first.

    Nothing is proposed when some E_c is trivial, or when the sizes leave the
    envelope size(E_c) <= growth_constant * (1+c) * size(E_1).
    """
    words = []
    for E in itertools.islice(engel_sequence(g, h, max_states), cmax + 1):
        if E.is_trivial():
            return []
        words.append(E)

    if len(words) > 1:
        base = words[1].size()
        for c, E in enumerate(words[1:], start=1):
            if E.size() > growth_constant * (1 + c) * base:
                logger.info("size of E_%d leaves the linear envelope", c)
                return []

    state_sets = [
        {s for s in states(E) if not s.is_trivial()} for E in words
    ]
    background = set(states(g)) | set(states(h))
    if len(state_sets) > 2:
        background |= set.intersection(*state_sets[1:])
    state_sets = [found - background for found in state_sets]

    candidates = []
    for period in range(1, pmax + 1):
        for c in range(0, cmax - period + 1):
            common = state_sets[c] & state_sets[c + period]
            if not common:
                continue
            ordered = tuple(sorted(common, key=lambda s: (s.size(), s.compact())))
            member = subgroup is not None and any(subgroup.contains(s) for s in ordered)
            candidates.append(Candidate(c=c, period=period, states=ordered, in_subgroup=member))
    candidates.sort(key=lambda cand: (not cand.in_subgroup, cand.total_size, cand.c, cand.period))
    return candidates


@dataclass(frozen=True)
class Engel:
    reason: str


@dataclass(frozen=True)
class NotEngel:
    witness: Witness
    certificate: PeriodicCertificate


@dataclass(frozen=True)
class Undecided:
    reason: str


def decide_engel_element(
    h: Element,
    G: GroupPresentation,
    budget: EngelBudget = DEFAULT_BUDGET,
    limits: Limits = DEFAULT_LIMITS,
) -> Union[Engel, NotEngel, Undecided]:
    """
    Whether h is Engel in G, from the known sufficient conditions.

    An involution of a 2-group is Engel because E_(1+k)(g,h) = [g,h]^((-2)^k).
    A checked periodic certificate inside the branch subgroup whose length
    divides the order of h yields a witness g with E_c(g,h) != 1 for all c.
    """
    if h.is_trivial():
        return Engel("h is trivial")
    order = order_bounded(h, limits.order_budget)
    if not isinstance(order, Order):
        return Undecided(f"order of h not determined: {order.reason}")
    if order.value == 2 and G.torsion_prime == 2:
        return Engel("h is an involution in a 2-group")

    data = periodic_data(G)
    subgroup = branch_subgroup(G)
    if data is None or subgroup is None:
        return Undecided(f"no periodic certificate known for {G.name}")
    if order.value % len(data.A0):
        return Undecided(f"order {order.value} is not a multiple of {len(data.A0)}")
    if not all(subgroup.contains(a) for a in data.A0):
        return Undecided(f"certificate tuple is not in {subgroup.name}")
    certificate = check_periodic_data(data)
    if not certificate.checked:
        return Undecided("periodic certificate did not check")
    try:
        witness = build_witness(h, data.A0, limits)
    except NoOrbit as exc:
        return Undecided(str(exc))
    if not (witness.cocycle_ok and witness.commutator_ok):
        return Undecided("witness construction failed its own checks")
    return NotEngel(witness=witness, certificate=certificate)
