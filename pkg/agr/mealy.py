"""Invertible Mealy machines: MAF parsing, word action, product, inversion and minimization.

Letters are 1..p at every public boundary and 0..p-1 inside the transition
tables.
"""

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    AlphabetMismatch,
    BadAlphabet,
    LetterOutOfRange,
    MachineSyntaxError,
    NotInvertible,
    UnknownState,
)

logger = logging.getLogger(__name__)

Word = tuple[int, ...]

STATE_NAME_PATTERN = r"[A-Za-z][A-Za-z0-9_]*"

_HEADER_RE = re.compile(r"^mealy\s+p=(\d+)\s+states=(\d+)$")
_STATE_RE = re.compile(rf"^({STATE_NAME_PATTERN})\s*\|\s*(.*)$")
_FIELD_RE = re.compile(rf"^(\d+):({STATE_NAME_PATTERN})$")


@dataclass(frozen=True)
class MealyMachine:
    """A finite invertible transducer over the alphabet {1..p}.

    ``outputs[q][x]`` and ``targets[q][x]`` give the output letter and the next
    state on input ``x`` (both 0-based).
    """
    p: int
    names: tuple[str, ...]
    outputs: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.p < 2:
            raise BadAlphabet(f"alphabet size must be at least 2, got {self.p}")
        if not (len(self.names) == len(self.outputs) == len(self.targets)):
            raise ValueError("names, outputs and targets must have one entry per state")
        if not self.names:
            raise ValueError("a machine needs at least one state")
        letters = list(range(self.p))
        count = len(self.names)
        for name, row, nexts in zip(self.names, self.outputs, self.targets):
            if len(row) != self.p or len(nexts) != self.p:
                raise ValueError(f"state '{name}' needs exactly {self.p} transitions")
            if sorted(row) != letters:
                raise NotInvertible(name)
            for target in nexts:
                if not 0 <= target < count:
                    raise UnknownState(str(target))

    @property
    def num_states(self) -> int:
        return len(self.names)

    def state_index(self, name: str) -> int:
        """Index of a state given its display name."""
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownState(name) from None

    def delta(self, state: int, letter: int) -> tuple[int, int]:
        """Transition on a 1-based letter: (1-based output letter, next state)."""
        _check_word((letter,), self.p)
        return self.outputs[state][letter - 1] + 1, self.targets[state][letter - 1]

    def at(self, state: int) -> "PointedMachine":
        return PointedMachine(self, state)


@dataclass(frozen=True)
class PointedMachine:
    """A machine together with the state whose transformation it denotes."""
    machine: MealyMachine
    start: int = 0

    def __post_init__(self):
        if not 0 <= self.start < self.machine.num_states:
            raise UnknownState(str(self.start))

    @property
    def p(self) -> int:
        return self.machine.p


# ---------------------------------------------------------------------------
# MAF v1 documents and words
# ---------------------------------------------------------------------------

def parse_machine(text: str) -> MealyMachine:
    """
    Parse a MAF v1 document.

    Args:
        text: document contents; '#' starts a comment, blank lines are ignored

    Returns:
        The machine with its states in file order.
    """
    header: Optional[tuple[int, int, int]] = None
    declared: list[tuple[int, str, list[tuple[int, str]]]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if header is None:
            match = _HEADER_RE.match(line)
            if not match:
                raise MachineSyntaxError(line_no, "expected 'mealy p=<int> states=<int>'")
            header = (int(match.group(1)), int(match.group(2)), line_no)
            if header[0] < 2:
                raise BadAlphabet(f"alphabet size must be at least 2, got {header[0]}")
            continue

        p = header[0]
        match = _STATE_RE.match(line)
        if not match:
            raise MachineSyntaxError(line_no, "expected '<name> | <out>:<next> ...'")
        name, rest = match.group(1), match.group(2).split()
        if len(rest) != p:
            raise MachineSyntaxError(line_no, f"state '{name}' has {len(rest)} transitions, expected {p}")
        fields = []
        for item in rest:
            field_match = _FIELD_RE.match(item)
            if not field_match:
                raise MachineSyntaxError(line_no, f"malformed transition '{item}'")
            out = int(field_match.group(1))
            if not 1 <= out <= p:
                raise MachineSyntaxError(line_no, f"output letter {out} outside 1..{p}")
            fields.append((out - 1, field_match.group(2)))
        if any(name == other for _, other, _ in declared):
            raise MachineSyntaxError(line_no, f"state '{name}' declared twice")
        declared.append((line_no, name, fields))

    if header is None:
        raise MachineSyntaxError(1, "empty document")
    p, expected_states, header_line = header
    if len(declared) != expected_states:
        raise MachineSyntaxError(
            header_line, f"header declares {expected_states} states, found {len(declared)}"
        )

    index = {name: i for i, (_, name, _) in enumerate(declared)}
    outputs = []
    targets = []
    for _, name, fields in declared:
        outputs.append(tuple(out for out, _ in fields))
        row = []
        for _, target in fields:
            if target not in index:
                raise UnknownState(target)
            row.append(index[target])
        targets.append(tuple(row))

    return MealyMachine(
        p=p,
        names=tuple(name for _, name, _ in declared),
        outputs=tuple(outputs),
        targets=tuple(targets),
    )


def format_machine(machine: MealyMachine) -> str:
    """Serialize a machine as a MAF v1 document, states in stored order."""
    lines = [f"mealy p={machine.p} states={machine.num_states}"]
    for name, row, nexts in zip(machine.names, machine.outputs, machine.targets):
        fields = " ".join(
            f"{out + 1}:{machine.names[target]}" for out, target in zip(row, nexts)
        )
        lines.append(f"{name} | {fields}")
    return "\n".join(lines) + "\n"


def parse_word(text: str, p: Optional[int] = None) -> Word:
    """Parse '1211' (or '1,10,2' for large alphabets) into a tuple of letters."""
    text = text.strip()
    if not text or text in ("e", "ε"):
        return ()
    if "," in text:
        parts = [part.strip() for part in text.split(",")]
    else:
        parts = list(text)
    word = []
    for part in parts:
        if not part.isdigit():
            raise LetterOutOfRange(part, p or 0)
        word.append(int(part))
    if p is not None:
        _check_word(word, p)
    return tuple(word)


def format_word(word: Sequence[int]) -> str:
    if any(letter > 9 for letter in word):
        return ",".join(str(letter) for letter in word)
    return "".join(str(letter) for letter in word)


def _check_word(word: Iterable[int], p: int) -> None:
    for letter in word:
        if not isinstance(letter, int) or not 1 <= letter <= p:
            raise LetterOutOfRange(letter, p)


# ---------------------------------------------------------------------------
# Action and constructions
# ---------------------------------------------------------------------------

def act(m: PointedMachine, word: Sequence[int]) -> Word:
    """Image of a word under the transformation of the start state."""
    machine = m.machine
    _check_word(word, machine.p)
    state = m.start
    image = []
    for letter in word:
        x = letter - 1
        image.append(machine.outputs[state][x] + 1)
        state = machine.targets[state][x]
    return tuple(image)


def follow(m: PointedMachine, word: Sequence[int]) -> PointedMachine:
    """The state reached by reading ``word`` as input (the section m@word)."""
    machine = m.machine
    _check_word(word, machine.p)
    state = m.start
    for letter in word:
        state = machine.targets[state][letter - 1]
    return PointedMachine(machine, state)


def product(m1: PointedMachine, m2: PointedMachine) -> PointedMachine:
    """
    Composition "apply m1 then m2".

    Only pairs reachable from the start pair are built.
    """
    if m1.p != m2.p:
        raise AlphabetMismatch(f"cannot compose machines over {m1.p} and {m2.p} letters")
    p = m1.p
    out1, next1 = m1.machine.outputs, m1.machine.targets
    out2, next2 = m2.machine.outputs, m2.machine.targets

    start = (m1.start, m2.start)
    index = {start: 0}
    pairs = [start]
    outputs = []
    targets = []
    i = 0
    while i < len(pairs):
        q1, q2 = pairs[i]
        i += 1
        row_out = []
        row_next = []
        for x in range(p):
            y = out1[q1][x]
            pair = (next1[q1][x], next2[q2][y])
            j = index.get(pair)
            if j is None:
                j = index[pair] = len(pairs)
                pairs.append(pair)
            row_out.append(out2[q2][y])
            row_next.append(j)
        outputs.append(tuple(row_out))
        targets.append(tuple(row_next))

    machine = MealyMachine(
        p=p,
        names=tuple(f"q{k}" for k in range(len(pairs))),
        outputs=tuple(outputs),
        targets=tuple(targets),
    )
    return PointedMachine(machine, 0)


def invert(m: PointedMachine) -> PointedMachine:
    """Swap input and output labels on every transition."""
    machine = m.machine
    p = machine.p
    outputs = []
    targets = []
    for row, nexts in zip(machine.outputs, machine.targets):
        inv_out = [0] * p
        inv_next = [0] * p
        for x, y in enumerate(row):
            inv_out[y] = x
            inv_next[y] = nexts[x]
        outputs.append(tuple(inv_out))
        targets.append(tuple(inv_next))
    inverse = MealyMachine(
        p=p,
        names=machine.names,
        outputs=tuple(outputs),
        targets=tuple(targets),
    )
    return PointedMachine(inverse, m.start)


def insert_path(word: Sequence[int], m: PointedMachine) -> PointedMachine:
    """
    Machine for ``word * m``: a path reading ``word`` that ends at m's start,
    with every other transition going to an identity state.
    """
    machine = m.machine
    p = machine.p
    _check_word(word, p)
    if not word:
        return m

    length = len(word)
    identity = length
    offset = length + 1
    letters = tuple(range(p))
    outputs: list[tuple[int, ...]] = []
    targets: list[tuple[int, ...]] = []

    for i, letter in enumerate(word):
        following = i + 1 if i + 1 < length else offset + m.start
        outputs.append(letters)
        targets.append(tuple(following if x == letter - 1 else identity for x in letters))
    outputs.append(letters)
    targets.append((identity,) * p)
    for row, nexts in zip(machine.outputs, machine.targets):
        outputs.append(row)
        targets.append(tuple(target + offset for target in nexts))

    built = MealyMachine(
        p=p,
        names=tuple(f"q{k}" for k in range(len(outputs))),
        outputs=tuple(outputs),
        targets=tuple(targets),
    )
    return PointedMachine(built, 0)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

def _reachable(machine: MealyMachine, start: int) -> list[int]:
    """States reachable from start, in BFS order with letters ascending."""
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        state = order[i]
        i += 1
        for target in machine.targets[state]:
            if target not in seen:
                seen.add(target)
                order.append(target)
    return order


def _renumber(machine: MealyMachine, start: int, block_of: dict[int, int]) -> PointedMachine:
    """Quotient by ``block_of`` and number blocks in BFS order from start."""
    representative: dict[int, int] = {}
    for state, block in block_of.items():
        representative.setdefault(block, state)

    number = {block_of[start]: 0}
    order = [block_of[start]]
    outputs = []
    targets = []
    i = 0
    while i < len(order):
        state = representative[order[i]]
        i += 1
        row = []
        for target in machine.targets[state]:
            block = block_of[target]
            k = number.get(block)
            if k is None:
                k = number[block] = len(order)
                order.append(block)
            row.append(k)
        outputs.append(machine.outputs[state])
        targets.append(tuple(row))

    canonical = MealyMachine(
        p=machine.p,
        names=tuple(f"s{k}" for k in range(len(order))),
        outputs=tuple(outputs),
        targets=tuple(targets),
    )
    return PointedMachine(canonical, 0)


def minimize(m: PointedMachine) -> PointedMachine:
    """
    Trim to reachable states, merge equivalent states, renumber canonically.

    The partition starts from the output rows and is refined by successor
    classes until the number of classes is stable. Equal transformations give
    structurally identical results.
    """
    machine = m.machine
    reachable = _reachable(machine, m.start)

    classes: dict[tuple[int, ...], int] = {}
    block_of = {q: classes.setdefault(machine.outputs[q], len(classes)) for q in reachable}
    count = len(classes)
    while True:
        signatures: dict[tuple[int, ...], int] = {}
        refined = {}
        for q in reachable:
            signature = (block_of[q],) + tuple(block_of[t] for t in machine.targets[q])
            refined[q] = signatures.setdefault(signature, len(signatures))
        block_of = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    return _renumber(machine, m.start, block_of)


def canonical_relabel(m: PointedMachine) -> PointedMachine:
    """BFS renumbering only; canonical whenever m's machine is already minimal."""
    reachable = _reachable(m.machine, m.start)
    return _renumber(m.machine, m.start, {q: q for q in reachable})


def is_identity(m: PointedMachine) -> bool:
    """True iff the minimized form is one state with outputs equal to inputs."""
    reduced = minimize(m).machine
    return reduced.num_states == 1 and reduced.outputs[0] == tuple(range(reduced.p))


def bisimilar(m1: PointedMachine, m2: PointedMachine) -> bool:
    """Coinductive equality: pairs assumed equal are never revisited."""
    if m1.p != m2.p:
        raise AlphabetMismatch(f"cannot compare machines over {m1.p} and {m2.p} letters")
    first, second = m1.machine, m2.machine
    assumed = {(m1.start, m2.start)}
    pending = [(m1.start, m2.start)]
    while pending:
        q1, q2 = pending.pop()
        if first.outputs[q1] != second.outputs[q2]:
            return False
        for t1, t2 in zip(first.targets[q1], second.targets[q2]):
            if (t1, t2) not in assumed:
                assumed.add((t1, t2))
                pending.append((t1, t2))
    return True


def level_permutation(m: PointedMachine, level: int) -> list[int]:
    """
    Permutation of X^level induced by the start state.

    Words are indexed in base p with the first letter most significant, so
    index // p is the index of the length level-1 prefix.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    machine = m.machine
    p = machine.p
    cache: dict[tuple[int, int], list[int]] = {}

    def perm(state: int, depth: int) -> list[int]:
        if depth == 0:
            return [0]
        key = (state, depth)
        if key in cache:
            return cache[key]
        block = p ** (depth - 1)
        result = [0] * (p * block)
        for x in range(p):
            base_in = x * block
            base_out = machine.outputs[state][x] * block
            for i, image in enumerate(perm(machine.targets[state][x], depth - 1)):
                result[base_in + i] = base_out + image
        cache[key] = result
        return result

    return perm(m.start, level)
