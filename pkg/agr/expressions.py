"""Word-expression grammar for group elements.

    expr     := term { "*" term }
    term     := factor { "^" exponent }
    exponent := integer | factor          (integer: power, factor: conjugation)
    factor   := "1" | name | "(" expr ")" | "[" expr "," expr "]" | "comm(" expr "," expr ")"

Examples: ``(b*a)^4*c``, ``x^-2``, ``x^(c*a)``, ``[a,b]^2``.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union

import pyparsing as pp

from .element import Element, commutator, conjugate, identity, mul, power
from .errors import ExpressionError, UnknownGenerator

logger = logging.getLogger(__name__)

GRAMMAR_HELP = __doc__.split("\n\n")[1].strip("\n")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Generator:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int

    def __str__(self) -> str:
        return f"{_atom(self.base)}^{self.exponent}"


@dataclass(frozen=True)
class Conjugate:
    base: "Node"
    by: "Node"

    def __str__(self) -> str:
        return f"{_atom(self.base)}^{_atom(self.by, exponent=True)}"


@dataclass(frozen=True)
class Commutator:
    left: "Node"
    right: "Node"

    def __str__(self) -> str:
        return f"[{self.left},{self.right}]"


@dataclass(frozen=True)
class Product:
    factors: tuple["Node", ...]

    def __str__(self) -> str:
        return "*".join(str(factor) for factor in self.factors)


Node = Union[Identity, Generator, Power, Conjugate, Commutator, Product]


def _atom(node: Node, exponent: bool = False) -> str:
    """Render a node so it parses back as a single factor."""
    if isinstance(node, (Generator, Commutator)):
        return str(node)
    if isinstance(node, Identity) and not exponent:
        return "1"
    return f"({node})"


# ---------------------------------------------------------------------------
# Grammar
# ---------------------------------------------------------------------------

def _make_term(tokens: pp.ParseResults) -> Node:
    node = tokens[0]
    for exponent in tokens[1:]:
        if isinstance(exponent, int):
            node = Power(node, exponent)
        else:
            node = Conjugate(node, exponent)
    return node


def _make_product(tokens: pp.ParseResults) -> Node:
    factors: list[Node] = []
    for token in tokens:
        if isinstance(token, Product):
            factors.extend(token.factors)
        else:
            factors.append(token)
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


@lru_cache(maxsize=None)
def _grammar() -> pp.ParserElement:
    expr = pp.Forward()

    integer = pp.Regex(r"[-+]?\d+").set_parse_action(lambda t: int(t[0]))
    one = pp.Keyword("1").set_parse_action(lambda: Identity())
    name = pp.Word(pp.alphas, pp.alphanums + "_").set_parse_action(lambda t: Generator(t[0]))

    lpar, rpar = pp.Suppress("("), pp.Suppress(")")
    lbr, rbr = pp.Suppress("["), pp.Suppress("]")
    comma = pp.Suppress(",")

    comm = (pp.Suppress(pp.Keyword("comm")) + lpar + expr + comma + expr + rpar)
    bracket = lbr + expr + comma + expr + rbr
    comm.set_parse_action(lambda t: Commutator(t[0], t[1]))
    bracket.set_parse_action(lambda t: Commutator(t[0], t[1]))

    factor = comm | bracket | one | name | (lpar + expr + rpar)
    exponent = integer | factor
    term = (factor + pp.ZeroOrMore(pp.Suppress("^") + exponent)).set_parse_action(_make_term)
    expr <<= (term + pp.ZeroOrMore(pp.Suppress("*") + term)).set_parse_action(_make_product)
    return expr


def parse_ast(text: str) -> Node:
    """Parse an expression into its AST, or raise ExpressionError with the position."""
    try:
        return _grammar().parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ExpressionError(exc.msg, exc.loc) from None


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(node: Node, env: Mapping[str, Element], p: Optional[int] = None) -> Element:
    """Evaluate an AST against named elements; ``p`` is only needed for ``1`` in an empty env."""
    if p is None:
        p = next(iter(env.values())).p if env else None

    def walk(item: Node) -> Element:
        if isinstance(item, Identity):
            if p is None:
                raise ExpressionError("cannot evaluate '1' without an alphabet", 0)
            return identity(p)
        if isinstance(item, Generator):
            if item.name not in env:
                raise UnknownGenerator(item.name)
            return env[item.name]
        if isinstance(item, Power):
            return power(walk(item.base), item.exponent)
        if isinstance(item, Conjugate):
            return conjugate(walk(item.base), walk(item.by))
        if isinstance(item, Commutator):
            return commutator(walk(item.left), walk(item.right))
        result = walk(item.factors[0])
        for factor in item.factors[1:]:
            result = mul(result, walk(factor))
        return result

    return walk(node)


def parse_expression(text: str, env: Mapping[str, Element], p: Optional[int] = None) -> Element:
    return evaluate(parse_ast(text), env, p)


def apply_definitions(
    definitions: Iterable[str],
    env: Mapping[str, Element],
    p: Optional[int] = None,
) -> dict[str, Element]:
    """
    Evaluate ``name=expr`` bindings left to right.

    Each binding sees the generators and every earlier binding.

    Returns:
        A new environment; the one passed in is not modified.
    """
    bound = dict(env)
    for definition in definitions:
        name, sep, text = definition.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ExpressionError(f"expected name=expr, got '{definition}'", 0)
        if not (name[0].isalpha() and name.replace("_", "").isalnum()):
            raise ExpressionError(f"'{name}' is not a valid name", 0)
        bound[name] = parse_expression(text, bound, p)
        logger.debug("defined %s = %s (%d states)", name, text.strip(), bound[name].size())
    return bound
