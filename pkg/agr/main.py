"""Main CLI entry point for agr."""

import argparse
import logging
import sys
from typing import Callable, Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .banners import (
    console,
    display_completion_banner,
    display_error,
    display_header,
    display_step_separator,
)
from .config import DEFAULT_BUDGET, DEFAULT_LIMITS, EngelBudget, Limits
from .element import Element, Order, image, insert, mul, order_bounded, section_at
from .engel import (
    CertifiedNotEngel,
    Engel,
    EngelNo,
    EngelYes,
    NotEngel,
    ResourceExceeded,
    TupleVertex,
    branch_certificate,
    build_witness,
    check_periodic_data,
    decide_engel_element,
    decide_engel_pair_with_report,
    engel_profile,
    exponent_survey,
    lemma_check,
    periodic_cycle,
    periodic_state_search,
    verify_witness,
)
from .errors import AutomatonGroupError, ExpressionError, UnknownGroup
from .expressions import GRAMMAR_HELP, apply_definitions, parse_expression
from .groups import (
    GroupPresentation,
    PeriodicData,
    estimate_contraction,
    load_group,
    periodic_data,
)
from .mealy import format_word, parse_word
from .quotients import branch_subgroup, level_quotient
from .reports import (
    branch_record,
    candidate_records,
    certificate_records,
    element_record,
    profile_records,
    record,
    report_records,
    survey_records,
    verdict_record,
    witness_records,
)

logger = logging.getLogger(__name__)

EXIT_DECIDED = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2


class AgrArgumentParser(argparse.ArgumentParser):
    """Usage errors print the expression grammar and exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\nExpression grammar:\n{GRAMMAR_HELP}\n")
        sys.exit(EXIT_ERROR)


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


class CommandRunner:
    """Runs one parsed subcommand and renders its outcome."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.records = args.format == "records"
        self.group: GroupPresentation = load_group(args.group)
        self.env = apply_definitions(args.define or [], self.group.environment(), self.group.p)
        self.limits = Limits()
        self.budget = EngelBudget(
            max_states=getattr(args, "max_states", None) or DEFAULT_BUDGET.max_states,
            max_vertices=getattr(args, "max_vertices", None) or DEFAULT_BUDGET.max_vertices,
            max_c=getattr(args, "max_c", None) or DEFAULT_BUDGET.max_c,
        )

    # -- helpers ----------------------------------------------------------

    def parse(self, text: str) -> Element:
        return parse_expression(text, self.env, self.group.p)

    def parse_tuple(self, text: str) -> tuple[Element, ...]:
        parts = [part for part in text.split(";") if part.strip()]
        if len(parts) < 2:
            raise ExpressionError("a tuple needs at least two ';'-separated expressions", 0)
        return tuple(self.parse(part) for part in parts)

    def emit(self, lines) -> None:
        for line in lines:
            print(line)

    def finish(self, decided: bool, message: str) -> int:
        if not self.records:
            display_completion_banner(decided, message)
        return EXIT_DECIDED if decided else EXIT_UNDECIDED

    def run(self) -> int:
        handler: Callable[[], int] = getattr(self, "cmd_" + self.args.command.replace("-", "_"))
        if not self.records:
            display_header(self.args.command, self.group.name)
        return handler()

    # -- element arithmetic ------------------------------------------------

    def cmd_act(self) -> int:
        g = self.parse(self.args.expr[0])
        word = parse_word(self.args.word, self.group.p)
        result = format_word(image(g, word))
        if self.records:
            self.emit([record("image", word=result or "e")])
        else:
            console.print(result)
        return EXIT_DECIDED

    def cmd_mul(self) -> int:
        product = self.parse(self.args.expr[0])
        for text in self.args.expr[1:]:
            product = mul(product, self.parse(text))
        return self._show_element("product", product)

    def cmd_section(self) -> int:
        g = section_at(self.parse(self.args.expr[0]), parse_word(self.args.word, self.group.p))
        return self._show_element("section", g)

    def cmd_insert(self) -> int:
        g = insert(parse_word(self.args.word, self.group.p), self.parse(self.args.expr[0]))
        return self._show_element("insert", g)

    def _show_element(self, name: str, g: Element) -> int:
        if self.records:
            self.emit([element_record(name, g)])
            return EXIT_DECIDED
        table = Table(title=name, show_header=False)
        table.add_row("states", str(g.size()))
        table.add_row("trivial", "yes" if g.is_trivial() else "no")
        table.add_row("root permutation", " ".join(str(x) for x in g.root_permutation()))
        table.add_row("machine", g.compact())
        console.print(table)
        return EXIT_DECIDED

    def cmd_order(self) -> int:
        g = self.parse(self.args.expr[0])
        result = order_bounded(g, self.args.limit or self.limits.order_budget)
        decided = isinstance(result, Order)
        value = str(result.value) if decided else result.reason
        if self.records:
            self.emit([record("order", kind="order" if decided else "unbounded", value="-".join(value.split()))])
            return EXIT_DECIDED if decided else EXIT_UNDECIDED
        console.print(f"order: [bold]{value}[/bold]")
        return self.finish(decided, f"order {value}" if decided else "order not bounded")

    # -- Engel deciders ------------------------------------------------------

    def cmd_engel_pair(self) -> int:
        g, h = self.parse(self.args.g), self.parse(self.args.h)
        verdict, report = decide_engel_pair_with_report(g, h, self.budget, self.limits)
        decided = not isinstance(verdict, ResourceExceeded)
        if self.records:
            self.emit(report_records(report) if report else [verdict_record(verdict)])
            return EXIT_DECIDED if decided else EXIT_UNDECIDED

        if report is not None:
            table = Table(title="Tuple graph")
            table.add_column("vertices", justify="right")
            table.add_column("edges", justify="right")
            table.add_column("cycles", justify="right")
            table.add_column("budget hit")
            table.add_row(str(len(report.vertices)), str(len(report.edges)),
                          str(len(report.cycles)), "yes" if report.hit_fail else "no")
            console.print(table)
        if isinstance(verdict, EngelYes):
            message = f"Engel: E_{verdict.c}(g,h) = 1"
        elif isinstance(verdict, EngelNo):
            sizes = " -> ".join(",".join(map(str, v.sizes())) for v in verdict.cycle)
            console.print(f"cycle of length {len(verdict.cycle)}: {sizes}")
            if self.group.name == "grigorchuk":
                certificate = branch_certificate(verdict.cycle, verdict.cycle[0].n)
                console.print(f"branch certificate: {certificate}")
            message = "Not Engel: the tuple graph has a non-trivial cycle"
        else:
            message = verdict.reason
        return self.finish(decided, message)

    def cmd_engel_element(self) -> int:
        h = self.parse(self.args.h)
        outcome = decide_engel_element(h, self.group, self.budget, self.limits)
        decided = isinstance(outcome, (Engel, NotEngel))
        if self.records:
            lines = [verdict_record(outcome)]
            if isinstance(outcome, NotEngel):
                lines = list(witness_records(outcome.witness)) + lines
            self.emit(lines)
            return EXIT_DECIDED if decided else EXIT_UNDECIDED
        if isinstance(outcome, NotEngel):
            witness = outcome.witness
            console.print(f"witness g: {witness.g.size()} states, orbit "
                          f"{', '.join(format_word(v) for v in witness.orbit)}")
            return self.finish(True, "Not Engel")
        if isinstance(outcome, Engel):
            return self.finish(True, f"Engel ({outcome.reason})")
        return self.finish(False, outcome.reason)

    def cmd_exponent_survey(self) -> int:
        seeds = [TupleVertex(self.parse_tuple(text)) for text in self.args.tuple or []]
        survey = exponent_survey(self.group, self.args.n, self.args.r, self.budget, self.limits, seeds)
        if self.records:
            self.emit(survey_records(survey))
        else:
            table = Table(title=f"Sweep n={survey.n}, r={survey.radius}")
            table.add_column("tuples", justify="right")
            table.add_column("over budget", justify="right")
            table.add_column("non-trivial cycles", justify="right")
            table.add_column("flagged starts", justify="right")
            table.add_row(str(survey.tuples), str(survey.resource_exceeded),
                          str(len(survey.cycles)), str(len(survey.flagged)))
            console.print(table)
            console.print("[dim]A finite sweep; it does not cover every radius.[/dim]")
        if survey.resource_exceeded and not survey.cycles:
            return self.finish(False, "some explorations ran out of budget")
        return self.finish(True, f"{len(survey.cycles)} non-trivial cycles")

    # -- certificates --------------------------------------------------------

    def _periodic_data(self) -> PeriodicData:
        if self.args.tuple:
            if self.args.period is None or self.args.word is None:
                raise ExpressionError("--tuple needs --period and -w", 0)
            return PeriodicData(
                group=self.group.name,
                A0=self.parse_tuple(self.args.tuple[0]),
                period=self.args.period,
                word=parse_word(self.args.word, self.group.p),
            )
        data = periodic_data(self.group)
        if data is None:
            raise UnknownGroup(f"no built-in periodic tuple for {self.group.name}; pass --tuple")
        return data

    def cmd_lemma(self) -> int:
        data = self._periodic_data()
        if self.args.period is not None and not self.args.tuple:
            certificate = lemma_check(data.A0, self.args.period, data.word)
        else:
            certificate = check_periodic_data(data)
        subgroup = branch_subgroup(self.group)
        branch = None
        if certificate.checked and subgroup is not None:
            branch = branch_certificate(periodic_cycle(certificate), len(certificate.A0), subgroup)
        if self.records:
            self.emit(certificate_records(certificate))
            if branch is not None:
                self.emit([branch_record(branch)])
            return EXIT_DECIDED if certificate.checked else EXIT_UNDECIDED
        table = Table(title=f"Period {certificate.period} below {format_word(certificate.word)}")
        for column in ("i", "fixes word", "non-trivial", "returns to A0", "size"):
            table.add_column(column)
        for i, (check, size) in enumerate(zip(certificate.entries, certificate.sizes), start=1):
            table.add_row(str(i), _yes(check.fixes_word), _yes(check.nontrivial), _yes(check.returns), str(size))
        console.print(table)
        if isinstance(branch, CertifiedNotEngel):
            console.print(f"no element whose order is a multiple of {branch.n} is Engel "
                          f"(A0 lies in {subgroup.name}^{branch.n})")
        return self.finish(certificate.checked, "certificate checked" if certificate.checked else "not certified")

    def cmd_witness(self) -> int:
        h = self.parse(self.args.h)
        data = self._periodic_data()
        if not self.records:
            display_step_separator("BUILDING WITNESS", 1)
        witness = build_witness(h, data.A0, self.limits)
        if not self.records:
            display_step_separator("CHECKING ENGEL WORDS", 2)
        checks = verify_witness(witness, h, data, range(self.args.m + 1), self.budget.max_states)
        ok = witness.cocycle_ok and witness.commutator_ok and all(check.ok for check in checks)
        if self.records:
            self.emit(witness_records(witness, checks))
            return EXIT_DECIDED if ok else EXIT_UNDECIDED
        table = Table(title=f"Orbit of length {len(witness.orbit)} at level {witness.level}")
        table.add_column("m")
        table.add_column("vertex")
        table.add_column("section equals A0")
        for check in checks:
            table.add_row(str(check.m), format_word(check.vertex), _yes(check.ok))
        console.print(table)
        console.print(f"cocycle: {_yes(witness.cocycle_ok)}, commutator: {_yes(witness.commutator_ok)}")
        return self.finish(ok, "witness verified" if ok else "witness checks failed")

    # -- heuristics and quotients ------------------------------------------

    def cmd_search(self) -> int:
        g, h = self.parse(self.args.g), self.parse(self.args.h)
        sizes = engel_profile(g, h, self.args.cmax, self.budget.max_states)
        candidates = periodic_state_search(
            g, h, self.args.cmax, self.args.pmax, self.budget.max_states,
            self.limits.growth_constant, branch_subgroup(self.group),
        )
        if self.records:
            self.emit(list(profile_records(sizes)) + list(candidate_records(candidates)))
            return EXIT_DECIDED
        profile = Table(title="Sizes of E_c")
        profile.add_column("c", justify="right")
        profile.add_column("states", justify="right")
        for c, size in enumerate(sizes):
            profile.add_row(str(c), str(size))
        console.print(profile)
        found = Table(title="Common states of E_c and E_(c+p)")
        for column in ("c", "p", "states", "total size", "in subgroup"):
            found.add_column(column)
        for candidate in candidates[:20]:
            found.add_row(str(candidate.c), str(candidate.period), str(len(candidate.states)),
                          str(candidate.total_size), _yes(candidate.in_subgroup))
        console.print(found)
        return self.finish(True, f"{len(candidates)} candidates")

    def cmd_contraction(self) -> int:
        estimate = estimate_contraction(self.group, self.args.L, self.limits)
        if self.records:
            self.emit([record("contraction", eta=estimate.eta_hat, C=estimate.C_hat,
                              radius=estimate.sample_radius, samples=estimate.samples,
                              skipped=estimate.skipped)])
            return EXIT_DECIDED
        console.print(f"eta = [bold]{estimate.eta_hat}[/bold], C = [bold]{estimate.C_hat}[/bold] "
                      f"over radius {estimate.sample_radius} ({estimate.samples} samples)")
        return self.finish(True, "estimate computed (a heuristic, not a certified bound)")

    def cmd_quotient(self) -> int:
        quotient = level_quotient(self.group, self.args.m, self.limits)
        subgroup = branch_subgroup(self.group)
        index = subgroup.image_index(self.args.m) if subgroup else None
        if self.records:
            fields = {"level": quotient.level, "points": quotient.points, "order": quotient.order}
            if index is not None:
                fields["index"] = index
            self.emit([record("quotient", **fields)])
            return EXIT_DECIDED
        table = Table(title=f"Level {quotient.level} quotient")
        table.add_column("points", justify="right")
        table.add_column("order", justify="right")
        if subgroup:
            table.add_column(f"index of {subgroup.name}", justify="right")
            table.add_row(str(quotient.points), str(quotient.order), str(index))
        else:
            table.add_row(str(quotient.points), str(quotient.order))
        console.print(table)
        return self.finish(True, f"order {quotient.order}")


def _yes(value: bool) -> str:
    return "[green]yes[/green]" if value else "[red]no[/red]"


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--help", action="help", help="Show this help message and exit")
    sub.add_argument("-G", "--group", default="grigorchuk",
                     help="Built-in group (grigorchuk, gupta-sidki) or MAF file (default: grigorchuk)")
    sub.add_argument("--define", action="append", metavar="NAME=EXPR",
                     help="Bind a name to an expression; evaluated left to right")
    sub.add_argument("--format", choices=("text", "records"), default="text",
                     help="Output format (default: text)")
    sub.add_argument("-v", "--verbose", action="count", default=0,
                     help="Log progress (-v info, -vv debug)")


def _add_budget(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--max-states", type=int, help=f"State budget per element (default: {DEFAULT_BUDGET.max_states})")
    sub.add_argument("--max-vertices", type=int, help=f"Vertex budget (default: {DEFAULT_BUDGET.max_vertices})")
    sub.add_argument("--max-c", type=int, help=f"Direct iteration depth (default: {DEFAULT_BUDGET.max_c})")


def build_parser() -> argparse.ArgumentParser:
    parser = AgrArgumentParser(
        prog="agr",
        description="Canonical elements of automaton groups and Engel-property deciders",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  agr act -G grigorchuk -e b -w 12
  agr order -e "a*d"
  agr engel-pair -G grigorchuk -g "(b*a)^4*c" -h "a*d"
  agr lemma grigorchuk
  agr witness -h "a*d" -m 1
  agr quotient -m 3
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, description=help_text, add_help=False)
        _add_common(sub)
        return sub

    sub = command("act", "Image of a word under an element")
    sub.add_argument("-e", "--expr", action="append", required=True)
    sub.add_argument("-w", "--word", required=True)

    sub = command("mul", "Product of expressions, left to right")
    sub.add_argument("-e", "--expr", action="append", required=True)

    sub = command("order", "Order of an element")
    sub.add_argument("-e", "--expr", action="append", required=True)
    sub.add_argument("--limit", type=int, help=f"Recursion budget (default: {DEFAULT_LIMITS.order_budget})")

    sub = command("section", "Section g@v")
    sub.add_argument("-e", "--expr", action="append", required=True)
    sub.add_argument("-w", "--word", required=True)

    sub = command("insert", "Insertion v*g")
    sub.add_argument("-e", "--expr", action="append", required=True)
    sub.add_argument("-w", "--word", required=True)

    sub = command("engel-pair", "Decide whether E_c(g,h) = 1 for some c")
    sub.add_argument("-g", required=True)
    sub.add_argument("-h", required=True)
    _add_budget(sub)

    sub = command("engel-element", "Decide whether h is an Engel element")
    sub.add_argument("-h", required=True)
    _add_budget(sub)

    sub = command("exponent-survey", "Explore every n-tuple over a ball")
    sub.add_argument("-n", type=int, required=True)
    sub.add_argument("-r", type=int, required=True)
    sub.add_argument("--tuple", action="append", metavar="EXPR;EXPR;...", help="Extra start tuple")
    _add_budget(sub)

    sub = command("lemma", "Check a periodic certificate")
    sub.add_argument("builtin", nargs="?", help="grigorchuk or gupta-sidki (sets the group)")
    sub.add_argument("--tuple", action="append", metavar="EXPR;EXPR;...")
    sub.add_argument("--period", type=int)
    sub.add_argument("-w", "--word")

    sub = command("witness", "Build and verify a non-Engel witness for h")
    sub.add_argument("-h", required=True)
    sub.add_argument("-m", type=int, default=1, help="Verify E_(period*m) for m up to this (default: 1)")
    sub.add_argument("--tuple", action="append", metavar="EXPR;EXPR;...")
    sub.add_argument("--period", type=int)
    sub.add_argument("-w", "--word")
    _add_budget(sub)

    sub = command("search", "Size profile and common states of Engel words")
    sub.add_argument("-g", required=True)
    sub.add_argument("-h", required=True)
    sub.add_argument("--cmax", type=int, default=32)
    sub.add_argument("--pmax", type=int, default=9)
    _add_budget(sub)

    sub = command("contraction", "Estimate contraction constants over a ball")
    sub.add_argument("-L", type=int, default=8)

    sub = command("quotient", "Level quotient order and branch-subgroup index")
    sub.add_argument("-m", type=int, required=True)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command, and return the exit code."""
    args = build_parser().parse_args(argv)
    if getattr(args, "builtin", None):
        args.group = args.builtin
    configure_logging(args.verbose)
    try:
        return CommandRunner(args).run()
    except (AutomatonGroupError, ValidationError) as exc:
        logger.debug("command failed", exc_info=True)
        display_error(str(exc))
        return EXIT_ERROR


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
