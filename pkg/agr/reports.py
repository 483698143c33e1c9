"""Line records for reports: one ``kind key=value ...`` record per line."""

from typing import Iterable, Iterator, Optional, Sequence, Union

from .element import Element
from .engel import (
    Candidate,
    CertifiedNotEngel,
    Engel,
    EngelNo,
    EngelYes,
    ExploreReport,
    NotCertified,
    NotEngel,
    PeriodicCertificate,
    ResourceExceeded,
    SurveyReport,
    TupleVertex,
    Undecided,
    Verdict,
    Witness,
    WitnessCheck,
)
from .mealy import format_word


def _flag(value: bool) -> str:
    return "1" if value else "0"


def _token(text: str) -> str:
    """Values never contain spaces, so records split on whitespace."""
    return "-".join(text.split())


def record(tag: str, /, **fields) -> str:
    return " ".join([tag] + [f"{key}={value}" for key, value in fields.items()])


def vertex_record(vertex_id: int, vertex: TupleVertex) -> str:
    return record(
        "vertex",
        id=vertex_id,
        trivial=_flag(vertex.is_trivial()),
        sizes=",".join(str(s) for s in vertex.sizes()),
        entries="|".join(e.compact() for e in vertex.entries),
    )


def edge_record(src: int, dst: int, descended: bool) -> str:
    return record("edge", src=src, dst=dst, descended=_flag(descended))


def cycle_record(cycle_id: int, vertex_ids: Sequence[int]) -> str:
    return record("cycle", id=cycle_id, vertices=",".join(str(v) for v in vertex_ids))


VERDICT_KINDS = {
    EngelYes: "engel-yes",
    EngelNo: "engel-no",
    ResourceExceeded: "resource-exceeded",
    Engel: "engel",
    NotEngel: "not-engel",
    Undecided: "undecided",
}


def verdict_record(
    verdict: Union[Verdict, Engel, NotEngel, Undecided],
    report: Optional[ExploreReport] = None,
) -> str:
    kind = VERDICT_KINDS[type(verdict)]
    if isinstance(verdict, EngelYes):
        value = str(verdict.c)
    elif isinstance(verdict, EngelNo):
        if report is not None and report.cycles:
            value = ",".join(str(v) for v in report.cycles[0])
        else:
            value = f"length-{len(verdict.cycle)}"
    elif isinstance(verdict, NotEngel):
        value = verdict.witness.g.compact()
    else:
        value = _token(verdict.reason)
    return record("verdict", kind=kind, value=value)


def report_records(report: ExploreReport) -> Iterator[str]:
    for i, vertex in enumerate(report.vertices):
        yield vertex_record(i, vertex)
    for src, dst, descended in report.edges:
        yield edge_record(src, dst, descended)
    for k, cycle in enumerate(report.cycles):
        yield cycle_record(k, cycle)
    yield verdict_record(report.verdict, report)


def certificate_records(certificate: PeriodicCertificate) -> Iterator[str]:
    yield record(
        "certificate",
        period=certificate.period,
        word=format_word(certificate.word),
        length=len(certificate.A0),
        checked=_flag(certificate.checked),
    )
    for i, (check, size) in enumerate(zip(certificate.entries, certificate.sizes), start=1):
        yield record(
            "entry",
            i=i,
            fixes=_flag(check.fixes_word),
            nontrivial=_flag(check.nontrivial),
            returns=_flag(check.returns),
            size=size,
        )


def branch_record(certificate: Union[CertifiedNotEngel, NotCertified]) -> str:
    if isinstance(certificate, CertifiedNotEngel):
        return record("branch", certified=1, n=certificate.n)
    return record("branch", certified=0, reason=_token(certificate.reason))


def profile_records(sizes: Iterable[int]) -> Iterator[str]:
    for c, size in enumerate(sizes):
        yield record("profile", c=c, size=size)


def candidate_records(candidates: Iterable[Candidate]) -> Iterator[str]:
    for candidate in candidates:
        yield record(
            "candidate",
            c=candidate.c,
            period=candidate.period,
            states=len(candidate.states),
            total_size=candidate.total_size,
            in_subgroup=_flag(candidate.in_subgroup),
        )


def survey_records(survey: SurveyReport) -> Iterator[str]:
    yield record(
        "survey",
        n=survey.n,
        r=survey.radius,
        tuples=survey.tuples,
        exceeded=survey.resource_exceeded,
        cycles=len(survey.cycles),
        flagged=len(survey.flagged),
    )
    for k, cycle in enumerate(survey.cycles):
        yield record(
            "cycle",
            id=k,
            length=len(cycle),
            sizes=";".join(",".join(str(s) for s in vertex.sizes()) for vertex in cycle),
        )


def witness_records(witness: Witness, checks: Sequence[WitnessCheck] = ()) -> Iterator[str]:
    yield record(
        "witness",
        level=witness.level,
        orbit=",".join(format_word(v) for v in witness.orbit),
        states=witness.g.size(),
        cocycle=_flag(witness.cocycle_ok),
        commutator=_flag(witness.commutator_ok),
    )
    for check in checks:
        yield record("check", m=check.m, vertex=format_word(check.vertex), ok=_flag(check.ok))


def element_record(name: str, g: Element) -> str:
    return record("element", name=name, states=g.size(), machine=g.compact())
