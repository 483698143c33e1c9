"""Tests for reports module."""

from agr.element import identity
from agr.engel import (
    Candidate,
    CertifiedNotEngel,
    EngelNo,
    EngelYes,
    NotCertified,
    ResourceExceeded,
    SurveyReport,
    TupleVertex,
    Undecided,
    explore,
    lemma_check,
)
from agr.groups import grigorchuk_lemma_tuple
from agr.reports import (
    branch_record,
    candidate_records,
    certificate_records,
    cycle_record,
    edge_record,
    element_record,
    profile_records,
    record,
    report_records,
    survey_records,
    verdict_record,
    vertex_record,
)


class TestRecords:
    """Tests for single records."""

    def test_record(self):
        assert record("edge", src=0, dst=1) == "edge src=0 dst=1"

    def test_record_with_kind_field(self):
        assert record("verdict", kind="engel-yes", value=4) == "verdict kind=engel-yes value=4"

    def test_vertex(self, gens):
        line = vertex_record(3, TupleVertex((gens["a"], identity(2))))
        assert line == "vertex id=3 trivial=0 sizes=2,1 entries=2:1,1:1;1:1,2:1|1:0,2:0"

    def test_edge(self):
        assert edge_record(1, 2, True) == "edge src=1 dst=2 descended=1"

    def test_cycle(self):
        assert cycle_record(0, [2, 5, 7]) == "cycle id=0 vertices=2,5,7"

    def test_element(self):
        assert element_record("e", identity(2)) == "element name=e states=1 machine=1:0,2:0"


class TestVerdicts:
    """Tests for verdict records."""

    def test_engel_yes(self):
        assert verdict_record(EngelYes(4)) == "verdict kind=engel-yes value=4"

    def test_engel_no_without_report(self, gens):
        vertex = TupleVertex((gens["a"], gens["a"]))
        assert verdict_record(EngelNo((vertex,))) == "verdict kind=engel-no value=length-1"

    def test_reason_has_no_spaces(self):
        line = verdict_record(ResourceExceeded("budget reached here"))
        assert line == "verdict kind=resource-exceeded value=budget-reached-here"
        assert verdict_record(Undecided("no data")).endswith("value=no-data")

    def test_every_record_splits_into_fields(self, gens):
        report = explore(TupleVertex((gens["a"], identity(2))))
        lines = list(report_records(report))
        assert lines[-1] == "verdict kind=engel-yes value=2"
        for line in lines:
            kind, *fields = line.split()
            assert all("=" in field for field in fields)
        assert sum(line.startswith("vertex ") for line in lines) == 3
        assert sum(line.startswith("edge ") for line in lines) == 3


class TestOtherRecords:
    """Tests for certificates, profiles, candidates and surveys."""

    def test_certificate(self):
        data = grigorchuk_lemma_tuple()
        lines = list(certificate_records(lemma_check(data.A0, data.period, data.word)))
        assert lines[0] == "certificate period=9 word=111112 length=4 checked=1"
        assert len(lines) == 5
        assert all(line.startswith("entry i=") for line in lines[1:])

    def test_branch(self):
        assert branch_record(CertifiedNotEngel(4)) == "branch certified=1 n=4"
        assert branch_record(NotCertified("no vertex in K")) == "branch certified=0 reason=no-vertex-in-K"

    def test_profile(self):
        assert list(profile_records([5, 3])) == ["profile c=0 size=5", "profile c=1 size=3"]

    def test_candidate(self, gens):
        candidate = Candidate(c=2, period=9, states=(gens["a"], gens["b"]), in_subgroup=True)
        assert list(candidate_records([candidate])) == [
            "candidate c=2 period=9 states=2 total_size=7 in_subgroup=1"
        ]

    def test_survey(self):
        survey = SurveyReport(n=2, radius=1, tuples=25, resource_exceeded=0, cycles=[])
        assert list(survey_records(survey)) == ["survey n=2 r=1 tuples=25 exceeded=0 cycles=0 flagged=0"]
