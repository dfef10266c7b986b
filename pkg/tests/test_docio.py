"""Market document parsing, emission, and label handling."""

import random

import pytest

from hmkt.docio import (
    compile_market,
    doc_from_market,
    emit_market_doc,
    load_market,
    market_digest,
    parse_allocation_literal,
    parse_market_doc,
)
from hmkt.errors import ParseError, TypeConsistencyError
from hmkt.gen import random_market_doc

from conftest import FIXTURE_DIR
from markets import ALL_FIXTURES, MC_TYPE_OF, TW_TYPE_OF


def load_fixture(name):
    return load_market((FIXTURE_DIR / f"{name}.hmkt").read_text())


class TestFixtureFiles:
    @pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
    def test_fixture_compiles_to_the_reference_market(self, name):
        compiled = load_fixture(name)
        assert compiled.market == ALL_FIXTURES[name]

    def test_twin_types_and_priorities(self):
        compiled = load_fixture("twin_objects")
        assert compiled.type_structure is not None
        assert compiled.type_structure.type_of == TW_TYPE_OF
        assert compiled.priorities == ((0, 2), (1,))

    def test_multi_copy_types(self):
        compiled = load_fixture("multi_copy")
        assert compiled.type_structure.type_of == MC_TYPE_OF
        assert compiled.priorities == ((0,), (1, 2), (3, 4))


class TestParseErrors:
    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_market_doc("")

    def test_duplicate_label_position(self):
        text = "agents: 1 2 1\nobjects: a b c\n"
        with pytest.raises(ParseError) as err:
            parse_market_doc(text)
        assert err.value.line == 1 and err.value.col == 13

    def test_non_bijective_endowment(self):
        text = (
            "agents: 1 2\nobjects: a b\nendow: 1=a 2=a\n"
            "pref 1: a > b\npref 2: a > b\n"
        )
        with pytest.raises(ParseError, match="bijection"):
            parse_market_doc(text)

    def test_incomplete_pref_row_reports_line(self):
        text = (
            "agents: 1 2\nobjects: a b\nendow: 1=a 2=b\n"
            "pref 1: a > b\npref 2: a\n"
        )
        with pytest.raises(ParseError) as err:
            parse_market_doc(text)
        assert "'b' missing" in str(err.value)
        assert err.value.line == 5

    def test_unknown_section(self):
        with pytest.raises(ParseError) as err:
            parse_market_doc("agents: 1\nobjects: a\nendow: 1=a\npref 1: a\nbogus: x\n")
        assert err.value.line == 5

    def test_missing_priority_row(self):
        text = (
            "agents: 1 2\nobjects: a b\nendow: 1=a 2=b\n"
            "pref 1: a ~ b\npref 2: a ~ b\ntype a=x\ntype b=x\npriority y: 1\n"
        )
        with pytest.raises(ParseError, match="unknown type"):
            compile_market(parse_market_doc(text))

    def test_type_inconsistency_detected_at_compile(self):
        text = (
            "agents: 1 2\nobjects: a b\nendow: 1=a 2=b\n"
            "pref 1: a > b\npref 2: a ~ b\ntype a=x\ntype b=x\n"
        )
        with pytest.raises(TypeConsistencyError):
            compile_market(parse_market_doc(text))


class TestRoundTrip:
    def test_canonical_emission_is_stable(self):
        for name in sorted(ALL_FIXTURES):
            doc = parse_market_doc((FIXTURE_DIR / f"{name}.hmkt").read_text())
            emitted = emit_market_doc(doc)
            assert emit_market_doc(parse_market_doc(emitted)) == emitted

    def test_generated_documents_round_trip(self):
        rng = random.Random(211)
        for _ in range(40):
            doc = random_market_doc(
                rng.randint(1, 7), rng.random(), rng.randrange(10**6), typed=rng.random() < 0.5
            )
            emitted = emit_market_doc(doc)
            again = parse_market_doc(emitted)
            assert emit_market_doc(again) == emitted
            assert compile_market(again).market == compile_market(doc).market

    def test_digest_tracks_content(self):
        a = parse_market_doc((FIXTURE_DIR / "strict_triangle.hmkt").read_text())
        b = parse_market_doc((FIXTURE_DIR / "indifferent_hub.hmkt").read_text())
        assert market_digest(a) == market_digest(a)
        assert market_digest(a) != market_digest(b)

    def test_doc_from_market_default_labels(self):
        compiled = load_fixture("strict_triangle")
        doc = doc_from_market(compiled.market)
        assert doc.agents == ["1", "2", "3"]
        assert doc.objects == ["a", "b", "c"]
        assert compile_market(doc).market == compiled.market


class TestAllocationLiteral:
    def test_parses_label_syntax(self):
        compiled = load_fixture("strict_triangle")
        assert parse_allocation_literal("1=b,2=a,3=c", compiled) == (1, 0, 2)
        assert parse_allocation_literal(" 1=b , 2=a , 3=c ", compiled) == (1, 0, 2)

    def test_rejects_duplicates_and_gaps(self):
        compiled = load_fixture("strict_triangle")
        with pytest.raises(ParseError):
            parse_allocation_literal("1=b,2=a", compiled)
        with pytest.raises(ParseError):
            parse_allocation_literal("1=b,2=b,3=c", compiled)
        with pytest.raises(ParseError):
            parse_allocation_literal("1=b,1=a,3=c", compiled)
        with pytest.raises(ParseError):
            parse_allocation_literal("1=b,2=a,3=z", compiled)
