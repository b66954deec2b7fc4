import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histograph.isiparse import (
    IN_PRESS,
    NO_PAGE,
    NO_VOLUME,
    NO_YEAR,
    UNPUBLISHED,
    BibRecord,
    ExportSyntaxError,
    format_export,
    normalize_author,
    parse_cited_ref,
    parse_export,
    record_ref_key,
    ref_key,
    split_author,
)

TWO_RECORDS = """\
AU VONBONDE C
TI ON A FISH
SO BIOLOGICAL BULLETIN
DT Article
PY 1945
VL 89
BP 17
TC 3
UT R1
ER

AU ZEUTHEN E
TI RESPIRATION STUDY
SO BIOLOGICAL BULLETIN
DT Article
PY 1972
VL 143
BP 10
TC 5
UT R2
ER
EF
"""


def collect():
    warnings = []
    return warnings, lambda line, msg: warnings.append((line, msg))


class TestParseExport:
    def test_two_records_in_file_order(self):
        records = parse_export(TWO_RECORDS)
        assert len(records) == 2
        assert [r.record_id for r in records] == ["R1", "R2"]
        assert records[0].pub_year == 1945
        assert records[0].global_cites == 3

    def test_times_cited_and_reference_lines(self):
        crs = "\n".join(f"CR AUTHOR{i} A, 19{50 + i}, SOMEWHERE, V{i}, P{i}" for i in range(10))
        text = f"AU FRANCIS L\nTI T\nSO B\nPY 1973\nTC 111\n{crs}\nUT X\nER\nEF\n"
        rec = parse_export(text)[0]
        assert rec.global_cites == 111
        assert len(rec.cited_refs) == 10

    def test_record_without_year_is_skipped_with_warning(self):
        warnings, warn = collect()
        text = "AU NOYEAR N\nTI T\nSO B\nUT A\nER\nAU KEEP K\nTI T\nSO B\nPY 1950\nUT B\nER\nEF\n"
        records = parse_export(text, on_warning=warn)
        assert [r.record_id for r in records] == ["B"]
        assert len(warnings) == 1
        assert warnings[0][0] == 1  # the skipped record starts on line 1
        assert "year" in warnings[0][1]

    def test_multiline_title_joined_with_single_spaces(self):
        text = "AU A B\nTI FIRST PART\n   SECOND PART\n   THIRD\nSO S\nPY 1960\nER\nEF\n"
        assert parse_export(text)[0].title == "FIRST PART SECOND PART THIRD"

    def test_au_and_cr_continuations_are_new_items(self):
        text = (
            "AU FIRST A\n   SECOND B\nTI T\nSO S\nPY 1960\n"
            "CR ONE X, 1950, J, V1, P1\n   TWO Y, 1951, J, V2, P2\nER\nEF\n"
        )
        rec = parse_export(text)[0]
        assert rec.authors == ["FIRST A", "SECOND B"]
        assert len(rec.cited_refs) == 2

    def test_duplicate_cr_lines_collapse_keeping_order(self):
        text = (
            "AU A B\nTI T\nSO S\nPY 1960\n"
            "CR SAME S, 1950, J, V1, P1\nCR OTHER O, 1951, J, V2, P2\nCR SAME S, 1950, J, V1, P1\nER\nEF\n"
        )
        rec = parse_export(text)[0]
        assert rec.cited_refs == ["SAME S, 1950, J, V1, P1", "OTHER O, 1951, J, V2, P2"]

    def test_continuation_before_any_tag_is_structural_error(self):
        with pytest.raises(ExportSyntaxError) as err:
            parse_export("   orphan continuation\nER\nEF\n")
        assert err.value.line_no == 1

    def test_ef_inside_record_is_structural_error(self):
        with pytest.raises(ExportSyntaxError, match="missing ER"):
            parse_export("AU A B\nTI T\nPY 1960\nEF\n")

    def test_unterminated_trailing_record_is_structural_error(self):
        with pytest.raises(ExportSyntaxError, match="missing ER"):
            parse_export("AU A B\nTI T\nPY 1960\n")

    def test_unrecognized_tags_kept_not_fatal(self):
        text = "AU A B\nTI T\nSO S\nPY 1960\nJ9 ABBREV\nAB An abstract.\nER\nEF\n"
        rec = parse_export(text)[0]
        assert rec.extras == {"J9": ["ABBREV"], "AB": ["An abstract."]}

    def test_text_after_ef_is_ignored(self):
        text = TWO_RECORDS + "AU GHOST G\nTI NOPE\nPY 1999\nER\n"
        assert len(parse_export(text)) == 2

    def test_implausible_year_rejected(self):
        warnings, warn = collect()
        records = parse_export("AU A B\nTI T\nPY 210\nER\nEF\n", on_warning=warn)
        assert records == [] and len(warnings) == 1


class TestParseCitedRef:
    def test_full_reference(self):
        ref = parse_cited_ref("LOWRY OH, 1951, J BIOL CHEM, V193, P265")
        assert ref.author_key == "LOWRYOH"
        assert ref.year == 1951
        assert ref.source_abbrev == "J BIOL CHEM"
        assert ref.volume == "193"
        assert ref.page == "265"
        assert ref.flags == frozenset()

    def test_unpublished_without_page(self):
        ref = parse_cited_ref("SPIEGELMAN S, 1945, UNPUB BIOL B, V89")
        assert ref.author_key == "SPIEGELMANS"
        assert ref.year == 1945
        assert ref.volume == "89"
        assert ref.flags == {UNPUBLISHED, NO_PAGE}

    def test_book_reference_missing_volume_and_page(self):
        ref = parse_cited_ref("SOKAL RR, 1981, BIOMETRY")
        assert ref.author_key == "SOKALRR"
        assert ref.source_abbrev == "BIOMETRY"
        assert ref.flags == {NO_VOLUME, NO_PAGE}

    def test_in_press_flag(self):
        ref = parse_cited_ref("DOE J, 1999, J THING IN PRESS, V3")
        assert IN_PRESS in ref.flags

    def test_no_year_flag_and_source_keeps_leftovers(self):
        ref = parse_cited_ref("DOE J, SOME BOOK, 2ND ED")
        assert NO_YEAR in ref.flags
        assert ref.source_abbrev == "SOME BOOK, 2ND ED"

    def test_source_starting_with_p_is_not_a_page(self):
        ref = parse_cited_ref("THORSON G, 1946, MEDD KOMM DAN FISK P, V4, P1")
        assert ref.source_abbrev == "MEDD KOMM DAN FISK P"
        assert ref.volume == "4"
        assert ref.page == "1"

    @given(st.text(alphabet=st.characters(blacklist_characters="\n\r"), max_size=80))
    @settings(max_examples=200)
    def test_total_on_arbitrary_strings(self, raw):
        ref = parse_cited_ref(raw)
        assert ref.raw == raw
        assert normalize_author(ref.author_key) == ref.author_key  # normalization fixed point

    def test_whitespace_variants_give_identical_keys(self):
        a = parse_cited_ref("MILLER MA, 1946, BIOL B, V90, P122")
        b = parse_cited_ref("MILLER  MA ,  1946 , BIOL  B ,V90,  P122")
        assert ref_key(a) == ref_key(b)


class TestRefKey:
    def test_full_key(self):
        assert ref_key(parse_cited_ref("MILLER MA, 1946, BIOL B, V90, P122")) == "MILLER-MA-1946-V90-P122"

    def test_key_omits_absent_page(self):
        assert ref_key(parse_cited_ref("SPIEGELMAN S, 1945, UNPUB BIOL B, V89")) == "SPIEGELMAN-S-1945-V89"

    def test_leading_zero_volume_keys_equal(self):
        a = parse_cited_ref("MILLER MA, 1946, BIOL B, V090, P122")
        b = parse_cited_ref("MILLER MA, 1946, BIOL B, V90, P122")
        assert ref_key(a) == ref_key(b) == "MILLER-MA-1946-V90-P122"

    def test_record_key_includes_page(self):
        rec = BibRecord(
            record_id="X", authors=["SPIEGELMAN S"], title="T", source_title="B",
            doc_type="Article", pub_year=1945, volume="89", begin_page="122",
        )
        assert record_ref_key(rec) == "SPIEGELMAN-S-1945-V89-P122"

    @given(
        surname=st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ", min_size=4, max_size=10),
        initials=st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZ", min_size=1, max_size=2),
        year=st.integers(min_value=1900, max_value=2003),
        volume=st.one_of(st.none(), st.integers(min_value=1, max_value=500)),
        page=st.one_of(st.none(), st.integers(min_value=1, max_value=999)),
    )
    @settings(max_examples=200)
    def test_key_equality_is_component_equality(self, surname, initials, year, volume, page):
        parts = [f"{surname} {initials}", str(year), "J SOMETHING"]
        if volume is not None:
            parts.append(f"V{volume}")
        if page is not None:
            parts.append(f"P{page}")
        a = parse_cited_ref(", ".join(parts))
        b = parse_cited_ref(",  ".join(parts))
        assert (a.author_key, a.year, a.volume, a.page) == (b.author_key, b.year, b.volume, b.page)
        assert ref_key(a) == ref_key(b)


class TestSplitAuthor:
    @pytest.mark.parametrize(
        "printed,expected",
        [
            ("LOWRY OH", ("LOWRY", "OH")),
            ("VONBONDE C", ("VONBONDE", "C")),
            ("Atema, J.", ("ATEMA", "J")),
            ("MILLER M A", ("MILLER", "MA")),
            ("DE LA CRUZ A", ("DELACRUZ", "A")),
            ("ANONYMOUS", ("ANONYMOUS", "")),
        ],
    )
    def test_shapes(self, printed, expected):
        assert split_author(printed) == expected


_VALUE = st.text(
    alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 .-",
    min_size=1, max_size=30,
).map(lambda s: " ".join(s.split())).filter(bool)


@st.composite
def records(draw):
    n_refs = draw(st.integers(min_value=0, max_value=4))
    return BibRecord(
        record_id=draw(_VALUE),
        authors=draw(st.lists(_VALUE, max_size=3)),
        title=draw(_VALUE),
        source_title=draw(_VALUE),
        doc_type=draw(st.sampled_from(["Article", "Note", "Review", "Meeting Abstract"])),
        pub_year=draw(st.integers(min_value=1900, max_value=2003)),
        volume=draw(st.one_of(st.none(), st.integers(1, 300).map(str))),
        issue=draw(st.one_of(st.none(), st.integers(1, 12).map(str))),
        begin_page=draw(st.one_of(st.none(), st.integers(1, 999).map(str))),
        end_page=draw(st.one_of(st.none(), st.integers(1, 999).map(str))),
        addresses=draw(st.lists(_VALUE, max_size=2)),
        global_cites=draw(st.integers(min_value=0, max_value=500)),
        cited_refs=sorted({draw(_VALUE) for _ in range(n_refs)}),
    )


@given(st.lists(records(), max_size=5))
@settings(max_examples=100)
def test_round_trip_through_tagged_format(recs):
    warnings, warn = [], lambda l, m: warnings.append((l, m))
    assert parse_export(format_export(recs), on_warning=warn) == recs
    assert not warnings
