import json

import pytest

from forc.model import (
    DuplicateLabelError,
    EnrichmentBundle,
    LabelTaxonomy,
    OpenAlexFields,
    Provenance,
    PublicationRecord,
    S2agFields,
    bundle_from_json,
    bundle_to_json,
    dedup_preserving_order,
    load_taxonomy,
    normalize_doi,
    read_records,
    record_from_json,
    record_to_json,
    write_records,
)

from .conftest import make_record


class TestNormalizeDoi:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("10.1038/nphys1170", "10.1038/nphys1170"),
            ("10.1038/NPHYS1170", "10.1038/nphys1170"),
            ("https://doi.org/10.1000/182", "10.1000/182"),
            ("http://dx.doi.org/10.1000/182", "10.1000/182"),
            ("doi:10.1000/182", "10.1000/182"),
            ("DOI:10.1000/182", "10.1000/182"),
            ("10.1/x", "10.1/x"),
            ("  10.5555/abc  ", "10.5555/abc"),
        ],
    )
    def test_valid(self, raw, expected):
        assert normalize_doi(raw) == expected

    @pytest.mark.parametrize("raw", [None, "", "   ", "not-a-doi", "11.1234/x", "10./x", "10.1234/"])
    def test_invalid(self, raw):
        assert normalize_doi(raw) is None


class TestPublicationRecord:
    def test_minimal(self):
        record = make_record()
        assert record.abstract == ""
        assert record.doi is None

    def test_empty_title_rejected(self):
        with pytest.raises(ValueError, match="title"):
            PublicationRecord(id="r", title="", split="train")

    def test_unknown_split_rejected(self):
        with pytest.raises(ValueError, match="split"):
            make_record(split="dev")

    def test_malformed_doi_rejected(self):
        with pytest.raises(ValueError, match="doi"):
            make_record(doi="junk")

    def test_month_range(self):
        assert make_record(publication_month=12).publication_month == 12
        with pytest.raises(ValueError, match="publication_month"):
            make_record(publication_month=0)

    def test_json_round_trip(self):
        record = make_record(
            doi="10.5555/x", label="Physics", publication_year=2020, abstract="A."
        )
        payload = record_to_json(record)
        assert "url" not in payload  # absent fields omitted
        assert record_from_json(payload) == record

    def test_file_round_trip(self, tmp_path):
        records = [make_record("a"), make_record("b", label="Physics")]
        path = tmp_path / "records.jsonl"
        write_records(records, path)
        assert read_records(path) == records


class TestTaxonomy:
    def test_membership_and_group(self):
        tax = LabelTaxonomy(labels=("A", "B"), group_of={"A": "G"})
        assert "A" in tax and "C" not in tax
        assert tax.group("A") == "G"
        assert tax.group("B") == "B"  # ungrouped labels are their own group

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            LabelTaxonomy(labels=("A", "A"))

    def test_load_fixture_taxonomy(self, fixtures_dir):
        tax = load_taxonomy(fixtures_dir / "taxonomy.tsv")
        assert len(tax) == 123
        assert tax.group("Condensed Matter Physics") == "Physical Sciences and Mathematics"
        assert tax.group("Music") == "Arts and Humanities"

    def test_load_duplicate_raises(self, tmp_path):
        path = tmp_path / "tax.tsv"
        path.write_text("A\tG\nB\tG\nA\tG\n", encoding="utf-8")
        with pytest.raises(DuplicateLabelError) as err:
            load_taxonomy(path)
        assert err.value.label == "A"
        assert err.value.line_number == 3

    def test_load_wrong_count_warns_not_raises(self, tmp_path, caplog):
        path = tmp_path / "tax.tsv"
        path.write_text("A\nB\n", encoding="utf-8")
        tax = load_taxonomy(path)
        assert len(tax) == 2
        assert any("expected 123" in r.message for r in caplog.records)
        with pytest.raises(ValueError, match="expected 123"):
            load_taxonomy(path, strict=True)


class TestBundle:
    def test_dedup_preserving_order(self):
        assert dedup_preserving_order(["b", "a", "b", "c", "a"]) == ("b", "a", "c")

    def test_provider_fields_deduplicate(self):
        oa = OpenAlexFields(concepts=("X", "X", "Y"))
        assert oa.concepts == ("X", "Y")

    def test_provider_without_provenance_rejected(self):
        with pytest.raises(ValueError, match="provenance"):
            EnrichmentBundle(record_id="r", s2ag=S2agFields(("Physics",)))

    def test_provenance_source_validated(self):
        with pytest.raises(ValueError, match="source"):
            Provenance(source="network")

    def test_json_round_trip(self):
        bundle = EnrichmentBundle(
            record_id="r",
            openalex=OpenAlexFields(topics=("T",), external_ids={"doi": "d"}),
            s2ag=S2agFields(("Physics",)),
            provenance={
                "openalex": Provenance("fixture"),
                "s2ag": Provenance("cache", fetched_at="2026-08-01T00:00:00+00:00"),
            },
        )
        payload = json.loads(json.dumps(bundle_to_json(bundle)))
        assert bundle_from_json(payload) == bundle
        assert "skipped" not in payload

    def test_skipped_round_trip(self):
        bundle = EnrichmentBundle(record_id="r", skipped=True)
        payload = bundle_to_json(bundle)
        assert payload == {"record_id": "r", "skipped": True}
        assert bundle_from_json(payload) == bundle
