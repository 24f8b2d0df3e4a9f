import pytest

from fcm.corpus import (CorpusStats, DuplicateId, EmptyFile, EmptySegment,
                        FailureRecord, MalformedRow, RecordSet, corpus_stats,
                        load_records, segment_by_component, write_records)

from conftest import write_jsonl


def test_load_preserves_order(small_records):
    rs = load_records(small_records)
    assert len(rs) == 4
    assert rs.record_ids == ("r1", "r2", "r3", "r4")


def test_missing_description_is_malformed(tmp_path):
    path = write_jsonl(tmp_path / "bad.jsonl", [
        {"record_id": "a", "component": "annular", "description": "ok"},
        {"record_id": "b", "component": "annular"},
    ])
    with pytest.raises(MalformedRow) as err:
        load_records(path)
    assert err.value.line_no == 2


def test_blank_description_is_malformed(tmp_path):
    path = write_jsonl(tmp_path / "bad.jsonl", [
        {"record_id": "a", "component": "annular", "description": "   "},
    ])
    with pytest.raises(MalformedRow):
        load_records(path)


def test_duplicate_id_is_hard_error(tmp_path):
    path = write_jsonl(tmp_path / "dup.jsonl", [
        {"record_id": "a", "component": "annular", "description": "x"},
        {"record_id": "a", "component": "annular", "description": "y"},
    ])
    with pytest.raises(DuplicateId):
        load_records(path)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("\n\n", encoding="utf-8")
    with pytest.raises(EmptyFile):
        load_records(path)


def test_unknown_component_rejected_by_allowlist(tmp_path):
    path = write_jsonl(tmp_path / "odd.jsonl", [
        {"record_id": "a", "component": "pipe_ram", "description": "x"},
    ])
    with pytest.raises(MalformedRow):
        load_records(path)
    rs = load_records(path, allowed_components=None)
    assert rs.records[0].component == "pipe_ram"


def test_negative_downtime_rejected(tmp_path):
    path = write_jsonl(tmp_path / "neg.jsonl", [
        {"record_id": "a", "component": "annular", "description": "x",
         "downtime_hours": -1},
    ])
    with pytest.raises(MalformedRow):
        load_records(path)


def test_bad_event_date_rejected(tmp_path):
    path = write_jsonl(tmp_path / "date.jsonl", [
        {"record_id": "a", "component": "annular", "description": "x",
         "event_date": "03/02/2017"},
    ])
    with pytest.raises(MalformedRow):
        load_records(path)


def test_csv_round_trip(tmp_path):
    csv_path = tmp_path / "records.csv"
    csv_path.write_text(
        'record_id,component,description,event_date,downtime_hours\n'
        'a,annular,"Seal failed, leak observed",2017-03-02,4.5\n'
        'b,regulator,Vent drip,,\n',
        encoding="utf-8")
    rs = load_records(csv_path)
    assert rs.records[0].description == "Seal failed, leak observed"
    assert rs.records[0].downtime_hours == 4.5
    assert rs.records[1].event_date is None
    assert rs.records[1].downtime_hours is None


def test_lossless_reserialization(small_records, tmp_path):
    rs = load_records(small_records)
    out = tmp_path / "out.jsonl"
    write_records(rs, out)
    again = load_records(out)
    assert again.records == rs.records
    # and byte-stable on a second pass
    out2 = tmp_path / "out2.jsonl"
    write_records(again, out2)
    assert out.read_bytes() == out2.read_bytes()


def test_segment_by_component(small_records):
    rs = load_records(small_records)
    annular = segment_by_component(rs, "annular")
    assert annular.record_ids == ("r1", "r2")
    assert annular.source_label.endswith(":annular")
    with pytest.raises(EmptySegment):
        segment_by_component(rs, "shear_ram")
    with pytest.raises(ValueError):
        segment_by_component(rs, "")


def test_segments_partition(small_records):
    rs = load_records(small_records)
    sizes = []
    for tag in ("annular", "regulator", "ccsv"):
        sizes.append(len(segment_by_component(rs, tag)))
    assert sum(sizes) == len(rs)


def test_stats_empty_set():
    stats = corpus_stats(RecordSet(records=(), source_label="x"))
    assert stats == CorpusStats(0, {}, 0.0, 0.0)


def test_stats_mean_tokens():
    rs = RecordSet(records=(
        FailureRecord("a", "annular", "one two three"),
        FailureRecord("b", "annular", "one two three four five"),
    ))
    assert corpus_stats(rs).mean_token_estimate == 4.0


def test_paper_scale_counts(tmp_path):
    """1312 synthetic records split 247/310/421/334 with 6565 downtime hours."""
    from fcm.synthgen import PlantedSpec, generate_corpus

    counts = {"annular": 247, "shear_ram": 310, "regulator": 421, "ccsv": 334}
    rows = []
    for seed, (tag, count) in enumerate(sorted(counts.items())):
        records, _ = generate_corpus(PlantedSpec(
            n_topics=3, terms_per_topic=12, background_terms=30, docs=count,
            doc_length=(8, 16), topic_weight=0.8, component_tag=tag, seed=seed))
        rows.extend(r.to_dict() for r in records)
    for i, row in enumerate(rows):
        row["downtime_hours"] = 10.0 if i == 0 else 5.0
    path = write_jsonl(tmp_path / "paper.jsonl", rows)

    rs = load_records(path)
    assert len(rs) == 1312
    stats = corpus_stats(rs)
    assert stats.per_component_counts == counts
    assert stats.record_count == sum(counts.values())
    assert stats.total_downtime_hours == 6565.0
    assert len(segment_by_component(rs, "annular")) == 247
    assert len(segment_by_component(rs, "regulator")) == 421


def test_deterministic_document_index(small_records):
    a = load_records(small_records)
    b = load_records(small_records)
    assert a.record_ids == b.record_ids
    assert a.records == b.records


def test_bom_prefixed_csv(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_text("﻿record_id,component,description\n"
                    "a,annular,Seal leak\n", encoding="utf-8")
    rs = load_records(path)
    assert rs.records[0].record_id == "a"
