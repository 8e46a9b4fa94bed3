import io
import json

import pytest

from stabgain.dataio import (
    COLUMNS,
    aggregate_by_model,
    format_dataset,
    format_scores,
    parse_dataset,
    write_dataset,
)
from stabgain.errors import DuplicateKey, EmptyDataset, EmptyFile, MalformedRow, MissingColumn, OutOfRange
from stabgain.scoring import score_dataset, score_observation

from conftest import obs

HEADER = ",".join(COLUMNS) + "\n"


def parse_text(text, fmt="csv"):
    return parse_dataset(io.StringIO(text), fmt)


def test_canonical_file(tmp_path, paper_data):
    path = tmp_path / "data.csv"
    write_dataset(paper_data, path)
    parsed = parse_dataset(path)
    assert len(parsed.rows) == 80
    assert len({o.model_id for o in parsed.rows}) == 4
    assert len({o.scenario_id for o in parsed.rows}) == 20
    assert parsed.source_format == "csv"


def test_roundtrip_reproduces_scores(tmp_path, paper_data):
    for fmt in ("csv", "json"):
        path = tmp_path / f"data.{fmt}"
        write_dataset(paper_data, path, fmt)
        parsed = parse_dataset(path)
        assert parsed.source_format == fmt
        assert score_dataset(parsed.rows) == score_dataset(paper_data)


def test_column_order_insensitive():
    text = "scenario,model,entropy,utility,reflective,integration\ns1,m,0.1,0.9,0.8,0.7\n"
    (row,) = parse_text(text).rows
    assert (row.model_id, row.utility, row.integration) == ("m", 0.9, 0.7)


def test_header_only():
    with pytest.raises(EmptyFile):
        parse_text(HEADER)
    with pytest.raises(EmptyFile):
        parse_text("")


def test_out_of_range_reports_line():
    text = HEADER + "m,s1,0.9,0.1,0.8,0.9\nm,s2,1.05,0.1,0.8,0.9\n"
    with pytest.raises(MalformedRow) as info:
        parse_text(text)
    assert info.value.line == 3
    assert isinstance(info.value.cause, OutOfRange)


def test_wrong_field_count():
    with pytest.raises(MalformedRow) as info:
        parse_text(HEADER + "m,s1,0.9,0.1\n")
    assert info.value.line == 2


def test_missing_column():
    with pytest.raises(MissingColumn) as info:
        parse_text("model,scenario,utility,entropy,integration\nm,s,1,0,0,\n")
    assert info.value.name == "reflective"


def test_duplicate_key():
    with pytest.raises(DuplicateKey):
        parse_text(HEADER + "m,s1,0.9,0.1,0.8,0.9\nm,s1,0.8,0.1,0.8,0.9\n")


def test_json_object_form():
    payload = {"observations": [dict(zip(COLUMNS, ["m", "s", 0.9, 0.1, 0.8, 0.9]))]}
    (row,) = parse_text(json.dumps(payload), "json").rows
    assert row.reflective == 0.9


def test_json_bad_record():
    payload = [dict(zip(COLUMNS, ["m", "s", 0.9, 0.1, 0.8, 2.0]))]
    with pytest.raises(MalformedRow) as info:
        parse_text(json.dumps(payload), "json")
    assert info.value.line == 1


def test_format_deterministic(paper_data):
    assert format_dataset(paper_data) == format_dataset(list(paper_data))
    assert format_scores(score_dataset(paper_data)).count("\n") == 81


class TestAggregate:
    def test_paper_means(self, paper_data):
        aggs = {a.model_id: a for a in aggregate_by_model(score_dataset(paper_data))}
        table = {
            "DeepSeek-V3": (1.9062, 0.9178, 0.9424, 0.0246),
            "GPT-4o": (1.9539, 0.9406, 0.9620, 0.0215),
            "Gemini-1.5": (1.8485, 0.8065, 0.8744, 0.0679),
            "Grok-3": (1.8518, 0.9775, 0.9830, 0.0055),
        }
        assert list(aggs) == sorted(table)
        for model, (d, e, es, g) in table.items():
            a = aggs[model]
            assert a.n == 20
            assert (a.denominator, a.reduced, a.generalized, a.gain) == pytest.approx((d, e, es, g), abs=0.005)

    def test_single_model_equals_global(self):
        recs = score_dataset([obs(scenario="a", u=0.8), obs(scenario="b", u=0.6, s=0.2)])
        (agg,) = aggregate_by_model(recs)
        assert agg.utility == pytest.approx(0.7)
        assert agg.gain == pytest.approx(sum(r.gain for r in recs) / 2)

    def test_identical_observations(self):
        recs = score_dataset([obs(scenario="a"), obs(scenario="b")])
        (agg,) = aggregate_by_model(recs)
        single = score_observation(obs())
        assert (agg.utility, agg.entropy, agg.generalized, agg.gain) == (
            single.observation.utility, single.observation.entropy, single.generalized, single.gain)
        assert agg.gain_sd == 0

    def test_hull(self, paper_data):
        recs = score_dataset(paper_data)
        for a in aggregate_by_model(recs):
            gains = [r.gain for r in recs if r.observation.model_id == a.model_id]
            assert min(gains) <= a.gain <= max(gains)

    def test_empty(self):
        with pytest.raises(EmptyDataset):
            aggregate_by_model([])
