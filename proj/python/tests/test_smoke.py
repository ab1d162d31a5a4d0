# Copyright 2026 The cmine Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest

import cmine

DATA = pathlib.Path(os.environ.get("CMINE_DATA_DIR", pathlib.Path(__file__).parents[2] / "data"))
KB = str(DATA / "mini_thesaurus.tsv")
BUCKETS = str(DATA / "semantic_buckets.tsv")


def test_tokenize_offsets():
    assert cmine.tokenize("Ligament tear observed.") == [
        ("ligament", 0, 8),
        ("tear", 9, 13),
        ("observed", 14, 22),
    ]


def test_normalize_and_stem():
    assert cmine.porter_stem("caresses") == "caress"
    assert cmine.normalize("tumour in the brain") == ["tumour", "brain"]
    cfg = cmine.PipelineConfig()
    cfg.remove_stopwords = False
    cfg.stem_mode = "none"
    assert cmine.normalize("Tumour in the Brain", cfg) == ["tumour", "in", "the", "brain"]


def test_lemma_is_unsupported():
    cfg = cmine.PipelineConfig()
    cfg.stem_mode = "lemma"
    with pytest.raises(cmine.UnsupportedError):
        cfg.validate()
    with pytest.raises(cmine.ConfigError):
        cmine.Pipeline.build(KB, cfg)


def test_clustering_transitivity():
    records = [
        ("C0011847", "diabetes", "dsyn"),
        ("C0011849", "diabetes", "dsyn"),
        ("C0011860", "diabetes", "dsyn"),
        ("C0011849", "DM", "dsyn"),
        ("C3250443", "DM", "dsyn"),
    ]
    table = cmine.build_masking_table([list(r) for r in records])
    assert set(table.values()) == {"C0011847"}
    assert len(table) == 4
    assert cmine.term_similarity("diabetes", "diabetes") == 1.0


def test_spell_correction():
    vocab = cmine.VocabularyModel({"heparin": 3, "hepatitis": 1})
    assert cmine.correct("hepain", vocab) == "heparin"
    assert cmine.correct("heparin", vocab) == "heparin"
    assert ("heparin", 1) in cmine.candidates("hepain", vocab)


def test_annotate_superset_and_buckets():
    cfg = cmine.PipelineConfig()
    cfg.superset_only = True
    p = cmine.Pipeline.build(KB, cfg, buckets=BUCKETS)
    r = p.annotate("patient is diagnosed with type 2 diabetes mellitus and hypertension", "d1")
    assert list(r) == ["document_id", "matches", "by_bucket", "timing_ms"]
    assert r["document_id"] == "d1"
    assert {m["matched_term"].lower() for m in r["matches"]} == {
        "type 2 diabetes mellitus",
        "hypertension",
    }
    assert set(r["by_bucket"]) == {"Diagnosis"}


def test_negation_flag():
    p = cmine.Pipeline.build(KB)
    (m,) = p.annotate("Patient does not have diabetes")["matches"]
    assert m["surface"] == "diabetes" and m["negated"]


def test_index_round_trip_and_mismatch(tmp_path):
    p = cmine.Pipeline.build(KB, buckets=BUCKETS)
    idx = tmp_path / "mini.idx"
    p.save(idx)
    q = cmine.Pipeline.load(str(idx), buckets=BUCKETS)
    doc = "Ligament tear; radiograph done; heparin started."
    assert q.annotate(doc, include_timing=False) == p.annotate(doc, include_timing=False)
    assert q.fingerprint == p.fingerprint
    other = cmine.PipelineConfig()
    other.remove_stopwords = False
    with pytest.raises(cmine.ConfigMismatchError):
        cmine.Pipeline.load(str(idx), other)
    idx.write_bytes(idx.read_bytes()[:100])
    with pytest.raises(cmine.IndexFormatError):
        cmine.Pipeline.load(str(idx))


def test_batch_isolates_errors():
    p = cmine.Pipeline.from_records([("C1", "fever", "sosy")])
    out = p.annotate_batch([("a", "high fever"), ("b", "plain text")], jobs=2)
    assert [o["document_id"] for o in out] == ["a", "b"]
    assert out[0]["matches"][0]["concept_id"] == "C1"
    assert out[1]["matches"] == []


def test_missing_file_is_io_error():
    with pytest.raises(cmine.IoError):
        cmine.Pipeline.build("/nonexistent/kb.tsv")
