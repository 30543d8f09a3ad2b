import json

import pytest

from kvdsum.corpus import (
    CorpusFormatError,
    SectionKind,
    classify_section,
    load_corpus,
    section_ratios,
)


def write_corpus(tmp_path, lines):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(json.dumps(line) for line in lines) + "\n")
    return path


def make_line(article_id="d1", intro=3, disc=5, conc=2, abstract=None):
    sections = []
    if intro:
        sections.append({"name": "Introduction",
                         "sentences": [["intro", "sent", str(i), "."] for i in range(intro)]})
    if disc:
        sections.append({"name": "Discussion",
                         "sentences": [["disc", "sent", str(i), "."] for i in range(disc)]})
    if conc:
        sections.append({"name": "Conclusions",
                         "sentences": [["conc", "sent", str(i), "."] for i in range(conc)]})
    return {
        "article_id": article_id,
        "sections": sections,
        "abstract": abstract if abstract is not None else [["a", "reference", "sentence"]],
    }


class TestClassifySection:
    def test_uppercase_introduction(self):
        assert classify_section("INTRODUCTION") is SectionKind.INTRODUCTION

    def test_priority_order(self):
        assert classify_section("Discussion and conclusions") is SectionKind.DISCUSSION

    def test_no_match(self):
        assert classify_section("Methods") is None

    def test_substring_match(self):
        assert classify_section("1. introductory remarks") is SectionKind.INTRODUCTION
        assert classify_section("Concluding remarks") is SectionKind.CONCLUSION


class TestLoadCorpus:
    def test_sentence_ids_cover_filtered_document(self, tmp_path):
        docs = load_corpus(write_corpus(tmp_path, [make_line()]))
        assert len(docs) == 1
        doc = docs[0]
        assert len(doc.sentences) == 10
        assert [s.id for s in doc.sentences] == list(range(10))
        kinds = [kind for kind, _ in doc.sections]
        assert kinds == [SectionKind.INTRODUCTION, SectionKind.DISCUSSION,
                         SectionKind.CONCLUSION]

    def test_unknown_sections_are_dropped(self, tmp_path):
        line = make_line()
        line["sections"].insert(1, {"name": "Methods",
                                    "sentences": [["methods", "stuff"]]})
        doc = load_corpus(write_corpus(tmp_path, [line]))[0]
        assert len(doc.sentences) == 10
        assert all(s.section in SectionKind for s in doc.sentences)

    def test_document_without_target_sections_is_skipped(self, tmp_path, caplog):
        line = {"article_id": "nosec",
                "sections": [{"name": "Methods", "sentences": [["x", "y"]]}],
                "abstract": [["z"]]}
        with caplog.at_level("WARNING"):
            docs = load_corpus(write_corpus(tmp_path, [line, make_line("keep")]))
        assert [d.id for d in docs] == ["keep"]
        assert any("nosec" in rec.message for rec in caplog.records)

    def test_empty_file_gives_empty_corpus(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert load_corpus(path) == []

    def test_malformed_json_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(make_line()) + "\n{not json\n")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path)

    def test_empty_sentence_rejected(self, tmp_path):
        line = make_line()
        line["sections"][0]["sentences"].append([])
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_corpus(write_corpus(tmp_path, [line]))

    def test_lemma_arrays_are_used(self, tmp_path):
        line = {
            "article_id": "lem",
            "sections": [{"name": "Introduction",
                          "sentences": [["Cells", "Divide"]],
                          "lemmas": [["cell", "divide"]]}],
            "abstract": [["cells"]],
        }
        doc = load_corpus(write_corpus(tmp_path, [line]))[0]
        assert [t.lemma for t in doc.sentences[0].tokens] == ["cell", "divide"]
        assert [t.surface for t in doc.sentences[0].tokens] == ["Cells", "Divide"]

    def test_default_lemma_is_lowercased_surface(self, tmp_path):
        line = make_line()
        line["sections"][0]["sentences"][0] = ["Reactive", "Species"]
        doc = load_corpus(write_corpus(tmp_path, [line]))[0]
        assert [t.lemma for t in doc.sentences[0].tokens] == ["reactive", "species"]

    def test_length_equals_token_count(self, tmp_path):
        doc = load_corpus(write_corpus(tmp_path, [make_line()]))[0]
        assert all(s.length == len(s.tokens) for s in doc.sentences)

    def test_deterministic(self, tmp_path):
        path = write_corpus(tmp_path, [make_line(), make_line("d2", 1, 0, 1)])
        assert load_corpus(path) == load_corpus(path)


class TestSectionRatios:
    def test_fixed_mode(self, tmp_path):
        doc = load_corpus(write_corpus(tmp_path, [make_line()]))[0]
        ratios = section_ratios(doc, "fixed")
        assert (ratios.introduction, ratios.discussion, ratios.conclusion) == \
            (0.33, 0.53, 0.14)

    def test_per_doc_mode(self, tmp_path):
        doc = load_corpus(write_corpus(tmp_path, [make_line()]))[0]
        ratios = section_ratios(doc, "per-doc")
        assert (ratios.introduction, ratios.discussion, ratios.conclusion) == \
            (0.3, 0.5, 0.2)

    def test_missing_section_ratio_is_zero(self, tmp_path):
        doc = load_corpus(write_corpus(tmp_path, [make_line(conc=0)]))[0]
        ratios = section_ratios(doc, "per-doc")
        assert ratios.conclusion == 0.0

    def test_per_doc_ratios_sum_to_one(self, tmp_path):
        for intro, disc, conc in [(3, 5, 2), (1, 0, 1), (7, 2, 0)]:
            doc = load_corpus(write_corpus(
                tmp_path, [make_line(intro=intro, disc=disc, conc=conc)]))[0]
            ratios = section_ratios(doc, "per-doc")
            total = ratios.introduction + ratios.discussion + ratios.conclusion
            assert abs(total - 1.0) < 1e-12
