import pytest

from kvdsum.corpus import Document, SectionKind, Sentence, Token
from kvdsum.metrics import (
    length_stats,
    q_diff,
    rouge_l_recall,
    rouge_n_recall,
)
from kvdsum.selection import SummaryCandidate

INTRO = SectionKind.INTRODUCTION
DISC = SectionKind.DISCUSSION
CONC = SectionKind.CONCLUSION


class TestRougeN:
    def test_unigram_recall(self):
        assert rouge_n_recall(["a", "b", "x"], ["a", "b", "c", "d"], 1) == 0.5

    def test_bigram_recall(self):
        assert rouge_n_recall(["a", "b", "x"], ["a", "b", "c", "d"], 2) == \
            pytest.approx(1 / 3)

    def test_identity_is_one(self):
        ref = ["a", "b", "c", "d"]
        assert rouge_n_recall(ref, ref, 1) == 1.0
        assert rouge_n_recall(ref, ref, 2) == 1.0

    def test_empty_candidate_is_zero(self):
        assert rouge_n_recall([], ["a", "b"], 1) == 0.0

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            rouge_n_recall(["a"], [], 1)

    def test_clipping(self):
        assert rouge_n_recall(["a"], ["a", "a", "b"], 1) == pytest.approx(1 / 3)
        assert rouge_n_recall(["a", "a", "a"], ["a", "a", "b"], 1) == \
            pytest.approx(2 / 3)

    def test_case_insensitive(self):
        assert rouge_n_recall(["The", "Cell"], ["the", "cell"], 1) == 1.0

    def test_reference_shorter_than_n(self):
        assert rouge_n_recall(["a", "b"], ["a"], 2) == 0.0

    def test_candidate_order_irrelevant_for_unigrams(self):
        ref = ["a", "b", "c"]
        assert rouge_n_recall(["c", "a", "b"], ref, 1) == \
            rouge_n_recall(["a", "b", "c"], ref, 1)

    def test_superset_candidate_scores_one(self):
        ref = ["a", "b", "c"]
        cand = ["x", "a", "y", "b", "c", "z", "a", "b"]
        assert rouge_n_recall(cand, ref, 1) == 1.0


class TestRougeL:
    def test_identity(self):
        assert rouge_l_recall(["a", "b", "c"], [["a", "b", "c"]]) == 1.0

    def test_gapped_subsequence(self):
        assert rouge_l_recall(["a", "x", "b", "y", "c"], [["a", "b", "c"]]) == 1.0

    def test_disjoint(self):
        assert rouge_l_recall(["p", "q"], [["a", "b"]]) == 0.0

    def test_multi_sentence_reference(self):
        cand = ["a", "c", "b", "d"]
        assert rouge_l_recall(cand, [["a", "b"], ["c", "d"]]) == 1.0
        assert rouge_l_recall(["d", "c", "b", "a"], [["a", "b"], ["c", "d"]]) == 0.5

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            rouge_l_recall(["a"], [])
        with pytest.raises(ValueError):
            rouge_l_recall(["a"], [[]])


def doc_with_sections(counts):
    """counts = (intro, discussion, conclusion) sentence counts."""
    sentences = []
    ranges = []
    for kind, n in zip((INTRO, DISC, CONC), counts):
        start = len(sentences)
        for _ in range(n):
            sentences.append(Sentence(id=len(sentences), section=kind,
                                      tokens=(Token("w", "w"),)))
        if n:
            ranges.append((kind, range(start, start + n)))
    return Document("secdoc", tuple(ranges), tuple(sentences), (("r",),))


def candidate(ids):
    return SummaryCandidate(tuple(ids), len(ids), 0.0)


class TestQDiff:
    def test_identical_summaries_diverge_zero(self):
        doc = doc_with_sections((2, 2, 1))
        cand = candidate([0, 2])
        assert q_diff(cand, cand, doc) == 0.0

    def test_opposite_halves(self):
        doc = doc_with_sections((2, 2, 0))
        oracle = candidate([0, 2])      # 50 / 50 / 0
        cand = candidate([0, 1])        # 100 / 0 / 0
        assert q_diff(cand, oracle, doc) == pytest.approx(100.0)

    def test_fifteen_sentence_shift(self):
        doc = doc_with_sections((8, 10, 2))
        oracle = candidate(list(range(5)) + list(range(8, 16)) + [18, 19])
        cand = candidate(list(range(6)) + list(range(8, 15)) + [18, 19])
        # oracle 5/8/2 vs candidate 6/7/2 out of 15 sentences
        assert q_diff(cand, oracle, doc) == pytest.approx(13.3, abs=0.1)

    def test_symmetric(self):
        doc = doc_with_sections((3, 3, 3))
        a, b = candidate([0, 3]), candidate([0, 6, 7])
        assert q_diff(a, b, doc) == q_diff(b, a, doc)

    def test_triangle_inequality(self):
        doc = doc_with_sections((3, 3, 3))
        a, b, c = candidate([0, 1]), candidate([3, 6]), candidate([0, 6])
        assert q_diff(a, b, doc) <= q_diff(a, c, doc) + q_diff(c, b, doc) + 1e-9

    def test_empty_arguments_rejected(self):
        doc = doc_with_sections((1, 1, 1))
        with pytest.raises(ValueError):
            q_diff(candidate([]), candidate([0]), doc)
        with pytest.raises(ValueError):
            q_diff(candidate([0]), candidate([]), doc)

    def test_bounded_by_two_hundred(self):
        doc = doc_with_sections((3, 3, 3))
        assert q_diff(candidate([0]), candidate([3]), doc) <= 200.0


def lengths_to_candidates(lengths):
    return [SummaryCandidate((0,), n, 0.0) for n in lengths]


class TestLengthStats:
    def test_two_point(self):
        assert length_stats(lengths_to_candidates([200, 210])) == (205.0, 5.0)

    def test_constant(self):
        mean, std = length_stats(lengths_to_candidates([100, 100, 100]))
        assert (mean, std) == (100.0, 0.0)

    def test_three_point(self):
        mean, std = length_stats(lengths_to_candidates([180, 200, 220]))
        assert mean == 200.0
        assert std == pytest.approx(16.329931618554523, abs=1e-9)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            length_stats([])
