"""Recall-oriented evaluation: n-gram recall, LCS recall, per-section
divergence from the oracle, and summary-length statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .corpus import Document, SectionKind


@dataclass(frozen=True)
class EvalReport:
    r1: float
    r2: float
    rl: float
    q_diff: float | None
    length: int


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n_recall(candidate: list[str], reference: list[str], n: int) -> float:
    """Clipped n-gram overlap divided by the reference n-gram count."""
    if not reference:
        raise ValueError("empty reference")
    ref = _ngrams([t.lower() for t in reference], n)
    total = sum(ref.values())
    if total == 0:
        return 0.0
    cand = _ngrams([t.lower() for t in candidate], n)
    hits = sum(min(count, cand[gram]) for gram, count in ref.items())
    return hits / total


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for tok in a:
        cur = [0]
        for j, other in enumerate(b, start=1):
            if tok == other:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_recall(candidate: list[str], reference: list[list[str]]) -> float:
    """Summary-level LCS recall: each reference sentence is matched against
    the full candidate sequence; sizes are summed over the reference."""
    if not reference or all(len(s) == 0 for s in reference):
        raise ValueError("empty reference")
    cand = [t.lower() for t in candidate]
    matched = 0
    total = 0
    for sent in reference:
        ref = [t.lower() for t in sent]
        total += len(ref)
        matched += _lcs_length(ref, cand)
    return matched / total


def _section_percentages(sentence_ids, doc: Document) -> dict[SectionKind, float]:
    counts = {kind: 0 for kind in SectionKind}
    for sid in sentence_ids:
        counts[doc.section_of(sid)] += 1
    total = len(sentence_ids)
    return {kind: 100.0 * counts[kind] / total for kind in SectionKind}


def q_diff(candidate, oracle, doc: Document) -> float:
    """Summed absolute divergence, in percentage points, between the
    candidate's and the oracle's per-section sentence proportions."""
    if not candidate.sentence_ids:
        raise ValueError("empty candidate summary")
    if not oracle.sentence_ids:
        raise ValueError("empty oracle summary")
    cand = _section_percentages(candidate.sentence_ids, doc)
    orac = _section_percentages(oracle.sentence_ids, doc)
    return sum(abs(orac[kind] - cand[kind]) for kind in SectionKind)


def length_stats(candidates) -> tuple[float, float]:
    """Mean and population standard deviation of summary token lengths."""
    lengths = [c.total_tokens for c in candidates]
    if not lengths:
        raise ValueError("no summaries to describe")
    mean = sum(lengths) / len(lengths)
    var = sum((x - mean) ** 2 for x in lengths) / len(lengths)
    return mean, math.sqrt(var)
