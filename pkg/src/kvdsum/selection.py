"""Budget-constrained sentence selection.

Three strategies pick a sentence subset under a token budget: a score-greedy
sweep, an exact 0-1 knapsack (never exceeding the budget), and a relaxation
of the knapsack that may overshoot when a higher-scoring summary ends up
closer to the budget than the best under-budget one. Lead and longest-first
selectors and a recall-maximizing oracle share the same candidate type.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Document
from .metrics import rouge_n_recall
from .scoring import ScoredSentence


@dataclass(frozen=True)
class SummaryCandidate:
    sentence_ids: tuple[int, ...]   # document order
    total_tokens: int
    total_score: float

    @staticmethod
    def build(ids, scored_by_id) -> "SummaryCandidate":
        ids = tuple(sorted(ids))
        return SummaryCandidate(
            sentence_ids=ids,
            total_tokens=sum(scored_by_id[i].length for i in ids),
            total_score=sum(scored_by_id[i].score for i in ids),
        )


EMPTY_CANDIDATE = SummaryCandidate((), 0, 0.0)


def _by_id(scored: list[ScoredSentence]) -> dict[int, ScoredSentence]:
    return {s.sentence_id: s for s in scored}


def select_greedy(scored: list[ScoredSentence], budget: int) -> SummaryCandidate:
    """Take sentences by descending score while they fit; never stop early."""
    by_id = _by_id(scored)
    chosen: list[int] = []
    total = 0
    for sent in sorted(scored, key=lambda s: (-s.score, s.sentence_id)):
        if total + sent.length <= budget:
            chosen.append(sent.sentence_id)
            total += sent.length
    return SummaryCandidate.build(chosen, by_id)


# A knapsack cell is (score, -length, reversed-complement trick not needed:
# we compare (score, -total_length, smaller id tuple)) — kept as a tuple so
# ties resolve toward shorter, earlier summaries.
_Cell = tuple[float, int, tuple[int, ...]]


def _better(a: _Cell | None, b: _Cell | None) -> _Cell | None:
    if a is None:
        return b
    if b is None:
        return a
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    if a[1] != b[1]:
        return a if a[1] < b[1] else b
    return a if a[2] <= b[2] else b


def _knapsack_table(scored: list[ScoredSentence], capacity: int) -> list[_Cell | None]:
    """best[L] = best (score, length, ids) with total length exactly L."""
    best: list[_Cell | None] = [None] * (capacity + 1)
    best[0] = (0.0, 0, ())
    for sent in sorted(scored, key=lambda s: s.sentence_id):
        if sent.length > capacity:
            continue
        for length in range(capacity - sent.length, -1, -1):
            cell = best[length]
            if cell is None:
                continue
            cand = (cell[0] + sent.score, length + sent.length,
                    cell[2] + (sent.sentence_id,))
            slot = length + sent.length
            best[slot] = _better(best[slot], cand)
    return best


def select_shorter(scored: list[ScoredSentence], budget: int) -> SummaryCandidate:
    """Exact knapsack: maximize total score subject to total length <= budget."""
    by_id = _by_id(scored)
    table = _knapsack_table(scored, budget)
    best: _Cell | None = None
    for cell in table:
        best = _better(best, cell)
    if best is None:
        return EMPTY_CANDIDATE
    return SummaryCandidate.build(best[2], by_id)


def select_closest(scored: list[ScoredSentence], budget: int) -> SummaryCandidate:
    """Relaxed knapsack: allow overshooting when a strictly better-scoring
    summary lands strictly closer to the budget than the under-budget best."""
    by_id = _by_id(scored)
    under = select_shorter(scored, budget)
    slack = budget - under.total_tokens
    if slack <= 0:
        return under
    capacity = 2 * budget - under.total_tokens
    table = _knapsack_table(scored, capacity)
    best = under
    for length in range(budget + 1, capacity + 1):
        cell = table[length]
        if cell is None:
            continue
        if cell[0] <= under.total_score or length - budget >= slack:
            continue
        if (cell[0], -abs(length - budget)) > \
                (best.total_score, -abs(best.total_tokens - budget)):
            best = SummaryCandidate.build(cell[2], by_id)
    return best


def select_lead(doc: Document, budget: int) -> SummaryCandidate:
    """The longest sentence prefix fitting the budget."""
    chosen: list[int] = []
    total = 0
    for sent in doc.sentences:
        if total + sent.length > budget:
            break
        chosen.append(sent.id)
        total += sent.length
    return SummaryCandidate(tuple(chosen), total, 0.0)


def select_longest(doc: Document, budget: int) -> SummaryCandidate:
    """Longest sentences first, skipping whatever no longer fits."""
    chosen: list[int] = []
    total = 0
    for sent in sorted(doc.sentences, key=lambda s: (-s.length, s.id)):
        if total + sent.length <= budget:
            chosen.append(sent.id)
            total += sent.length
    return SummaryCandidate(tuple(sorted(chosen)), total, 0.0)


def _oracle_objective(doc: Document, ids: list[int],
                      reference: list[str]) -> float:
    tokens: list[str] = []
    for sid in sorted(ids):
        tokens.extend(doc.sentences[sid].surfaces)
    return (rouge_n_recall(tokens, reference, 1)
            + rouge_n_recall(tokens, reference, 2))


def oracle_extract(doc: Document, budget: int) -> SummaryCandidate:
    """Greedy forward selection maximizing unigram+bigram recall against the
    reference under the budget, with one optional overshooting addition that
    must improve recall and end closer to the budget."""
    if not doc.reference or not any(doc.reference):
        raise ValueError(f"document {doc.id}: empty reference")
    reference = [tok for sent in doc.reference for tok in sent]

    chosen: list[int] = []
    total = 0
    score = 0.0
    remaining = {s.id: s.length for s in doc.sentences}
    while remaining:
        best_id, best_score = None, score
        for sid in sorted(remaining):
            if total + remaining[sid] > budget:
                continue
            trial = _oracle_objective(doc, chosen + [sid], reference)
            if trial > best_score:
                best_id, best_score = sid, trial
        if best_id is None:
            break
        chosen.append(best_id)
        total += remaining.pop(best_id)
        score = best_score

    # single relaxed addition, mirroring the closest-to-budget rule
    slack = budget - total
    over_id, over_score = None, score
    for sid in sorted(remaining):
        length = remaining[sid]
        if total + length <= budget or (total + length) - budget >= slack:
            continue
        trial = _oracle_objective(doc, chosen + [sid], reference)
        if trial > over_score:
            over_id, over_score = sid, trial
    if over_id is not None:
        chosen.append(over_id)
        total += remaining.pop(over_id)
        score = over_score

    return SummaryCandidate(tuple(sorted(chosen)), total, score)
