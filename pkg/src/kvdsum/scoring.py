"""Sentence scoring from memory-tree occurrences.

Each proposition occurrence (one node in one end-of-cycle tree) is scored by
a per-occurrence scorer (constant, inverse depth, degree, or subtree size),
the occurrence scores are aggregated over the document or per section, and
the aggregate n feeds the retrieval curve v = 1 - (1 - rho)^n. A sentence
scores the sum of its propositions' values. Twelve scorer/aggregator
combinations are exposed under names like ``sub-exp``, plus frequency and
random baselines.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .corpus import Document, SectionKind, SectionRatios
from .memory import Occurrence, SimulationTrace
from .propositions import Proposition, prop_key

OCC_SCORERS = ("cnt", "lvl", "deg", "sub")
AGGREGATORS = ("cnt", "wgt", "exp")
HEURISTIC_NAMES = tuple(f"{o}-{a}" for o in OCC_SCORERS for a in AGGREGATORS)
BASELINE_NAMES = ("lead", "longest", "random", "random-wgt", "notree", "oracle")


@dataclass(frozen=True)
class HeuristicConfig:
    occ_scorer: str
    aggregator: str
    rho: float
    ratios: SectionRatios
    memory_limit: int

    def __post_init__(self):
        if self.occ_scorer not in OCC_SCORERS:
            raise ValueError(f"unknown occurrence scorer: {self.occ_scorer!r}")
        if self.aggregator not in AGGREGATORS:
            raise ValueError(f"unknown aggregator: {self.aggregator!r}")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.memory_limit < 1:
            raise ValueError("memory limit must be >= 1")


@dataclass(frozen=True)
class ScoredSentence:
    sentence_id: int
    score: float
    length: int


def parse_heuristic_name(name: str) -> tuple[str, str]:
    parts = name.lower().split("-")
    if len(parts) == 2 and parts[0] in OCC_SCORERS and parts[1] in AGGREGATORS:
        return parts[0], parts[1]
    raise ValueError(
        f"unknown heuristic {name!r}; expected one of {', '.join(HEURISTIC_NAMES)}")


def occurrence_score(occ: Occurrence, scorer: str) -> float:
    if scorer == "cnt":
        return 1.0
    if scorer == "lvl":
        return 1.0 / occ.depth
    if scorer == "deg":
        return float(occ.degree)
    if scorer == "sub":
        return float(occ.subtree_size)
    raise ValueError(f"unknown occurrence scorer: {scorer!r}")


def aggregate(section_scores: dict[SectionKind, list[float]], aggregator: str,
              ratios: SectionRatios) -> float:
    """Collapse per-section occurrence scores into n(p)."""
    if aggregator == "cnt":
        return sum(sum(scores) for scores in section_scores.values())
    total = 0.0
    for kind in SectionKind:
        inner = sum(section_scores.get(kind, ()))
        if aggregator == "wgt":
            total += ratios.get(kind) * inner
        elif inner > 0.0:  # 0^r is 0 for any r > 0
            total += inner ** ratios.get(kind)
    return total


def reproduction_probability(n: float, rho: float) -> float:
    """Retrieval probability 1 - (1 - rho)^n for participation mass n >= 0."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if n < 0:
        raise ValueError(f"participation mass must be >= 0, got {n}")
    return -math.expm1(n * math.log1p(-rho))


def proposition_values(props: list[Proposition], trace: SimulationTrace,
                       cfg: HeuristicConfig) -> dict[int, float]:
    """v(p) for every proposition; zero when it never survived a cycle."""
    grouped: dict[int, dict[SectionKind, list[float]]] = {}
    for occ in trace.occurrences:
        per_section = grouped.setdefault(occ.prop_id, {})
        per_section.setdefault(occ.section, []).append(
            occurrence_score(occ, cfg.occ_scorer))
    values = {}
    for prop in props:
        per_section = grouped.get(prop.id)
        if not per_section:
            values[prop.id] = 0.0
            continue
        n = aggregate(per_section, cfg.aggregator, cfg.ratios)
        values[prop.id] = reproduction_probability(n, cfg.rho)
    return values


def _sum_by_sentence(doc: Document, per_prop: dict[int, float],
                     props: list[Proposition]) -> list[ScoredSentence]:
    totals = {s.id: 0.0 for s in doc.sentences}
    for prop in props:
        totals[prop.sentence_id] += per_prop.get(prop.id, 0.0)
    return [ScoredSentence(s.id, totals[s.id], s.length) for s in doc.sentences]


def sentence_scores(doc: Document, props: list[Proposition],
                    trace: SimulationTrace, cfg: HeuristicConfig) -> list[ScoredSentence]:
    """Heuristic sentence scores: sum of v(p) over each sentence's propositions."""
    return _sum_by_sentence(doc, proposition_values(props, trace, cfg), props)


def notree_scores(doc: Document, props: list[Proposition],
                  rho: float) -> list[ScoredSentence]:
    """Frequency baseline: n(p) counts identical-content propositions in the
    document instead of memory-tree occurrences."""
    keys = [prop_key(p, props) for p in props]
    counts: dict = {}
    for key in keys:
        counts[key] = counts.get(key, 0) + 1
    per_prop = {
        p.id: reproduction_probability(counts[k], rho)
        for p, k in zip(props, keys)
    }
    return _sum_by_sentence(doc, per_prop, props)


def _document_rng(seed: int, document_id: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(document_id.encode("utf-8"))])


def baseline_scores(doc: Document, kind: str, ratios: SectionRatios,
                    seed: int) -> list[ScoredSentence]:
    """Random baselines; the stream is derived from (seed, document id) so
    results do not depend on processing order."""
    rng = _document_rng(seed, doc.id)
    draws = rng.random(len(doc.sentences))
    out = []
    for sent, u in zip(doc.sentences, draws):
        if kind == "random":
            score = float(u)
        elif kind == "random-wgt":
            score = float(u) * ratios.get(sent.section)
        else:
            raise ValueError(f"unknown baseline: {kind!r}")
        out.append(ScoredSentence(sent.id, score, sent.length))
    return out
