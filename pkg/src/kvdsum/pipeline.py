"""Batch orchestration: corpus + parses in, summaries/traces/reports out.

Everything here is deterministic for a fixed (corpus, parses, config, seed):
documents are processed in article-id order, random streams are derived per
document, and all files are written with sorted keys.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, SectionRatios, load_corpus, section_ratios
from .memory import SimulationTrace, run_simulation
from .metrics import EvalReport, length_stats, q_diff, rouge_l_recall, rouge_n_recall
from .propositions import Proposition, extract_document, read_conllu
from .scoring import (
    BASELINE_NAMES,
    HEURISTIC_NAMES,
    HeuristicConfig,
    ScoredSentence,
    baseline_scores,
    notree_scores,
    parse_heuristic_name,
    sentence_scores,
)
from .selection import (
    SummaryCandidate,
    oracle_extract,
    select_closest,
    select_greedy,
    select_lead,
    select_longest,
    select_shorter,
)

log = logging.getLogger(__name__)

STRATEGIES = ("greedy", "shorter", "closest")
SELECTOR_ONLY = ("lead", "longest", "oracle")


@dataclass(frozen=True)
class RunConfig:
    corpus: Path
    parses: Path | None
    heuristic: str
    memory_limit: int = 5
    rho: float = 0.3
    budget: int = 205
    strategy: str = "closest"
    ratio_mode: str = "fixed"
    seed: int = 0
    out: Path = Path("out")

    def __post_init__(self):
        valid = HEURISTIC_NAMES + BASELINE_NAMES
        if self.heuristic not in valid:
            raise ValueError(
                f"unknown heuristic {self.heuristic!r}; valid names: "
                + ", ".join(valid))
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; "
                             f"valid: {', '.join(STRATEGIES)}")
        if self.memory_limit < 1 or self.budget < 1:
            raise ValueError("memory limit and budget must be >= 1")
        if self.ratio_mode not in ("fixed", "per-doc"):
            raise ValueError(f"unknown ratio mode {self.ratio_mode!r}")


@dataclass
class DocumentState:
    """Lazily computed per-document artifacts shared across sweep cells."""
    doc: Document
    parse_path: Path | None
    props: list[Proposition] | None = None
    traces: dict[int, SimulationTrace] = field(default_factory=dict)
    oracle: SummaryCandidate | None = None

    def propositions(self) -> list[Proposition]:
        if self.props is None:
            if self.parse_path is None:
                raise FileNotFoundError(
                    f"no parse sidecar available for document {self.doc.id}")
            if not self.parse_path.exists():
                raise FileNotFoundError(
                    f"missing parse sidecar {self.parse_path}")
            self.props = extract_document(self.doc, read_conllu(self.parse_path))
        return self.props

    def trace(self, memory_limit: int) -> SimulationTrace:
        if memory_limit not in self.traces:
            self.traces[memory_limit] = run_simulation(
                self.doc, self.propositions(), memory_limit)
        return self.traces[memory_limit]

    def oracle_summary(self, budget: int) -> SummaryCandidate:
        if self.oracle is None:
            self.oracle = oracle_extract(self.doc, budget)
        return self.oracle


def load_states(corpus_path: Path, parses_dir: Path | None) -> list[DocumentState]:
    docs = load_corpus(corpus_path)
    states = []
    for doc in sorted(docs, key=lambda d: d.id):
        parse_path = parses_dir / f"{doc.id}.conllu" if parses_dir else None
        states.append(DocumentState(doc=doc, parse_path=parse_path))
    return states


def score_document(state: DocumentState, cfg: RunConfig) -> list[ScoredSentence]:
    """Sentence scores for any scoring-based heuristic or baseline name."""
    doc = state.doc
    ratios = section_ratios(doc, cfg.ratio_mode)
    if cfg.heuristic in HEURISTIC_NAMES:
        occ, agg = parse_heuristic_name(cfg.heuristic)
        hc = HeuristicConfig(occ, agg, cfg.rho, ratios, cfg.memory_limit)
        return sentence_scores(doc, state.propositions(),
                               state.trace(cfg.memory_limit), hc)
    if cfg.heuristic == "notree":
        return notree_scores(doc, state.propositions(), cfg.rho)
    if cfg.heuristic in ("random", "random-wgt"):
        return baseline_scores(doc, cfg.heuristic, ratios, cfg.seed)
    raise ValueError(f"{cfg.heuristic!r} does not produce sentence scores")


def summarize_document(state: DocumentState, cfg: RunConfig
                       ) -> tuple[SummaryCandidate, list[ScoredSentence]]:
    doc = state.doc
    if cfg.heuristic == "lead":
        return select_lead(doc, cfg.budget), []
    if cfg.heuristic == "longest":
        return select_longest(doc, cfg.budget), []
    if cfg.heuristic == "oracle":
        return state.oracle_summary(cfg.budget), []
    scored = score_document(state, cfg)
    select = {"greedy": select_greedy, "shorter": select_shorter,
              "closest": select_closest}[cfg.strategy]
    return select(scored, cfg.budget), scored


def evaluate_candidate(state: DocumentState, candidate: SummaryCandidate,
                       budget: int) -> EvalReport:
    doc = state.doc
    tokens = [tok for sid in candidate.sentence_ids
              for tok in doc.sentences[sid].surfaces]
    reference_flat = [tok for sent in doc.reference for tok in sent]
    if not reference_flat:
        raise ValueError(f"document {doc.id}: empty reference")
    r1 = rouge_n_recall(tokens, reference_flat, 1)
    r2 = rouge_n_recall(tokens, reference_flat, 2)
    rl = rouge_l_recall(tokens, [list(s) for s in doc.reference])
    try:
        qd = q_diff(candidate, state.oracle_summary(budget), doc)
    except ValueError:
        qd = None
    return EvalReport(r1=r1, r2=r2, rl=rl, q_diff=qd,
                      length=candidate.total_tokens)


@dataclass(frozen=True)
class CorpusRow:
    heuristic: str
    memory_limit: int
    r1: float
    r2: float
    rl: float
    q_diff: float | None
    mean_len: float
    std_len: float


def aggregate_reports(heuristic: str, memory_limit: int,
                      reports: list[EvalReport],
                      candidates: list[SummaryCandidate]) -> CorpusRow:
    def mean(values):
        values = list(values)
        return sum(values) / len(values) if values else 0.0

    qds = [r.q_diff for r in reports if r.q_diff is not None]
    mean_len, std_len = length_stats(candidates)
    return CorpusRow(
        heuristic=heuristic,
        memory_limit=memory_limit,
        r1=mean(r.r1 for r in reports),
        r2=mean(r.r2 for r in reports),
        rl=mean(r.rl for r in reports),
        q_diff=mean(qds) if qds else None,
        mean_len=mean_len,
        std_len=std_len,
    )


# -- stable file output -------------------------------------------------------

def write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


TSV_HEADER = ("heuristic", "M", "R1", "R2", "RL", "q_diff", "mean_len", "std_len")


def write_tsv(path: Path, rows: list[CorpusRow]) -> None:
    def fmt(value) -> str:
        return "NA" if value is None else f"{value:.4f}"

    lines = ["\t".join(TSV_HEADER)]
    for row in rows:
        lines.append("\t".join([
            row.heuristic, str(row.memory_limit), fmt(row.r1), fmt(row.r2),
            fmt(row.rl), fmt(row.q_diff), fmt(row.mean_len), fmt(row.std_len),
        ]))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
