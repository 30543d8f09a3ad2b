"""Unsupervised extractive summarization driven by a simulation of human
working memory over propositions, with budget-constrained sentence selection
and recall-oriented evaluation."""

from .corpus import (
    CorpusFormatError,
    Document,
    SectionKind,
    SectionRatios,
    Sentence,
    Token,
    classify_section,
    load_corpus,
    section_ratios,
)
from .golden import verify_golden
from .memory import (
    MemoryTree,
    Occurrence,
    SimulationTrace,
    Simulator,
    run_simulation,
)
from .metrics import (
    EvalReport,
    length_stats,
    q_diff,
    rouge_l_recall,
    rouge_n_recall,
)
from .propositions import (
    AlignmentError,
    ConlluFormatError,
    Labeled,
    PropKey,
    PropRef,
    Proposition,
    WordSpan,
    extract_document,
    extract_propositions,
    prop_key,
    read_conllu,
    shares_argument,
)
from .scoring import (
    BASELINE_NAMES,
    HEURISTIC_NAMES,
    HeuristicConfig,
    ScoredSentence,
    aggregate,
    baseline_scores,
    notree_scores,
    occurrence_score,
    reproduction_probability,
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

__version__ = "0.1.0"
