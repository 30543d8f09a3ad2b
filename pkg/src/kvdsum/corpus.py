"""Loading and section handling for sectioned, pre-tokenized article corpora.

The corpus is a JSONL file, one document per line:

    {"article_id": "...",
     "sections": [{"name": "...", "sentences": [["tok", ...], ...]}, ...],
     "abstract": [["tok", ...], ...]}

Sections may carry an optional parallel ``"lemmas"`` array mirroring the
shape of ``"sentences"``. Only Introduction/Discussion/Conclusion sections
are kept; documents containing none of the three are skipped with a warning.
Tokens are taken as-is: budgets and evaluation count every token of the
pre-tokenized stream, punctuation included.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

log = logging.getLogger(__name__)

#: Section ratios used when ratio mode is "fixed".
FIXED_RATIOS = (0.33, 0.53, 0.14)


class SectionKind(Enum):
    INTRODUCTION = "Introduction"
    DISCUSSION = "Discussion"
    CONCLUSION = "Conclusion"


class CorpusFormatError(ValueError):
    """A corpus file line violates the JSONL schema."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str


@dataclass(frozen=True)
class Sentence:
    id: int
    section: SectionKind
    tokens: tuple[Token, ...]

    @property
    def length(self) -> int:
        return len(self.tokens)

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(frozen=True)
class Document:
    id: str
    sections: tuple[tuple[SectionKind, range], ...]
    sentences: tuple[Sentence, ...]
    reference: tuple[tuple[str, ...], ...]

    def section_of(self, sentence_id: int) -> SectionKind:
        return self.sentences[sentence_id].section

    def section_counts(self) -> dict[SectionKind, int]:
        counts = {kind: 0 for kind in SectionKind}
        for sent in self.sentences:
            counts[sent.section] += 1
        return counts


@dataclass(frozen=True)
class SectionRatios:
    introduction: float
    discussion: float
    conclusion: float

    def get(self, kind: SectionKind) -> float:
        return {
            SectionKind.INTRODUCTION: self.introduction,
            SectionKind.DISCUSSION: self.discussion,
            SectionKind.CONCLUSION: self.conclusion,
        }[kind]


def classify_section(name: str) -> SectionKind | None:
    """Map a raw section heading to one of the three kinds.

    Case-insensitive substring match, first hit in the order
    Introduction, Discussion, Conclusion wins.
    """
    low = name.lower()
    if "introduc" in low:
        return SectionKind.INTRODUCTION
    if "discussion" in low:
        return SectionKind.DISCUSSION
    if "conclu" in low:
        return SectionKind.CONCLUSION
    return None


def _require(cond: bool, lineno: int, msg: str) -> None:
    if not cond:
        raise CorpusFormatError(f"line {lineno}: {msg}")


def _parse_document(raw: dict, lineno: int) -> Document | None:
    _require(isinstance(raw, dict), lineno, "document must be a JSON object")
    article_id = raw.get("article_id")
    _require(isinstance(article_id, str) and article_id != "", lineno,
             "missing or empty 'article_id'")
    sections_raw = raw.get("sections")
    _require(isinstance(sections_raw, list), lineno, "'sections' must be a list")
    abstract = raw.get("abstract")
    _require(isinstance(abstract, list), lineno, "'abstract' must be a list")
    for sent in abstract:
        _require(isinstance(sent, list) and all(isinstance(t, str) for t in sent),
                 lineno, "'abstract' must be a list of token lists")

    sentences: list[Sentence] = []
    ranges: list[tuple[SectionKind, range]] = []
    for sec in sections_raw:
        _require(isinstance(sec, dict), lineno, "section entries must be objects")
        name = sec.get("name")
        _require(isinstance(name, str), lineno, "section 'name' must be a string")
        sents_raw = sec.get("sentences")
        _require(isinstance(sents_raw, list), lineno,
                 f"section {name!r}: 'sentences' must be a list")
        kind = classify_section(name)
        if kind is None:
            continue
        lemmas_raw = sec.get("lemmas")
        if lemmas_raw is not None:
            _require(isinstance(lemmas_raw, list) and len(lemmas_raw) == len(sents_raw),
                     lineno, f"section {name!r}: 'lemmas' must mirror 'sentences'")
        start = len(sentences)
        for i, toks in enumerate(sents_raw):
            _require(isinstance(toks, list) and len(toks) >= 1, lineno,
                     f"section {name!r}: sentences must be non-empty token lists")
            _require(all(isinstance(t, str) and t != "" for t in toks), lineno,
                     f"section {name!r}: tokens must be non-empty strings")
            lems = lemmas_raw[i] if lemmas_raw is not None else None
            if lems is not None:
                _require(isinstance(lems, list) and len(lems) == len(toks), lineno,
                         f"section {name!r}: lemma row {i} does not mirror its sentence")
            tokens = tuple(
                Token(surface=t, lemma=(lems[j].lower() if lems else t.lower()))
                for j, t in enumerate(toks)
            )
            sentences.append(Sentence(id=len(sentences), section=kind, tokens=tokens))
        if len(sentences) > start:
            ranges.append((kind, range(start, len(sentences))))

    if not ranges:
        log.warning("document %s has no Introduction/Discussion/Conclusion section; skipped",
                    article_id)
        return None
    if not abstract:
        log.warning("document %s has an empty abstract", article_id)
    return Document(
        id=article_id,
        sections=tuple(ranges),
        sentences=tuple(sentences),
        reference=tuple(tuple(s) for s in abstract),
    )


def load_corpus(path: str | Path) -> list[Document]:
    """Read a corpus JSONL file into Documents, in file order.

    Malformed lines raise :class:`CorpusFormatError` naming the line;
    documents lacking all three target sections are skipped with a warning.
    """
    docs: list[Document] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {lineno}: invalid JSON: {exc}") from exc
            doc = _parse_document(raw, lineno)
            if doc is not None:
                docs.append(doc)
    return docs


def section_ratios(doc: Document, mode: str = "fixed") -> SectionRatios:
    """Per-section sentence ratios, either the fixed corpus-level values
    or computed from the document itself (missing sections contribute 0)."""
    if mode == "fixed":
        return SectionRatios(*FIXED_RATIOS)
    if mode != "per-doc":
        raise ValueError(f"unknown ratio mode: {mode!r}")
    counts = doc.section_counts()
    total = len(doc.sentences)
    return SectionRatios(
        introduction=counts[SectionKind.INTRODUCTION] / total,
        discussion=counts[SectionKind.DISCUSSION] / total,
        conclusion=counts[SectionKind.CONCLUSION] / total,
    )
