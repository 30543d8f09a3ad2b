"""Rule-based proposition extraction from CoNLL-U dependency parses.

Propositions are predicate-argument units, e.g. ``healthy(people)`` or
``of(deficiency, #7)``, where ``#N`` references an earlier proposition.
Extraction walks each sentence's tokens in order and fires one rule per
trigger token:

  R1  adjectival/participial modifier        -> modifier(head)
  R2  finite verb                            -> verb(subject, object, obliques);
      passives promote the agent to the first slot
  R3  copula / apposition                    -> BE(left, right); parenthetical
      appositions also register an alias used by R5
  R4  adpositional nominal modifier          -> of/with give adp(left, right),
      any other adposition gives noun(adp:dependent)
  R5  argument-to-proposition linking: an argument phrase whose lemma
      multiset equals the full content of an earlier proposition is replaced
      by a reference to the most recent such proposition, and the phrase's
      tokens are consumed (no further rules fire inside it)

Phrases that match nothing fall back to a bare head span (head token plus
determiners/compounds/numerals). Argument overlap between propositions
(`shares_argument`) drives tree attachment during the reading simulation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .corpus import Document, SectionKind

_DATA_DIR = Path(__file__).parent / "data"


def _load_lexicon(name: str) -> frozenset[str]:
    entries = []
    for line in (_DATA_DIR / name).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return frozenset(entries)


STOP_LEMMAS = _load_lexicon("stop_lemmas.txt")
LIGHT_NOUNS = _load_lexicon("light_nouns.txt")

# Adpositions treated as genitive/associative relations (rule R4a);
# everything else labels its head noun (rule R4b).
RELATION_ADPOSITIONS = frozenset({"of", "with"})


class ConlluFormatError(ValueError):
    """A CoNLL-U file violates the 10-column format."""


class AlignmentError(ValueError):
    """Parse sidecar does not line up with the document it annotates."""


class PredKind(Enum):
    MODIFIER = "modifier"   # R1
    VERB = "verb"           # R2
    COPULA = "copula"       # R3 (copula)
    ALIAS = "alias"         # R3 (apposition)
    RELATION = "relation"   # R4a
    NOUN = "noun"           # R4b


@dataclass(frozen=True)
class WordSpan:
    lemmas: tuple[str, ...]


@dataclass(frozen=True)
class PropRef:
    target: int


@dataclass(frozen=True)
class Labeled:
    label: str
    inner: "WordSpan | PropRef"


Argument = WordSpan | PropRef | Labeled


@dataclass(frozen=True)
class Proposition:
    id: int
    predicate: str
    pred_lemmas: tuple[str, ...]
    kind: PredKind
    args: tuple[Argument, ...]
    sentence_id: int
    section: SectionKind

    def ref_targets(self) -> tuple[int, ...]:
        """Ids of propositions referenced as arguments (through labels too)."""
        out = []
        for arg in self.args:
            inner = arg.inner if isinstance(arg, Labeled) else arg
            if isinstance(inner, PropRef):
                out.append(inner.target)
        return tuple(out)

    def word_lemmas(self) -> tuple[str, ...]:
        """Lemmas of all word-span arguments (through labels too)."""
        out = []
        for arg in self.args:
            inner = arg.inner if isinstance(arg, Labeled) else arg
            if isinstance(inner, WordSpan):
                out.extend(inner.lemmas)
        return tuple(out)


@dataclass(frozen=True)
class PropKey:
    predicate: str
    fingerprint: tuple[str, ...]


# ---------------------------------------------------------------------------
# CoNLL-U reading
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParseToken:
    idx: int        # 1-based position within the sentence
    form: str
    lemma: str      # lowercased
    upos: str
    head: int       # 0 = sentence root
    deprel: str


class ParsedSentence:
    def __init__(self, tokens: list[ParseToken]):
        self.tokens = tokens
        self._by_idx = {t.idx: t for t in tokens}
        self._children: dict[int, list[ParseToken]] = {t.idx: [] for t in tokens}
        self._children[0] = []
        for t in tokens:
            self._children.setdefault(t.head, []).append(t)

    def token(self, idx: int) -> ParseToken:
        return self._by_idx[idx]

    def children(self, tok: ParseToken, *deprels: str) -> list[ParseToken]:
        kids = self._children.get(tok.idx, [])
        if deprels:
            kids = [k for k in kids if k.deprel in deprels]
        return sorted(kids, key=lambda k: k.idx)

    def subtree(self, tok: ParseToken) -> list[ParseToken]:
        """All tokens in tok's subtree (inclusive), in sentence order."""
        out = []
        stack = [tok]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(self._children.get(cur.idx, []))
        return sorted(out, key=lambda t: t.idx)


def read_conllu(path: str | Path) -> list[ParsedSentence]:
    """Read a 10-column CoNLL-U file into parsed sentences.

    Comment lines are skipped, as are multiword-token and empty-node rows.
    Column-count violations raise :class:`ConlluFormatError` with the line
    number.
    """
    sentences: list[ParsedSentence] = []
    current: list[ParseToken] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(ParsedSentence(current))
                    current = []
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ConlluFormatError(
                    f"line {lineno}: expected 10 tab-separated columns, got {len(cols)}")
            tok_id = cols[0]
            if "-" in tok_id or "." in tok_id:
                continue
            try:
                idx = int(tok_id)
                head = int(cols[6])
            except ValueError as exc:
                raise ConlluFormatError(f"line {lineno}: non-integer ID/HEAD field") from exc
            current.append(ParseToken(
                idx=idx,
                form=cols[1],
                lemma=cols[2].lower(),
                upos=cols[3],
                head=head,
                deprel=cols[7],
            ))
    if current:
        sentences.append(ParsedSentence(current))
    return sentences


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

class _Extractor:
    """Incremental extraction state over one document."""

    def __init__(self, context: list[Proposition] | None = None):
        self.props: list[Proposition] = list(context or [])
        # alias rewrites (rhs lemmas -> lhs lemmas) from parenthetical appositions
        self.aliases: list[tuple[Counter, Counter]] = []
        self._content_cache: dict[int, Counter] = {}
        for p in self.props:
            if p.kind is PredKind.ALIAS and len(p.args) == 2:
                self._register_alias(p)

    # -- document-level state ------------------------------------------------

    def _register_alias(self, prop: Proposition) -> None:
        left, right = prop.args
        if isinstance(left, WordSpan) and isinstance(right, WordSpan):
            self.aliases.append((Counter(right.lemmas), Counter(left.lemmas)))

    def _content(self, prop_id: int) -> Counter:
        """Flattened lemma multiset of a proposition, references expanded.

        Adposition and BE predicates and oblique labels are omitted; modifier,
        noun, and verb predicates count as content.
        """
        cached = self._content_cache.get(prop_id)
        if cached is not None:
            return cached
        prop = self.props[prop_id - 1]
        out: Counter = Counter()
        if prop.kind not in (PredKind.RELATION, PredKind.COPULA, PredKind.ALIAS):
            out.update(prop.pred_lemmas)
        for arg in prop.args:
            inner = arg.inner if isinstance(arg, Labeled) else arg
            if isinstance(inner, WordSpan):
                out.update(inner.lemmas)
            else:
                out.update(self._content(inner.target))
        self._content_cache[prop_id] = out
        return out

    def _canonical(self, multiset: Counter) -> Counter:
        """Apply alias rewrites until fixpoint (e.g. cf -> cystic fibrosis)."""
        out = Counter(multiset)
        for _ in range(8):  # alias chains are shallow; cap for safety
            changed = False
            for rhs, lhs in self.aliases:
                if rhs and all(out[k] >= v for k, v in rhs.items()) and rhs != lhs:
                    out = out - rhs + lhs
                    changed = True
            if not changed:
                break
        return out

    # -- sentence-level extraction --------------------------------------------

    def extract_sentence(self, parsed: ParsedSentence, sentence_id: int,
                         section: SectionKind) -> list[Proposition]:
        self._parsed = parsed
        self._consumed: set[int] = set()
        self._modifier_tokens: set[int] = set()
        new_props: list[Proposition] = []

        for tok in parsed.tokens:
            if tok.idx in self._consumed:
                continue
            prop = self._dispatch(tok, sentence_id, section)
            if prop is not None:
                new_props.append(prop)
        return new_props

    def _dispatch(self, tok: ParseToken, sentence_id: int,
                  section: SectionKind) -> Proposition | None:
        parsed = self._parsed
        mod_head = self._modifier_head(tok)
        if mod_head is not None:
            return self._rule_modifier(tok, mod_head, sentence_id, section)
        if tok.deprel == "appos":
            return self._rule_apposition(tok, sentence_id, section)
        if parsed.children(tok, "cop"):
            return self._rule_copula(tok, sentence_id, section)
        if tok.upos == "VERB" and tok.deprel not in ("amod", "case", "aux", "cop"):
            return self._rule_verb(tok, sentence_id, section)
        if tok.deprel == "case" and tok.upos == "ADP":
            return self._rule_adposition(tok, sentence_id, section)
        return None

    def _new_prop(self, **kw) -> Proposition:
        prop = Proposition(id=len(self.props) + 1, **kw)
        self.props.append(prop)
        return prop

    def _modifier_head(self, tok: ParseToken) -> ParseToken | None:
        """Head noun for R1: amod dependents, or conj chained off an amod."""
        if tok.deprel == "amod":
            return self._parsed.token(tok.head)
        cur = tok
        while cur.deprel == "conj" and cur.head != 0:
            cur = self._parsed.token(cur.head)
        if cur is not tok and cur.deprel == "amod":
            return self._parsed.token(cur.head)
        return None

    # R1: adjectival/participial modifier -> modifier(head)
    def _rule_modifier(self, tok, head, sentence_id, section) -> Proposition:
        self._modifier_tokens.add(tok.idx)
        return self._new_prop(
            predicate=tok.lemma,
            pred_lemmas=(tok.lemma,),
            kind=PredKind.MODIFIER,
            args=(WordSpan(self._base_span(head)),),
            sentence_id=sentence_id,
            section=section,
        )

    # R2: finite verb -> verb(args)
    def _rule_verb(self, tok, sentence_id, section) -> Proposition | None:
        parsed = self._parsed
        auxes = parsed.children(tok, "aux", "aux:pass")
        pred_toks = sorted(auxes + [tok], key=lambda t: t.idx)
        passive = any(c.deprel in ("aux:pass", "nsubj:pass")
                      for c in parsed.children(tok))

        subj = next(iter(parsed.children(tok, "nsubj", "nsubj:pass")), None)
        objs = parsed.children(tok, "obj", "iobj")
        obls = [c for c in parsed.children(tok) if c.deprel.startswith("obl")]
        agent = next((c for c in obls if c.deprel == "obl:agent"), None)

        args: list[Argument] = []
        if passive and agent is not None:
            args.append(self._match_or_bare(agent, light_skip=True))
        if subj is not None:
            args.append(self._match_or_bare(subj, light_skip=True))
        for obj in objs:
            args.append(self._match_or_bare(obj, light_skip=True))
        for obl in obls:
            if obl is agent:
                continue
            case = next(iter(parsed.children(obl, "case")), None)
            inner = self._match_or_bare(obl, light_skip=True)
            args.append(Labeled(case.lemma, inner) if case is not None else inner)
        if not args:
            return None
        return self._new_prop(
            predicate=" ".join(t.form.lower() for t in pred_toks),
            pred_lemmas=tuple(t.lemma for t in pred_toks),
            kind=PredKind.VERB,
            args=tuple(args),
            sentence_id=sentence_id,
            section=section,
        )

    # R3 (apposition): BE(head phrase, alias); registers the alias
    def _rule_apposition(self, tok, sentence_id, section) -> Proposition:
        head = self._parsed.token(tok.head)
        left = self._match_or_bare(head, exclude=tok)
        right = WordSpan(self._base_span(tok))
        prop = self._new_prop(
            predicate="BE",
            pred_lemmas=("be",),
            kind=PredKind.ALIAS,
            args=(left, right),
            sentence_id=sentence_id,
            section=section,
        )
        if isinstance(left, WordSpan):
            self._register_alias(prop)
        return prop

    # R3 (copula): BE(subject, predicate nominal)
    def _rule_copula(self, tok, sentence_id, section) -> Proposition | None:
        subj = next(iter(self._parsed.children(tok, "nsubj", "nsubj:pass")), None)
        if subj is None:
            return None
        left = self._match_or_bare(subj, light_skip=True)
        right = WordSpan(self._base_span(tok))
        return self._new_prop(
            predicate="BE",
            pred_lemmas=("be",),
            kind=PredKind.COPULA,
            args=(left, right),
            sentence_id=sentence_id,
            section=section,
        )

    # R4: adpositional nominal modifier
    def _rule_adposition(self, tok, sentence_id, section) -> Proposition | None:
        parsed = self._parsed
        dep = parsed.token(tok.head)
        if dep.deprel != "nmod" or dep.head == 0:
            return None
        if parsed.children(dep, "case")[0].idx != tok.idx:
            return None  # only the first case marker triggers
        head = parsed.token(dep.head)
        if tok.lemma in RELATION_ADPOSITIONS:
            head_arg = self._match_or_bare(head, exclude=dep)
            dep_arg = self._match_or_bare(dep)
            ordered = [(head.idx, head_arg), (dep.idx, dep_arg)]
            args = tuple(a for _, a in sorted(ordered))
            return self._new_prop(
                predicate=tok.lemma,
                pred_lemmas=(tok.lemma,),
                kind=PredKind.RELATION,
                args=args,
                sentence_id=sentence_id,
                section=section,
            )
        span = self._base_span(head)
        return self._new_prop(
            predicate=" ".join(span),
            pred_lemmas=span,
            kind=PredKind.NOUN,
            args=(Labeled(tok.lemma, self._match_or_bare(dep)),),
            sentence_id=sentence_id,
            section=section,
        )

    # -- argument building (R5) ------------------------------------------------

    def _match_span(self, head: ParseToken, exclude: ParseToken | None) -> Counter:
        """Lemma multiset of head's phrase for content matching.

        Case markers, punctuation, coordinators, appositive subtrees, and
        modifier tokens already extracted by R1 do not count as phrase content.
        """
        parsed = self._parsed
        excluded: set[int] = set()
        if exclude is not None:
            excluded.update(t.idx for t in parsed.subtree(exclude))
        for t in parsed.subtree(head):
            if t.deprel == "appos":
                excluded.update(x.idx for x in parsed.subtree(t))
        lemmas = []
        for t in parsed.subtree(head):
            if t.idx in excluded or t.idx in self._modifier_tokens:
                continue
            if t.deprel in ("case", "punct", "cc") or t.upos in ("PUNCT", "CCONJ"):
                continue
            lemmas.append(t.lemma)
        return Counter(lemmas)

    def _match_or_bare(self, head: ParseToken, exclude: ParseToken | None = None,
                       light_skip: bool = False) -> WordSpan | PropRef:
        """R5: reference the most recent proposition with the same content,
        else fall back to the bare head span."""
        phrase = self._canonical(self._match_span(head, exclude))
        if phrase:
            for prop in reversed(self.props):
                if self._canonical(self._content(prop.id)) == phrase:
                    self._consumed.update(t.idx for t in self._parsed.subtree(head))
                    return PropRef(prop.id)
        if light_skip and head.lemma in LIGHT_NOUNS:
            for nmod in self._parsed.children(head, "nmod"):
                cases = self._parsed.children(nmod, "case")
                if cases and cases[0].lemma == "of":
                    return self._match_or_bare(nmod, light_skip=True)
        return WordSpan(self._base_span(head))

    def _base_span(self, head: ParseToken) -> tuple[str, ...]:
        """Head token plus its determiners/compounds/numerals, in order."""
        keep = [head]
        for child in self._parsed.children(head):
            if child.deprel in ("det", "compound", "flat", "nummod", "fixed"):
                keep.append(child)
        return tuple(t.lemma for t in sorted(keep, key=lambda t: t.idx))


def extract_propositions(parsed: ParsedSentence, sentence_id: int,
                         section: SectionKind,
                         context: list[Proposition] | None = None) -> list[Proposition]:
    """Extract the propositions of one sentence given all prior ones."""
    return _Extractor(context).extract_sentence(parsed, sentence_id, section)


def extract_document(doc: Document, parses: list[ParsedSentence]) -> list[Proposition]:
    """Extract all propositions of a document from its aligned parses."""
    if len(parses) != len(doc.sentences):
        raise AlignmentError(
            f"document {doc.id}: {len(doc.sentences)} sentences but "
            f"{len(parses)} parsed sentences")
    extractor = _Extractor()
    for sent in doc.sentences:
        extractor.extract_sentence(parses[sent.id], sent.id, sent.section)
    return extractor.props


# ---------------------------------------------------------------------------
# Overlap and identity
# ---------------------------------------------------------------------------

def sharing_lemmas(prop: Proposition) -> frozenset[str]:
    """Non-stop lemmas this proposition exposes for argument overlap.

    Word-span arguments always count; modifier and noun predicates count
    too (their predicate is the descriptive content).
    """
    lemmas = set(prop.word_lemmas())
    if prop.kind in (PredKind.MODIFIER, PredKind.NOUN):
        lemmas.update(prop.pred_lemmas)
    return frozenset(lemmas - STOP_LEMMAS)


def shares_argument(p: Proposition, q: Proposition) -> bool:
    """True if either proposition references the other or their word-span
    contents overlap on a non-stop lemma."""
    if q.id in p.ref_targets() or p.id in q.ref_targets():
        return True
    return bool(sharing_lemmas(p) & sharing_lemmas(q))


def _flatten_fingerprint(prop: Proposition, props_by_id: dict[int, Proposition],
                         out: list[str]) -> None:
    for arg in prop.args:
        if isinstance(arg, Labeled):
            out.append(arg.label)
            arg = arg.inner
        if isinstance(arg, WordSpan):
            out.extend(arg.lemmas)
        else:
            target = props_by_id[arg.target]
            out.extend(target.pred_lemmas)
            _flatten_fingerprint(target, props_by_id, out)


def prop_key(prop: Proposition, context: list[Proposition]) -> PropKey:
    """Normalized content identity: predicate lemma plus a flattened multiset
    of argument lemmas and labels, with references expanded recursively."""
    props_by_id = {p.id: p for p in context}
    props_by_id[prop.id] = prop
    fingerprint: list[str] = []
    _flatten_fingerprint(prop, props_by_id, fingerprint)
    return PropKey(predicate=" ".join(prop.pred_lemmas),
                   fingerprint=tuple(sorted(fingerprint)))


# ---------------------------------------------------------------------------
# Serialization (fixture files, trace dumps)
# ---------------------------------------------------------------------------

def _arg_to_dict(arg: Argument) -> dict:
    if isinstance(arg, Labeled):
        return {"label": arg.label, **_arg_to_dict(arg.inner)}
    if isinstance(arg, WordSpan):
        return {"span": list(arg.lemmas)}
    return {"ref": arg.target}


def _arg_from_dict(raw: dict) -> Argument:
    inner: WordSpan | PropRef
    if "span" in raw:
        inner = WordSpan(tuple(raw["span"]))
    else:
        inner = PropRef(raw["ref"])
    if "label" in raw:
        return Labeled(raw["label"], inner)
    return inner


def prop_to_dict(prop: Proposition) -> dict:
    return {
        "id": prop.id,
        "predicate": prop.predicate,
        "pred_lemmas": list(prop.pred_lemmas),
        "kind": prop.kind.value,
        "args": [_arg_to_dict(a) for a in prop.args],
        "sentence_id": prop.sentence_id,
        "section": prop.section.value,
    }


def prop_from_dict(raw: dict) -> Proposition:
    return Proposition(
        id=raw["id"],
        predicate=raw["predicate"],
        pred_lemmas=tuple(raw["pred_lemmas"]),
        kind=PredKind(raw["kind"]),
        args=tuple(_arg_from_dict(a) for a in raw["args"]),
        sentence_id=raw["sentence_id"],
        section=SectionKind(raw["section"]),
    )
