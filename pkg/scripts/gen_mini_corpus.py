#!/usr/bin/env python3
"""Regenerate the synthetic mini corpus fixture (JSONL + CoNLL-U sidecars).

Five small sectioned "articles" are built from sentence templates whose
dependency parses are known by construction, so the sidecars stay perfectly
aligned with the corpus file. A fixed seed keeps the output stable; run this
only when the fixture format itself changes, and commit the results.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).parent.parent / "fixtures" / "mini_corpus"
SEED = 20240405
N_DOCS = 5

# surface -> (lemma, upos)
LEXICON = {
    "the": ("the", "DET"), "a": ("a", "DET"),
    "of": ("of", "ADP"), "with": ("with", "ADP"), "in": ("in", "ADP"),
    "to": ("to", "ADP"), "by": ("by", "ADP"),
    "is": ("be", "AUX"), ".": (".", "PUNCT"),
}

NOUNS = [
    "patients", "cells", "therapy", "inflammation", "antioxidants",
    "vitamins", "proteins", "enzymes", "oxidation", "treatment",
    "deficiency", "disease", "tissue", "stress", "diet",
    "supplementation", "response", "damage", "markers", "levels",
]
NOUN_LEMMAS = {
    "patients": "patient", "cells": "cell", "therapy": "therapy",
    "inflammation": "inflammation", "antioxidants": "antioxidant",
    "vitamins": "vitamin", "proteins": "protein", "enzymes": "enzyme",
    "oxidation": "oxidation", "treatment": "treatment",
    "deficiency": "deficiency", "disease": "disease", "tissue": "tissue",
    "stress": "stress", "diet": "diet", "supplementation": "supplementation",
    "response": "response", "damage": "damage", "markers": "marker",
    "levels": "level",
}
ADJS = ["chronic", "oxidative", "clinical", "dietary", "severe",
        "enzymatic", "cellular", "metabolic", "protective", "elevated"]
VERBS = [("reduces", "reduced", "reduce"), ("increases", "increased", "increase"),
         ("regulates", "regulated", "regulate"), ("controls", "controlled", "control"),
         ("causes", "caused", "cause"), ("improves", "improved", "improve"),
         ("modulates", "modulated", "modulate"), ("affects", "affected", "affect")]

for noun, lemma in NOUN_LEMMAS.items():
    LEXICON[noun] = (lemma, "NOUN")
for adj in ADJS:
    LEXICON[adj] = (adj, "ADJ")
for active, passive, lemma in VERBS:
    LEXICON[active] = (lemma, "VERB")
    LEXICON[passive] = (lemma, "VERB")


def row(idx, surface, head, deprel, upos=None):
    lemma, default_upos = LEXICON[surface]
    return (idx, surface, lemma, upos or default_upos, head, deprel)


def pattern_svo(rng, nouns):
    adj, (n1, n2), (v, _, _) = rng.choice(ADJS), rng.sample(nouns, 2), rng.choice(VERBS)
    tokens = ["the", adj, n1, v, "the", n2, "."]
    parse = [row(1, "the", 3, "det"), row(2, adj, 3, "amod"),
             row(3, n1, 4, "nsubj"), row(4, v, 0, "root"),
             row(5, "the", 6, "det"), row(6, n2, 4, "obj"),
             row(7, ".", 4, "punct")]
    return tokens, parse


def pattern_of_subject(rng, nouns):
    (n1, n2, n3), adj = rng.sample(nouns, 3), rng.choice(ADJS)
    v = rng.choice(VERBS)[0]
    tokens = [n1, "of", adj, n2, v, "the", n3, "."]
    parse = [row(1, n1, 5, "nsubj"), row(2, "of", 4, "case"),
             row(3, adj, 4, "amod"), row(4, n2, 1, "nmod"),
             row(5, v, 0, "root"), row(6, "the", 7, "det"),
             row(7, n3, 5, "obj"), row(8, ".", 5, "punct")]
    return tokens, parse


def pattern_passive(rng, nouns):
    (n1, n2), adj = rng.sample(nouns, 2), rng.choice(ADJS)
    vpass = rng.choice(VERBS)[1]
    tokens = ["the", n1, "is", vpass, "by", adj, n2, "."]
    parse = [row(1, "the", 2, "det"), row(2, n1, 4, "nsubj:pass"),
             row(3, "is", 4, "aux:pass"), row(4, vpass, 0, "root"),
             row(5, "by", 7, "case"), row(6, adj, 7, "amod"),
             row(7, n2, 4, "obl:agent"), row(8, ".", 4, "punct")]
    return tokens, parse


def pattern_locative(rng, nouns):
    n1, n2, n3 = rng.sample(nouns, 3)
    v = rng.choice(VERBS)[0]
    tokens = [n1, "in", n2, v, "to", n3, "."]
    parse = [row(1, n1, 4, "nsubj"), row(2, "in", 3, "case"),
             row(3, n2, 1, "nmod"), row(4, v, 0, "root"),
             row(5, "to", 6, "case"), row(6, n3, 4, "obl"),
             row(7, ".", 4, "punct")]
    return tokens, parse


def pattern_copula(rng, nouns):
    (n1, n2), adj = rng.sample(nouns, 2), rng.choice(ADJS)
    tokens = ["the", n1, "is", "a", adj, n2, "."]
    parse = [row(1, "the", 2, "det"), row(2, n1, 6, "nsubj"),
             row(3, "is", 6, "cop"), row(4, "a", 6, "det"),
             row(5, adj, 6, "amod"), row(6, n2, 0, "root"),
             row(7, ".", 6, "punct")]
    return tokens, parse


def pattern_obj_of(rng, nouns):
    (n1, n2, n3), adj = rng.sample(nouns, 3), rng.choice(ADJS)
    v = rng.choice(VERBS)[0]
    tokens = [adj, n1, v, n2, "of", n3, "."]
    parse = [row(1, adj, 2, "amod"), row(2, n1, 3, "nsubj"),
             row(3, v, 0, "root"), row(4, n2, 3, "obj"),
             row(5, "of", 6, "case"), row(6, n3, 4, "nmod"),
             row(7, ".", 3, "punct")]
    return tokens, parse


def pattern_svo_pp(rng, nouns):
    (n1, n2, n3), adj = rng.sample(nouns, 3), rng.choice(ADJS)
    v = rng.choice(VERBS)[0]
    tokens = ["the", adj, n1, v, "the", n2, "in", n3, "."]
    parse = [row(1, "the", 3, "det"), row(2, adj, 3, "amod"),
             row(3, n1, 4, "nsubj"), row(4, v, 0, "root"),
             row(5, "the", 6, "det"), row(6, n2, 4, "obj"),
             row(7, "in", 8, "case"), row(8, n3, 4, "obl"),
             row(9, ".", 4, "punct")]
    return tokens, parse


PATTERNS = [pattern_svo, pattern_of_subject, pattern_passive, pattern_locative,
            pattern_copula, pattern_obj_of, pattern_svo_pp]


def build_document(rng, doc_index):
    # a per-document topic pool keeps sentences lexically connected
    topic = rng.sample(NOUNS, 8)
    sections = []
    all_sentences = []
    sizes = {"Introduction": rng.randint(13, 16),
             "Discussion": rng.randint(22, 27),
             "Conclusion": rng.randint(7, 9)}
    parses = []
    for name, size in sizes.items():
        sentences = []
        for _ in range(size):
            tokens, parse = rng.choice(PATTERNS)(rng, topic)
            sentences.append(tokens)
            parses.append(parse)
        sections.append({"name": name, "sentences": sentences})
        all_sentences.extend(sentences)

    # the abstract reuses content words from a few document sentences so the
    # recall oracle has signal
    abstract = []
    for _ in range(3):
        picked = rng.sample(all_sentences, 2)
        words = [t for sent in picked for t in sent
                 if LEXICON[t][1] in ("NOUN", "ADJ", "VERB")]
        rng.shuffle(words)
        abstract.append(words[:9] + ["."])

    doc = {"article_id": f"mini-{doc_index:04d}", "sections": sections,
           "abstract": abstract}
    return doc, parses


def conllu_text(parses):
    blocks = []
    for sent_no, parse in enumerate(parses, start=1):
        lines = [f"# sent_id = {sent_no}"]
        for idx, surface, lemma, upos, head, deprel in parse:
            lines.append(
                f"{idx}\t{surface}\t{lemma}\t{upos}\t_\t_\t{head}\t{deprel}\t_\t_")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def main():
    rng = random.Random(SEED)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    lines = []
    for i in range(1, N_DOCS + 1):
        doc, parses = build_document(rng, i)
        lines.append(json.dumps(doc))
        (OUT_DIR / f"{doc['article_id']}.conllu").write_text(
            conllu_text(parses), encoding="utf-8")
    (OUT_DIR / "mini.jsonl").write_text("\n".join(lines) + "\n",
                                        encoding="utf-8")
    print(f"wrote {N_DOCS} documents under {OUT_DIR}")


if __name__ == "__main__":
    main()
