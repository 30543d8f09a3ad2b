"""Command-line front end.

Subcommands: ``summarize`` (score + select + evaluate), ``simulate`` (dump
reading traces), ``oracle`` (recall-maximizing summaries and their section
proportions), and ``sweep`` (heuristics x memory limits grid with shared
traces). Exit codes: 0 success, 1 usage error, 2 fatal I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corpus import CorpusFormatError, SectionKind
from .memory import run_simulation
from .pipeline import (
    DocumentState,
    RunConfig,
    aggregate_reports,
    evaluate_candidate,
    load_states,
    summarize_document,
    write_json,
    write_tsv,
)
from .scoring import BASELINE_NAMES, HEURISTIC_NAMES

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _add_common(parser, parses_required=True):
    parser.add_argument("--corpus", required=True, type=Path)
    parser.add_argument("--parses", type=Path, required=parses_required)
    parser.add_argument("--rho", type=float, default=0.3)
    parser.add_argument("--budget", type=int, default=205)
    parser.add_argument("--strategy", default="closest",
                        choices=("greedy", "shorter", "closest"))
    parser.add_argument("--ratios", dest="ratio_mode", default="fixed",
                        choices=("fixed", "per-doc"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, type=Path)


def build_parser() -> _Parser:
    parser = _Parser(prog="kvdsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="select summaries with one heuristic")
    _add_common(p)
    p.add_argument("--heuristic", required=True)
    p.add_argument("--memory-limit", type=int, default=5)

    p = sub.add_parser("simulate", help="dump per-cycle reading traces")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--parses", required=True, type=Path)
    p.add_argument("--memory-limit", type=int, default=5)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("oracle", help="budget-constrained recall oracle")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--budget", type=int, default=205)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("sweep", help="heuristics x memory limits grid")
    _add_common(p)
    p.add_argument("--heuristics", required=True,
                   help="comma-separated heuristic/baseline names")
    p.add_argument("--memory-limits", required=True,
                   help="comma-separated integers")
    return parser


def _config(args, heuristic: str, memory_limit: int) -> RunConfig:
    try:
        return RunConfig(
            corpus=args.corpus,
            parses=getattr(args, "parses", None),
            heuristic=heuristic,
            memory_limit=memory_limit,
            rho=args.rho,
            budget=args.budget,
            strategy=args.strategy,
            ratio_mode=args.ratio_mode,
            seed=args.seed,
            out=args.out,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _summary_payload(state: DocumentState, cfg, candidate, scored) -> dict:
    by_id = {s.sentence_id: s for s in scored}
    return {
        "article_id": state.doc.id,
        "heuristic": cfg.heuristic,
        "memory_limit": cfg.memory_limit,
        "budget": cfg.budget,
        "strategy": cfg.strategy,
        "sentence_ids": list(candidate.sentence_ids),
        "total_tokens": candidate.total_tokens,
        "total_score": candidate.total_score,
        "sentences": [
            {
                "id": sid,
                "score": by_id[sid].score if sid in by_id else None,
                "tokens": state.doc.sentences[sid].surfaces,
            }
            for sid in candidate.sentence_ids
        ],
    }


def _eval_payload(doc_id: str, report) -> dict:
    return {
        "article_id": doc_id,
        "R1": report.r1,
        "R2": report.r2,
        "RL": report.rl,
        "q_diff": report.q_diff,
        "length": report.length,
    }


def cmd_summarize(args) -> int:
    cfg = _config(args, args.heuristic, args.memory_limit)
    states = load_states(cfg.corpus, cfg.parses)
    failures = []
    reports, candidates = [], []
    for state in states:
        try:
            candidate, scored = summarize_document(state, cfg)
            write_json(cfg.out / f"{state.doc.id}.summary.json",
                       _summary_payload(state, cfg, candidate, scored))
            report = evaluate_candidate(state, candidate, cfg.budget)
            write_json(cfg.out / f"{state.doc.id}.eval.json",
                       _eval_payload(state.doc.id, report))
            reports.append(report)
            candidates.append(candidate)
        except (FileNotFoundError, ValueError) as exc:
            log.warning("document %s failed: %s", state.doc.id, exc)
            failures.append({"article_id": state.doc.id, "error": str(exc)})
    if candidates:
        row = aggregate_reports(cfg.heuristic, cfg.memory_limit, reports,
                                candidates)
        write_tsv(cfg.out / "report.tsv", [row])
    _write_manifest(cfg, failures, len(candidates))
    return EXIT_OK


def cmd_simulate(args) -> int:
    states = load_states(args.corpus, args.parses)
    failures = []
    done = 0
    for state in states:
        try:
            trace = run_simulation(state.doc, state.propositions(),
                                   args.memory_limit)
            for snap in trace.cycles:
                assert len(snap.nodes) <= args.memory_limit
            write_json(args.out / f"{state.doc.id}.trace.json", trace.to_dict())
            done += 1
        except (FileNotFoundError, ValueError) as exc:
            log.warning("document %s failed: %s", state.doc.id, exc)
            failures.append({"article_id": state.doc.id, "error": str(exc)})
    payload = {"command": "simulate", "memory_limit": args.memory_limit,
               "documents": done, "failures": failures}
    write_json(args.out / "run_manifest.json", payload)
    return EXIT_OK


def cmd_oracle(args) -> int:
    states = load_states(args.corpus, None)
    failures = []
    done = 0
    for state in states:
        doc = state.doc
        try:
            candidate = state.oracle_summary(args.budget)
            total = len(candidate.sentence_ids) or 1
            proportions = {
                kind.value: 100.0 * sum(
                    1 for sid in candidate.sentence_ids
                    if doc.section_of(sid) is kind) / total
                for kind in SectionKind
            }
            write_json(args.out / f"{doc.id}.oracle.json", {
                "article_id": doc.id,
                "sentence_ids": list(candidate.sentence_ids),
                "total_tokens": candidate.total_tokens,
                "objective": candidate.total_score,
                "q": proportions,
            })
            done += 1
        except ValueError as exc:
            log.warning("document %s failed: %s", doc.id, exc)
            failures.append({"article_id": doc.id, "error": str(exc)})
    payload = {"command": "oracle", "budget": args.budget,
               "documents": done, "failures": failures}
    write_json(args.out / "run_manifest.json", payload)
    return EXIT_OK


def cmd_sweep(args) -> int:
    heuristics = [h.strip() for h in args.heuristics.split(",") if h.strip()]
    if not heuristics:
        raise UsageError("empty heuristic list")
    try:
        limits = [int(m) for m in args.memory_limits.split(",") if m.strip()]
    except ValueError as exc:
        raise UsageError(f"bad memory limit list: {args.memory_limits!r}") from exc
    if not limits:
        raise UsageError("empty memory limit list")
    valid = HEURISTIC_NAMES + BASELINE_NAMES
    for name in heuristics:
        if name not in valid:
            raise UsageError(f"unknown heuristic {name!r}; valid names: "
                             + ", ".join(valid))

    states = load_states(args.corpus, args.parses)
    rows = []
    failures = []
    for limit in limits:
        for heuristic in heuristics:
            cfg = _config(args, heuristic, limit)
            reports, candidates = [], []
            for state in states:  # traces cached inside the state, per limit
                try:
                    candidate, _ = summarize_document(state, cfg)
                    reports.append(evaluate_candidate(state, candidate,
                                                      cfg.budget))
                    candidates.append(candidate)
                except (FileNotFoundError, ValueError) as exc:
                    failures.append({"article_id": state.doc.id,
                                     "heuristic": heuristic, "M": limit,
                                     "error": str(exc)})
            if candidates:
                rows.append(aggregate_reports(heuristic, limit, reports,
                                              candidates))
    write_tsv(args.out / "sweep.tsv", rows)
    payload = {"command": "sweep", "heuristics": heuristics,
               "memory_limits": limits, "rows": len(rows),
               "failures": failures}
    write_json(args.out / "run_manifest.json", payload)
    return EXIT_OK


def _write_manifest(cfg: RunConfig, failures: list, done: int) -> None:
    write_json(cfg.out / "run_manifest.json", {
        "command": "summarize",
        "heuristic": cfg.heuristic,
        "memory_limit": cfg.memory_limit,
        "rho": cfg.rho,
        "budget": cfg.budget,
        "strategy": cfg.strategy,
        "ratios": cfg.ratio_mode,
        "seed": cfg.seed,
        "documents": done,
        "failures": failures,
    })


COMMANDS = {
    "summarize": cmd_summarize,
    "simulate": cmd_simulate,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CorpusFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
