"""The semsketch command line.

Subcommands: ingest, build, pair, diff, report, stats, validate, serve.
Exit codes: 0 ok, 1 usage, 2 data error, 3 I/O. Set SEMSKETCH_LOG to
error|warn|info|debug to control logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .contrastive import diff as diff_op
from .contrastive import pair_by_class, pair_diff_to_json, field_structure_report
from .errors import ChecksumError, NotFoundError, SemSketchError, StoreIOError
from .index import FrequencyIndex, load_index, persist_index, read_index_header
from .ingest import ParseError, open_text, parse_link_stream, parse_sentence_table
from .model import Config, Lexeme, Measure, load_hierarchy, validate_link
from .report import format_field_report_tsv, render_field_report_figure, write_field_report_tsv
from .service import serve
from .sketch import attach_examples, build_sketch, flag_suspicious_fillers
from .store import encode_segment, load_sketch_set, save_sketch_set

log = logging.getLogger("semsketch")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


def _parse_lexeme(text: str) -> Lexeme:
    parts = text.split(":")
    if len(parts) != 3 or not all(parts):
        raise UsageError(f"lexeme must be lang:lemma:SEMCLASS, got {text!r}")
    return Lexeme(parts[0], parts[1], parts[2])


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semsketch", description=__doc__)
    parser.add_argument("--version", action="version", version=f"semsketch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an SLF link file into a frequency index")
    p.add_argument("--links", action="append", required=True, help="SLF v1 link file (.gz ok); repeatable")
    p.add_argument("--sentences", help="sentence table sent_id<TAB>lang<TAB>text (.gz ok)")
    p.add_argument("--hierarchy", required=True, help="semantic class TSV: name<TAB>parent")
    p.add_argument("--out", required=True, help="output index file")
    p.add_argument("--max-examples", type=int, default=5, help="provenance cap per (core, role, filler)")

    p = sub.add_parser("build", help="build a sketch store from an index")
    p.add_argument("--index", required=True)
    p.add_argument("--min-links", type=int, default=200, help="eligibility threshold (200 EN pilot, 2000 RU)")
    p.add_argument("--top", type=int, default=8, help="fillers shown per slot by default")
    p.add_argument("--measure", choices=["freq", "logdice"], default="freq")
    p.add_argument("--out", required=True, help="store directory")
    p.add_argument("--lang", help="only build sketches for this language")
    p.add_argument("--max-roles", type=int, default=None)
    p.add_argument("--sparse-max-links", type=int, default=10)
    p.add_argument("--narrow-max-distinct", type=int, default=4)
    p.add_argument("--narrow-min-links", type=int, default=50)

    p = sub.add_parser("pair", help="pair two stores by semantic class and diff each pair")
    p.add_argument("--left", required=True, help="store directory (language A)")
    p.add_argument("--right", required=True, help="store directory (language B)")
    p.add_argument("--curated", help="optional pair whitelist: LEX<TAB>LEX per line")
    p.add_argument("--out", required=True, help="output store directory")
    p.add_argument("--left-lang", help="restrict the left side to this language")
    p.add_argument("--right-lang", help="restrict the right side to this language")
    p.add_argument("--threshold", type=float, default=0.5, help="filler divergence threshold")

    p = sub.add_parser("diff", help="print the pair/diff JSON for two lexemes")
    p.add_argument("--store", required=True)
    p.add_argument("--left", required=True, metavar="LEX", help="lang:lemma:SEMCLASS")
    p.add_argument("--right", required=True, metavar="LEX")
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub.add_parser("report", help="field-structure report for a semantic class")
    p.add_argument("--store", required=True)
    p.add_argument("--class", dest="semclass", required=True, metavar="NAME")
    p.add_argument("--role", default="Object")
    p.add_argument("--out", default=".", help="directory for the TSV and PNG outputs")
    p.add_argument("--left-lang", help="left-side language (default: first of the store's two)")
    p.add_argument("--right-lang", help="right-side language")

    p = sub.add_parser("stats", help="print index header and per-language counts")
    p.add_argument("--index", required=True)

    p = sub.add_parser("validate", help="check an SLF file against a hierarchy")
    p.add_argument("--links", required=True)
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--max-messages", type=int, default=50, help="cap on per-line messages printed")

    p = sub.add_parser("serve", help="serve a store over HTTP")
    p.add_argument("--store", required=True)
    p.add_argument("--bind", default="127.0.0.1:8080", metavar="HOST:PORT")
    return parser


def cmd_ingest(args) -> int:
    with open_text(args.hierarchy) as f:
        hierarchy = load_hierarchy(f)
    index = FrequencyIndex(hierarchy, max_examples=args.max_examples)
    parse_errors = 0
    invalid = 0
    for path in args.links:
        for item in parse_link_stream(path):
            if isinstance(item, ParseError):
                parse_errors += 1
                log.debug("%s:%d %s", path, item.line_no, item.message)
                continue
            result = validate_link(item, hierarchy)
            if not result.ok:
                invalid += 1
                log.debug("%s: invalid record %s: %s", path, item, result.violations)
                continue
            index.accumulate(item)
    sentence_errors = 0
    if args.sentences:
        index.sentences, errs = parse_sentence_table(args.sentences)
        sentence_errors = len(errs)
    persist_index(index, args.out)
    print(
        f"ingested {index.record_count} links "
        f"({parse_errors} parse errors, {invalid} invalid records skipped), "
        f"{len(index.sentences)} sentences ({sentence_errors} bad rows), "
        f"languages: {', '.join(index.languages()) or '-'}"
    )
    print(f"index written to {args.out}")
    return 0


def cmd_build(args) -> int:
    index = load_index(args.index)
    config = Config(
        min_links=args.min_links,
        top_fillers=args.top,
        max_roles=args.max_roles,
        measure=Measure.parse(args.measure),
        sparse_max_links=args.sparse_max_links,
        narrow_max_distinct=args.narrow_max_distinct,
        narrow_min_links=args.narrow_min_links,
    )
    sketches = []
    dropped_refs = 0
    for lexeme in index.eligible_lexemes(config.min_links):
        if args.lang and lexeme.language != args.lang:
            continue
        sketch = build_sketch(index, lexeme, config, all_fillers=True)
        sketch = flag_suspicious_fillers(sketch, index)
        if index.sentences:
            # without a sentence table the provenance ids are kept unresolved
            sketch, dropped = attach_examples(sketch, index.sentences)
            dropped_refs += dropped
        sketches.append(sketch)
    save_sketch_set(
        args.out,
        sketches,
        hierarchy_checksum=index.hierarchy.checksum(),
        build_config=config,
    )
    by_lang = {}
    for s in sketches:
        by_lang[s.lexeme.language] = by_lang.get(s.lexeme.language, 0) + 1
    summary = ", ".join(f"{lang}: {n}" for lang, n in sorted(by_lang.items())) or "none"
    print(f"built {len(sketches)} sketches ({summary}) at min_links={config.min_links}")
    if dropped_refs:
        print(f"warning: {dropped_refs} example references had no sentence and were dropped")
    print(f"store written to {args.out}")
    return 0


def _read_curated(path) -> set[tuple[tuple, tuple]]:
    wanted = set()
    with open_text(path) as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise UsageError(f"curated file line {line_no}: expected 2 tab-separated lexemes")
            wanted.add((_parse_lexeme(cols[0]).key(), _parse_lexeme(cols[1]).key()))
    return wanted


def cmd_pair(args) -> int:
    left_store = load_sketch_set(args.left)
    right_store = load_sketch_set(args.right)
    if (
        left_store.hierarchy_checksum
        and right_store.hierarchy_checksum
        and left_store.hierarchy_checksum != right_store.hierarchy_checksum
    ):
        raise ChecksumError("left and right stores were built against different hierarchies")

    left_sketches = (
        left_store.sketches_for(args.left_lang) if args.left_lang else left_store.sketches()
    )
    right_sketches = (
        right_store.sketches_for(args.right_lang) if args.right_lang else right_store.sketches()
    )
    pairs = pair_by_class(left_sketches, right_sketches)
    if args.curated:
        wanted = _read_curated(args.curated)
        pairs = [p for p in pairs if (p.left.lexeme.key(), p.right.lexeme.key()) in wanted]
        missing = wanted - {(p.left.lexeme.key(), p.right.lexeme.key()) for p in pairs}
        for left_key, right_key in sorted(missing):
            log.warning("curated pair not in cross product: %s / %s", left_key, right_key)
    diffs = [diff_op(p, divergence_threshold=args.threshold) for p in pairs]

    merged: dict = {}
    for s in left_sketches + right_sketches:
        merged[s.lexeme.key()] = s
    for p in pairs:  # pairs may reference sketches filtered out by --*-lang
        merged.setdefault(p.left.lexeme.key(), p.left)
        merged.setdefault(p.right.lexeme.key(), p.right)
    save_sketch_set(
        args.out,
        [merged[k] for k in sorted(merged)],
        pairs=pairs,
        diffs=diffs,
        hierarchy_checksum=left_store.hierarchy_checksum or right_store.hierarchy_checksum,
        build_config=left_store.build_config,
    )
    print(f"paired {len(pairs)} sketch pairs across {len({p.semclass for p in pairs})} classes")
    print(f"store written to {args.out}")
    return 0


def cmd_diff(args) -> int:
    store = load_sketch_set(args.store)
    left_lex = _parse_lexeme(args.left)
    right_lex = _parse_lexeme(args.right)
    stored = store.find_pair(left_lex, right_lex)
    if stored is not None:
        pair, report = stored
        if args.threshold != 0.5:
            report = diff_op(pair, divergence_threshold=args.threshold)
        print(_dump(pair_diff_to_json(pair, report)))
        return 0
    left = store.get(*left_lex.key())
    right = store.get(*right_lex.key())
    if left is None:
        raise NotFoundError(f"no sketch for {left_lex} in store")
    if right is None:
        raise NotFoundError(f"no sketch for {right_lex} in store")
    found = pair_by_class([left], [right])
    if not found:
        raise NotFoundError(f"{left_lex} and {right_lex} share no semantic class")
    pair = found[0]
    print(_dump(pair_diff_to_json(pair, diff_op(pair, divergence_threshold=args.threshold))))
    return 0


def cmd_report(args) -> int:
    store = load_sketch_set(args.store)
    left_lang, right_lang = args.left_lang, args.right_lang
    if left_lang is None or right_lang is None:
        langs = store.languages
        if len(langs) != 2:
            raise UsageError(
                f"store holds languages {langs}; pass --left-lang and --right-lang"
            )
        left_lang, right_lang = langs
    report = field_structure_report(
        args.semclass,
        store.sketches_for(left_lang),
        store.sketches_for(right_lang),
        role=args.role,
    )
    os.makedirs(args.out, exist_ok=True)
    stem = f"report_{encode_segment(args.semclass)}_{encode_segment(args.role)}"
    tsv_path = write_field_report_tsv(report, os.path.join(args.out, stem + ".tsv"))
    png_path = render_field_report_figure(report, os.path.join(args.out, stem + ".png"))
    sys.stdout.write(format_field_report_tsv(report))
    print(f"report written to {tsv_path} and {png_path}")
    return 0


def cmd_stats(args) -> int:
    header = read_index_header(args.index)
    print(f"format_version: {header['format_version']}")
    print(f"hierarchy_checksum: {header['hierarchy_checksum']}")
    print(f"languages: {', '.join(header['languages']) or '-'}")
    print(f"record_count: {header['record_count']}")
    index = load_index(args.index)
    for lang in index.languages():
        links = sum(n for core, n in index.core_total.items() if core.language == lang)
        lexemes = sum(1 for core in index.core_total if core.language == lang)
        print(f"links[{lang}]: {links}\tlexemes[{lang}]: {lexemes}")
    print(f"sentences: {len(index.sentences)}")
    return 0


def cmd_validate(args) -> int:
    with open_text(args.hierarchy) as f:
        hierarchy = load_hierarchy(f)
    parse_errors = 0
    invalid = 0
    valid = 0
    shown = 0
    for item in parse_link_stream(args.links):
        if isinstance(item, ParseError):
            parse_errors += 1
            if shown < args.max_messages:
                print(f"line {item.line_no}: {item.code} {item.message}")
                shown += 1
            continue
        result = validate_link(item, hierarchy)
        if result.ok:
            valid += 1
            continue
        invalid += 1
        if shown < args.max_messages:
            reasons = "; ".join(f"{v.code} {v.message}" for v in result.violations)
            print(f"record {item.core}/{item.role}: {reasons}")
            shown += 1
    total_bad = parse_errors + invalid
    print(f"{valid} valid records, {invalid} invalid records, {parse_errors} parse errors")
    return 2 if total_bad else 0


def cmd_serve(args) -> int:
    store = load_sketch_set(args.store)
    print(
        f"serving {sum(store.manifest['sketch_counts'].values())} sketches, "
        f"{store.manifest['pair_count']} pairs on {args.bind}"
    )
    serve(store, args.bind)
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "build": cmd_build,
    "pair": cmd_pair,
    "diff": cmd_diff,
    "report": cmd_report,
    "stats": cmd_stats,
    "validate": cmd_validate,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("SEMSKETCH_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return 0 if exc.code == 0 else 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except StoreIOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except SemSketchError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
