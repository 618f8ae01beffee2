"""Streaming reader/writer for the SLF v1 interchange format.

SLF is a flat TSV link stream, 9 fixed columns, UTF-8, LF line endings:

    language  core_lemma  core_semclass  role  filler_lemma  filler_semclass  sent_id  core_token  filler_token

``#``-prefixed lines are comments; blank lines are skipped. Tabs and
newlines are forbidden inside fields and there is no escaping, which keeps
the parser single-pass and bit-exact. Files ending in ``.gz`` are
decompressed transparently. Malformed lines become ParseError values, not
exceptions: dirty corpora must not abort a build.
"""

from __future__ import annotations

import gzip
import io
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, TextIO, Union

from .errors import DuplicateSentenceError, FormatError
from .model import Lexeme, LinkRecord, nfc

SLF_COLUMNS = 9
_SENT_COLUMNS = 3


@dataclass(frozen=True, slots=True)
class ParseError:
    """One malformed input line; the stream continues past it."""

    line_no: int
    message: str
    code: str = "E_FORMAT"


@dataclass(frozen=True, slots=True)
class SentenceEntry:
    sent_id: str
    language: str
    text: str


@dataclass
class CorpusStats:
    total_links: dict[str, int] = field(default_factory=dict)
    distinct_core_lexemes: dict[str, int] = field(default_factory=dict)
    links_per_lexeme: dict[int, int] = field(default_factory=dict)
    parse_errors: int = 0

    def to_json(self) -> dict:
        return {
            "total_links": dict(sorted(self.total_links.items())),
            "distinct_core_lexemes": dict(sorted(self.distinct_core_lexemes.items())),
            "links_per_lexeme": {str(k): v for k, v in sorted(self.links_per_lexeme.items())},
            "parse_errors": self.parse_errors,
        }


def open_text(source: Union[str, Path, IO]) -> TextIO:
    """Open a path as UTF-8 text, decompressing ``*.gz`` transparently."""
    if hasattr(source, "read"):
        return source  # already a file object
    path = Path(source)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def _token_index(text: str) -> int:
    # int() would tolerate whitespace, '+' signs and '_' separators; the
    # format is stricter than that.
    if not text.isascii() or not text.isdigit():
        raise ValueError(text)
    return int(text)


def parse_link_line(line: str, line_no: int) -> LinkRecord | ParseError:
    cols = line.split("\t")
    if len(cols) != SLF_COLUMNS:
        return ParseError(line_no, f"expected {SLF_COLUMNS} columns, got {len(cols)}")
    lang, core_lemma, core_class, role, filler_lemma, filler_class, sent_id, core_tok, filler_tok = cols
    try:
        core_token = _token_index(core_tok)
        filler_token = _token_index(filler_tok)
    except ValueError:
        return ParseError(line_no, f"bad token index {core_tok!r}/{filler_tok!r}")
    return LinkRecord(
        language=lang,
        core=Lexeme(lang, core_lemma, core_class),
        role=role,
        filler_lemma=filler_lemma,
        filler_semclass=filler_class,
        sent_id=sent_id,
        core_token=core_token,
        filler_token=filler_token,
    )


def parse_link_stream(source: Union[str, Path, IO]) -> Iterator[LinkRecord | ParseError]:
    """Yield one LinkRecord or ParseError per non-comment, non-blank line.

    Single-pass, constant memory per line; parsing continues past errors.
    """
    stream = open_text(source)
    for line_no, raw in enumerate(stream, start=1):
        line = raw[:-1] if raw.endswith("\n") else raw
        if not line or line.startswith("#"):
            continue
        yield parse_link_line(line, line_no)


def serialize_link(record: LinkRecord) -> str:
    """One SLF line (no trailing newline). Raises on embedded tabs/newlines."""
    fields = (
        record.language,
        record.core.lemma,
        record.core.semclass,
        record.role,
        record.filler_lemma,
        record.filler_semclass,
        record.sent_id,
        str(record.core_token),
        str(record.filler_token),
    )
    for f in fields:
        if "\t" in f or "\n" in f:
            raise FormatError(f"field {f!r} contains a tab or newline; SLF has no escaping")
    return "\t".join(fields)


def write_links(records: Iterable[LinkRecord], out: TextIO) -> int:
    n = 0
    for rec in records:
        out.write(serialize_link(rec))
        out.write("\n")
        n += 1
    return n


def parse_sentence_table(
    source: Union[str, Path, IO],
) -> tuple[dict[str, SentenceEntry], list[ParseError]]:
    """Read the ``sent_id<TAB>lang<TAB>text`` table.

    Returns the map over well-formed rows plus the malformed rows as errors.
    A duplicate sent_id is a hard error (sentence ids are the provenance
    keys; silently keeping either row would corrupt example resolution).
    """
    entries: dict[str, SentenceEntry] = {}
    errors: list[ParseError] = []
    stream = open_text(source)
    for line_no, raw in enumerate(stream, start=1):
        line = raw[:-1] if raw.endswith("\n") else raw
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != _SENT_COLUMNS:
            errors.append(ParseError(line_no, f"expected {_SENT_COLUMNS} columns, got {len(cols)}"))
            continue
        sent_id, lang, text = cols
        if not text:
            errors.append(ParseError(line_no, f"sentence {sent_id!r} has empty text"))
            continue
        if sent_id in entries:
            raise DuplicateSentenceError(f"line {line_no}: duplicate sent_id {sent_id!r}")
        entries[sent_id] = SentenceEntry(sent_id, lang, nfc(text))
    return entries, errors


def serialize_sentence_table(entries: dict[str, SentenceEntry], out: TextIO) -> int:
    n = 0
    for sent_id in sorted(entries):
        e = entries[sent_id]
        for f in (e.sent_id, e.language, e.text):
            if "\t" in f or "\n" in f:
                raise FormatError(f"field {f!r} contains a tab or newline")
        out.write(f"{e.sent_id}\t{e.language}\t{e.text}\n")
        n += 1
    return n


def corpus_stats(items: Iterable[LinkRecord | ParseError]) -> CorpusStats:
    """Exact corpus counts, deterministic regardless of input order.

    Accepts the mixed stream produced by parse_link_stream so parse errors
    are tallied alongside the good records.
    """
    per_lang_links: Counter[str] = Counter()
    per_lexeme: Counter = Counter()
    parse_errors = 0
    for item in items:
        if isinstance(item, ParseError):
            parse_errors += 1
            continue
        per_lang_links[item.language] += 1
        per_lexeme[item.core] += 1

    per_lang_lexemes: Counter[str] = Counter()
    for lexeme in per_lexeme:
        per_lang_lexemes[lexeme.language] += 1
    histogram = Counter(per_lexeme.values())
    return CorpusStats(
        total_links=dict(per_lang_links),
        distinct_core_lexemes=dict(per_lang_lexemes),
        links_per_lexeme=dict(histogram),
        parse_errors=parse_errors,
    )
