"""Mergeable frequency index over a link stream.

Four count layers are kept consistent at all times: joint f(core, role,
filler), the core-role marginal, the core total, and the filler marginal.
Filler identity for counting is (lemma, semclass) within a language: the
same lemma under two classes counts separately, mirroring sense-level
granularity on the core side.

Parallelism comes from sharding: accumulate shards independently, then merge.
Counts are order-independent; provenance retention is first-come (a's entries
first on merge), capped at ``max_examples`` per joint key, so builds are
byte-reproducible rather than sampled.
"""

from __future__ import annotations

import gzip
import json
from pathlib import Path
from typing import IO, Iterable, NamedTuple, Union

from .errors import ChecksumError, FormatError, VersionError
from .ingest import SentenceEntry
from .model import Lexeme, LinkRecord, SemanticHierarchy

FORMAT_NAME = "semsketch-index"
FORMAT_VERSION = 1
DEFAULT_MAX_EXAMPLES = 5

FillerKey = tuple[str, str]  # (lemma, semclass)


class ExampleRef(NamedTuple):
    sent_id: str
    core_token: int
    filler_token: int


class FrequencyIndex:
    """Nested counts core → role → filler, plus marginals and provenance."""

    def __init__(self, hierarchy: SemanticHierarchy, max_examples: int = DEFAULT_MAX_EXAMPLES):
        if max_examples < 0:
            raise FormatError("max_examples must be nonnegative")
        self.hierarchy = hierarchy
        self.max_examples = max_examples
        # core → role → filler → joint count
        self.joint: dict[Lexeme, dict[str, dict[FillerKey, int]]] = {}
        self.core_role: dict[tuple[Lexeme, str], int] = {}
        self.core_total: dict[Lexeme, int] = {}
        # (language, lemma, semclass) → marginal count
        self.filler_total: dict[tuple[str, str, str], int] = {}
        self.provenance: dict[tuple[Lexeme, str, FillerKey], list[ExampleRef]] = {}
        self.sentences: dict[str, SentenceEntry] = {}
        self.record_count = 0

    def accumulate(self, record: LinkRecord) -> "FrequencyIndex":
        """Fold one validated record into all four count layers."""
        core = record.core
        filler: FillerKey = (record.filler_lemma, record.filler_semclass)
        roles = self.joint.setdefault(core, {})
        fillers = roles.setdefault(record.role, {})
        fillers[filler] = fillers.get(filler, 0) + 1
        self.core_role[(core, record.role)] = self.core_role.get((core, record.role), 0) + 1
        self.core_total[core] = self.core_total.get(core, 0) + 1
        fkey = (record.language, record.filler_lemma, record.filler_semclass)
        self.filler_total[fkey] = self.filler_total.get(fkey, 0) + 1
        self.record_count += 1

        pkey = (core, record.role, filler)
        refs = self.provenance.setdefault(pkey, [])
        if len(refs) < self.max_examples:
            refs.append(ExampleRef(record.sent_id, record.core_token, record.filler_token))
        return self

    def accumulate_all(self, records: Iterable[LinkRecord]) -> "FrequencyIndex":
        for rec in records:
            self.accumulate(rec)
        return self

    def languages(self) -> list[str]:
        return sorted({core.language for core in self.core_total})

    def eligible_lexemes(self, min_links: int) -> list[Lexeme]:
        """Lexemes with total links >= min_links, sorted by (language, lemma, semclass)."""
        return sorted(
            (core for core, n in self.core_total.items() if n >= min_links),
            key=Lexeme.key,
        )

    def roles_for(self, core: Lexeme) -> dict[str, dict[FillerKey, int]]:
        return self.joint.get(core, {})

    def examples_for(self, core: Lexeme, role: str, filler: FillerKey) -> list[ExampleRef]:
        return list(self.provenance.get((core, role, filler), ()))


def merge(a: FrequencyIndex, b: FrequencyIndex) -> FrequencyIndex:
    """Pointwise sum of counts; a's provenance entries come first, capped at E."""
    if a.hierarchy.checksum() != b.hierarchy.checksum():
        raise ChecksumError("cannot merge indexes built against different hierarchies")
    if a.max_examples != b.max_examples:
        raise FormatError("cannot merge indexes with different example caps")
    out = FrequencyIndex(a.hierarchy, a.max_examples)
    for src in (a, b):
        for core, roles in src.joint.items():
            out_roles = out.joint.setdefault(core, {})
            for role, fillers in roles.items():
                out_fillers = out_roles.setdefault(role, {})
                for filler, n in fillers.items():
                    out_fillers[filler] = out_fillers.get(filler, 0) + n
        for key, n in src.core_role.items():
            out.core_role[key] = out.core_role.get(key, 0) + n
        for core, n in src.core_total.items():
            out.core_total[core] = out.core_total.get(core, 0) + n
        for fkey, n in src.filler_total.items():
            out.filler_total[fkey] = out.filler_total.get(fkey, 0) + n
        for pkey, refs in src.provenance.items():
            kept = out.provenance.setdefault(pkey, [])
            room = out.max_examples - len(kept)
            if room > 0:
                kept.extend(refs[:room])
        for sent_id, entry in src.sentences.items():
            out.sentences.setdefault(sent_id, entry)
        out.record_count += src.record_count
    return out


def _core_key(core: Lexeme) -> str:
    return f"{core.language}\t{core.lemma}\t{core.semclass}"


def _parse_core_key(key: str) -> Lexeme:
    lang, lemma, semclass = key.split("\t")
    return Lexeme(lang, lemma, semclass)


def _filler_key_str(filler: FillerKey) -> str:
    return f"{filler[0]}\t{filler[1]}"


def persist_index(index: FrequencyIndex, destination: Union[str, Path, IO[bytes]]) -> None:
    """Write the index as deterministic gzipped JSON (header line + body line).

    The header carries {format, format_version, hierarchy_checksum,
    languages, record_count} so ``semsketch stats`` can report it without
    touching the body. Only sentences referenced by retained provenance are
    persisted. mtime is pinned so identical indexes are byte-identical.
    """
    header = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "hierarchy_checksum": index.hierarchy.checksum(),
        "languages": index.languages(),
        "record_count": index.record_count,
        "max_examples": index.max_examples,
    }
    cores: dict[str, dict[str, dict[str, list]]] = {}
    for core, roles in index.joint.items():
        role_obj: dict[str, dict[str, list]] = {}
        for role, fillers in roles.items():
            filler_obj = {}
            for filler, n in fillers.items():
                refs = index.provenance.get((core, role, filler), [])
                filler_obj[_filler_key_str(filler)] = [n, [list(r) for r in refs]]
            role_obj[role] = filler_obj
        cores[_core_key(core)] = role_obj

    referenced = {ref.sent_id for refs in index.provenance.values() for ref in refs}
    sentences = {
        sid: [e.language, e.text]
        for sid, e in index.sentences.items()
        if sid in referenced
    }
    body = {
        "cores": cores,
        "hierarchy": index.hierarchy.as_parent_map(),
        "sentences": sentences,
    }

    def dump(obj) -> bytes:
        return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")

    payload = dump(header) + b"\n" + dump(body) + b"\n"
    if hasattr(destination, "write"):
        _write_gz(destination, payload)
    else:
        with open(destination, "wb") as f:
            _write_gz(f, payload)


def _write_gz(fileobj: IO[bytes], payload: bytes) -> None:
    with gzip.GzipFile(filename="", mode="wb", fileobj=fileobj, mtime=0) as gz:
        gz.write(payload)


def read_index_header(source: Union[str, Path, IO[bytes]]) -> dict:
    """Read and check only the header line of a persisted index."""
    if hasattr(source, "read"):
        gz = gzip.GzipFile(fileobj=source, mode="rb")
    else:
        gz = gzip.open(source, "rb")
    with gz:
        try:
            line = gz.readline()
            header = json.loads(line)
        except (OSError, ValueError) as exc:
            raise VersionError(f"not a semsketch index file: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise VersionError("not a semsketch index file (bad format tag)")
    if header.get("format_version") != FORMAT_VERSION:
        raise VersionError(
            f"unsupported index format_version {header.get('format_version')!r}, "
            f"expected {FORMAT_VERSION}"
        )
    return header


def load_index(
    source: Union[str, Path, IO[bytes]],
    expected_hierarchy_checksum: str | None = None,
) -> FrequencyIndex:
    """Inverse of persist_index; marginals are rebuilt from the joint counts."""
    if hasattr(source, "read"):
        gz = gzip.GzipFile(fileobj=source, mode="rb")
    else:
        gz = gzip.open(source, "rb")
    with gz:
        try:
            header_line = gz.readline()
            body_line = gz.read()
            header = json.loads(header_line)
            body = json.loads(body_line)
        except (OSError, ValueError) as exc:
            raise VersionError(f"not a semsketch index file: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise VersionError("not a semsketch index file (bad format tag)")
    if header.get("format_version") != FORMAT_VERSION:
        raise VersionError(
            f"unsupported index format_version {header.get('format_version')!r}, "
            f"expected {FORMAT_VERSION}"
        )

    hierarchy = SemanticHierarchy.from_parent_map(body["hierarchy"])
    if hierarchy.checksum() != header["hierarchy_checksum"]:
        raise ChecksumError("index body hierarchy does not match the header checksum")
    if expected_hierarchy_checksum is not None and header["hierarchy_checksum"] != expected_hierarchy_checksum:
        raise ChecksumError(
            f"index was built against hierarchy {header['hierarchy_checksum'][:12]}…, "
            f"expected {expected_hierarchy_checksum[:12]}…"
        )

    index = FrequencyIndex(hierarchy, header.get("max_examples", DEFAULT_MAX_EXAMPLES))
    for core_key, roles in body["cores"].items():
        core = _parse_core_key(core_key)
        for role, fillers in roles.items():
            for filler_key, (n, refs) in fillers.items():
                lemma, semclass = filler_key.split("\t")
                filler: FillerKey = (lemma, semclass)
                index.joint.setdefault(core, {}).setdefault(role, {})[filler] = n
                index.core_role[(core, role)] = index.core_role.get((core, role), 0) + n
                index.core_total[core] = index.core_total.get(core, 0) + n
                fkey = (core.language, lemma, semclass)
                index.filler_total[fkey] = index.filler_total.get(fkey, 0) + n
                if refs:
                    index.provenance[(core, role, filler)] = [ExampleRef(s, c, f) for s, c, f in refs]
    index.record_count = sum(index.core_total.values())
    if index.record_count != header["record_count"]:
        raise ChecksumError(
            f"index body holds {index.record_count} links but the header claims "
            f"{header['record_count']}"
        )
    for sid, (lang, text) in body["sentences"].items():
        index.sentences[sid] = SentenceEntry(sid, lang, text)
    return index
