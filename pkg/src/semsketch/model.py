"""Core vocabulary of the system: semantic classes, lexemes, link records, config.

A lexeme is a word *sense*: (language, lemma, semantic class). The semantic
classes form a single-rooted tree shared by all languages, so the same class
(say TO_COMMIT) houses English and Russian senses alike. Everything here is
immutable and safe to share across threads.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, TextIO

from .errors import FormatError, UnknownClassError

_CLASS_NAME_RE = re.compile(r"^[^\s]+$")
_LANG_RE = re.compile(r"^[a-z]{2}$")


def nfc(s: str) -> str:
    """NFC-normalize a string (lemma storage convention)."""
    return unicodedata.normalize("NFC", s)


@dataclass(frozen=True, slots=True)
class SemanticClass:
    """A node of the semantic hierarchy; ``parent`` is None only for the root."""

    name: str
    parent: str | None = None


class SemanticHierarchy:
    """Single-rooted tree of semantic classes.

    Construction validates the tree shape: unique names, exactly one root,
    all parents resolvable, no cycles. Shared by every language.
    """

    def __init__(self, classes: Iterable[SemanticClass]):
        self._classes: dict[str, SemanticClass] = {}
        for cls in classes:
            if not cls.name or not _CLASS_NAME_RE.match(cls.name):
                raise FormatError(f"bad class name {cls.name!r}")
            if cls.name != cls.name.upper():
                raise FormatError(f"class name must be uppercase: {cls.name!r}")
            if cls.name in self._classes:
                raise FormatError(f"duplicate class name {cls.name!r}")
            self._classes[cls.name] = cls

        roots = [c.name for c in self._classes.values() if c.parent is None]
        if not self._classes:
            raise FormatError("hierarchy is empty")
        if len(roots) != 1:
            raise FormatError(f"hierarchy must have exactly one root, found {sorted(roots)!r}")
        self._root = roots[0]

        for cls in self._classes.values():
            if cls.parent is not None and cls.parent not in self._classes:
                raise FormatError(f"class {cls.name!r} has unknown parent {cls.parent!r}")

        # Cycle check: every parent chain must terminate at the root.
        for name in self._classes:
            seen = set()
            cur: str | None = name
            while cur is not None:
                if cur in seen:
                    raise FormatError(f"cycle in hierarchy through {cur!r}")
                seen.add(cur)
                cur = self._classes[cur].parent

    @property
    def root(self) -> str:
        return self._root

    def __contains__(self, name: str) -> bool:
        return name in self._classes

    def __len__(self) -> int:
        return len(self._classes)

    def names(self) -> list[str]:
        return sorted(self._classes)

    def get(self, name: str) -> SemanticClass:
        try:
            return self._classes[name]
        except KeyError:
            raise UnknownClassError(f"unknown semantic class {name!r}") from None

    def parent_chain(self, name: str) -> list[str]:
        """Chain from ``name`` up to and including the root."""
        chain = []
        cur: str | None = self.get(name).name
        while cur is not None:
            chain.append(cur)
            cur = self._classes[cur].parent
        return chain

    def checksum(self) -> str:
        """SHA-256 over the canonical class table (order- and comment-insensitive)."""
        canon = "\n".join(
            f"{c.name}\t{c.parent or ''}" for c in sorted(self._classes.values(), key=lambda c: c.name)
        )
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    def as_parent_map(self) -> dict[str, str | None]:
        return {name: cls.parent for name, cls in sorted(self._classes.items())}

    @classmethod
    def from_parent_map(cls, mapping: dict[str, str | None]) -> "SemanticHierarchy":
        return cls(SemanticClass(name, parent) for name, parent in mapping.items())


def load_hierarchy(stream: TextIO) -> SemanticHierarchy:
    """Read the two-column TSV hierarchy file.

    ``class_name<TAB>parent_name``; the root row has an empty second column;
    ``#`` comment lines and blank lines are ignored.
    """
    classes = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise FormatError(f"hierarchy line {lineno}: expected 2 columns, got {len(cols)}")
        name, parent = cols
        classes.append(SemanticClass(name, parent if parent else None))
    return SemanticHierarchy(classes)


def is_descendant(hierarchy: SemanticHierarchy, class_name: str, ancestor_name: str) -> bool:
    """True iff ``ancestor_name`` is on the parent chain of ``class_name`` (or equal to it)."""
    hierarchy.get(ancestor_name)  # raises E_UNKNOWN_CLASS when absent
    return ancestor_name in hierarchy.parent_chain(class_name)


@dataclass(frozen=True, slots=True)
class Lexeme:
    """One word sense: identity is the full (language, lemma, semclass) triple.

    Lemmas are NFC-normalized on construction, case preserved.
    """

    language: str
    lemma: str
    semclass: str

    def __post_init__(self):
        object.__setattr__(self, "lemma", nfc(self.lemma))

    def key(self) -> tuple[str, str, str]:
        return (self.language, self.lemma, self.semclass)

    def __str__(self) -> str:
        return f"{self.language}:{self.lemma}:{self.semclass}"


@dataclass(frozen=True, slots=True)
class LinkRecord:
    """One semantic dependency occurrence: a filler in a role of a core lexeme."""

    language: str
    core: Lexeme
    role: str
    filler_lemma: str
    filler_semclass: str
    sent_id: str
    core_token: int
    filler_token: int

    def __post_init__(self):
        object.__setattr__(self, "filler_lemma", nfc(self.filler_lemma))


class Measure(str, Enum):
    FREQUENCY = "FREQUENCY"
    LOGDICE = "LOGDICE"

    @classmethod
    def parse(cls, text: str) -> "Measure":
        t = text.strip().lower()
        if t in ("freq", "frequency"):
            return cls.FREQUENCY
        if t == "logdice":
            return cls.LOGDICE
        raise FormatError(f"unknown measure {text!r} (expected freq|logdice)")


@dataclass(frozen=True, slots=True)
class Config:
    """Sketch-building configuration.

    min_links default 200 matches the English pilot setting; 2000 is the
    documented Russian setting for the larger corpus.
    """

    min_links: int = 200
    top_fillers: int = 8
    max_roles: int | None = None
    measure: Measure = Measure.FREQUENCY
    sparse_max_links: int = 10
    narrow_max_distinct: int = 4
    narrow_min_links: int = 50

    def __post_init__(self):
        if self.min_links < 0:
            raise FormatError("min_links must be nonnegative")
        if self.top_fillers < 1:
            raise FormatError("top_fillers must be positive")
        if self.max_roles is not None and self.max_roles < 1:
            raise FormatError("max_roles must be positive when set")
        if self.sparse_max_links < 0:
            raise FormatError("sparse_max_links must be nonnegative")
        if self.narrow_max_distinct < 1:
            raise FormatError("narrow_max_distinct must be positive")
        if self.narrow_min_links < 1:
            raise FormatError("narrow_min_links must be positive")

    def to_json(self) -> dict:
        return {
            "min_links": self.min_links,
            "top_fillers": self.top_fillers,
            "max_roles": self.max_roles,
            "measure": self.measure.value,
            "sparse_max_links": self.sparse_max_links,
            "narrow_max_distinct": self.narrow_max_distinct,
            "narrow_min_links": self.narrow_min_links,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Config":
        return cls(
            min_links=data["min_links"],
            top_fillers=data["top_fillers"],
            max_roles=data.get("max_roles"),
            measure=Measure(data["measure"]),
            sparse_max_links=data["sparse_max_links"],
            narrow_max_distinct=data["narrow_max_distinct"],
            narrow_min_links=data["narrow_min_links"],
        )


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True, slots=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_link(record: LinkRecord, hierarchy: SemanticHierarchy) -> ValidationResult:
    """Collect all violations of a record against the loaded hierarchy.

    Violations are data, not exceptions; the record is never mutated.
    """
    found = []
    if not _LANG_RE.match(record.language):
        found.append(Violation("BAD_LANGUAGE", f"language {record.language!r} is not an ISO 639-1 code"))
    if record.language != record.core.language:
        found.append(
            Violation(
                "LANGUAGE_MISMATCH",
                f"record language {record.language!r} != core language {record.core.language!r}",
            )
        )
    if not record.core.lemma:
        found.append(Violation("EMPTY_LEMMA", "core lemma is empty"))
    if not record.filler_lemma:
        found.append(Violation("EMPTY_LEMMA", "filler lemma is empty"))
    if not record.role:
        found.append(Violation("EMPTY_ROLE", "role name is empty"))
    elif any(ch.isspace() for ch in record.role):
        found.append(Violation("ROLE_WHITESPACE", f"role {record.role!r} contains whitespace"))
    for label, cls_name in (("core", record.core.semclass), ("filler", record.filler_semclass)):
        if cls_name not in hierarchy:
            found.append(Violation("UNKNOWN_CLASS", f"{label} semclass {cls_name!r} not in hierarchy"))
    for label, idx in (("core_token", record.core_token), ("filler_token", record.filler_token)):
        if idx < 0:
            found.append(Violation("NEGATIVE_TOKEN", f"{label} {idx} is negative"))
    return ValidationResult(tuple(found))
