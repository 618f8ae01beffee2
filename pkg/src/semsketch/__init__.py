"""Semantic sketches: per-sense role/filler summaries from annotated corpora."""

__version__ = "0.1.0"

from .errors import (
    BelowThresholdError,
    ChecksumError,
    DomainError,
    DuplicateSentenceError,
    EmptyClassError,
    EmptySketchError,
    FormatError,
    NotFoundError,
    SemSketchError,
    StoreIOError,
    UnknownClassError,
    VersionError,
)
from .model import (
    Config,
    Lexeme,
    LinkRecord,
    Measure,
    SemanticClass,
    SemanticHierarchy,
    is_descendant,
    load_hierarchy,
    validate_link,
)
from .ingest import (
    CorpusStats,
    ParseError,
    SentenceEntry,
    corpus_stats,
    parse_link_stream,
    parse_sentence_table,
    serialize_link,
)
from .index import FrequencyIndex, load_index, merge, persist_index
from .sketch import (
    Diagnostics,
    FillerEntry,
    Sketch,
    Slot,
    attach_examples,
    build_sketch,
    diagnose,
    flag_suspicious_fillers,
    project_sketch,
    score_filler,
    sketch_from_json,
    sketch_to_json,
)
from .contrastive import (
    DiffReport,
    FieldReport,
    SketchPair,
    affinity,
    diff,
    field_structure_report,
    pair_by_class,
)
from .store import SketchStore, load_sketch_set, save_sketch_set

__all__ = [
    "__version__",
    "BelowThresholdError",
    "ChecksumError",
    "Config",
    "CorpusStats",
    "Diagnostics",
    "DiffReport",
    "DomainError",
    "DuplicateSentenceError",
    "EmptyClassError",
    "EmptySketchError",
    "FieldReport",
    "FillerEntry",
    "FormatError",
    "FrequencyIndex",
    "Lexeme",
    "LinkRecord",
    "Measure",
    "NotFoundError",
    "ParseError",
    "SemSketchError",
    "SemanticClass",
    "SemanticHierarchy",
    "SentenceEntry",
    "Sketch",
    "SketchPair",
    "SketchStore",
    "Slot",
    "StoreIOError",
    "UnknownClassError",
    "VersionError",
    "affinity",
    "attach_examples",
    "build_sketch",
    "corpus_stats",
    "diagnose",
    "diff",
    "field_structure_report",
    "flag_suspicious_fillers",
    "is_descendant",
    "load_hierarchy",
    "load_index",
    "load_sketch_set",
    "merge",
    "pair_by_class",
    "parse_link_stream",
    "parse_sentence_table",
    "persist_index",
    "project_sketch",
    "save_sketch_set",
    "score_filler",
    "serialize_link",
    "sketch_from_json",
    "sketch_to_json",
    "validate_link",
]
