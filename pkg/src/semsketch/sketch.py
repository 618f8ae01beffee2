"""Build per-sense sketches: ordered role slots with ranked, exemplified fillers.

A sketch is a pure function of (index, lexeme, config): slots are ordered by
link count (ties by role name), fillers by the active measure with a full
deterministic tie-break chain (count desc, lemma asc, semclass asc). Slot
diagnostics separate two causes of thin slots: data scarcity (SPARSE) and
lexicalized narrowness (NARROW, the play-a-trick kind of compatibility).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import BelowThresholdError, DomainError, NotFoundError
from .index import FrequencyIndex
from .ingest import SentenceEntry
from .model import Config, Lexeme, Measure, is_descendant

SPARSE = "SPARSE"
NARROW = "NARROW"
SUSPICIOUS = "SUSPICIOUS"


@dataclass(frozen=True, slots=True)
class Example:
    """One occurrence reference; ``text`` stays None until attach_examples resolves it."""

    sent_id: str
    core_token: int
    filler_token: int
    text: str | None = None

    def to_json(self) -> dict:
        return {
            "sent_id": self.sent_id,
            "text": self.text,
            "core_token": self.core_token,
            "filler_token": self.filler_token,
        }


@dataclass(frozen=True, slots=True)
class FillerEntry:
    lemma: str
    semclass: str
    count: int
    score: float
    flags: frozenset[str] = frozenset()
    examples: tuple[Example, ...] = ()
    # filler marginal f(*,*,filler) in the source index; kept in store files
    # (not in API bodies) so views can re-score without the index.
    filler_marginal: int = 0


@dataclass(frozen=True, slots=True)
class Slot:
    role: str
    link_count: int
    distinct_fillers: int
    fillers: tuple[FillerEntry, ...]
    flags: frozenset[str] = frozenset()


@dataclass(frozen=True, slots=True)
class Sketch:
    lexeme: Lexeme
    total_links: int
    slots: tuple[Slot, ...]
    config_used: Config

    def slot(self, role: str) -> Slot | None:
        for s in self.slots:
            if s.role == role:
                return s
        return None

    def role_names(self) -> set[str]:
        return {s.role for s in self.slots}


@dataclass(frozen=True, slots=True)
class SlotFinding:
    role: str
    flag: str
    reason: str


@dataclass(frozen=True, slots=True)
class Diagnostics:
    findings: tuple[SlotFinding, ...] = ()

    def for_role(self, role: str) -> list[SlotFinding]:
        return [f for f in self.findings if f.role == role]


def score_filler(f_joint: int, f_core_role: int, f_filler: int, measure: Measure) -> float:
    """FREQUENCY is the raw joint count; LOGDICE is 14 + log2(2*f_xy/(f_x+f_y))."""
    if f_joint < 1:
        raise DomainError(f"f_joint must be >= 1, got {f_joint}")
    if f_core_role < f_joint:
        raise DomainError(f"f_core_role {f_core_role} < f_joint {f_joint}")
    if f_filler < f_joint:
        raise DomainError(f"f_filler {f_filler} < f_joint {f_joint}")
    if measure is Measure.FREQUENCY:
        return float(f_joint)
    return 14.0 + math.log2(2.0 * f_joint / (f_core_role + f_filler))


def rank_fillers(entries: list[FillerEntry]) -> list[FillerEntry]:
    """Deterministic ranking: score desc, count desc, lemma asc, semclass asc."""
    return sorted(entries, key=lambda e: (-e.score, -e.count, e.lemma, e.semclass))


def _slot_flags(link_count: int, distinct_fillers: int, config: Config) -> frozenset[str]:
    flags = set()
    if link_count < config.sparse_max_links:
        flags.add(SPARSE)
    if link_count >= config.narrow_min_links and distinct_fillers <= config.narrow_max_distinct:
        flags.add(NARROW)
    return frozenset(flags)


def build_sketch(
    index: FrequencyIndex,
    lexeme: Lexeme,
    config: Config,
    all_fillers: bool = False,
) -> Sketch:
    """Assemble the sketch for one lexeme.

    ``all_fillers=True`` keeps every ranked filler instead of the top
    ``config.top_fillers`` prefix; stores persist at full width so slot
    paging can go past the default cut.
    """
    total = index.core_total.get(lexeme)
    if total is None:
        raise NotFoundError(f"lexeme {lexeme} not in index")
    if total < config.min_links:
        raise BelowThresholdError(
            f"lexeme {lexeme} has {total} links, below min_links={config.min_links}",
            actual=total,
            required=config.min_links,
        )

    slots = []
    for role, fillers in index.roles_for(lexeme).items():
        link_count = index.core_role[(lexeme, role)]
        entries = []
        for (flemma, fclass), n in fillers.items():
            marginal = index.filler_total[(lexeme.language, flemma, fclass)]
            entries.append(
                FillerEntry(
                    lemma=flemma,
                    semclass=fclass,
                    count=n,
                    score=score_filler(n, link_count, marginal, config.measure),
                    examples=tuple(
                        Example(r.sent_id, r.core_token, r.filler_token)
                        for r in index.examples_for(lexeme, role, (flemma, fclass))
                    ),
                    filler_marginal=marginal,
                )
            )
        ranked = rank_fillers(entries)
        if not all_fillers:
            ranked = ranked[: config.top_fillers]
        slots.append(
            Slot(
                role=role,
                link_count=link_count,
                distinct_fillers=len(fillers),
                fillers=tuple(ranked),
                flags=_slot_flags(link_count, len(fillers), config),
            )
        )

    slots.sort(key=lambda s: (-s.link_count, s.role))
    if config.max_roles is not None:
        slots = slots[: config.max_roles]
    return Sketch(lexeme=lexeme, total_links=total, slots=tuple(slots), config_used=config)


def diagnose(sketch: Sketch, config: Config) -> Diagnostics:
    """Explain every SPARSE/NARROW flag, citing the threshold that fired."""
    findings = []
    for slot in sketch.slots:
        flags = _slot_flags(slot.link_count, slot.distinct_fillers, config)
        if SPARSE in flags:
            findings.append(
                SlotFinding(
                    slot.role,
                    SPARSE,
                    f"link_count {slot.link_count} < sparse_max_links {config.sparse_max_links}: "
                    "too little data to fill the slot",
                )
            )
        if NARROW in flags:
            findings.append(
                SlotFinding(
                    slot.role,
                    NARROW,
                    f"link_count {slot.link_count} >= narrow_min_links {config.narrow_min_links} "
                    f"and distinct_fillers {slot.distinct_fillers} <= "
                    f"narrow_max_distinct {config.narrow_max_distinct}: "
                    "narrow compatibility, empty lines are likely correct",
                )
            )
    return Diagnostics(tuple(findings))


def flag_suspicious_fillers(sketch: Sketch, index: FrequencyIndex) -> Sketch:
    """Mark hapax fillers whose class is alien to everything ranked above them.

    A filler gets SUSPICIOUS iff its count is 1 and its semclass is neither
    the semclass nor a descendant of the semclass of any higher-ranked filler
    in the slot. Pure annotation: ranking is unchanged.
    """
    hierarchy = index.hierarchy
    new_slots = []
    for slot in sketch.slots:
        seen_classes: list[str] = []
        new_fillers = []
        for entry in slot.fillers:
            suspicious = entry.count == 1 and not any(
                is_descendant(hierarchy, entry.semclass, above) for above in seen_classes
            )
            if suspicious:
                entry = replace(entry, flags=entry.flags | {SUSPICIOUS})
            new_fillers.append(entry)
            seen_classes.append(entry.semclass)
        new_slots.append(replace(slot, fillers=tuple(new_fillers)))
    return replace(sketch, slots=tuple(new_slots))


def attach_examples(sketch: Sketch, sentences: dict[str, SentenceEntry]) -> tuple[Sketch, int]:
    """Resolve example references against the sentence table.

    Returns the resolved sketch and the number of references dropped because
    their sent_id was missing from the table.
    """
    dropped = 0
    new_slots = []
    for slot in sketch.slots:
        new_fillers = []
        for entry in slot.fillers:
            resolved = []
            for ex in entry.examples:
                sent = sentences.get(ex.sent_id)
                if sent is None:
                    dropped += 1
                    continue
                resolved.append(replace(ex, text=sent.text))
            new_fillers.append(replace(entry, examples=tuple(resolved)))
        new_slots.append(replace(slot, fillers=tuple(new_fillers)))
    return replace(sketch, slots=tuple(new_slots)), dropped


def project_sketch(sketch: Sketch, top: int | None = None, measure: Measure | None = None) -> Sketch:
    """Derive a view of a full-width sketch: re-score per measure, trim to top.

    Uses the per-filler marginals carried by the sketch, so no index is
    needed. Slot order is link-count based and therefore measure-independent.
    """
    cfg = sketch.config_used
    target_measure = measure or cfg.measure
    target_top = top if top is not None else cfg.top_fillers
    if target_top < 1:
        raise DomainError(f"top must be positive, got {target_top}")
    new_slots = []
    for slot in sketch.slots:
        fillers = list(slot.fillers)
        if target_measure is not cfg.measure:
            fillers = [
                replace(e, score=score_filler(e.count, slot.link_count, e.filler_marginal, target_measure))
                for e in fillers
            ]
        new_slots.append(replace(slot, fillers=tuple(rank_fillers(fillers)[:target_top])))
    new_config = replace(cfg, measure=target_measure, top_fillers=target_top)
    return replace(sketch, slots=tuple(new_slots), config_used=new_config)


def sketch_to_json(sketch: Sketch, internal: bool = False) -> dict:
    """The wire/storage form. ``internal`` adds the per-filler marginal used by stores."""
    slots = []
    for slot in sketch.slots:
        fillers = []
        for e in slot.fillers:
            obj = {
                "lemma": e.lemma,
                "semclass": e.semclass,
                "count": e.count,
                "score": e.score,
                "flags": sorted(e.flags),
                "examples": [ex.to_json() for ex in e.examples],
            }
            if internal:
                obj["filler_marginal"] = e.filler_marginal
            fillers.append(obj)
        slots.append(
            {
                "role": slot.role,
                "link_count": slot.link_count,
                "distinct_fillers": slot.distinct_fillers,
                "flags": sorted(slot.flags),
                "fillers": fillers,
            }
        )
    return {
        "lexeme": {
            "lang": sketch.lexeme.language,
            "lemma": sketch.lexeme.lemma,
            "semclass": sketch.lexeme.semclass,
        },
        "total_links": sketch.total_links,
        "config": sketch.config_used.to_json(),
        "slots": slots,
    }


def sketch_from_json(data: dict) -> Sketch:
    lex = data["lexeme"]
    slots = []
    for s in data["slots"]:
        fillers = []
        for f in s["fillers"]:
            fillers.append(
                FillerEntry(
                    lemma=f["lemma"],
                    semclass=f["semclass"],
                    count=f["count"],
                    score=f["score"],
                    flags=frozenset(f["flags"]),
                    examples=tuple(
                        Example(ex["sent_id"], ex["core_token"], ex["filler_token"], ex["text"])
                        for ex in f["examples"]
                    ),
                    filler_marginal=f.get("filler_marginal", 0),
                )
            )
        slots.append(
            Slot(
                role=s["role"],
                link_count=s["link_count"],
                distinct_fillers=s["distinct_fillers"],
                fillers=tuple(fillers),
                flags=frozenset(s["flags"]),
            )
        )
    return Sketch(
        lexeme=Lexeme(lex["lang"], lex["lemma"], lex["semclass"]),
        total_links=data["total_links"],
        slots=tuple(slots),
        config_used=Config.from_json(data["config"]),
    )
