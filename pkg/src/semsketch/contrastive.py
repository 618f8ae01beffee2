"""Cross-language sketch pairing and divergence analysis.

Sketches from two languages are comparable only through the shared class
hierarchy: fillers are compared by semantic class, never by lemma, since
that is the one basis on which "water" and "вода" can match. Pairing emits
the full cross product within each shared class; curation is a downstream
filter, not an algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyClassError, EmptySketchError
from .model import Lexeme
from .sketch import Sketch, Slot

ROLE_GAP = "ROLE_GAP"
FILLER_DIVERGENCE = "FILLER_DIVERGENCE"
NONE = "NONE"

DEFAULT_DIVERGENCE_THRESHOLD = 0.5
DEFAULT_ROLE_WEIGHT = 0.5
DEFAULT_FILLER_WEIGHT = 0.5


@dataclass(frozen=True, slots=True)
class SketchPair:
    left: Sketch
    right: Sketch
    semclass: str
    affinity: float


@dataclass(frozen=True, slots=True)
class RoleGap:
    role: str
    side: str  # "left" | "right"
    link_count: int


@dataclass(frozen=True, slots=True)
class SharedRoleDiff:
    role: str
    class_overlap: float
    left_only_classes: tuple[str, ...]
    right_only_classes: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class DiffReport:
    role_gaps: tuple[RoleGap, ...]
    shared_roles: tuple[SharedRoleDiff, ...]
    verdicts: frozenset[str]


@dataclass(frozen=True, slots=True)
class MemberDistribution:
    lexeme: Lexeme
    distribution: dict[str, int]  # filler class → summed count in the role


@dataclass(frozen=True, slots=True)
class FieldReport:
    semclass: str
    role: str
    members: dict[str, tuple[MemberDistribution, ...]]  # language → members
    partition: dict[str, dict[str, tuple[str, ...]]]  # filler class → language → lemmas


def class_vector(slot: Slot) -> dict[str, int]:
    """Filler counts summed per semantic class, over the slot's filler list."""
    vec: dict[str, int] = {}
    for f in slot.fillers:
        vec[f.semclass] = vec.get(f.semclass, 0) + f.count
    return vec


def cosine(u: dict[str, int], v: dict[str, int]) -> float:
    dot = sum(n * v.get(c, 0) for c, n in u.items())
    nu = math.sqrt(sum(n * n for n in u.values()))
    nv = math.sqrt(sum(n * n for n in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def weighted_jaccard(u: dict[str, int], v: dict[str, int]) -> float:
    """Weighted Jaccard over class *distributions* (each side normalized to 1).

    Normalizing first makes the overlap corpus-size independent: a slot that
    is 100% LIQUID matches another 100%-LIQUID slot regardless of how many
    links each corpus happened to contain.
    """
    su = sum(u.values())
    sv = sum(v.values())
    if su == 0 or sv == 0:
        return 0.0
    keys = set(u) | set(v)
    mins = 0.0
    maxs = 0.0
    for c in keys:
        pu = u.get(c, 0) / su
        pv = v.get(c, 0) / sv
        mins += min(pu, pv)
        maxs += max(pu, pv)
    return mins / maxs if maxs > 0 else 0.0


def affinity(
    left: Sketch,
    right: Sketch,
    role_weight: float = DEFAULT_ROLE_WEIGHT,
    filler_weight: float = DEFAULT_FILLER_WEIGHT,
) -> float:
    """Jaccard of role sets blended with mean per-role filler-class cosine.

    Symmetric in its arguments and confined to [0,1] for the default equal
    weights. With no shared roles the filler term is 0.
    """
    if not left.slots:
        raise EmptySketchError(f"sketch for {left.lexeme} has no slots")
    if not right.slots:
        raise EmptySketchError(f"sketch for {right.lexeme} has no slots")
    lroles = left.role_names()
    rroles = right.role_names()
    jaccard = len(lroles & rroles) / len(lroles | rroles)
    shared = sorted(lroles & rroles)
    if shared:
        sims = [
            cosine(class_vector(left.slot(r)), class_vector(right.slot(r)))
            for r in shared
        ]
        filler_term = sum(sims) / len(sims)
    else:
        filler_term = 0.0
    return role_weight * jaccard + filler_weight * filler_term


def pair_by_class(
    left_set: Iterable[Sketch],
    right_set: Iterable[Sketch],
    role_weight: float = DEFAULT_ROLE_WEIGHT,
    filler_weight: float = DEFAULT_FILLER_WEIGHT,
) -> list[SketchPair]:
    """Full cross product within each shared semantic class.

    Only cross-language combinations form pairs; classes present on one side
    only yield none. Sorted by (semclass, left, right) for reproducibility.
    """
    by_class_left: dict[str, list[Sketch]] = {}
    for sk in left_set:
        by_class_left.setdefault(sk.lexeme.semclass, []).append(sk)
    by_class_right: dict[str, list[Sketch]] = {}
    for sk in right_set:
        by_class_right.setdefault(sk.lexeme.semclass, []).append(sk)

    pairs = []
    for semclass in sorted(set(by_class_left) & set(by_class_right)):
        lefts = sorted(by_class_left[semclass], key=lambda s: s.lexeme.key())
        rights = sorted(by_class_right[semclass], key=lambda s: s.lexeme.key())
        for l in lefts:
            for r in rights:
                if l.lexeme.language == r.lexeme.language:
                    continue
                pairs.append(
                    SketchPair(
                        left=l,
                        right=r,
                        semclass=semclass,
                        affinity=affinity(l, r, role_weight, filler_weight),
                    )
                )
    pairs.sort(
        key=lambda p: (p.semclass, p.left.lexeme.key(), p.right.lexeme.key())
    )
    return pairs


def diff(pair: SketchPair, divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD) -> DiffReport:
    """Role gaps (symmetric difference) and per-shared-role filler-class overlap."""
    lroles = pair.left.role_names()
    rroles = pair.right.role_names()

    gaps = []
    for role in sorted(lroles - rroles):
        gaps.append(RoleGap(role, "left", pair.left.slot(role).link_count))
    for role in sorted(rroles - lroles):
        gaps.append(RoleGap(role, "right", pair.right.slot(role).link_count))
    gaps.sort(key=lambda g: (g.role, g.side))

    shared = []
    divergent = False
    for role in sorted(lroles & rroles):
        lvec = class_vector(pair.left.slot(role))
        rvec = class_vector(pair.right.slot(role))
        overlap = weighted_jaccard(lvec, rvec)
        if overlap < divergence_threshold:
            divergent = True
        shared.append(
            SharedRoleDiff(
                role=role,
                class_overlap=overlap,
                left_only_classes=tuple(sorted(set(lvec) - set(rvec))),
                right_only_classes=tuple(sorted(set(rvec) - set(lvec))),
            )
        )

    verdicts = set()
    if gaps:
        verdicts.add(ROLE_GAP)
    if divergent:
        verdicts.add(FILLER_DIVERGENCE)
    if not verdicts:
        verdicts.add(NONE)
    return DiffReport(tuple(gaps), tuple(shared), frozenset(verdicts))


def field_structure_report(
    semclass: str,
    left_set: Iterable[Sketch],
    right_set: Iterable[Sketch],
    role: str = "Object",
) -> FieldReport:
    """How each language's member verbs of a class partition the filler space.

    For every member lexeme, its filler-class distribution in the given role;
    the partition then shows, per filler class, which lexemes of each
    language cover it (the pour vs лить/сыпать picture).
    """
    left_members = [s for s in left_set if s.lexeme.semclass == semclass]
    right_members = [s for s in right_set if s.lexeme.semclass == semclass]
    if not left_members:
        raise EmptyClassError(f"left side has no sketches in class {semclass!r}")
    if not right_members:
        raise EmptyClassError(f"right side has no sketches in class {semclass!r}")

    members: dict[str, list[MemberDistribution]] = {}
    for sk in left_members + right_members:
        slot = sk.slot(role)
        dist = class_vector(slot) if slot is not None else {}
        members.setdefault(sk.lexeme.language, []).append(
            MemberDistribution(sk.lexeme, dict(sorted(dist.items())))
        )
    for lang in members:
        members[lang].sort(key=lambda m: m.lexeme.key())

    partition: dict[str, dict[str, list[str]]] = {}
    for lang, mems in members.items():
        for m in mems:
            for fclass in m.distribution:
                partition.setdefault(fclass, {}).setdefault(lang, []).append(m.lexeme.lemma)

    frozen_partition = {
        fclass: {lang: tuple(sorted(lemmas)) for lang, lemmas in sorted(langs.items())}
        for fclass, langs in sorted(partition.items())
    }
    return FieldReport(
        semclass=semclass,
        role=role,
        members={lang: tuple(mems) for lang, mems in sorted(members.items())},
        partition=frozen_partition,
    )


def _lexeme_json(lexeme: Lexeme) -> dict:
    return {"lang": lexeme.language, "lemma": lexeme.lemma, "semclass": lexeme.semclass}


def pair_to_json(pair: SketchPair) -> dict:
    return {
        "semclass": pair.semclass,
        "left": _lexeme_json(pair.left.lexeme),
        "right": _lexeme_json(pair.right.lexeme),
        "affinity": pair.affinity,
    }


def diff_to_json(report: DiffReport) -> dict:
    return {
        "role_gaps": [
            {"role": g.role, "side": g.side, "link_count": g.link_count} for g in report.role_gaps
        ],
        "shared_roles": [
            {
                "role": s.role,
                "class_overlap": s.class_overlap,
                "left_only_classes": list(s.left_only_classes),
                "right_only_classes": list(s.right_only_classes),
            }
            for s in report.shared_roles
        ],
        "verdicts": sorted(report.verdicts),
    }


def pair_diff_to_json(pair: SketchPair, report: DiffReport) -> dict:
    return {"pair": pair_to_json(pair), "diff": diff_to_json(report)}


def diff_from_json(data: dict) -> DiffReport:
    return DiffReport(
        role_gaps=tuple(RoleGap(g["role"], g["side"], g["link_count"]) for g in data["role_gaps"]),
        shared_roles=tuple(
            SharedRoleDiff(
                s["role"],
                s["class_overlap"],
                tuple(s["left_only_classes"]),
                tuple(s["right_only_classes"]),
            )
            for s in data["shared_roles"]
        ),
        verdicts=frozenset(data["verdicts"]),
    )


def field_report_to_json(report: FieldReport) -> dict:
    members_json = {}
    for lang, mems in report.members.items():
        rows = []
        for m in mems:
            total = sum(m.distribution.values())
            rows.append(
                {
                    "lexeme": _lexeme_json(m.lexeme),
                    "distribution": [
                        {
                            "semclass": c,
                            "count": n,
                            "share": n / total if total else 0.0,
                        }
                        for c, n in m.distribution.items()
                    ],
                }
            )
        members_json[lang] = rows
    return {
        "semclass": report.semclass,
        "role": report.role,
        "members": members_json,
        "partition": [
            {
                "filler_class": fclass,
                "covered_by": {lang: list(lemmas) for lang, lemmas in langs.items()},
            }
            for fclass, langs in report.partition.items()
        ],
    }
