"""Shared fixtures: the figure-modeled corpus and random corpus generators."""

from __future__ import annotations

import io
import random

import pytest

from semsketch.contrastive import diff, pair_by_class
from semsketch.index import FrequencyIndex
from semsketch.ingest import SentenceEntry, parse_link_stream
from semsketch.model import Config, SemanticHierarchy, load_hierarchy
from semsketch.sketch import attach_examples, build_sketch, flag_suspicious_fillers
from semsketch.store import load_sketch_set, save_sketch_set

HIERARCHY_TSV = """\
# shared semantic class tree (both languages)
ROOT\t
TO_FOCUS\tROOT
TO_SEEK_FIND\tROOT
TO_SHAKE\tROOT
TO_COMMIT\tROOT
TO_POUR\tROOT
TO_THROW\tROOT
ENTITY\tROOT
HUMAN\tENTITY
ABSTRACT\tENTITY
ACTIVITY\tENTITY
OBJECT_CLASS\tENTITY
SUBSTANCE\tENTITY
LIQUID\tSUBSTANCE
FRIABLE\tSUBSTANCE
TIME_PERIOD\tENTITY
PLACE\tENTITY
DISTANCE\tABSTRACT
PURPOSE\tABSTRACT
JOKE\tACTIVITY
GAME\tACTIVITY
PERFORMANCE\tACTIVITY
CEREMONY\tACTIVITY
TASK\tACTIVITY
STEP\tACTIVITY
CHOICE\tABSTRACT
"""


@pytest.fixture(scope="session")
def hierarchy() -> SemanticHierarchy:
    return load_hierarchy(io.StringIO(HIERARCHY_TSV))


class CorpusBuilder:
    """Accumulates SLF lines plus a matching sentence table."""

    def __init__(self):
        self.lines: list[str] = []
        self.sentences: dict[str, SentenceEntry] = {}
        self._next_sid = 0

    def add(self, lang, core_lemma, core_class, role, filler_lemma, filler_class, n=1, text=None):
        for _ in range(n):
            sid = f"s{self._next_sid}"
            self._next_sid += 1
            self.sentences[sid] = SentenceEntry(
                sid, lang, text or f"… {core_lemma} … {filler_lemma} … [{sid}]"
            )
            self.lines.append(
                f"{lang}\t{core_lemma}\t{core_class}\t{role}\t{filler_lemma}\t{filler_class}\t{sid}\t0\t2"
            )
        return self

    def slf_text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def sentence_text(self) -> str:
        return (
            "\n".join(
                f"{e.sent_id}\t{e.language}\t{e.text}" for e in self.sentences.values()
            )
            + "\n"
        )

    def records(self) -> list:
        return list(parse_link_stream(io.StringIO(self.slf_text())))

    def index(self, hierarchy: SemanticHierarchy, max_examples: int = 5) -> FrequencyIndex:
        idx = FrequencyIndex(hierarchy, max_examples=max_examples)
        idx.accumulate_all(self.records())
        idx.sentences = dict(self.sentences)
        return idx


def build_paper_corpus() -> CorpusBuilder:
    """Fixture corpus modeled on the published sketch figures.

    Covers: the find/найти sixth-role contrast, the shake/трясти initial-point
    gap, играть's four-filler Object slot, the pour vs лить/сыпать partition
    of the TO_POUR field, wide do/делать compatibility, and throw's stray
    distance filler under Purpose_Goal.
    """
    c = CorpusBuilder()

    # en find:TO_SEEK_FIND — five frequent roles + Metaphoric_Locative
    c.add("en", "find", "TO_SEEK_FIND", "Object", "way", "ABSTRACT", 30)
    c.add("en", "find", "TO_SEEK_FIND", "Object", "place", "PLACE", 20)
    c.add("en", "find", "TO_SEEK_FIND", "Object", "job", "ACTIVITY", 10)
    c.add("en", "find", "TO_SEEK_FIND", "Agent", "man", "HUMAN", 30)
    c.add("en", "find", "TO_SEEK_FIND", "Agent", "woman", "HUMAN", 20)
    c.add("en", "find", "TO_SEEK_FIND", "Time", "day", "TIME_PERIOD", 20)
    c.add("en", "find", "TO_SEEK_FIND", "Locative", "city", "PLACE", 15)
    c.add("en", "find", "TO_SEEK_FIND", "Experiencer", "team", "HUMAN", 11)
    c.add("en", "find", "TO_SEEK_FIND", "Metaphoric_Locative", "heart", "ABSTRACT", 8)
    # ru найти:TO_SEEK_FIND — same five roles, Modality instead
    c.add("ru", "найти", "TO_SEEK_FIND", "Object", "путь", "ABSTRACT", 30)
    c.add("ru", "найти", "TO_SEEK_FIND", "Object", "место", "PLACE", 15)
    c.add("ru", "найти", "TO_SEEK_FIND", "Object", "работа", "ACTIVITY", 10)
    c.add("ru", "найти", "TO_SEEK_FIND", "Agent", "человек", "HUMAN", 45)
    c.add("ru", "найти", "TO_SEEK_FIND", "Time", "день", "TIME_PERIOD", 18)
    c.add("ru", "найти", "TO_SEEK_FIND", "Locative", "город", "PLACE", 12)
    c.add("ru", "найти", "TO_SEEK_FIND", "Experiencer", "команда", "HUMAN", 11)
    c.add("ru", "найти", "TO_SEEK_FIND", "Modality", "возможность", "ABSTRACT", 7)

    # en shake:TO_SHAKE has the initial point; ru трясти:TO_SHAKE does not
    c.add("en", "shake", "TO_SHAKE", "Object", "head", "OBJECT_CLASS", 25)
    c.add("en", "shake", "TO_SHAKE", "Object", "hand", "OBJECT_CLASS", 15)
    c.add("en", "shake", "TO_SHAKE", "Agent", "man", "HUMAN", 30)
    c.add(
        "en", "shake", "TO_SHAKE", "Locative_InitialPoint", "head", "OBJECT_CLASS", 7,
        text="A sound they couldn't shake from their heads.",
    )
    c.add(
        "en", "shake", "TO_SHAKE", "Locative_InitialPoint", "handkerchief", "OBJECT_CLASS", 5,
        text="The tortoiseshell comb shaken from its handkerchief.",
    )
    c.add("ru", "трясти", "TO_SHAKE", "Object", "голова", "OBJECT_CLASS", 20)
    c.add("ru", "трясти", "TO_SHAKE", "Object", "рука", "OBJECT_CLASS", 15)
    c.add("ru", "трясти", "TO_SHAKE", "Agent", "человек", "HUMAN", 25)

    # ru играть:TO_COMMIT — exactly four Object fillers, 120 links (narrow slot)
    c.add("ru", "играть", "TO_COMMIT", "Object", "шутка", "JOKE", 40)
    c.add("ru", "играть", "TO_COMMIT", "Object", "роль", "PERFORMANCE", 40)
    c.add("ru", "играть", "TO_COMMIT", "Object", "партия", "GAME", 25)
    c.add("ru", "играть", "TO_COMMIT", "Object", "свадьба", "CEREMONY", 15)
    c.add("ru", "играть", "TO_COMMIT", "Agent", "человек", "HUMAN", 40)
    c.add("ru", "играть", "TO_COMMIT", "Agent", "ребёнок", "HUMAN", 20)
    c.add("ru", "играть", "TO_COMMIT", "Time", "вечер", "TIME_PERIOD", 30)
    # en play:TO_COMMIT
    c.add("en", "play", "TO_COMMIT", "Object", "trick", "JOKE", 50)
    c.add("en", "play", "TO_COMMIT", "Object", "role", "PERFORMANCE", 40)
    c.add("en", "play", "TO_COMMIT", "Agent", "man", "HUMAN", 45)
    c.add("en", "play", "TO_COMMIT", "Time", "evening", "TIME_PERIOD", 25)
    # wide, closely matching do/делать compatibility
    c.add("en", "do", "TO_COMMIT", "Object", "task", "TASK", 40)
    c.add("en", "do", "TO_COMMIT", "Object", "step", "STEP", 30)
    c.add("en", "do", "TO_COMMIT", "Object", "choice", "CHOICE", 30)
    c.add("en", "do", "TO_COMMIT", "Agent", "man", "HUMAN", 50)
    c.add("en", "do", "TO_COMMIT", "Time", "day", "TIME_PERIOD", 20)
    c.add("ru", "делать", "TO_COMMIT", "Object", "дело", "TASK", 35)
    c.add("ru", "делать", "TO_COMMIT", "Object", "шаг", "STEP", 30)
    c.add("ru", "делать", "TO_COMMIT", "Object", "выбор", "CHOICE", 25)
    c.add("ru", "делать", "TO_COMMIT", "Agent", "человек", "HUMAN", 45)
    c.add("ru", "делать", "TO_COMMIT", "Time", "день", "TIME_PERIOD", 18)

    # the TO_POUR field: en pour spans both substances, ru splits the field
    c.add("en", "pour", "TO_POUR", "Object", "water", "LIQUID", 30)
    c.add("en", "pour", "TO_POUR", "Object", "wine", "LIQUID", 20)
    c.add("en", "pour", "TO_POUR", "Object", "sand", "FRIABLE", 25)
    c.add("en", "pour", "TO_POUR", "Object", "sugar", "FRIABLE", 25)
    c.add("en", "pour", "TO_POUR", "Agent", "man", "HUMAN", 20)
    c.add("ru", "лить", "TO_POUR", "Object", "вода", "LIQUID", 40)
    c.add("ru", "лить", "TO_POUR", "Object", "вино", "LIQUID", 20)
    c.add("ru", "лить", "TO_POUR", "Agent", "человек", "HUMAN", 15)
    c.add("ru", "сыпать", "TO_POUR", "Object", "песок", "FRIABLE", 30)
    c.add("ru", "сыпать", "TO_POUR", "Object", "сахар", "FRIABLE", 20)
    c.add("ru", "сыпать", "TO_POUR", "Agent", "человек", "HUMAN", 10)

    # en throw:TO_THROW — a lone distance group misfiled under Purpose_Goal
    c.add("en", "throw", "TO_THROW", "Object", "ball", "OBJECT_CLASS", 30)
    c.add("en", "throw", "TO_THROW", "Agent", "player", "HUMAN", 20)
    c.add("en", "throw", "TO_THROW", "Purpose_Goal", "touchdown", "PURPOSE", 5)
    c.add("en", "throw", "TO_THROW", "Purpose_Goal", "win", "PURPOSE", 3)
    c.add(
        "en", "throw", "TO_THROW", "Purpose_Goal", "yard", "DISTANCE", 1,
        text="He threw for 408 yards in the game.",
    )

    # en focus:TO_FOCUS — the canonical single-sense example
    c.add("en", "focus", "TO_FOCUS", "Object", "attention", "ABSTRACT", 40)
    c.add("en", "focus", "TO_FOCUS", "Object", "effort", "ACTIVITY", 25)
    c.add("en", "focus", "TO_FOCUS", "Object", "mind", "ABSTRACT", 15)
    c.add("en", "focus", "TO_FOCUS", "Agent", "team", "HUMAN", 30)
    c.add("en", "focus", "TO_FOCUS", "Time", "year", "TIME_PERIOD", 10)
    return c


@pytest.fixture(scope="session")
def paper_corpus() -> CorpusBuilder:
    return build_paper_corpus()


@pytest.fixture(scope="session")
def paper_index(paper_corpus, hierarchy) -> FrequencyIndex:
    return paper_corpus.index(hierarchy)


NONASCII_LEMMAS = ["найти", "трясти", "молоко", "über", "café", "好", "σήμα", "işlem"]


def random_corpus(
    rng: random.Random,
    n_links: int,
    languages=("en", "ru"),
    n_lexemes: int = 20,
    n_roles: int = 8,
    classes=("ENTITY", "HUMAN", "ABSTRACT", "ACTIVITY", "PLACE", "LIQUID", "FRIABLE", "OBJECT_CLASS"),
) -> CorpusBuilder:
    """A randomized but well-formed corpus over the session hierarchy's classes."""
    verb_classes = ("TO_FOCUS", "TO_SEEK_FIND", "TO_SHAKE", "TO_COMMIT", "TO_POUR", "TO_THROW")
    lexemes = []
    for i in range(n_lexemes):
        lang = languages[i % len(languages)]
        lemma = rng.choice(NONASCII_LEMMAS) + str(i) if rng.random() < 0.4 else f"verb{i}"
        lexemes.append((lang, lemma, rng.choice(verb_classes)))
    roles = [f"Role{j}" for j in range(n_roles)]
    fillers = [(f"noun{k}", rng.choice(classes)) for k in range(30)] + [
        (lemma, rng.choice(classes)) for lemma in NONASCII_LEMMAS
    ]
    c = CorpusBuilder()
    for _ in range(n_links):
        lang, lemma, vclass = rng.choice(lexemes)
        flemma, fclass = rng.choice(fillers)
        c.add(lang, lemma, vclass, rng.choice(roles), flemma, fclass)
    return c


def build_store_from_index(index, root, config=None, with_pairs=True):
    """The full build pipeline: sketches at full width, flags, examples, pairs."""
    config = config or Config(min_links=1)
    sketches = []
    for lexeme in index.eligible_lexemes(config.min_links):
        sk = build_sketch(index, lexeme, config, all_fillers=True)
        sk = flag_suspicious_fillers(sk, index)
        if index.sentences:
            sk, _ = attach_examples(sk, index.sentences)
        sketches.append(sk)
    pairs, diffs = [], []
    if with_pairs:
        en = [s for s in sketches if s.lexeme.language == "en"]
        ru = [s for s in sketches if s.lexeme.language == "ru"]
        pairs = pair_by_class(en, ru)
        diffs = [diff(p) for p in pairs]
    save_sketch_set(
        root,
        sketches,
        pairs,
        diffs,
        hierarchy_checksum=index.hierarchy.checksum(),
        build_config=config,
    )
    return load_sketch_set(root)


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    print(f"\nACCEPTANCE {name}: {'PASS' if report.passed else 'FAIL'}")
