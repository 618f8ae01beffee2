import io
import random

import pytest

from semsketch.errors import FormatError, UnknownClassError
from semsketch.model import (
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

FIVE_NODE = [
    SemanticClass("A", None),
    SemanticClass("B", "A"),
    SemanticClass("C", "A"),
    SemanticClass("D", "B"),
    SemanticClass("E", "D"),
]


def chain_walk_is_descendant(parent: dict, name: str, ancestor: str) -> bool:
    # independent oracle: literal parent-chain walk
    cur = name
    while cur is not None:
        if cur == ancestor:
            return True
        cur = parent[cur]
    return False


class TestHierarchy:
    def test_load_from_tsv(self, hierarchy):
        assert hierarchy.root == "ROOT"
        assert "TO_POUR" in hierarchy
        assert "LIQUID" in hierarchy
        assert hierarchy.get("LIQUID").parent == "SUBSTANCE"

    def test_comments_and_blank_lines_ignored(self):
        h = load_hierarchy(io.StringIO("# c\nROOT\t\n\nX\tROOT\n"))
        assert len(h) == 2

    def test_duplicate_name_rejected(self):
        with pytest.raises(FormatError):
            SemanticHierarchy([SemanticClass("A"), SemanticClass("A", "A")])

    def test_two_roots_rejected(self):
        with pytest.raises(FormatError):
            SemanticHierarchy([SemanticClass("A"), SemanticClass("B")])

    def test_cycle_rejected(self):
        with pytest.raises(FormatError):
            SemanticHierarchy(
                [SemanticClass("A"), SemanticClass("B", "C"), SemanticClass("C", "B")]
            )

    def test_unknown_parent_rejected(self):
        with pytest.raises(FormatError):
            SemanticHierarchy([SemanticClass("A"), SemanticClass("B", "X")])

    def test_lowercase_name_rejected(self):
        with pytest.raises(FormatError):
            SemanticHierarchy([SemanticClass("root")])

    def test_acceptance_agrees_with_brute_force_cycle_search(self):
        # random parent maps, some valid, some cyclic/forest-shaped
        rng = random.Random(7)
        names = ["N0", "N1", "N2", "N3", "N4", "N5"]
        for _ in range(300):
            rows = []
            for i, name in enumerate(names):
                choice = rng.random()
                if choice < 0.2:
                    parent = None
                elif choice < 0.9:
                    parent = rng.choice(names[:i] or [None])
                else:
                    parent = rng.choice(names)  # may point forward or at itself
                rows.append((name, parent))
            parent_map = dict(rows)
            roots = [n for n, p in rows if p is None]
            expected = len(roots) == 1
            if expected:
                for name in names:
                    cur, steps = name, 0
                    while parent_map[cur] is not None and steps <= len(names):
                        cur = parent_map[cur]
                        steps += 1
                    if parent_map[cur] is not None:
                        expected = False  # never reached a root: cycle
                        break
            try:
                SemanticHierarchy(SemanticClass(n, p) for n, p in rows)
                accepted = True
            except FormatError:
                accepted = False
            assert accepted == expected, rows

    def test_checksum_is_content_based(self):
        a = load_hierarchy(io.StringIO("ROOT\t\nX\tROOT\n"))
        b = load_hierarchy(io.StringIO("# comment\nX\tROOT\nROOT\t\n"))
        c = load_hierarchy(io.StringIO("ROOT\t\nY\tROOT\n"))
        assert a.checksum() == b.checksum()
        assert a.checksum() != c.checksum()

    def test_parent_map_round_trip(self, hierarchy):
        again = SemanticHierarchy.from_parent_map(hierarchy.as_parent_map())
        assert again.checksum() == hierarchy.checksum()


class TestIsDescendant:
    def test_reflexive(self, hierarchy):
        assert is_descendant(hierarchy, "LIQUID", "LIQUID")

    def test_root_is_ancestor_of_every_class(self, hierarchy):
        for name in hierarchy.names():
            assert is_descendant(hierarchy, name, "ROOT")

    def test_all_25_pairs_match_chain_walk_oracle(self):
        h = SemanticHierarchy(FIVE_NODE)
        parent = {c.name: c.parent for c in FIVE_NODE}
        for a in parent:
            for b in parent:
                assert is_descendant(h, a, b) == chain_walk_is_descendant(parent, a, b), (a, b)

    def test_unknown_class_raises(self, hierarchy):
        with pytest.raises(UnknownClassError):
            is_descendant(hierarchy, "NO_SUCH", "ROOT")
        with pytest.raises(UnknownClassError):
            is_descendant(hierarchy, "ROOT", "NO_SUCH")


class TestLexeme:
    def test_identity_is_nfc_normalized(self):
        composed = Lexeme("fr", "café", "ENTITY")
        decomposed = Lexeme("fr", "café", "ENTITY")
        assert composed == decomposed
        assert composed.lemma == "café"

    def test_case_sensitive(self):
        assert Lexeme("en", "Find", "TO_SEEK_FIND") != Lexeme("en", "find", "TO_SEEK_FIND")

    def test_same_lemma_different_class_is_different_sense(self):
        assert Lexeme("en", "play", "TO_COMMIT") != Lexeme("en", "play", "TO_FOCUS")


def make_record(**overrides):
    base = dict(
        language="en",
        core=Lexeme("en", "focus", "TO_FOCUS"),
        role="Object",
        filler_lemma="effort",
        filler_semclass="ACTIVITY",
        sent_id="s17",
        core_token=2,
        filler_token=4,
    )
    base.update(overrides)
    return LinkRecord(**base)


class TestValidateLink:
    def test_well_formed_record_ok(self, hierarchy):
        assert validate_link(make_record(), hierarchy).ok

    def test_unknown_class(self, hierarchy):
        result = validate_link(make_record(filler_semclass="NO_SUCH"), hierarchy)
        assert [v.code for v in result.violations] == ["UNKNOWN_CLASS"]

    def test_empty_role(self, hierarchy):
        result = validate_link(make_record(role=""), hierarchy)
        assert [v.code for v in result.violations] == ["EMPTY_ROLE"]

    def test_whitespace_role(self, hierarchy):
        result = validate_link(make_record(role="Bad Role"), hierarchy)
        assert [v.code for v in result.violations] == ["ROLE_WHITESPACE"]

    def test_negative_token(self, hierarchy):
        result = validate_link(make_record(core_token=-1), hierarchy)
        assert [v.code for v in result.violations] == ["NEGATIVE_TOKEN"]

    def test_language_mismatch(self, hierarchy):
        result = validate_link(make_record(language="ru"), hierarchy)
        assert "LANGUAGE_MISMATCH" in [v.code for v in result.violations]

    def test_multiple_violations_all_reported(self, hierarchy):
        result = validate_link(
            make_record(role="", filler_semclass="NO_SUCH", filler_token=-2), hierarchy
        )
        codes = {v.code for v in result.violations}
        assert codes == {"EMPTY_ROLE", "UNKNOWN_CLASS", "NEGATIVE_TOKEN"}


class TestConfig:
    def test_defaults(self):
        cfg = Config()
        assert cfg.min_links == 200
        assert cfg.top_fillers == 8
        assert cfg.max_roles is None
        assert cfg.measure is Measure.FREQUENCY
        assert (cfg.sparse_max_links, cfg.narrow_max_distinct, cfg.narrow_min_links) == (10, 4, 50)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"min_links": -1},
            {"top_fillers": 0},
            {"max_roles": 0},
            {"sparse_max_links": -1},
            {"narrow_max_distinct": 0},
            {"narrow_min_links": 0},
        ],
    )
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(FormatError):
            Config(**kwargs)

    def test_json_round_trip(self):
        cfg = Config(min_links=2000, measure=Measure.LOGDICE, max_roles=6)
        assert Config.from_json(cfg.to_json()) == cfg

    def test_measure_parse(self):
        assert Measure.parse("freq") is Measure.FREQUENCY
        assert Measure.parse("logdice") is Measure.LOGDICE
        with pytest.raises(FormatError):
            Measure.parse("tfidf")
