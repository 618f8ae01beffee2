"""On-disk sketch store: the single integration surface for CLI, API and UI.

Layout under the store root:

    manifest.json                                  # counts, config, checksums
    sketches/<lang>/<lemma>/<semclass>.json        # one file per sketch, full width
    pairs.json                                     # pair + diff list (optional)

Path segments are percent-encoded so any lemma addresses a unique file.
Sketch files use the internal sketch schema (public schema plus per-filler
marginals). All writes are deterministic; the manifest is replaced
atomically (write-temp-then-rename). Loaded stores are immutable.
"""

from __future__ import annotations

import json
import os
import shutil
import urllib.parse
from pathlib import Path
from typing import Iterable, Sequence

from .contrastive import DiffReport, SketchPair, diff_from_json, diff_to_json, pair_to_json
from .errors import ChecksumError, StoreIOError, VersionError
from .model import Config, Lexeme
from .sketch import Sketch, sketch_from_json, sketch_to_json

FORMAT_NAME = "semsketch-store"
FORMAT_VERSION = 1


def _dumps(obj, indent: int | None = None) -> str:
    if indent is None:
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"
    return json.dumps(obj, ensure_ascii=False, indent=indent) + "\n"


def encode_segment(text: str) -> str:
    """Percent-encode one path segment; '.'/'..' are forced to %2E forms."""
    seg = urllib.parse.quote(text, safe="")
    if seg in (".", ".."):
        seg = seg.replace(".", "%2E")
    if not seg:
        raise StoreIOError("cannot address an empty path segment")
    return seg


def decode_segment(seg: str) -> str:
    return urllib.parse.unquote(seg)


class SketchStore:
    """An immutable, fully loaded sketch set."""

    def __init__(
        self,
        root: Path,
        manifest: dict,
        sketches: dict[tuple[str, str, str], Sketch],
        pairs: list[tuple[SketchPair, DiffReport]],
    ):
        self.root = root
        self.manifest = manifest
        self._sketches = sketches
        self.pairs = pairs

    @property
    def hierarchy_checksum(self) -> str:
        return self.manifest["hierarchy_checksum"]

    @property
    def build_config(self) -> Config:
        return Config.from_json(self.manifest["build_config"])

    @property
    def languages(self) -> list[str]:
        return list(self.manifest["languages"])

    def sketches(self) -> list[Sketch]:
        return [self._sketches[k] for k in sorted(self._sketches)]

    def sketches_for(self, language: str) -> list[Sketch]:
        return [s for s in self.sketches() if s.lexeme.language == language]

    def get(self, language: str, lemma: str, semclass: str) -> Sketch | None:
        return self._sketches.get((language, lemma, semclass))

    def lexemes(self, language: str | None = None, prefix: str = "") -> list[Lexeme]:
        out = []
        for key in sorted(self._sketches):
            lang, lemma, semclass = key
            if language is not None and lang != language:
                continue
            if prefix and not lemma.startswith(prefix):
                continue
            out.append(Lexeme(lang, lemma, semclass))
        return out

    def find_pair(self, left: Lexeme, right: Lexeme) -> tuple[SketchPair, DiffReport] | None:
        for pair, report in self.pairs:
            if pair.left.lexeme == left and pair.right.lexeme == right:
                return pair, report
        return None


def _sketch_path(root: Path, lexeme: Lexeme) -> Path:
    return (
        root
        / "sketches"
        / encode_segment(lexeme.language)
        / encode_segment(lexeme.lemma)
        / (encode_segment(lexeme.semclass) + ".json")
    )


def save_sketch_set(
    root: str | Path,
    sketches: Iterable[Sketch],
    pairs: Sequence[SketchPair] = (),
    diffs: Sequence[DiffReport] = (),
    hierarchy_checksum: str = "",
    build_config: Config | None = None,
) -> None:
    """Write a complete store. ``diffs`` runs parallel to ``pairs``."""
    if len(pairs) != len(diffs):
        raise StoreIOError(f"got {len(pairs)} pairs but {len(diffs)} diffs")
    root = Path(root)
    if root.exists() and any(root.iterdir()) and not (root / "manifest.json").is_file():
        raise StoreIOError(f"{root} exists, is not empty and is not a sketch store; refusing to overwrite")
    try:
        root.mkdir(parents=True, exist_ok=True)
        # rebuilding replaces the whole set; stale files would break the counts
        if (root / "sketches").is_dir():
            shutil.rmtree(root / "sketches")
        counts: dict[str, int] = {}
        for sketch in sketches:
            path = _sketch_path(root, sketch.lexeme)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(_dumps(sketch_to_json(sketch, internal=True)), encoding="utf-8")
            counts[sketch.lexeme.language] = counts.get(sketch.lexeme.language, 0) + 1

        if pairs:
            rows = [
                {"pair": pair_to_json(p), "diff": diff_to_json(d)}
                for p, d in zip(pairs, diffs)
            ]
            (root / "pairs.json").write_text(_dumps({"pairs": rows}), encoding="utf-8")
        elif (root / "pairs.json").exists():
            (root / "pairs.json").unlink()

        config = build_config if build_config is not None else Config(min_links=0)
        manifest = {
            "format": FORMAT_NAME,
            "format_version": FORMAT_VERSION,
            "hierarchy_checksum": hierarchy_checksum,
            "languages": sorted(counts),
            "sketch_counts": dict(sorted(counts.items())),
            "pair_count": len(pairs),
            "build_config": config.to_json(),
        }
        tmp = root / "manifest.json.tmp"
        tmp.write_text(_dumps(manifest, indent=2), encoding="utf-8")
        os.replace(tmp, root / "manifest.json")
    except OSError as exc:
        raise StoreIOError(f"cannot write store at {root}: {exc}") from exc


def load_sketch_set(root: str | Path) -> SketchStore:
    """Load and integrity-check a store; never returns a partial load."""
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise VersionError(f"{root} is not a sketch store (no manifest.json)")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise VersionError(f"unreadable manifest at {manifest_path}: {exc}") from exc
    if not isinstance(manifest, dict) or manifest.get("format") != FORMAT_NAME:
        raise VersionError(f"{root} is not a sketch store (bad format tag)")
    if manifest.get("format_version") != FORMAT_VERSION:
        raise VersionError(
            f"unsupported store format_version {manifest.get('format_version')!r}, "
            f"expected {FORMAT_VERSION}"
        )

    sketches: dict[tuple[str, str, str], Sketch] = {}
    counts: dict[str, int] = {}
    sketch_dir = root / "sketches"
    if sketch_dir.is_dir():
        for path in sorted(sketch_dir.glob("*/*/*.json")):
            try:
                sketch = sketch_from_json(json.loads(path.read_text(encoding="utf-8")))
            except (OSError, ValueError, KeyError) as exc:
                raise ChecksumError(f"corrupt sketch file {path}: {exc}") from exc
            addressed = (
                decode_segment(path.parent.parent.name),
                decode_segment(path.parent.name),
                decode_segment(path.stem),
            )
            if addressed != sketch.lexeme.key():
                raise ChecksumError(
                    f"sketch file {path} is addressed as {addressed} but holds {sketch.lexeme}"
                )
            sketches[sketch.lexeme.key()] = sketch
            counts[sketch.lexeme.language] = counts.get(sketch.lexeme.language, 0) + 1

    if counts != manifest.get("sketch_counts"):
        raise ChecksumError(
            f"manifest sketch_counts {manifest.get('sketch_counts')} do not match "
            f"on-disk counts {counts}"
        )

    pairs: list[tuple[SketchPair, DiffReport]] = []
    pairs_path = root / "pairs.json"
    if pairs_path.is_file():
        try:
            rows = json.loads(pairs_path.read_text(encoding="utf-8"))["pairs"]
        except (OSError, ValueError, KeyError) as exc:
            raise ChecksumError(f"corrupt pairs.json: {exc}") from exc
        for row in rows:
            p = row["pair"]
            left_key = (p["left"]["lang"], p["left"]["lemma"], p["left"]["semclass"])
            right_key = (p["right"]["lang"], p["right"]["lemma"], p["right"]["semclass"])
            if left_key not in sketches or right_key not in sketches:
                raise ChecksumError(f"pairs.json references a sketch missing from the store: {p}")
            pair = SketchPair(
                left=sketches[left_key],
                right=sketches[right_key],
                semclass=p["semclass"],
                affinity=p["affinity"],
            )
            pairs.append((pair, diff_from_json(row["diff"])))

    if len(pairs) != manifest.get("pair_count", 0):
        raise ChecksumError(
            f"manifest pair_count {manifest.get('pair_count')} does not match "
            f"on-disk count {len(pairs)}"
        )
    return SketchStore(root, manifest, sketches, pairs)
