"""Render field-structure reports: TSV rows plus a coverage heatmap figure.

The figure mirrors the report's partition view: one row per member verb,
one column per filler class, cell intensity = that verb's share of the
class in the inspected role. Written files sit next to each other so the
TSV and the figure can be shipped together.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .contrastive import FieldReport

TSV_HEADER = ("language", "lemma", "filler_class", "count", "share")


def field_report_rows(report: FieldReport) -> list[tuple[str, str, str, int, float]]:
    """Flatten the per-member distributions into sorted delimited rows."""
    rows = []
    for lang in sorted(report.members):
        for member in report.members[lang]:
            total = sum(member.distribution.values())
            for fclass, count in member.distribution.items():
                rows.append((lang, member.lexeme.lemma, fclass, count, count / total))
    return rows


def format_field_report_tsv(report: FieldReport) -> str:
    lines = ["\t".join(TSV_HEADER)]
    for lang, lemma, fclass, count, share in field_report_rows(report):
        lines.append(f"{lang}\t{lemma}\t{fclass}\t{count}\t{share:.6f}")
    return "\n".join(lines) + "\n"


def write_field_report_tsv(report: FieldReport, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_field_report_tsv(report), encoding="utf-8")
    return path


def render_field_report_figure(report: FieldReport, path: str | Path) -> Path:
    """Save the coverage heatmap as a PNG and return its path."""
    members = [(lang, m) for lang in sorted(report.members) for m in report.members[lang]]
    classes = sorted(report.partition)
    if not classes:
        classes = ["(none)"]
    grid = []
    for _, member in members:
        total = sum(member.distribution.values())
        grid.append(
            [member.distribution.get(c, 0) / total if total else 0.0 for c in classes]
        )

    fig, ax = plt.subplots(
        figsize=(max(4.0, 1.1 * len(classes) + 2.0), max(3.0, 0.55 * len(members) + 1.5))
    )
    im = ax.imshow(grid, cmap="YlGnBu", vmin=0.0, vmax=1.0, aspect="auto")
    ax.set_xticks(range(len(classes)))
    ax.set_xticklabels(classes, rotation=40, ha="right", fontsize=8)
    ax.set_yticks(range(len(members)))
    ax.set_yticklabels([f"{lang}: {m.lexeme.lemma}" for lang, m in members], fontsize=9)
    for i, (_, member) in enumerate(members):
        for j, c in enumerate(classes):
            count = member.distribution.get(c, 0)
            if count:
                ax.text(j, i, str(count), ha="center", va="center", fontsize=8)
    ax.set_title(f"{report.semclass} [{report.role}] filler-class coverage")
    fig.colorbar(im, ax=ax, label="share of member's fillers")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
