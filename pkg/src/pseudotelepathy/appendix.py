"""Check the published table of losing weights against direct evaluation.

Each printed row is a run-length label read around the cycle from player 1
(``1_2Id_2Not`` is players 1,2 answering 1, players 3,4 Id, player 5 Not) and a
symbolic losing weight. Rows are never corrected, only classified.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .classical import (
    LosingWeightForm,
    SymmetryClass,
    class_of,
    losing_questions,
    losing_weight_form,
    parse_label,
    symmetry_classes,
)

MATCH = "MATCH"
MISMATCH = "MISMATCH"
UNPARSEABLE = "UNPARSEABLE"

# verbatim, in printed order
PRINTED_ROWS: tuple[tuple[str, str], ...] = (
    ("0_5", "x"),
    ("1_5", "5y+5z"),
    ("Id_5", "x"),
    ("Not_5", "5y"),
    ("01_4", "x+2y+4z"),
    ("0Id_4", "x+4y+3z"),
    ("0Not_4", "x+2y+2z"),
    ("10_4", "3y+4z"),
    ("1Id_4", "3y+2z"),
    ("1Not_4", "y+2z"),
    ("Id0_4", "y+2z"),
    ("Id1_4", "3y+2z"),
    ("IdNot_4", "y+4z"),
    ("Not0_4", "x+2y+2z"),
    ("Not1_4", "x+4y+2z"),
    ("NotId_4", "x+2y+4z"),
    ("0_21_3", "4y+2z"),
    ("0_2Id_3", "3y+4z"),
    ("0_2Not_3", "x+4y+2z"),
    ("1_20_3", "x+2y+2z"),
    ("1_2Not_3", "x+2y+4z"),
    ("1_2Id_3", "y+2z"),
    ("Not_20_3", "x+4y+2z"),
    ("Not_21_3", "3y+4z"),
    ("Not_2Id_3", "3y+2z"),
    ("Id_20_3", "x+2y+4z"),
    ("Id_21_3", "y+2z"),
    ("Id_2Not_3", "x+2y+2z"),
    ("01Id_3", "x+4y+2z"),
    ("01Not_3", "y+2z"),
    ("0Id1_3", "x+2y+2z"),
    ("0IdNot_3", "3y+2z"),
    ("0Not1_3", "3y+4z"),
    ("0NotId_3", "3y+4z"),
    ("1Id0_3", "x+2y+4z"),
    ("1IdNot_3", "x+2y+4z"),
    ("1Not0_3", "3y+2z"),
    ("1NotId_3", "3y+4z"),
    ("NotId0_3", "y+2z"),
    ("NotId1_3", "x+4y+2z"),
    ("0_21_2Not", "x+4y+2z"),
    ("0_21_2Id", "y+2z"),
    ("0_2Not_21", "3y+4z"),
    ("0_2Not_2Id", "3y+4z"),
    ("0_2Id_21", "3y+2z"),
    ("0_2Id_2Not", "x+2y+2z"),
    ("1_2Id_2Not", "x+2y+4z"),
    ("1_2Id_20", "x+2y+4z"),
    ("1_2Not_20", "x+2y2z"),
    ("1_2Not_2Id", "3y+2z"),
    ("Not_2Id_21", "x+y+2z"),
    ("Not_2Id_20", "x+4y+2z"),
    ("Id_201Not", "x+y+2z"),
    ("0_21IdNot", "x+4y+2z"),
    ("1_20IdNot", "3y+2z"),
    ("Not_201Id", "x+4y+2z"),
)


@dataclass
class RowCheck:
    label: str
    printed: str
    flag: str
    computed: LosingWeightForm | None = None
    swapped: LosingWeightForm | None = None
    class_label: str = ""
    losing: list[str] = field(default_factory=list)
    note: str = ""

    @property
    def swapped_match(self) -> bool | None:
        """Whether the printed form matches with Id and Not exchanged."""
        if self.swapped is None or self.flag == UNPARSEABLE:
            return None
        return str(self.swapped) == str(LosingWeightForm.parse(self.printed))


@dataclass
class AppendixReport:
    classes: tuple[SymmetryClass, ...]
    rows: list[RowCheck]

    @property
    def profiles_covered(self) -> int:
        return sum(c.size for c in self.classes)

    def rows_for(self, class_label: str) -> list[RowCheck]:
        return [r for r in self.rows if r.class_label == class_label]

    def discrepancies(self) -> list[RowCheck]:
        return [r for r in self.rows if r.flag != MATCH]

    def counts(self) -> dict[str, int]:
        out = {MATCH: 0, MISMATCH: 0, UNPARSEABLE: 0}
        for r in self.rows:
            out[r.flag] += 1
        return out


def check_row(label: str, printed: str) -> RowCheck:
    try:
        profile = parse_label(label)
    except ValueError as exc:
        return RowCheck(label, printed, UNPARSEABLE, note=str(exc))
    computed = losing_weight_form(profile)
    swapped = losing_weight_form(tuple(b.swapped() for b in profile))
    row = RowCheck(label, printed, MATCH, computed, swapped, class_of(profile).label)
    try:
        expected = LosingWeightForm.parse(printed)
    except ValueError as exc:
        row.flag = UNPARSEABLE
        row.note = str(exc)
        row.losing = losing_questions(profile)
        return row
    if expected != computed:
        row.flag = MISMATCH
        row.losing = losing_questions(profile)
        if row.swapped_match:
            row.note = "matches with Id and Not exchanged"
    return row


def appendix_report() -> AppendixReport:
    return AppendixReport(symmetry_classes(), [check_row(label, form) for label, form in PRINTED_ROWS])


CLASS_COLUMNS = ("class", "size", "computed", "printed", "flag")
ROW_COLUMNS = ("printed_label", "class", "printed", "computed", "flag", "swapped_reading", "losing_questions")


def class_table(report: AppendixReport) -> list[dict[str, str]]:
    """One line per symmetry class, with any printed rows that land in it."""
    out = []
    for c in report.classes:
        hits = report.rows_for(c.label)
        out.append(
            {
                "class": c.label,
                "size": str(c.size),
                "computed": str(c.form),
                "printed": "; ".join(f"{r.label}: {r.printed}" for r in hits),
                "flag": "; ".join(sorted({r.flag for r in hits})),
            }
        )
    return out


def row_table(report: AppendixReport) -> list[dict[str, str]]:
    out = []
    for r in report.rows:
        swapped = "" if r.swapped is None else str(r.swapped) + (" (matches)" if r.swapped_match else "")
        out.append(
            {
                "printed_label": r.label,
                "class": r.class_label,
                "printed": r.printed,
                "computed": "" if r.computed is None else str(r.computed),
                "flag": r.flag,
                "swapped_reading": swapped,
                "losing_questions": " ".join(r.losing),
            }
        )
    return out


def to_csv(records: list[dict[str, str]], columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buf.getvalue()


def to_text(records: list[dict[str, str]], columns) -> str:
    widths = {c: max([len(c)] + [len(r[c]) for r in records]) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns).rstrip()]
    for r in records:
        lines.append("  ".join(r[c].ljust(widths[c]) for c in columns).rstrip())
    return "\n".join(lines) + "\n"
