"""Bookkeeping of per-question loss bounds under resource removal.

A :class:`BoundVector` holds, for every question, the coefficient ``c`` in
``P(S loses | Q) <= c * eps``. Removing a block of resources from one player on
the input they receive in an anchor question keeps the anchor's bound and adds
twice the anchor's bound to every other question where that player sees the
same input and is involved. Each step is checked against the side conditions
of that rule before it is applied; the engine verifies a declared schedule, it
does not search for one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .game import Game, GameError, build_c5, dihedral_group, question_image, v_compatible


class NotApplicable(ValueError):
    """A removal step violates a side condition of the transfer rule."""


@dataclass(frozen=True)
class BoundVector:
    labels: tuple[str, ...]
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if len(self.labels) != len(self.coeffs):
            raise ValueError("one coefficient per question")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("bound coefficients must be nonnegative")

    @classmethod
    def base(cls, g: Game) -> "BoundVector":
        return cls(tuple(g.labels), (Fraction(1),) * len(g))

    def __getitem__(self, label: str) -> Fraction:
        return self.coeffs[self.labels.index(label)]

    def replace(self, updates: dict[int, Fraction]) -> "BoundVector":
        coeffs = list(self.coeffs)
        for k, v in updates.items():
            coeffs[k] = v
        return BoundVector(self.labels, tuple(coeffs))

    def format(self) -> str:
        return "  ".join(f"{lab}:{_eps(c)}" for lab, c in zip(self.labels, self.coeffs))


def _eps(c: Fraction) -> str:
    if c == 1:
        return "eps"
    return f"{c}eps" if c.denominator == 1 else f"({c})eps"


@dataclass(frozen=True)
class RemovalStep:
    player: int
    anchor: str
    removed: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(self.removed))
        if self.player in self.removed:
            raise ValueError("a player does not share a resource with themselves")

    def describe(self) -> str:
        partners = ",".join(str(p + 1) for p in sorted(self.removed))
        return f"player {self.player + 1} drops {{{partners}}} on its input in {self.anchor}"


def applicability_violation(g: Game, step: RemovalStep) -> str | None:
    """Name the first side condition ``step`` violates, or ``None``.

    (i) the anchor's acceptance depends only on the player and partners outside
    the removed block; (ii) every other question where the player sees the
    anchor's input and is involved is player-compatible with the anchor.
    Questions where the player is not involved keep their bound without the
    rule, so they are not subject to (ii).
    """
    anchor = g.question(step.anchor)
    v = step.player
    if v not in anchor.involved:
        return f"player {v + 1} is not involved in {anchor.label}"
    clash = (anchor.involved - {v}) & step.removed
    if clash:
        return (
            f"(i) {anchor.label} depends on players {sorted(p + 1 for p in clash)} "
            "inside the removed block"
        )
    for q in g.questions:
        if q is anchor or q.inputs[v] != anchor.inputs[v] or v not in q.involved:
            continue
        if not v_compatible(g, q, anchor, v):
            return f"(ii) {q.label} is not {v + 1}-compatible with {anchor.label}"
    return None


def check_applicability(g: Game, b: BoundVector, step: RemovalStep) -> bool:
    return applicability_violation(g, step) is None


def apply_removal(g: Game, b: BoundVector, step: RemovalStep) -> BoundVector:
    problem = applicability_violation(g, step)
    if problem:
        raise NotApplicable(f"{step.describe()}: {problem}")
    k_anchor = g.index(step.anchor)
    anchor = g.questions[k_anchor]
    v = step.player
    extra = 2 * b.coeffs[k_anchor]
    updates = {
        k: b.coeffs[k] + extra
        for k, q in enumerate(g.questions)
        if k != k_anchor and q.inputs[v] == anchor.inputs[v] and v in q.involved
    }
    return b.replace(updates)


def mix(vectors: Sequence[BoundVector], weights: Sequence[Fraction] | None = None) -> BoundVector:
    """Convex combination; uniform when ``weights`` is omitted."""
    if not vectors:
        raise ValueError("nothing to mix")
    if weights is None:
        weights = [Fraction(1, len(vectors))] * len(vectors)
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(vectors):
        raise ValueError("one weight per vector")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError(f"mixing weights must be nonnegative and sum to 1, got {weights}")
    labels = vectors[0].labels
    if any(v.labels != labels for v in vectors):
        raise ValueError("vectors refer to different questions")
    coeffs = tuple(
        sum((w * v.coeffs[k] for w, v in zip(weights, vectors)), Fraction(0)) for k in range(len(labels))
    )
    return BoundVector(labels, coeffs)


# --- schedules ------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    name: str
    steps: tuple[RemovalStep, ...]


@dataclass(frozen=True)
class Stage:
    """Run each branch from the same start, then mix the results uniformly."""

    name: str
    branches: tuple[Branch, ...]


@dataclass(frozen=True)
class Schedule:
    stages: tuple[Stage, ...]
    game: str = "c5"


def schedule_from_dict(raw: dict) -> Schedule:
    """Players are 1-based in the config, as in the printed tables."""
    stages = []
    for st in raw["stages"]:
        branches = []
        for br in st["branches"]:
            steps = tuple(
                RemovalStep(int(s["player"]) - 1, s["anchor"], frozenset(int(p) - 1 for p in s["removed"]))
                for s in br["steps"]
            )
            branches.append(Branch(br["name"], steps))
        stages.append(Stage(st["name"], tuple(branches)))
    return Schedule(tuple(stages), raw.get("game", "c5"))


def load_schedule(path: str | Path | None = None) -> Schedule:
    if path is None:
        text = resources.files("pseudotelepathy").joinpath("data/c5_schedule.json").read_text()
    else:
        text = Path(path).read_text()
    return schedule_from_dict(json.loads(text))


@dataclass
class BoundTable:
    """Rows of one printed table: the branch results followed by their mix."""

    title: str
    rows: list[tuple[str, BoundVector]] = field(default_factory=list)


def run_schedule(g: Game, schedule: Schedule, start: BoundVector | None = None) -> tuple[BoundVector, list[BoundTable]]:
    current = start or BoundVector.base(g)
    tables = []
    for stage in schedule.stages:
        table = BoundTable(stage.name)
        results = []
        for branch in stage.branches:
            b = current
            for step in branch.steps:
                b = apply_removal(g, b, step)
            results.append(b)
            table.rows.append((branch.name, b))
        current = mix(results)
        table.rows.append((stage.name, current))
        tables.append(table)
    return current, tables


def c5_schedule(g: Game | None = None) -> tuple[Schedule, BoundVector, list[BoundTable]]:
    """Players 1, 5 and 2 stop using their resources on input 0, order-averaged per player."""
    g = g or build_c5()
    schedule = load_schedule()
    final, tables = run_schedule(g, schedule)
    return schedule, final, tables


def orbit_images(g: Game, b: BoundVector) -> list[BoundVector]:
    images = []
    for perm in dihedral_group(g.n):
        coeffs = [Fraction(0)] * len(g)
        for k in range(len(g)):
            coeffs[question_image(g, k, perm)] = b.coeffs[k]
        images.append(BoundVector(b.labels, tuple(coeffs)))
    return images


def orbit_average(g: Game | None = None, b: BoundVector | None = None) -> BoundVector:
    """Uniform mix over the ten images of ``b`` under rotations and reflections of the cycle."""
    g = g or build_c5()
    if b is None:
        _, b, _ = c5_schedule(g)
    return mix(orbit_images(g, b))


@dataclass(frozen=True)
class Separation:
    epsilon: Fraction
    weighted_diagnostic: Fraction
    max_coefficient: Fraction
    weighted_coefficient: Fraction


def derive_separation(g: Game, b: BoundVector, restricted_loss_lower_bound: Fraction) -> Separation:
    """Lower bound on eps from ``max_coeff * eps >= restricted loss``.

    The weighted figure uses ``sum_Q w(Q) * coeff(Q)`` instead of the largest
    coefficient; it is reported separately and is not the headline bound.
    """
    loss = Fraction(restricted_loss_lower_bound)
    top = max(b.coeffs)
    if top == 0:
        raise GameError("all bound coefficients are zero")
    weighted = sum((q.weight * c for q, c in zip(g.questions, b.coeffs)), Fraction(0))
    return Separation(loss / top, loss / weighted, top, weighted)
