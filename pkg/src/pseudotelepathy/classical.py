"""Deterministic classical strategies: values, losing-weight forms, symmetry classes.

A classical strategy is a mixture of deterministic profiles, one of the four
single-bit behaviours per player, so every classical value below is a maximum
over the ``4**n`` profiles.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .game import Game, GameError, build_c5_prime, dihedral_group, predicate_holds
from .lp import linprog_exact


class Behavior(enum.Enum):
    ZERO = "0"
    ONE = "1"
    ID = "Id"
    NOT = "Not"

    def output(self, x: int) -> int:
        if self is Behavior.ZERO:
            return 0
        if self is Behavior.ONE:
            return 1
        if self is Behavior.ID:
            return x
        return 1 - x

    def swapped(self) -> "Behavior":
        """Exchange Id and Not; constants are fixed."""
        return {Behavior.ID: Behavior.NOT, Behavior.NOT: Behavior.ID}.get(self, self)


BEHAVIORS = tuple(Behavior)
_ORDER = {b: k for k, b in enumerate(BEHAVIORS)}

Profile = tuple[Behavior, ...]


def all_profiles(n: int) -> Iterable[Profile]:
    return itertools.product(BEHAVIORS, repeat=n)


def answers(p: Sequence[Behavior], inputs: Sequence[int]) -> tuple[int, ...]:
    return tuple(b.output(x) for b, x in zip(p, inputs))


def win_probability(g: Game, p: Sequence[Behavior]) -> Fraction:
    if len(p) != g.n:
        raise GameError(f"profile has {len(p)} players, game has {g.n}")
    return sum(
        (q.weight for q in g.questions if predicate_holds(q, answers(p, q.inputs))),
        Fraction(0),
    )


def classical_value(g: Game) -> tuple[Fraction, list[Profile]]:
    """Exact classical value and every deterministic profile attaining it."""
    best = Fraction(-1)
    winners: list[Profile] = []
    for p in all_profiles(g.n):
        w = win_probability(g, p)
        if w > best:
            best, winners = w, [p]
        elif w == best:
            winners.append(p)
    return best, winners


def min_losing_weight(g: Game) -> Fraction:
    """Smallest losing weight over profiles, computed question by question."""
    return min(
        sum((q.weight for q in g.questions if not predicate_holds(q, answers(p, q.inputs))), Fraction(0))
        for p in all_profiles(g.n)
    )


# --- losing-weight forms on the eleven-question game ---------------------


@dataclass(frozen=True, order=True)
class LosingWeightForm:
    """Counts of lost questions per family: Qa (x), the Qi (y), the Q'i (z)."""

    c_a: int
    c_q: int
    c_qp: int

    def __post_init__(self):
        if not (0 <= self.c_a <= 1 and 0 <= self.c_q <= 5 and 0 <= self.c_qp <= 5):
            raise ValueError(f"coefficients out of range: {self}")

    def evaluate(self, x, y, z) -> Fraction:
        return self.c_a * Fraction(x) + self.c_q * Fraction(y) + self.c_qp * Fraction(z)

    def __str__(self) -> str:
        terms = []
        for c, var in ((self.c_a, "x"), (self.c_q, "y"), (self.c_qp, "z")):
            if c:
                terms.append(var if c == 1 else f"{c}{var}")
        return "+".join(terms) or "0"

    @classmethod
    def parse(cls, text: str) -> "LosingWeightForm":
        """Parse ``"x+2y+4z"`` style sums; anything else raises ValueError."""
        coeffs = {"x": 0, "y": 0, "z": 0}
        cleaned = text.replace(" ", "")
        if not re.fullmatch(r"\d*[xyz](\+\d*[xyz])*", cleaned):
            raise ValueError(f"unparseable form {text!r}")
        for term in cleaned.split("+"):
            var = term[-1]
            coeffs[var] += int(term[:-1]) if term[:-1] else 1
        return cls(coeffs["x"], coeffs["y"], coeffs["z"])


@lru_cache(maxsize=1)
def _family_game() -> Game:
    return build_c5_prime(1, 1, 1)


def _family(label: str) -> str:
    if label == "Qa":
        return "a"
    return "qp" if label.startswith("Q'") else "q"


def losing_questions(p: Sequence[Behavior]) -> list[str]:
    """Labels of the eleven-question game's questions that profile ``p`` loses."""
    g = _family_game()
    if len(p) != g.n:
        raise GameError("losing-weight forms are defined for five players")
    return [q.label for q in g.questions if not predicate_holds(q, answers(p, q.inputs))]


def losing_weight_form(p: Sequence[Behavior]) -> LosingWeightForm:
    counts = {"a": 0, "q": 0, "qp": 0}
    for label in losing_questions(p):
        counts[_family(label)] += 1
    return LosingWeightForm(counts["a"], counts["q"], counts["qp"])


@lru_cache(maxsize=1)
def distinct_forms() -> tuple[LosingWeightForm, ...]:
    return tuple(sorted({losing_weight_form(p) for p in all_profiles(5)}))


def min_form_value(x, y, z) -> Fraction:
    """Pointwise minimum of the losing weight over all 1024 profiles."""
    return min(f.evaluate(x, y, z) for f in distinct_forms())


# --- symmetry classes and run-length labels -----------------------------


def act(p: Sequence[Behavior], perm: Sequence[int]) -> Profile:
    out: list[Behavior] = [Behavior.ZERO] * len(p)
    for i, b in enumerate(p):
        out[perm[i]] = b
    return tuple(out)


def orbit(p: Sequence[Behavior]) -> frozenset[Profile]:
    return frozenset(act(p, perm) for perm in dihedral_group(len(p)))


def run_length_label(word: Sequence[Behavior]) -> str:
    """``(1, 1, Id, Id, Not)`` -> ``"1_2Id_2Not"``."""
    parts = []
    for b, run in itertools.groupby(word):
        k = len(list(run))
        parts.append(b.value if k == 1 else f"{b.value}_{k}")
    return "".join(parts)


def canonical_word(p: Sequence[Behavior]) -> Profile:
    """Orbit member with the fewest runs, ties broken by 0 < 1 < Id < Not."""

    def key(w: Profile):
        runs = sum(1 for _ in itertools.groupby(w))
        return runs, [_ORDER[b] for b in w]

    return min(orbit(p), key=key)


def canonical_label(p: Sequence[Behavior]) -> str:
    return run_length_label(canonical_word(p))


_TOKEN = re.compile(r"(Not|Id|0|1)(?:_(\d))?")


def parse_label(label: str, n: int = 5) -> Profile:
    """Expand a run-length label read around the cycle from player 1.

    Subscripts are single digits, so ``"1_2Not_20"`` is ``1 1 Not Not 0``.
    """
    word: list[Behavior] = []
    pos = 0
    while pos < len(label):
        m = _TOKEN.match(label, pos)
        if not m:
            raise ValueError(f"cannot read label {label!r} at position {pos}")
        word.extend([Behavior(m.group(1))] * int(m.group(2) or 1))
        pos = m.end()
    if len(word) != n:
        raise ValueError(f"label {label!r} describes {len(word)} players, expected {n}")
    return tuple(word)


@dataclass(frozen=True)
class SymmetryClass:
    representative: Profile
    members: frozenset[Profile]
    label: str
    form: LosingWeightForm

    @property
    def size(self) -> int:
        return len(self.members)


@lru_cache(maxsize=1)
def symmetry_classes() -> tuple[SymmetryClass, ...]:
    """Orbits of the 1024 five-player profiles under the symmetries of the 5-cycle."""
    seen: set[Profile] = set()
    classes = []
    for p in all_profiles(5):
        if p in seen:
            continue
        members = orbit(p)
        seen |= members
        rep = canonical_word(p)
        forms = {losing_weight_form(m) for m in members}
        if len(forms) != 1:
            raise AssertionError(f"losing weight not constant on the class of {rep}")
        classes.append(SymmetryClass(rep, members, run_length_label(rep), forms.pop()))
    classes.sort(key=lambda c: (c.form, c.label))
    return tuple(classes)


def class_of(p: Sequence[Behavior]) -> SymmetryClass:
    p = tuple(p)
    for c in symmetry_classes():
        if p in c.members:
            return c
    raise KeyError(p)


# --- maximin design of the question weights -----------------------------


@dataclass(frozen=True)
class WeightDesign:
    x: Fraction
    y: Fraction
    z: Fraction
    t: Fraction
    grid_t: Fraction
    grid_argmax: tuple[tuple[int, int, int], ...]
    grid_bound: int

    @property
    def weights(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.x, self.y, self.z

    @property
    def agrees(self) -> bool:
        """LP and grid search give the same optimum, and the grid finds the LP's witness."""
        witness = tuple(int(v) for v in self.weights)
        in_range = max(witness) <= self.grid_bound
        return self.grid_t == self.t and (not in_range or witness in self.grid_argmax)


def primitive(values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonnegative rational vector to coprime integers."""
    values = [Fraction(v) for v in values]
    lcm = math.lcm(*(v.denominator for v in values))
    ints = [int(v * lcm) for v in values]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(v // g) for v in ints)


def _normalised_min(forms, x, y, z) -> Fraction:
    return min(f.evaluate(x, y, z) for f in forms) / (x + 5 * y + 5 * z)


def optimize_weights(
    *, drop_prime: bool = False, tie_yz: bool = False, grid_bound: int = 20, seed: int | None = None
) -> WeightDesign:
    """Family weights maximising the smallest normalised losing weight.

    Solves ``max t`` subject to ``form(x, y, z) >= t`` for every distinct form,
    ``x + 5y + 5z = 1`` and ``x, y, z >= 0`` with the exact simplex, then
    rescales the optimiser to coprime integers. The result is checked by an
    independent scan of integer triples in ``[0, grid_bound]**3``.

    ``drop_prime`` forces ``z = 0`` (the six-question game); ``tie_yz`` adds
    ``y = z``.
    """
    forms = distinct_forms()
    if drop_prime:
        forms = tuple(sorted({LosingWeightForm(f.c_a, f.c_q, 0) for f in forms}))
    A_ub = [[-f.c_a, -f.c_q, -f.c_qp, 1] for f in forms]
    b_ub = [0] * len(forms)
    A_eq = [[1, 5, 5, 0]]
    b_eq = [1]
    if drop_prime:
        A_eq.append([0, 0, 1, 0])
        b_eq.append(0)
    if tie_yz:
        A_eq.append([0, 1, -1, 0])
        b_eq.append(0)
    res = linprog_exact([0, 0, 0, 1], A_eq, b_eq, A_ub, b_ub, seed=seed)
    x, y, z = primitive(res.x[:3])
    t = res.value

    best = Fraction(-1)
    argmax: list[tuple[int, int, int]] = []
    rng = range(grid_bound + 1)
    for gx, gy, gz in itertools.product(rng, rng, rng):
        if gx == gy == gz == 0 or (drop_prime and gz) or (tie_yz and gy != gz):
            continue
        if math.gcd(gx, gy, gz) != 1:
            continue
        v = _normalised_min(forms, gx, gy, gz)
        if v > best:
            best, argmax = v, [(gx, gy, gz)]
        elif v == best:
            argmax.append((gx, gy, gz))
    return WeightDesign(x, y, z, t, best, tuple(argmax), grid_bound)
