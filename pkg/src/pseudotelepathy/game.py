"""Parity games with binary inputs: questions, predicates and the cycle-graph builders.

Players are 0-based internally. Anything printed for humans (labels, tables,
spec files) uses 1-based player numbers, so player ``i`` in a table is index
``i - 1`` here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

Bits = tuple[int, ...]


class GameError(ValueError):
    """Malformed game, question or answer."""


class GameSpecError(GameError):
    """A game-spec file could not be parsed; carries the position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def as_fraction(value) -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions. Floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise GameError(f"weights must be exact rationals, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise GameError(f"not a rational: {value!r}") from exc


def parse_bits(text: str) -> Bits:
    if not text or any(c not in "01" for c in text):
        raise GameError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class Question:
    inputs: Bits
    involved: frozenset[int]
    parity: int
    weight: Fraction
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(b) for b in self.inputs))
        object.__setattr__(self, "involved", frozenset(self.involved))
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if any(b not in (0, 1) for b in self.inputs):
            raise GameError(f"inputs must be bits: {self.inputs}")
        if not self.involved:
            raise GameError("a question needs at least one involved player")
        if any(not 0 <= v < len(self.inputs) for v in self.involved):
            raise GameError(f"involved players out of range: {sorted(self.involved)}")
        if self.parity not in (0, 1):
            raise GameError(f"parity must be 0 or 1, got {self.parity}")
        if self.weight < 0:
            raise GameError(f"negative weight {self.weight}")

    @property
    def n(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class Game:
    n: int
    questions: tuple[Question, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "questions", tuple(self.questions))
        if not self.questions:
            raise GameError("a game needs at least one question")
        for q in self.questions:
            if q.n != self.n:
                raise GameError(f"question {q.label or q.inputs} has {q.n} inputs, game has {self.n} players")
        total = sum(q.weight for q in self.questions)
        if total != 1:
            raise GameError(f"question weights sum to {total}, not 1")

    def __len__(self) -> int:
        return len(self.questions)

    def index(self, label: str) -> int:
        for k, q in enumerate(self.questions):
            if q.label == label:
                return k
        raise KeyError(label)

    def question(self, label: str) -> Question:
        return self.questions[self.index(label)]

    @property
    def labels(self) -> list[str]:
        return [q.label for q in self.questions]


def predicate_holds(q: Question, a: Sequence[int]) -> bool:
    """True iff the XOR of the involved players' answers equals the question's parity."""
    if len(a) != q.n:
        raise GameError(f"answer has {len(a)} bits, question has {q.n} players")
    return sum(a[v] for v in q.involved) % 2 == q.parity


def _cycle_neighbourhood(i: int, n: int) -> frozenset[int]:
    return frozenset({(i - 1) % n, i, (i + 1) % n})


def _cycle_question(i: int, n: int = 5) -> Bits:
    return tuple(1 if k == i else 0 for k in range(n))


def _cycle_question_prime(i: int, n: int = 5) -> Bits:
    return tuple(1 if k in ((i - 1) % n, (i + 1) % n) else 0 for k in range(n))


def build_c5() -> Game:
    """The five-player cycle game: Q1..Q5 then Qa, all with weight 1/6."""
    w = Fraction(1, 6)
    qs = [
        Question(_cycle_question(i), _cycle_neighbourhood(i, 5), 0, w, f"Q{i + 1}")
        for i in range(5)
    ]
    qs.append(Question((1,) * 5, frozenset(range(5)), 1, w, "Qa"))
    return Game(5, tuple(qs))


def build_c5_prime(x, y, z) -> Game:
    """The eleven-question variant with family weights ``x`` (Qa), ``y`` (each Qi), ``z`` (each Q'i).

    Weights are normalised by ``x + 5y + 5z``. Questions whose weight comes out
    zero are dropped, so ``build_c5_prime(1, 0, 0)`` is the single question Qa.
    """
    x, y, z = (as_fraction(v) for v in (x, y, z))
    if min(x, y, z) < 0:
        raise GameError("family weights must be nonnegative")
    total = x + 5 * y + 5 * z
    if total == 0:
        raise GameError("family weights must not all be zero")
    qs = []
    if x:
        qs.append(Question((1,) * 5, frozenset(range(5)), 1, x / total, "Qa"))
    if y:
        qs.extend(
            Question(_cycle_question(i), _cycle_neighbourhood(i, 5), 0, y / total, f"Q{i + 1}")
            for i in range(5)
        )
    if z:
        qs.extend(
            Question(_cycle_question_prime(i), frozenset(range(5)) - {i}, 0, z / total, f"Q'{i + 1}")
            for i in range(5)
        )
    return Game(5, tuple(qs))


def is_unique_game(
    g: Game, predicate: Callable[[Question, Sequence[int]], bool] = predicate_holds
) -> bool:
    """Check that every involved player's answer is forced once the others are fixed.

    This is evaluated by brute force over answer vectors, so it also catches an
    ``involved`` set that lists a player the predicate ignores.
    """
    for q in g.questions:
        for v in q.involved:
            for rest in itertools.product((0, 1), repeat=g.n - 1):
                a0 = rest[:v] + (0,) + rest[v:]
                a1 = rest[:v] + (1,) + rest[v:]
                if predicate(q, a0) + predicate(q, a1) != 1:
                    return False
    return True


def v_compatible(g: Game, q_prime: Question, q: Question, v: int) -> bool:
    """Whether ``q_prime`` is ``v``-compatible with ``q``.

    Either ``v`` sees different inputs in the two questions, or every other
    player involved in ``q`` sees the same input in both or is not involved in
    ``q_prime``.
    """
    if q_prime.inputs[v] != q.inputs[v]:
        return True
    return all(
        q_prime.inputs[u] == q.inputs[u] or u not in q_prime.involved
        for u in q.involved
        if u != v
    )


# --- player symmetries ---------------------------------------------------

Permutation = tuple[int, ...]


def dihedral_group(n: int) -> list[Permutation]:
    """Automorphisms of the n-cycle as maps ``perm[i] = image of player i``.

    Rotations come first (``k`` steps), then reflections ``i -> k - i``.
    """
    rotations = [tuple((i + k) % n for i in range(n)) for k in range(n)]
    reflections = [tuple((k - i) % n for i in range(n)) for k in range(n)]
    return rotations + reflections


def permute_bits(bits: Sequence[int], perm: Permutation) -> Bits:
    """Move the bit of player ``i`` to position ``perm[i]``."""
    out = [0] * len(bits)
    for i, b in enumerate(bits):
        out[perm[i]] = b
    return tuple(out)


def question_image(g: Game, k: int, perm: Permutation) -> int:
    """Index of the question that ``perm`` maps question ``k`` onto.

    Raises :class:`GameError` when the image is not in the game, i.e. ``perm``
    is not a symmetry of ``g``.
    """
    q = g.questions[k]
    inputs = permute_bits(q.inputs, perm)
    involved = frozenset(perm[v] for v in q.involved)
    for j, other in enumerate(g.questions):
        if (
            other.inputs == inputs
            and other.involved == involved
            and other.parity == q.parity
            and other.weight == q.weight
        ):
            return j
    raise GameError(f"permutation {perm} does not map {q.label} into the game")


# --- game-spec files -----------------------------------------------------


def game_to_dict(g: Game) -> dict:
    return {
        "n": g.n,
        "questions": [
            {
                "inputs": format_bits(q.inputs),
                "involved": sorted(v + 1 for v in q.involved),
                "parity": q.parity,
                "weight": f"{q.weight.numerator}/{q.weight.denominator}",
                **({"label": q.label} if q.label else {}),
            }
            for q in g.questions
        ],
    }


def dumps_game(g: Game) -> str:
    return json.dumps(game_to_dict(g), indent=2)


def loads_game(text: str) -> Game:
    """Parse the JSON game-spec format; involved players are 1-based in the file."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameSpecError(exc.msg, exc.lineno, exc.colno) from exc
    try:
        n = raw["n"]
        entries = raw["questions"]
    except (KeyError, TypeError) as exc:
        raise GameSpecError(f"missing top-level field {exc}") from exc
    if not isinstance(n, int) or n < 1:
        raise GameSpecError(f"'n' must be a positive integer, got {n!r}")
    questions = []
    for k, entry in enumerate(entries):
        try:
            inputs = parse_bits(entry["inputs"])
            involved = frozenset(int(v) - 1 for v in entry["involved"])
            questions.append(
                Question(
                    inputs,
                    involved,
                    int(entry["parity"]),
                    as_fraction(entry["weight"]),
                    entry.get("label", f"q{k + 1}"),
                )
            )
        except KeyError as exc:
            raise GameSpecError(f"question {k + 1}: missing field {exc}") from exc
        except (GameError, TypeError, ValueError) as exc:
            raise GameSpecError(f"question {k + 1}: {exc}") from exc
    try:
        return Game(n, tuple(questions))
    except GameError as exc:
        raise GameSpecError(str(exc)) from exc


def load_game(path: str | Path) -> Game:
    return loads_game(Path(path).read_text())


def all_answers(n: int) -> Iterable[Bits]:
    return itertools.product((0, 1), repeat=n)
